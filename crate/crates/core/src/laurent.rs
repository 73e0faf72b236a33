//! Laurent polynomials in `x = q^{1/4}` with Gaussian-integer coefficients.
//!
//! Every scalar of the braiding and fusion matrices lives in this ring. The
//! exponent stored for a term is in quarter-powers of `q`, so `q^{1/2}` is the
//! monomial `x^2` and `q` is `x^4`.
//!
//! Terms are kept sorted by ascending exponent with no zero coefficients, so
//! structural equality coincides with ring equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("division is not exact in the Laurent ring")]
    DivisionNotExact,
    #[error("division by zero")]
    DivideByZero,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid polynomial JSON: {0}")]
    Json(String),
}

/// A Gaussian integer `re + im*i`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gaussian {
    pub re: BigInt,
    pub im: BigInt,
}

impl Gaussian {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        Gaussian {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn real(re: impl Into<BigInt>) -> Self {
        Gaussian::new(re, 0)
    }

    pub fn i() -> Self {
        Gaussian::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    /// True for the four units `1, -1, i, -i`.
    pub fn is_unit(&self) -> bool {
        (self.re.abs().is_one() && self.im.is_zero()) || (self.re.is_zero() && self.im.abs().is_one())
    }

    pub fn conj(&self) -> Gaussian {
        Gaussian {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Exact quotient, if one exists in `Z[i]`.
    pub fn checked_div(&self, rhs: &Gaussian) -> Option<Gaussian> {
        let n = rhs.norm();
        if n.is_zero() {
            return None;
        }
        let t = self * &rhs.conj();
        let (qr, rr) = t.re.div_rem(&n);
        let (qi, ri) = t.im.div_rem(&n);
        if rr.is_zero() && ri.is_zero() {
            Some(Gaussian { re: qr, im: qi })
        } else {
            None
        }
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl fmt::Debug for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}{:+}i)", self.re, self.im)
    }
}

impl Add for &Gaussian {
    type Output = Gaussian;
    fn add(self, rhs: &Gaussian) -> Gaussian {
        Gaussian {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &Gaussian {
    type Output = Gaussian;
    fn sub(self, rhs: &Gaussian) -> Gaussian {
        Gaussian {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &Gaussian {
    type Output = Gaussian;
    fn mul(self, rhs: &Gaussian) -> Gaussian {
        Gaussian {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &Gaussian {
    type Output = Gaussian;
    fn neg(self) -> Gaussian {
        Gaussian {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl AddAssign<&Gaussian> for Gaussian {
    fn add_assign(&mut self, rhs: &Gaussian) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

/// Laurent polynomial in `x = q^{1/4}` over `Z[i]`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RingElement {
    // ascending exponent, no zero coefficients
    terms: Vec<(i64, Gaussian)>,
}

impl RingElement {
    pub fn zero() -> Self {
        RingElement { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, Gaussian::real(1))
    }

    pub fn from_int(c: i64) -> Self {
        Self::monomial(0, Gaussian::real(c))
    }

    pub fn i() -> Self {
        Self::monomial(0, Gaussian::i())
    }

    pub fn monomial(exp: i64, coeff: Gaussian) -> Self {
        if coeff.is_zero() {
            Self::zero()
        } else {
            RingElement {
                terms: vec![(exp, coeff)],
            }
        }
    }

    /// `x^e = q^{e/4}`.
    pub fn x_pow(e: i64) -> Self {
        Self::monomial(e, Gaussian::real(1))
    }

    /// `q^{num/den}`; `None` unless the exponent is a whole number of quarters.
    pub fn q_pow(num: i64, den: i64) -> Option<Self> {
        if den == 0 || (4 * num) % den != 0 {
            return None;
        }
        Some(Self::x_pow(4 * num / den))
    }

    /// Builds from arbitrary `(exponent, coefficient)` pairs, combining duplicates.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, Gaussian)>,
    {
        let mut acc: BTreeMap<i64, Gaussian> = BTreeMap::new();
        for (e, c) in terms {
            *acc.entry(e).or_default() += &c;
        }
        RingElement {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn terms(&self) -> &[(i64, Gaussian)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// Coefficient of `x^e`.
    pub fn coeff(&self, e: i64) -> Gaussian {
        match self.terms.binary_search_by_key(&e, |(k, _)| *k) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Gaussian::default(),
        }
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.first().map(|(e, _)| *e)
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.last().map(|(e, _)| *e)
    }

    /// All coefficients have zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.im.is_zero())
    }

    /// All coefficients have zero real part (zero counts as imaginary).
    pub fn is_imaginary(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.re.is_zero())
    }

    /// Single term with a unit coefficient, i.e. an invertible element.
    pub fn is_unit_monomial(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].1.is_unit()
    }

    /// Multiplicative inverse of a unit monomial.
    pub fn inverse_monomial(&self) -> Option<RingElement> {
        if !self.is_unit_monomial() {
            return None;
        }
        let (e, c) = &self.terms[0];
        let inv = Gaussian::real(1).checked_div(c)?;
        Some(RingElement::monomial(-e, inv))
    }

    /// Integer power; negative exponents require a unit monomial.
    pub fn pow(&self, k: i64) -> Option<RingElement> {
        let base = if k < 0 {
            self.inverse_monomial()?
        } else {
            self.clone()
        };
        let mut acc = RingElement::one();
        let mut b = base;
        let mut n = k.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &b;
            }
            n >>= 1;
            if n > 0 {
                b = &b * &b;
            }
        }
        Some(acc)
    }

    pub fn scale(&self, c: &Gaussian) -> RingElement {
        if c.is_zero() {
            return RingElement::zero();
        }
        RingElement {
            terms: self.terms.iter().map(|(e, k)| (*e, k * c)).collect(),
        }
    }

    /// Multiplies by `x^shift`.
    pub fn shift(&self, shift: i64) -> RingElement {
        RingElement {
            terms: self.terms.iter().map(|(e, c)| (e + shift, c.clone())).collect(),
        }
    }

    /// Quotient `u` with `u * divisor == self`, by long division from the top exponent.
    pub fn exact_div(&self, divisor: &RingElement) -> Result<RingElement, LaurentError> {
        if divisor.is_zero() {
            return Err(LaurentError::DivideByZero);
        }
        if self.is_zero() {
            return Ok(RingElement::zero());
        }
        let (d_top, d_lead) = divisor.terms.last().cloned().expect("nonzero");
        let d_bottom = divisor.min_exp().expect("nonzero");
        // any exact quotient has its lowest term at this exponent
        let floor = self.min_exp().expect("nonzero") - d_bottom;
        let mut rem = self.clone();
        let mut quotient = Vec::new();
        while let Some((r_top, r_lead)) = rem.terms.last().cloned() {
            let e = r_top - d_top;
            if e < floor {
                return Err(LaurentError::DivisionNotExact);
            }
            let c = r_lead.checked_div(&d_lead).ok_or(LaurentError::DivisionNotExact)?;
            rem = &rem - &divisor.shift(e).scale(&c);
            quotient.push((e, c));
        }
        quotient.reverse();
        Ok(RingElement { terms: quotient })
    }

    /// Numerical value at `x = x0`.
    pub fn eval_numeric(&self, x0: Complex64) -> Result<Complex64, LaurentError> {
        if x0 == Complex64::new(0.0, 0.0) {
            return Err(LaurentError::DivideByZero);
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| c.to_complex() * x0.powi(*e as i32))
            .sum())
    }

    /// `{"den":4,"terms":[[e,re,im],...]}` with ascending exponents.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(e, c)| Value::Array(vec![json!(e), big_to_json(&c.re), big_to_json(&c.im)]))
            .collect();
        json!({ "den": 4, "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<RingElement, LaurentError> {
        let err = |m: &str| LaurentError::Json(m.to_string());
        let obj = v.as_object().ok_or_else(|| err("expected an object"))?;
        let den = obj
            .get("den")
            .and_then(Value::as_i64)
            .ok_or_else(|| err("missing integer \"den\""))?;
        let scale = match den {
            1 => 4,
            2 => 2,
            4 => 1,
            _ => return Err(err("\"den\" must be 1, 2 or 4")),
        };
        let terms = obj
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| err("missing array \"terms\""))?;
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            let t = t
                .as_array()
                .filter(|t| t.len() == 3)
                .ok_or_else(|| err("each term must be [e, re, im]"))?;
            let e = t[0].as_i64().ok_or_else(|| err("exponent must be an integer"))?;
            let e = e.checked_mul(scale).ok_or_else(|| err("exponent out of range"))?;
            let re = json_to_big(&t[1]).ok_or_else(|| err("re must be an integer"))?;
            let im = json_to_big(&t[2]).ok_or_else(|| err("im must be an integer"))?;
            out.push((e, Gaussian { re, im }));
        }
        Ok(RingElement::from_terms(out))
    }

    pub fn parse(text: &str) -> Result<RingElement, LaurentError> {
        Parser::new(text).parse_poly()
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

fn big_to_json(b: &BigInt) -> Value {
    match b.to_i64() {
        Some(v) => json!(v),
        None => Value::Number(serde_json::Number::from_str(&b.to_string()).expect("integer literal")),
    }
}

fn json_to_big(v: &Value) -> Option<BigInt> {
    let n = v.as_number()?;
    BigInt::from_str(&n.to_string()).ok()
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElement({self})")
    }
}

fn merge_with<F>(a: &[(i64, Gaussian)], b: &[(i64, Gaussian)], f: F) -> RingElement
where
    F: Fn(&Gaussian, &Gaussian) -> Gaussian,
{
    let zero = Gaussian::default();
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => x.0.cmp(&y.0),
            (Some(_), None) => Ordering::Less,
            _ => Ordering::Greater,
        };
        let (e, c) = match ord {
            Ordering::Less => {
                i += 1;
                (a[i - 1].0, f(&a[i - 1].1, &zero))
            }
            Ordering::Greater => {
                j += 1;
                (b[j - 1].0, f(&zero, &b[j - 1].1))
            }
            Ordering::Equal => {
                i += 1;
                j += 1;
                (a[i - 1].0, f(&a[i - 1].1, &b[j - 1].1))
            }
        };
        if !c.is_zero() {
            out.push((e, c));
        }
    }
    RingElement { terms: out }
}

impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        merge_with(&self.terms, &rhs.terms, |x, y| x + y)
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        merge_with(&self.terms, &rhs.terms, |x, y| x - y)
    }
}

impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        if self.is_zero() || rhs.is_zero() {
            return RingElement::zero();
        }
        if rhs.terms.len() == 1 {
            let (e, c) = &rhs.terms[0];
            return RingElement {
                terms: self
                    .terms
                    .iter()
                    .map(|(k, d)| (k + e, d * c))
                    .filter(|(_, d)| !d.is_zero())
                    .collect(),
            };
        }
        if self.terms.len() == 1 {
            return rhs * self;
        }
        let mut acc: BTreeMap<i64, Gaussian> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                *acc.entry(e1 + e2).or_default() += &(c1 * c2);
            }
        }
        RingElement {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RingElement {
            type Output = RingElement;
            fn $m(self, rhs: RingElement) -> RingElement {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RingElement> for RingElement {
            type Output = RingElement;
            fn $m(self, rhs: &RingElement) -> RingElement {
                (&self).$m(rhs)
            }
        }
        impl $tr<RingElement> for &RingElement {
            type Output = RingElement;
            fn $m(self, rhs: RingElement) -> RingElement {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        -&self
    }
}

impl AddAssign<&RingElement> for RingElement {
    fn add_assign(&mut self, rhs: &RingElement) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&RingElement> for RingElement {
    fn sub_assign(&mut self, rhs: &RingElement) {
        *self = &*self - rhs;
    }
}

impl std::iter::Sum for RingElement {
    fn sum<I: Iterator<Item = RingElement>>(iter: I) -> RingElement {
        iter.fold(RingElement::zero(), |a, b| a + b)
    }
}

impl From<i64> for RingElement {
    fn from(c: i64) -> Self {
        RingElement::from_int(c)
    }
}

// Rendering: descending exponents, " + " / " - " separators, q-powers reduced.

fn render_exponent(e: i64) -> String {
    let g = e.gcd(&4);
    let (num, den) = (e / g, 4 / g);
    if den == 1 {
        if num == 1 {
            "q".to_string()
        } else {
            format!("q^{{{num}}}")
        }
    } else {
        format!("q^{{{num}/{den}}}")
    }
}

fn render_coeff(c: &Gaussian) -> String {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => c.re.to_string(),
        (true, false) => {
            if c.im.is_one() {
                "i".to_string()
            } else {
                format!("{}i", c.im)
            }
        }
        (false, false) => {
            let sign = if c.im.is_negative() { '-' } else { '+' };
            let mag = c.im.abs();
            if mag.is_one() {
                format!("({}{}i)", c.re, sign)
            } else {
                format!("({}{}{}i)", c.re, sign, mag)
            }
        }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.re.is_negative() || (c.re.is_zero() && c.im.is_negative());
            let c = if negative { -c } else { c.clone() };
            match (k == 0, negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            if *e == 0 {
                f.write_str(&render_coeff(&c))?;
            } else if c.is_one() {
                f.write_str(&render_exponent(*e))?;
            } else {
                write!(f, "{}*{}", render_coeff(&c), render_exponent(*e))?;
            }
        }
        Ok(())
    }
}

impl FromStr for RingElement {
    type Err = LaurentError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RingElement::parse(s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, LaurentError> {
        Err(LaurentError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), LaurentError> {
        if self.eat(b) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", b as char))
        }
    }

    fn digits(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).ok()?;
        BigInt::from_str(s).ok()
    }

    fn small_int(&mut self) -> Result<i64, LaurentError> {
        let neg = self.eat(b'-');
        if !neg {
            self.eat(b'+');
        }
        let Some(v) = self.digits() else {
            return self.err("expected an integer");
        };
        let Some(v) = v.to_i64() else {
            return self.err("exponent out of range");
        };
        Ok(if neg { -v } else { v })
    }

    fn parse_poly(&mut self) -> Result<RingElement, LaurentError> {
        if self.peek().is_none() {
            return self.err("empty input");
        }
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let negative = match self.peek() {
                None if !first => break,
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                _ if first => false,
                _ => return self.err("expected '+' or '-' between terms"),
            };
            first = false;
            let (e, c) = self.parse_term()?;
            terms.push((e, if negative { -&c } else { c }));
        }
        Ok(RingElement::from_terms(terms))
    }

    fn parse_term(&mut self) -> Result<(i64, Gaussian), LaurentError> {
        let coeff = match self.peek() {
            Some(b'q') => None,
            Some(_) => Some(self.parse_coeff()?),
            None => return self.err("expected a term"),
        };
        let star = self.eat(b'*');
        match self.peek() {
            Some(b'q') => {
                let e = self.parse_qpow()?;
                Ok((e, coeff.unwrap_or_else(|| Gaussian::real(1))))
            }
            _ if star => self.err("expected 'q' after '*'"),
            _ => match coeff {
                Some(c) => Ok((0, c)),
                None => self.err("expected a term"),
            },
        }
    }

    fn parse_coeff(&mut self) -> Result<Gaussian, LaurentError> {
        if self.eat(b'(') {
            let neg = self.eat(b'-');
            let (re_first, rest) = self.parse_signless_part()?;
            let first = if neg { -&re_first } else { re_first };
            let out = if rest {
                first
            } else if self.peek() == Some(b'+') || self.peek() == Some(b'-') {
                let neg2 = self.peek() == Some(b'-');
                self.pos += 1;
                let (second, is_imag) = self.parse_signless_part()?;
                if !is_imag {
                    return self.err("expected an imaginary part like '2i'");
                }
                let second = if neg2 { -&second } else { second };
                &first + &second
            } else {
                first
            };
            self.expect(b')')?;
            return Ok(out);
        }
        let (c, _) = self.parse_signless_part()?;
        Ok(c)
    }

    /// `n`, `ni` or `i`; returns the value and whether it was imaginary.
    fn parse_signless_part(&mut self) -> Result<(Gaussian, bool), LaurentError> {
        if self.eat(b'i') {
            return Ok((Gaussian::i(), true));
        }
        let Some(v) = self.digits() else {
            return self.err("expected a coefficient");
        };
        if self.src.get(self.pos) == Some(&b'i') {
            self.pos += 1;
            Ok((Gaussian { re: BigInt::zero(), im: v }, true))
        } else {
            Ok((Gaussian { re: v, im: BigInt::zero() }, false))
        }
    }

    fn parse_qpow(&mut self) -> Result<i64, LaurentError> {
        self.expect(b'q')?;
        if !self.eat(b'^') {
            return Ok(4);
        }
        let (num, den) = if self.eat(b'{') {
            let num = self.small_int()?;
            let den = if self.eat(b'/') {
                self.skip_ws();
                let at = self.pos;
                let d = self.small_int()?;
                if !matches!(d, 1 | 2 | 4) {
                    self.pos = at;
                    return self.err("exponent denominator must be 1, 2 or 4");
                }
                d
            } else {
                1
            };
            self.expect(b'}')?;
            (num, den)
        } else {
            (self.small_int()?, 1)
        };
        let scale = 4 / den;
        match num.checked_mul(scale) {
            Some(e) => Ok(e),
            None => self.err("exponent out of range"),
        }
    }
}
