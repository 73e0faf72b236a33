//! Closed diagrams as tapes of Morse events, and their evaluation by
//! contracting `M`, `M^-1`, `B` and `B^-1` one event at a time.
//!
//! `Pos(i)` applies `B` and `Neg(i)` applies `B^-1` to strands `i, i+1`.
//! Read as a braid generator between upward strands, `B` is a negative
//! crossing, so a positive letter `σ_j` of a braid word becomes `Neg(j-1)`.

use std::collections::hash_map::Entry;
use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use rustc_hash::FxHashMap;

use thiserror::Error;

use crate::algebra::AlgebraSpec;
use crate::braiding::{self, BraidMatrix, BraidingError, Matrices};
use crate::laurent::{Gaussian, RingElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TangleError {
    #[error("invalid tape at event {index}: {reason}")]
    InvalidTape { index: usize, reason: String },
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("generator {generator} out of range for {strands} strands")]
    GeneratorOutOfRange { generator: i64, strands: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MorseEvent {
    Cup(usize),
    Cap(usize),
    Pos(usize),
    Neg(usize),
}

impl fmt::Display for MorseEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorseEvent::Cup(i) => write!(f, "cup {i}"),
            MorseEvent::Cap(i) => write!(f, "cap {i}"),
            MorseEvent::Pos(i) => write!(f, "pos {i}"),
            MorseEvent::Neg(i) => write!(f, "neg {i}"),
        }
    }
}

/// A validated sequence of events starting and ending with no strands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tape {
    events: Vec<MorseEvent>,
    /// Strand count before each event, plus the final count.
    strand_profile: Vec<usize>,
}

impl Tape {
    pub fn new(events: Vec<MorseEvent>) -> Result<Tape, TangleError> {
        let bad = |index: usize, reason: &str| TangleError::InvalidTape {
            index,
            reason: reason.to_string(),
        };
        let mut width = 0usize;
        let mut profile = Vec::with_capacity(events.len() + 1);
        for (k, ev) in events.iter().enumerate() {
            profile.push(width);
            width = match *ev {
                MorseEvent::Cup(i) if i <= width => width + 2,
                MorseEvent::Cup(_) => return Err(bad(k, "cup position beyond the open strands")),
                MorseEvent::Cap(i) | MorseEvent::Pos(i) | MorseEvent::Neg(i) if i + 2 > width => {
                    return Err(bad(k, "needs strands i and i+1"))
                }
                MorseEvent::Cap(_) => width - 2,
                MorseEvent::Pos(_) | MorseEvent::Neg(_) => width,
            };
        }
        profile.push(width);
        if width != 0 {
            return Err(bad(events.len(), "tape must end with no open strands"));
        }
        Ok(Tape {
            events,
            strand_profile: profile,
        })
    }

    pub fn events(&self) -> &[MorseEvent] {
        &self.events
    }

    pub fn strand_profile(&self) -> &[usize] {
        &self.strand_profile
    }

    pub fn max_width(&self) -> usize {
        self.strand_profile.iter().copied().max().unwrap_or(0)
    }

    /// A kink on the strand at position `strand` just before event `at`:
    /// `cup strand+1`, a crossing on `strand, strand+1`, `cap strand+1`.
    /// Both passes run in the same direction, so with `Neg` (as for a positive
    /// braid letter) the curl has writhe +1.
    pub fn insert_curl(&self, at: usize, strand: usize, positive: bool) -> Result<Tape, TangleError> {
        let width = *self.strand_profile.get(at).ok_or(TangleError::InvalidTape {
            index: at,
            reason: "insertion point past the end".to_string(),
        })?;
        if strand >= width {
            return Err(TangleError::InvalidTape {
                index: at,
                reason: format!("no strand {strand} among {width}"),
            });
        }
        let x = if positive { MorseEvent::Neg(strand) } else { MorseEvent::Pos(strand) };
        let mut events = self.events.clone();
        events.splice(at..at, [MorseEvent::Cup(strand + 1), x, MorseEvent::Cap(strand + 1)]);
        Tape::new(events)
    }

    /// One event per line: `cup i`, `cap i`, `pos i` or `neg i`. Blank lines
    /// and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Tape, TangleError> {
        let mut events = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |msg: &str| TangleError::Parse {
                pos: ln + 1,
                msg: msg.to_string(),
            };
            let mut parts = line.split_whitespace();
            let op = parts.next().unwrap_or("");
            let arg = parts.next().ok_or_else(|| perr("missing strand position"))?;
            if parts.next().is_some() {
                return Err(perr("trailing input"));
            }
            let i: usize = arg.parse().map_err(|_| perr("strand position must be a non-negative integer"))?;
            events.push(match op.to_ascii_lowercase().as_str() {
                "cup" => MorseEvent::Cup(i),
                "cap" => MorseEvent::Cap(i),
                "pos" => MorseEvent::Pos(i),
                "neg" => MorseEvent::Neg(i),
                _ => return Err(perr("expected cup, cap, pos or neg")),
            });
        }
        Tape::new(events)
    }

    pub fn to_text(&self) -> String {
        self.events.iter().map(|e| format!("{e}\n")).collect()
    }
}

/// Braid word on `strands` strands; `j > 0` is `σ_j`, `j < 0` its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    pub strands: usize,
    pub generators: Vec<i64>,
}

impl BraidWord {
    pub fn new(strands: usize, generators: Vec<i64>) -> Result<BraidWord, TangleError> {
        if strands == 0 {
            return Err(TangleError::Parse {
                pos: 0,
                msg: "a braid needs at least one strand".into(),
            });
        }
        for &g in &generators {
            if g == 0 || g.unsigned_abs() as usize >= strands {
                return Err(TangleError::GeneratorOutOfRange { generator: g, strands });
            }
        }
        Ok(BraidWord { strands, generators })
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            generators: self.generators.iter().rev().map(|g| -g).collect(),
        }
    }

    pub fn concat(&self, other: &BraidWord) -> BraidWord {
        let mut generators = self.generators.clone();
        generators.extend_from_slice(&other.generators);
        BraidWord {
            strands: self.strands.max(other.strands),
            generators,
        }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self.generators.iter().map(i64::to_string).collect();
        f.write_str(&words.join(" "))
    }
}

pub fn parse_braid(word: &str, strands: usize) -> Result<BraidWord, TangleError> {
    let mut gens = Vec::new();
    let mut offset = 0;
    for tok in word.split_whitespace() {
        let pos = word[offset..].find(tok).map_or(offset, |p| p + offset);
        offset = pos + tok.len();
        let g: i64 = tok.parse().map_err(|_| TangleError::Parse {
            pos,
            msg: format!("{tok:?} is not an integer"),
        })?;
        if g == 0 {
            return Err(TangleError::Parse {
                pos,
                msg: "generator 0 does not exist".into(),
            });
        }
        gens.push(g);
    }
    BraidWord::new(strands, gens)
}

/// Trace closure: `k` nested cups, the braid on the left `k` strands, then
/// the matching caps.
pub fn closure_tape(braid: &BraidWord) -> Tape {
    let k = braid.strands;
    let mut events: Vec<MorseEvent> = (0..k).map(MorseEvent::Cup).collect();
    for &g in &braid.generators {
        let i = g.unsigned_abs() as usize - 1;
        events.push(if g > 0 { MorseEvent::Neg(i) } else { MorseEvent::Pos(i) });
    }
    events.extend((0..k).rev().map(MorseEvent::Cap));
    Tape::new(events).expect("closure of a valid braid is a valid tape")
}

/// Exponent sum, the writhe of the closure.
pub fn writhe(braid: &BraidWord) -> i64 {
    braid.generators.iter().map(|g| g.signum()).sum()
}

/// Basis tuple along a horizontal slice, one label order per strand.
trait Key: Clone + Eq + Hash {
    fn empty() -> Self;
    fn at(&self, i: usize) -> u8;
    fn cup(&self, i: usize, a: u8, b: u8) -> Self;
    fn cap(&self, i: usize) -> Self;
    fn set_pair(&self, i: usize, x: u8, y: u8) -> Self;
}

impl Key for Vec<u8> {
    fn empty() -> Self {
        Vec::new()
    }
    fn at(&self, i: usize) -> u8 {
        self[i]
    }
    fn cup(&self, i: usize, a: u8, b: u8) -> Self {
        let mut nt = Vec::with_capacity(self.len() + 2);
        nt.extend_from_slice(&self[..i]);
        nt.push(a);
        nt.push(b);
        nt.extend_from_slice(&self[i..]);
        nt
    }
    fn cap(&self, i: usize) -> Self {
        let mut nt = Vec::with_capacity(self.len() - 2);
        nt.extend_from_slice(&self[..i]);
        nt.extend_from_slice(&self[i + 2..]);
        nt
    }
    fn set_pair(&self, i: usize, x: u8, y: u8) -> Self {
        let mut nt = self.clone();
        nt[i] = x;
        nt[i + 1] = y;
        nt
    }
}

/// Up to 16 labels packed a byte each, position 0 in the low byte.
const PACKED_WIDTH: usize = 16;

fn low_bits(n: usize) -> u128 {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

fn shr(t: u128, n: usize) -> u128 {
    if n >= 128 {
        0
    } else {
        t >> n
    }
}

fn shl(t: u128, n: usize) -> u128 {
    if n >= 128 {
        0
    } else {
        t << n
    }
}

impl Key for u128 {
    fn empty() -> Self {
        0
    }
    fn at(&self, i: usize) -> u8 {
        (self >> (8 * i)) as u8
    }
    fn cup(&self, i: usize, a: u8, b: u8) -> Self {
        let s = 8 * i;
        (self & low_bits(s)) | (a as u128) << s | (b as u128) << (s + 8) | shl(shr(*self, s), s + 16)
    }
    fn cap(&self, i: usize) -> Self {
        let s = 8 * i;
        (self & low_bits(s)) | shl(shr(*self, s + 16), s)
    }
    fn set_pair(&self, i: usize, x: u8, y: u8) -> Self {
        let s = 8 * i;
        (self & !(0xffff << s)) | (x as u128) << s | (y as u128) << (s + 8)
    }
}

/// Amplitude arithmetic; `None` means the representation overflowed.
trait Amp: Clone + Sized {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn times(&self, c: &Self) -> Option<Self>;
    fn add_to(&mut self, v: &Self) -> Option<()>;
}

impl Amp for RingElement {
    fn zero() -> Self {
        RingElement::zero()
    }
    fn one() -> Self {
        RingElement::one()
    }
    fn is_zero(&self) -> bool {
        RingElement::is_zero(self)
    }
    fn times(&self, c: &Self) -> Option<Self> {
        Some(self * c)
    }
    fn add_to(&mut self, v: &Self) -> Option<()> {
        *self += v;
        Some(())
    }
}

/// Same ring with machine-word coefficients: `(exponent, re, im)`, ascending.
#[derive(Clone, Debug, PartialEq)]
struct Small(Vec<(i64, i128, i128)>);

impl Small {
    fn from_exact(r: &RingElement) -> Option<Small> {
        let terms = r
            .terms()
            .iter()
            .map(|(e, c)| Some((*e, i128::try_from(&c.re).ok()?, i128::try_from(&c.im).ok()?)))
            .collect::<Option<Vec<_>>>()?;
        Some(Small(terms))
    }

    fn to_exact(&self) -> RingElement {
        RingElement::from_terms(
            self.0
                .iter()
                .map(|&(e, re, im)| (e, Gaussian::new(BigInt::from(re), BigInt::from(im)))),
        )
    }
}

fn cmul(a: (i128, i128), b: (i128, i128)) -> Option<(i128, i128)> {
    let re = a.0.checked_mul(b.0)?.checked_sub(a.1.checked_mul(b.1)?)?;
    let im = a.0.checked_mul(b.1)?.checked_add(a.1.checked_mul(b.0)?)?;
    Some((re, im))
}

impl Amp for Small {
    fn zero() -> Self {
        Small(Vec::new())
    }
    fn one() -> Self {
        Small(vec![(0, 1, 0)])
    }
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    fn times(&self, c: &Self) -> Option<Self> {
        if let [(e, re, im)] = c.0[..] {
            let mut out = Vec::with_capacity(self.0.len());
            for &(k, a, b) in &self.0 {
                let (x, y) = cmul((a, b), (re, im))?;
                if x != 0 || y != 0 {
                    out.push((k + e, x, y));
                }
            }
            return Some(Small(out));
        }
        let mut acc = Small(Vec::new());
        for &(e, re, im) in &c.0 {
            acc.add_to(&self.times(&Small(vec![(e, re, im)]))?)?;
        }
        Some(acc)
    }
    fn add_to(&mut self, v: &Self) -> Option<()> {
        let (a, b) = (&self.0, &v.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j]);
                j += 1;
            } else {
                let re = a[i].1.checked_add(b[j].1)?;
                let im = a[i].2.checked_add(b[j].2)?;
                if re != 0 || im != 0 {
                    out.push((a[i].0, re, im));
                }
                i += 1;
                j += 1;
            }
        }
        self.0 = out;
        Some(())
    }
}

/// `M`, `M^-1`, `B`, `B^-1` in one amplitude representation.
struct Coeffs<A> {
    fusion: Vec<A>,
    fusion_inv: Vec<A>,
    braid: Vec<Vec<(u8, u8, A)>>,
    braid_inv: Vec<Vec<(u8, u8, A)>>,
}

impl<A: Amp> Coeffs<A> {
    fn build(mats: &Matrices, conv: impl Fn(&RingElement) -> Option<A>) -> Option<Coeffs<A>> {
        let rows = |b: &BraidMatrix| -> Option<Vec<Vec<(u8, u8, A)>>> {
            b.rows
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|(dst, c)| {
                            let (x, y) = b.split(*dst);
                            Some((x as u8, y as u8, conv(c)?))
                        })
                        .collect()
                })
                .collect()
        };
        Some(Coeffs {
            fusion: mats.fusion.entries.iter().map(&conv).collect::<Option<_>>()?,
            fusion_inv: mats.fusion.inverse_entries.iter().map(&conv).collect::<Option<_>>()?,
            braid: rows(&mats.braid)?,
            braid_inv: rows(&mats.braid_inv)?,
        })
    }
}

type State<K, A> = FxHashMap<K, A>;

fn accumulate<K: Key, A: Amp>(out: &mut State<K, A>, key: K, v: A) -> Option<()> {
    if v.is_zero() {
        return Some(());
    }
    match out.entry(key) {
        Entry::Occupied(mut e) => {
            e.get_mut().add_to(&v)?;
            if e.get().is_zero() {
                e.remove();
            }
        }
        Entry::Vacant(e) => {
            e.insert(v);
        }
    }
    Some(())
}

fn contract<K: Key, A: Amp>(tape: &Tape, m: u32, dim: u32, cf: &Coeffs<A>) -> Option<A> {
    let mut state: State<K, A> = State::default();
    state.insert(K::empty(), A::one());
    for ev in tape.events() {
        let mut out = State::with_capacity_and_hasher(state.len(), Default::default());
        match *ev {
            MorseEvent::Cup(i) => {
                for (t, amp) in &state {
                    for a in 0..=m {
                        let v = amp.times(&cf.fusion_inv[a as usize])?;
                        accumulate(&mut out, t.cup(i, a as u8, (m - a) as u8), v)?;
                    }
                }
            }
            MorseEvent::Cap(i) => {
                for (t, amp) in &state {
                    let a = t.at(i) as u32;
                    if a + t.at(i + 1) as u32 != m {
                        continue;
                    }
                    accumulate(&mut out, t.cap(i), amp.times(&cf.fusion[a as usize])?)?;
                }
            }
            MorseEvent::Pos(i) | MorseEvent::Neg(i) => {
                let op = if matches!(ev, MorseEvent::Pos(_)) { &cf.braid } else { &cf.braid_inv };
                for (t, amp) in &state {
                    let src = t.at(i) as u32 * dim + t.at(i + 1) as u32;
                    for (x, y, c) in &op[src as usize] {
                        accumulate(&mut out, t.set_pair(i, *x, *y), amp.times(c)?)?;
                    }
                }
            }
        }
        state = out;
    }
    Some(state.remove(&K::empty()).unwrap_or_else(A::zero))
}

/// A spec together with its matrices, built once and shared by evaluations.
#[derive(Debug, Clone)]
pub struct Model {
    pub spec: AlgebraSpec,
    pub mats: Matrices,
}

impl Model {
    pub fn new(spec: AlgebraSpec) -> Result<Model, BraidingError> {
        let mats = braiding::build_all(&spec)?;
        Ok(Model { spec, mats })
    }

    /// `⟨K⟩` for a closed tape.
    pub fn evaluate(&self, tape: &Tape) -> RingElement {
        let (m, dim) = (self.spec.m, self.spec.dim);
        // machine-word coefficients first; redo exactly if anything overflows
        if let Some(cf) = Coeffs::build(&self.mats, Small::from_exact) {
            let fast = if tape.max_width() <= PACKED_WIDTH {
                contract::<u128, Small>(tape, m, dim, &cf)
            } else {
                contract::<Vec<u8>, Small>(tape, m, dim, &cf)
            };
            if let Some(v) = fast {
                return v.to_exact();
            }
        }
        let cf = Coeffs::build(&self.mats, |r| Some(r.clone())).expect("exact conversion");
        contract::<Vec<u8>, RingElement>(tape, m, dim, &cf).expect("exact arithmetic does not overflow")
    }

    /// `⟨closure⟩` of a braid word.
    pub fn evaluate_braid(&self, braid: &BraidWord) -> RingElement {
        self.evaluate(&closure_tape(braid))
    }

    /// `α^{-w} ⟨closure⟩`.
    pub fn normalized_invariant(&self, braid: &BraidWord) -> RingElement {
        let raw = self.evaluate_braid(braid);
        let w = writhe(braid);
        &self.spec.alpha.pow(-w).expect("alpha is a unit monomial") * &raw
    }
}
