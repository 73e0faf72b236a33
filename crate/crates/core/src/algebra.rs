//! Weight systems and scalar constants for the vector representations of
//! B_n, C_n and D_n.
//!
//! Internally a weight is addressed by its order `o(a)` in `0..=m`; the
//! [`WeightLabel`] type only matters at the edges (parsing, display, JSON),
//! where D_n's extra label `n-1'` needs its own spelling.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::RingElement;

/// Largest rank accepted by [`make_spec`]; keeps orders inside a `u8`.
pub const MAX_RANK: u32 = 60;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("unsupported rank {rank} for family {family}")]
    UnsupportedRank { family: Family, rank: u32 },
    #[error("invalid weight label {0}")]
    InvalidLabel(String),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    B,
    C,
    D,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
        })
    }
}

impl FromStr for Family {
    type Err = AlgebraError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "B" | "b" => Ok(Family::B),
            "C" | "c" => Ok(Family::C),
            "D" | "d" => Ok(Family::D),
            other => Err(AlgebraError::UnknownFamily(other.to_string())),
        }
    }
}

/// A weight `λ^index`, or `λ^{index}'` when `primed` (D_n only, index = n-1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightLabel {
    pub index: u32,
    pub primed: bool,
}

impl WeightLabel {
    pub fn plain(index: u32) -> Self {
        WeightLabel { index, primed: false }
    }

    pub fn primed(index: u32) -> Self {
        WeightLabel { index, primed: true }
    }
}

impl fmt::Display for WeightLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.primed {
            write!(f, "{}p", self.index)
        } else {
            write!(f, "{}", self.index)
        }
    }
}

impl FromStr for WeightLabel {
    type Err = AlgebraError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let (digits, primed) = match t.strip_suffix('p') {
            Some(d) => (d, true),
            None => (t, false),
        };
        digits
            .parse::<u32>()
            .map(|index| WeightLabel { index, primed })
            .map_err(|_| AlgebraError::InvalidLabel(s.to_string()))
    }
}

impl Serialize for WeightLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.primed {
            s.serialize_str(&self.to_string())
        } else {
            s.serialize_u32(self.index)
        }
    }
}

impl<'de> Deserialize<'de> for WeightLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u32),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(index) => Ok(WeightLabel::plain(index)),
            Raw::S(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub family: Family,
    pub rank: u32,
    /// `dim - 1`; complementary weights have orders summing to `m`.
    pub m: u32,
    pub dim: u32,
    /// Labels listed by increasing order, so `labels[o]` has order `o`.
    pub labels: Vec<WeightLabel>,
    pub gamma: RingElement,
    pub z: RingElement,
    pub alpha: RingElement,
    pub delta: RingElement,
}

pub fn make_spec(family: Family, rank: u32) -> Result<AlgebraSpec, AlgebraError> {
    let min = if family == Family::D { 2 } else { 1 };
    if rank < min || rank > MAX_RANK {
        return Err(AlgebraError::UnsupportedRank { family, rank });
    }
    let n = rank as i64;
    let (dim, gamma_exp, alpha) = match family {
        Family::B => (2 * rank + 1, -2, RingElement::x_pow(4 * n)),
        Family::C => (2 * rank, -1, -RingElement::x_pow(2 * n + 1)),
        Family::D => (2 * rank, -2, RingElement::x_pow(2 * (2 * n - 1))),
    };
    let labels = match family {
        Family::B | Family::C => (0..dim).map(WeightLabel::plain).collect(),
        Family::D => {
            let mut v: Vec<_> = (0..rank).map(WeightLabel::plain).collect();
            v.push(WeightLabel::primed(rank - 1));
            v.extend((rank..2 * rank - 1).map(WeightLabel::plain));
            v
        }
    };
    let gamma = RingElement::x_pow(gamma_exp);
    let z = &RingElement::x_pow(-gamma_exp) - &gamma;
    let alpha_inv = alpha.inverse_monomial().expect("alpha is a unit monomial");
    let delta = (&alpha - &alpha_inv)
        .exact_div(&z)
        .expect("alpha - alpha^-1 is divisible by z")
        + RingElement::one();
    Ok(AlgebraSpec {
        family,
        rank,
        m: dim - 1,
        dim,
        labels,
        gamma,
        z,
        alpha,
        delta,
    })
}

impl AlgebraSpec {
    /// Short identifier such as `B3`.
    pub fn id(&self) -> String {
        format!("{}{}", self.family, self.rank)
    }

    pub fn gamma_inv(&self) -> RingElement {
        self.gamma.inverse_monomial().expect("gamma is a monomial")
    }

    pub fn alpha_inv(&self) -> RingElement {
        self.alpha.inverse_monomial().expect("alpha is a unit monomial")
    }

    /// Order of a label, the position used everywhere inside the crate.
    pub fn order(&self, a: WeightLabel) -> Result<u32, AlgebraError> {
        self.labels
            .iter()
            .position(|l| *l == a)
            .map(|o| o as u32)
            .ok_or_else(|| AlgebraError::InvalidLabel(a.to_string()))
    }

    pub fn label(&self, order: u32) -> Result<WeightLabel, AlgebraError> {
        self.labels
            .get(order as usize)
            .copied()
            .ok_or_else(|| AlgebraError::InvalidLabel(format!("order {order}")))
    }

    pub fn complement(&self, a: WeightLabel) -> Result<WeightLabel, AlgebraError> {
        let o = self.order(a)?;
        self.label(self.m - o)
    }

    /// Inner product of two weights, in units of 1/2.
    pub fn inner_product(&self, s: WeightLabel, t: WeightLabel) -> Result<i32, AlgebraError> {
        Ok(self.inner_product_ord(self.order(s)?, self.order(t)?))
    }

    /// Inner product by order, in units of 1/2.
    pub fn inner_product_ord(&self, s: u32, t: u32) -> i32 {
        let comp = s + t == self.m;
        match self.family {
            Family::B => match (comp, s == t) {
                (false, true) => 2,
                (false, false) => 0,
                (true, true) => 0,
                (true, false) => -2,
            },
            Family::C => {
                if s == t {
                    1
                } else if comp {
                    -1
                } else {
                    0
                }
            }
            Family::D => {
                if comp {
                    -2
                } else if s == t {
                    2
                } else {
                    0
                }
            }
        }
    }

    pub fn size(&self) -> usize {
        self.dim as usize
    }
}
