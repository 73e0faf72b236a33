//! Fusion matrix `M`, braiding `B` and its inverse on `V ⊗ V`.
//!
//! Weights are addressed by order, and a basis pair `(a, b)` of `V ⊗ V` by
//! the flat index `a * dim + b`. `B` is stored column-wise: the row of a
//! source pair lists the pairs it maps to, so `B_{ab}^{cd}` is the
//! coefficient of `(c, d)` in `B (a, b)`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::algebra::{AlgebraSpec, Family};
use crate::laurent::{Gaussian, RingElement};
use crate::linalg::Dense;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidingError {
    #[error("B * B^-1 differs from the identity on basis pair ({0}, {1})")]
    InverseCheckFailed(u32, u32),
    #[error("fusion entry M_{{{0},{1}}} is not invertible")]
    SingularFusion(u32, u32),
    #[error("matrix dimension {got} does not match spec dimension {want}")]
    DimensionMismatch { got: u32, want: u32 },
}

/// Antidiagonal fusion matrix: `M_{a, m-a}` and the creation entries `M^{a, m-a}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionMatrix {
    pub dim: u32,
    /// `entries[a] = M_{a, m-a}`, which is also the vector `ζ`.
    pub entries: Vec<RingElement>,
    /// `inverse_entries[a] = M^{a, m-a}`.
    pub inverse_entries: Vec<RingElement>,
}

impl FusionMatrix {
    pub fn m(&self) -> u32 {
        self.dim - 1
    }

    /// `M_{ab}`, zero off the antidiagonal.
    pub fn entry(&self, a: u32, b: u32) -> RingElement {
        if a + b == self.m() {
            self.entries[a as usize].clone()
        } else {
            RingElement::zero()
        }
    }

    /// `M^{ab}`, zero off the antidiagonal.
    pub fn inverse_entry(&self, a: u32, b: u32) -> RingElement {
        if a + b == self.m() {
            self.inverse_entries[a as usize].clone()
        } else {
            RingElement::zero()
        }
    }

    pub fn zeta(&self) -> &[RingElement] {
        &self.entries
    }

    /// Copy with `M_{a, m-a}` replaced; the creation entries are left alone.
    pub fn with_entry(&self, a: u32, value: RingElement) -> FusionMatrix {
        let mut out = self.clone();
        out.entries[a as usize] = value;
        out
    }
}

/// Sparse operator on `V ⊗ V`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidMatrix {
    pub dim: u32,
    /// `rows[src]` lists `(dst, coefficient)` sorted by `dst`, no zeros.
    pub rows: Vec<Vec<(u32, RingElement)>>,
}

impl BraidMatrix {
    fn empty(dim: u32) -> Self {
        BraidMatrix {
            dim,
            rows: vec![Vec::new(); (dim * dim) as usize],
        }
    }

    pub fn side_dim(&self) -> u32 {
        self.dim * self.dim
    }

    pub fn pair(&self, a: u32, b: u32) -> u32 {
        a * self.dim + b
    }

    pub fn split(&self, p: u32) -> (u32, u32) {
        (p / self.dim, p % self.dim)
    }

    /// Image of a basis pair.
    pub fn row(&self, src: u32) -> &[(u32, RingElement)] {
        &self.rows[src as usize]
    }

    pub fn get(&self, src: u32, dst: u32) -> RingElement {
        let row = &self.rows[src as usize];
        match row.binary_search_by_key(&dst, |(d, _)| *d) {
            Ok(i) => row[i].1.clone(),
            Err(_) => RingElement::zero(),
        }
    }

    fn add_to(&mut self, src: u32, dst: u32, value: &RingElement) {
        if value.is_zero() {
            return;
        }
        let row = &mut self.rows[src as usize];
        match row.binary_search_by_key(&dst, |(d, _)| *d) {
            Ok(i) => {
                row[i].1 += value;
                if row[i].1.is_zero() {
                    row.remove(i);
                }
            }
            Err(i) => row.insert(i, (dst, value.clone())),
        }
    }

    fn set(&mut self, src: u32, dst: u32, value: RingElement) {
        let row = &mut self.rows[src as usize];
        match row.binary_search_by_key(&dst, |(d, _)| *d) {
            Ok(i) if value.is_zero() => {
                row.remove(i);
            }
            Ok(i) => row[i].1 = value,
            Err(_) if value.is_zero() => {}
            Err(i) => row.insert(i, (dst, value)),
        }
    }

    /// Copy with one coefficient overwritten (zero removes it).
    pub fn with_entry(&self, src: u32, dst: u32, value: RingElement) -> BraidMatrix {
        let mut out = self.clone();
        out.set(src, dst, value);
        out
    }

    pub fn nonzeros(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, u32, &RingElement)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(s, row)| row.iter().map(move |(d, c)| (s as u32, *d, c)))
    }

    /// Applies the operator to a sparse vector indexed by pair.
    pub fn apply(&self, v: &[(u32, RingElement)]) -> Vec<(u32, RingElement)> {
        let mut acc: std::collections::BTreeMap<u32, RingElement> = Default::default();
        for (src, amp) in v {
            for (dst, c) in self.row(*src) {
                *acc.entry(*dst).or_default() += &(amp * c);
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// Lines `a,b -> c,d : <poly>` in label order.
    pub fn dump(&self, spec: &AlgebraSpec) -> String {
        let mut out = String::new();
        for (s, d, c) in self.entries() {
            let (a, b) = self.split(s);
            let (x, y) = self.split(d);
            let l = |o: u32| spec.labels[o as usize].to_string();
            let _ = writeln!(out, "{},{} -> {},{} : {}", l(a), l(b), l(x), l(y), c);
        }
        out
    }

    /// Pairs `(a, m-a)` listed as `(m,0), (m-1,1), ..., (0,m)`.
    pub fn critical_basis(&self) -> Vec<u32> {
        let m = self.dim - 1;
        (0..=m).rev().map(|a| self.pair(a, m - a)).collect()
    }

    /// Critical block as a dense matrix in the descending basis; column `j`
    /// is the image of the `j`-th basis pair.
    pub fn critical_block(&self) -> Dense {
        let basis = self.critical_basis();
        basis
            .iter()
            .map(|&dst| basis.iter().map(|&src| self.get(src, dst)).collect())
            .collect()
    }
}

fn q_quarter(e: i64) -> RingElement {
    RingElement::x_pow(e)
}

pub fn build_fusion(spec: &AlgebraSpec) -> FusionMatrix {
    let n = spec.rank as i64;
    let entries: Vec<RingElement> = (0..=spec.m as i64)
        .map(|a| match spec.family {
            Family::B => {
                if a < n {
                    q_quarter(2 * n - 2 * a - 1)
                } else if a == n {
                    RingElement::one()
                } else {
                    q_quarter(2 * n - 2 * a + 1)
                }
            }
            Family::C => {
                if a < n {
                    RingElement::monomial(n - a, Gaussian::new(0, -1))
                } else {
                    RingElement::monomial(n - 1 - a, Gaussian::new(0, 1))
                }
            }
            Family::D => {
                if a < n {
                    q_quarter(2 * (n - 1 - a))
                } else {
                    q_quarter(2 * (n - a))
                }
            }
        })
        .collect();
    let m = spec.m as usize;
    // M^{b, m-b} M_{m-b, b} = 1
    let inverse_entries = (0..=m)
        .map(|b| entries[m - b].inverse_monomial().expect("fusion entries are unit monomials"))
        .collect();
    FusionMatrix {
        dim: spec.dim,
        entries,
        inverse_entries,
    }
}

/// Off-diagonal wall-crossing coefficient for source `(A, m-A)` and target
/// `(m-b, b)` with `A < b`. When `b = m - A` this is the diagonal value.
pub fn beta_off_diagonal(spec: &AlgebraSpec, a: u32, b: u32) -> RingElement {
    let n = spec.rank as i64;
    let (a, b) = (a as i64, b as i64);
    let z = &spec.z;
    let g_diff = &spec.gamma - &spec.gamma_inv();
    match spec.family {
        Family::B => {
            let s = (a - n) * (b - n);
            if s > 0 {
                z * q_quarter(-2 * (a - b))
            } else if s == 0 {
                z * q_quarter(-2 * (a - b) - 1)
            } else {
                let v = z * q_quarter(-2 * (a - b + 1));
                if a == 2 * n - b {
                    v + g_diff
                } else {
                    v
                }
            }
        }
        Family::C => {
            let s = (2 * a - 2 * n + 1) * (2 * b - 2 * n + 1);
            if s > 0 {
                z * q_quarter(-(a - b))
            } else {
                let v = -(z * q_quarter(-(a - b - 1)));
                if a == 2 * n - 1 - b {
                    v + g_diff
                } else {
                    v
                }
            }
        }
        Family::D => {
            let s = (2 * a - 2 * n + 1) * (2 * b - 2 * n + 1);
            if s > 0 {
                z * q_quarter(-2 * (a - b))
            } else {
                let v = z * q_quarter(-2 * (a - b + 1));
                if a == 2 * n - 1 - b {
                    v + g_diff
                } else {
                    v
                }
            }
        }
    }
}

/// Diagonal coefficient on `(A, m-A)` for `2A < m`, from the constraint that
/// the critical column sums reproduce the twist eigenvalue.
pub fn beta_diagonal(spec: &AlgebraSpec, a: u32) -> RingElement {
    let g = &spec.gamma;
    let gi = spec.gamma_inv();
    let g_diff = g - &gi;
    let shift = g.pow(2 * a as i64 - spec.m as i64 + 1).expect("gamma is a unit");
    if spec.m.is_multiple_of(2) {
        &g_diff * &(RingElement::one() - shift)
    } else {
        // x^{-2} for x = M_{k+1,k} M^{k,k+1} at the middle of the block
        let x_inv_sq = match spec.family {
            Family::C => q_quarter(4),
            _ => RingElement::one(),
        };
        &g_diff + &(&(&gi - &(&x_inv_sq * g)) * &shift)
    }
}

pub fn build_braiding(spec: &AlgebraSpec, fusion: &FusionMatrix) -> Result<BraidMatrix, BraidingError> {
    if fusion.dim != spec.dim {
        return Err(BraidingError::DimensionMismatch {
            got: fusion.dim,
            want: spec.dim,
        });
    }
    let dim = spec.dim;
    let m = spec.m;
    let gamma = &spec.gamma;
    let gamma_inv = spec.gamma_inv();
    let g_diff = gamma - &gamma_inv;
    let mut out = BraidMatrix::empty(dim);
    for a in 0..dim {
        for b in 0..dim {
            let src = out.pair(a, b);
            if a + b != m {
                if a == b {
                    out.add_to(src, src, gamma);
                } else {
                    out.add_to(src, out.pair(b, a), &RingElement::one());
                    if a < b {
                        out.add_to(src, src, &g_diff);
                    }
                }
                continue;
            }
            let skew = if a == b { RingElement::one() } else { gamma_inv.clone() };
            out.add_to(src, out.pair(b, a), &skew);
            for c in a + 1..=m {
                let v = if c == m - a {
                    beta_diagonal(spec, a)
                } else {
                    beta_off_diagonal(spec, a, c)
                };
                out.add_to(src, out.pair(m - c, c), &v);
            }
        }
    }
    Ok(out)
}

/// `B^-1 = B - z (E - I)` with `E_{ac}^{bd} = M_{ac} M^{bd}`, checked against `B`.
pub fn build_braiding_inverse(
    braiding: &BraidMatrix,
    fusion: &FusionMatrix,
    spec: &AlgebraSpec,
) -> Result<BraidMatrix, BraidingError> {
    let inv = skein_inverse(braiding, fusion, spec);
    check_inverse(braiding, &inv)?;
    Ok(inv)
}

/// The skein formula without the product check.
pub fn skein_inverse(braiding: &BraidMatrix, fusion: &FusionMatrix, spec: &AlgebraSpec) -> BraidMatrix {
    let mut inv = braiding.clone();
    let m = spec.m;
    for p in 0..braiding.side_dim() {
        inv.add_to(p, p, &spec.z);
    }
    for a in 0..=m {
        let src = inv.pair(a, m - a);
        let z_ma = &spec.z * &fusion.entries[a as usize];
        for b in 0..=m {
            let dst = inv.pair(b, m - b);
            inv.add_to(src, dst, &-(&z_ma * &fusion.inverse_entries[b as usize]));
        }
    }
    inv
}

/// `B^-1 (B v) = v` on every basis pair.
pub fn check_inverse(braiding: &BraidMatrix, inverse: &BraidMatrix) -> Result<(), BraidingError> {
    for p in 0..braiding.side_dim() {
        let image = inverse.apply(braiding.row(p));
        let ok = image.len() == 1 && image[0].0 == p && image[0].1.is_one();
        if !ok {
            let (a, b) = braiding.split(p);
            return Err(BraidingError::InverseCheckFailed(a, b));
        }
    }
    Ok(())
}

/// Everything needed to evaluate diagrams for one spec.
#[derive(Debug, Clone)]
pub struct Matrices {
    pub fusion: FusionMatrix,
    pub braid: BraidMatrix,
    pub braid_inv: BraidMatrix,
}

pub fn build_all(spec: &AlgebraSpec) -> Result<Matrices, BraidingError> {
    let fusion = build_fusion(spec);
    let braid = build_braiding(spec, &fusion)?;
    let braid_inv = build_braiding_inverse(&braid, &fusion, spec)?;
    Ok(Matrices {
        fusion,
        braid,
        braid_inv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_spec;

    fn p(s: &str) -> RingElement {
        s.parse().unwrap()
    }

    fn spec(f: Family, n: u32) -> AlgebraSpec {
        make_spec(f, n).unwrap()
    }

    #[test]
    fn fusion_examples() {
        let b2 = build_fusion(&spec(Family::B, 2));
        assert_eq!(b2.entry(0, 4), p("q^{3/4}"));
        assert!(b2.entry(0, 3).is_zero());
        let c2 = build_fusion(&spec(Family::C, 2));
        assert_eq!(c2.entry(2, 1), p("i*q^{-1/4}"));
        let d3s = spec(Family::D, 3);
        let d3 = build_fusion(&d3s);
        // orders 2 and 3 are the labels 2 and 2'
        assert_eq!(d3s.labels[2].to_string(), "2");
        assert_eq!(d3s.labels[3].to_string(), "2p");
        assert!(d3.entry(2, 3).is_one());
        assert!(d3.entry(3, 2).is_one());
        let b1 = build_fusion(&spec(Family::B, 1));
        assert_eq!(b1.zeta(), &[p("q^{1/4}"), p("1"), p("q^{-1/4}")]);
    }

    #[test]
    fn b1_noncritical_block() {
        let s = spec(Family::B, 1);
        let f = build_fusion(&s);
        let b = build_braiding(&s, &f).unwrap();
        let (j10, j01) = (b.pair(1, 0), b.pair(0, 1));
        // columns are images: B J_{1,0} = J_{0,1}, B J_{0,1} = J_{1,0} + (γ - γ^-1) J_{0,1}
        assert!(b.get(j10, j10).is_zero());
        assert!(b.get(j10, j01).is_one());
        assert!(b.get(j01, j10).is_one());
        assert_eq!(b.get(j01, j01), p("q^{-1/2} - q^{1/2}"));
    }

    #[test]
    fn b2_equal_pair() {
        let s = spec(Family::B, 2);
        let b = build_braiding(&s, &build_fusion(&s)).unwrap();
        let j11 = b.pair(1, 1);
        assert_eq!(b.row(j11), &[(j11, p("q^{-1/2}"))]);
    }

    #[test]
    fn b1_critical_diagonal() {
        let s = spec(Family::B, 1);
        let b = build_braiding(&s, &build_fusion(&s)).unwrap();
        let j02 = b.pair(0, 2);
        let want = &p("q^{-1/2} - q^{1/2}") * &p("1 - q^{1/2}");
        assert_eq!(b.get(j02, j02), want);
    }

    #[test]
    fn b1_inverse_block() {
        let s = spec(Family::B, 1);
        let f = build_fusion(&s);
        let b = build_braiding(&s, &f).unwrap();
        let bi = build_braiding_inverse(&b, &f, &s).unwrap();
        let (j10, j01) = (b.pair(1, 0), b.pair(0, 1));
        assert_eq!(bi.get(j10, j10), p("q^{1/2} - q^{-1/2}"));
        assert!(bi.get(j10, j01).is_one());
        assert!(bi.get(j01, j10).is_one());
        assert!(bi.get(j01, j01).is_zero());
    }

    #[test]
    fn c2_twist_eigenvalue_on_zeta() {
        let s = spec(Family::C, 2);
        let f = build_fusion(&s);
        let b = build_braiding(&s, &f).unwrap();
        let zeta: Vec<_> = (0..=s.m).map(|a| (b.pair(a, s.m - a), f.entries[a as usize].clone())).collect();
        let image = b.apply(&zeta);
        let want: Vec<_> = zeta.iter().map(|(k, v)| (*k, &s.alpha * v)).collect();
        assert_eq!(image, want);
        assert_eq!(s.alpha, p("-q^{5/4}"));
    }

    #[test]
    fn d3_inverse_on_zeta() {
        let s = spec(Family::D, 3);
        let mats = build_all(&s).unwrap();
        let zeta: Vec<_> = (0..=s.m)
            .map(|a| (mats.braid.pair(a, s.m - a), mats.fusion.entries[a as usize].clone()))
            .collect();
        let want: Vec<_> = zeta.iter().map(|(k, v)| (*k, &s.alpha_inv() * v)).collect();
        assert_eq!(mats.braid_inv.apply(&zeta), want);
    }

    #[test]
    fn diagonal_formulas_agree() {
        for (f, ns) in [(Family::B, 1..=5), (Family::C, 1..=5), (Family::D, 2..=5)] {
            for n in ns {
                let s = spec(f, n);
                for a in 0..=s.m {
                    if 2 * a < s.m {
                        assert_eq!(beta_diagonal(&s, a), beta_off_diagonal(&s, a, s.m - a), "{} a={a}", s.id());
                    }
                }
            }
        }
    }

    #[test]
    fn inverse_builds_for_all_small_specs() {
        for (f, ns) in [(Family::B, 1..=4), (Family::C, 1..=4), (Family::D, 2..=4)] {
            for n in ns {
                build_all(&spec(f, n)).unwrap();
            }
        }
    }

    #[test]
    fn tampered_braiding_fails_inverse_check() {
        let s = spec(Family::B, 1);
        let f = build_fusion(&s);
        let b = build_braiding(&s, &f).unwrap();
        let j02 = b.pair(0, 2);
        let bad = b.with_entry(j02, j02, RingElement::zero());
        let inv = skein_inverse(&b, &f, &s);
        assert!(matches!(check_inverse(&bad, &inv), Err(BraidingError::InverseCheckFailed(..))));
    }

    #[test]
    fn dump_format() {
        let s = spec(Family::B, 1);
        let b = build_braiding(&s, &build_fusion(&s)).unwrap();
        let text = b.dump(&s);
        assert!(text.lines().any(|l| l == "0,0 -> 0,0 : q^{-1/2}"));
        assert!(text.lines().any(|l| l == "1,0 -> 0,1 : 1"));
        assert_eq!(text.lines().count(), b.nonzeros());
    }
}
