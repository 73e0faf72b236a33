//! Small dense matrices over the Laurent ring.
//!
//! Only used on blocks of at most a few dozen rows, so plain `Vec<Vec<_>>`
//! and cofactor inversion are good enough.

use crate::laurent::RingElement;

pub type Dense = Vec<Vec<RingElement>>;

pub fn identity(n: usize) -> Dense {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { RingElement::one() } else { RingElement::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![RingElement::zero(); m]; n];
    for i in 0..n {
        for (l, b_row) in b.iter().enumerate().take(k) {
            let a_il = &a[i][l];
            if a_il.is_zero() {
                continue;
            }
            for j in 0..m {
                if !b_row[j].is_zero() {
                    out[i][j] += &(a_il * &b_row[j]);
                }
            }
        }
    }
    out
}

pub fn trace(a: &Dense) -> RingElement {
    (0..a.len()).map(|i| a[i][i].clone()).sum()
}

/// `a + c * I`.
pub fn shift_diag(a: &Dense, c: &RingElement) -> Dense {
    let mut out = a.clone();
    for (i, row) in out.iter_mut().enumerate() {
        row[i] += c;
    }
    out
}

/// Fraction-free elimination with full pivoting. Returns `(rank, det)`;
/// `det` is zero when the matrix is singular.
fn bareiss(a: &Dense) -> (usize, RingElement) {
    let n = a.len();
    let mut m = a.clone();
    let mut prev = RingElement::one();
    let mut sign = 1i64;
    let mut rank = 0;
    for k in 0..n {
        let pivot = (k..n).flat_map(|i| (k..n).map(move |j| (i, j))).find(|&(i, j)| !m[i][j].is_zero());
        let Some((pi, pj)) = pivot else {
            return (rank, RingElement::zero());
        };
        if pi != k {
            m.swap(pi, k);
            sign = -sign;
        }
        if pj != k {
            for row in m.iter_mut() {
                row.swap(pj, k);
            }
            sign = -sign;
        }
        rank += 1;
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.exact_div(&prev).expect("Bareiss step divides exactly");
            }
            m[i][k] = RingElement::zero();
        }
        prev = m[k][k].clone();
    }
    let det = if n == 0 { RingElement::one() } else { m[n - 1][n - 1].clone() };
    (rank, if sign < 0 { -det } else { det })
}

pub fn det(a: &Dense) -> RingElement {
    bareiss(a).1
}

/// Rank over the fraction field of the Laurent ring.
pub fn rank(a: &Dense) -> usize {
    bareiss(a).0
}

/// Exact inverse, available when the determinant is a unit of the ring.
pub fn inverse(a: &Dense) -> Option<Dense> {
    let n = a.len();
    let d = det(a);
    let d_inv = d.inverse_monomial()?;
    let mut out = vec![vec![RingElement::zero(); n]; n];
    #[allow(clippy::needless_range_loop)]
    for i in 0..n {
        for j in 0..n {
            let minor: Dense = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| a[r][c].clone()).collect())
                .collect();
            let cof = det(&minor);
            let cof = if (i + j) % 2 == 1 { -cof } else { cof };
            // adjugate is the transposed cofactor matrix
            out[j][i] = &cof * &d_inv;
        }
    }
    Some(out)
}
