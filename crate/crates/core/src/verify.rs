//! Exact checks of the identities satisfied by `M`, `B` and `B^-1`.
//!
//! Every check is an exact ring comparison. On failure the report carries the
//! first offending index tuple, written with weight labels.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::algebra::{AlgebraSpec, Family};
use crate::braiding::{self, BraidMatrix, FusionMatrix};
use crate::laurent::{Gaussian, RingElement};
use crate::linalg;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub spec: String,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failed(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Outcome of one check: `Err` holds the counterexample description.
pub type Outcome = Result<(), String>;

/// The matrices under test. `braid_inv` is whatever the caller wants to
/// treat as `B^-1`, normally the skein-built inverse.
pub struct Subject<'a> {
    pub spec: &'a AlgebraSpec,
    pub fusion: &'a FusionMatrix,
    pub braid: &'a BraidMatrix,
    pub braid_inv: &'a BraidMatrix,
}

impl Subject<'_> {
    fn lab(&self, o: u32) -> String {
        self.spec.labels[o as usize].to_string()
    }

    fn pair_name(&self, p: u32) -> String {
        let (a, b) = self.braid.split(p);
        format!("({},{})", self.lab(a), self.lab(b))
    }
}

type Sparse<K> = BTreeMap<K, RingElement>;

fn push<K: Ord>(acc: &mut Sparse<K>, k: K, v: RingElement) {
    if v.is_zero() {
        return;
    }
    let slot = acc.entry(k).or_default();
    *slot += &v;
}

fn prune<K: Ord + Clone>(acc: Sparse<K>) -> Sparse<K> {
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// Applies `op` to tensor positions `i, i+1` of a sparse vector on `V^{⊗3}`.
fn on_triple(op: &BraidMatrix, i: usize, v: &Sparse<[u32; 3]>) -> Sparse<[u32; 3]> {
    let mut out = Sparse::new();
    for (t, amp) in v {
        let src = op.pair(t[i], t[i + 1]);
        for (dst, c) in op.row(src) {
            let (x, y) = op.split(*dst);
            let mut nt = *t;
            nt[i] = x;
            nt[i + 1] = y;
            push(&mut out, nt, amp * c);
        }
    }
    prune(out)
}

pub fn check_yang_baxter(s: &Subject) -> Outcome {
    let b = s.braid;
    let dim = s.spec.dim;
    for a in 0..dim {
        for bb in 0..dim {
            for c in 0..dim {
                let v: Sparse<[u32; 3]> = [([a, bb, c], RingElement::one())].into_iter().collect();
                let lhs = on_triple(b, 0, &on_triple(b, 1, &on_triple(b, 0, &v)));
                let rhs = on_triple(b, 1, &on_triple(b, 0, &on_triple(b, 1, &v)));
                if lhs != rhs {
                    return Err(format!("({},{},{})", s.lab(a), s.lab(bb), s.lab(c)));
                }
            }
        }
    }
    Ok(())
}

/// Groups pairs into the connected components of the support of `B`.
fn blocks(b: &BraidMatrix) -> Vec<Vec<u32>> {
    let n = b.side_dim() as usize;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (s, d, _) in b.entries() {
        let (rs, rd) = (find(&mut parent, s as usize), find(&mut parent, d as usize));
        if rs != rd {
            parent[rs] = rd;
        }
    }
    let mut groups: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    for x in 0..n {
        let r = find(&mut parent, x);
        groups.entry(r).or_default().push(x as u32);
    }
    groups.into_values().collect()
}

/// Inverse of `B` by exact block-wise cofactor inversion, independent of the
/// skein formula. `None` when some block is not invertible over the ring.
pub fn true_inverse(b: &BraidMatrix) -> Option<HashMap<(u32, u32), RingElement>> {
    let mut out = HashMap::new();
    for block in blocks(b) {
        let dense: linalg::Dense = block
            .iter()
            .map(|&dst| block.iter().map(|&src| b.get(src, dst)).collect())
            .collect();
        let inv = linalg::inverse(&dense)?;
        for (i, &dst) in block.iter().enumerate() {
            for (j, &src) in block.iter().enumerate() {
                if !inv[i][j].is_zero() {
                    out.insert((src, dst), inv[i][j].clone());
                }
            }
        }
    }
    Some(out)
}

/// `B - B^-1 = z (E - I)` entrywise, with `B^-1` the independently inverted matrix.
pub fn check_skein(s: &Subject) -> Outcome {
    let inv = true_inverse(s.braid).ok_or_else(|| "B is not invertible over the ring".to_string())?;
    let m = s.spec.m;
    let side = s.braid.side_dim();
    for src in 0..side {
        let (a, c) = s.braid.split(src);
        for dst in 0..side {
            let (b, d) = s.braid.split(dst);
            let lhs = s.braid.get(src, dst) - inv.get(&(src, dst)).cloned().unwrap_or_default();
            let mut e = RingElement::zero();
            if a + c == m && b + d == m {
                e = s.fusion.entry(a, c) * s.fusion.inverse_entry(b, d);
            }
            if src == dst {
                e -= &RingElement::one();
            }
            let rhs = &s.spec.z * &e;
            if lhs != rhs {
                return Err(format!("{} -> {}", s.pair_name(src), s.pair_name(dst)));
            }
        }
    }
    Ok(())
}

/// `Σ M_{ab} M^{ab} = δ`.
pub fn check_loop(s: &Subject) -> Outcome {
    let m = s.spec.m;
    let total: RingElement = (0..=m).map(|a| s.fusion.entry(a, m - a) * s.fusion.inverse_entry(a, m - a)).sum();
    if total == s.spec.delta {
        Ok(())
    } else {
        Err(format!("loop value {total}"))
    }
}

fn twist_with(s: &Subject, op: &BraidMatrix, eigen: &RingElement) -> Outcome {
    let m = s.spec.m;
    for src in 0..op.side_dim() {
        let (a, b) = op.split(src);
        let mut lhs = RingElement::zero();
        for (dst, c) in op.row(src) {
            let (x, y) = op.split(*dst);
            if x + y == m {
                lhs += &(c * &s.fusion.entry(x, y));
            }
        }
        if lhs != eigen * &s.fusion.entry(a, b) {
            return Err(s.pair_name(src));
        }
    }
    Ok(())
}

/// `Σ B_{ab}^{cd} M_{cd} = α M_{ab}`.
pub fn check_twist(s: &Subject) -> Outcome {
    twist_with(s, s.braid, &s.spec.alpha)
}

/// `Σ (B^-1)_{ab}^{cd} M_{cd} = α^-1 M_{ab}`.
pub fn check_twist_inverse(s: &Subject) -> Outcome {
    twist_with(s, s.braid_inv, &s.spec.alpha_inv())
}

/// `Σ_c M^{bc} M_{ca} = δ_a^b`.
pub fn check_fusion_inverse(s: &Subject) -> Outcome {
    let m = s.spec.m;
    for a in 0..=m {
        for b in 0..=m {
            let v: RingElement = (0..=m).map(|c| s.fusion.inverse_entry(b, c) * s.fusion.entry(c, a)).sum();
            let want = if a == b { RingElement::one() } else { RingElement::zero() };
            if v != want {
                return Err(format!("({},{})", s.lab(a), s.lab(b)));
            }
        }
    }
    Ok(())
}

/// `M_{ab} = M^{ab}` on every fused pair.
pub fn check_fusion_normalization(s: &Subject) -> Outcome {
    let m = s.spec.m;
    for a in 0..=m {
        if s.fusion.entry(a, m - a) != s.fusion.inverse_entry(a, m - a) {
            return Err(format!("({},{})", s.lab(a), s.lab(m - a)));
        }
    }
    Ok(())
}

/// `ζ_a ζ_{m-a} = 1`.
pub fn check_xi_products(s: &Subject) -> Outcome {
    let m = s.spec.m;
    for a in 0..=m {
        if !(s.fusion.entry(a, m - a) * s.fusion.entry(m - a, a)).is_one() {
            return Err(format!("({},{})", s.lab(a), s.lab(m - a)));
        }
    }
    Ok(())
}

pub fn check_braid_inverse(s: &Subject) -> Outcome {
    braiding::check_inverse(s.braid, s.braid_inv).map_err(|e| match e {
        braiding::BraidingError::InverseCheckFailed(a, b) => format!("({},{})", s.lab(a), s.lab(b)),
        other => other.to_string(),
    })
}

/// `(B - γ)(B + γ^-1)(B - α) = 0` on every basis pair.
pub fn check_cubic(s: &Subject) -> Outcome {
    let b = s.braid;
    let shifts = [-&s.spec.alpha, s.spec.gamma_inv(), -&s.spec.gamma];
    for p in 0..b.side_dim() {
        let mut v = vec![(p, RingElement::one())];
        for c in &shifts {
            let mut w: Sparse<u32> = b.apply(&v).into_iter().collect();
            for (k, amp) in &v {
                push(&mut w, *k, amp * c);
            }
            v = prune(w).into_iter().collect();
        }
        if !v.is_empty() {
            return Err(s.pair_name(p));
        }
    }
    Ok(())
}

fn q4(e: i64) -> RingElement {
    RingElement::x_pow(e)
}

fn scaled(c: i64, e: i64) -> RingElement {
    RingElement::monomial(e, Gaussian::real(c))
}

/// Expected trace and determinant of the critical block.
pub fn expected_trace_det(spec: &AlgebraSpec) -> (RingElement, RingElement) {
    let n = spec.rank as i64;
    let sign = if n % 2 == 0 { 1 } else { -1 };
    match spec.family {
        Family::B => (
            &(&scaled(n, -2) - &scaled(n, 2)) + &q4(4 * n),
            scaled(sign, 4 * n),
        ),
        Family::C => (
            &(&scaled(n, -1) - &scaled(n - 1, 1)) - &q4(2 * n + 1),
            scaled(sign, 2 * n),
        ),
        Family::D => (
            &(&scaled(n - 1, -2) - &scaled(n, 2)) + &q4(2 * (2 * n - 1)),
            scaled(sign, 4 * n),
        ),
    }
}

pub fn check_trace_det(s: &Subject) -> Outcome {
    let block = s.braid.critical_block();
    let (tr, det) = expected_trace_det(s.spec);
    let got_tr = linalg::trace(&block);
    if got_tr != tr {
        return Err(format!("trace {got_tr}"));
    }
    let got_det = linalg::det(&block);
    if got_det != det {
        return Err(format!("det {got_det}"));
    }
    Ok(())
}

/// Multiplicities of `γ`, `-γ^-1`, `α` on the critical block.
pub fn expected_multiplicities(spec: &AlgebraSpec) -> [usize; 3] {
    let n = spec.rank as usize;
    match spec.family {
        Family::B => [n, n, 1],
        Family::C => [n, n - 1, 1],
        Family::D => [n - 1, n, 1],
    }
}

/// Eigenvalue multiplicities from ranks of `B̃ - λ`; the cubic makes `B̃`
/// diagonalizable, so these are the algebraic multiplicities too.
pub fn check_spectrum(s: &Subject) -> Outcome {
    let block = s.braid.critical_block();
    let size = block.len();
    let eig = [s.spec.gamma.clone(), -s.spec.gamma_inv(), s.spec.alpha.clone()];
    let want = expected_multiplicities(s.spec);
    let mut got = [0usize; 3];
    for (k, lam) in eig.iter().enumerate() {
        got[k] = size - linalg::rank(&linalg::shift_diag(&block, &-lam));
    }
    if got == want {
        Ok(())
    } else {
        Err(format!("multiplicities {got:?}"))
    }
}

/// `B̃ ζ = α ζ` on the critical block.
pub fn check_critical_eigenvector(s: &Subject) -> Outcome {
    let m = s.spec.m;
    let zeta: Vec<(u32, RingElement)> = (0..=m)
        .map(|a| (s.braid.pair(a, m - a), s.fusion.entry(a, m - a)))
        .collect();
    let mut image: Sparse<u32> = Sparse::new();
    for (k, v) in s.braid.apply(&zeta) {
        let (x, y) = s.braid.split(k);
        if x + y == m {
            push(&mut image, k, v);
        }
    }
    for (k, v) in &zeta {
        let got = image.remove(k).unwrap_or_default();
        if got != &s.spec.alpha * v {
            return Err(s.pair_name(*k));
        }
    }
    Ok(())
}

/// Critical block is skew-triangular in the descending basis with nonzero
/// skew diagonal, and every entry conserves the weight multiset.
pub fn check_shape(s: &Subject) -> Outcome {
    let m = s.spec.m;
    for (src, dst, _) in s.braid.entries() {
        let (a, b) = s.braid.split(src);
        let (c, d) = s.braid.split(dst);
        let same = (a, b) == (c, d) || (a, b) == (d, c);
        let fused = a + b == m && c + d == m;
        if !same && !fused {
            return Err(format!("{} -> {}", s.pair_name(src), s.pair_name(dst)));
        }
        if fused && c > m - a {
            return Err(format!("{} -> {}", s.pair_name(src), s.pair_name(dst)));
        }
    }
    for a in 0..=m {
        let src = s.braid.pair(a, m - a);
        if s.braid.get(src, s.braid.pair(m - a, a)).is_zero() {
            return Err(s.pair_name(src));
        }
    }
    Ok(())
}

/// D_n only: the pairs `(n-1, n-1)` and `(n-1', n-1')` are scaled by `γ`.
pub fn check_d_nonfused(s: &Subject) -> Outcome {
    let n = s.spec.rank;
    for o in [n - 1, n] {
        let p = s.braid.pair(o, o);
        if s.braid.row(p) != [(p, s.spec.gamma.clone())] {
            return Err(s.pair_name(p));
        }
    }
    Ok(())
}

pub fn check_braiding_real(s: &Subject) -> Outcome {
    for (src, dst, c) in s.braid.entries() {
        if !c.is_real() {
            return Err(format!("{} -> {}", s.pair_name(src), s.pair_name(dst)));
        }
    }
    Ok(())
}

/// Fusion entries are purely imaginary for C and real otherwise.
pub fn check_fusion_phase(s: &Subject) -> Outcome {
    let m = s.spec.m;
    for a in 0..=m {
        let e = s.fusion.entry(a, m - a);
        let ok = match s.spec.family {
            Family::C => e.is_imaginary() && !e.is_zero(),
            _ => e.is_real(),
        };
        if !ok {
            return Err(format!("({},{})", s.lab(a), s.lab(m - a)));
        }
    }
    Ok(())
}

pub type Check = fn(&Subject) -> Outcome;

/// Named checks in report order.
pub fn checks_for(family: Family) -> Vec<(&'static str, Check)> {
    let mut v: Vec<(&'static str, Check)> = vec![
        ("fusion_inverse", check_fusion_inverse),
        ("fusion_normalization", check_fusion_normalization),
        ("xi_products", check_xi_products),
        ("fusion_phase", check_fusion_phase),
        ("braid_inverse", check_braid_inverse),
        ("yang_baxter", check_yang_baxter),
        ("skein", check_skein),
        ("loop", check_loop),
        ("twist", check_twist),
        ("twist_inverse", check_twist_inverse),
        ("cubic", check_cubic),
        ("trace_det", check_trace_det),
        ("spectrum", check_spectrum),
        ("critical_eigenvector", check_critical_eigenvector),
        ("shape", check_shape),
        ("braiding_real", check_braiding_real),
    ];
    if family == Family::D {
        v.push(("d_nonfused", check_d_nonfused));
    }
    v
}

pub fn run_subject(s: &Subject) -> VerifyReport {
    let checks = checks_for(s.spec.family)
        .into_iter()
        .map(|(name, f)| {
            let r = f(s);
            CheckResult {
                name: name.to_string(),
                pass: r.is_ok(),
                counterexample: r.err(),
            }
        })
        .collect();
    VerifyReport {
        spec: s.spec.id(),
        checks,
    }
}

/// Runs every check on caller-supplied `M` and `B`; `B^-1` comes from the
/// skein formula without its built-in product check, so a bad `B` is
/// reported rather than rejected.
pub fn run_suite_with(spec: &AlgebraSpec, fusion: &FusionMatrix, braid: &BraidMatrix) -> VerifyReport {
    let braid_inv = braiding::skein_inverse(braid, fusion, spec);
    run_subject(&Subject {
        spec,
        fusion,
        braid,
        braid_inv: &braid_inv,
    })
}

pub fn run_suite(spec: &AlgebraSpec) -> VerifyReport {
    let fusion = braiding::build_fusion(spec);
    match braiding::build_braiding(spec, &fusion) {
        Ok(braid) => run_suite_with(spec, &fusion, &braid),
        Err(e) => VerifyReport {
            spec: spec.id(),
            checks: vec![CheckResult {
                name: "build".into(),
                pass: false,
                counterexample: Some(e.to_string()),
            }],
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_spec;
    use crate::braiding::{build_braiding, build_fusion};

    fn spec(f: Family, n: u32) -> AlgebraSpec {
        make_spec(f, n).unwrap()
    }

    #[test]
    fn suites_pass() {
        for (f, n) in [(Family::B, 1), (Family::B, 2), (Family::C, 1), (Family::C, 2), (Family::D, 2), (Family::D, 3)] {
            let r = run_suite(&spec(f, n));
            assert!(r.all_pass(), "{r:?}");
        }
    }

    #[test]
    fn trace_det_examples() {
        let (tr, det) = expected_trace_det(&spec(Family::B, 2));
        assert_eq!(tr, "2q^{-1/2} - 2q^{1/2} + q^2".parse().unwrap());
        assert_eq!(det, "q^2".parse().unwrap());
        assert_eq!(expected_multiplicities(&spec(Family::D, 3)), [2, 3, 1]);
    }

    #[test]
    fn zeroed_beta_breaks_yang_baxter() {
        let s = spec(Family::B, 1);
        let f = build_fusion(&s);
        let b = build_braiding(&s, &f).unwrap();
        // (0,2) -> (1,1) is an off-diagonal wall-crossing coefficient
        let bad = b.with_entry(b.pair(0, 2), b.pair(1, 1), RingElement::zero());
        let r = run_suite_with(&s, &f, &bad);
        let ybe = r.get("yang_baxter").unwrap();
        assert!(!ybe.pass);
        assert!(ybe.counterexample.is_some());
        assert!(!r.get("skein").unwrap().pass);
    }

    #[test]
    fn tampered_fusion_is_named() {
        let s = spec(Family::B, 1);
        let f = build_fusion(&s);
        let b = build_braiding(&s, &f).unwrap();
        let bad = f.with_entry(0, RingElement::x_pow(3));
        let r = run_suite_with(&s, &bad, &b);
        assert!(!r.all_pass());
        let names: Vec<_> = r.failed().map(|c| c.name.as_str()).collect();
        assert!(names.contains(&"fusion_inverse"), "{names:?}");
        assert!(names.contains(&"twist"), "{names:?}");
    }

    #[test]
    fn skein_check_sees_a_wrong_diagonal() {
        let s = spec(Family::C, 2);
        let f = build_fusion(&s);
        let b = build_braiding(&s, &f).unwrap();
        let j = b.pair(0, 0);
        let bad = b.with_entry(j, j, s.gamma_inv());
        let sub_inv = braiding::skein_inverse(&bad, &f, &s);
        let sub = Subject {
            spec: &s,
            fusion: &f,
            braid: &bad,
            braid_inv: &sub_inv,
        };
        assert_eq!(check_skein(&sub), Err("(0,0) -> (0,0)".to_string()));
    }

    #[test]
    fn report_json_shape() {
        let r = run_suite(&spec(Family::B, 1));
        let v = r.to_json();
        assert_eq!(v["spec"], "B1");
        assert_eq!(v["checks"][0]["name"], "fusion_inverse");
        assert_eq!(v["checks"][0]["pass"], true);
        assert!(v["checks"][0].get("counterexample").is_none());
    }
}
