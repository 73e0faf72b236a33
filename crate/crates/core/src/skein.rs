//! Kauffman polynomial of unoriented planar diagrams by skein recursion.
//!
//! This module deliberately shares nothing with the matrix code; it only
//! needs `α`, `z` and `δ`. A crossing `[p0, p1, p2, p3]` lists its edges
//! counterclockwise starting from an incoming under-edge, so the under strand
//! runs `p0 - p2` and the over strand `p1 - p3`.
//!
//! For every crossing `C`:
//!
//! `D(C) = D(C') + z (D(A) - D(B))`
//!
//! where `C'` is `C` switched (`[p1, p2, p3, p0]`), `A` joins `p0p1` and
//! `p2p3`, and `B` joins `p0p3` and `p1p2`. A curl contributes `α` or `α^-1`
//! and a free loop `δ`.

use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::AlgebraSpec;
use crate::laurent::RingElement;
use crate::tangle::BraidWord;

pub const DEFAULT_RECURSION_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SkeinError {
    #[error("malformed PD code: {0}")]
    MalformedPD(String),
    #[error("inconsistent edges: {0}")]
    InconsistentEdges(String),
    #[error("diagram has {crossings} crossings, above the limit of {limit}")]
    RecursionLimit { crossings: usize, limit: usize },
    #[error("skein parameters do not satisfy delta * z = alpha - alpha^-1 + z")]
    InvalidParams,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlanarDiagram {
    pub crossings: Vec<[u32; 4]>,
    /// Components with no crossings.
    pub loops: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeinParams {
    pub alpha: RingElement,
    pub alpha_inv: RingElement,
    pub z: RingElement,
    pub delta: RingElement,
}

impl SkeinParams {
    pub fn new(alpha: RingElement, z: RingElement, delta: RingElement) -> Result<SkeinParams, SkeinError> {
        let alpha_inv = alpha.inverse_monomial().ok_or(SkeinError::InvalidParams)?;
        if &delta * &z != &(&alpha - &alpha_inv) + &z {
            return Err(SkeinError::InvalidParams);
        }
        Ok(SkeinParams {
            alpha,
            alpha_inv,
            z,
            delta,
        })
    }

    pub fn from_spec(spec: &AlgebraSpec) -> SkeinParams {
        SkeinParams::new(spec.alpha.clone(), spec.z.clone(), spec.delta.clone()).expect("spec constants satisfy the loop relation")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Basepoints on the smallest edge label, bad crossings in traversal order.
    LowestBasepoint,
    /// Basepoints on the largest edge label, bad crossings in reverse order.
    HighestBasepoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub recursion_limit: usize,
    pub memoize: bool,
    pub strategy: Strategy,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            recursion_limit: DEFAULT_RECURSION_LIMIT,
            memoize: true,
            strategy: Strategy::LowestBasepoint,
        }
    }
}

struct UnionFind(HashMap<u32, u32>);

impl UnionFind {
    fn new() -> Self {
        UnionFind(HashMap::new())
    }

    fn find(&mut self, x: u32) -> u32 {
        let p = *self.0.get(&x).unwrap_or(&x);
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0.insert(x, r);
        r
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0.insert(ra.max(rb), ra.min(rb));
        }
    }
}

/// Edge ids to the (crossing, slot) pairs where they end.
fn edge_ends(crossings: &[[u32; 4]]) -> BTreeMap<u32, Vec<(usize, usize)>> {
    let mut ends: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    for (c, x) in crossings.iter().enumerate() {
        for (s, &e) in x.iter().enumerate() {
            ends.entry(e).or_default().push((c, s));
        }
    }
    ends
}

/// One pass through a crossing: which crossing and the slot it entered by.
type Pass = (usize, usize);

/// Closed traversals of the crossing strands, one list of passes per component.
fn traverse(crossings: &[[u32; 4]], strategy: Strategy) -> Vec<Vec<Pass>> {
    let ends = edge_ends(crossings);
    let mut seen: HashMap<u32, bool> = HashMap::new();
    let mut order: Vec<u32> = ends.keys().copied().collect();
    if strategy == Strategy::HighestBasepoint {
        order.reverse();
    }
    let mut comps = Vec::new();
    for &e0 in &order {
        if seen.contains_key(&e0) {
            continue;
        }
        let ends0 = &ends[&e0];
        let start = match strategy {
            Strategy::LowestBasepoint => ends0[0],
            Strategy::HighestBasepoint => ends0[ends0.len() - 1],
        };
        let mut passes = Vec::new();
        let mut dart = start;
        seen.insert(e0, true);
        loop {
            let (c, s) = dart;
            passes.push((c, s));
            let out_slot = (s + 2) % 4;
            let e = crossings[c][out_slot];
            seen.insert(e, true);
            let there = &ends[&e];
            let next = if there[0] == (c, out_slot) { there[1] } else { there[0] };
            if next == start {
                break;
            }
            dart = next;
        }
        comps.push(passes);
    }
    comps
}

fn crossing_sign(under_entry: usize, over_entry: usize) -> i64 {
    let u = if under_entry == 0 { 1 } else { -1 };
    let o = if over_entry == 3 { 1 } else { -1 };
    u * o
}

/// Sum of the signs of crossings whose two passes lie on the same component.
fn self_writhe(comps: &[Vec<Pass>]) -> i64 {
    let mut total = 0;
    for passes in comps {
        let mut under: HashMap<usize, usize> = HashMap::new();
        let mut over: HashMap<usize, usize> = HashMap::new();
        for &(c, s) in passes {
            if s % 2 == 0 {
                under.insert(c, s);
            } else {
                over.insert(c, s);
            }
        }
        for (c, u) in &under {
            if let Some(o) = over.get(c) {
                total += crossing_sign(*u, *o);
            }
        }
    }
    total
}

/// Darts `(crossing, slot)` grouped into faces; `φ(d) = next(opposite(d))`.
fn faces(crossings: &[[u32; 4]]) -> Vec<Vec<(usize, usize)>> {
    let ends = edge_ends(crossings);
    let opposite = |d: (usize, usize)| {
        let e = crossings[d.0][d.1];
        let v = &ends[&e];
        if v[0] == d {
            v[1]
        } else {
            v[0]
        }
    };
    let mut seen = vec![[false; 4]; crossings.len()];
    let mut out = Vec::new();
    for c in 0..crossings.len() {
        for s in 0..4 {
            if seen[c][s] {
                continue;
            }
            let mut face = Vec::new();
            let mut d = (c, s);
            while !seen[d.0][d.1] {
                seen[d.0][d.1] = true;
                face.push(d);
                let o = opposite(d);
                d = (o.0, (o.1 + 1) % 4);
            }
            out.push(face);
        }
    }
    out
}

impl PlanarDiagram {
    pub fn unknot() -> PlanarDiagram {
        PlanarDiagram {
            crossings: Vec::new(),
            loops: 1,
        }
    }

    /// Validates edge multiplicities and planarity.
    pub fn new(crossings: Vec<[u32; 4]>, loops: u32) -> Result<PlanarDiagram, SkeinError> {
        let ends = edge_ends(&crossings);
        for (e, v) in &ends {
            if v.len() != 2 {
                return Err(SkeinError::InconsistentEdges(format!("edge {e} appears {} times", v.len())));
            }
            // an edge joining a crossing slot to its own pass-through partner
            if v[0].0 == v[1].0 && (v[0].1 + 2) % 4 == v[1].1 {
                return Err(SkeinError::InconsistentEdges(format!("edge {e} closes through its own crossing")));
            }
        }
        let d = PlanarDiagram { crossings, loops };
        d.check_planar()?;
        Ok(d)
    }

    /// Each connected piece with `c` crossings must have `c + 2` faces.
    fn check_planar(&self) -> Result<(), SkeinError> {
        let n = self.crossings.len();
        if n == 0 {
            return Ok(());
        }
        let mut uf = UnionFind::new();
        for (e, v) in edge_ends(&self.crossings) {
            let _ = e;
            uf.union(v[0].0 as u32, v[1].0 as u32);
        }
        let mut piece_crossings: HashMap<u32, usize> = HashMap::new();
        for c in 0..n {
            *piece_crossings.entry(uf.find(c as u32)).or_default() += 1;
        }
        let mut piece_faces: HashMap<u32, usize> = HashMap::new();
        for f in faces(&self.crossings) {
            *piece_faces.entry(uf.find(f[0].0 as u32)).or_default() += 1;
        }
        for (piece, c) in piece_crossings {
            if piece_faces.get(&piece).copied().unwrap_or(0) != c + 2 {
                return Err(SkeinError::InconsistentEdges("diagram is not planar".into()));
            }
        }
        Ok(())
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn components(&self) -> usize {
        traverse(&self.crossings, Strategy::LowestBasepoint).len() + self.loops as usize
    }

    pub fn to_json(&self) -> Value {
        json!({ "pd": self.crossings, "components": self.components() })
    }

    /// Removes crossing `k`, joining `(p0 p1)(p2 p3)` for `a_splice`, else
    /// `(p0 p3)(p1 p2)`. Strands left without crossings become free loops.
    fn smooth(&self, k: usize, a_splice: bool) -> PlanarDiagram {
        let [p0, p1, p2, p3] = self.crossings[k];
        let mut uf = UnionFind::new();
        if a_splice {
            uf.union(p0, p1);
            uf.union(p2, p3);
        } else {
            uf.union(p0, p3);
            uf.union(p1, p2);
        }
        let mut rest = self.crossings.clone();
        rest.remove(k);
        self.rejoin(rest, &mut uf, &[p0, p1, p2, p3])
    }

    /// Relabels `rest` through `uf` and counts groups among `touched` that
    /// no longer meet any crossing.
    fn rejoin(&self, rest: Vec<[u32; 4]>, uf: &mut UnionFind, touched: &[u32]) -> PlanarDiagram {
        let crossings: Vec<[u32; 4]> = rest.iter().map(|x| x.map(|e| uf.find(e))).collect();
        let mut roots: Vec<u32> = touched.iter().map(|&e| uf.find(e)).collect();
        roots.sort_unstable();
        roots.dedup();
        let present = |r: u32| crossings.iter().any(|x| x.contains(&r));
        let new_loops = roots.iter().filter(|&&r| !present(r)).count() as u32;
        PlanarDiagram {
            crossings,
            loops: self.loops + new_loops,
        }
    }

    fn switched(&self, k: usize) -> PlanarDiagram {
        let mut d = self.clone();
        let [p0, p1, p2, p3] = d.crossings[k];
        d.crossings[k] = [p1, p2, p3, p0];
        d
    }

    /// One Reidemeister I removal; returns the new diagram and the `α` power.
    fn remove_curl(&self) -> Option<(PlanarDiagram, i64)> {
        for (k, x) in self.crossings.iter().enumerate() {
            let [p0, p1, p2, p3] = *x;
            if p0 == p1 || p2 == p3 {
                return Some((self.smooth(k, false), 1));
            }
            if p0 == p3 || p1 == p2 {
                return Some((self.smooth(k, true), -1));
            }
        }
        None
    }

    /// One Reidemeister II removal across a bigon face with one strand over at both ends.
    fn remove_bigon(&self) -> Option<PlanarDiagram> {
        for face in faces(&self.crossings) {
            if face.len() != 2 || face[0].0 == face[1].0 {
                continue;
            }
            let ((x, s), (y, t)) = (face[0], face[1]);
            // e = X[s] = Y[t-1], f = X[s-1] = Y[t]
            let ty = (t + 3) % 4;
            if s % 2 != ty % 2 {
                continue;
            }
            let cx = self.crossings[x];
            let cy = self.crossings[y];
            let e = cx[s];
            let f = cy[t];
            let mut uf = UnionFind::new();
            uf.union(e, cx[(s + 2) % 4]);
            uf.union(e, cy[(ty + 2) % 4]);
            uf.union(f, cx[(s + 1) % 4]);
            uf.union(f, cy[(t + 2) % 4]);
            let rest: Vec<[u32; 4]> = self
                .crossings
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != x && *i != y)
                .map(|(_, c)| *c)
                .collect();
            let touched = [e, f, cx[(s + 2) % 4], cy[(ty + 2) % 4], cx[(s + 1) % 4], cy[(t + 2) % 4]];
            return Some(self.rejoin(rest, &mut uf, &touched));
        }
        None
    }

    /// Memo key: the crossing list rotated and relabeled by first
    /// appearance, minimized over rotations. Free loops are not included.
    fn canonical_key(&self) -> Vec<u32> {
        let n = self.crossings.len();
        let mut best: Option<Vec<u32>> = None;
        for r in 0..n.max(1) {
            let mut map: HashMap<u32, u32> = HashMap::new();
            let mut key = Vec::with_capacity(4 * n);
            for i in 0..n {
                for &e in &self.crossings[(r + i) % n] {
                    let next = map.len() as u32;
                    key.push(*map.entry(e).or_insert(next));
                }
            }
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        }
        best.unwrap_or_default()
    }
}

/// Applies Reidemeister I and II removals until none applies. Returns the
/// reduced diagram and the accumulated exponent of `α`.
pub fn simplify(diagram: &PlanarDiagram) -> (PlanarDiagram, i64) {
    let mut d = diagram.clone();
    let mut power = 0;
    loop {
        if let Some((next, p)) = d.remove_curl() {
            d = next;
            power += p;
            continue;
        }
        if let Some(next) = d.remove_bigon() {
            d = next;
            continue;
        }
        return (d, power);
    }
}

pub fn parse_pd(input: &str) -> Result<PlanarDiagram, SkeinError> {
    let v: Value = serde_json::from_str(input).map_err(|e| SkeinError::MalformedPD(e.to_string()))?;
    pd_from_json(&v)
}

pub fn pd_from_json(v: &Value) -> Result<PlanarDiagram, SkeinError> {
    let bad = |m: &str| SkeinError::MalformedPD(m.to_string());
    let (list, hint) = match v {
        Value::Array(a) => (a, None),
        Value::Object(o) => {
            let list = o.get("pd").and_then(Value::as_array).ok_or_else(|| bad("expected a \"pd\" array"))?;
            let hint = match o.get("components") {
                None | Some(Value::Null) => None,
                Some(h) => Some(h.as_u64().ok_or_else(|| bad("\"components\" must be a non-negative integer"))?),
            };
            (list, hint)
        }
        _ => return Err(bad("expected a list of crossings")),
    };
    let mut crossings = Vec::with_capacity(list.len());
    for (i, x) in list.iter().enumerate() {
        let arr = x
            .as_array()
            .filter(|a| a.len() == 4)
            .ok_or_else(|| SkeinError::MalformedPD(format!("crossing {i} must list exactly 4 edges")))?;
        let mut c = [0u32; 4];
        for (k, e) in arr.iter().enumerate() {
            c[k] = e
                .as_u64()
                .and_then(|e| u32::try_from(e).ok())
                .ok_or_else(|| SkeinError::MalformedPD(format!("crossing {i} has a non-integer edge label")))?;
        }
        crossings.push(c);
    }
    let traced = traverse_checked(&crossings)?;
    let loops = match hint {
        None if crossings.is_empty() => 1,
        None => 0,
        Some(h) if (h as usize) < traced => {
            return Err(SkeinError::InconsistentEdges(format!(
                "components hint {h} is fewer than the {traced} traced components"
            )))
        }
        Some(h) => {
            u32::try_from(h as usize - traced).map_err(|_| bad("components hint is too large"))?
        }
    };
    PlanarDiagram::new(crossings, loops)
}

/// Component count after checking each edge occurs exactly twice.
fn traverse_checked(crossings: &[[u32; 4]]) -> Result<usize, SkeinError> {
    for (e, v) in edge_ends(crossings) {
        if v.len() != 2 {
            return Err(SkeinError::InconsistentEdges(format!("edge {e} appears {} times", v.len())));
        }
    }
    Ok(traverse(crossings, Strategy::LowestBasepoint).len())
}

/// PD code of the trace closure of a braid, matching `closure_tape`: `σ_j`
/// is a positive crossing.
pub fn braid_to_pd(braid: &BraidWord) -> PlanarDiagram {
    let k = braid.strands;
    let initial: Vec<u32> = (0..k as u32).collect();
    let mut cur = initial.clone();
    let mut next_id = k as u32;
    let mut crossings = Vec::with_capacity(braid.len());
    for &g in &braid.generators {
        let i = g.unsigned_abs() as usize - 1;
        let (sw, se) = (cur[i], cur[i + 1]);
        let (nw, ne) = (next_id, next_id + 1);
        next_id += 2;
        crossings.push(if g > 0 { [se, ne, nw, sw] } else { [sw, se, ne, nw] });
        cur[i] = nw;
        cur[i + 1] = ne;
    }
    let mut uf = UnionFind::new();
    for p in 0..k {
        uf.union(cur[p], initial[p]);
    }
    let raw: Vec<[u32; 4]> = crossings.iter().map(|x| x.map(|e| uf.find(e))).collect();
    let used = |e: u32| raw.iter().any(|x| x.contains(&e));
    let loops = (0..k).filter(|&p| !used(uf.find(initial[p]))).count() as u32;
    let mut relabel: HashMap<u32, u32> = HashMap::new();
    let crossings = raw
        .iter()
        .map(|x| {
            x.map(|e| {
                let n = relabel.len() as u32 + 1;
                *relabel.entry(e).or_insert(n)
            })
        })
        .collect();
    PlanarDiagram { crossings, loops }
}

struct Oracle<'a> {
    params: &'a SkeinParams,
    config: OracleConfig,
    memo: HashMap<Vec<u32>, RingElement>,
}

impl Oracle<'_> {
    fn alpha_pow(&self, k: i64) -> RingElement {
        let base = if k >= 0 { &self.params.alpha } else { &self.params.alpha_inv };
        base.pow(k.abs()).expect("non-negative power")
    }

    fn delta_pow(&self, k: u32) -> RingElement {
        self.params.delta.pow(k as i64).expect("non-negative power")
    }

    fn eval(&mut self, diagram: &PlanarDiagram) -> RingElement {
        let (d, power) = simplify(diagram);
        let scale = &self.alpha_pow(power) * &self.delta_pow(d.loops);
        let core = PlanarDiagram {
            crossings: d.crossings,
            loops: 0,
        };
        &scale * &self.eval_core(&core)
    }

    /// Value of a diagram without free loops.
    fn eval_core(&mut self, d: &PlanarDiagram) -> RingElement {
        if d.crossings.is_empty() {
            return RingElement::one();
        }
        let key = self.config.memoize.then(|| d.canonical_key());
        if let Some(v) = key.as_ref().and_then(|k| self.memo.get(k)) {
            return v.clone();
        }
        let comps = traverse(&d.crossings, self.config.strategy);
        let mut first_over: Vec<Option<bool>> = vec![None; d.crossings.len()];
        let mut bad = Vec::new();
        for passes in &comps {
            for &(c, s) in passes {
                if first_over[c].is_none() {
                    let over = s % 2 == 1;
                    first_over[c] = Some(over);
                    if !over {
                        bad.push(c);
                    }
                }
            }
        }
        if self.config.strategy == Strategy::HighestBasepoint {
            bad.reverse();
        }
        let mut total = RingElement::zero();
        let mut cur = d.clone();
        for &c in &bad {
            let a = self.eval(&cur.smooth(c, true));
            let b = self.eval(&cur.smooth(c, false));
            total += &(&self.params.z * &(a - b));
            cur = cur.switched(c);
        }
        // cur is descending: an unlink up to regular isotopy
        let comps_now = traverse(&cur.crossings, self.config.strategy);
        let w = self_writhe(&comps_now);
        let base = &self.alpha_pow(w) * &self.delta_pow(comps_now.len() as u32);
        total += &base;
        if let Some(k) = key {
            self.memo.insert(k, total.clone());
        }
        total
    }
}

pub fn kauffman_poly_with(
    diagram: &PlanarDiagram,
    params: &SkeinParams,
    config: OracleConfig,
) -> Result<RingElement, SkeinError> {
    if diagram.crossings.len() > config.recursion_limit {
        return Err(SkeinError::RecursionLimit {
            crossings: diagram.crossings.len(),
            limit: config.recursion_limit,
        });
    }
    let mut o = Oracle {
        params,
        config,
        memo: HashMap::new(),
    };
    Ok(o.eval(diagram))
}

pub fn kauffman_poly(diagram: &PlanarDiagram, params: &SkeinParams) -> Result<RingElement, SkeinError> {
    kauffman_poly_with(diagram, params, OracleConfig::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_spec, Family};
    use crate::tangle::parse_braid;
    use proptest::prelude::{prop, prop_assert, prop_assert_eq, prop_oneof, proptest, Just, ProptestConfig};
    use proptest::strategy::Strategy as _;

    fn params(f: Family, n: u32) -> SkeinParams {
        SkeinParams::from_spec(&make_spec(f, n).unwrap())
    }

    fn pd_of(w: &str, k: usize) -> PlanarDiagram {
        braid_to_pd(&parse_braid(w, k).unwrap())
    }

    const TREFOIL: &str = "[[1,4,2,5],[3,6,4,1],[5,2,6,3]]";

    #[test]
    fn parse_examples() {
        let u = parse_pd("[]").unwrap();
        assert_eq!((u.crossing_count(), u.components()), (0, 1));
        let t = parse_pd(TREFOIL).unwrap();
        assert_eq!((t.crossing_count(), t.components()), (3, 1));
        assert!(matches!(parse_pd("[[1,2,3]]"), Err(SkeinError::MalformedPD(_))));
        assert!(matches!(parse_pd("{"), Err(SkeinError::MalformedPD(_))));
        assert!(matches!(parse_pd("[[1,2,3,-4]]"), Err(SkeinError::MalformedPD(_))));
        assert!(matches!(parse_pd("[[1,2,3,4]]"), Err(SkeinError::InconsistentEdges(_))));
        assert!(matches!(parse_pd("[[1,2,1,2]]"), Err(SkeinError::InconsistentEdges(_))));
        let two = parse_pd(r#"{"pd": [], "components": 2}"#).unwrap();
        assert_eq!(two.loops, 2);
        let hopf_plus = parse_pd(r#"{"pd": [[1,3,2,4],[3,1,4,2]], "components": 3}"#).unwrap();
        assert_eq!((hopf_plus.loops, hopf_plus.components()), (1, 3));
        assert!(parse_pd(r#"{"pd": [[1,3,2,4],[3,1,4,2]], "components": 1}"#).is_err());
    }

    #[test]
    fn nonplanar_rejected() {
        // two crossings whose edge pairing cannot be drawn in the plane
        assert!(matches!(parse_pd("[[1,2,3,4],[1,2,3,4]]"), Err(SkeinError::InconsistentEdges(_))));
        assert!(parse_pd("[[1,3,2,4],[3,1,4,2]]").is_ok());
    }

    #[test]
    fn base_values() {
        let p = params(Family::B, 1);
        assert_eq!(kauffman_poly(&PlanarDiagram::unknot(), &p).unwrap(), p.delta);
        let curl = parse_pd("[[1,1,2,2]]").unwrap();
        assert_eq!(kauffman_poly(&curl, &p).unwrap(), &p.alpha * &p.delta);
        let neg_curl = parse_pd("[[1,2,2,1]]").unwrap();
        assert_eq!(kauffman_poly(&neg_curl, &p).unwrap(), &p.alpha_inv * &p.delta);
        let two = PlanarDiagram {
            crossings: vec![],
            loops: 2,
        };
        assert_eq!(kauffman_poly(&two, &p).unwrap(), &p.delta * &p.delta);
    }

    #[test]
    fn braid_pd_examples() {
        let curl = pd_of("1", 2);
        assert_eq!((curl.crossing_count(), curl.components()), (1, 1));
        let hopf = pd_of("1 1", 2);
        assert_eq!((hopf.crossing_count(), hopf.components()), (2, 2));
        let u = pd_of("", 1);
        assert_eq!(u, PlanarDiagram::unknot());
        let t = pd_of("1 1 1", 2);
        assert_eq!((t.crossing_count(), t.components()), (3, 1));
        assert!(PlanarDiagram::new(t.crossings.clone(), 0).is_ok());
        let f8 = pd_of("1 -2 1 -2", 3);
        assert!(PlanarDiagram::new(f8.crossings.clone(), 0).is_ok());
        let split = pd_of("1", 3);
        assert_eq!(split.loops, 1);
    }

    #[test]
    fn simplify_examples() {
        let curl = parse_pd("[[1,1,2,2]]").unwrap();
        let (d, p) = simplify(&curl);
        assert_eq!((d.crossing_count(), d.loops, p), (0, 1, 1));
        let bigon = pd_of("1 -1", 2);
        let (d, p) = simplify(&bigon);
        assert_eq!((d.crossing_count(), d.loops, p), (0, 2, 0));
        let (d, p) = simplify(&PlanarDiagram::unknot());
        assert_eq!((d, p), (PlanarDiagram::unknot(), 0));
        let hopf = pd_of("1 1", 2);
        assert_eq!(simplify(&hopf), (hopf.clone(), 0));
    }

    #[test]
    fn trefoil_mirror_pair() {
        let p = params(Family::B, 1);
        let t = parse_pd(TREFOIL).unwrap();
        let right = kauffman_poly(&pd_of("1 1 1", 2), &p).unwrap();
        let left = kauffman_poly(&pd_of("-1 -1 -1", 2), &p).unwrap();
        assert_ne!(right, left);
        let v = kauffman_poly(&t, &p).unwrap();
        assert!(v == right || v == left);
    }

    #[test]
    fn recursion_limit() {
        let p = params(Family::B, 1);
        let d = pd_of("1 1 1 1 1", 2);
        let cfg = OracleConfig {
            recursion_limit: 4,
            ..OracleConfig::default()
        };
        assert_eq!(
            kauffman_poly_with(&d, &p, cfg),
            Err(SkeinError::RecursionLimit { crossings: 5, limit: 4 })
        );
    }

    #[test]
    fn rejects_bad_params() {
        let p = params(Family::B, 1);
        assert_eq!(SkeinParams::new(p.alpha.clone(), p.z.clone(), p.alpha.clone()), Err(SkeinError::InvalidParams));
    }

    fn arb_word() -> impl proptest::strategy::Strategy<Value = BraidWord> {
        (2usize..=3).prop_flat_map(|k| {
            let g = (1..k as i64).prop_flat_map(|j| prop_oneof![Just(j), Just(-j)]);
            prop::collection::vec(g, 0..=6).prop_map(move |gens| BraidWord::new(k, gens).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn strategies_and_memo_agree(w in arb_word()) {
            let p = params(Family::C, 2);
            let d = braid_to_pd(&w);
            let base = kauffman_poly(&d, &p).unwrap();
            let other = OracleConfig { strategy: Strategy::HighestBasepoint, ..OracleConfig::default() };
            let plain = OracleConfig { memoize: false, ..OracleConfig::default() };
            prop_assert_eq!(kauffman_poly_with(&d, &p, other).unwrap(), base.clone());
            prop_assert_eq!(kauffman_poly_with(&d, &p, plain).unwrap(), base);
        }

        #[test]
        fn braid_pd_is_planar(w in arb_word()) {
            let d = braid_to_pd(&w);
            prop_assert!(PlanarDiagram::new(d.crossings.clone(), d.loops).is_ok());
        }
    }
}
