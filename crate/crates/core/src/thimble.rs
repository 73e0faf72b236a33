//! Downward gradient flows of `h = Re f` for `f(x) = iλ(x³/3 - x)` and the
//! Stokes wall in the `λ`-plane where a flow from one critical point lands on
//! the other.
//!
//! The flow is integrated in a rescaled time `s`,
//! `dx/ds = -conj(f'(x)) / sqrt(1 + |f'(x)|²)`, which traces the same curves
//! as `dx/dt = -conj(f'(x))` but stays bounded in speed near infinity. Along
//! either parametrization `Im f` is constant and `h` decreases.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

/// Offset of the launch point from the critical point.
pub const LAUNCH_EPS: f64 = 1e-4;
pub const STEP: f64 = 1e-3;
pub const ESCAPE_RADIUS: f64 = 10.0;
pub const MAX_TIME: f64 = 40.0;
pub const CONNECT_DIST: f64 = 1e-3;
pub const CONNECT_IM: f64 = 1e-6;
/// Allowed roundoff in the per-step decrease of `h`.
const H_SLACK: f64 = 1e-12;
const SAMPLE_EVERY: usize = 10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThimbleError {
    #[error("b must be nonzero")]
    ZeroImaginaryPart,
    #[error("start point {0} is not within 1e-6 of a critical point")]
    NotNearCritical(Complex64),
    #[error("direction {0} is not a descent direction")]
    NotDescent(Complex64),
    #[error("h increased from {before} to {after} at step {step}")]
    StepUnstable { step: usize, before: f64, after: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryParams {
    pub a: f64,
    pub b: f64,
}

impl AiryParams {
    pub fn new(a: f64, b: f64) -> Result<AiryParams, ThimbleError> {
        if b == 0.0 || !b.is_finite() || !a.is_finite() {
            return Err(ThimbleError::ZeroImaginaryPart);
        }
        Ok(AiryParams { a, b })
    }

    pub fn lambda(&self) -> Complex64 {
        Complex64::new(self.a, self.b)
    }

    pub fn critical_points(&self) -> [Complex64; 2] {
        [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]
    }

    pub fn f(&self, x: Complex64) -> Complex64 {
        Complex64::i() * self.lambda() * (x * x * x / 3.0 - x)
    }

    pub fn df(&self, x: Complex64) -> Complex64 {
        Complex64::i() * self.lambda() * (x * x - 1.0)
    }

    pub fn d2f(&self, x: Complex64) -> Complex64 {
        Complex64::i() * self.lambda() * 2.0 * x
    }

    pub fn h(&self, x: Complex64) -> f64 {
        self.f(x).re
    }

    /// Directions `θ_k` in which `h → -∞`.
    pub fn sector_centres(&self) -> [f64; 3] {
        let base = PI / 2.0 - self.lambda().arg();
        [0, 1, 2].map(|k| (base + 2.0 * PI * k as f64) / 3.0)
    }

    /// Index of the descent sector nearest to the direction of `x`.
    pub fn sector_of(&self, x: Complex64) -> usize {
        let th = x.arg();
        let dist = |c: f64| {
            let d = (th - c).rem_euclid(2.0 * PI);
            d.min(2.0 * PI - d)
        };
        let c = self.sector_centres();
        (0..3).min_by(|&i, &j| dist(c[i]).total_cmp(&dist(c[j]))).expect("three sectors")
    }

    /// The two unit descent directions at a critical point, `u² ∝ -conj(f'')`.
    pub fn descent_directions(&self, c: Complex64) -> [Complex64; 2] {
        let w = -self.d2f(c).conj();
        let u = (w / w.norm()).sqrt();
        [u, -u]
    }

    fn velocity(&self, x: Complex64) -> Complex64 {
        let g = self.df(x);
        -g.conj() / (1.0 + g.norm_sqr()).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowTrajectory {
    /// Every tenth position, plus the last one.
    pub points: Vec<Complex64>,
    pub step: f64,
    pub time: f64,
    /// Largest `|Im f(x_s) - Im f(x_0)|` seen.
    pub max_im_drift: f64,
    pub escaped: bool,
    /// Closest approach to `+1` and `-1`, with `Im f` at that point.
    pub closest: [(f64, f64); 2],
}

impl FlowTrajectory {
    pub fn end(&self) -> Complex64 {
        *self.points.last().expect("trajectory has a start")
    }
}

/// Integrates the descent flow by fixed-step RK4 from `start + ε direction`.
pub fn descend(
    params: &AiryParams,
    start: Complex64,
    direction: Complex64,
    max_time: f64,
) -> Result<FlowTrajectory, ThimbleError> {
    let crit = params.critical_points();
    let c = *crit
        .iter()
        .find(|c| (**c - start).norm() <= 1e-6)
        .ok_or(ThimbleError::NotNearCritical(start))?;
    if direction.norm() == 0.0 || (params.d2f(c) * direction * direction).re >= 0.0 {
        return Err(ThimbleError::NotDescent(direction));
    }
    let u = direction / direction.norm();
    let mut x = start + u * LAUNCH_EPS;
    let im0 = params.f(x).im;
    let mut h = params.h(x);
    let mut points = vec![x];
    let mut drift: f64 = 0.0;
    let mut closest = crit.map(|p| ((x - p).norm(), params.f(x).im));
    let steps = (max_time / STEP).ceil() as usize;
    let mut escaped = false;
    let mut taken = 0;
    for step in 1..=steps {
        let k1 = params.velocity(x);
        let k2 = params.velocity(x + k1 * (STEP / 2.0));
        let k3 = params.velocity(x + k2 * (STEP / 2.0));
        let k4 = params.velocity(x + k3 * STEP);
        x += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (STEP / 6.0);
        taken = step;
        let fx = params.f(x);
        if fx.re > h + H_SLACK * (1.0 + h.abs()) {
            return Err(ThimbleError::StepUnstable {
                step,
                before: h,
                after: fx.re,
            });
        }
        h = fx.re;
        drift = drift.max((fx.im - im0).abs());
        for (k, p) in crit.iter().enumerate() {
            let d = (x - p).norm();
            if d < closest[k].0 {
                closest[k] = (d, fx.im);
            }
        }
        if step % SAMPLE_EVERY == 0 {
            points.push(x);
        }
        if x.norm() > ESCAPE_RADIUS {
            escaped = true;
            break;
        }
    }
    if points.last() != Some(&x) {
        points.push(x);
    }
    Ok(FlowTrajectory {
        points,
        step: STEP,
        time: taken as f64 * STEP,
        max_im_drift: drift,
        escaped,
        closest,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub a: f64,
    pub connected: bool,
    /// Sector reached by each branch of the thimble at `+1`; `None` when the
    /// branch did not escape.
    pub j_plus: [Option<usize>; 2],
    pub j_minus: [Option<usize>; 2],
    pub max_im_drift: f64,
    /// Closest approach of the upper thimble to the lower critical point.
    pub min_dist: f64,
}

/// Which critical point has the higher `h`, as an index into `critical_points`.
fn upper_index(params: &AiryParams) -> usize {
    if params.b > 0.0 {
        0
    } else {
        1
    }
}

/// Both branches from a critical point, ordered so the first one points
/// toward the other critical point.
fn branches(params: &AiryParams, from: usize) -> Result<[FlowTrajectory; 2], ThimbleError> {
    let crit = params.critical_points();
    let c = crit[from];
    let toward = crit[1 - from] - c;
    let [u, v] = params.descent_directions(c);
    let (first, second) = if (u * toward.conj()).re >= (v * toward.conj()).re { (u, v) } else { (v, u) };
    Ok([descend(params, c, first, MAX_TIME)?, descend(params, c, second, MAX_TIME)?])
}

fn label(params: &AiryParams, t: &FlowTrajectory) -> Option<usize> {
    t.escaped.then(|| params.sector_of(t.end()))
}

pub fn scan_point(a: f64, b: f64) -> Result<ScanRow, ThimbleError> {
    let params = AiryParams::new(a, b)?;
    let crit = params.critical_points();
    let up = upper_index(&params);
    let plus = branches(&params, 0)?;
    let minus = branches(&params, 1)?;
    let from_upper = if up == 0 { &plus } else { &minus };
    let other = 1 - up;
    let (dist, im_there) = from_upper[0].closest[other];
    let connected = dist < CONNECT_DIST && (im_there - params.f(crit[other]).im).abs() < CONNECT_IM;
    let drift = plus.iter().chain(minus.iter()).map(|t| t.max_im_drift).fold(0.0, f64::max);
    Ok(ScanRow {
        a,
        connected,
        j_plus: [label(&params, &plus[0]), label(&params, &plus[1])],
        j_minus: [label(&params, &minus[0]), label(&params, &minus[1])],
        max_im_drift: drift,
        min_dist: dist,
    })
}

pub fn stokes_scan(a_values: &[f64], b: f64) -> Result<Vec<ScanRow>, ThimbleError> {
    a_values.iter().map(|&a| scan_point(a, b)).collect()
}

/// Sector reached by the upper thimble's branch that heads for the lower
/// critical point; `None` when it fails to escape.
pub fn wall_label(a: f64, b: f64) -> Result<Option<usize>, ThimbleError> {
    let params = AiryParams::new(a, b)?;
    let [first, _] = branches(&params, upper_index(&params))?;
    Ok(label(&params, &first))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wall {
    pub a: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
}

/// Bisects `[lo, hi]` on the sector label of the branch heading for the
/// other critical point until the bracket is narrower than `tol`.
pub fn locate_wall(b: f64, lo: f64, hi: f64, tol: f64) -> Result<Option<Wall>, ThimbleError> {
    let (mut lo, mut hi) = (lo.min(hi), lo.max(hi));
    let l_lo = wall_label(lo, b)?;
    let l_hi = wall_label(hi, b)?;
    if l_lo == l_hi || l_lo.is_none() || l_hi.is_none() {
        return Ok(None);
    }
    let mut iterations = 0;
    while hi - lo > tol {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        match wall_label(mid, b)? {
            None => {
                return Ok(Some(Wall {
                    a: mid,
                    bracket: (lo, hi),
                    iterations,
                }))
            }
            l if l == l_lo => lo = mid,
            _ => hi = mid,
        }
    }
    Ok(Some(Wall {
        a: 0.5 * (lo + hi),
        bracket: (lo, hi),
        iterations,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn critical_points_vanish() {
        let p = AiryParams::new(0.3, -1.2).unwrap();
        for x in p.critical_points() {
            assert!(p.df(x).norm() < 1e-15);
        }
        assert!(AiryParams::new(1.0, 0.0).is_err());
    }

    #[test]
    fn real_axis_connection() {
        let p = AiryParams::new(0.0, 1.0).unwrap();
        let t = descend(&p, c(1.0, 0.0), c(-1.0, 0.0), MAX_TIME).unwrap();
        assert!(t.closest[1].0 < 1e-6, "{:?}", t.closest);
        assert!(!t.escaped);
        assert!(t.max_im_drift < 1e-6);
    }

    #[test]
    fn off_wall_escapes() {
        let p = AiryParams::new(1.0, 1.0).unwrap();
        let [u, v] = p.descent_directions(c(1.0, 0.0));
        let toward = if u.re < v.re { u } else { v };
        let t = descend(&p, c(1.0, 0.0), toward, MAX_TIME).unwrap();
        assert!(t.escaped);
        assert!(t.closest[1].0 > 1e-2);
        assert!(t.max_im_drift < 1e-6);
    }

    #[test]
    fn rejects_bad_launch() {
        let p = AiryParams::new(0.0, 1.0).unwrap();
        assert!(matches!(descend(&p, c(0.5, 0.0), c(1.0, 0.0), 1.0), Err(ThimbleError::NotNearCritical(_))));
        // at +1 with λ = i the descent directions are real; i is an ascent direction
        assert!(matches!(descend(&p, c(1.0, 0.0), c(0.0, 1.0), 1.0), Err(ThimbleError::NotDescent(_))));
    }

    #[test]
    fn scan_connects_only_on_the_wall() {
        for b in [1.0, -1.0] {
            let rows = stokes_scan(&[-1.0, 0.0, 1.0], b).unwrap();
            let conn: Vec<bool> = rows.iter().map(|r| r.connected).collect();
            assert_eq!(conn, vec![false, true, false], "b={b}");
            assert!(rows.iter().all(|r| r.max_im_drift < 1e-6));
        }
    }

    #[test]
    fn sector_flip_across_the_wall() {
        let l = scan_point(-1.0, 1.0).unwrap();
        let r = scan_point(1.0, 1.0).unwrap();
        assert_ne!(l.j_plus, r.j_plus);
        // the branch pointing away from P- ends in the same sector on both sides
        assert_eq!(l.j_plus[1], r.j_plus[1]);
    }

    #[test]
    fn sectors_are_descent_directions() {
        let p = AiryParams::new(0.4, 0.9).unwrap();
        for th in p.sector_centres() {
            let x = Complex64::from_polar(50.0, th);
            assert!(p.h(x) < -1e4);
        }
    }

    #[test]
    fn wall_by_bisection() {
        for b in [1.0, -1.0] {
            let w = locate_wall(b, -0.7, 1.3, 1e-4).unwrap().unwrap();
            assert!(w.a.abs() < 1e-3, "{w:?}");
        }
    }
}
