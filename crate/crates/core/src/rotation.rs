//! Rotation numbers of circle homeomorphisms.
//!
//! Three routes are provided:
//!
//! * [`rot_interval`] iterates the principal lift and returns the enclosing
//!   interval `[(G^n(x) - x - 1)/n, (G^n(x) - x + 1)/n]`, which always contains
//!   the rotation number because `|G^n(x) - x - n·rho| < 1`.
//! * [`rot_exact_rational`] decides exactly whether the rotation number is a
//!   fraction `p/q` with `q <= q_max`, by a Stern–Brocot descent. At each node
//!   the sign of `G^q(x) - x - p` over one period is evaluated at the
//!   breakpoints of `G^q`, which are the backward orbits of the breakpoints of
//!   `G`. Forward and backward orbits of length `q` give all those values, so
//!   one test costs `O(q · breakpoints)` exact evaluations.
//! * [`rot`] combines them: exact path first when the data is rational, the
//!   interval otherwise. Orientation-reversing maps get rotation number 0
//!   after their two fixed points have been located.

use std::cmp::Ordering;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::circle::{Lift, MonotonePLMap, Orientation};
use crate::number::{format_rational, int, ratio, Coord, Rational};

/// Maximum number of lift evaluations a single [`rot`] call may spend.
pub const ITERATION_CAP: u64 = 10_000_000;

/// Work (see `eval_cost`) the exact path of [`rot`] may spend before
/// falling back to the interval.
pub const EXACT_BUDGET: u64 = 200_000;

/// Largest period the exact path of [`rot`] tries to certify; longer exact
/// orbits grow their denominators too fast to be worth it.
pub const EXACT_PERIOD_LIMIT: u64 = 1024;

/// Slack applied when float intervals prune Stern–Brocot nodes.
pub const GUIDE_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RotationError {
    #[error("map reverses orientation; use rot() for the reversing convention")]
    OrientationReversing,
    #[error("exact rational detection needs rational breakpoint data")]
    FloatDataUnsupported,
    #[error("tolerance {tol} needs {needed} iterations, above the cap of {cap}")]
    ToleranceUnreachable { tol: f64, needed: u64, cap: u64 },
    #[error("iterate count and tolerance must be positive")]
    BadParameter,
    #[error("orientation-reversing map with {0} fixed points (expected 2)")]
    FixedPointCount(usize),
}

/// Certified enclosure of the rotation number of the principal lift.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RotInterval {
    pub lo: f64,
    pub hi: f64,
    pub n: u64,
    /// Midpoint reduced to `[0, 1)`.
    pub mod1_value: f64,
}

impl RotInterval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    /// Whether some integer translate of `v` lies in the interval.
    pub fn contains_mod1(&self, v: f64) -> bool {
        let k = (self.lo - v).ceil();
        let w = v + k;
        w <= self.hi
    }
}

fn float_orbit_displacement(lift: &Lift<f64>, n: u64, x0: f64) -> f64 {
    // integer and fractional parts are tracked separately to keep precision
    let mut x = Coord::frac(&x0);
    let start = x;
    let mut turns: i64 = 0;
    for _ in 0..n {
        let y = lift.eval(&x);
        let k = y.floor();
        turns += k as i64;
        x = y - k;
        if x >= 1.0 {
            x -= 1.0;
            turns += 1;
        }
    }
    turns as f64 + (x - start)
}

pub fn rot_interval(m: &MonotonePLMap, n: u64, x0: f64) -> Result<RotInterval, RotationError> {
    if m.orientation() == Orientation::Reversing {
        return Err(RotationError::OrientationReversing);
    }
    if n == 0 || !x0.is_finite() {
        return Err(RotationError::BadParameter);
    }
    let lift = m.float_lift();
    let disp = float_orbit_displacement(&lift, n, x0);
    let nf = n as f64;
    let lo = (disp - 1.0) / nf;
    let hi = (disp + 1.0) / nf;
    Ok(RotInterval { lo, hi, n, mod1_value: Coord::frac(&(disp / nf)) })
}

/// Rough cost of one exact evaluation: gcd normalization is quadratic in
/// the word length of the result.
fn eval_cost(v: &Rational) -> u64 {
    let words = 1 + (v.numer().bits() + v.denom().bits()) / 64;
    words * words
}

/// Outcome of the exact sign test for a candidate `p/q`, or `None` once
/// `spent` exceeds `budget`.
fn compare_to_fraction(lift: &Lift<Rational>, p: i64, q: u64, spent: &mut u64, budget: Option<u64>) -> Option<Ordering> {
    let over = |spent: u64| budget.is_some_and(|b| spent > b);
    let inv = lift.inverse();
    // the normalized inverse may differ from the true one by an integer
    let offset = inv.eval(&lift.eval(&Rational::zero()));
    let pr = int(p);
    let mut below = false;
    let mut above = false;
    for (b, _) in lift.points() {
        let mut fwd = Vec::with_capacity(q as usize + 1);
        fwd.push(b.clone());
        for k in 0..q as usize {
            let next = lift.eval(&fwd[k]);
            *spent += eval_cost(&next);
            fwd.push(next);
            if over(*spent) {
                return None;
            }
        }
        let mut back = b.clone();
        for i in 0..q as usize {
            if i > 0 {
                back = inv.eval(&back) - offset.clone();
                *spent += eval_cost(&back);
                if over(*spent) {
                    return None;
                }
            }
            // G^q(G^{-i} b) - G^{-i} b - p
            let v = fwd[q as usize - i].clone() - back.clone() - pr.clone();
            match v.cmp(&Rational::zero()) {
                Ordering::Less => below = true,
                Ordering::Greater => above = true,
                Ordering::Equal => return Some(Ordering::Equal),
            }
            if below && above {
                return Some(Ordering::Equal);
            }
        }
    }
    // all values negative: rho < p/q
    Some(if below { Ordering::Less } else { Ordering::Greater })
}

struct Descent {
    q_max: u64,
    guide: Option<(f64, f64)>,
    budget: Option<u64>,
}

enum DescentResult {
    Found(Rational),
    NotFound,
    OutOfBudget,
}

fn stern_brocot(lift: &Lift<Rational>, cfg: &Descent) -> DescentResult {
    let mut spent = 0u64;
    let test = |p: i64, q: u64, spent: &mut u64| -> Option<Ordering> {
        if let Some((lo, hi)) = cfg.guide {
            let v = p as f64 / q as f64;
            if v < lo - GUIDE_MARGIN {
                return Some(Ordering::Greater);
            }
            if v > hi + GUIDE_MARGIN {
                return Some(Ordering::Less);
            }
        }
        compare_to_fraction(lift, p, q, spent, cfg.budget)
    };
    // the principal lift has rotation number in [0, 1]
    for (p, q) in [(0i64, 1u64), (1, 1)] {
        match test(p, q, &mut spent) {
            None => return DescentResult::OutOfBudget,
            Some(Ordering::Equal) => return DescentResult::Found(ratio(0, 1)),
            Some(_) => {}
        }
    }
    let (mut lp, mut lq, mut rp, mut rq) = (0i64, 1u64, 1i64, 1u64);
    loop {
        let (p, q) = (lp + rp, lq + rq);
        if q > cfg.q_max {
            return DescentResult::NotFound;
        }
        match test(p, q, &mut spent) {
            None => return DescentResult::OutOfBudget,
            Some(Ordering::Equal) => return DescentResult::Found(ratio(p, q as i64)),
            // rho > p/q
            Some(Ordering::Greater) => {
                lp = p;
                lq = q;
            }
            Some(Ordering::Less) => {
                rp = p;
                rq = q;
            }
        }
    }
}

/// Exact rotation number `p/q` (reduced, in `[0, 1)`) if some periodic orbit
/// of period `q <= q_max` exists.
pub fn rot_exact_rational(m: &MonotonePLMap, q_max: u64) -> Result<Option<Rational>, RotationError> {
    if m.orientation() == Orientation::Reversing {
        return Err(RotationError::OrientationReversing);
    }
    let lift = m.exact_lift().ok_or(RotationError::FloatDataUnsupported)?;
    if q_max == 0 {
        return Err(RotationError::BadParameter);
    }
    match stern_brocot(lift, &Descent { q_max, guide: None, budget: None }) {
        DescentResult::Found(r) => Ok(Some(r)),
        _ => Ok(None),
    }
}

/// Result of [`rot`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rotation {
    /// Rotation number in `[0, 1)`.
    pub value: f64,
    #[serde(serialize_with = "ser_opt_rational")]
    pub exact: Option<Rational>,
    pub interval: Option<RotInterval>,
    /// Fixed points of an orientation-reversing map.
    pub fixed_points: Vec<f64>,
    pub orientation: Orientation,
}

fn ser_opt_rational<S: serde::Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_some(&format_rational(r)),
        None => s.serialize_none(),
    }
}

impl Rotation {
    pub fn exact_zero(orientation: Orientation) -> Self {
        Rotation { value: 0.0, exact: Some(Rational::zero()), interval: None, fixed_points: vec![], orientation }
    }

    pub fn from_exact(r: Rational) -> Self {
        Rotation { value: r.as_f64(), exact: Some(r), interval: None, fixed_points: vec![], orientation: Orientation::Preserving }
    }
}

/// Fixed points of an orientation-reversing circle map, in `[0, 1)`.
pub fn reversing_fixed_points(m: &MonotonePLMap) -> Vec<f64> {
    fn solve<T: Coord>(lift: &Lift<T>) -> Vec<T> {
        // G(x) - x decreases by 2 over a period; hit every integer in range
        let pts = lift.points();
        let mut out = Vec::new();
        for i in 0..pts.len() {
            let (x0, y0) = pts[i].clone();
            let (x1, y1) = if i + 1 < pts.len() {
                pts[i + 1].clone()
            } else {
                (pts[0].0.clone() + T::one(), pts[0].1.clone() + T::from_int(lift.degree()))
            };
            let f0 = y0.clone() - x0.clone();
            let f1 = y1.clone() - x1.clone();
            // integers k with f1 < k <= f0
            let mut k = f0.floor();
            while k > f1 {
                let t = (f0.clone() - k.clone()) / (f0.clone() - f1.clone());
                let x = x0.clone() + t * (x1.clone() - x0.clone());
                if x < T::one() {
                    out.push(x);
                }
                k = k - T::one();
            }
        }
        out
    }
    let mut pts: Vec<f64> = match m.data() {
        crate::circle::LiftData::Exact(l) => solve(l).iter().map(|v| v.as_f64()).collect(),
        crate::circle::LiftData::Float(l) => solve(l),
    };
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    pts
}

/// Rotation number in `[0, 1)` to within `tol`.
pub fn rot(m: &MonotonePLMap, tol: f64) -> Result<Rotation, RotationError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(RotationError::BadParameter);
    }
    if m.orientation() == Orientation::Reversing {
        let fixed = reversing_fixed_points(m);
        if fixed.len() != 2 {
            return Err(RotationError::FixedPointCount(fixed.len()));
        }
        let mut r = Rotation::exact_zero(Orientation::Reversing);
        r.fixed_points = fixed;
        return Ok(r);
    }
    let needed = (2.0 / tol).ceil();
    if needed > ITERATION_CAP as f64 {
        return Err(RotationError::ToleranceUnreachable { tol, needed: needed as u64, cap: ITERATION_CAP });
    }
    let n = (needed as u64).max(1);
    let interval = rot_interval(m, n, 0.0)?;
    if let Some(lift) = m.exact_lift() {
        let q_max = ((1.0 / tol).ceil() as u64).min(EXACT_PERIOD_LIMIT);
        let cfg = Descent { q_max, guide: Some((interval.lo, interval.hi)), budget: Some(EXACT_BUDGET) };
        if let DescentResult::Found(r) = stern_brocot(lift, &cfg) {
            let r = reduce_mod1(&r);
            return Ok(Rotation {
                value: r.to_f64().unwrap_or(0.0),
                exact: Some(r),
                interval: Some(interval),
                fixed_points: vec![],
                orientation: Orientation::Preserving,
            });
        }
    }
    Ok(Rotation {
        value: interval.mod1_value,
        exact: None,
        interval: Some(interval),
        fixed_points: vec![],
        orientation: Orientation::Preserving,
    })
}

fn reduce_mod1(r: &Rational) -> Rational {
    let f = r.clone() - r.floor();
    if f.is_one() {
        Rational::zero()
    } else {
        f
    }
}

/// Distance between two rotation numbers on the circle `R/Z`.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

pub fn rational_circle_distance(a: &Rational, b: &Rational) -> Rational {
    let d = reduce_mod1(&(a - b));
    let e = Rational::one() - d.clone();
    if d < e {
        d.abs()
    } else {
        e.abs()
    }
}
