//! Circle homeomorphisms represented by piecewise-linear lifts.
//!
//! A map is stored as the breakpoints of its principal lift `G: R -> R` over
//! one period. `G(x + 1) = G(x) + degree`, the first breakpoint sits at
//! `x = 0` and `G(0)` lies in `[0, 1)`. Breakpoint data is either exact
//! ([`Rational`]) or `f64`; exact data makes periodic-orbit detection exact.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::number::{format_rational, parse_rational, ratio, rational_from_f64, Coord, Rational};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CircleError {
    #[error("breakpoints are not strictly monotone (at x = {0})")]
    NotMonotone(f64),
    #[error("duplicate breakpoint at x = {0}")]
    DuplicateBreakpoint(f64),
    #[error("breakpoint x = {0} outside [0, 1)")]
    OutOfRange(f64),
    #[error("a map needs at least one breakpoint")]
    Empty,
    #[error("degree must be 1 or -1, got {0}")]
    BadDegree(i64),
    #[error("non-finite breakpoint value")]
    NonFinite,
    #[error("invalid map description: {0}")]
    Format(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Preserving,
    Reversing,
}

impl Orientation {
    pub fn sign(self) -> i64 {
        match self {
            Orientation::Preserving => 1,
            Orientation::Reversing => -1,
        }
    }

    pub fn from_sign(s: i64) -> Orientation {
        if s >= 0 {
            Orientation::Preserving
        } else {
            Orientation::Reversing
        }
    }

    pub fn compose(self, other: Orientation) -> Orientation {
        Orientation::from_sign(self.sign() * other.sign())
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Preserving => "preserving",
            Orientation::Reversing => "reversing",
        })
    }
}

/// A point of the circle in turns, `0 <= turns < 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct CirclePoint(f64);

impl CirclePoint {
    pub fn new(turns: f64) -> Self {
        CirclePoint(Coord::frac(&turns))
    }

    pub fn turns(self) -> f64 {
        self.0
    }
}

/// Principal lift of a circle homeomorphism.
#[derive(Debug, Clone, PartialEq)]
pub struct Lift<T> {
    points: Vec<(T, T)>,
    degree: i64,
}

impl<T: Coord> Lift<T> {
    /// Validates and normalizes breakpoint data.
    ///
    /// `points` need not be sorted; `x = 0` is inserted when absent and the
    /// `y` values are shifted by an integer so that `G(0)` is in `[0, 1)`.
    pub fn new(mut points: Vec<(T, T)>, degree: i64) -> Result<Self, CircleError> {
        if degree != 1 && degree != -1 {
            return Err(CircleError::BadDegree(degree));
        }
        if points.is_empty() {
            return Err(CircleError::Empty);
        }
        for (x, y) in &points {
            let (xf, yf) = (x.as_f64(), y.as_f64());
            if !xf.is_finite() || !yf.is_finite() {
                return Err(CircleError::NonFinite);
            }
            if *x < T::zero() || *x >= T::one() {
                return Err(CircleError::OutOfRange(xf));
            }
        }
        points.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
        for w in points.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(CircleError::DuplicateBreakpoint(w[0].0.as_f64()));
            }
        }
        let d = T::from_int(degree);
        for i in 0..points.len() {
            let (x0, y0) = &points[i];
            let (x1, y1) = if i + 1 < points.len() {
                points[i + 1].clone()
            } else {
                (points[0].0.clone() + T::one(), points[0].1.clone() + d.clone())
            };
            let ok = if degree == 1 { y1 > *y0 } else { y1 < *y0 };
            if !ok || x1 <= *x0 {
                return Err(CircleError::NotMonotone(x0.as_f64()));
            }
        }
        let mut lift = Lift { points, degree };
        if lift.points[0].0 != T::zero() {
            let y0 = lift.eval(&T::zero());
            lift.points.insert(0, (T::zero(), y0));
        }
        let shift = lift.points[0].1.floor();
        for p in &mut lift.points {
            p.1 = p.1.clone() - shift.clone();
        }
        lift.simplify();
        Ok(lift)
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn points(&self) -> &[(T, T)] {
        &self.points
    }

    fn next_point(&self, i: usize) -> (T, T) {
        if i + 1 < self.points.len() {
            self.points[i + 1].clone()
        } else {
            let (x, y) = &self.points[0];
            (x.clone() + T::one(), y.clone() + T::from_int(self.degree))
        }
    }

    /// Evaluates the lift at any real argument.
    pub fn eval(&self, x: &T) -> T {
        let k = x.floor();
        let f = x.clone() - k.clone();
        let i = self.points.partition_point(|p| p.0 <= f);
        let ((x0, y0), (x1, y1)) = if i == 0 {
            // before the first breakpoint: last segment of the previous period
            let (xl, yl) = self.points[self.points.len() - 1].clone();
            ((xl - T::one(), yl - T::from_int(self.degree)), self.points[0].clone())
        } else {
            (self.points[i - 1].clone(), self.next_point(i - 1))
        };
        let y = y0.clone() + (f - x0.clone()) * (y1 - y0) / (x1 - x0);
        y + k * T::from_int(self.degree)
    }

    pub fn eval_circle(&self, x: &T) -> T {
        self.eval(x).frac()
    }

    pub fn inverse(&self) -> Self {
        let d = T::from_int(self.degree);
        let pts = self
            .points
            .iter()
            .map(|(x, y)| {
                let k = y.floor();
                (y.clone() - k.clone(), x.clone() - k * d.clone())
            })
            .collect();
        Lift::new(pts, self.degree).expect("inverse of a valid lift is valid")
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Lift<T>) -> Self {
        let inv = inner.inverse();
        let mut xs: Vec<T> = inner.points.iter().map(|p| p.0.clone()).collect();
        xs.extend(self.points.iter().map(|p| inv.eval(&p.0).frac()));
        xs.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        xs.dedup_by(|a, b| a.approx_eq(b));
        let pts = xs
            .into_iter()
            .map(|x| {
                let y = self.eval(&inner.eval(&x));
                (x, y)
            })
            .collect();
        Lift::new(pts, self.degree * inner.degree).expect("composition of valid lifts is valid")
    }

    /// Removes breakpoints (other than `x = 0`) lying on the segment joining
    /// their neighbours.
    fn simplify(&mut self) {
        let mut i = 1;
        while i < self.points.len() {
            let (xa, ya) = self.points[i - 1].clone();
            let (xb, yb) = self.points[i].clone();
            let (xc, yc) = self.next_point(i);
            let lhs = (yb.clone() - ya.clone()) * (xc.clone() - xb.clone());
            let rhs = (yc - yb) * (xb - xa);
            if lhs.approx_eq(&rhs) {
                self.points.remove(i);
            } else {
                i += 1;
            }
        }
    }

    pub fn map<U: Coord>(&self, f: impl Fn(&T) -> U) -> Lift<U> {
        Lift {
            points: self.points.iter().map(|(x, y)| (f(x), f(y))).collect(),
            degree: self.degree,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LiftData {
    Exact(Lift<Rational>),
    Float(Lift<f64>),
}

/// A circle homeomorphism with piecewise-linear principal lift.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonePLMap {
    data: LiftData,
}

impl MonotonePLMap {
    pub fn from_exact(points: Vec<(Rational, Rational)>, degree: i64) -> Result<Self, CircleError> {
        Ok(MonotonePLMap { data: LiftData::Exact(Lift::new(points, degree)?) })
    }

    pub fn from_float(points: Vec<(f64, f64)>, degree: i64) -> Result<Self, CircleError> {
        Ok(MonotonePLMap { data: LiftData::Float(Lift::new(points, degree)?) })
    }

    /// Breakpoints given as floats, stored exactly via their shortest
    /// decimal expansion.
    pub fn make_pl(points: &[(f64, f64)], degree: i64) -> Result<Self, CircleError> {
        let pts = points
            .iter()
            .map(|&(x, y)| Ok((rational_from_f64(x).ok_or(CircleError::NonFinite)?, rational_from_f64(y).ok_or(CircleError::NonFinite)?)))
            .collect::<Result<Vec<_>, CircleError>>()?;
        Self::from_exact(pts, degree)
    }

    /// Rigid rotation `x -> x + alpha`, stored exactly.
    pub fn rotation(alpha: f64) -> Self {
        let a = rational_from_f64(alpha).expect("finite rotation angle");
        Self::rotation_exact(a)
    }

    pub fn rotation_exact(alpha: Rational) -> Self {
        Self::from_exact(vec![(Zero::zero(), alpha)], 1).expect("rotation is valid")
    }

    pub fn rotation_float(alpha: f64) -> Self {
        Self::from_float(vec![(0.0, alpha)], 1).expect("rotation is valid")
    }

    pub fn identity() -> Self {
        Self::rotation_exact(Zero::zero())
    }

    /// `x -> -x`.
    pub fn reflection() -> Self {
        Self::from_exact(vec![(Zero::zero(), Zero::zero())], -1).expect("reflection is valid")
    }

    pub fn data(&self) -> &LiftData {
        &self.data
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.data, LiftData::Exact(_))
    }

    pub fn degree(&self) -> i64 {
        match &self.data {
            LiftData::Exact(l) => l.degree(),
            LiftData::Float(l) => l.degree(),
        }
    }

    pub fn orientation(&self) -> Orientation {
        Orientation::from_sign(self.degree())
    }

    pub fn breakpoint_count(&self) -> usize {
        match &self.data {
            LiftData::Exact(l) => l.points().len(),
            LiftData::Float(l) => l.points().len(),
        }
    }

    pub fn exact_lift(&self) -> Option<&Lift<Rational>> {
        match &self.data {
            LiftData::Exact(l) => Some(l),
            LiftData::Float(_) => None,
        }
    }

    pub fn float_lift(&self) -> Lift<f64> {
        match &self.data {
            LiftData::Exact(l) => l.map(|v| v.as_f64()),
            LiftData::Float(l) => l.clone(),
        }
    }

    pub fn to_float(&self) -> Self {
        MonotonePLMap { data: LiftData::Float(self.float_lift()) }
    }

    pub fn evaluate(&self, x: CirclePoint) -> CirclePoint {
        match &self.data {
            LiftData::Exact(l) => {
                let xr = rational_from_f64(x.turns()).expect("finite");
                CirclePoint::new(l.eval_circle(&xr).as_f64())
            }
            LiftData::Float(l) => CirclePoint::new(l.eval_circle(&x.turns())),
        }
    }

    /// Exact evaluation of the circle map; `None` for float data.
    pub fn evaluate_exact(&self, x: &Rational) -> Option<Rational> {
        self.exact_lift().map(|l| l.eval_circle(&x.frac()))
    }

    /// Evaluates the principal lift at a real argument.
    pub fn lift_at(&self, x: f64) -> f64 {
        match &self.data {
            LiftData::Exact(l) => l.eval(&rational_from_f64(x).expect("finite")).as_f64(),
            LiftData::Float(l) => l.eval(&x),
        }
    }

    pub fn inverse(&self) -> Self {
        let data = match &self.data {
            LiftData::Exact(l) => LiftData::Exact(l.inverse()),
            LiftData::Float(l) => LiftData::Float(l.inverse()),
        };
        MonotonePLMap { data }
    }

    /// `self ∘ inner`. Mixed exact/float inputs produce float output.
    pub fn compose(&self, inner: &MonotonePLMap) -> Self {
        let data = match (&self.data, &inner.data) {
            (LiftData::Exact(a), LiftData::Exact(b)) => LiftData::Exact(a.compose(b)),
            _ => LiftData::Float(self.float_lift().compose(&inner.float_lift())),
        };
        MonotonePLMap { data }
    }

    /// `self` composed with itself `k` times (`k = 0` gives the identity).
    pub fn power(&self, k: u32) -> Self {
        let mut acc = if self.is_exact() { Self::identity() } else { Self::identity().to_float() };
        for _ in 0..k {
            acc = self.compose(&acc);
        }
        acc
    }

    /// Orientation-preserving map with `breakpoints` breakpoints at random
    /// multiples of `1e-6`, reproducible from `seed`.
    pub fn random(seed: u64, breakpoints: usize) -> Self {
        use rand::{Rng, SeedableRng};
        const GRAIN: i64 = 1_000_000;
        let k = breakpoints.max(1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |first: Option<i64>| {
            let mut set: std::collections::BTreeSet<i64> = first.into_iter().collect();
            while set.len() < k {
                set.insert(rng.gen_range(0..GRAIN));
            }
            set.into_iter().collect::<Vec<_>>()
        };
        let xs = draw(Some(0));
        let ys = draw(None);
        let shift = rng.gen_range(0..GRAIN);
        let pts = xs.iter().zip(&ys).map(|(&x, &y)| (ratio(x, GRAIN), ratio(y + shift, GRAIN))).collect();
        Self::from_exact(pts, 1).expect("increasing breakpoints within one period")
    }

    pub fn to_json(&self) -> MapJson {
        let breakpoints = match &self.data {
            LiftData::Exact(l) => l
                .points()
                .iter()
                .map(|(x, y)| [NumJson::Text(format_rational(x)), NumJson::Text(format_rational(y))])
                .collect(),
            LiftData::Float(l) => l.points().iter().map(|&(x, y)| [NumJson::Number(x), NumJson::Number(y)]).collect(),
        };
        MapJson { degree: self.degree(), breakpoints }
    }

    /// Builds a map from its JSON description. Numbers and `"p/q"` strings
    /// are both read exactly.
    pub fn from_json(j: &MapJson) -> Result<Self, CircleError> {
        let pts = j
            .breakpoints
            .iter()
            .map(|[x, y]| Ok((x.to_rational()?, y.to_rational()?)))
            .collect::<Result<Vec<_>, CircleError>>()?;
        Self::from_exact(pts, j.degree)
    }
}

/// `{"degree": 1, "breakpoints": [[x, y], ...]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapJson {
    pub degree: i64,
    pub breakpoints: Vec<[NumJson; 2]>,
}

/// A JSON number or a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumJson {
    Number(f64),
    Text(String),
}

impl NumJson {
    pub fn to_rational(&self) -> Result<Rational, CircleError> {
        match self {
            NumJson::Number(v) => rational_from_f64(*v).ok_or(CircleError::NonFinite),
            NumJson::Text(s) => parse_rational(s).map_err(|e| CircleError::Format(e.to_string())),
        }
    }

    pub fn from_rational(r: &Rational) -> Self {
        NumJson::Text(format_rational(r))
    }
}
