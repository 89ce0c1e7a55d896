//! Circular order of points and of disjoint arc families on the circle,
//! order-preserving bijections between family members and the circle maps
//! compatible with them.
//!
//! Positions are exact rationals in turns. An interval arc `(a, b)` is the
//! open arc running counterclockwise from `a` to `b`; `a == b` denotes the
//! circle minus one point and is only allowed as the sole member of a family.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::circle::{CircleError, MonotonePLMap, NumJson, Orientation};
use crate::number::{Coord, Rational};
use crate::rotation::{self, Rotation, RotationError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OrderError {
    #[error("points are not pairwise distinct")]
    DuplicatePoint,
    #[error("members {0} and {1} are not disjoint")]
    NotDisjoint(String, String),
    #[error("invalid bijection: {0}")]
    InvalidBijection(String),
    #[error("bijection is not order preserving")]
    NotOrderPreserving,
    #[error("orientation is undefined for families with fewer than 3 members ({0})")]
    TooFewMembers(usize),
    #[error("invalid family: {0}")]
    Format(String),
    #[error(transparent)]
    Circle(#[from] CircleError),
    #[error(transparent)]
    Rotation(#[from] RotationError),
}

fn ccw(from: &Rational, to: &Rational) -> Rational {
    (to.clone() - from.clone()).frac()
}

/// Whether `x1, x2, x3, x4` occur in this cyclic order, read either way
/// around the circle.
pub fn cyclic_order4(x: [&Rational; 4]) -> Result<bool, OrderError> {
    for i in 0..4 {
        for j in i + 1..4 {
            if x[i].frac() == x[j].frac() {
                return Err(OrderError::DuplicatePoint);
            }
        }
    }
    let d: Vec<Rational> = (1..4).map(|i| ccw(x[0], x[i])).collect();
    Ok((d[0] < d[1] && d[1] < d[2]) || (d[0] > d[1] && d[1] > d[2]))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Arc {
    Point(Rational),
    Interval { a: Rational, b: Rational },
}

impl Arc {
    pub fn point(p: Rational) -> Self {
        Arc::Point(p.frac())
    }

    pub fn interval(a: Rational, b: Rational) -> Self {
        Arc::Interval { a: a.frac(), b: b.frac() }
    }

    pub fn is_point(&self) -> bool {
        matches!(self, Arc::Point(_))
    }

    pub fn start(&self) -> &Rational {
        match self {
            Arc::Point(p) => p,
            Arc::Interval { a, .. } => a,
        }
    }

    pub fn end(&self) -> &Rational {
        match self {
            Arc::Point(p) => p,
            Arc::Interval { b, .. } => b,
        }
    }

    fn length(&self) -> Rational {
        match self {
            Arc::Point(_) => Rational::zero(),
            Arc::Interval { a, b } if a == b => Rational::one(),
            Arc::Interval { a, b } => ccw(a, b),
        }
    }

    /// A point of the arc. For connected disjoint sets any choice of
    /// representatives yields the same cyclic order, so one suffices.
    pub fn representative(&self) -> Rational {
        match self {
            Arc::Point(p) => p.clone(),
            Arc::Interval { a, .. } => (a.clone() + self.length() * Rational::half()).frac(),
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let x = x.frac();
        match self {
            Arc::Point(p) => *p == x,
            Arc::Interval { a, b } if a == b => x != *a,
            Arc::Interval { a, .. } => {
                let d = ccw(a, &x);
                d > Rational::zero() && d < self.length()
            }
        }
    }

    fn closure_contains(&self, x: &Rational) -> bool {
        self.contains(x) || *self.start() == x.frac() || *self.end() == x.frac()
    }
}

fn arcs_disjoint(p: &Arc, q: &Arc) -> bool {
    match (p, q) {
        (Arc::Point(x), Arc::Point(y)) => x != y,
        // a point may not sit on the closure of another member
        (Arc::Point(x), other) | (other, Arc::Point(x)) => !other.closure_contains(x),
        (Arc::Interval { a: a1, b: b1 }, Arc::Interval { a: a2, b: b2 }) => {
            if a1 == b1 || a2 == b2 {
                return false;
            }
            // (a2, b2) must sit inside the closed complement [b1, a1]
            let span = ccw(b1, a1);
            let start = ccw(b1, a2);
            start + ccw(a2, b2) <= span
        }
    }
}

/// Whether `J1 < J2 < J3 < J4`: every choice `xi ∈ Ji` is in cyclic order.
pub fn set_order4(j: [&Arc; 4]) -> Result<bool, OrderError> {
    for i in 0..4 {
        for k in i + 1..4 {
            if !arcs_disjoint(j[i], j[k]) {
                return Err(OrderError::NotDisjoint(format!("#{i}"), format!("#{k}")));
            }
        }
    }
    let reps: Vec<Rational> = j.iter().map(|a| a.representative()).collect();
    cyclic_order4([&reps[0], &reps[1], &reps[2], &reps[3]])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Member {
    pub label: String,
    pub arc: Arc,
}

/// Finite family of pairwise disjoint arcs, kept in counterclockwise order
/// of their start points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcFamily {
    members: Vec<Member>,
}

impl ArcFamily {
    pub fn new(mut members: Vec<Member>) -> Result<Self, OrderError> {
        let mut labels = BTreeSet::new();
        for m in &members {
            if !labels.insert(m.label.clone()) {
                return Err(OrderError::Format(format!("duplicate label {}", m.label)));
            }
            if let Arc::Interval { a, b } = &m.arc {
                if a == b && members.len() > 1 {
                    return Err(OrderError::Format(format!("{} covers the circle minus a point but is not alone", m.label)));
                }
            }
        }
        for i in 0..members.len() {
            for k in i + 1..members.len() {
                if !arcs_disjoint(&members[i].arc, &members[k].arc) {
                    return Err(OrderError::NotDisjoint(members[i].label.clone(), members[k].label.clone()));
                }
            }
        }
        members.sort_by(|p, q| p.arc.start().cmp(q.arc.start()));
        Ok(ArcFamily { members })
    }

    /// Family of singleton points labelled `p0, p1, ...` in input order.
    pub fn of_points(points: &[Rational]) -> Result<Self, OrderError> {
        Self::new(
            points
                .iter()
                .enumerate()
                .map(|(i, p)| Member { label: format!("p{i}"), arc: Arc::point(p.clone()) })
                .collect(),
        )
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.members.iter().position(|m| m.label == label)
    }

    pub fn get(&self, label: &str) -> Option<&Member> {
        self.members.iter().find(|m| m.label == label)
    }

    pub fn labels(&self) -> Vec<String> {
        self.members.iter().map(|m| m.label.clone()).collect()
    }

    pub fn to_json(&self) -> FamilyJson {
        FamilyJson {
            arcs: self
                .members
                .iter()
                .map(|m| match &m.arc {
                    Arc::Point(p) => ArcJson { kind: "point".into(), a: NumJson::from_rational(p), b: None, label: m.label.clone() },
                    Arc::Interval { a, b } => ArcJson {
                        kind: "interval".into(),
                        a: NumJson::from_rational(a),
                        b: Some(NumJson::from_rational(b)),
                        label: m.label.clone(),
                    },
                })
                .collect(),
        }
    }

    pub fn from_json(j: &FamilyJson) -> Result<Self, OrderError> {
        let members = j
            .arcs
            .iter()
            .map(|a| {
                let start = a.a.to_rational()?;
                let arc = match a.kind.as_str() {
                    "point" => Arc::point(start),
                    "interval" => {
                        let b = a.b.as_ref().ok_or_else(|| OrderError::Format(format!("{}: interval without b", a.label)))?;
                        Arc::interval(start, b.to_rational()?)
                    }
                    k => return Err(OrderError::Format(format!("unknown arc kind {k}"))),
                };
                Ok(Member { label: a.label.clone(), arc })
            })
            .collect::<Result<Vec<_>, OrderError>>()?;
        Self::new(members)
    }
}

/// `{"arcs": [{"kind": "interval", "a": ..., "b": ..., "label": "J1"}, ...]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub arcs: Vec<ArcJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcJson {
    pub kind: String,
    pub a: NumJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<NumJson>,
    pub label: String,
}

/// A bijection of a family's labels: `{"J1": "J2", ...}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ArcBijection {
    pub mapping: BTreeMap<String, String>,
}

impl ArcBijection {
    pub fn identity(family: &ArcFamily) -> Self {
        ArcBijection { mapping: family.members.iter().map(|m| (m.label.clone(), m.label.clone())).collect() }
    }

    /// Sends the member at cyclic position `i` to position `i + k`.
    pub fn shift(family: &ArcFamily, k: usize) -> Self {
        let n = family.len();
        ArcBijection {
            mapping: (0..n).map(|i| (family.members[i].label.clone(), family.members[(i + k) % n].label.clone())).collect(),
        }
    }

    /// Sends the member at cyclic position `i` to position `-i`.
    pub fn reversal(family: &ArcFamily) -> Self {
        let n = family.len();
        ArcBijection {
            mapping: (0..n).map(|i| (family.members[i].label.clone(), family.members[(n - i) % n].label.clone())).collect(),
        }
    }

    pub fn from_pairs<I: IntoIterator<Item = (String, String)>>(pairs: I) -> Self {
        ArcBijection { mapping: pairs.into_iter().collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().all(|(k, v)| k == v)
    }

    pub fn image(&self, label: &str) -> Option<&str> {
        self.mapping.get(label).map(String::as_str)
    }

    pub fn compose(&self, inner: &ArcBijection) -> ArcBijection {
        ArcBijection {
            mapping: inner.mapping.iter().map(|(k, v)| (k.clone(), self.mapping.get(v).cloned().unwrap_or_else(|| v.clone()))).collect(),
        }
    }

    pub fn inverse(&self) -> ArcBijection {
        ArcBijection { mapping: self.mapping.iter().map(|(k, v)| (v.clone(), k.clone())).collect() }
    }

    /// Image index for every member index, after validation.
    pub fn validate(&self, family: &ArcFamily) -> Result<Vec<usize>, OrderError> {
        let n = family.len();
        if self.mapping.len() != n {
            return Err(OrderError::InvalidBijection(format!("{} entries for {} members", self.mapping.len(), n)));
        }
        let mut seen = vec![false; n];
        let mut img = Vec::with_capacity(n);
        for m in &family.members {
            let target = self
                .mapping
                .get(&m.label)
                .ok_or_else(|| OrderError::InvalidBijection(format!("{} has no image", m.label)))?;
            let j = family.index_of(target).ok_or_else(|| OrderError::InvalidBijection(format!("unknown label {target}")))?;
            if seen[j] {
                return Err(OrderError::InvalidBijection(format!("{target} hit twice")));
            }
            seen[j] = true;
            if m.arc.is_point() != family.members[j].arc.is_point() {
                return Err(OrderError::InvalidBijection(format!("{} and {} differ in triviality", m.label, target)));
            }
            img.push(j);
        }
        Ok(img)
    }
}

/// Whether `y3, y4` lie in one component of the circle minus `y1, y2`.
fn same_side(y1: &Rational, y2: &Rational, y3: &Rational, y4: &Rational) -> bool {
    let span = ccw(y1, y2);
    let in3 = ccw(y1, y3) < span;
    let in4 = ccw(y1, y4) < span;
    in3 == in4
}

const DIHEDRAL4: [[usize; 4]; 8] = [
    [0, 1, 2, 3],
    [1, 2, 3, 0],
    [2, 3, 0, 1],
    [3, 0, 1, 2],
    [3, 2, 1, 0],
    [2, 1, 0, 3],
    [1, 0, 3, 2],
    [0, 3, 2, 1],
];

/// Members whose closures touch: `(i, j)` with `end(i) == start(j)`.
fn touching_pairs(family: &ArcFamily) -> Vec<(usize, usize)> {
    let n = family.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && !family.members[i].arc.is_point() && family.members[i].arc.end() == family.members[j].arc.start() {
                out.push((i, j));
            }
        }
    }
    out
}

/// The four-member criterion: whenever `J1 < J2 < J3 < J4`, the images of
/// `J3` and `J4` lie in one component of the circle minus the images of `J1`
/// and `J2`. Families of three or fewer members pass whenever the bijection
/// respects triviality. Members whose closures touch must have touching
/// images, since a homeomorphism preserves shared endpoints.
pub fn is_order_preserving(family: &ArcFamily, h: &ArcBijection) -> Result<bool, OrderError> {
    let img = h.validate(family)?;
    let n = family.len();
    let touch = touching_pairs(family);
    if !touch.is_empty() {
        let image_touch: BTreeSet<(usize, usize)> = touching_pairs(family).into_iter().collect();
        for (i, j) in &touch {
            let (a, b) = (img[*i], img[*j]);
            if !image_touch.contains(&(a, b)) && !image_touch.contains(&(b, a)) {
                return Ok(false);
            }
        }
    }
    if n < 4 {
        return Ok(true);
    }
    // members are stored in cyclic order, so i<j<k<l is a J1<J2<J3<J4 tuple
    // and its dihedral relabelings are the other orderings of the same set
    let reps: Vec<Rational> = family.members.iter().map(|m| m.arc.representative()).collect();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    let quad = [i, j, k, l];
                    for perm in DIHEDRAL4 {
                        let t: Vec<usize> = perm.iter().map(|&p| img[quad[p]]).collect();
                        if !same_side(&reps[t[0]], &reps[t[1]], &reps[t[2]], &reps[t[3]]) {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

/// How complementary gaps are filled when building a compatible map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Synthesis {
    /// Linear on every member and every gap.
    GapLinear,
    /// Additionally sends the point one third into each gap to the middle of
    /// the image gap.
    GapThirdToMidpoint,
}

fn orientation_of_images(family: &ArcFamily, img: &[usize]) -> Orientation {
    if family.len() < 3 {
        // two members meeting at one shared endpoint can only be swapped by
        // a reflection
        let swapped = family.len() == 2 && img[0] == 1;
        return if swapped && touching_pairs(family).len() == 1 { Orientation::Reversing } else { Orientation::Preserving };
    }
    let r: Vec<Rational> = img.iter().take(3).map(|&j| family.members[j].arc.representative()).collect();
    let d1 = ccw(&r[0], &r[1]);
    let d2 = ccw(&r[0], &r[2]);
    if d1 < d2 {
        Orientation::Preserving
    } else {
        Orientation::Reversing
    }
}

/// A circle homeomorphism `g` with `g(J) = h(J)` for every member, linear on
/// each nontrivial member.
pub fn synthesize_compatible(family: &ArcFamily, h: &ArcBijection, strategy: Synthesis) -> Result<MonotonePLMap, OrderError> {
    if !is_order_preserving(family, h)? {
        return Err(OrderError::NotOrderPreserving);
    }
    let img = h.validate(family)?;
    if family.is_empty() {
        return Ok(MonotonePLMap::identity());
    }
    let orient = orientation_of_images(family, &img);
    // vertex -> image vertex, plus whether the arc leaving the vertex
    // counterclockwise belongs to a member
    let mut verts: BTreeMap<Rational, (Rational, bool)> = BTreeMap::new();
    for (i, m) in family.members.iter().enumerate() {
        let target = &family.members[img[i]].arc;
        match (&m.arc, orient) {
            (Arc::Point(p), _) => {
                verts.insert(p.clone(), (target.start().clone(), false));
            }
            (Arc::Interval { a, b }, Orientation::Preserving) => {
                verts.insert(a.clone(), (target.start().clone(), true));
                verts.entry(b.clone()).or_insert((target.end().clone(), false));
            }
            (Arc::Interval { a, b }, Orientation::Reversing) => {
                verts.insert(a.clone(), (target.end().clone(), true));
                verts.entry(b.clone()).or_insert((target.start().clone(), false));
            }
        }
    }
    let d = orient.sign();
    let mut pts: Vec<(Rational, Rational)> = Vec::with_capacity(verts.len());
    let mut inside: Vec<bool> = Vec::with_capacity(verts.len());
    for (x, (y, in_member)) in verts {
        let y = match pts.last() {
            None => y,
            Some((_, prev)) => {
                // unwrap to the next value strictly after (or before) prev
                let mut y = y.clone() + (prev.clone() - y.clone()).floor();
                if d > 0 {
                    while y <= *prev {
                        y += Rational::one();
                    }
                } else {
                    while y >= *prev {
                        y -= Rational::one();
                    }
                }
                y
            }
        };
        pts.push((x, y));
        inside.push(in_member);
    }
    if strategy == Synthesis::GapThirdToMidpoint {
        let n = pts.len();
        let mut extra = Vec::new();
        for i in 0..n {
            if inside[i] {
                continue;
            }
            let (x0, y0) = pts[i].clone();
            let (x1, y1) = if i + 1 < n {
                pts[i + 1].clone()
            } else {
                (pts[0].0.clone() + Rational::one(), pts[0].1.clone() + Rational::from_int(d))
            };
            let third = Rational::one() / Rational::from_int(3);
            let x = x0.clone() + (x1 - x0) * third;
            let y = (y0 + y1) * Rational::half();
            let k = x.floor();
            extra.push((x - k.clone(), y - k * Rational::from_int(d)));
        }
        pts.extend(extra);
    }
    Ok(MonotonePLMap::from_exact(pts, d)?)
}

/// Checks `g(J) = h(J)` memberwise on the vertex data of the family.
pub fn verify_compatible(g: &MonotonePLMap, family: &ArcFamily, h: &ArcBijection) -> Result<bool, OrderError> {
    let img = h.validate(family)?;
    for (i, m) in family.members.iter().enumerate() {
        let target = &family.members[img[i]].arc;
        let ev = |x: &Rational| g.evaluate_exact(x).ok_or(OrderError::Format("compatible maps are exact".into()));
        let ok = match &m.arc {
            Arc::Point(p) => ev(p)? == *target.start(),
            Arc::Interval { a, b } => {
                let (ga, gb) = (ev(a)?, ev(b)?);
                let ends = match g.orientation() {
                    Orientation::Preserving => ga == *target.start() && gb == *target.end(),
                    Orientation::Reversing => ga == *target.end() && gb == *target.start(),
                };
                ends && target.contains(&ev(&m.arc.representative())?)
            }
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn bijection_orientation(family: &ArcFamily, h: &ArcBijection) -> Result<Orientation, OrderError> {
    if family.len() < 3 {
        return Err(OrderError::TooFewMembers(family.len()));
    }
    let g1 = synthesize_compatible(family, h, Synthesis::GapLinear)?;
    let g2 = synthesize_compatible(family, h, Synthesis::GapThirdToMidpoint)?;
    assert_eq!(g1.orientation(), g2.orientation(), "compatible maps disagree on orientation");
    Ok(g1.orientation())
}

/// Rotation number of any map compatible with `h`; 0 when `h` reverses
/// orientation.
pub fn rot_of_bijection(family: &ArcFamily, h: &ArcBijection, tol: f64) -> Result<Rotation, OrderError> {
    let g = synthesize_compatible(family, h, Synthesis::GapLinear)?;
    if g.orientation() == Orientation::Reversing {
        return Ok(Rotation::exact_zero(Orientation::Reversing));
    }
    // periodic vertex orbits have period at most the vertex count
    let vertices = 2 * family.len().max(1) as u64;
    if let Some(r) = rotation::rot_exact_rational(&g, vertices)? {
        let mut out = Rotation::from_exact(r);
        out.orientation = Orientation::Preserving;
        return Ok(out);
    }
    Ok(rotation::rot(&g, tol)?)
}
