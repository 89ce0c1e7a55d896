//! Cutpoints of a slit-domain boundary, the invariant point set `B^`, and the
//! rotation number of a domain automorphism when the boundary is locally
//! connected.
//!
//! Everything lives on the walk circle of [`BoundaryWalk`]: walk position
//! `i` is the circle point `i / L`. The walk map `f` sends a circle point to
//! the plane point the walk visits there, and a plane point is a cutpoint
//! of the boundary exactly when it has two or more walk preimages.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::circle::{MonotonePLMap, Orientation};
use crate::circular_order::{self, ArcBijection, ArcFamily, OrderError};
use crate::cylinder::{edge_rule, Ends};
use crate::number::{format_rational, ratio, Rational};
use crate::planar_domain::{BoundaryWalk, DomainError, EdgeKind, Point, PolygonalDomain};
use crate::rotation::{self, Rotation, RotationError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PrimeEndError {
    #[error("cutpoint set is empty")]
    EmptyB,
    #[error("boundary is a simple closed curve; Rot is undefined")]
    SimpleClosedCurveBoundary,
    #[error("not an automorphism of the domain: {0}")]
    NotAnAutomorphism(String),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Rotation(#[from] RotationError),
}

/// Maximal run of `B` along the walk circle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutRun {
    /// Walk positions of the run's closure, `start <= end` with `end` possibly
    /// past `L` when the run wraps.
    pub start: usize,
    pub end: usize,
    pub start_in_b: bool,
    pub end_in_b: bool,
}

impl CutRun {
    pub fn is_point(&self) -> bool {
        self.start == self.end
    }
}

/// The cutpoint preimages `B` of a walk, as runs in cyclic order.
///
/// Internally the circle is split into `2L` cells: the walk vertex `i`
/// (cell `2i`) and the open edge after it (cell `2i + 1`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutpointSet {
    pub walk_length: usize,
    pub runs: Vec<CutRun>,
    /// Walk multiplicity of the vertex at each walk position.
    pub multiplicity: Vec<usize>,
    pub vertices: Vec<usize>,
    #[serde(skip)]
    cells: Vec<bool>,
}

impl CutpointSet {
    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.cells.iter().all(|&b| b)
    }

    /// Whether the walk point `i / L` is in `B`.
    pub fn contains_position(&self, i: usize) -> bool {
        self.cells[2 * (i % self.walk_length)]
    }

    /// Whether the open walk edge `(i/L, (i+1)/L)` is in `B`.
    pub fn contains_edge(&self, i: usize) -> bool {
        self.cells[2 * (i % self.walk_length) + 1]
    }
}

pub fn cutpoint_set(domain: &PolygonalDomain, walk: &BoundaryWalk) -> CutpointSet {
    let len = walk.len();
    let multiplicity: Vec<usize> = walk.steps.iter().map(|s| walk.multiplicity(s.vertex)).collect();
    let mut cells = vec![false; 2 * len];
    for (i, s) in walk.steps.iter().enumerate() {
        cells[2 * i] = multiplicity[i] >= 2;
        cells[2 * i + 1] = domain.edges()[s.edge].kind == EdgeKind::Slit;
    }
    let n = cells.len();
    let mut runs = Vec::new();
    if cells.iter().any(|&b| b) && !cells.iter().all(|&b| b) {
        // start scanning just after a cell outside B
        let gap = (0..n).find(|&c| !cells[c]).expect("some cell outside B");
        let mut k = 1;
        while k <= n {
            let c = (gap + k) % n;
            if !cells[c] {
                k += 1;
                continue;
            }
            let first = gap + k;
            while k <= n && cells[(gap + k) % n] {
                k += 1;
            }
            let last = gap + k - 1;
            // vertex cell 2i is the point i; edge cell 2i+1 has closure [i, i+1]
            let start = first / 2;
            let end = last.div_ceil(2);
            runs.push(CutRun { start, end, start_in_b: first % 2 == 0, end_in_b: last % 2 == 0 });
        }
        runs.sort_by_key(|r| r.start % len);
        for r in &mut runs {
            let s = r.start % len;
            r.end -= r.start - s;
            r.start = s;
        }
    }
    let vertices = walk.steps.iter().map(|s| s.vertex).collect();
    CutpointSet { walk_length: len, runs, multiplicity, vertices, cells }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BHatPoint {
    pub label: String,
    pub walk_index: usize,
    #[serde(serialize_with = "ser_rational")]
    pub position: Rational,
    pub vertex: usize,
    /// Whether the point itself lies in `B` (run endpoints need not).
    pub in_b: bool,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

/// Isolated points of `B` together with the endpoints of its nontrivial runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BHat {
    pub walk_length: usize,
    pub points: Vec<BHatPoint>,
}

impl BHat {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn positions(&self) -> Vec<Rational> {
        self.points.iter().map(|p| p.position.clone()).collect()
    }

    pub fn index_of_walk(&self, i: usize) -> Option<usize> {
        self.points.iter().position(|p| p.walk_index == i % self.walk_length)
    }

    /// Singleton arc family labelled like the points.
    pub fn family(&self) -> ArcFamily {
        ArcFamily::new(
            self.points
                .iter()
                .map(|p| circular_order::Member { label: p.label.clone(), arc: circular_order::Arc::point(p.position.clone()) })
                .collect(),
        )
        .expect("distinct walk positions")
    }
}

pub fn b_hat(c: &CutpointSet) -> Result<BHat, PrimeEndError> {
    if c.is_empty() {
        return Err(PrimeEndError::EmptyB);
    }
    let len = c.walk_length;
    let mut found: BTreeMap<usize, bool> = BTreeMap::new();
    for r in &c.runs {
        found.insert(r.start % len, r.start_in_b);
        found.insert(r.end % len, r.end_in_b);
    }
    let points = found
        .into_iter()
        .enumerate()
        .map(|(k, (i, in_b))| BHatPoint {
            label: format!("b{k}"),
            walk_index: i,
            position: ratio(i as i64, len as i64),
            vertex: c.vertices[i],
            in_b,
        })
        .collect();
    Ok(BHat { walk_length: len, points })
}

/// Checks the separation property of multiplicity-2 vertices: the walk
/// positions strictly between the two preimages and those strictly outside
/// never visit a common vertex. Returns the first offending pair.
pub fn noon_violation(walk: &BoundaryWalk) -> Option<(usize, usize)> {
    let len = walk.len();
    for s in &walk.steps {
        let pre = walk.preimages(s.vertex);
        if pre.len() != 2 {
            continue;
        }
        let (x, y) = (pre[0], pre[1]);
        for a in x + 1..y {
            for b in (y + 1..len).chain(0..x) {
                let (va, vb) = (walk.steps[a].vertex, walk.steps[b].vertex);
                if va == vb {
                    return Some((a, b));
                }
            }
        }
    }
    None
}

/// Symmetry of a slit domain, mapping vertices to vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainAutomorphism {
    /// Rotation by `turns` about `center`, or reflection in the line through
    /// `center` at angle `axis_turns` when `reflect` is set.
    Rigid {
        center: [f64; 2],
        #[serde(default)]
        turns: f64,
        #[serde(default)]
        reflect: bool,
        #[serde(default)]
        axis_turns: f64,
    },
    VertexMap { map: Vec<usize>, orientation: Orientation },
}

/// Distance under which transformed vertices are matched.
pub const MATCH_EPS: f64 = 1e-7;

impl DomainAutomorphism {
    pub fn identity(domain: &PolygonalDomain) -> Self {
        DomainAutomorphism::VertexMap { map: (0..domain.vertices().len()).collect(), orientation: Orientation::Preserving }
    }

    pub fn rotation(center: Point, turns: f64) -> Self {
        DomainAutomorphism::Rigid { center: [center.x, center.y], turns, reflect: false, axis_turns: 0.0 }
    }

    pub fn reflection(center: Point, axis_turns: f64) -> Self {
        DomainAutomorphism::Rigid { center: [center.x, center.y], turns: 0.0, reflect: true, axis_turns }
    }

    pub fn orientation(&self) -> Orientation {
        match self {
            DomainAutomorphism::Rigid { reflect: true, .. } => Orientation::Reversing,
            DomainAutomorphism::Rigid { .. } => Orientation::Preserving,
            DomainAutomorphism::VertexMap { orientation, .. } => *orientation,
        }
    }

    /// Image of a plane point; vertex maps have no pointwise action.
    pub fn apply_point(&self, p: Point) -> Option<Point> {
        let DomainAutomorphism::Rigid { center, turns, reflect, axis_turns } = self else {
            return None;
        };
        let (dx, dy) = (p.x - center[0], p.y - center[1]);
        let tau = std::f64::consts::TAU;
        let (x, y) = if *reflect {
            let (s, c) = (2.0 * tau * axis_turns).sin_cos();
            (c * dx + s * dy, s * dx - c * dy)
        } else {
            let (s, c) = (tau * turns).sin_cos();
            (c * dx - s * dy, s * dx + c * dy)
        };
        Some(Point::new(center[0] + x, center[1] + y))
    }

    /// The vertex permutation, checked to preserve edges and their kinds.
    pub fn vertex_map(&self, domain: &PolygonalDomain) -> Result<Vec<usize>, PrimeEndError> {
        let verts = domain.vertices();
        let map: Vec<usize> = match self {
            DomainAutomorphism::VertexMap { map, .. } => map.clone(),
            DomainAutomorphism::Rigid { .. } => verts
                .iter()
                .enumerate()
                .map(|(i, &p)| {
                    let q = self.apply_point(p).expect("rigid");
                    verts
                        .iter()
                        .position(|&v| v.dist(q) <= MATCH_EPS * (1.0 + q.x.abs().max(q.y.abs())))
                        .ok_or_else(|| PrimeEndError::NotAnAutomorphism(format!("vertex {i} has no image vertex")))
                })
                .collect::<Result<_, _>>()?,
        };
        if map.len() != verts.len() {
            return Err(PrimeEndError::NotAnAutomorphism(format!("map has {} entries for {} vertices", map.len(), verts.len())));
        }
        let mut seen = vec![false; map.len()];
        for &m in &map {
            if m >= map.len() || std::mem::replace(&mut seen[m], true) {
                return Err(PrimeEndError::NotAnAutomorphism("vertex map is not a bijection".into()));
            }
        }
        for e in domain.edges() {
            let (a, b) = (map[e.u], map[e.v]);
            let hit = domain.edges().iter().find(|o| (o.u == a && o.v == b) || (o.u == b && o.v == a));
            match hit {
                Some(o) if o.kind == e.kind => {}
                _ => return Err(PrimeEndError::NotAnAutomorphism(format!("edge {}-{} has no matching image", e.u, e.v))),
            }
        }
        Ok(map)
    }

    /// `self ∘ inner` as a vertex map.
    pub fn compose(&self, inner: &DomainAutomorphism, domain: &PolygonalDomain) -> Result<DomainAutomorphism, PrimeEndError> {
        let (outer_map, inner_map) = (self.vertex_map(domain)?, inner.vertex_map(domain)?);
        Ok(DomainAutomorphism::VertexMap {
            map: inner_map.iter().map(|&v| outer_map[v]).collect(),
            orientation: self.orientation().compose(inner.orientation()),
        })
    }

    pub fn inverse(&self, domain: &PolygonalDomain) -> Result<DomainAutomorphism, PrimeEndError> {
        let map = self.vertex_map(domain)?;
        let mut inv = vec![0; map.len()];
        for (i, &m) in map.iter().enumerate() {
            inv[m] = i;
        }
        Ok(DomainAutomorphism::VertexMap { map: inv, orientation: self.orientation() })
    }
}

/// Permutation of walk steps induced by an automorphism.
fn step_permutation(domain: &PolygonalDomain, walk: &BoundaryWalk, a: &DomainAutomorphism) -> Result<Vec<usize>, PrimeEndError> {
    let map = a.vertex_map(domain)?;
    let reversing = a.orientation() == Orientation::Reversing;
    walk.steps
        .iter()
        .map(|s| {
            let (u, v) = (map[s.vertex], map[s.to]);
            let (u, v) = if reversing { (v, u) } else { (u, v) };
            walk.step_of(u, v).ok_or_else(|| {
                PrimeEndError::NotAnAutomorphism(format!("image of walk step {} is not on the walk; check orientation", s.index))
            })
        })
        .collect()
}

/// The circle map of the walk circle induced by `a`, linear on every walk
/// edge.
pub fn induced_walk_map(domain: &PolygonalDomain, a: &DomainAutomorphism) -> Result<MonotonePLMap, PrimeEndError> {
    let walk = domain.boundary_walk()?;
    induced_on_walk(domain, &walk, a)
}

fn induced_on_walk(domain: &PolygonalDomain, walk: &BoundaryWalk, a: &DomainAutomorphism) -> Result<MonotonePLMap, PrimeEndError> {
    let sigma = step_permutation(domain, walk, a)?;
    let len = walk.len() as i64;
    let reversing = a.orientation() == Orientation::Reversing;
    // image of walk position i, unwrapped monotonically from i = 0
    let mut points = Vec::with_capacity(sigma.len());
    let mut prev: Option<i64> = None;
    for (i, &s) in sigma.iter().enumerate() {
        let mut y = if reversing { s as i64 + 1 } else { s as i64 };
        if let Some(p) = prev {
            if reversing {
                while y >= p {
                    y -= len;
                }
            } else {
                while y <= p {
                    y += len;
                }
            }
        }
        prev = Some(y);
        points.push((ratio(i as i64, len), ratio(y, len)));
    }
    let degree = if reversing { -1 } else { 1 };
    Ok(MonotonePLMap::from_exact(points, degree).map_err(OrderError::from)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RotPath {
    /// `|B^| = 2`: decided by orientation, ends and whether the lines swap.
    EdgeRule,
    /// Rotation number of a circle map compatible with the action on `B^`.
    CompatibleMap,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LcRotation {
    pub rot: Rotation,
    pub b_hat_size: usize,
    pub orientation: Orientation,
    pub ends: Ends,
    pub path: RotPath,
    /// Rotation number of the induced walk map itself, for comparison.
    pub walk_map_rot: Rotation,
}

/// Action of `g` on the points of `B^`, as a label bijection.
pub fn b_hat_action(bh: &BHat, g: &MonotonePLMap) -> Result<ArcBijection, PrimeEndError> {
    let pairs = bh
        .points
        .iter()
        .map(|p| {
            let image = g.evaluate_exact(&p.position).expect("exact walk map");
            bh.points
                .iter()
                .find(|q| q.position == image)
                .map(|q| (p.label.clone(), q.label.clone()))
                .ok_or_else(|| PrimeEndError::NotAnAutomorphism(format!("B^ point {} is not mapped into B^", p.label)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ArcBijection::from_pairs(pairs))
}

/// `Rot` from the action on `B^` alone.
pub fn rot_from_b_hat(
    bh: &BHat,
    h: &ArcBijection,
    orientation: Orientation,
    ends: Ends,
    tol: f64,
) -> Result<(Rotation, RotPath), PrimeEndError> {
    if bh.len() == 2 {
        let r = edge_rule(orientation, ends, h.is_identity());
        let mut rot = Rotation::from_exact(r);
        rot.orientation = orientation;
        return Ok((rot, RotPath::EdgeRule));
    }
    let rot = circular_order::rot_of_bijection(&bh.family(), h, tol)?;
    Ok((rot, RotPath::CompatibleMap))
}

pub fn rot_lc(domain: &PolygonalDomain, a: &DomainAutomorphism, ends: Ends, tol: f64) -> Result<LcRotation, PrimeEndError> {
    rot_lc_oriented(domain, a, a.orientation(), ends, tol)
}

/// [`rot_lc`] with the orientation of the 3-dimensional map given
/// separately; it only matters when `|B^| = 2`.
pub fn rot_lc_oriented(
    domain: &PolygonalDomain,
    a: &DomainAutomorphism,
    orientation3: Orientation,
    ends: Ends,
    tol: f64,
) -> Result<LcRotation, PrimeEndError> {
    let walk = domain.boundary_walk()?;
    let cut = cutpoint_set(domain, &walk);
    let bh = b_hat(&cut).map_err(|_| PrimeEndError::SimpleClosedCurveBoundary)?;
    let g = induced_on_walk(domain, &walk, a)?;
    let h = b_hat_action(&bh, &g)?;
    let (rot, path) = rot_from_b_hat(&bh, &h, orientation3, ends, tol)?;
    let walk_map_rot = rotation::rot(&g, tol)?;
    Ok(LcRotation { rot, b_hat_size: bh.len(), orientation: orientation3, ends, path, walk_map_rot })
}

/// Whether two rotation results agree exactly when both are exact.
pub fn same_exact(a: &Rotation, b: &Rotation) -> bool {
    match (&a.exact, &b.exact) {
        (Some(x), Some(y)) => x == y,
        _ => false,
    }
}

/// Zero as an exact rotation result, for callers that short-circuit.
pub fn zero_rotation(orientation: Orientation) -> Rotation {
    let mut r = Rotation::from_exact(Rational::zero());
    r.orientation = orientation;
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn square_has_empty_b() {
        let d = fixtures::square(1.0);
        let w = d.boundary_walk().unwrap();
        let c = cutpoint_set(&d, &w);
        assert!(c.is_empty());
        assert_eq!(b_hat(&c), Err(PrimeEndError::EmptyB));
        let id = DomainAutomorphism::identity(&d);
        assert_eq!(rot_lc(&d, &id, Ends::Fixes, 1e-6).unwrap_err(), PrimeEndError::SimpleClosedCurveBoundary);
    }

    #[test]
    fn one_slit_b_and_b_hat() {
        let d = fixtures::one_slit_square();
        let w = d.boundary_walk().unwrap();
        let c = cutpoint_set(&d, &w);
        // walk: 0 a m t m a 2 3 4 with a, m doubled
        assert_eq!(c.runs.len(), 2);
        assert_eq!((c.runs[0].start, c.runs[0].end, c.runs[0].start_in_b, c.runs[0].end_in_b), (1, 3, true, false));
        assert_eq!((c.runs[1].start, c.runs[1].end, c.runs[1].start_in_b, c.runs[1].end_in_b), (3, 5, false, true));
        assert!(!c.contains_position(3));
        assert!(c.contains_position(1) && c.contains_position(5));
        assert!(!c.is_full());
        let bh = b_hat(&c).unwrap();
        let idx: Vec<usize> = bh.points.iter().map(|p| p.walk_index).collect();
        assert_eq!(idx, vec![1, 3, 5]);
        assert_eq!(bh.points[0].vertex, bh.points[2].vertex);
        assert!(!bh.points[1].in_b);
    }

    #[test]
    fn t_slit_branch_preimages_are_in_b() {
        let d = fixtures::t_slit_square();
        let w = d.boundary_walk().unwrap();
        let c = cutpoint_set(&d, &w);
        let deg = d.slit_degree();
        let branch = (0..deg.len()).find(|&v| deg[v] == 3).unwrap();
        let pre = w.preimages(branch);
        assert_eq!(pre.len(), 3);
        assert!(pre.iter().all(|&i| c.contains_position(i)));
        for (i, s) in w.steps.iter().enumerate() {
            assert_eq!(c.contains_edge(i), d.edges()[s.edge].kind == EdgeKind::Slit);
        }
    }

    #[test]
    fn pinwheel_b_hat_sizes() {
        for k in [2, 3, 4, 6] {
            let d = fixtures::pinwheel(k);
            let w = d.boundary_walk().unwrap();
            let bh = b_hat(&cutpoint_set(&d, &w)).unwrap();
            assert_eq!(bh.len(), 3 * k);
        }
    }

    #[test]
    fn isolated_cutpoint() {
        let c = CutpointSet {
            walk_length: 4,
            runs: vec![CutRun { start: 2, end: 2, start_in_b: true, end_in_b: true }],
            multiplicity: vec![1, 1, 2, 1],
            vertices: vec![0, 1, 2, 3],
            cells: vec![false, false, false, false, true, false, false, false],
        };
        let bh = b_hat(&c).unwrap();
        assert_eq!(bh.len(), 1);
        assert_eq!(bh.points[0].position, ratio(1, 2));
    }

    #[test]
    fn identity_induces_identity() {
        let d = fixtures::pinwheel(3);
        let g = induced_walk_map(&d, &DomainAutomorphism::identity(&d)).unwrap();
        assert_eq!(g, MonotonePLMap::identity());
    }

    #[test]
    fn pinwheel_quarter_turn() {
        let d = fixtures::pinwheel(4);
        let a = DomainAutomorphism::rotation(Point::new(0.0, 0.0), 0.25);
        let g = induced_walk_map(&d, &a).unwrap();
        assert_eq!(rotation::rot_exact_rational(&g, 16).unwrap(), Some(ratio(1, 4)));
        let r = rot_lc(&d, &a, Ends::Fixes, 1e-6).unwrap();
        assert_eq!(r.rot.exact, Some(ratio(1, 4)));
        assert_eq!(r.b_hat_size, 12);
        assert_eq!(r.path, RotPath::CompatibleMap);
        assert!(same_exact(&r.rot, &r.walk_map_rot));
    }

    #[test]
    fn one_slit_reflection() {
        let d = fixtures::one_slit_square();
        let a = DomainAutomorphism::reflection(Point::new(5.0, 5.0), 0.25);
        let g = induced_walk_map(&d, &a).unwrap();
        assert_eq!(g.orientation(), Orientation::Reversing);
        let w = d.boundary_walk().unwrap();
        let bh = b_hat(&cutpoint_set(&d, &w)).unwrap();
        let h = b_hat_action(&bh, &g).unwrap();
        assert_eq!(h.image("b1"), Some("b1"));
        assert_eq!(h.image("b0"), Some("b2"));
        assert_eq!(h.image("b2"), Some("b0"));
        let r = rot_lc(&d, &a, Ends::Fixes, 1e-6).unwrap();
        assert_eq!(r.rot.value, 0.0);
        assert_eq!(r.orientation, Orientation::Reversing);
    }

    #[test]
    fn reflection_declared_as_preserving_is_rejected() {
        let d = fixtures::one_slit_square();
        let map = DomainAutomorphism::reflection(Point::new(5.0, 5.0), 0.25).vertex_map(&d).unwrap();
        let bad = DomainAutomorphism::VertexMap { map, orientation: Orientation::Preserving };
        assert!(matches!(induced_walk_map(&d, &bad), Err(PrimeEndError::NotAnAutomorphism(_))));
        let skew = DomainAutomorphism::rotation(Point::new(5.0, 5.0), 0.1);
        assert!(matches!(induced_walk_map(&d, &skew), Err(PrimeEndError::NotAnAutomorphism(_))));
    }

    #[test]
    fn two_slit_half_turn() {
        let d = fixtures::two_slit();
        let a = DomainAutomorphism::rotation(Point::new(0.0, 0.0), 0.5);
        let r = rot_lc(&d, &a, Ends::Fixes, 1e-6).unwrap();
        assert_eq!(r.rot.exact, Some(ratio(1, 2)));
    }

    #[test]
    fn two_point_b_hat_uses_edge_rule() {
        let bh = BHat {
            walk_length: 4,
            points: vec![
                BHatPoint { label: "b0".into(), walk_index: 0, position: ratio(0, 1), vertex: 0, in_b: true },
                BHatPoint { label: "b1".into(), walk_index: 2, position: ratio(1, 2), vertex: 2, in_b: true },
            ],
        };
        let swap = ArcBijection::from_pairs([("b0".to_string(), "b1".to_string()), ("b1".to_string(), "b0".to_string())]);
        let (r, path) = rot_from_b_hat(&bh, &swap, Orientation::Preserving, Ends::Fixes, 1e-6).unwrap();
        assert_eq!(path, RotPath::EdgeRule);
        assert_eq!(r.exact, Some(ratio(1, 2)));
        let (r, _) = rot_from_b_hat(&bh, &swap, Orientation::Reversing, Ends::Fixes, 1e-6).unwrap();
        assert_eq!(r.exact, Some(ratio(0, 1)));
    }

    #[test]
    fn noon_holds_on_fixtures() {
        for d in [fixtures::one_slit_square(), fixtures::t_slit_square(), fixtures::pinwheel(4), fixtures::two_slit()] {
            let w = d.boundary_walk().unwrap();
            assert_eq!(noon_violation(&w), None);
            let c = cutpoint_set(&d, &w);
            assert!(!c.is_empty() && !c.is_full());
        }
    }
}
