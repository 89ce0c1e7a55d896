//! Planar domains: polygons with slit trees, and grid (polyomino) domains.
//!
//! A [`PolygonalDomain`] is an outer counterclockwise simple polygon plus a
//! forest of polylines ("slits") hanging off its vertices. Its interior is
//! the open polygon minus the slits. The [`BoundaryWalk`] is the face walk of
//! that interior: outer edges once, slit edges once per side. Walk parameter
//! `i / L` is the circle coordinate used for prime ends.

mod grid;

pub use grid::{Cell, CellCluster, ClusterReport, GridDomain, GridError, GridJson, GridWalk};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(self, o: Point) -> f64 {
        (self.x - o.x).hypot(self.y - o.y)
    }

    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }

    fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn approx_eq(self, o: Point) -> bool {
        self.dist(o) <= GEOM_EPS
    }
}

/// Coordinates closer than this are treated as the same point.
pub const GEOM_EPS: f64 = 1e-9;

fn orient(a: Point, b: Point, c: Point) -> f64 {
    let v = b.sub(a).cross(c.sub(a));
    if v.abs() <= GEOM_EPS * GEOM_EPS.max(1e-12) * 1e3 {
        0.0
    } else {
        v
    }
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    orient(a, b, p) == 0.0
        && p.x >= a.x.min(b.x) - GEOM_EPS
        && p.x <= a.x.max(b.x) + GEOM_EPS
        && p.y >= a.y.min(b.y) - GEOM_EPS
        && p.y <= a.y.max(b.y) + GEOM_EPS
}

/// Closed segments `ab` and `cd` share at least one point.
fn segments_touch(a: Point, b: Point, c: Point, d: Point) -> bool {
    let (o1, o2, o3, o4) = (orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b));
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        return true;
    }
    on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b)
}

fn point_in_polygon(poly: &[Point], p: Point) -> bool {
    let mut inside = false;
    let n = poly.len();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Slit {
    /// Index of the vertex the slit hangs from: outer vertices first, then
    /// the points of earlier slits in order.
    pub attach_index: usize,
    pub points: Vec<Point>,
}

/// `{"outer": [[x, y], ...], "slits": [{"attach_index": i, "points": [[x, y], ...]}]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainJson {
    pub outer: Vec<[f64; 2]>,
    #[serde(default)]
    pub slits: Vec<SlitJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlitJson {
    pub attach_index: usize,
    pub points: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    TooFewVertices { count: usize },
    NotCounterclockwise,
    SelfIntersection { edges: (usize, usize) },
    BadAttachment { slit: usize, attach_index: usize },
    SlitCrossing { slit: usize, segment: usize },
    NotSimplyConnected { detail: String },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DomainError {
    #[error("domain has a self-intersecting outer polygon")]
    SelfIntersection(ValidationReport),
    #[error("a slit crosses the boundary or another slit")]
    SlitCrossing(ValidationReport),
    #[error("domain interior is not simply connected")]
    NotSimplyConnected(ValidationReport),
    #[error("invalid domain")]
    Invalid(ValidationReport),
}

impl DomainError {
    pub fn report(&self) -> &ValidationReport {
        match self {
            DomainError::SelfIntersection(r)
            | DomainError::SlitCrossing(r)
            | DomainError::NotSimplyConnected(r)
            | DomainError::Invalid(r) => r,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Outer,
    Slit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolygonalDomain {
    outer: Vec<Point>,
    slits: Vec<Slit>,
    vertices: Vec<Point>,
    edges: Vec<Edge>,
}

impl PolygonalDomain {
    /// Builds the vertex and edge tables without validating geometry.
    pub fn new(outer: Vec<Point>, slits: Vec<Slit>) -> Self {
        let mut vertices = outer.clone();
        let n = outer.len();
        let mut edges: Vec<Edge> = (0..n).map(|i| Edge { u: i, v: (i + 1) % n, kind: EdgeKind::Outer }).collect();
        for s in &slits {
            let mut prev = s.attach_index;
            for p in &s.points {
                vertices.push(*p);
                let id = vertices.len() - 1;
                edges.push(Edge { u: prev, v: id, kind: EdgeKind::Slit });
                prev = id;
            }
        }
        PolygonalDomain { outer, slits, vertices, edges }
    }

    pub fn from_json(j: &DomainJson) -> Self {
        let outer = j.outer.iter().map(|p| Point::new(p[0], p[1])).collect();
        let slits = j
            .slits
            .iter()
            .map(|s| Slit { attach_index: s.attach_index, points: s.points.iter().map(|p| Point::new(p[0], p[1])).collect() })
            .collect();
        Self::new(outer, slits)
    }

    pub fn to_json(&self) -> DomainJson {
        DomainJson {
            outer: self.outer.iter().map(|p| [p.x, p.y]).collect(),
            slits: self
                .slits
                .iter()
                .map(|s| SlitJson { attach_index: s.attach_index, points: s.points.iter().map(|p| [p.x, p.y]).collect() })
                .collect(),
        }
    }

    pub fn outer(&self) -> &[Point] {
        &self.outer
    }

    pub fn slits(&self) -> &[Slit] {
        &self.slits
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn outer_edge_count(&self) -> usize {
        self.outer.len()
    }

    pub fn slit_edge_count(&self) -> usize {
        self.edges.len() - self.outer.len()
    }

    /// Number of slit edges incident to each vertex.
    pub fn slit_degree(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for e in self.edges.iter().filter(|e| e.kind == EdgeKind::Slit) {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }

    pub fn is_outer_vertex(&self, v: usize) -> bool {
        v < self.outer.len()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.outer.len();
        if n < 3 {
            report.violations.push(Violation::TooFewVertices { count: n });
            return report;
        }
        let area2: f64 = (0..n).map(|i| self.outer[i].cross(self.outer[(i + 1) % n])).sum();
        if area2 <= 0.0 {
            report.violations.push(Violation::NotCounterclockwise);
        }
        for i in 0..n {
            for j in i + 1..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let (a, b) = (self.outer[i], self.outer[(i + 1) % n]);
                let (c, d) = (self.outer[j], self.outer[(j + 1) % n]);
                let bad = if adjacent {
                    // adjacent edges may only share their common vertex
                    let (shared, other_ab, other_cd) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                    on_segment(a, b, if j == i + 1 { d } else { c }) && !other_cd.approx_eq(shared)
                        || on_segment(c, d, other_ab) && !other_ab.approx_eq(shared)
                } else {
                    segments_touch(a, b, c, d)
                };
                if bad {
                    report.violations.push(Violation::SelfIntersection { edges: (i, j) });
                }
            }
        }
        if !report.is_valid() {
            return report;
        }
        // slits
        let mut vcount = n;
        let mut seg_index = n;
        for (si, s) in self.slits.iter().enumerate() {
            if s.attach_index >= vcount || s.points.is_empty() {
                report.violations.push(Violation::BadAttachment { slit: si, attach_index: s.attach_index });
                vcount += s.points.len();
                seg_index += s.points.len();
                continue;
            }
            for (k, p) in s.points.iter().enumerate() {
                let id = vcount + k;
                if self.vertices[..id].iter().any(|q| q.approx_eq(*p)) {
                    report.violations.push(Violation::NotSimplyConnected {
                        detail: format!("slit {si} point {k} coincides with an existing vertex"),
                    });
                }
            }
            for k in 0..s.points.len() {
                let e = self.edges[seg_index + k];
                let (a, b) = (self.vertices[e.u], self.vertices[e.v]);
                let mid = Point::new((a.x + b.x) / 2.0, (a.y + b.y) / 2.0);
                let mut crossing = !point_in_polygon(&self.outer, mid);
                for (oi, o) in self.edges.iter().enumerate() {
                    if oi == seg_index + k || crossing {
                        continue;
                    }
                    let (c, d) = (self.vertices[o.u], self.vertices[o.v]);
                    let shared = [e.u, e.v].iter().find(|&&x| x == o.u || x == o.v).copied();
                    crossing = match shared {
                        None => segments_touch(a, b, c, d),
                        Some(sv) => {
                            // sharing a vertex: only overlap along a common line is bad
                            let far_e = if sv == e.u { b } else { a };
                            let far_o = if sv == o.u { d } else { c };
                            let s = self.vertices[sv];
                            orient(s, far_e, far_o) == 0.0
                                && far_e.sub(s).x * far_o.sub(s).x + far_e.sub(s).y * far_o.sub(s).y > 0.0
                        }
                    };
                }
                if crossing {
                    report.violations.push(Violation::SlitCrossing { slit: si, segment: k });
                }
            }
            vcount += s.points.len();
            seg_index += s.points.len();
        }
        if report.is_valid() {
            let walk = self.face_walk();
            let expected = self.outer_edge_count() + 2 * self.slit_edge_count();
            if walk.len() != expected {
                report.violations.push(Violation::NotSimplyConnected {
                    detail: format!("interior face walk has {} sides, expected {}", walk.len(), expected),
                });
            }
        }
        report
    }

    fn checked(&self) -> Result<(), DomainError> {
        let r = self.validate();
        if r.is_valid() {
            return Ok(());
        }
        Err(match r.violations[0] {
            Violation::SelfIntersection { .. } => DomainError::SelfIntersection(r),
            Violation::SlitCrossing { .. } => DomainError::SlitCrossing(r),
            Violation::NotSimplyConnected { .. } => DomainError::NotSimplyConnected(r),
            _ => DomainError::Invalid(r),
        })
    }

    /// Neighbours of every vertex sorted counterclockwise by angle.
    fn rotation_system(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        for (v, list) in adj.iter_mut().enumerate() {
            let c = self.vertices[v];
            list.sort_by(|&a, &b| {
                let pa = self.vertices[a].sub(c);
                let pb = self.vertices[b].sub(c);
                pa.y.atan2(pa.x).partial_cmp(&pb.y.atan2(pb.x)).expect("finite")
            });
        }
        adj
    }

    /// Half-edges of the face to the left of the outer edge `0 -> 1`.
    fn face_walk(&self) -> Vec<(usize, usize)> {
        let adj = self.rotation_system();
        let start = (0usize, 1usize);
        let mut walk = vec![start];
        let limit = 2 * self.edges.len() + 2;
        let (mut u, mut v) = start;
        loop {
            let list = &adj[v];
            let pos = list.iter().position(|&w| w == u).expect("edge is in rotation system");
            // next neighbour clockwise from the reversed edge keeps the face on the left
            let w = list[(pos + list.len() - 1) % list.len()];
            u = v;
            v = w;
            if (u, v) == start || walk.len() > limit {
                break;
            }
            walk.push((u, v));
        }
        walk
    }

    fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.iter().position(|e| (e.u == a && e.v == b) || (e.u == b && e.v == a))
    }

    pub fn boundary_walk(&self) -> Result<BoundaryWalk, DomainError> {
        self.checked()?;
        let steps = self
            .face_walk()
            .into_iter()
            .enumerate()
            .map(|(i, (u, v))| {
                let edge = self.edge_id(u, v).expect("walk follows edges");
                let e = self.edges[edge];
                let side = match e.kind {
                    EdgeKind::Outer => Side::Outer,
                    EdgeKind::Slit if e.u == u => Side::Forward,
                    EdgeKind::Slit => Side::Backward,
                };
                WalkStep { index: i, vertex: u, to: v, point: self.vertices[u], edge, side }
            })
            .collect();
        Ok(BoundaryWalk { steps })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Outer,
    /// Slit edge traversed from its attachment end outward.
    Forward,
    Backward,
}

/// One side of one edge in the walk. Step `i` occupies walk parameters
/// `[i/L, (i+1)/L]` and starts at `vertex`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WalkStep {
    pub index: usize,
    pub vertex: usize,
    pub to: usize,
    pub point: Point,
    pub edge: usize,
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryWalk {
    pub steps: Vec<WalkStep>,
}

impl BoundaryWalk {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Walk positions at which each vertex occurs.
    pub fn preimages(&self, vertex: usize) -> Vec<usize> {
        self.steps.iter().filter(|s| s.vertex == vertex).map(|s| s.index).collect()
    }

    pub fn multiplicity(&self, vertex: usize) -> usize {
        self.steps.iter().filter(|s| s.vertex == vertex).count()
    }

    /// Index of the step traversing `u -> v`.
    pub fn step_of(&self, u: usize, v: usize) -> Option<usize> {
        self.steps.iter().position(|s| s.vertex == u && s.to == v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn square_is_valid_with_walk_of_four() {
        let sq = fixtures::square(10.0);
        assert!(sq.validate().is_valid());
        let w = sq.boundary_walk().unwrap();
        assert_eq!(w.len(), 4);
        let mut edges: Vec<usize> = w.steps.iter().map(|s| s.edge).collect();
        edges.sort();
        assert_eq!(edges, vec![0, 1, 2, 3]);
    }

    #[test]
    fn one_slit_walk() {
        let d = fixtures::one_slit_square();
        assert!(d.validate().is_valid(), "{:?}", d.validate());
        let w = d.boundary_walk().unwrap();
        assert_eq!(w.len(), d.outer_edge_count() + 2 * d.slit_edge_count());
        let attach = 1; // (5, 0)
        let tip = d.vertices().len() - 1; // (5, 5)
        let mid = tip - 1; // (5, 2.5)
        assert_eq!(w.multiplicity(attach), 2);
        assert_eq!(w.multiplicity(mid), 2);
        assert_eq!(w.multiplicity(tip), 1);
        for v in [0, 2, 3, 4] {
            assert_eq!(w.multiplicity(v), 1);
        }
        // from the bottom-left edge the walk climbs the left side of the slit
        let seq: Vec<usize> = w.steps.iter().map(|s| s.vertex).collect();
        assert_eq!(seq, vec![0, attach, mid, tip, mid, attach, 2, 3, 4]);
        assert!((w.steps[2].point.x - 5.0).abs() < 1e-12);
    }

    #[test]
    fn t_slit_branch_point_appears_three_times() {
        let d = fixtures::t_slit_square();
        assert!(d.validate().is_valid(), "{:?}", d.validate());
        let w = d.boundary_walk().unwrap();
        let deg = d.slit_degree();
        let branch = (0..deg.len()).find(|&v| deg[v] == 3).unwrap();
        assert_eq!(w.multiplicity(branch), 3);
        assert_eq!(w.len(), d.outer_edge_count() + 2 * d.slit_edge_count());
    }

    #[test]
    fn slit_crossing_outer_boundary_is_rejected() {
        let sq = fixtures::square(10.0);
        let d = PolygonalDomain::new(
            sq.outer().to_vec(),
            vec![Slit { attach_index: 0, points: vec![Point::new(5.0, 5.0), Point::new(5.0, 15.0)] }],
        );
        let r = d.validate();
        assert!(r.violations.iter().any(|v| matches!(v, Violation::SlitCrossing { .. })), "{r:?}");
        assert!(matches!(d.boundary_walk(), Err(DomainError::SlitCrossing(_))));
    }

    #[test]
    fn self_intersecting_outer_is_rejected() {
        let bow = PolygonalDomain::new(
            vec![Point::new(0.0, 0.0), Point::new(1.0, 1.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)],
            vec![],
        );
        let r = bow.validate();
        assert!(!r.is_valid());
    }

    #[test]
    fn slit_closing_a_loop_is_not_simply_connected() {
        let sq = fixtures::square(10.0);
        let d = PolygonalDomain::new(
            sq.outer().to_vec(),
            vec![
                Slit { attach_index: 0, points: vec![Point::new(5.0, 5.0)] },
                Slit { attach_index: 4, points: vec![Point::new(10.0, 0.0)] },
            ],
        );
        let r = d.validate();
        assert!(!r.is_valid());
    }

    #[test]
    fn multiplicity_matches_slit_degree_on_pinwheels() {
        for k in [2, 3, 4, 6] {
            let d = fixtures::pinwheel(k);
            let w = d.boundary_walk().unwrap();
            let deg = d.slit_degree();
            for v in 0..d.vertices().len() {
                let expected = if d.is_outer_vertex(v) { 1 + deg[v] } else { deg[v] };
                assert_eq!(w.multiplicity(v), expected, "k={k} v={v}");
            }
        }
    }
}
