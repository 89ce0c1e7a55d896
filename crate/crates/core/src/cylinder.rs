//! Homeomorphisms of `closure(U) × R` from a closed set of constructors,
//! their action on the two ends, `Rot` through the induced action on a
//! boundary arc family, and a level-displacement diagnostic that separates
//! extendable from non-extendable maps.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::circle::Orientation;
use crate::circular_order::{self, ArcBijection, ArcFamily, OrderError};
use crate::fixtures;
use crate::number::{ratio, Rational};
use crate::planar_domain::{Cell, ClusterReport, GridDomain, Point, PolygonalDomain};
use crate::prime_ends::{self, DomainAutomorphism, LcRotation, PrimeEndError, RotPath};
use crate::rotation::Rotation;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CylinderError {
    #[error("induced bijection is not order preserving")]
    OrderViolation,
    #[error("bijection is not order preserving")]
    NotOrderPreserving,
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("map has no plane action at the given level: {0}")]
    NoPlaneAction(String),
    #[error("cluster action is not a bijection: {0}")]
    ClusterMismatch(String),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    PrimeEnd(#[from] PrimeEndError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ends {
    Fixes,
    Swaps,
}

impl Ends {
    pub fn compose(self, other: Ends) -> Ends {
        if self == other {
            Ends::Fixes
        } else {
            Ends::Swaps
        }
    }
}

impl fmt::Display for Ends {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ends::Fixes => "fixes",
            Ends::Swaps => "swaps",
        })
    }
}

impl FromStr for Ends {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fixes" => Ok(Ends::Fixes),
            "swaps" => Ok(Ends::Swaps),
            other => Err(format!("expected fixes or swaps, got {other:?}")),
        }
    }
}

/// `Rot` when the invariant family has at most two members.
pub fn edge_rule(orientation3: Orientation, ends: Ends, identity: bool) -> Rational {
    let forced_zero = matches!(
        (orientation3, ends),
        (Orientation::Reversing, Ends::Fixes) | (Orientation::Preserving, Ends::Swaps)
    );
    if forced_zero || identity {
        Rational::zero()
    } else {
        ratio(1, 2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum CylinderMap {
    /// `(z, t) ↦ (h(z), t)`.
    Product { h: DomainAutomorphism },
    /// `(x, y, t) ↦ (x, y, t + ⟨(x, y), d⟩)`.
    Shear { direction: [f64; 2] },
    /// `(z, t) ↦ (z, −t)`.
    EndFlip,
    /// `parts[0] ∘ parts[1] ∘ ...`; the last part acts first.
    Composition { parts: Vec<CylinderMap> },
}

impl CylinderMap {
    pub fn product(h: DomainAutomorphism) -> Self {
        CylinderMap::Product { h }
    }

    pub fn vertical_shear() -> Self {
        CylinderMap::Shear { direction: [0.0, 1.0] }
    }

    pub fn orientation3(&self) -> Orientation {
        match self {
            CylinderMap::Product { h } => h.orientation(),
            CylinderMap::Shear { .. } => Orientation::Preserving,
            CylinderMap::EndFlip => Orientation::Reversing,
            CylinderMap::Composition { parts } => {
                parts.iter().fold(Orientation::Preserving, |o, p| o.compose(p.orientation3()))
            }
        }
    }

    pub fn ends(&self) -> Ends {
        match self {
            CylinderMap::Product { .. } | CylinderMap::Shear { .. } => Ends::Fixes,
            CylinderMap::EndFlip => Ends::Swaps,
            CylinderMap::Composition { parts } => parts.iter().fold(Ends::Fixes, |e, p| e.compose(p.ends())),
        }
    }

    /// Image of `(p, t)`. Product maps given as bare vertex maps have no
    /// pointwise action and yield `None`.
    pub fn apply(&self, p: Point, t: f64) -> Option<(Point, f64)> {
        match self {
            CylinderMap::Product { h } => Some((h.apply_point(p)?, t)),
            CylinderMap::Shear { direction } => Some((p, t + p.x * direction[0] + p.y * direction[1])),
            CylinderMap::EndFlip => Some((p, -t)),
            CylinderMap::Composition { parts } => {
                parts.iter().rev().try_fold((p, t), |(q, s), part| part.apply(q, s))
            }
        }
    }

    /// The action on the domain factor; shears and flips act trivially there.
    pub fn plane_part(&self, domain: &PolygonalDomain) -> Result<DomainAutomorphism, PrimeEndError> {
        match self {
            CylinderMap::Product { h } => Ok(h.clone()),
            CylinderMap::Shear { .. } | CylinderMap::EndFlip => Ok(DomainAutomorphism::identity(domain)),
            CylinderMap::Composition { parts } => {
                let mut acc = DomainAutomorphism::identity(domain);
                for p in parts {
                    acc = acc.compose(&p.plane_part(domain)?, domain)?;
                }
                Ok(acc)
            }
        }
    }
}

pub fn ends_behavior(h: &CylinderMap) -> Ends {
    h.ends()
}

/// Validates a member correspondence as the bijection induced by `h` on
/// `family`. Failing order preservation is an error.
pub fn induced_arc_bijection(family: &ArcFamily, h: &CylinderMap, action: &ArcBijection) -> Result<ArcBijection, CylinderError> {
    action.validate(family)?;
    if let CylinderMap::Product { h: DomainAutomorphism::VertexMap { map, .. } } = h {
        if map.iter().enumerate().all(|(i, &m)| i == m) && !action.is_identity() {
            return Err(CylinderError::ClusterMismatch("identity map with a non-identity action".into()));
        }
    }
    if !circular_order::is_order_preserving(family, action)? {
        return Err(CylinderError::OrderViolation);
    }
    Ok(action.clone())
}

/// Matches each cluster with the cluster holding most images of its cells
/// under `cell_map`.
pub fn grid_cluster_action(report: &ClusterReport, grid: &GridDomain, cell_map: impl Fn(Cell) -> Cell) -> Result<ArcBijection, CylinderError> {
    let mut pairs = Vec::new();
    for c in &report.clusters {
        let mut votes: BTreeMap<&str, usize> = BTreeMap::new();
        for &cell in &c.cells {
            let image = cell_map(cell);
            if !grid.occupied(image) {
                return Err(CylinderError::ClusterMismatch(format!("cell {cell:?} maps outside the domain")));
            }
            if let Some(target) = report.cluster_of(image) {
                *votes.entry(target.label.as_str()).or_default() += 1;
            }
        }
        let best = votes
            .into_iter()
            .max_by_key(|&(label, n)| (n, std::cmp::Reverse(label)))
            .ok_or_else(|| CylinderError::ClusterMismatch(format!("{} has no image cluster", c.label)))?;
        pairs.push((c.label.clone(), best.0.to_string()));
    }
    let h = ArcBijection::from_pairs(pairs);
    h.validate(&report.family).map_err(|e| CylinderError::ClusterMismatch(e.to_string()))?;
    Ok(h)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonLcRotation {
    pub rot: Rotation,
    pub family_size: usize,
    pub orientation3: Orientation,
    pub ends: Ends,
    pub path: RotPath,
}

pub fn rot_nonlc(family: &ArcFamily, h: &ArcBijection, meta: &CylinderMap, tol: f64) -> Result<NonLcRotation, CylinderError> {
    h.validate(family)?;
    let (orientation3, ends) = (meta.orientation3(), meta.ends());
    let (rot, path) = if family.len() >= 3 {
        if !circular_order::is_order_preserving(family, h)? {
            return Err(CylinderError::NotOrderPreserving);
        }
        (circular_order::rot_of_bijection(family, h, tol)?, RotPath::CompatibleMap)
    } else {
        let mut r = Rotation::from_exact(edge_rule(orientation3, ends, h.is_identity()));
        r.orientation = orientation3;
        (r, RotPath::EdgeRule)
    };
    Ok(NonLcRotation { rot, family_size: family.len(), orientation3, ends, path })
}

/// `Rot` of a cylinder map over a slit domain with locally connected
/// boundary.
pub fn rot_lc_cylinder(domain: &PolygonalDomain, h: &CylinderMap, tol: f64) -> Result<LcRotation, CylinderError> {
    let plane = h.plane_part(domain)?;
    Ok(prime_ends::rot_lc_oriented(domain, &plane, h.orientation3(), h.ends(), tol)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagnosticFixture {
    Warsaw,
    Square,
}

impl FromStr for DiagnosticFixture {
    type Err = CylinderError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "warsaw" => Ok(DiagnosticFixture::Warsaw),
            "square" => Ok(DiagnosticFixture::Square),
            other => Err(CylinderError::UnknownFixture(other.to_string())),
        }
    }
}

impl DiagnosticFixture {
    pub fn grid(self, n: usize) -> GridDomain {
        match self {
            DiagnosticFixture::Warsaw => fixtures::warsaw(n),
            DiagnosticFixture::Square => fixtures::square_grid(n),
        }
    }

    /// Boundary point the bad prime end (if any) accumulates on.
    pub fn principal_point(self) -> Point {
        match self {
            DiagnosticFixture::Warsaw => Point::new(0.0, -1.0),
            DiagnosticFixture::Square => Point::new(0.0, 0.5),
        }
    }

    /// Vertical extent of the limit bar.
    pub fn bar_length(self) -> f64 {
        match self {
            DiagnosticFixture::Warsaw => 2.0,
            DiagnosticFixture::Square => 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OscillationRow {
    pub resolution: usize,
    pub window_plane_units: f64,
    pub oscillation: f64,
    pub neighborhood_cells: usize,
}

/// Spread of the level displacement of `h` over the boundary cells of the
/// neighbourhood cut off by a disk of diameter `window_cells` cells around
/// the fixture's principal point.
///
/// The neighbourhood is the part of the domain inside the disk together
/// with every piece that removing the disk separates from the far side of
/// the domain.
pub fn oscillation_at(grid: &GridDomain, center: Point, h: &CylinderMap, window_cells: f64) -> Result<OscillationRow, CylinderError> {
    let window = window_cells * grid.cell_size();
    let radius = window / 2.0;
    let inside = |c: Cell| grid.center(c).dist(center) <= radius;
    let cells = grid.cells();
    let far = *cells
        .iter()
        .max_by(|a, b| grid.center(**a).dist(center).total_cmp(&grid.center(**b).dist(center)))
        .expect("nonempty grid");
    let mut reached = vec![false; grid.nrows() * grid.ncols()];
    for c in grid.component_of(far, |c| !inside(c)) {
        reached[grid.index(c)] = true;
    }
    let boundary = |c: Cell| grid.neighbors(c).count() < 4;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut count = 0;
    for &c in &cells {
        if reached[grid.index(c)] || !boundary(c) {
            continue;
        }
        let p = grid.center(c);
        let (_, t) = h.apply(p, 0.0).ok_or_else(|| CylinderError::NoPlaneAction(format!("{h:?}")))?;
        lo = lo.min(t);
        hi = hi.max(t);
        count += 1;
    }
    let oscillation = if count == 0 { 0.0 } else { hi - lo };
    Ok(OscillationRow { resolution: 0, window_plane_units: window, oscillation, neighborhood_cells: count })
}

pub fn equicontinuity_diagnostic(
    fixture: &str,
    resolutions: &[usize],
    h: &CylinderMap,
    window_cells: f64,
) -> Result<Vec<OscillationRow>, CylinderError> {
    let fx: DiagnosticFixture = fixture.parse()?;
    resolutions
        .iter()
        .map(|&n| {
            let grid = fx.grid(n);
            let mut row = oscillation_at(&grid, fx.principal_point(), h, window_cells)?;
            row.resolution = n;
            Ok(row)
        })
        .collect()
}

pub fn oscillation_csv(rows: &[OscillationRow]) -> String {
    let mut out = String::from("resolution,window_plane_units,oscillation\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.resolution, r.window_plane_units, r.oscillation));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circular_order::{Arc, Member};
    use crate::number::ratio;

    fn reflection() -> CylinderMap {
        CylinderMap::product(DomainAutomorphism::reflection(Point::new(0.0, 0.0), 0.0))
    }

    fn identity() -> CylinderMap {
        CylinderMap::product(DomainAutomorphism::rotation(Point::new(0.0, 0.0), 0.0))
    }

    #[test]
    fn ends_parity() {
        assert_eq!(ends_behavior(&identity()), Ends::Fixes);
        assert_eq!(ends_behavior(&CylinderMap::EndFlip), Ends::Swaps);
        let twice = CylinderMap::Composition { parts: vec![CylinderMap::EndFlip, CylinderMap::EndFlip] };
        assert_eq!(ends_behavior(&twice), Ends::Fixes);
        assert_eq!(twice.orientation3(), Orientation::Preserving);
        assert_eq!(CylinderMap::vertical_shear().ends(), Ends::Fixes);
        assert_eq!(reflection().orientation3(), Orientation::Reversing);
    }

    #[test]
    fn apply_composes_right_to_left() {
        let h = CylinderMap::Composition { parts: vec![CylinderMap::EndFlip, CylinderMap::vertical_shear()] };
        let (p, t) = h.apply(Point::new(0.3, 0.5), 1.0).unwrap();
        assert_eq!(p, Point::new(0.3, 0.5));
        assert!((t + 1.5).abs() < 1e-15);
    }

    #[test]
    fn edge_rule_table() {
        use Ends::*;
        use Orientation::*;
        let half = ratio(1, 2);
        let zero = Rational::zero();
        assert_eq!(edge_rule(Preserving, Fixes, true), zero);
        assert_eq!(edge_rule(Preserving, Fixes, false), half);
        assert_eq!(edge_rule(Reversing, Swaps, false), half);
        assert_eq!(edge_rule(Reversing, Swaps, true), zero);
        for id in [true, false] {
            assert_eq!(edge_rule(Reversing, Fixes, id), zero);
            assert_eq!(edge_rule(Preserving, Swaps, id), zero);
        }
    }

    fn two_arcs() -> ArcFamily {
        ArcFamily::new(vec![
            Member { label: "a".into(), arc: Arc::interval(ratio(0, 1), ratio(1, 4)) },
            Member { label: "b".into(), arc: Arc::interval(ratio(1, 2), ratio(3, 4)) },
        ])
        .unwrap()
    }

    #[test]
    fn two_member_swap_is_half() {
        let f = two_arcs();
        let swap = ArcBijection::from_pairs([("a".to_string(), "b".to_string()), ("b".to_string(), "a".to_string())]);
        let r = rot_nonlc(&f, &swap, &identity(), 1e-4).unwrap();
        assert_eq!(r.rot.exact, Some(ratio(1, 2)));
        assert_eq!(r.path, RotPath::EdgeRule);
    }

    #[test]
    fn single_member_identity_is_zero() {
        let f = ArcFamily::new(vec![Member { label: "a".into(), arc: Arc::interval(ratio(0, 1), ratio(0, 1)) }]).unwrap();
        let r = rot_nonlc(&f, &ArcBijection::identity(&f), &identity(), 1e-4).unwrap();
        assert_eq!(r.rot.exact, Some(Rational::zero()));
    }

    #[test]
    fn interleaving_action_is_rejected() {
        let f = ArcFamily::of_points(&[ratio(0, 1), ratio(1, 4), ratio(1, 2), ratio(3, 4)]).unwrap();
        let bad = ArcBijection::from_pairs([
            ("p0".to_string(), "p0".to_string()),
            ("p1".to_string(), "p2".to_string()),
            ("p2".to_string(), "p1".to_string()),
            ("p3".to_string(), "p3".to_string()),
        ]);
        assert_eq!(induced_arc_bijection(&f, &identity(), &bad), Err(CylinderError::OrderViolation));
        assert_eq!(rot_nonlc(&f, &bad, &identity(), 1e-4).unwrap_err(), CylinderError::NotOrderPreserving);
        let id = ArcBijection::identity(&f);
        assert_eq!(induced_arc_bijection(&f, &identity(), &id).unwrap(), id);
    }

    #[test]
    fn comb_tooth_shift_is_one_fifth() {
        let g = fixtures::comb(5, 32);
        let report = g.boundary_clusters(2.0 / 32.0).unwrap();
        assert_eq!(report.family.len(), 10);
        let h = ArcBijection::shift(&report.family, 2);
        let h = induced_arc_bijection(&report.family, &identity(), &h).unwrap();
        let r = rot_nonlc(&report.family, &h, &identity(), 1e-4).unwrap();
        assert_eq!(r.rot.exact, Some(ratio(1, 5)));
    }

    #[test]
    fn comb_mirror_matches_clusters() {
        let g = fixtures::comb(3, 32);
        let report = g.boundary_clusters(2.0 / 32.0).unwrap();
        let w = g.ncols();
        let h = grid_cluster_action(&report, &g, |(r, c)| (r, w - 1 - c)).unwrap();
        assert!(!h.is_identity());
        assert_eq!(h.compose(&h), ArcBijection::identity(&report.family));
        let mirror = reflection();
        let h = induced_arc_bijection(&report.family, &mirror, &h).unwrap();
        let r = rot_nonlc(&report.family, &h, &mirror, 1e-4).unwrap();
        assert_eq!(r.rot.value, 0.0);
        assert_eq!(r.rot.orientation, Orientation::Reversing);
    }

    #[test]
    fn diagnostic_contrast() {
        let shear = CylinderMap::vertical_shear();
        let warsaw = equicontinuity_diagnostic("warsaw", &[32, 64], &shear, 4.0).unwrap();
        for row in &warsaw {
            assert!(row.oscillation >= 0.9 * 2.0, "{row:?}");
        }
        let square = equicontinuity_diagnostic("square", &[32, 64], &shear, 4.0).unwrap();
        for row in &square {
            assert!(row.oscillation <= 4.0 / row.resolution as f64 + 1e-12, "{row:?}");
        }
        let flat = equicontinuity_diagnostic("warsaw", &[32], &identity(), 4.0).unwrap();
        assert_eq!(flat[0].oscillation, 0.0);
        assert_eq!(equicontinuity_diagnostic("torus", &[32], &shear, 4.0).unwrap_err(), CylinderError::UnknownFixture("torus".into()));
    }

    #[test]
    fn csv_header() {
        let rows = vec![OscillationRow { resolution: 32, window_plane_units: 0.125, oscillation: 1.5, neighborhood_cells: 3 }];
        assert_eq!(oscillation_csv(&rows), "resolution,window_plane_units,oscillation\n32,0.125,1.5\n");
    }
}
