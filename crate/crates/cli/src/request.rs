//! Fully resolved inputs of one run, and their evaluation.
//!
//! A [`Request`] holds everything a command needs, inline, so the `inputs`
//! section of a report can be executed again without the original files.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use primend_core::circle::{MapJson, MonotonePLMap, Orientation};
use primend_core::circular_order::{self, ArcBijection, ArcFamily, FamilyJson};
use primend_core::cylinder::{self, CylinderMap, Ends};
use primend_core::fixtures;
use primend_core::number::format_rational;
use primend_core::planar_domain::{DomainJson, GridDomain, GridJson, PolygonalDomain, GEOM_EPS};
use primend_core::prime_ends::{self, DomainAutomorphism, MATCH_EPS};
use primend_core::rotation::{self, Rotation, EXACT_BUDGET, EXACT_PERIOD_LIMIT, ITERATION_CAP};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum MapSource {
    Inline { map: MapJson },
    Random { seed: u64, breakpoints: usize },
}

impl MapSource {
    pub fn build(&self) -> Result<MonotonePLMap> {
        Ok(match self {
            MapSource::Inline { map } => MonotonePLMap::from_json(map)?,
            MapSource::Random { seed, breakpoints } => MonotonePLMap::random(*seed, *breakpoints),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum DomainSource {
    Fixture { name: String },
    Polygon { domain: DomainJson },
    Grid { grid: GridJson },
}

pub enum Domain {
    Polygon(PolygonalDomain),
    Grid(GridDomain),
}

fn parse_args<const N: usize>(name: &str, parts: &[&str]) -> Result<[usize; N]> {
    if parts.len() != N {
        bail!("fixture {name:?} takes {N} numeric parameter(s)");
    }
    let mut out = [0; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse().map_err(|_| anyhow!("bad fixture parameter {p:?} in {name:?}"))?;
    }
    Ok(out)
}

/// Named fixtures: `square`, `one-slit`, `t-slit`, `two-slit`, `pinwheel:K`,
/// `square-grid:N`, `comb:TEETH:N`, `warsaw:N`.
pub fn fixture(name: &str) -> Result<Domain> {
    let parts: Vec<&str> = name.split(':').collect();
    let args = &parts[1..];
    Ok(match parts[0] {
        "square" => Domain::Polygon(fixtures::square(parse_args::<0>(name, args).map(|_| 1.0)?)),
        "one-slit" => Domain::Polygon(parse_args::<0>(name, args).map(|_| fixtures::one_slit_square())?),
        "t-slit" => Domain::Polygon(parse_args::<0>(name, args).map(|_| fixtures::t_slit_square())?),
        "two-slit" => Domain::Polygon(parse_args::<0>(name, args).map(|_| fixtures::two_slit())?),
        "pinwheel" => {
            let [k] = parse_args(name, args)?;
            if k < 2 {
                bail!("pinwheel needs at least 2 slits");
            }
            Domain::Polygon(fixtures::pinwheel(k))
        }
        "square-grid" => {
            let [n] = parse_args(name, args)?;
            if n == 0 {
                bail!("square-grid needs a positive resolution");
            }
            Domain::Grid(fixtures::square_grid(n))
        }
        "comb" => {
            let [teeth, n] = parse_args(name, args)?;
            if teeth == 0 || n < 2 || (n - 2) / teeth < 4 {
                bail!("comb:{teeth}:{n} leaves no gaps between teeth");
            }
            Domain::Grid(fixtures::comb(teeth, n))
        }
        "warsaw" => {
            let [n] = parse_args(name, args)?;
            if n < 2 {
                bail!("warsaw needs resolution at least 2");
            }
            Domain::Grid(fixtures::warsaw(n))
        }
        other => bail!("unknown fixture {other:?}"),
    })
}

impl DomainSource {
    pub fn build(&self) -> Result<Domain> {
        match self {
            DomainSource::Fixture { name } => fixture(name),
            DomainSource::Polygon { domain } => Ok(Domain::Polygon(PolygonalDomain::from_json(domain))),
            DomainSource::Grid { grid } => Ok(Domain::Grid(GridDomain::from_json(grid)?)),
        }
    }

    /// Reads a domain file, telling polygons from grids by their keys.
    pub fn from_value(v: Value) -> Result<Self> {
        if v.get("rows").is_some() {
            Ok(DomainSource::Grid { grid: serde_json::from_value(v)? })
        } else if v.get("outer").is_some() {
            Ok(DomainSource::Polygon { domain: serde_json::from_value(v)? })
        } else {
            bail!("domain file needs \"outer\" (polygon) or \"rows\" (grid)")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CylTarget {
    /// An invariant arc family with the induced bijection.
    Family { family: FamilyJson, bijection: ArcBijection },
    /// A slit domain; the plane part of the map acts on its boundary walk.
    Polygon { domain: DomainSource },
    /// A grid domain whose boundary clusters are shifted cyclically.
    Grid { domain: DomainSource, scale: Option<f64>, shift: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Request {
    Rotnum { map: MapSource, tol: f64, n: Option<u64>, x0: f64 },
    OrderCheck { family: FamilyJson, bijection: ArcBijection, rot: bool, tol: f64 },
    DomainAnalyze { domain: DomainSource, scale: Option<f64> },
    RotLc { domain: DomainSource, automorphism: DomainAutomorphism, ends: Ends, tol: f64 },
    RotCyl { target: CylTarget, map: CylinderMap, tol: f64 },
    Demo { fixture: String, resolutions: Vec<usize>, window: f64, map: CylinderMap },
}

/// Errors that carry their own exit status.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("domain is invalid: {0}")]
    InvalidDomain(String),
}

pub struct Outcome {
    pub results: Value,
    pub warnings: Vec<String>,
    pub thresholds: BTreeMap<String, Value>,
    /// Plot-ready CSV for sweep commands.
    pub csv: Option<String>,
}

impl Outcome {
    fn new(results: Value) -> Self {
        Outcome { results, warnings: Vec::new(), thresholds: BTreeMap::new(), csv: None }
    }

    fn threshold(mut self, name: &str, v: impl Into<Value>) -> Self {
        self.thresholds.insert(name.to_string(), v.into());
        self
    }

    fn rotation_limits(self, tol: f64) -> Self {
        self.threshold("tol", tol)
            .threshold("iteration_cap", ITERATION_CAP)
            .threshold("exact_period_limit", EXACT_PERIOD_LIMIT)
            .threshold("exact_budget", EXACT_BUDGET)
    }
}

fn exact_str(r: &Rotation) -> Value {
    r.exact.as_ref().map_or(Value::Null, |x| Value::String(format_rational(x)))
}

fn orientation_str(o: Orientation) -> &'static str {
    match o {
        Orientation::Preserving => "preserving",
        Orientation::Reversing => "reversing",
    }
}

fn grid_scale(grid: &GridDomain, scale: Option<f64>) -> f64 {
    scale.unwrap_or(2.0 * grid.cell_size())
}

impl Request {
    pub fn execute(&self) -> Result<Outcome> {
        match self {
            Request::Rotnum { map, tol, n, x0 } => rotnum(map, *tol, *n, *x0),
            Request::OrderCheck { family, bijection, rot, tol } => order_check(family, bijection, *rot, *tol),
            Request::DomainAnalyze { domain, scale } => analyze(domain, *scale),
            Request::RotLc { domain, automorphism, ends, tol } => rot_lc(domain, automorphism, *ends, *tol),
            Request::RotCyl { target, map, tol } => rot_cyl(target, map, *tol),
            Request::Demo { fixture, resolutions, window, map } => demo(fixture, resolutions, *window, map),
        }
    }
}

fn rotnum(source: &MapSource, tol: f64, n: Option<u64>, x0: f64) -> Result<Outcome> {
    let m = source.build()?;
    let r = rotation::rot(&m, tol)?;
    let interval = match n {
        Some(n) if m.orientation() == Orientation::Preserving => Some(rotation::rot_interval(&m, n, x0)?),
        _ => r.interval.clone(),
    };
    let (lo, hi, iterates) = match &interval {
        Some(iv) => (json!(iv.lo), json!(iv.hi), json!(iv.n)),
        None => (Value::Null, Value::Null, Value::Null),
    };
    let results = json!({
        "value": r.value,
        "exact": exact_str(&r),
        "lo": lo,
        "hi": hi,
        "n": iterates,
        "orientation": orientation_str(r.orientation),
        "fixed_points": r.fixed_points,
        "breakpoints": m.breakpoint_count(),
        "map": serde_json::to_value(m.to_json())?,
    });
    let mut out = Outcome::new(results).rotation_limits(tol).threshold("x0", x0);
    if let Some(n) = n {
        out = out.threshold("n", n);
    }
    Ok(out)
}

fn order_check(family: &FamilyJson, bijection: &ArcBijection, rot: bool, tol: f64) -> Result<Outcome> {
    let family = ArcFamily::from_json(family)?;
    let preserving = circular_order::is_order_preserving(&family, bijection)?;
    let mut results = json!({ "order_preserving": preserving, "family_size": family.len() });
    if preserving {
        let g = circular_order::synthesize_compatible(&family, bijection, circular_order::Synthesis::GapLinear)?;
        results["orientation"] = json!(orientation_str(g.orientation()));
        results["compatible_map"] = serde_json::to_value(g.to_json())?;
        if rot {
            let r = circular_order::rot_of_bijection(&family, bijection, tol)?;
            results["rot"] = json!(r.value);
            results["exact"] = exact_str(&r);
        }
    }
    let out = Outcome::new(results);
    Ok(if rot { out.rotation_limits(tol) } else { out })
}

fn analyze(source: &DomainSource, scale: Option<f64>) -> Result<Outcome> {
    match source.build()? {
        Domain::Polygon(d) => analyze_polygon(&d),
        Domain::Grid(g) => {
            let scale = grid_scale(&g, scale);
            let report = g.boundary_clusters(scale)?;
            let results = json!({
                "kind": "grid",
                "cell_count": g.cell_count(),
                "walk_length": report.walk_length,
                "clusters": serde_json::to_value(
                    report.clusters.iter().map(|c| json!({
                        "label": c.label,
                        "kind": c.kind,
                        "walk_start": c.walk_start,
                        "walk_end": c.walk_end,
                        "cells": c.cells.len(),
                    })).collect::<Vec<_>>()
                )?,
                "family": serde_json::to_value(report.family.to_json())?,
            });
            Ok(Outcome::new(results).threshold("scale", scale))
        }
    }
}

fn analyze_polygon(d: &PolygonalDomain) -> Result<Outcome> {
    let report = d.validate();
    if !report.is_valid() {
        return Err(RunError::InvalidDomain(serde_json::to_string(&report.violations)?).into());
    }
    let walk = d.boundary_walk()?;
    let cut = prime_ends::cutpoint_set(d, &walk);
    let mut multiplicity = serde_json::Map::new();
    for v in 0..d.vertices().len() {
        multiplicity.insert(v.to_string(), json!(walk.multiplicity(v)));
    }
    let mut warnings = Vec::new();
    let b_hat = match prime_ends::b_hat(&cut) {
        Ok(bh) => serde_json::to_value(&bh.points)?,
        Err(_) => {
            warnings.push("simple closed curve: Rot undefined".to_string());
            json!([])
        }
    };
    let results = json!({
        "kind": "polygon",
        "vertex_count": d.vertices().len(),
        "walk_length": walk.len(),
        "walk": walk.steps.iter().map(|s| s.vertex).collect::<Vec<_>>(),
        "multiplicity": multiplicity,
        "b_runs": serde_json::to_value(&cut.runs)?,
        "b_hat": b_hat,
    });
    let mut out = Outcome::new(results).threshold("geom_eps", GEOM_EPS);
    out.warnings = warnings;
    Ok(out)
}

fn polygon(source: &DomainSource) -> Result<PolygonalDomain> {
    match source.build()? {
        Domain::Polygon(d) => {
            let report = d.validate();
            if !report.is_valid() {
                return Err(RunError::InvalidDomain(serde_json::to_string(&report.violations)?).into());
            }
            Ok(d)
        }
        Domain::Grid(_) => bail!("a polygonal domain is required here"),
    }
}

fn lc_results(r: &prime_ends::LcRotation) -> Value {
    json!({
        "pipeline": "locally_connected",
        "rot": r.rot.value,
        "exact": exact_str(&r.rot),
        "path": r.path,
        "b_hat_size": r.b_hat_size,
        "orientation": orientation_str(r.orientation),
        "ends": r.ends,
        "walk_map_rot": r.walk_map_rot.value,
        "walk_map_exact": exact_str(&r.walk_map_rot),
    })
}

fn rot_lc(source: &DomainSource, a: &DomainAutomorphism, ends: Ends, tol: f64) -> Result<Outcome> {
    let d = polygon(source)?;
    let r = prime_ends::rot_lc(&d, a, ends, tol)?;
    Ok(Outcome::new(lc_results(&r)).rotation_limits(tol).threshold("match_eps", MATCH_EPS))
}

fn nonlc_results(r: &cylinder::NonLcRotation) -> Value {
    json!({
        "pipeline": "arc_family",
        "rot": r.rot.value,
        "exact": exact_str(&r.rot),
        "path": r.path,
        "family_size": r.family_size,
        "orientation": orientation_str(r.orientation3),
        "ends": r.ends,
    })
}

fn rot_cyl(target: &CylTarget, map: &CylinderMap, tol: f64) -> Result<Outcome> {
    match target {
        CylTarget::Family { family, bijection } => {
            let family = ArcFamily::from_json(family)?;
            let h = cylinder::induced_arc_bijection(&family, map, bijection)?;
            let r = cylinder::rot_nonlc(&family, &h, map, tol)?;
            Ok(Outcome::new(nonlc_results(&r)).rotation_limits(tol))
        }
        CylTarget::Polygon { domain } => {
            let d = polygon(domain)?;
            let r = cylinder::rot_lc_cylinder(&d, map, tol)?;
            Ok(Outcome::new(lc_results(&r)).rotation_limits(tol).threshold("match_eps", MATCH_EPS))
        }
        CylTarget::Grid { domain, scale, shift } => {
            let g = match domain.build()? {
                Domain::Grid(g) => g,
                Domain::Polygon(_) => bail!("cluster shifts need a grid domain"),
            };
            let scale = grid_scale(&g, *scale);
            let report = g.boundary_clusters(scale)?;
            if report.family.is_empty() {
                bail!("grid boundary has no clusters at scale {scale}");
            }
            let h = ArcBijection::shift(&report.family, shift % report.family.len());
            let h = cylinder::induced_arc_bijection(&report.family, map, &h)?;
            let r = cylinder::rot_nonlc(&report.family, &h, map, tol)?;
            Ok(Outcome::new(nonlc_results(&r)).rotation_limits(tol).threshold("scale", scale))
        }
    }
}

fn demo(fixture: &str, resolutions: &[usize], window: f64, map: &CylinderMap) -> Result<Outcome> {
    if resolutions.iter().any(|&n| n < 2) {
        bail!("resolutions must be at least 2");
    }
    let rows = cylinder::equicontinuity_diagnostic(fixture, resolutions, map, window)?;
    let fx: cylinder::DiagnosticFixture = fixture.parse()?;
    let results = json!({
        "fixture": fixture,
        "principal_point": [fx.principal_point().x, fx.principal_point().y],
        "bar_length": fx.bar_length(),
        "rows": serde_json::to_value(&rows)?,
    });
    let mut out = Outcome::new(results).threshold("window_cells", window);
    out.csv = Some(cylinder::oscillation_csv(&rows));
    Ok(out)
}
