mod canonical;
mod request;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use primend_core::circle::Orientation;
use primend_core::circular_order::{self, ArcBijection, ArcFamily, FamilyJson, OrderError};
use primend_core::cylinder::{CylinderError, CylinderMap, Ends};
use primend_core::planar_domain::{GridError, Point};
use primend_core::prime_ends::{DomainAutomorphism, PrimeEndError};
use primend_core::rotation::RotationError;

use request::{CylTarget, Domain, DomainSource, MapSource, Request, RunError};

#[derive(Parser)]
#[command(name = "primend", version, about = "Rotation numbers for circle maps and for cylinder maps over planar domains")]
struct Cli {
    /// Write the report (or the CSV, for `demo`) here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Target accuracy of rotation numbers.
    #[arg(long, global = true, default_value_t = 1e-4)]
    tol: f64,
    /// Seed for generated inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rotation number of a circle map.
    Rotnum {
        /// Map file: {"degree": 1, "breakpoints": [[x, y], ...]}.
        #[arg(long, conflicts_with = "random")]
        map: Option<PathBuf>,
        /// Generate a map with this many breakpoints from --seed.
        #[arg(long)]
        random: Option<usize>,
        /// Orbit length for the reported interval.
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, default_value_t = 0.0)]
        x0: f64,
    },
    /// Whether a bijection of an arc family preserves circular order.
    OrderCheck {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        bijection: PathBuf,
        /// Also report the rotation number of a compatible map.
        #[arg(long)]
        rot: bool,
    },
    /// Boundary structure of a domain.
    Domain {
        #[command(subcommand)]
        action: DomainAction,
    },
    /// Rot of a domain symmetry over a locally connected boundary.
    RotLc(RotArgs),
    /// Rot of a cylinder map through its action on a boundary family.
    RotCyl(RotArgs),
    /// Rot, choosing the pipeline from the kind of input.
    Rot(RotArgs),
    /// Oscillation sweep of the level displacement near the boundary.
    Demo {
        #[arg(value_parser = ["warsaw", "square"])]
        fixture: String,
        #[arg(long, value_delimiter = ',', default_value = "32,64,128")]
        resolutions: Vec<usize>,
        /// Diameter of the cut-off disk, in cells.
        #[arg(long, default_value_t = 4.0)]
        window: f64,
        /// Cylinder map file; the vertical shear by default.
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Run the inputs section of a report again.
    Replay { report: PathBuf },
}

#[derive(Subcommand)]
enum DomainAction {
    Analyze {
        #[command(flatten)]
        domain: DomainArgs,
        /// Cluster scale for grid domains; two cells by default.
        #[arg(long)]
        scale: Option<f64>,
    },
}

#[derive(Args, Clone)]
struct DomainArgs {
    /// Polygon ({"outer": ...}) or grid ({"rows": ...}) file.
    #[arg(long, conflicts_with = "fixture")]
    domain: Option<PathBuf>,
    /// square, one-slit, t-slit, two-slit, pinwheel:K, square-grid:N,
    /// comb:TEETH:N or warsaw:N.
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Product,
    Shear,
    EndFlip,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrientationArg {
    Preserving,
    Reversing,
}

#[derive(Args, Clone)]
struct RotArgs {
    #[command(flatten)]
    domain: DomainArgs,
    /// Arc family file, for the arc-family pipeline.
    #[arg(long, requires = "bijection")]
    family: Option<PathBuf>,
    #[arg(long)]
    bijection: Option<PathBuf>,
    /// Domain automorphism file.
    #[arg(long, conflicts_with_all = ["rotate", "reflect"])]
    automorphism: Option<PathBuf>,
    /// Rotate the domain by this many turns about --center.
    #[arg(long, conflicts_with = "reflect")]
    rotate: Option<f64>,
    /// Reflect in the line through --center at this angle, in turns.
    #[arg(long)]
    reflect: Option<f64>,
    /// Centre of --rotate or --reflect, as `x,y`.
    #[arg(long, value_parser = parse_point, default_value = "0,0")]
    center: Point,
    /// Cylinder map file; overrides --variant.
    #[arg(long, conflicts_with = "variant")]
    map: Option<PathBuf>,
    #[arg(long, value_enum)]
    variant: Option<Variant>,
    /// Orientation of the plane factor when no automorphism is given.
    #[arg(long, value_enum)]
    orientation: Option<OrientationArg>,
    #[arg(long)]
    ends: Option<Ends>,
    /// Cyclic shift of grid boundary clusters.
    #[arg(long, default_value_t = 0)]
    shift: usize,
    /// Cluster scale for grid domains.
    #[arg(long)]
    scale: Option<f64>,
}

fn parse_point(s: &str) -> Result<Point, String> {
    let (x, y) = s.split_once(',').ok_or("expected x,y")?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok(Point::new(num(x)?, num(y)?))
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_as<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_value(read_json(path)?).with_context(|| format!("reading {}", path.display()))
}

impl DomainArgs {
    fn source(&self) -> Result<Option<DomainSource>> {
        match (&self.domain, &self.fixture) {
            (Some(p), _) => Ok(Some(DomainSource::from_value(read_json(p)?)?)),
            (None, Some(name)) => {
                request::fixture(name)?;
                Ok(Some(DomainSource::Fixture { name: name.clone() }))
            }
            (None, None) => Ok(None),
        }
    }
}

impl RotArgs {
    fn automorphism(&self) -> Result<Option<DomainAutomorphism>> {
        let center = self.center;
        Ok(match (&self.automorphism, self.rotate, self.reflect) {
            (Some(p), _, _) => Some(read_as(p)?),
            (None, Some(t), _) => Some(DomainAutomorphism::rotation(center, t)),
            (None, None, Some(a)) => Some(DomainAutomorphism::reflection(center, a)),
            (None, None, None) => None,
        })
    }

    /// The cylinder map described by the flags. `inferred` is the plane
    /// orientation to use when neither an automorphism nor --orientation
    /// is given.
    fn cylinder_map(&self, inferred: Orientation) -> Result<CylinderMap> {
        let map = if let Some(p) = &self.map {
            read_as(p)?
        } else {
            let origin = Point::new(0.0, 0.0);
            let plane = match (self.automorphism()?, self.orientation) {
                (Some(a), _) => a,
                (None, Some(OrientationArg::Reversing)) => DomainAutomorphism::reflection(origin, 0.0),
                (None, Some(OrientationArg::Preserving)) => DomainAutomorphism::rotation(origin, 0.0),
                (None, None) if inferred == Orientation::Reversing => DomainAutomorphism::reflection(origin, 0.0),
                (None, None) => DomainAutomorphism::rotation(origin, 0.0),
            };
            let product = CylinderMap::product(plane);
            match self.variant.unwrap_or(Variant::Product) {
                Variant::Product => product,
                Variant::Shear => CylinderMap::Composition { parts: vec![CylinderMap::vertical_shear(), product] },
                Variant::EndFlip => CylinderMap::Composition { parts: vec![CylinderMap::EndFlip, product] },
            }
        };
        if let Some(ends) = self.ends {
            if ends != map.ends() {
                bail!("--ends {ends} contradicts the map, which {} the ends", map.ends());
            }
        }
        Ok(map)
    }

    fn lc_request(&self, domain: DomainSource, tol: f64) -> Result<Request> {
        let automorphism = self.automorphism()?.unwrap_or(DomainAutomorphism::rotation(Point::new(0.0, 0.0), 0.0));
        Ok(Request::RotLc { domain, automorphism, ends: self.ends.unwrap_or(Ends::Fixes), tol })
    }

    fn cyl_request(&self, tol: f64) -> Result<Request> {
        if let Some(f) = &self.family {
            let family: FamilyJson = read_as(f)?;
            let bijection: ArcBijection = read_as(self.bijection.as_ref().expect("required by clap"))?;
            let parsed = ArcFamily::from_json(&family)?;
            let inferred = if parsed.len() >= 3 && circular_order::is_order_preserving(&parsed, &bijection)? {
                circular_order::bijection_orientation(&parsed, &bijection)?
            } else {
                Orientation::Preserving
            };
            let map = self.cylinder_map(inferred)?;
            return Ok(Request::RotCyl { target: CylTarget::Family { family, bijection }, map, tol });
        }
        let domain = self.domain.source()?.ok_or_else(|| anyhow!("give --family/--bijection, --domain or --fixture"))?;
        let map = self.cylinder_map(Orientation::Preserving)?;
        let target = match domain.build()? {
            Domain::Polygon(_) => CylTarget::Polygon { domain },
            Domain::Grid(_) => CylTarget::Grid { domain, scale: self.scale, shift: self.shift },
        };
        Ok(Request::RotCyl { target, map, tol })
    }

    /// Slit domains with a plain automorphism take the locally connected
    /// path; families and grids take the arc-family path.
    fn dispatch(&self, tol: f64) -> Result<Request> {
        if self.family.is_none() && self.map.is_none() && self.variant.is_none() {
            if let Some(domain) = self.domain.source()? {
                if matches!(domain.build()?, Domain::Polygon(_)) {
                    return self.lc_request(domain, tol);
                }
            }
        }
        self.cyl_request(tol)
    }
}

fn build_request(cli: &Cli) -> Result<Request> {
    let tol = cli.tol;
    Ok(match &cli.command {
        Command::Rotnum { map, random, n, x0 } => {
            let source = match (map, random) {
                (Some(p), _) => MapSource::Inline { map: read_as(p)? },
                (None, Some(k)) => MapSource::Random { seed: cli.seed, breakpoints: *k },
                (None, None) => bail!("give --map or --random"),
            };
            Request::Rotnum { map: source, tol, n: *n, x0: *x0 }
        }
        Command::OrderCheck { family, bijection, rot } => {
            Request::OrderCheck { family: read_as(family)?, bijection: read_as(bijection)?, rot: *rot, tol }
        }
        Command::Domain { action: DomainAction::Analyze { domain, scale } } => {
            let domain = domain.source()?.ok_or_else(|| anyhow!("give --domain or --fixture"))?;
            Request::DomainAnalyze { domain, scale: *scale }
        }
        Command::RotLc(args) => {
            let domain = args.domain.source()?.ok_or_else(|| anyhow!("give --domain or --fixture"))?;
            args.lc_request(domain, tol)?
        }
        Command::RotCyl(args) => args.cyl_request(tol)?,
        Command::Rot(args) => args.dispatch(tol)?,
        Command::Demo { fixture, resolutions, window, map } => {
            let map = match map {
                Some(p) => read_as(p)?,
                None => CylinderMap::vertical_shear(),
            };
            Request::Demo { fixture: fixture.clone(), resolutions: resolutions.clone(), window: *window, map }
        }
        Command::Replay { report } => {
            let report = read_json(report)?;
            let inputs = report.get("inputs").cloned().ok_or_else(|| anyhow!("report has no inputs section"))?;
            serde_json::from_value(inputs).context("inputs section")?
        }
    })
}

fn report(argv: &[String], req: &Request, outcome: &request::Outcome) -> Result<Value> {
    let inputs = serde_json::to_value(req)?;
    let mut digests = serde_json::Map::new();
    if let Value::Object(fields) = &inputs {
        for (k, v) in fields {
            if v.is_object() || v.is_array() {
                digests.insert(k.clone(), json!(canonical::sha256_hex(canonical::to_string(v).as_bytes())));
            }
        }
    }
    Ok(json!({
        "command": argv,
        "version": env!("CARGO_PKG_VERSION"),
        "inputs": inputs,
        "input_digests": digests,
        "thresholds": outcome.thresholds,
        "results": outcome.results,
        "warnings": outcome.warnings,
    }))
}

fn run(cli: &Cli, argv: &[String]) -> Result<()> {
    let req = build_request(cli)?;
    let outcome = req.execute()?;
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    let text = canonical::to_string(&report(argv, &req, &outcome)?) + "\n";
    match (&cli.out, &outcome.csv) {
        (Some(path), Some(csv)) => {
            fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
            print!("{text}");
        }
        (Some(path), None) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        (None, _) => print!("{text}"),
    }
    Ok(())
}

fn rotation_code(e: &RotationError) -> u8 {
    match e {
        RotationError::ToleranceUnreachable { .. } => 3,
        _ => 2,
    }
}

fn order_code(e: &OrderError) -> u8 {
    match e {
        OrderError::Rotation(r) => rotation_code(r),
        _ => 2,
    }
}

fn prime_end_code(e: &PrimeEndError) -> u8 {
    match e {
        PrimeEndError::SimpleClosedCurveBoundary | PrimeEndError::EmptyB => 4,
        PrimeEndError::Rotation(r) => rotation_code(r),
        PrimeEndError::Order(o) => order_code(o),
        _ => 2,
    }
}

/// 2: bad input; 3: tolerance out of reach; 4: Rot undefined for a simple
/// closed curve boundary.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<RotationError>() {
            return rotation_code(e);
        }
        if let Some(e) = cause.downcast_ref::<OrderError>() {
            return order_code(e);
        }
        if let Some(e) = cause.downcast_ref::<PrimeEndError>() {
            return prime_end_code(e);
        }
        if let Some(e) = cause.downcast_ref::<CylinderError>() {
            return match e {
                CylinderError::Order(o) => order_code(o),
                CylinderError::PrimeEnd(p) => prime_end_code(p),
                _ => 2,
            };
        }
        if cause.downcast_ref::<RunError>().is_some() || cause.downcast_ref::<GridError>().is_some() {
            return 2;
        }
    }
    2
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match run(&cli, &argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
