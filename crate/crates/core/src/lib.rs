//! Rotation numbers for circle homeomorphisms and for cylinder maps over
//! planar domains.
//!
//! Module map:
//!
//! * [`circle`]: piecewise-linear circle homeomorphisms (exact or float).
//! * [`rotation`]: rotation number intervals, exact rational detection.
//! * [`circular_order`]: cyclic order of arc families, order-preserving
//!   bijections and compatible maps.
//! * [`planar_domain`]: polygonal slit domains with boundary walks, grid
//!   domains with the path-diameter metric.
//! * [`prime_ends`]: cutpoints, invariant boundary points and `Rot` for
//!   locally connected boundaries.
//! * [`cylinder`]: cylinder maps, induced arc bijections, `Rot` for
//!   non-locally-connected boundaries and the extendability diagnostic.
//! * [`fixtures`]: the named domains used by tests, benches and the CLI.

pub mod circle;
pub mod circular_order;
pub mod cylinder;
pub mod fixtures;
pub mod number;
pub mod planar_domain;
pub mod prime_ends;
pub mod rotation;

pub use circle::{CirclePoint, MonotonePLMap, Orientation};
pub use circular_order::{Arc, ArcBijection, ArcFamily, Member};
pub use cylinder::{CylinderMap, Ends};
pub use number::Rational;
pub use planar_domain::{BoundaryWalk, GridDomain, Point, PolygonalDomain};
pub use prime_ends::{BHat, CutpointSet, DomainAutomorphism};
pub use rotation::{rot, rot_exact_rational, rot_interval, RotInterval, Rotation};
