//! Named domains shared by tests, benches and the command line.

use std::f64::consts::{PI, TAU};

use crate::planar_domain::{GridDomain, Point, PolygonalDomain, Slit};

/// `[0, side]²`, counterclockwise from the origin.
pub fn square(side: f64) -> PolygonalDomain {
    PolygonalDomain::new(
        vec![Point::new(0.0, 0.0), Point::new(side, 0.0), Point::new(side, side), Point::new(0.0, side)],
        vec![],
    )
}

/// `[0, 10]²` with a vertical slit from `(5, 0)` to `(5, 5)` through `(5, 2.5)`.
pub fn one_slit_square() -> PolygonalDomain {
    PolygonalDomain::new(
        vec![
            Point::new(0.0, 0.0),
            Point::new(5.0, 0.0),
            Point::new(10.0, 0.0),
            Point::new(10.0, 10.0),
            Point::new(0.0, 10.0),
        ],
        vec![Slit { attach_index: 1, points: vec![Point::new(5.0, 2.5), Point::new(5.0, 5.0)] }],
    )
}

/// `[0, 10]²` with a trunk `(5, 0)–(5, 4)–(5, 7)` and a branch `(5, 4)–(7, 4)`.
pub fn t_slit_square() -> PolygonalDomain {
    PolygonalDomain::new(
        vec![
            Point::new(0.0, 0.0),
            Point::new(5.0, 0.0),
            Point::new(10.0, 0.0),
            Point::new(10.0, 10.0),
            Point::new(0.0, 10.0),
        ],
        vec![
            Slit { attach_index: 1, points: vec![Point::new(5.0, 4.0), Point::new(5.0, 7.0)] },
            Slit { attach_index: 5, points: vec![Point::new(7.0, 4.0)] },
        ],
    )
}

/// Regular `2k`-gon of radius 1 about the origin with a bent slit hanging
/// from every other vertex. The symmetry group is the rotations by `j / k`
/// turns; the bend rules out reflections.
pub fn pinwheel(k: usize) -> PolygonalDomain {
    assert!(k >= 1);
    let m = 2 * k;
    let at = |r: f64, theta: f64| Point::new(r * theta.cos(), r * theta.sin());
    let outer = (0..m).map(|i| at(1.0, TAU * i as f64 / m as f64)).collect();
    let slits = (0..k)
        .map(|i| {
            let theta = TAU * i as f64 / k as f64;
            Slit { attach_index: 2 * i, points: vec![at(0.6, theta), at(0.3, theta + PI / (2.0 * k as f64))] }
        })
        .collect();
    PolygonalDomain::new(outer, slits)
}

/// `[-1, 1]²` with straight slits from the midpoints of the bottom and top
/// edges towards the centre; the half turn swaps them.
pub fn two_slit() -> PolygonalDomain {
    PolygonalDomain::new(
        vec![
            Point::new(-1.0, -1.0),
            Point::new(0.0, -1.0),
            Point::new(1.0, -1.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
            Point::new(-1.0, 1.0),
        ],
        vec![
            Slit { attach_index: 1, points: vec![Point::new(0.0, -0.5)] },
            Slit { attach_index: 4, points: vec![Point::new(0.0, 0.5)] },
        ],
    )
}

fn grid(cell_size: f64, origin: Point, mask: Vec<Vec<bool>>) -> GridDomain {
    GridDomain::new(cell_size, origin, mask).expect("fixture is a simply connected polyomino")
}

/// The unit square as an `n × n` grid.
pub fn square_grid(n: usize) -> GridDomain {
    grid(1.0 / n as f64, Point::new(0.0, 0.0), vec![vec![true; n]; n])
}

pub const COMB_SPINE_ROWS: usize = 8;
pub const COMB_TOOTH_ROWS: usize = 12;

/// A spine of 8 rows carrying `teeth` teeth, each 2 cells wide and 12 tall,
/// at pitch `(n - 2) / teeth` cells; cell size `1 / n`.
pub fn comb(teeth: usize, n: usize) -> GridDomain {
    let pitch = (n - 2) / teeth;
    assert!(pitch >= 4, "teeth need gaps");
    let width = pitch * teeth;
    let offset = pitch / 2 - 1;
    let mut mask = Vec::new();
    for _ in 0..COMB_TOOTH_ROWS {
        mask.push((0..width).map(|c| c >= offset && (c - offset) % pitch < 2).collect());
    }
    for _ in 0..COMB_SPINE_ROWS {
        mask.push(vec![true; width]);
    }
    grid(1.0 / n as f64, Point::new(0.0, 0.0), mask)
}

/// Grid approximation of the region under a topologist's sine curve closed
/// up into a Warsaw circle: the body `[0, 1] × [-2, -1]` with columns over
/// it rising to `y = 1` where `sin(1/x) > 0` (teeth) and left empty where
/// it is negative (slots). Where an oscillation is narrower than a cell the
/// columns alternate, tooth on even columns; column 0 is the limit bar.
pub fn warsaw(n: usize) -> GridDomain {
    let cell = 1.0 / n as f64;
    let tooth: Vec<bool> = (0..n)
        .map(|j| {
            let x = (j as f64 + 0.5) * cell;
            let k = (1.0 / (PI * x)).floor() as u64;
            let width = if k == 0 { 1.0 - 1.0 / PI } else { 1.0 / (PI * (k * (k + 1)) as f64) };
            if width < cell {
                j % 2 == 0
            } else {
                k.is_multiple_of(2)
            }
        })
        .collect();
    let mut mask = vec![tooth; 2 * n];
    mask.extend(std::iter::repeat_n(vec![true; n], n));
    grid(cell, Point::new(0.0, -2.0), mask)
}

/// Length of the Warsaw fixture's limit bar.
pub const WARSAW_BAR_LENGTH: f64 = 2.0;
