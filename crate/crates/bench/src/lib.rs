//! Inputs shared by the kernel benchmarks.

use primend_core::circle::MonotonePLMap;
use primend_core::circular_order::{ArcBijection, ArcFamily};
use primend_core::number::ratio;
use primend_core::planar_domain::{GridDomain, Point};

pub fn four_point_map() -> MonotonePLMap {
    MonotonePLMap::make_pl(&[(0.0, 0.1), (0.25, 0.6), (0.5, 0.75), (0.75, 0.9)], 1).expect("valid map")
}

/// `n` equally spaced points with the shift by `k`.
pub fn shifted_points(n: i64, k: usize) -> (ArcFamily, ArcBijection) {
    let family = ArcFamily::of_points(&(0..n).map(|i| ratio(i, n)).collect::<Vec<_>>()).expect("distinct points");
    let h = ArcBijection::shift(&family, k);
    (family, h)
}

/// An 18-cell staircase, the largest size the exact diameter accepts.
pub fn staircase() -> GridDomain {
    let mut mask = vec![vec![false; 10]; 10];
    let mut cells = 0;
    'fill: for d in 0..10 {
        for (r, c) in [(d, d), (d, d + 1), (d + 1, d + 1)] {
            if r < 10 && c < 10 && !mask[r][c] {
                mask[r][c] = true;
                cells += 1;
                if cells == 18 {
                    break 'fill;
                }
            }
        }
    }
    GridDomain::new(1.0, Point::new(0.0, 0.0), mask).expect("staircase is simply connected")
}
