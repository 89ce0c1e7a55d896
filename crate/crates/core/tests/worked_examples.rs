//! Worked examples checked against independent float orbit oracles.

use primend_core::circle::{CirclePoint, MonotonePLMap};
use primend_core::rotation::{rot, rot_interval};

/// Breakpoints of the degree-one lift as floats, read from the JSON form.
fn float_points(m: &MonotonePLMap) -> Vec<(f64, f64)> {
    let j = serde_json::to_value(m.to_json()).unwrap();
    let num = |v: &serde_json::Value| match v {
        serde_json::Value::String(s) => match s.split_once('/') {
            Some((p, q)) => p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap(),
            None => s.parse().unwrap(),
        },
        other => other.as_f64().unwrap(),
    };
    j["breakpoints"].as_array().unwrap().iter().map(|p| (num(&p[0]), num(&p[1]))).collect()
}

/// Straightforward evaluation of the lift of a degree-one PL circle map.
fn lift(points: &[(f64, f64)], x: f64) -> f64 {
    let k = x.floor();
    let f = x - k;
    let n = points.len();
    let mut ext: Vec<(f64, f64)> = points.iter().map(|&(a, b)| (a - 1.0, b - 1.0)).collect();
    ext.extend_from_slice(points);
    ext.extend(points.iter().map(|&(a, b)| (a + 1.0, b + 1.0)));
    for w in ext.windows(2).skip(n - 1) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if x0 <= f && f < x1 {
            return k + y0 + (y1 - y0) * (f - x0) / (x1 - x0);
        }
    }
    unreachable!()
}

fn orbit_average(points: &[(f64, f64)], iterates: u32) -> f64 {
    let mut x = 0.0;
    let mut turns = 0.0;
    for _ in 0..iterates {
        let y = lift(points, x);
        let whole = y.floor();
        turns += whole;
        x = y - whole;
    }
    ((turns + x) / iterates as f64).rem_euclid(1.0)
}

fn four_point() -> MonotonePLMap {
    MonotonePLMap::make_pl(&[(0.0, 0.1), (0.25, 0.6), (0.5, 0.75), (0.75, 0.9)], 1).unwrap()
}

#[test]
fn four_point_interval_contains_long_orbit_average() {
    let m = four_point();
    let oracle = orbit_average(&float_points(&m), 1_000_000);
    let iv = rot_interval(&m, 5000, 0.0).unwrap();
    assert!((iv.width() - 4e-4).abs() < 1e-12);
    assert!(iv.contains_mod1(oracle), "{oracle} not in [{}, {}]", iv.lo, iv.hi);
}

#[test]
fn four_point_inverse_on_sample_grid() {
    let m = four_point();
    let inv = m.inverse();
    for i in 0..64 {
        let x = i as f64 / 64.0;
        let back = m.evaluate(inv.evaluate(CirclePoint::new(x))).turns();
        let gap = (back - x).rem_euclid(1.0);
        assert!(gap.min(1.0 - gap) < 1e-12, "x = {x}, got {back}");
    }
}

#[test]
fn seeded_random_map_matches_orbit_oracle() {
    let m = MonotonePLMap::random(42, 8);
    assert_eq!(m.breakpoint_count(), 8);
    let oracle = orbit_average(&float_points(&m), 1_000_000);
    let r = rot(&m, 1e-4).unwrap();
    let gap = (r.value - oracle).rem_euclid(1.0);
    assert!(gap.min(1.0 - gap) <= 1e-4, "rot {} vs oracle {oracle}", r.value);
}

#[test]
fn random_maps_are_reproducible() {
    assert_eq!(MonotonePLMap::random(7, 5), MonotonePLMap::random(7, 5));
    assert_ne!(MonotonePLMap::random(7, 5), MonotonePLMap::random(8, 5));
}
