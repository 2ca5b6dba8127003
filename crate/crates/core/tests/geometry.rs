use std::collections::BTreeSet;

use modgrav_core::exclusion::{
    convex_hull, convex_hull_log, extract_boundary, marching_squares, ExclusionGrid, Metric,
};
use modgrav_core::numeric::logspace;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

#[test]
fn radial_field_contour_is_a_circle() {
    let n = 256;
    let xs = logspace(1e-2, 1e2, n);
    let ratio: Vec<Vec<f64>> = xs
        .iter()
        .map(|&y| xs.iter().map(|&x| x.log10().hypot(y.log10()) / 1.3).collect())
        .collect();
    let grid = ExclusionGrid {
        x_axis: xs.clone(),
        y_axis: xs,
        ratio,
        metric: Metric::SigmaMod,
        probe_screening: false,
        notes: Vec::new(),
    };
    for level in [1.0, 0.5] {
        let lines = extract_boundary(&grid, level);
        assert_eq!(lines.len(), 1);
        assert!(lines[0].is_closed());
        assert!(lines[0].vertices.len() > 100);
        for &(x, y) in &lines[0].vertices {
            let r = x.log10().hypot(y.log10());
            assert!((r / (1.3 * level) - 1.0).abs() < 0.01, "level {level}: r = {r}");
        }
    }
}

#[test]
fn linear_circle_on_fine_grid() {
    let n = 256;
    let xs: Vec<f64> = (0..n).map(|k| -1.0 + 2.0 * k as f64 / (n - 1) as f64).collect();
    let v: Vec<f64> = xs
        .iter()
        .flat_map(|&y| xs.iter().map(move |&x| x.hypot(y) / 0.4))
        .collect();
    let lines = marching_squares(&xs, &xs, &v, 1.5);
    assert_eq!(lines.len(), 1);
    for &(x, y) in &lines[0].vertices {
        assert!((x.hypot(y) / 0.6 - 1.0).abs() < 1e-3);
    }
}

fn brute_force_vertices(pts: &[(f64, f64)]) -> BTreeSet<(u64, u64)> {
    let mut out = BTreeSet::new();
    for (i, &a) in pts.iter().enumerate() {
        for (j, &b) in pts.iter().enumerate() {
            if i != j && pts.iter().all(|&p| cross(a, b, p) >= 0.0) {
                out.insert((a.0.to_bits(), a.1.to_bits()));
                out.insert((b.0.to_bits(), b.1.to_bits()));
            }
        }
    }
    out
}

#[test]
fn hull_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..20 {
        let pts: Vec<(f64, f64)> = (0..200)
            .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let hull = convex_hull(&pts).unwrap();
        let got: BTreeSet<_> = hull.iter().map(|p| (p.0.to_bits(), p.1.to_bits())).collect();
        assert_eq!(got, brute_force_vertices(&pts));
        for k in 0..hull.len() {
            let (a, b) = (hull[k], hull[(k + 1) % hull.len()]);
            for &p in &pts {
                assert!(cross(a, b, p) >= -1e-12);
            }
        }
    }
}

#[test]
fn log_hull_contains_points_in_log_space() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let pts: Vec<(f64, f64)> = (0..200)
        .map(|_| {
            (
                10f64.powf(rng.gen_range(-6.0..0.0)),
                10f64.powf(rng.gen_range(-6.0..10.0)),
            )
        })
        .collect();
    let hull = convex_hull_log(&pts).unwrap();
    let lg = |p: (f64, f64)| (p.0.log10(), p.1.log10());
    for k in 0..hull.len() {
        let (a, b) = (lg(hull[k]), lg(hull[(k + 1) % hull.len()]));
        for &p in &pts {
            assert!(cross(a, b, lg(p)) >= -1e-12);
        }
    }
}
