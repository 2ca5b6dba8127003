use modgrav_core::chameleon::{background_state, cubic_terms, ChameleonModel};
use modgrav_core::exclusion::{
    chameleon_cell, extract_boundary, scan_chameleon, scan_yukawa, yukawa_cell, AxisSpec, Execution, GridSpec, Metric,
    ScanContext,
};
use modgrav_core::presets;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn ctx(metric: Metric) -> ScanContext {
    ScanContext::new(&presets::setup().unwrap(), &presets::optomech(), metric).unwrap()
}

#[test]
fn yukawa_reference_cells() {
    let c = ctx(Metric::SigmaMod);
    let r = yukawa_cell(&c, 1e-3, 1.0).unwrap();
    assert!(r < 1.0 && rel(r, 1.72555e-3 / 2e-3) < 1e-3, "{r}");
    assert!(!yukawa_cell(&c, 0.0, 1.0).unwrap().is_finite());
    for alpha in [1e-6, 1.0, 1e4] {
        assert!(yukawa_cell(&c, alpha, presets::X0 / 50.0).unwrap() > 1e3);
    }
}

#[test]
fn positive_alpha_grid_has_no_notes() {
    let spec = GridSpec {
        x: AxisSpec::new(1e-4, 1.0, 6).unwrap(),
        y: AxisSpec::new(1e-6, 1e2, 5).unwrap(),
    };
    let g = scan_yukawa(
        &presets::setup().unwrap(),
        &presets::optomech(),
        &spec,
        Metric::SigmaMod,
        Execution::Sequential,
    )
    .unwrap();
    assert!(g.notes.is_empty());
    assert!(g.ratio.iter().flatten().all(|r| r.is_finite() && *r > 0.0));
}

#[test]
fn yukawa_large_lambda_boundary() {
    let spec = GridSpec {
        x: AxisSpec::new(1e-2, 1.0, 11).unwrap(),
        y: AxisSpec::new(1e-6, 1e2, 81).unwrap(),
    };
    let g = scan_yukawa(
        &presets::setup().unwrap(),
        &presets::optomech(),
        &spec,
        Metric::SigmaMod,
        Execution::Parallel,
    )
    .unwrap();
    let lines = extract_boundary(&g, 1.0);
    assert_eq!(lines.len(), 1);
    let (x, y) = *lines[0].vertices.iter().max_by(|a, b| a.0.total_cmp(&b.0)).unwrap();
    assert!(rel(x, 1.0) < 1e-12);
    assert!(rel(y, 8.6278e-4) < 1e-3, "{y}");
}

#[test]
fn sigma_mod_excludes_more_than_sigma_const() {
    let spec = GridSpec::yukawa_default().with_resolution(24, 24);
    let setup = presets::setup().unwrap();
    let m = scan_yukawa(
        &setup,
        &presets::optomech(),
        &spec,
        Metric::SigmaMod,
        Execution::Parallel,
    )
    .unwrap();
    let c = scan_yukawa(
        &setup,
        &presets::optomech(),
        &spec,
        Metric::SigmaConst,
        Execution::Parallel,
    )
    .unwrap();
    for j in 0..24 {
        for i in 0..24 {
            if c.is_excluded(i, j) {
                assert!(m.is_excluded(i, j));
            }
        }
    }
    assert!(m.excluded_points().len() > c.excluded_points().len());
}

#[test]
fn scans_match_direct_cells() {
    let spec = GridSpec::chameleon_default().with_resolution(9, 7);
    let setup = presets::setup().unwrap();
    let scan = scan_chameleon(
        &setup,
        &presets::optomech(),
        &spec,
        Metric::SigmaMod,
        true,
        Execution::Parallel,
    )
    .unwrap();
    let c = ctx(Metric::SigmaMod);
    for (j, &l) in scan.grid.y_axis.iter().enumerate() {
        for (i, &m) in scan.grid.x_axis.iter().enumerate() {
            let direct = chameleon_cell(&c, m, l, true).map_or(f64::NAN, |v| v);
            let got = scan.grid.ratio[j][i];
            assert!(got.to_bits() == direct.to_bits() || (got.is_nan() && direct.is_nan()));
        }
    }
}

#[test]
fn worker_count_does_not_change_results() {
    let spec = GridSpec::chameleon_default().with_resolution(30, 30);
    let setup = presets::setup().unwrap();
    let cfg = presets::optomech();
    let run = |exec| scan_chameleon(&setup, &cfg, &spec, Metric::SigmaMod, true, exec).unwrap();
    let base = run(Execution::Sequential);
    for threads in [1, 4, 16] {
        let other = run(Execution::ParallelWith { threads });
        let bits = |s: &modgrav_core::exclusion::ChameleonScan| -> Vec<u64> {
            s.grid.ratio.iter().flatten().map(|v| v.to_bits()).collect()
        };
        assert_eq!(bits(&base), bits(&other));
        assert_eq!(base.grid.notes, other.grid.notes);
        assert_eq!(base.s_source_zero, other.s_source_zero);
    }
}

#[test]
fn probe_screening_only_matters_below_probe_onset() {
    let spec = GridSpec::chameleon_default().with_resolution(40, 40);
    let setup = presets::setup().unwrap();
    let cfg = presets::optomech();
    let on = scan_chameleon(&setup, &cfg, &spec, Metric::SigmaMod, true, Execution::Parallel).unwrap();
    let off = scan_chameleon(&setup, &cfg, &spec, Metric::SigmaMod, false, Execution::Parallel).unwrap();
    let mut compared = 0;
    for (j, &l) in on.grid.y_axis.iter().enumerate() {
        for (i, &m) in on.grid.x_axis.iter().enumerate() {
            let model = ChameleonModel::from_planck_ratio(m, l).unwrap();
            let bg = background_state(&model, setup.rho_bg).unwrap();
            let (a, b) = (on.grid.ratio[j][i], off.grid.ratio[j][i]);
            if !(a.is_finite() && b.is_finite()) {
                continue;
            }
            let unscreened = |body| cubic_terms(body, &model, &bg).unwrap().threshold_ratio <= 1.0;
            if unscreened(&setup.probe) {
                // screened form with ξ_P = 1 still carries the finite-size factor
                assert!(rel(a, b) < 1e-6, "({m}, {l}): {a} vs {b}");
                compared += 1;
            } else {
                assert!(a >= b * (1.0 - 1e-9));
            }
        }
    }
    assert!(compared > 100);
}

#[test]
fn chameleon_vertical_boundary() {
    let spec = GridSpec {
        x: AxisSpec::new(1.0, 1e3, 61).unwrap(),
        y: AxisSpec::new(1e-3, 1e-1, 5).unwrap(),
    };
    let setup = presets::setup().unwrap();
    let scan = scan_chameleon(
        &setup,
        &presets::optomech(),
        &spec,
        Metric::SigmaMod,
        false,
        Execution::Parallel,
    )
    .unwrap();
    let lines = extract_boundary(&scan.grid, 1.0);
    assert_eq!(lines.len(), 1);
    for &(m, _) in &lines[0].vertices {
        assert!(rel(m, 48.147) < 1e-3, "{m}");
    }
}
