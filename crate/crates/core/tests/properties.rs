use modgrav_core::chameleon::{background_state, ChameleonModel, FieldProfile, SphereBody};
use modgrav_core::forces::{casimir_force, linearized_coefficients, newtonian_force, total_force};
use modgrav_core::presets;
use modgrav_core::units;
use proptest::prelude::*;

fn decades(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo..hi).prop_map(|e: f64| 10f64.powf(e))
}

proptest! {
    #[test]
    fn unit_round_trips(x in decades(-40.0, 40.0)) {
        let m = units::mass_from_natural(units::mass_to_natural(x).unwrap()).unwrap();
        prop_assert!(((m - x) / x).abs() < 1e-12);
        let d = units::density_from_natural(units::density_to_natural(x).unwrap()).unwrap();
        prop_assert!(((d - x) / x).abs() < 1e-12);
        let l = units::length_from_natural(units::length_to_natural(x));
        prop_assert!(((l - x) / x).abs() < 1e-12);
    }

    #[test]
    fn unit_conversions_are_linear(x in decades(-20.0, 20.0), a in decades(-5.0, 5.0)) {
        let f = units::mass_to_natural(a * x).unwrap();
        let g = a * units::mass_to_natural(x).unwrap();
        prop_assert!(((f - g) / g).abs() < 1e-12);
        let f = units::density_to_natural(a * x).unwrap();
        let g = a * units::density_to_natural(x).unwrap();
        prop_assert!(((f - g) / g).abs() < 1e-12);
    }

    #[test]
    fn radius_monotone(m in decades(-18.0, 2.0), rho in decades(1.0, 5.0), k in 1.001f64..10.0) {
        let r = units::radius_from_mass(m, rho).unwrap();
        prop_assert!(units::radius_from_mass(m * k, rho).unwrap() > r);
        prop_assert!(units::radius_from_mass(m, rho * k).unwrap() < r);
    }

    #[test]
    fn background_monotone_in_density(
        m in decades(-6.0, 4.0), l in decades(-9.0, 2.0), rho in decades(-18.0, -6.0), k in 1.01f64..100.0
    ) {
        let model = ChameleonModel::from_planck_ratio(m, l).unwrap();
        let a = background_state(&model, rho).unwrap();
        let b = background_state(&model, rho * k).unwrap();
        prop_assert!(b.phi_bg < a.phi_bg);
        prop_assert!(b.m_bg > a.m_bg);
        prop_assert!(b.lambda_bg < a.lambda_bg);
    }

    #[test]
    fn field_monotone_outside_core(m in decades(-6.0, 1.0), l in decades(-9.0, -2.0), r in decades(-6.0, -3.0)) {
        let model = ChameleonModel::from_planck_ratio(m, l).unwrap();
        let bg = background_state(&model, presets::RHO_BG).unwrap();
        let body = SphereBody::from_radius_density(r, 19.3e3).unwrap();
        if let Ok(p) = FieldProfile::new(&body, &model, &bg) {
            prop_assert!(p.exterior_amplitude() >= 0.0);
            let mut prev = p.at(0.0);
            for k in 1..200 {
                let x = r * 3.0 * k as f64 / 200.0;
                let v = p.at(x);
                prop_assert!(v >= prev - 1e-12 * bg.phi_bg.abs(), "{x}: {prev} -> {v}");
                prev = v;
            }
        }
    }

    #[test]
    fn sigma_over_kappa_grows(alpha in decades(-6.0, 6.0), x in decades(-3.0, 2.0), k in 1.001f64..3.0) {
        let x0 = 1e-3;
        let a = linearized_coefficients(alpha, x0 / x, x0, 1e-6, false).unwrap();
        let b = linearized_coefficients(alpha, x0 / (x * k), x0, 1e-6, false).unwrap();
        prop_assert!(a.sigma >= 2.0 * a.kappa);
        prop_assert!(b.sigma / b.kappa >= a.sigma / a.kappa * (1.0 - 1e-12));
        let want = (2.0 + 2.0 * x + x * x) / (1.0 + x);
        prop_assert!((a.sigma / a.kappa / want - 1.0).abs() < 1e-12);
    }

    #[test]
    fn yukawa_adds_to_attraction(alpha in decades(-6.0, 6.0), lambda in decades(-5.0, 1.0), screened in any::<bool>()) {
        let s = presets::setup().unwrap();
        let f = total_force(&s, alpha, lambda, screened, s.x0).unwrap();
        let n = newtonian_force(&s, s.x0).unwrap();
        prop_assert!(f.abs() >= n.abs());
        if alpha * (-s.x0 / lambda).exp() > 1e-12 {
            prop_assert!(f.abs() > n.abs());
        }
    }

    #[test]
    fn casimir_monotone(t in 1.0f64..1000.0, k in 1.01f64..2.0) {
        let (rs, rp, x0) = (2.3e-4, 1.16e-6, 1e-3);
        let f = casimir_force(t, rs, rp, x0).unwrap();
        prop_assert!(casimir_force(t, rs, rp, x0 * k).unwrap() < f);
        prop_assert!(casimir_force(t * k, rs, rp, x0).unwrap() > f);
        prop_assert!(casimir_force(t, rs * k, rp, x0).unwrap() > f);
        prop_assert!(casimir_force(t, rs, rp * k, x0).unwrap() > f);
    }
}
