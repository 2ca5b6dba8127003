use modgrav_core::chameleon::{effective_yukawa, ChameleonModel};
use modgrav_core::forces::{newtonian_force, total_force};
use modgrav_core::presets;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// (F_mod(x0(1 − ε)) − F_mod(x0(1 + ε)))/2 against −m g_N σ ε.
fn fd_check(m_over_mp: f64, lambda_ev: f64) -> Option<(f64, f64)> {
    let mut setup = presets::setup().unwrap();
    let eps = 1e-4;
    setup.epsilon = eps;
    let model = ChameleonModel::from_planck_ratio(m_over_mp, lambda_ev).unwrap();
    let y = effective_yukawa(&model, &setup.source, &setup.probe, setup.rho_bg, true).ok()?;
    let v = setup.x0 / y.lambda;
    if !(v < 5.0 && y.alpha * (-v).exp() > 1e-6) {
        return None;
    }
    let f_mod = |x: f64| total_force(&setup, y.alpha, y.lambda, true, x).unwrap() - newtonian_force(&setup, x).unwrap();
    let fd = 0.5 * (f_mod(setup.x0 * (1.0 - eps)) - f_mod(setup.x0 * (1.0 + eps)));
    let c = setup.linearize(y.alpha, y.lambda, true).unwrap();
    // x_S = x0(1 − ε cos) gives ΔF = −m g_N σ ε cos
    let want = -setup.probe.mass() * c.g_n * c.sigma * eps;
    Some((y.xi_source, ((fd - want) / want).abs()))
}

#[test]
fn force_derivative_recovers_sigma() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut screened, mut unscreened) = (0, 0);
    let mut tries = 0;
    while (screened < 10 || unscreened < 10) && tries < 200_000 {
        tries += 1;
        let m = 10f64.powf(rng.gen_range(-7.0..2.0));
        let l = 10f64.powf(rng.gen_range(-9.0..0.0));
        let Some((xi, err)) = fd_check(m, l) else { continue };
        let bucket = if xi < 1.0 { &mut screened } else { &mut unscreened };
        if *bucket >= 10 {
            continue;
        }
        *bucket += 1;
        assert!(err < 1e-4, "M/M_P = {m}, Λ = {l}, ξ_S = {xi}: {err}");
    }
    assert_eq!((screened, unscreened), (10, 10));
}
