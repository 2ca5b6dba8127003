//! Sensor-side metrology: photon-number noise, closed-form sensitivities,
//! and the quadrature route through the evolution functionals.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, QuadError, Result};
use crate::numeric::{integrate, Cumulative, QuadSettings};
use crate::units::{HBAR, K_B};

/// Thermal occupation of the mechanical mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThermalState {
    /// Thermal squeezing parameter r_T directly.
    Parameter(f64),
    /// Temperature in K, with tanh r_T = exp(−ħω/(2 k_B T)).
    Temperature(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingProfile {
    /// k(t) = k0
    Constant,
    /// k(t) = k0 cos(ω_mech t)
    ResonantCosine,
}

impl CouplingProfile {
    /// Drive phase the closed forms assume for this profile.
    pub fn optimal_phase(self) -> f64 {
        match self {
            CouplingProfile::Constant => PI,
            CouplingProfile::ResonantCosine => PI / 2.0,
        }
    }

    pub fn coupling(self, k0: f64, omega: f64, t: f64) -> f64 {
        match self {
            CouplingProfile::Constant => k0,
            CouplingProfile::ResonantCosine => k0 * (omega * t).cos(),
        }
    }
}

/// The parameter being estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimand {
    Kappa,
    Sigma,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptomechConfig {
    /// rad/s
    pub omega_mech: f64,
    /// rad/s
    pub k0: f64,
    /// kg
    pub probe_mass: f64,
    pub mu_c: Complex64,
    pub r_sq: f64,
    pub varphi: f64,
    pub thermal: ThermalState,
    /// Measurement at ω_mech t = 2πn.
    pub n_cycles: u32,
    /// Number of repetitions.
    pub m_runs: u64,
    pub coupling_profile: CouplingProfile,
}

impl OptomechConfig {
    pub fn validate(&self) -> Result<()> {
        let pos = |name: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::domain(name, v, "must be finite and > 0"))
            }
        };
        pos("omega_mech", self.omega_mech)?;
        pos("k0", self.k0)?;
        pos("probe_mass", self.probe_mass)?;
        if !(self.mu_c.re.is_finite() && self.mu_c.im.is_finite()) {
            return Err(Error::domain("mu_c", self.mu_c.norm(), "must be finite"));
        }
        if !(self.r_sq >= 0.0 && self.r_sq.is_finite()) {
            return Err(Error::domain("r_sq", self.r_sq, "must be finite and >= 0"));
        }
        if !self.varphi.is_finite() {
            return Err(Error::domain("varphi", self.varphi, "must be finite"));
        }
        match self.thermal {
            ThermalState::Parameter(r) if !(r >= 0.0 && r.is_finite()) => {
                return Err(Error::domain("r_T", r, "must be finite and >= 0"))
            }
            ThermalState::Temperature(t) if !(t >= 0.0 && t.is_finite()) => {
                return Err(Error::domain("temperature", t, "must be finite and >= 0"))
            }
            _ => {}
        }
        if self.n_cycles == 0 {
            return Err(Error::domain("n_cycles", 0.0, "must be >= 1"));
        }
        if self.m_runs == 0 {
            return Err(Error::domain("m_runs", 0.0, "must be >= 1"));
        }
        Ok(())
    }

    /// Thermal parameter r_T.
    pub fn r_t(&self) -> f64 {
        match self.thermal {
            ThermalState::Parameter(r) => r,
            ThermalState::Temperature(0.0) => 0.0,
            ThermalState::Temperature(t) => (-HBAR * self.omega_mech / (2.0 * K_B * t)).exp().atanh(),
        }
    }

    /// t = 2πn/ω_mech.
    pub fn measurement_time(&self) -> f64 {
        2.0 * PI * self.n_cycles as f64 / self.omega_mech
    }

    /// √(ħ/(2mω_mech)).
    pub fn x_zpf(&self) -> f64 {
        (HBAR / (2.0 * self.probe_mass * self.omega_mech)).sqrt()
    }

    pub fn photon_number_std(&self) -> f64 {
        photon_number_variance(self.mu_c, self.r_sq, self.varphi).sqrt()
    }
}

/// (ΔN_a)² for squeezed coherent light.
pub fn photon_number_variance(mu_c: Complex64, r_sq: f64, varphi: f64) -> f64 {
    let re = (Complex64::from_polar(1.0, -varphi / 2.0) * mu_c).re;
    mu_c.norm_sqr() * (4.0 * r_sq).exp() + 0.5 * (2.0 * r_sq).sinh().powi(2) - 2.0 * re * re * (4.0 * r_sq).sinh()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormSensitivities {
    pub dk_const: f64,
    pub ds_const: f64,
    pub dk_mod: f64,
    pub ds_mod: f64,
}

/// Force resolutions corresponding to the four sensitivities, N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ForceSensitivities {
    /// m g_N
    pub newtonian: f64,
    /// m g_N Δκ
    pub kappa_const: f64,
    /// m g_N Δσ ε
    pub sigma_const: f64,
    /// m g_N Δκ^(mod)
    pub kappa_mod: f64,
    /// m g_N Δσ^(mod) ε
    pub sigma_mod: f64,
}

impl ClosedFormSensitivities {
    pub fn force_sensitivities(&self, probe_mass: f64, g_n: f64, epsilon: f64) -> ForceSensitivities {
        let f = probe_mass * g_n;
        ForceSensitivities {
            newtonian: f,
            kappa_const: f * self.dk_const,
            sigma_const: f * self.ds_const * epsilon,
            kappa_mod: f * self.dk_mod,
            sigma_mod: f * self.ds_mod * epsilon,
        }
    }

    pub fn get(&self, theta: Estimand, profile: CouplingProfile) -> f64 {
        match (theta, profile) {
            (Estimand::Kappa, CouplingProfile::Constant) => self.dk_const,
            (Estimand::Sigma, CouplingProfile::Constant) => self.ds_const,
            (Estimand::Kappa, CouplingProfile::ResonantCosine) => self.dk_mod,
            (Estimand::Sigma, CouplingProfile::ResonantCosine) => self.ds_mod,
        }
    }
}

/// Δκ, Δσ for constant and resonantly modulated coupling at ω_mech t = 2πn,
/// in the r_T ≫ 1 limit.
pub fn closed_form_sensitivities(cfg: &OptomechConfig, g_n: f64, epsilon: f64) -> Result<ClosedFormSensitivities> {
    cfg.validate()?;
    if !(g_n > 0.0 && g_n.is_finite()) {
        return Err(Error::domain("g_N", g_n, "must be finite and > 0"));
    }
    if !(epsilon > 0.0) {
        return Err(Error::domain("epsilon", epsilon, "must be > 0"));
    }
    let dn = cfg.photon_number_std();
    let n = cfg.n_cycles as f64;
    let pre =
        1.0 / ((cfg.m_runs as f64).sqrt() * g_n) / dn * (2.0 * HBAR * cfg.omega_mech.powi(5) / cfg.probe_mass).sqrt();
    Ok(ClosedFormSensitivities {
        dk_const: pre / (8.0 * PI * n * cfg.k0),
        ds_const: pre / (4.0 * PI * n * cfg.k0 * epsilon),
        dk_mod: pre / (4.0 * PI * n * cfg.k0),
        ds_mod: pre / (2.0 * PI * PI * n * n * cfg.k0 * epsilon),
    })
}

/// Coefficients of the disentangled time-evolution operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvolutionFunctionals {
    pub f_na: f64,
    pub f_na2: f64,
    pub f_bplus: f64,
    pub f_bminus: f64,
    pub f_na_bplus: f64,
    pub f_na_bminus: f64,
}

/// Quadrature settings for a window of `t` at frequency `omega`: at least
/// 200 panels per mechanical period.
pub fn settings_for(omega: f64, t: f64) -> QuadSettings {
    let periods = (omega * t.abs() / (2.0 * PI)).max(1.0);
    QuadSettings {
        panels: (200.0 * periods).ceil() as usize,
        ..QuadSettings::default()
    }
}

/// Evaluates the six functionals by nested quadrature. `k_profile` is the
/// coupling g(t) in rad/s and `drive` is V′(x_S(t)) in N.
pub fn evolution_functionals<K, D>(k_profile: K, drive: D, cfg: &OptomechConfig, t: f64) -> Result<EvolutionFunctionals>
where
    K: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    evolution_functionals_with(k_profile, drive, cfg, t, settings_for(cfg.omega_mech, t))
}

pub fn evolution_functionals_with<K, D>(
    k_profile: K,
    drive: D,
    cfg: &OptomechConfig,
    t: f64,
    settings: QuadSettings,
) -> Result<EvolutionFunctionals>
where
    K: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::domain("t", t, "must be finite and >= 0"));
    }
    let w = cfg.omega_mech;
    let scale = cfg.x_zpf() / HBAR;

    let f_na_bplus = -integrate(&|s: f64| k_profile(s) * (w * s).cos(), 0.0, t, settings)?;
    let f_na_bminus = -integrate(&|s: f64| k_profile(s) * (w * s).sin(), 0.0, t, settings)?;
    let f_bplus = scale * integrate(&|s: f64| drive(s) * (w * s).cos(), 0.0, t, settings)?;
    let f_bminus = scale * integrate(&|s: f64| drive(s) * (w * s).sin(), 0.0, t, settings)?;

    let g_cos = Cumulative::new(|s: f64| k_profile(s) * (w * s).cos(), 0.0, t, settings)?;
    let v_cos = Cumulative::new(|s: f64| drive(s) * (w * s).cos(), 0.0, t, settings)?;

    // inner errors surface as NaN in the outer integrand; keep the first one
    let failure: RefCell<Option<QuadError>> = RefCell::new(None);
    let fail_or = |r: std::result::Result<f64, QuadError>| -> Result<f64> {
        match failure.borrow_mut().take() {
            Some(e) => Err(e.into()),
            None => Ok(r?),
        }
    };

    let f_na2 = -2.0
        * fail_or(integrate(
            &|s: f64| k_profile(s) * (w * s).sin() * inner(&g_cos, s, &failure),
            0.0,
            t,
            settings,
        ))?;
    let first = fail_or(integrate(
        &|s: f64| drive(s) * (w * s).sin() * inner(&g_cos, s, &failure),
        0.0,
        t,
        settings,
    ))?;
    let second = fail_or(integrate(
        &|s: f64| k_profile(s) * (w * s).sin() * inner(&v_cos, s, &failure),
        0.0,
        t,
        settings,
    ))?;

    Ok(EvolutionFunctionals {
        f_na: 2.0 * scale * (first + second),
        f_na2,
        f_bplus,
        f_bminus,
        f_na_bplus,
        f_na_bminus,
    })
}

fn inner<G: Fn(f64) -> f64>(c: &Cumulative<G>, s: f64, failure: &RefCell<Option<QuadError>>) -> f64 {
    match c.at(s) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    }
}

/// I_θ = 4B²|μ_c|² + 4(C₊² + C₋²)/cosh(2r_T) from θ-derivatives of the functionals.
pub fn qfi_linear(d_f_na: f64, d_f_bplus: f64, d_f_bminus: f64, f_na_bminus: f64, mu_c: Complex64, r_t: f64) -> f64 {
    let b = -d_f_na - 2.0 * f_na_bminus * d_f_bplus;
    let c_plus = -d_f_bplus;
    let c_minus = -d_f_bminus;
    let thermal = if r_t.is_finite() {
        (c_plus * c_plus + c_minus * c_minus) / (2.0 * r_t).cosh()
    } else {
        0.0
    };
    4.0 * b * b * mu_c.norm_sqr() + 4.0 * thermal
}

/// Cramér–Rao bound 1/√(𝓜 I).
pub fn cramer_rao(qfi: f64, m_runs: u64) -> f64 {
    1.0 / ((m_runs as f64) * qfi).sqrt()
}

/// Δθ from the quadrature route, with the drive phase fixed to the one the
/// closed forms assume for `profile` and ω0 = ω_mech.
pub fn numeric_sensitivity(
    cfg: &OptomechConfig,
    g_n: f64,
    epsilon: f64,
    theta: Estimand,
    profile: CouplingProfile,
) -> Result<f64> {
    cfg.validate()?;
    let w = cfg.omega_mech;
    let k0 = cfg.k0;
    let phi0 = profile.optimal_phase();
    let force = cfg.probe_mass * g_n;
    let d_drive = move |t: f64| match theta {
        Estimand::Kappa => -force,
        Estimand::Sigma => -force * epsilon * (w * t + phi0).cos(),
    };
    let f = evolution_functionals(
        move |t| profile.coupling(k0, w, t),
        d_drive,
        cfg,
        cfg.measurement_time(),
    )?;
    let qfi = qfi_linear(f.f_na, f.f_bplus, f.f_bminus, f.f_na_bminus, cfg.mu_c, cfg.r_t());
    Ok(cramer_rao(qfi, cfg.m_runs))
}

/// One line of the numeric-vs-closed-form comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QfiCheck {
    pub theta: Estimand,
    pub profile: CouplingProfile,
    pub n_cycles: u32,
    pub numeric: f64,
    pub closed_form: f64,
    pub rel_deviation: f64,
}

/// Compares both routes for θ ∈ {κ, σ}, both profiles and each n in `ns`.
/// Squeezing is switched off, since the QFI expression holds for coherent light.
pub fn verify_closed_forms(cfg: &OptomechConfig, g_n: f64, epsilon: f64, ns: &[u32]) -> Result<Vec<QfiCheck>> {
    let mut out = Vec::with_capacity(4 * ns.len());
    for &n in ns {
        let c = OptomechConfig {
            r_sq: 0.0,
            n_cycles: n,
            ..*cfg
        };
        let closed = closed_form_sensitivities(&c, g_n, epsilon)?;
        for theta in [Estimand::Kappa, Estimand::Sigma] {
            for profile in [CouplingProfile::Constant, CouplingProfile::ResonantCosine] {
                let numeric = numeric_sensitivity(&c, g_n, epsilon, theta, profile)?;
                let closed_form = closed.get(theta, profile);
                out.push(QfiCheck {
                    theta,
                    profile,
                    n_cycles: n,
                    numeric,
                    closed_form,
                    rel_deviation: ((numeric - closed_form) / closed_form).abs(),
                });
            }
        }
    }
    Ok(out)
}
