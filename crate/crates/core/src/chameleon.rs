//! The n = 1 chameleon: background state, thin-shell screening of a sphere,
//! and the asymptotically matched field profile.
//!
//! Inputs and outputs are SI except field values and masses of the theory,
//! which are in eV. Internally lengths are carried in eV⁻¹.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{newton_bisect, Tolerance};
use crate::units::{self, reduced_planck_mass_ev};

/// Taylor branch is used once the cubic root satisfies 1 − S/R below this.
pub const TAYLOR_SWITCH: f64 = 1e-6;
/// Relative band around ρR² = 3Mφ_bg that is treated as unscreened.
pub const THRESHOLD_BAND: f64 = 1e-12;

/// Theory parameters of the chameleon potential V = Λ⁵/φ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChameleonModel {
    coupling_ev: f64,
    lambda_ev: f64,
    n: u32,
}

impl ChameleonModel {
    /// Model with coupling mass `m_ev` and energy scale `lambda_ev`, both in eV.
    pub fn new(m_ev: f64, lambda_ev: f64) -> Result<Self> {
        Self::with_exponent(m_ev, lambda_ev, 1)
    }

    /// Only n = 1 is implemented; any other exponent is rejected.
    pub fn with_exponent(m_ev: f64, lambda_ev: f64, n: u32) -> Result<Self> {
        if !(m_ev > 0.0 && m_ev.is_finite()) {
            return Err(Error::domain("M", m_ev, "must be finite and > 0"));
        }
        if !(lambda_ev > 0.0 && lambda_ev.is_finite()) {
            return Err(Error::domain("Lambda", lambda_ev, "must be finite and > 0"));
        }
        if n != 1 {
            return Err(Error::domain("n", n as f64, "only n = 1 is supported"));
        }
        Ok(ChameleonModel {
            coupling_ev: m_ev,
            lambda_ev,
            n,
        })
    }

    /// Model with M given as a multiple of the reduced Planck mass.
    pub fn from_planck_ratio(m_over_mp: f64, lambda_ev: f64) -> Result<Self> {
        Self::new(m_over_mp * reduced_planck_mass_ev(), lambda_ev)
    }

    /// Coupling mass M, eV.
    pub fn coupling(&self) -> f64 {
        self.coupling_ev
    }

    pub fn planck_ratio(&self) -> f64 {
        self.coupling_ev / reduced_planck_mass_ev()
    }

    /// Λ, eV.
    pub fn lambda(&self) -> f64 {
        self.lambda_ev
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Equilibrium field φ = √(MΛ⁵/ρ̃) for a natural-unit density, eV.
    fn equilibrium_field(&self, rho_nat: f64) -> f64 {
        (self.coupling_ev * self.lambda_ev.powi(5) / rho_nat).sqrt()
    }
}

/// Homogeneous sphere. Any two of mass, radius and density fix the third.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereBody {
    mass: f64,
    radius: f64,
    density: f64,
}

fn positive(quantity: &'static str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::domain(quantity, v, "must be finite and > 0"))
    }
}

fn ball_volume(radius: f64) -> f64 {
    4.0 / 3.0 * PI * radius.powi(3)
}

impl SphereBody {
    /// Checked constructor: the density must equal mass/volume to 1e-9.
    pub fn new(mass: f64, radius: f64, density: f64) -> Result<Self> {
        let body = Self::from_mass_radius(mass, radius)?;
        let density = positive("density", density)?;
        if ((body.density - density) / density).abs() > 1e-9 {
            return Err(Error::domain("density", density, "inconsistent with mass and radius"));
        }
        Ok(body)
    }

    pub fn from_mass_radius(mass: f64, radius: f64) -> Result<Self> {
        let mass = positive("mass", mass)?;
        let radius = positive("radius", radius)?;
        Ok(SphereBody {
            mass,
            radius,
            density: mass / ball_volume(radius),
        })
    }

    pub fn from_mass_density(mass: f64, density: f64) -> Result<Self> {
        let mass = positive("mass", mass)?;
        let density = positive("density", density)?;
        Ok(SphereBody {
            mass,
            radius: units::radius_from_mass(mass, density)?,
            density,
        })
    }

    pub fn from_radius_density(radius: f64, density: f64) -> Result<Self> {
        let radius = positive("radius", radius)?;
        let density = positive("density", density)?;
        Ok(SphereBody {
            mass: density * ball_volume(radius),
            radius,
            density,
        })
    }

    /// kg
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// m
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// kg/m³
    pub fn density(&self) -> f64 {
        self.density
    }
}

/// Field equilibrium in a uniform environment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BackgroundState {
    /// eV
    pub phi_bg: f64,
    /// eV
    pub m_bg: f64,
    /// m
    pub lambda_bg: f64,
    /// kg/m³
    pub rho_bg: f64,
}

pub fn background_state(model: &ChameleonModel, rho_bg: f64) -> Result<BackgroundState> {
    let rho_bg = positive("rho_bg", rho_bg)?;
    let rho = units::density_to_natural(rho_bg)?;
    let m = model.coupling_ev;
    let l5 = model.lambda_ev.powi(5);
    let phi_bg = model.equilibrium_field(rho);
    // (4ρ³/(M³Λ⁵))^¼ written to keep intermediate powers in range
    let m_bg = 2f64.sqrt() * (rho / m).powf(0.75) / l5.powf(0.25);
    Ok(BackgroundState {
        phi_bg,
        m_bg,
        lambda_bg: units::HBAR_C / m_bg,
        rho_bg,
    })
}

/// Which branch produced ξ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScreeningBranch {
    Unscreened,
    Cubic,
    Taylor,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScreeningResult {
    /// Screening radius S, m.
    pub s: f64,
    /// ξ = 1 − S³/R³, or 1 when unscreened.
    pub xi: f64,
    pub screened: bool,
    pub branch: ScreeningBranch,
}

impl ScreeningResult {
    const UNSCREENED: ScreeningResult = ScreeningResult {
        s: 0.0,
        xi: 1.0,
        screened: false,
        branch: ScreeningBranch::Unscreened,
    };
}

/// Dimensionless pieces of the screening cubic for one body.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicTerms {
    /// m_bg R
    pub mass_radius: f64,
    /// 1/(1 + m_bg R) − 1
    pub a: f64,
    /// 8πMR(φ_bg − φ_i)/(3M_i)
    pub q: f64,
    /// 1 − q + 2a/3
    pub rhs: f64,
    /// ρ_i R² / (3Mφ_bg); above 1 the body is screened
    pub threshold_ratio: f64,
    /// φ_i, eV
    pub phi_i: f64,
}

pub fn cubic_terms(body: &SphereBody, model: &ChameleonModel, bg: &BackgroundState) -> Result<CubicTerms> {
    let rho = units::density_to_natural(body.density)?;
    let r = units::length_to_natural(body.radius);
    let m = model.coupling_ev;
    let phi_i = model.equilibrium_field(rho);
    let mass_radius = bg.m_bg * r;
    let a = -mass_radius / (1.0 + mass_radius);
    // 8πMR/(3M_i) = 2M/(ρR²) for a homogeneous sphere
    let rho_r2 = rho * r * r;
    let q = 2.0 * m * (bg.phi_bg - phi_i) / rho_r2;
    Ok(CubicTerms {
        mass_radius,
        a,
        q,
        rhs: 1.0 - q + 2.0 * a / 3.0,
        threshold_ratio: rho_r2 / (3.0 * m * bg.phi_bg),
        phi_i,
    })
}

/// ln(ρR²/(3Mφ_bg)); zero on the screening onset, positive when screened.
pub fn screening_margin(body: &SphereBody, model: &ChameleonModel, bg: &BackgroundState) -> Result<f64> {
    Ok(cubic_terms(body, model, bg)?.threshold_ratio.ln())
}

pub fn screening_radius(body: &SphereBody, model: &ChameleonModel, bg: &BackgroundState) -> Result<ScreeningResult> {
    let t = cubic_terms(body, model, bg)?;
    if t.threshold_ratio <= 1.0 + THRESHOLD_BAND || bg.phi_bg <= t.phi_i {
        return Ok(ScreeningResult::UNSCREENED);
    }
    if !(t.rhs >= 0.0) {
        return Err(Error::NoScreeningRoot {
            rhs: t.rhs,
            coupling_term: t.q,
            mass_radius: t.mass_radius,
        });
    }
    let k = 2.0 * t.a / 3.0;
    let h = |s: f64| (s * s + k * s * s * s - t.rhs, 2.0 * s + 3.0 * k * s * s);
    let s = newton_bisect(h, 0.0, 1.0, Tolerance::new(1e-14, 1e-300, 300))?;

    let (xi, branch) = if 1.0 - s < TAYLOR_SWITCH {
        (1.5 * t.q * (1.0 + t.mass_radius), ScreeningBranch::Taylor)
    } else {
        (1.0 - s * s * s, ScreeningBranch::Cubic)
    };
    Ok(ScreeningResult {
        s: s * body.radius,
        xi: xi.clamp(0.0, 1.0),
        screened: true,
        branch,
    })
}

/// Piecewise static field around a body, evaluated at radius `r` (m). eV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldProfile {
    phi_bg: f64,
    phi_i: f64,
    m_bg: f64,
    /// natural-unit radii
    s: f64,
    r: f64,
    /// M_i/(8πM R³), eV³
    k: f64,
    /// interior constant
    d: f64,
    /// exterior amplitude: φ = φ_bg − amp·e^{−m(r−R)}/r
    amp: f64,
    screened: bool,
}

impl FieldProfile {
    pub fn new(body: &SphereBody, model: &ChameleonModel, bg: &BackgroundState) -> Result<Self> {
        let t = cubic_terms(body, model, bg)?;
        let scr = screening_radius(body, model, bg)?;
        let r = units::length_to_natural(body.radius);
        let s = units::length_to_natural(scr.s);
        let m_i = units::mass_to_natural(body.mass)?;
        let m = model.coupling_ev;
        let mr = t.mass_radius;
        let k = m_i / (8.0 * PI * m * r.powi(3));
        let (amp, d) = if scr.screened {
            // fixed by matching at R; equals M_i ξ/(4πM(1 + m_bg R)) when S solves the cubic
            let u = r - s;
            let surface = t.phi_i + k * u * u * (r + 2.0 * s) / r;
            (r * (bg.phi_bg - surface), t.phi_i - 3.0 * k * s * s)
        } else {
            let amp = m_i / (4.0 * PI * m * (1.0 + mr));
            (amp, bg.phi_bg - amp / r - k * r * r)
        };
        Ok(FieldProfile {
            phi_bg: bg.phi_bg,
            phi_i: t.phi_i,
            m_bg: bg.m_bg,
            s,
            r,
            k,
            d,
            amp,
            screened: scr.screened,
        })
    }

    /// Exterior amplitude: φ − φ_bg ≈ −amplitude·e^{−m_bg(r−R)}/r with r in eV⁻¹.
    pub fn exterior_amplitude(&self) -> f64 {
        self.amp
    }

    /// φ(r) for r ≥ 0 in metres.
    pub fn at(&self, r_m: f64) -> f64 {
        let x = units::length_to_natural(r_m.max(0.0));
        if x > self.r {
            return self.phi_bg - self.amp * (-self.m_bg * (x - self.r)).exp() / x;
        }
        if self.screened {
            if x <= self.s {
                self.phi_i
            } else {
                // φ_i + k(r³ − 3S²r + 2S³)/r, factored to stay exact at r = S
                let u = x - self.s;
                self.phi_i + self.k * u * u * (x + 2.0 * self.s) / x
            }
        } else {
            self.d + self.k * x * x
        }
    }

    /// Interior constant D of the transition-layer solution.
    pub fn interior_constant(&self) -> f64 {
        self.d
    }
}

pub fn field_profile(body: &SphereBody, model: &ChameleonModel, bg: &BackgroundState, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::domain("r", r, "must be >= 0"));
    }
    Ok(FieldProfile::new(body, model, bg)?.at(r))
}

/// Yukawa strength and range equivalent to the chameleon between two bodies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveYukawa {
    pub alpha: f64,
    /// m
    pub lambda: f64,
    pub xi_source: f64,
    /// 1 unless probe screening was requested
    pub xi_probe: f64,
}

pub fn effective_yukawa(
    model: &ChameleonModel,
    source: &SphereBody,
    probe: &SphereBody,
    rho_bg: f64,
    include_probe: bool,
) -> Result<EffectiveYukawa> {
    let bg = background_state(model, rho_bg)?;
    effective_yukawa_in(model, source, probe, &bg, include_probe)
}

/// As [`effective_yukawa`] with a precomputed background.
pub fn effective_yukawa_in(
    model: &ChameleonModel,
    source: &SphereBody,
    probe: &SphereBody,
    bg: &BackgroundState,
    include_probe: bool,
) -> Result<EffectiveYukawa> {
    let xi_source = screening_radius(source, model, bg)?.xi;
    let xi_probe = if include_probe {
        screening_radius(probe, model, bg)?.xi
    } else {
        1.0
    };
    let ratio = model.planck_ratio();
    Ok(EffectiveYukawa {
        alpha: 2.0 / (ratio * ratio) * xi_source * xi_probe,
        lambda: bg.lambda_bg,
        xi_source,
        xi_probe,
    })
}
