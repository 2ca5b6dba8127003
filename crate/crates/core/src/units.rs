//! Physical constants and the SI ↔ natural-unit bridge.
//!
//! Chameleon quantities are evaluated with energies in eV and lengths in
//! eV⁻¹ (via ħc); everything outside the `chameleon` module stays in SI.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light, m/s (exact).
pub const C: f64 = 299_792_458.0;
/// Newtonian constant of gravitation, m³·kg⁻¹·s⁻².
pub const G: f64 = 6.674_30e-11;
/// Boltzmann constant, J/K (exact).
pub const K_B: f64 = 1.380_649e-23;
/// Joules per electronvolt (exact).
pub const EV: f64 = 1.602_176_634e-19;
/// ħc in eV·m.
pub const HBAR_C: f64 = 1.973_269_804e-7;
/// Reduced Planck mass √(ħc/8πG) expressed as a mass, kg.
pub const REDUCED_PLANCK_MASS_KG: f64 = 4.341e-9;

/// The constant table as a value, for callers that want to carry it around.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub hbar: f64,
    pub c: f64,
    pub g: f64,
    pub k_b: f64,
    pub ev: f64,
    pub hbar_c: f64,
    pub reduced_planck_mass_kg: f64,
}

impl Constants {
    pub const SI: Constants = Constants {
        hbar: HBAR,
        c: C,
        g: G,
        k_b: K_B,
        ev: EV,
        hbar_c: HBAR_C,
        reduced_planck_mass_kg: REDUCED_PLANCK_MASS_KG,
    };

    /// Reduced Planck mass as an energy, eV.
    pub fn reduced_planck_mass_ev(&self) -> f64 {
        self.reduced_planck_mass_kg * self.c * self.c / self.ev
    }
}

/// Reduced Planck mass in eV (≈ 2.435e27).
pub fn reduced_planck_mass_ev() -> f64 {
    Constants::SI.reduced_planck_mass_ev()
}

fn non_negative(quantity: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::domain(quantity, value, "must be finite and >= 0"))
    }
}

fn positive(quantity: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::domain(quantity, value, "must be finite and > 0"))
    }
}

/// Rest energy m c² in eV.
pub fn mass_to_natural(mass_kg: f64) -> Result<f64> {
    Ok(non_negative("mass", mass_kg)? * C * C / EV)
}

/// Inverse of [`mass_to_natural`].
pub fn mass_from_natural(energy_ev: f64) -> Result<f64> {
    Ok(non_negative("energy", energy_ev)? * EV / (C * C))
}

/// Mass density as an energy density in eV⁴: ρ c²/e · (ħc)³.
pub fn density_to_natural(rho: f64) -> Result<f64> {
    Ok(non_negative("density", rho)? * C * C / EV * HBAR_C.powi(3))
}

/// Inverse of [`density_to_natural`].
pub fn density_from_natural(rho_ev4: f64) -> Result<f64> {
    Ok(non_negative("energy density", rho_ev4)? / HBAR_C.powi(3) * EV / (C * C))
}

/// Length in metres as an inverse energy in eV⁻¹.
pub fn length_to_natural(length_m: f64) -> f64 {
    length_m / HBAR_C
}

/// Inverse energy in eV⁻¹ back to metres.
pub fn length_from_natural(length_inv_ev: f64) -> f64 {
    length_inv_ev * HBAR_C
}

/// Ideal-gas density ρ = P m / (k_B T).
pub fn density_from_pressure(pressure: f64, molecule_mass: f64, temperature: f64) -> Result<f64> {
    let pressure = non_negative("pressure", pressure)?;
    let molecule_mass = positive("molecule mass", molecule_mass)?;
    let temperature = positive("temperature", temperature)?;
    Ok(pressure * molecule_mass / (K_B * temperature))
}

/// Radius of a homogeneous sphere of the given mass and density.
pub fn radius_from_mass(mass: f64, density: f64) -> Result<f64> {
    let mass = non_negative("mass", mass)?;
    let density = positive("density", density)?;
    Ok((3.0 * mass / (4.0 * PI * density)).cbrt())
}
