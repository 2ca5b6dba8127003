//! The example experiment: a 1 mg gold source and a 10 fg silica probe at
//! 1 mm, 100 Hz trap, 1e-9 mbar of hydrogen.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::chameleon::SphereBody;
use crate::error::Result;
use crate::forces::ExperimentSetup;
use crate::optomech::{CouplingProfile, OptomechConfig, ThermalState};

pub const SOURCE_MASS: f64 = 1e-6;
pub const SOURCE_DENSITY: f64 = 19.3e3;
pub const PROBE_MASS: f64 = 1e-14;
pub const PROBE_DENSITY: f64 = 1538.0;
pub const X0: f64 = 1e-3;
pub const EPSILON: f64 = 0.1;
pub const OMEGA_MECH: f64 = 2.0 * PI * 100.0;
pub const K0: f64 = 2.0 * PI * 10.0;
pub const MU_C: f64 = 1e3;
pub const R_SQ: f64 = 1.73;
pub const R_T: f64 = 10.0;
pub const N_CYCLES: u32 = 10;
pub const M_RUNS: u64 = 1000;
pub const RHO_BG: f64 = 8.27e-14;

pub fn source() -> Result<SphereBody> {
    SphereBody::from_mass_density(SOURCE_MASS, SOURCE_DENSITY)
}

pub fn probe() -> Result<SphereBody> {
    SphereBody::from_mass_density(PROBE_MASS, PROBE_DENSITY)
}

/// Resonant drive, φ0 = π/2.
pub fn setup() -> Result<ExperimentSetup> {
    ExperimentSetup::new(X0, EPSILON, OMEGA_MECH, PI / 2.0, source()?, probe()?, RHO_BG)
}

pub fn optomech() -> OptomechConfig {
    OptomechConfig {
        omega_mech: OMEGA_MECH,
        k0: K0,
        probe_mass: PROBE_MASS,
        mu_c: Complex64::new(MU_C, 0.0),
        r_sq: R_SQ,
        varphi: PI,
        thermal: ThermalState::Parameter(R_T),
        n_cycles: N_CYCLES,
        m_runs: M_RUNS,
        coupling_profile: CouplingProfile::ResonantCosine,
    }
}
