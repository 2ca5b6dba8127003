//! TOML run configuration. Every field is optional; absent fields take the
//! example-experiment values from [`modgrav_core::presets`].

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use modgrav_core::chameleon::SphereBody;
use modgrav_core::exclusion::{AxisSpec, GridSpec, Metric};
use modgrav_core::forces::ExperimentSetup;
use modgrav_core::optomech::{CouplingProfile, OptomechConfig, ThermalState};
use modgrav_core::{presets, units};
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BodySpec {
    /// kg
    pub mass: Option<f64>,
    /// m
    pub radius: Option<f64>,
    /// kg/m³
    pub density: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnvironmentSpec {
    /// kg/m³
    pub rho_bg: Option<f64>,
    /// Pa
    pub pressure: Option<f64>,
    /// kg
    pub molecule_mass: Option<f64>,
    /// K
    pub temperature: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometrySpec {
    pub x0: Option<f64>,
    pub epsilon: Option<f64>,
    /// rad/s; defaults to the trap frequency
    pub omega0: Option<f64>,
    pub phi0: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptomechSpec {
    pub omega_mech: Option<f64>,
    pub k0: Option<f64>,
    pub mu_c: Option<f64>,
    pub mu_c_im: Option<f64>,
    pub r_sq: Option<f64>,
    pub varphi: Option<f64>,
    pub r_t: Option<f64>,
    /// K; alternative to r_t
    pub temperature: Option<f64>,
    pub n_cycles: Option<u32>,
    pub m_runs: Option<u64>,
    /// "constant" or "resonant_cosine"
    pub coupling_profile: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct YukawaGridSpec {
    pub lambda_min: Option<f64>,
    pub lambda_max: Option<f64>,
    pub alpha_min: Option<f64>,
    pub alpha_max: Option<f64>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChameleonGridSpec {
    pub m_min: Option<f64>,
    pub m_max: Option<f64>,
    pub lambda_min: Option<f64>,
    pub lambda_max: Option<f64>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanSpec {
    pub metric: Option<String>,
    pub probe_screening: Option<bool>,
    pub yukawa: YukawaGridSpec,
    pub chameleon: ChameleonGridSpec,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    /// "csv" or "json"
    pub format: Option<String>,
    pub path: Option<PathBuf>,
}

/// The file as written, before defaults and validation.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RawConfig {
    pub source: BodySpec,
    pub probe: BodySpec,
    pub environment: EnvironmentSpec,
    pub geometry: GeometrySpec,
    pub optomech: OptomechSpec,
    pub scan: ScanSpec,
    pub output: OutputSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanSettings {
    pub metric: Metric,
    pub probe_screening: bool,
    pub yukawa: GridSpec,
    pub chameleon: GridSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSettings {
    pub format: OutputFormat,
    pub path: Option<PathBuf>,
}

/// A validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub setup: ExperimentSetup,
    pub optomech: OptomechConfig,
    pub scan: ScanSettings,
    pub output: OutputSettings,
}

impl Default for RunConfig {
    fn default() -> Self {
        RawConfig::default().resolve().expect("built-in defaults are valid")
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    raw.resolve()
}

fn body(name: &str, spec: &BodySpec, default_mass: f64, default_density: f64) -> Result<SphereBody, CliError> {
    let core = |e| CliError::from_core(name, e);
    match (spec.mass, spec.radius, spec.density) {
        (None, None, None) => SphereBody::from_mass_density(default_mass, default_density),
        (Some(m), None, None) => SphereBody::from_mass_density(m, default_density),
        (None, Some(r), None) => SphereBody::from_radius_density(r, default_density),
        (None, None, Some(d)) => SphereBody::from_mass_density(default_mass, d),
        (Some(m), Some(r), None) => SphereBody::from_mass_radius(m, r),
        (Some(m), None, Some(d)) => SphereBody::from_mass_density(m, d),
        (None, Some(r), Some(d)) => SphereBody::from_radius_density(r, d),
        (Some(m), Some(r), Some(d)) => SphereBody::new(m, r, d),
    }
    .map_err(core)
}

fn background(env: &EnvironmentSpec) -> Result<f64, CliError> {
    let gas = [env.pressure, env.molecule_mass, env.temperature];
    match (env.rho_bg, gas.iter().any(Option::is_some)) {
        (Some(_), true) => Err(CliError::validation(
            "environment",
            "give either rho_bg or pressure, molecule_mass and temperature, not both",
        )),
        (Some(rho), false) => Ok(rho),
        (None, false) => Ok(presets::RHO_BG),
        (None, true) => {
            let need = |v: Option<f64>, field: &str| {
                v.ok_or_else(|| CliError::validation(format!("environment.{field}"), "required with pressure"))
            };
            let p = need(env.pressure, "pressure")?;
            let m = need(env.molecule_mass, "molecule_mass")?;
            let t = need(env.temperature, "temperature")?;
            units::density_from_pressure(p, m, t).map_err(|e| CliError::from_core("environment", e))
        }
    }
}

fn profile(name: Option<&str>) -> Result<CouplingProfile, CliError> {
    match name {
        None | Some("resonant_cosine") => Ok(CouplingProfile::ResonantCosine),
        Some("constant") => Ok(CouplingProfile::Constant),
        Some(other) => Err(CliError::validation(
            "optomech.coupling_profile",
            format!("unknown profile `{other}` (constant or resonant_cosine)"),
        )),
    }
}

fn axis(field: &str, min: f64, max: f64, n: usize) -> Result<AxisSpec, CliError> {
    AxisSpec::new(min, max, n).map_err(|e| CliError::validation(field, e.to_string()))
}

impl RawConfig {
    /// Fill defaults, derive dependent quantities and validate.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let source = body("source", &self.source, presets::SOURCE_MASS, presets::SOURCE_DENSITY)?;
        let probe = body("probe", &self.probe, presets::PROBE_MASS, presets::PROBE_DENSITY)?;
        let rho_bg = background(&self.environment)?;

        let o = &self.optomech;
        let d = presets::optomech();
        let thermal = match (o.r_t, o.temperature) {
            (Some(_), Some(_)) => {
                return Err(CliError::validation(
                    "optomech",
                    "give either r_t or temperature, not both",
                ))
            }
            (Some(r), None) => ThermalState::Parameter(r),
            (None, Some(t)) => ThermalState::Temperature(t),
            (None, None) => d.thermal,
        };
        let optomech = OptomechConfig {
            omega_mech: o.omega_mech.unwrap_or(d.omega_mech),
            k0: o.k0.unwrap_or(d.k0),
            probe_mass: probe.mass(),
            mu_c: Complex64::new(o.mu_c.unwrap_or(d.mu_c.re), o.mu_c_im.unwrap_or(d.mu_c.im)),
            r_sq: o.r_sq.unwrap_or(d.r_sq),
            varphi: o.varphi.unwrap_or(d.varphi),
            thermal,
            n_cycles: o.n_cycles.unwrap_or(d.n_cycles),
            m_runs: o.m_runs.unwrap_or(d.m_runs),
            coupling_profile: profile(o.coupling_profile.as_deref())?,
        };
        optomech.validate().map_err(|e| CliError::from_core("optomech", e))?;

        let g = &self.geometry;
        let setup = ExperimentSetup {
            x0: g.x0.unwrap_or(presets::X0),
            epsilon: g.epsilon.unwrap_or(presets::EPSILON),
            omega0: g.omega0.unwrap_or(optomech.omega_mech),
            phi0: g.phi0.unwrap_or(PI / 2.0),
            source,
            probe,
            rho_bg,
        };
        setup.validate().map_err(|e| match e {
            modgrav_core::Error::Domain { quantity: "rho_bg", .. } => CliError::from_core("environment", e),
            e => CliError::from_core("geometry", e),
        })?;

        let metric = match &self.scan.metric {
            None => Metric::SigmaMod,
            Some(s) => s.parse().map_err(|m: String| CliError::validation("scan.metric", m))?,
        };
        let (yd, cd) = (GridSpec::yukawa_default(), GridSpec::chameleon_default());
        let y = &self.scan.yukawa;
        let yukawa = GridSpec {
            x: axis(
                "scan.yukawa.lambda",
                y.lambda_min.unwrap_or(yd.x.min),
                y.lambda_max.unwrap_or(yd.x.max),
                y.nx.unwrap_or(yd.x.n),
            )?,
            y: axis(
                "scan.yukawa.alpha",
                y.alpha_min.unwrap_or(yd.y.min),
                y.alpha_max.unwrap_or(yd.y.max),
                y.ny.unwrap_or(yd.y.n),
            )?,
        };
        let c = &self.scan.chameleon;
        let chameleon = GridSpec {
            x: axis(
                "scan.chameleon.m",
                c.m_min.unwrap_or(cd.x.min),
                c.m_max.unwrap_or(cd.x.max),
                c.nx.unwrap_or(cd.x.n),
            )?,
            y: axis(
                "scan.chameleon.lambda",
                c.lambda_min.unwrap_or(cd.y.min),
                c.lambda_max.unwrap_or(cd.y.max),
                c.ny.unwrap_or(cd.y.n),
            )?,
        };

        let format = match self.output.format.as_deref() {
            None | Some("csv") => OutputFormat::Csv,
            Some("json") => OutputFormat::Json,
            Some(other) => {
                return Err(CliError::validation(
                    "output.format",
                    format!("unknown format `{other}` (csv or json)"),
                ))
            }
        };

        Ok(RunConfig {
            setup,
            optomech,
            scan: ScanSettings {
                metric,
                probe_screening: self.scan.probe_screening.unwrap_or(true),
                yukawa,
                chameleon,
            },
            output: OutputSettings {
                format,
                path: self.output.path.clone(),
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_the_example_experiment() {
        let c = parse_config("").unwrap();
        assert_eq!(c, RunConfig::default());
        assert_eq!(c.setup, presets::setup().unwrap());
        assert_eq!(c.optomech, presets::optomech());
        assert_eq!(c.scan.metric, Metric::SigmaMod);
        assert_eq!(c.output.format, OutputFormat::Csv);
    }

    #[test]
    fn validation_names_the_field() {
        let field = |text: &str| match parse_config(text) {
            Err(CliError::Validation { field, .. }) => field,
            other => panic!("{other:?}"),
        };
        assert_eq!(field("[geometry]\nepsilon = 1.5"), "geometry.epsilon");
        assert_eq!(field("[geometry]\nx0 = 2.4e-4"), "geometry.x0");
        assert_eq!(field("[optomech]\nk0 = -1.0"), "optomech.k0");
        assert_eq!(field("[environment]\nrho_bg = 0.0"), "environment.rho_bg");
        assert_eq!(field("[environment]\npressure = 1e-7"), "environment.molecule_mass");
        assert_eq!(field("[scan]\nmetric = \"sigma\""), "scan.metric");
        assert_eq!(field("[scan.yukawa]\nnx = 1"), "scan.yukawa.lambda");
        assert_eq!(field("[source]\nmass = -1.0"), "source.mass");
        assert!(matches!(parse_config("[geometry]\nx1 = 1.0"), Err(CliError::Parse(_))));
    }

    #[test]
    fn derived_fields() {
        let c = parse_config("[probe]\nmass = 1e-14\ndensity = 1538.0").unwrap();
        assert!((c.setup.probe.radius() / 1.16e-6 - 1.0).abs() < 5e-3);
        let c = parse_config(
            "[environment]\npressure = 1e-7\nmolecule_mass = 3.3e-27\ntemperature = 288.9\n\
             [optomech]\ntemperature = 1e-3",
        )
        .unwrap();
        assert!((c.setup.rho_bg / 8.27e-14 - 1.0).abs() < 2e-3);
        assert!(c.optomech.r_t() > 0.0);
        let c = parse_config("[geometry]\nepsilon = 1e-2\n[scan]\nmetric = \"kappa_const\"").unwrap();
        assert_eq!(c.setup.epsilon, 1e-2);
        assert_eq!(c.scan.metric, Metric::KappaConst);
    }
}
