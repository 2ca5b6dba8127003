//! Subcommand execution. Each command returns the text for stdout and writes
//! any artifacts itself.

use std::path::{Path, PathBuf};

use modgrav_core::chameleon::{
    background_state, cubic_terms, effective_yukawa_in, screening_radius, BackgroundState, ChameleonModel,
    EffectiveYukawa, ScreeningResult, SphereBody,
};
use modgrav_core::exclusion::{
    convex_hull_log, extract_boundary, scan_chameleon, scan_yukawa, BoundaryLine, CellNote, ExclusionGrid, Execution,
    GridSpec, Metric,
};
use modgrav_core::forces::casimir_force;
use modgrav_core::optomech::{closed_form_sensitivities, verify_closed_forms, ForceSensitivities, QfiCheck};
use serde::Serialize;

use crate::config::{OutputFormat, RunConfig};
use crate::error::CliError;
use crate::output::{grid_csv, to_json, write};

/// Relative tolerance verify-qfi is judged against.
pub const QFI_TOLERANCE: f64 = 1e-5;
pub const QFI_CYCLES: [u32; 3] = [1, 5, 10];

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Sensitivity,
    Screening { m_over_mp: f64, lambda_ev: f64 },
    ScanYukawa,
    ScanChameleon,
    Casimir { temperature: f64 },
    VerifyQfi,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityReport {
    pub n_cycles: u32,
    pub m_runs: u64,
    pub photon_number_std: f64,
    pub epsilon: f64,
    /// m/s²
    pub g_n: f64,
    pub dk_const: f64,
    pub ds_const: f64,
    pub dk_mod: f64,
    pub ds_mod: f64,
    /// N
    pub force: ForceSensitivities,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BodyScreening {
    pub mass: f64,
    pub radius: f64,
    pub density: f64,
    /// ρR²/(3Mφ_bg)
    pub threshold_ratio: f64,
    #[serde(flatten)]
    pub screening: ScreeningResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScreeningReport {
    pub m_over_mp: f64,
    pub lambda_ev: f64,
    pub coupling_ev: f64,
    pub background: BackgroundState,
    pub source: BodyScreening,
    pub probe: BodyScreening,
    pub probe_screening: bool,
    pub effective_yukawa: EffectiveYukawa,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CasimirReport {
    pub temperature: f64,
    pub x0: f64,
    pub source_radius: f64,
    pub probe_radius: f64,
    /// N
    pub force: f64,
    /// m/s²
    pub acceleration: f64,
    pub newtonian_acceleration: f64,
    pub ratio_to_newtonian: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QfiReport {
    pub r_t: f64,
    pub n_cycles: Vec<u32>,
    pub tolerance: f64,
    pub max_rel_deviation: f64,
    pub pass: bool,
    pub checks: Vec<QfiCheck>,
}

/// Boundary and hull side-car of a scan; carries the grid itself when the
/// output format is JSON.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub kind: &'static str,
    pub x: &'static str,
    pub y: &'static str,
    pub metric: Metric,
    pub probe_screening: bool,
    pub spec: GridSpec,
    pub boundaries: Vec<BoundaryLine>,
    /// Hull of the excluded nodes, taken in log10 space.
    pub hull: Vec<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_source_zero: Option<Vec<BoundaryLine>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_probe_zero: Option<Vec<BoundaryLine>>,
    pub notes: Vec<CellNote>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<ExclusionGrid>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSummary {
    pub files: Vec<PathBuf>,
    pub cells: usize,
    pub excluded: usize,
    pub annotated: usize,
    pub boundaries: usize,
}

pub fn sensitivity(cfg: &RunConfig) -> Result<SensitivityReport, CliError> {
    let s = &cfg.setup;
    let g_n = s.g_newton();
    let c = closed_form_sensitivities(&cfg.optomech, g_n, s.epsilon).map_err(|e| CliError::from_core("optomech", e))?;
    Ok(SensitivityReport {
        n_cycles: cfg.optomech.n_cycles,
        m_runs: cfg.optomech.m_runs,
        photon_number_std: cfg.optomech.photon_number_std(),
        epsilon: s.epsilon,
        g_n,
        dk_const: c.dk_const,
        ds_const: c.ds_const,
        dk_mod: c.dk_mod,
        ds_mod: c.ds_mod,
        force: c.force_sensitivities(cfg.optomech.probe_mass, g_n, s.epsilon),
    })
}

fn body_screening(body: &SphereBody, model: &ChameleonModel, bg: &BackgroundState) -> Result<BodyScreening, CliError> {
    let num = |e| CliError::from_core("", e);
    Ok(BodyScreening {
        mass: body.mass(),
        radius: body.radius(),
        density: body.density(),
        threshold_ratio: cubic_terms(body, model, bg).map_err(num)?.threshold_ratio,
        screening: screening_radius(body, model, bg).map_err(num)?,
    })
}

pub fn screening(cfg: &RunConfig, m_over_mp: f64, lambda_ev: f64) -> Result<ScreeningReport, CliError> {
    let model = ChameleonModel::from_planck_ratio(m_over_mp, lambda_ev).map_err(|e| CliError::from_core("model", e))?;
    let s = &cfg.setup;
    let bg = background_state(&model, s.rho_bg).map_err(|e| CliError::from_core("environment", e))?;
    let effective_yukawa = effective_yukawa_in(&model, &s.source, &s.probe, &bg, cfg.scan.probe_screening)
        .map_err(|e| CliError::from_core("", e))?;
    Ok(ScreeningReport {
        m_over_mp,
        lambda_ev,
        coupling_ev: model.coupling(),
        background: bg,
        source: body_screening(&s.source, &model, &bg)?,
        probe: body_screening(&s.probe, &model, &bg)?,
        probe_screening: cfg.scan.probe_screening,
        effective_yukawa,
    })
}

pub fn casimir(cfg: &RunConfig, temperature: f64) -> Result<CasimirReport, CliError> {
    let s = &cfg.setup;
    let (r_s, r_p) = (s.source.radius(), s.probe.radius());
    let force = casimir_force(temperature, r_s, r_p, s.x0).map_err(|e| CliError::from_core("", e))?;
    let acceleration = force / s.probe.mass();
    let g_n = s.g_newton();
    Ok(CasimirReport {
        temperature,
        x0: s.x0,
        source_radius: r_s,
        probe_radius: r_p,
        force,
        acceleration,
        newtonian_acceleration: g_n,
        ratio_to_newtonian: acceleration / g_n,
    })
}

pub fn verify_qfi(cfg: &RunConfig) -> Result<QfiReport, CliError> {
    let s = &cfg.setup;
    let checks = verify_closed_forms(&cfg.optomech, s.g_newton(), s.epsilon, &QFI_CYCLES)
        .map_err(|e| CliError::from_core("optomech", e))?;
    let max_rel_deviation = checks.iter().map(|c| c.rel_deviation).fold(0.0, f64::max);
    Ok(QfiReport {
        r_t: cfg.optomech.r_t(),
        n_cycles: QFI_CYCLES.to_vec(),
        tolerance: QFI_TOLERANCE,
        max_rel_deviation,
        pass: max_rel_deviation < QFI_TOLERANCE,
        checks,
    })
}

fn hull_of(grid: &ExclusionGrid) -> Vec<(f64, f64)> {
    let pts = grid.excluded_points();
    if pts.is_empty() {
        return Vec::new();
    }
    convex_hull_log(&pts).expect("excluded grid nodes are positive and finite")
}

fn boundaries_of(grid: &ExclusionGrid) -> Vec<BoundaryLine> {
    if grid.metric.is_error_ratio() {
        extract_boundary(grid, 1.0)
    } else {
        Vec::new()
    }
}

/// Write the grid and side-car, returning the summary printed on stdout.
fn emit_scan(
    cfg: &RunConfig,
    out: &Path,
    mut report: ScanReport,
    grid: ExclusionGrid,
) -> Result<ScanSummary, CliError> {
    let summary = |files| ScanSummary {
        files,
        cells: grid.x_axis.len() * grid.y_axis.len(),
        excluded: grid.excluded_points().len(),
        annotated: grid.notes.len(),
        boundaries: report.boundaries.len(),
    };
    match cfg.output.format {
        OutputFormat::Csv => {
            let side = out.with_extension("json");
            write(out, &grid_csv(&grid))?;
            write(&side, &to_json(&report))?;
            Ok(summary(vec![out.to_path_buf(), side]))
        }
        OutputFormat::Json => {
            let s = summary(vec![out.to_path_buf()]);
            report.grid = Some(grid);
            write(out, &to_json(&report))?;
            Ok(s)
        }
    }
}

fn default_out(cfg: &RunConfig, stem: &str) -> PathBuf {
    cfg.output.path.clone().unwrap_or_else(|| {
        PathBuf::from(match cfg.output.format {
            OutputFormat::Csv => format!("{stem}.csv"),
            OutputFormat::Json => format!("{stem}.json"),
        })
    })
}

pub fn run_scan_yukawa(cfg: &RunConfig, exec: Execution, out: &Path) -> Result<ScanSummary, CliError> {
    let spec = cfg.scan.yukawa;
    let grid = scan_yukawa(&cfg.setup, &cfg.optomech, &spec, cfg.scan.metric, exec)
        .map_err(|e| CliError::from_core("scan", e))?;
    let report = ScanReport {
        kind: "yukawa",
        x: "lambda_m",
        y: "alpha",
        metric: grid.metric,
        probe_screening: false,
        spec,
        boundaries: boundaries_of(&grid),
        hull: hull_of(&grid),
        s_source_zero: None,
        s_probe_zero: None,
        notes: grid.notes.clone(),
        grid: None,
    };
    emit_scan(cfg, out, report, grid)
}

pub fn run_scan_chameleon(cfg: &RunConfig, exec: Execution, out: &Path) -> Result<ScanSummary, CliError> {
    let spec = cfg.scan.chameleon;
    let scan = scan_chameleon(
        &cfg.setup,
        &cfg.optomech,
        &spec,
        cfg.scan.metric,
        cfg.scan.probe_screening,
        exec,
    )
    .map_err(|e| CliError::from_core("scan", e))?;
    let grid = scan.grid;
    let report = ScanReport {
        kind: "chameleon",
        x: "m_over_mp",
        y: "lambda_ev",
        metric: grid.metric,
        probe_screening: grid.probe_screening,
        spec,
        boundaries: boundaries_of(&grid),
        hull: hull_of(&grid),
        s_source_zero: Some(scan.s_source_zero),
        s_probe_zero: Some(scan.s_probe_zero),
        notes: grid.notes.clone(),
        grid: None,
    };
    emit_scan(cfg, out, report, grid)
}

/// stdout text and exit status of a successful run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
}

/// Run one subcommand. verify-qfi exits 2 when the deviation exceeds the tolerance.
pub fn execute(cmd: &Command, cfg: &RunConfig, exec: Execution) -> Result<Outcome, CliError> {
    let single = |text: String| -> Result<Outcome, CliError> {
        if let Some(p) = &cfg.output.path {
            write(p, &text)?;
        }
        Ok(Outcome {
            stdout: text,
            exit_code: 0,
        })
    };
    let scan = |s: ScanSummary| Outcome {
        stdout: to_json(&s),
        exit_code: 0,
    };
    match cmd {
        Command::Sensitivity => single(to_json(&sensitivity(cfg)?)),
        Command::Screening { m_over_mp, lambda_ev } => single(to_json(&screening(cfg, *m_over_mp, *lambda_ev)?)),
        Command::Casimir { temperature } => single(to_json(&casimir(cfg, *temperature)?)),
        Command::VerifyQfi => {
            let r = verify_qfi(cfg)?;
            let mut o = single(to_json(&r))?;
            if !r.pass {
                o.exit_code = 2;
            }
            Ok(o)
        }
        Command::ScanYukawa => Ok(scan(run_scan_yukawa(cfg, exec, &default_out(cfg, "scan-yukawa"))?)),
        Command::ScanChameleon => Ok(scan(run_scan_chameleon(
            cfg,
            exec,
            &default_out(cfg, "scan-chameleon"),
        )?)),
    }
}
