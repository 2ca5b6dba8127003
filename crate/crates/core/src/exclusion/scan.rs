use super::{contour::marching_squares, BoundaryLine, CellNote, ExclusionGrid, Execution, GridSpec, Metric};
use crate::chameleon::{background_state, effective_yukawa_in, screening_margin, ChameleonModel};
use crate::error::Result;
use crate::forces::{ExperimentSetup, LinearizedCoefficients};
use crate::optomech::{closed_form_sensitivities, ClosedFormSensitivities, OptomechConfig};

/// Everything a cell needs, computed once per scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanContext {
    pub setup: ExperimentSetup,
    pub sensitivities: ClosedFormSensitivities,
    pub metric: Metric,
}

impl ScanContext {
    pub fn new(setup: &ExperimentSetup, cfg: &OptomechConfig, metric: Metric) -> Result<Self> {
        setup.validate()?;
        let sensitivities = closed_form_sensitivities(cfg, setup.g_newton(), setup.epsilon)?;
        Ok(ScanContext {
            setup: *setup,
            sensitivities,
            metric,
        })
    }

    fn ratio(&self, c: &LinearizedCoefficients) -> f64 {
        let s = &self.sensitivities;
        match self.metric {
            Metric::SigmaConst => s.ds_const / c.sigma,
            Metric::SigmaMod => s.ds_mod / c.sigma,
            Metric::KappaConst => s.dk_const / c.kappa,
            Metric::KappaMod => s.dk_mod / c.kappa,
            Metric::ForceRatio => self.setup.epsilon * c.sigma,
        }
    }
}

/// Δθ/θ (or εσ) for a point-probe Yukawa modification.
pub fn yukawa_cell(ctx: &ScanContext, alpha: f64, lambda: f64) -> Result<f64> {
    let c = ctx.setup.linearize(alpha, lambda, false)?;
    Ok(ctx.ratio(&c))
}

/// Δσ/σ-type ratio for a chameleon with M = `m_over_mp`·M_P and Λ in eV.
pub fn chameleon_cell(ctx: &ScanContext, m_over_mp: f64, lambda_ev: f64, probe_screening: bool) -> Result<f64> {
    let model = ChameleonModel::from_planck_ratio(m_over_mp, lambda_ev)?;
    let bg = background_state(&model, ctx.setup.rho_bg)?;
    let y = effective_yukawa_in(&model, &ctx.setup.source, &ctx.setup.probe, &bg, probe_screening)?;
    let c = ctx.setup.linearize(y.alpha, y.lambda, probe_screening)?;
    Ok(ctx.ratio(&c))
}

fn annotate(i: usize, j: usize, value: Result<f64>) -> (f64, Option<CellNote>) {
    match value {
        Ok(v) if v.is_finite() => (v, None),
        Ok(v) => (
            v,
            Some(CellNote {
                i,
                j,
                message: "no signal: modification is zero or underflows".to_string(),
            }),
        ),
        Err(e) => (
            f64::NAN,
            Some(CellNote {
                i,
                j,
                message: e.to_string(),
            }),
        ),
    }
}

type Row = (Vec<f64>, Vec<CellNote>);

fn map_rows<F>(ny: usize, exec: Execution, row: F) -> Result<Vec<Row>>
where
    F: Fn(usize) -> Row + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        match exec {
            Execution::Sequential => Ok((0..ny).map(row).collect()),
            Execution::Parallel => Ok((0..ny).into_par_iter().map(row).collect()),
            Execution::ParallelWith { threads } => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads.max(1))
                    .build()
                    .map_err(|e| crate::error::Error::ThreadPool(e.to_string()))?;
                Ok(pool.install(|| (0..ny).into_par_iter().map(&row).collect()))
            }
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = exec;
        Ok((0..ny).map(row).collect())
    }
}

fn assemble(spec: &GridSpec, metric: Metric, probe_screening: bool, rows: Vec<Row>) -> ExclusionGrid {
    let mut ratio = Vec::with_capacity(rows.len());
    let mut notes = Vec::new();
    for (r, n) in rows {
        ratio.push(r);
        notes.extend(n);
    }
    ExclusionGrid {
        x_axis: spec.x.values(),
        y_axis: spec.y.values(),
        ratio,
        metric,
        probe_screening,
        notes,
    }
}

/// Scan over λ (x, m) and α (y) with point-probe coefficients.
pub fn scan_yukawa(
    setup: &ExperimentSetup,
    cfg: &OptomechConfig,
    spec: &GridSpec,
    metric: Metric,
    exec: Execution,
) -> Result<ExclusionGrid> {
    spec.validate()?;
    let ctx = ScanContext::new(setup, cfg, metric)?;
    let xs = spec.x.values();
    let ys = spec.y.values();
    let rows = map_rows(ys.len(), exec, |j| {
        let mut vals = Vec::with_capacity(xs.len());
        let mut notes = Vec::new();
        for (i, &lambda) in xs.iter().enumerate() {
            let (v, note) = annotate(i, j, yukawa_cell(&ctx, ys[j], lambda));
            vals.push(v);
            notes.extend(note);
        }
        (vals, notes)
    })?;
    Ok(assemble(spec, metric, false, rows))
}

/// Result of a chameleon scan: the ratio grid and the screening-onset lines.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ChameleonScan {
    pub grid: ExclusionGrid,
    /// ρ_S R_S² = 3Mφ_bg
    pub s_source_zero: Vec<BoundaryLine>,
    /// ρ_P R_P² = 3Mφ_bg
    pub s_probe_zero: Vec<BoundaryLine>,
}

/// Scan over M/M_P (x) and Λ in eV (y).
pub fn scan_chameleon(
    setup: &ExperimentSetup,
    cfg: &OptomechConfig,
    spec: &GridSpec,
    metric: Metric,
    probe_screening: bool,
    exec: Execution,
) -> Result<ChameleonScan> {
    spec.validate()?;
    let ctx = ScanContext::new(setup, cfg, metric)?;
    let xs = spec.x.values();
    let ys = spec.y.values();
    let rows = map_rows(ys.len(), exec, |j| {
        let mut vals = Vec::with_capacity(xs.len());
        let mut notes = Vec::new();
        for (i, &m) in xs.iter().enumerate() {
            let (v, note) = annotate(i, j, chameleon_cell(&ctx, m, ys[j], probe_screening));
            vals.push(v);
            notes.extend(note);
        }
        (vals, notes)
    })?;

    // ln(ρR²/(3Mφ_bg)) is cheap and error-free, so it is filled sequentially
    let margins = |body| -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(xs.len() * ys.len());
        for &l in &ys {
            for &m in &xs {
                let model = ChameleonModel::from_planck_ratio(m, l)?;
                let bg = background_state(&model, setup.rho_bg)?;
                out.push(screening_margin(body, &model, &bg)?);
            }
        }
        Ok(out)
    };
    let lx: Vec<f64> = xs.iter().map(|v| v.log10()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.log10()).collect();
    let onset = |vals: &[f64]| -> Vec<BoundaryLine> {
        marching_squares(&lx, &ly, vals, 0.0)
            .into_iter()
            .map(|l| BoundaryLine {
                vertices: l
                    .vertices
                    .iter()
                    .map(|&(x, y)| (10f64.powf(x), 10f64.powf(y)))
                    .collect(),
                level: 0.0,
            })
            .collect()
    };
    let s_source_zero = onset(&margins(&setup.source)?);
    let s_probe_zero = onset(&margins(&setup.probe)?);

    Ok(ChameleonScan {
        grid: assemble(spec, metric, probe_screening, rows),
        s_source_zero,
        s_probe_zero,
    })
}
