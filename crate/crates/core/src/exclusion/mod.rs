//! Parameter-space scans, level-set boundaries and convex hulls.

mod contour;
mod hull;
mod scan;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::logspace;

pub use contour::{extract_boundary, marching_squares};
pub use hull::{convex_hull, convex_hull_log};
pub use scan::{chameleon_cell, scan_chameleon, scan_yukawa, yukawa_cell, ChameleonScan, ScanContext};

/// Which ratio a scan records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    SigmaConst,
    SigmaMod,
    KappaConst,
    KappaMod,
    /// F_mod/F_N = εσ rather than an error ratio.
    ForceRatio,
}

impl Metric {
    pub const ALL: [Metric; 5] = [
        Metric::SigmaMod,
        Metric::SigmaConst,
        Metric::KappaConst,
        Metric::KappaMod,
        Metric::ForceRatio,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::SigmaConst => "sigma_const",
            Metric::SigmaMod => "sigma_mod",
            Metric::KappaConst => "kappa_const",
            Metric::KappaMod => "kappa_mod",
            Metric::ForceRatio => "force_ratio",
        }
    }

    /// False for the force ratio, where "< 1" does not mean excluded.
    pub fn is_error_ratio(self) -> bool {
        self != Metric::ForceRatio
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown metric `{s}`"))
    }
}

/// A log-spaced axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl AxisSpec {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        let a = AxisSpec { min, max, n };
        a.validate()?;
        Ok(a)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min > 0.0 && self.min.is_finite()) {
            return Err(Error::domain("axis min", self.min, "must be finite and > 0"));
        }
        if !(self.max > self.min && self.max.is_finite()) {
            return Err(Error::domain("axis max", self.max, "must be finite and > min"));
        }
        if self.n < 2 {
            return Err(Error::domain("axis points", self.n as f64, "must be >= 2"));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        logspace(self.min, self.max, self.n)
    }
}

/// Grid extent: `x` is λ (m) or M/M_P, `y` is α or Λ (eV).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub x: AxisSpec,
    pub y: AxisSpec,
}

impl GridSpec {
    /// λ ∈ [1e-6, 1] m by α ∈ [1e-6, 1e10].
    pub fn yukawa_default() -> Self {
        GridSpec {
            x: AxisSpec {
                min: 1e-6,
                max: 1.0,
                n: 200,
            },
            y: AxisSpec {
                min: 1e-6,
                max: 1e10,
                n: 200,
            },
        }
    }

    /// M/M_P ∈ [1e-6, 1e4] by Λ ∈ [1e-9, 1e2] eV.
    pub fn chameleon_default() -> Self {
        GridSpec {
            x: AxisSpec {
                min: 1e-6,
                max: 1e4,
                n: 200,
            },
            y: AxisSpec {
                min: 1e-9,
                max: 1e2,
                n: 200,
            },
        }
    }

    pub fn with_resolution(self, nx: usize, ny: usize) -> Self {
        GridSpec {
            x: AxisSpec { n: nx, ..self.x },
            y: AxisSpec { n: ny, ..self.y },
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.x.validate()?;
        self.y.validate()
    }
}

/// How the rows of a scan are distributed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Rayon row-parallel; `threads` caps the worker count. Without the
    /// `parallel` feature this runs sequentially.
    #[default]
    Parallel,
    ParallelWith {
        threads: usize,
    },
}

/// Why a cell holds a non-finite ratio.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellNote {
    pub i: usize,
    pub j: usize,
    pub message: String,
}

/// Ratios on a log-spaced grid; `ratio[j][i]` belongs to (x_axis[i], y_axis[j]).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExclusionGrid {
    pub x_axis: Vec<f64>,
    pub y_axis: Vec<f64>,
    pub ratio: Vec<Vec<f64>>,
    pub metric: Metric,
    pub probe_screening: bool,
    pub notes: Vec<CellNote>,
}

impl ExclusionGrid {
    pub fn is_excluded(&self, i: usize, j: usize) -> bool {
        let r = self.ratio[j][i];
        self.metric.is_error_ratio() && r.is_finite() && r < 1.0
    }

    /// Grid nodes inside the exclusion region.
    pub fn excluded_points(&self) -> Vec<(f64, f64)> {
        let mut pts = Vec::new();
        for (j, &y) in self.y_axis.iter().enumerate() {
            for (i, &x) in self.x_axis.iter().enumerate() {
                if self.is_excluded(i, j) {
                    pts.push((x, y));
                }
            }
        }
        pts
    }
}

/// An ordered polyline on the level set; closed loops repeat the first vertex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryLine {
    pub vertices: Vec<(f64, f64)>,
    pub level: f64,
}

impl BoundaryLine {
    pub fn is_closed(&self) -> bool {
        self.vertices.len() > 2 && self.vertices.first() == self.vertices.last()
    }
}
