//! `modgrav` command line: TOML configuration, subcommand dispatch and
//! bit-stable CSV/JSON output.

pub mod config;
pub mod error;
pub mod output;
pub mod run;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use modgrav_core::exclusion::{AxisSpec, Execution, Metric};

pub use config::{load_config, parse_config, RunConfig};
pub use error::CliError;
pub use run::{execute, Command, Outcome};

/// Environment variable capping scan parallelism.
pub const THREADS_ENV: &str = "MODGRAV_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OnOff {
    On,
    Off,
}

#[derive(Debug, Parser)]
#[command(
    name = "modgrav",
    version,
    about = "Optomechanical bounds on Yukawa and chameleon gravity"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
    /// TOML configuration; absent fields take the example-experiment values
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output path (scans also write a .json side-car)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Scan resolution as NX,NY
    #[arg(long, global = true, value_parser = parse_grid)]
    pub grid: Option<(usize, usize)>,
    #[arg(long, global = true)]
    pub metric: Option<Metric>,
    #[arg(long, global = true)]
    pub probe_screening: Option<OnOff>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Sub {
    /// Closed-form sensitivities and force resolutions
    Sensitivity,
    /// Background state and screening of both bodies for one chameleon model
    Screening {
        /// M in units of the reduced Planck mass
        #[arg(long, default_value_t = 1.0)]
        m_over_mp: f64,
        /// Λ in eV
        #[arg(long, default_value_t = 2.4e-3)]
        lambda_ev: f64,
    },
    /// Δθ/θ over (λ, α)
    ScanYukawa,
    /// Δθ/θ over (M/M_P, Λ)
    ScanChameleon,
    /// Thermal Casimir force against gravity
    Casimir {
        /// K
        #[arg(long, default_value_t = 300.0)]
        temperature: f64,
    },
    /// Quadrature route against the closed forms
    VerifyQfi,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected NX,NY")?;
    let n = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    Ok((n(a)?, n(b)?))
}

fn execution(threads: Option<&str>) -> Result<Execution, CliError> {
    match threads {
        None => Ok(Execution::Parallel),
        Some(t) => match t.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Execution::ParallelWith { threads: n }),
            _ => Err(CliError::validation(
                THREADS_ENV,
                format!("`{t}` is not a positive integer"),
            )),
        },
    }
}

fn resized(a: AxisSpec, n: usize) -> Result<AxisSpec, CliError> {
    AxisSpec::new(a.min, a.max, n).map_err(|e| CliError::validation("--grid", e.to_string()))
}

/// Resolve the configuration for parsed arguments and run the subcommand.
pub fn run_cli(cli: &Cli, threads: Option<&str>) -> Result<Outcome, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => load_config(p)?,
        None => RunConfig::default(),
    };
    if let Some(p) = &cli.out {
        cfg.output.path = Some(p.clone());
    }
    if let Some(m) = cli.metric {
        cfg.scan.metric = m;
    }
    if let Some(s) = cli.probe_screening {
        cfg.scan.probe_screening = s == OnOff::On;
    }
    if let Some((nx, ny)) = cli.grid {
        for g in [&mut cfg.scan.yukawa, &mut cfg.scan.chameleon] {
            g.x = resized(g.x, nx)?;
            g.y = resized(g.y, ny)?;
        }
    }
    let exec = execution(threads)?;
    let cmd = match cli.command {
        Sub::Sensitivity => Command::Sensitivity,
        Sub::Screening { m_over_mp, lambda_ev } => Command::Screening { m_over_mp, lambda_ev },
        Sub::ScanYukawa => Command::ScanYukawa,
        Sub::ScanChameleon => Command::ScanChameleon,
        Sub::Casimir { temperature } => Command::Casimir { temperature },
        Sub::VerifyQfi => Command::VerifyQfi,
    };
    execute(&cmd, &cfg, exec)
}

/// Full entry point; returns the process exit code. Usage errors exit 1.
pub fn main_with<I, T>(args: I, threads: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match run_cli(&cli, threads) {
        Ok(o) => {
            let _ = stdout.write_all(o.stdout.as_bytes());
            o.exit_code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
