use thiserror::Error;

/// Errors raised by the sensitivity pipeline.
///
/// `Domain` covers inputs outside an operation's preconditions; every other
/// variant is a numerical failure.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{quantity} = {value:e} is out of domain: {requirement}")]
    Domain {
        quantity: &'static str,
        value: f64,
        requirement: &'static str,
    },

    #[error("root finder: {0}")]
    Root(#[from] RootError),

    #[error("quadrature: {0}")]
    Quadrature(#[from] QuadError),

    #[error(
        "screening cubic has no root in [0, R]: rhs = {rhs:e} \
         (q = {coupling_term:e}, m_bg R = {mass_radius:e})"
    )]
    NoScreeningRoot {
        rhs: f64,
        coupling_term: f64,
        mass_radius: f64,
    },

    #[error("retarded time did not converge in {iterations} iterations (last step {last_step:e} s)")]
    RetardedTime { iterations: usize, last_step: f64 },

    #[error("thread pool: {0}")]
    ThreadPool(String),
}

impl Error {
    pub(crate) fn domain(quantity: &'static str, value: f64, requirement: &'static str) -> Self {
        Error::Domain {
            quantity,
            value,
            requirement,
        }
    }

    /// True for failures of the numerical machinery rather than bad input.
    pub fn is_numerical(&self) -> bool {
        !matches!(self, Error::Domain { .. })
    }
}

/// Failure modes of the bracketed root finders.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error("f(lo) = {f_lo:e} and f(hi) = {f_hi:e} do not bracket a root")]
    NotBracketed { f_lo: f64, f_hi: f64 },

    #[error("no convergence after {iterations} iterations, bracket [{lo:e}, {hi:e}]")]
    IterationLimit { iterations: usize, lo: f64, hi: f64 },

    #[error("function returned a non-finite value at x = {x:e}")]
    NonFinite { x: f64 },
}

/// Failure modes of adaptive quadrature.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("tolerance not met on [{a:e}, {b:e}] at maximum depth (error estimate {estimate:e})")]
    MaxDepth { a: f64, b: f64, estimate: f64 },

    #[error("integrand returned a non-finite value at t = {t:e}")]
    NonFinite { t: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
