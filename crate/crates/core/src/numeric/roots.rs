//! Bracketed scalar root finding.

use crate::error::RootError;

/// Stopping rule shared by the bracketed solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Relative step tolerance.
    pub rel: f64,
    /// Absolute step tolerance (guards roots at or near zero).
    pub abs: f64,
    pub max_iter: usize,
}

impl Tolerance {
    pub const fn new(rel: f64, abs: f64, max_iter: usize) -> Self {
        Tolerance { rel, abs, max_iter }
    }

    fn converged(&self, x: f64, step: f64) -> bool {
        step.abs() <= self.abs + self.rel * x.abs()
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::new(1e-14, 1e-300, 200)
    }
}

fn checked(x: f64, fx: f64) -> Result<f64, RootError> {
    if fx.is_finite() {
        Ok(fx)
    } else {
        Err(RootError::NonFinite { x })
    }
}

/// Safeguarded Newton iteration on a sign-changing bracket `[lo, hi]`.
///
/// `f` returns the value and the derivative. A Newton step is taken when it
/// lands strictly inside the current bracket and shrinks the residual fast
/// enough; otherwise the bracket is bisected. The bracket always contains the
/// root, so the iteration cannot escape.
pub fn newton_bisect<F>(f: F, lo: f64, hi: f64, tol: Tolerance) -> Result<f64, RootError>
where
    F: Fn(f64) -> (f64, f64),
{
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let f_lo = checked(lo, f(lo).0)?;
    let f_hi = checked(hi, f(hi).0)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(RootError::NotBracketed { f_lo, f_hi });
    }
    // orient so that f(neg) < 0 < f(pos)
    let lo_is_neg = f_lo < 0.0;

    let mut x = 0.5 * (lo + hi);
    let mut last_step = hi - lo;
    for _ in 0..tol.max_iter {
        let (fx, dfx) = f(x);
        let fx = checked(x, fx)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if (fx < 0.0) == lo_is_neg {
            lo = x;
        } else {
            hi = x;
        }

        let newton = x - fx / dfx;
        let bisect = 0.5 * (lo + hi);
        let take_newton =
            dfx.is_finite() && dfx != 0.0 && newton > lo && newton < hi && (newton - x).abs() < 0.5 * last_step.abs();
        let next = if take_newton { newton } else { bisect };
        let step = next - x;
        last_step = step;
        x = next;
        if tol.converged(x, step) || tol.converged(x, hi - lo) {
            return Ok(x);
        }
    }
    Err(RootError::IterationLimit {
        iterations: tol.max_iter,
        lo,
        hi,
    })
}

/// Plain bisection, for callers without a derivative.
pub fn bisect<F>(f: F, lo: f64, hi: f64, tol: Tolerance) -> Result<f64, RootError>
where
    F: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let f_lo = checked(lo, f(lo))?;
    let f_hi = checked(hi, f(hi))?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(RootError::NotBracketed { f_lo, f_hi });
    }
    let lo_is_neg = f_lo < 0.0;
    for _ in 0..tol.max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || tol.converged(mid, hi - lo) {
            return Ok(mid);
        }
        let fm = checked(mid, f(mid))?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == lo_is_neg {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(RootError::IterationLimit {
        iterations: tol.max_iter,
        lo,
        hi,
    })
}
