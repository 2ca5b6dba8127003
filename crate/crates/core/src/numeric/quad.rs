//! Adaptive Simpson quadrature on a fixed panel grid.

use crate::error::QuadError;

/// Accuracy controls for [`integrate`] and [`Cumulative`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSettings {
    /// Target error relative to ∫|f| over the whole range.
    pub rel_tol: f64,
    /// Number of equal panels the range is split into before adapting.
    pub panels: usize,
    pub max_depth: u32,
}

impl Default for QuadSettings {
    fn default() -> Self {
        QuadSettings {
            rel_tol: 1e-10,
            panels: 200,
            max_depth: 40,
        }
    }
}

fn eval<F: Fn(f64) -> f64>(f: &F, t: f64) -> Result<f64, QuadError> {
    let y = f(t);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(QuadError::NonFinite { t })
    }
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64, QuadError> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = eval(f, lm)?;
    let frm = eval(f, rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol || lm <= a || rm >= b {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(QuadError::MaxDepth {
            a,
            b,
            estimate: delta.abs() / 15.0,
        });
    }
    let l = simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Ok(l + r)
}

/// Adaptive Simpson with Richardson correction on a single interval.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_depth: u32,
) -> Result<f64, QuadError> {
    if a == b {
        return Ok(0.0);
    }
    let fa = eval(f, a)?;
    let fb = eval(f, b)?;
    let m = 0.5 * (a + b);
    let fm = eval(f, m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, abs_tol, max_depth)
}

fn panel_edges(a: f64, b: f64, panels: usize) -> Vec<f64> {
    let n = panels.max(1);
    let h = (b - a) / n as f64;
    (0..=n).map(|k| if k == n { b } else { a + h * k as f64 }).collect()
}

/// Rough ∫|f| from a three-point rule per panel, used to scale tolerances.
fn magnitude_scale<F: Fn(f64) -> f64>(f: &F, edges: &[f64]) -> Result<f64, QuadError> {
    let mut s = 0.0;
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        let fa = eval(f, a)?.abs();
        let fm = eval(f, 0.5 * (a + b))?.abs();
        let fb = eval(f, b)?.abs();
        s += (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    }
    Ok(s)
}

/// ∫ₐᵇ f over `settings.panels` panels, each refined adaptively.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, settings: QuadSettings) -> Result<f64, QuadError> {
    if a == b {
        return Ok(0.0);
    }
    let edges = panel_edges(a, b, settings.panels);
    let scale = magnitude_scale(f, &edges)?;
    let span = (b - a).abs();
    let mut total = 0.0;
    for w in edges.windows(2) {
        let share = (w[1] - w[0]).abs() / span;
        let tol = settings.rel_tol * scale * share;
        total += adaptive_simpson(f, w[0], w[1], tol, settings.max_depth)?;
    }
    Ok(total)
}

/// G(t) = ∫ₐᵗ g for t in [a, b], with the values at panel edges cached.
///
/// Each query integrates only from the nearest edge below `t`.
pub struct Cumulative<G> {
    g: G,
    edges: Vec<f64>,
    values: Vec<f64>,
    tols: Vec<f64>,
    max_depth: u32,
}

impl<G: Fn(f64) -> f64> Cumulative<G> {
    pub fn new(g: G, a: f64, b: f64, settings: QuadSettings) -> Result<Self, QuadError> {
        let edges = panel_edges(a, b, settings.panels);
        let scale = magnitude_scale(&g, &edges)?;
        let span = (b - a).abs();
        let mut values = Vec::with_capacity(edges.len());
        let mut tols = Vec::with_capacity(edges.len() - 1);
        let mut acc = 0.0;
        values.push(0.0);
        for w in edges.windows(2) {
            let tol = if span > 0.0 {
                settings.rel_tol * scale * (w[1] - w[0]).abs() / span
            } else {
                0.0
            };
            acc += adaptive_simpson(&g, w[0], w[1], tol, settings.max_depth)?;
            values.push(acc);
            tols.push(tol);
        }
        Ok(Cumulative {
            g,
            edges,
            values,
            tols,
            max_depth: settings.max_depth,
        })
    }

    /// Value over the full range.
    pub fn total(&self) -> f64 {
        *self.values.last().unwrap_or(&0.0)
    }

    pub fn at(&self, t: f64) -> Result<f64, QuadError> {
        let n = self.edges.len() - 1;
        if n == 0 || self.edges[0] == self.edges[n] {
            return Ok(0.0);
        }
        let a = self.edges[0];
        let h = (self.edges[n] - a) / n as f64;
        let mut k = (((t - a) / h).floor().max(0.0) as usize).min(n - 1);
        // guard against rounding in the index estimate
        while k > 0 && t < self.edges[k] {
            k -= 1;
        }
        while k + 1 < n && t >= self.edges[k + 1] {
            k += 1;
        }
        if t == self.edges[k + 1] {
            return Ok(self.values[k + 1]);
        }
        let part = adaptive_simpson(&self.g, self.edges[k], t, self.tols[k], self.max_depth)?;
        Ok(self.values[k] + part)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let f = |x: f64| 3.0 * x * x - 2.0 * x + 1.0;
        let r = adaptive_simpson(&f, 0.0, 2.0, 1e-14, 20).unwrap();
        assert!((r - 6.0).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_integrand() {
        let w = 2.0 * PI * 3.0;
        let f = |t: f64| (w * t).sin() * (w * t).sin();
        let r = integrate(&f, 0.0, 5.0, QuadSettings::default()).unwrap();
        assert!((r - 2.5).abs() < 1e-9);
    }

    #[test]
    fn reversed_and_empty_ranges() {
        let f = |t: f64| t;
        assert_eq!(integrate(&f, 1.0, 1.0, QuadSettings::default()).unwrap(), 0.0);
        let r = integrate(&f, 1.0, 0.0, QuadSettings::default()).unwrap();
        assert!((r + 0.5).abs() < 1e-14);
    }

    #[test]
    fn cumulative_matches_antiderivative() {
        let c = Cumulative::new(|t: f64| t.cos(), 0.0, 10.0, QuadSettings::default()).unwrap();
        for &t in &[0.0, 0.013, 1.0, 3.3, 7.77, 10.0] {
            assert!((c.at(t).unwrap() - t.sin()).abs() < 1e-11, "t = {t}");
        }
        assert!((c.total() - 10f64.sin()).abs() < 1e-11);
    }

    #[test]
    fn nan_integrand_is_an_error() {
        let f = |t: f64| if t > 0.5 { f64::NAN } else { 1.0 };
        assert!(matches!(
            integrate(&f, 0.0, 1.0, QuadSettings::default()),
            Err(QuadError::NonFinite { .. })
        ));
    }
}
