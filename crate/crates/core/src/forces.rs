//! Forces on the probe along the source-probe axis. Attractive is negative.

use serde::Serialize;

use crate::chameleon::SphereBody;
use crate::error::{Error, Result};
use crate::units::{C, G, K_B};

/// Geometry and drive of the source oscillation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExperimentSetup {
    /// Equilibrium centre-to-centre separation, m.
    pub x0: f64,
    /// Oscillation amplitude as a fraction of x0.
    pub epsilon: f64,
    /// Source drive frequency, rad/s.
    pub omega0: f64,
    /// Drive phase, rad.
    pub phi0: f64,
    pub source: SphereBody,
    pub probe: SphereBody,
    /// Background density, kg/m³.
    pub rho_bg: f64,
}

impl ExperimentSetup {
    pub fn new(
        x0: f64,
        epsilon: f64,
        omega0: f64,
        phi0: f64,
        source: SphereBody,
        probe: SphereBody,
        rho_bg: f64,
    ) -> Result<Self> {
        let setup = ExperimentSetup {
            x0,
            epsilon,
            omega0,
            phi0,
            source,
            probe,
            rho_bg,
        };
        setup.validate()?;
        Ok(setup)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x0 > 0.0 && self.x0.is_finite()) {
            return Err(Error::domain("x0", self.x0, "must be finite and > 0"));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::domain("epsilon", self.epsilon, "must satisfy 0 < epsilon < 1"));
        }
        if !(self.omega0 >= 0.0 && self.omega0.is_finite()) {
            return Err(Error::domain("omega0", self.omega0, "must be finite and >= 0"));
        }
        if !self.phi0.is_finite() {
            return Err(Error::domain("phi0", self.phi0, "must be finite"));
        }
        if !(self.rho_bg > 0.0 && self.rho_bg.is_finite()) {
            return Err(Error::domain("rho_bg", self.rho_bg, "must be finite and > 0"));
        }
        let closest = self.x0 * (1.0 - self.epsilon);
        if closest <= self.contact_distance() {
            return Err(Error::domain(
                "x0",
                self.x0,
                "bodies touch: x0 (1 - epsilon) must exceed R_S + R_P",
            ));
        }
        Ok(())
    }

    fn contact_distance(&self) -> f64 {
        self.source.radius() + self.probe.radius()
    }

    /// Source distance x_S(t) = x0 (1 − ε cos(ω0 t + φ0)).
    pub fn separation(&self, t: f64) -> f64 {
        self.x0 * (1.0 - self.epsilon * (self.omega0 * t + self.phi0).cos())
    }

    /// Newtonian acceleration G M_S / x0².
    pub fn g_newton(&self) -> f64 {
        G * self.source.mass() / (self.x0 * self.x0)
    }

    fn check_separation(&self, x_s: f64) -> Result<()> {
        if x_s > self.contact_distance() && x_s.is_finite() {
            Ok(())
        } else {
            Err(Error::domain("x_S", x_s, "must exceed R_S + R_P"))
        }
    }

    /// Drive coefficients κ, σ for the given Yukawa parameters at this x0.
    pub fn linearize(&self, alpha: f64, lambda: f64, probe_screened: bool) -> Result<LinearizedCoefficients> {
        linearized_coefficients(alpha, lambda, self.x0, self.probe.radius(), probe_screened)
            .map(|c| c.with_g_n(self.g_newton()))
    }
}

/// A(u), B(u) and f(u, v) for the finite-size probe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FormFactors {
    pub a: f64,
    pub b: f64,
    pub f: f64,
}

/// (1+u)e^{−u} sinh(u)/u and (1+u)e^{−u}(cosh u − sinh(u)/u).
fn a_b(u: f64) -> (f64, f64) {
    if u < 1e-4 {
        let u2 = u * u;
        let pre = (1.0 + u) * (-u).exp();
        return (
            pre * (1.0 + u2 / 6.0 + u2 * u2 / 120.0),
            pre * (u2 / 3.0 + u2 * u2 / 30.0),
        );
    }
    // e^{−u} sinh u = (1 − e^{−2u})/2
    let a = (1.0 + u) * (-(-2.0 * u).exp_m1()) / (2.0 * u);
    let b = if u < 1.0 {
        // Σ 2k u^{2k}/(2k+1)!, exact cancellation of the leading terms
        let u2 = u * u;
        let mut term = u2 / 3.0;
        let mut sum = term;
        let mut k = 1.0;
        while term > 1e-18 * sum {
            k += 1.0;
            term *= u2 * k / ((k - 1.0) * (2.0 * k) * (2.0 * k + 1.0));
            sum += term;
        }
        (1.0 + u) * (-u).exp() * sum
    } else {
        let e2 = (-2.0 * u).exp();
        (1.0 + u) * (0.5 * (1.0 + e2) - (-(-2.0 * u).exp_m1()) / (2.0 * u))
    };
    (a, b)
}

pub fn form_factors(u: f64, v: f64) -> Result<FormFactors> {
    if !(u >= 0.0 && u.is_finite()) {
        return Err(Error::domain("u", u, "must be finite and >= 0"));
    }
    if !(v > 0.0) {
        return Err(Error::domain("v", v, "must be > 0"));
    }
    let (a, b) = a_b(u);
    // −(v/(1+v) − 2)/v = (2 + v)/(v (1 + v))
    let f = a + b * (2.0 + v) / (v * (1.0 + v));
    Ok(FormFactors { a, b, f })
}

/// −G M_S m / x_S².
pub fn newtonian_force(setup: &ExperimentSetup, x_s: f64) -> Result<f64> {
    setup.check_separation(x_s)?;
    Ok(-G * setup.source.mass() * setup.probe.mass() / (x_s * x_s))
}

/// Newtonian plus Yukawa force at separation `x_s`. With
/// `include_probe_screening` the Yukawa term carries the form factor f.
pub fn total_force(
    setup: &ExperimentSetup,
    alpha: f64,
    lambda: f64,
    include_probe_screening: bool,
    x_s: f64,
) -> Result<f64> {
    let newton = newtonian_force(setup, x_s)?;
    if alpha == 0.0 {
        return Ok(newton);
    }
    if !(lambda > 0.0) {
        return Err(Error::domain("lambda", lambda, "must be > 0"));
    }
    let v = x_s / lambda;
    let mut yukawa = alpha * (1.0 + v) * (-v).exp();
    if include_probe_screening {
        yukawa *= form_factors(setup.probe.radius() / lambda, v)?.f;
    }
    Ok(newton * (1.0 + yukawa))
}

/// Static (κ) and oscillating (σ) fifth-force fractions at x0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearizedCoefficients {
    pub kappa: f64,
    pub sigma: f64,
    /// Newtonian acceleration at x0, m/s²; NaN when no source was given.
    pub g_n: f64,
}

impl LinearizedCoefficients {
    fn with_g_n(self, g_n: f64) -> Self {
        LinearizedCoefficients { g_n, ..self }
    }
}

/// κ and σ from the linearised force. `g_n` is left as NaN; use
/// [`ExperimentSetup::linearize`] to have it filled in.
pub fn linearized_coefficients(
    alpha: f64,
    lambda: f64,
    x0: f64,
    r_p: f64,
    probe_screened: bool,
) -> Result<LinearizedCoefficients> {
    if !(x0 > 0.0) {
        return Err(Error::domain("x0", x0, "must be > 0"));
    }
    if !(lambda > 0.0) {
        return Err(Error::domain("lambda", lambda, "must be > 0"));
    }
    if alpha == 0.0 {
        return Ok(LinearizedCoefficients {
            kappa: 0.0,
            sigma: 0.0,
            g_n: f64::NAN,
        });
    }
    let v = x0 / lambda;
    let damp = alpha * (-v).exp();
    let (kappa, sigma) = if probe_screened {
        let ff = form_factors(r_p / lambda, v)?;
        (
            damp * ((1.0 + v) * ff.a + (1.0 + 2.0 / v) * ff.b),
            damp * ((2.0 + 2.0 * v + v * v) * ff.a + (4.0 + 6.0 / v + v) * ff.b),
        )
    } else {
        (damp * (1.0 + v), damp * (2.0 + 2.0 * v + v * v))
    };
    Ok(LinearizedCoefficients {
        kappa,
        sigma,
        g_n: f64::NAN,
    })
}

/// Classical-thermal (Drude) Casimir force magnitude between the spheres, N.
pub fn casimir_force(temperature: f64, r_s: f64, r_p: f64, x0: f64) -> Result<f64> {
    if !(temperature >= 0.0 && temperature.is_finite()) {
        return Err(Error::domain("temperature", temperature, "must be finite and >= 0"));
    }
    if !(r_s >= 0.0 && r_p >= 0.0) {
        return Err(Error::domain("radius", r_s.min(r_p), "must be >= 0"));
    }
    let gap = x0 - r_s - r_p;
    if !(gap > 0.0) {
        return Err(Error::domain("x0", x0, "must exceed R_S + R_P"));
    }
    Ok(18.0 * K_B * temperature * (r_s * r_p).powi(3) / gap.powi(7))
}

pub type Vec3 = [f64; 3];

fn distance(a: Vec3, b: Vec3) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

pub const RETARDED_TIME_TOL: f64 = 1e-15;
pub const RETARDED_TIME_MAX_ITER: usize = 100;

/// Solve t_ret = t − |X − q(t_ret)|/c by fixed-point iteration.
pub fn retarded_time<Q>(trajectory: Q, observer: Vec3, t: f64) -> Result<f64>
where
    Q: Fn(f64) -> Vec3,
{
    if !t.is_finite() {
        return Err(Error::domain("t", t, "must be finite"));
    }
    // the absolute target cannot be finer than the spacing of doubles at t
    let tol = RETARDED_TIME_TOL.max(4.0 * f64::EPSILON * t.abs());
    let mut t_ret = t - distance(observer, trajectory(t)) / C;
    let mut step = f64::INFINITY;
    for _ in 0..RETARDED_TIME_MAX_ITER {
        let next = t - distance(observer, trajectory(t_ret)) / C;
        if !next.is_finite() {
            return Err(Error::RetardedTime {
                iterations: 0,
                last_step: f64::NAN,
            });
        }
        step = next - t_ret;
        t_ret = next;
        if step.abs() <= tol {
            return Ok(t_ret);
        }
    }
    Err(Error::RetardedTime {
        iterations: RETARDED_TIME_MAX_ITER,
        last_step: step.abs(),
    })
}
