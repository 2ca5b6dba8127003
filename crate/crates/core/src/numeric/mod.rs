//! Scalar numerics shared by the physics modules.

pub mod quad;
pub mod roots;

pub use quad::{adaptive_simpson, integrate, Cumulative, QuadSettings};
pub use roots::{bisect, newton_bisect, Tolerance};

/// `n` points spaced evenly in log10 between `lo` and `hi`, endpoints exact.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.log10(), hi.log10());
            let step = (b - a) / (n - 1) as f64;
            (0..n)
                .map(|k| {
                    if k == 0 {
                        lo
                    } else if k == n - 1 {
                        hi
                    } else {
                        10f64.powf(a + step * k as f64)
                    }
                })
                .collect()
        }
    }
}
