//! Tanh–sinh (double exponential) quadrature.
//!
//! Nodes cluster doubly exponentially at the endpoints, so integrable
//! endpoint singularities such as `1/√(x − a)` need no special treatment.
//! The integrand receives the distances to both endpoints, computed without
//! cancellation, so that factors like `(b − x)` stay accurate right next to
//! the singularity.

use std::f64::consts::FRAC_PI_2;
use std::ops::{Add, Mul};

use super::{PeriodsError, QuadratureConfig};

/// Value and error estimate (difference of the last two levels).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
}

/// Largest node parameter; beyond it the distance to the endpoint underflows.
const T_MAX: f64 = 6.0;

/// Integrates `f(da, db)` over `[0, len]`, where `da` is the distance to the
/// left endpoint and `db = len − da` the distance to the right one.
pub fn tanh_sinh<T, F>(
    len: f64,
    cfg: &QuadratureConfig,
    mut f: F,
) -> Result<Estimate<T>, PeriodsError>
where
    T: Copy + Default + Add<Output = T> + Mul<f64, Output = T> + Norm,
    F: FnMut(f64, f64) -> T,
{
    let h = len / 2.0;
    let mut node = |t: f64| -> T {
        let u = FRAC_PI_2 * t.sinh();
        let e = (-2.0 * u.abs()).exp();
        // distance to the near endpoint and to the far one
        let near = h * 2.0 * e / (1.0 + e);
        let far = h * 2.0 / (1.0 + e);
        if near <= 0.0 {
            return T::default();
        }
        let ch = u.cosh();
        let w = h * FRAC_PI_2 * t.cosh() / (ch * ch);
        if w == 0.0 || !w.is_finite() {
            return T::default();
        }
        let v = if t >= 0.0 { f(far, near) } else { f(near, far) };
        v * w
    };
    // level 0: step 1
    let mut step = 1.0;
    let mut sum = node(0.0);
    let mut k = 1.0;
    while k <= T_MAX {
        sum = sum + node(k) + node(-k);
        k += 1.0;
    }
    let mut prev = sum * step;
    let mut last_err = f64::INFINITY;
    for level in 1..=cfg.max_level {
        step /= 2.0;
        let mut t = step;
        let mut extra = T::default();
        while t <= T_MAX {
            extra = extra + node(t) + node(-t);
            t += 2.0 * step;
        }
        sum = sum + extra;
        let cur = sum * step;
        let err = (cur + prev * -1.0).norm();
        if !cur.norm().is_finite() {
            return Err(PeriodsError::NoConvergence(format!(
                "non-finite integrand at level {level}"
            )));
        }
        if level >= 3 && err <= cfg.target_error {
            return Ok(Estimate {
                value: cur,
                error: err,
            });
        }
        last_err = err;
        prev = cur;
    }
    Err(PeriodsError::NoConvergence(format!(
        "error estimate {last_err:.3e} above target {:.1e} after {} levels",
        cfg.target_error, cfg.max_level
    )))
}

/// Magnitude used for error estimates.
pub trait Norm {
    fn norm(self) -> f64;
}

impl Norm for f64 {
    fn norm(self) -> f64 {
        self.abs()
    }
}

impl Norm for num_complex::Complex64 {
    fn norm(self) -> f64 {
        num_complex::Complex64::norm(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn endpoint_singularities() {
        let cfg = QuadratureConfig::default();
        // ∫₀¹ dx / √(x(1 − x)) = π
        let r = tanh_sinh(1.0, &cfg, |a: f64, b: f64| 1.0 / (a * b).sqrt()).unwrap();
        assert!((r.value - PI).abs() < 1e-12);
        // ∫₀² √x dx = (2/3)·2^{3/2}
        let r = tanh_sinh(2.0, &cfg, |a: f64, _b: f64| a.sqrt()).unwrap();
        assert!((r.value - 2.0 / 3.0 * 2f64.powf(1.5)).abs() < 1e-12);
    }

    #[test]
    fn complex_values() {
        let cfg = QuadratureConfig::default();
        let r = tanh_sinh(PI, &cfg, |a: f64, _| {
            num_complex::Complex64::new(0.0, a).exp()
        })
        .unwrap();
        assert!((r.value - num_complex::Complex64::new(0.0, 2.0)).norm() < 1e-12);
    }
}
