//! Hyperelliptic integrals for the family `y² = x(x−1)(x−t)(x+u)(x+tu)(x²+tu)`.
//!
//! With `f(x) = x / ((x−1)(x−t)(x+u)(x+tu)(x²+tu))` the three real segment
//! integrals
//!
//! ```text
//! J1 = ∫₀¹ √f,   J2 = ∫₁ᵗ √(−f),   J3 = ∫ₜ^∞ √f
//! ```
//!
//! develop the short base, the axis and the long base of the trapezoid `T`
//! of the flat surface, so `J2/J1 = 2h/b` and `J3/J1 = B/b`. The
//! Arnoux–Yoccoz surface has ratios `(1/α, 1 + α)`.

mod maps;
mod quad;
mod silhol;

pub use maps::{a_from_s, a_from_tu, induced_q_coefficient, phi_map, psi_map, SpherePoint};
pub use quad::{tanh_sinh, Estimate, Norm};
pub use silhol::{silhol_ratio, silhol_ratio_with, CurveA, SilholOptions, SilholPath};

use num_complex::Complex64;

#[derive(Debug, thiserror::Error)]
pub enum PeriodsError {
    #[error("quadrature did not converge: {0}")]
    NoConvergence(String),
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error("solver diverged: {0}")]
    Divergence(String),
    #[error("no sign change of the residual in (1, 10⁶)")]
    NoBracket,
    #[error("path passes within 1e-12 of the branch point {0}")]
    BranchAmbiguity(Complex64),
    #[error("point is the pole of the map")]
    Pole,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    /// Target absolute error of each integral.
    pub target_error: f64,
    /// Number of step halvings before giving up.
    pub max_level: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            target_error: 1e-12,
            max_level: 12,
        }
    }
}

/// A curve of the first family, `t > 1`, `u > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveTU {
    pub t: f64,
    pub u: f64,
}

impl CurveTU {
    pub fn new(t: f64, u: f64) -> Result<Self, PeriodsError> {
        if !(t > 1.0 && u > 0.0 && t.is_finite() && u.is_finite()) {
            return Err(PeriodsError::Domain(format!(
                "need t > 1 and u > 0, got t = {t}, u = {u}"
            )));
        }
        Ok(CurveTU { t, u })
    }

    /// The Arnoux–Yoccoz parameters, as published to 11 decimals.
    pub fn ay_reference() -> Self {
        CurveTU {
            t: 1.91709843377,
            u: 2.07067976690,
        }
    }
}

/// A curve of the second family: `Im s > 0`, `s ≠ i`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveS {
    pub s: Complex64,
}

impl CurveS {
    pub fn new(s: Complex64) -> Result<Self, PeriodsError> {
        if !(s.im > 0.0) || (s - Complex64::i()).norm() == 0.0 {
            return Err(PeriodsError::Domain(format!(
                "need Im s > 0 and s ≠ i, got {s}"
            )));
        }
        Ok(CurveS { s })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SegmentIntegrals {
    pub j: [f64; 3],
    pub error: [f64; 3],
}

pub fn segment_integrals(
    c: CurveTU,
    q: &QuadratureConfig,
) -> Result<SegmentIntegrals, PeriodsError> {
    let CurveTU { t, u } = CurveTU::new(c.t, c.u)?;
    let tu = t * u;
    let common = |x: f64| (x + u) * (x + tu) * (x * x + tu);
    // x = da, 1 − x = db
    let j1 = tanh_sinh(1.0, q, |x, b| (x / (b * (t - x) * common(x))).sqrt())?;
    // x = 1 + da, t − x = db
    let j2 = tanh_sinh(t - 1.0, q, |a, b| {
        let x = 1.0 + a;
        (x / (a * b * common(x))).sqrt()
    })?;
    // x = t/w² maps w ∈ (0, 1] onto [t, ∞); the integrand becomes
    // 2 t^{3/2} w² / √D with D free of negative powers of w
    let j3 = tanh_sinh(1.0, q, |w, b| {
        let w2 = w * w;
        let d = (t - w2)
            * t
            * b
            * (1.0 + w)
            * (t + u * w2)
            * t
            * (1.0 + u * w2)
            * (t * t + tu * w2 * w2);
        2.0 * t.powf(1.5) * w2 / d.sqrt()
    })?;
    Ok(SegmentIntegrals {
        j: [j1.value, j2.value, j3.value],
        error: [j1.error, j2.error, j3.error],
    })
}

/// `(J2/J1, J3/J1)`: twice the height and the long base of the realizing
/// trapezoid, both over its short base.
pub fn shape_ratios(c: CurveTU, q: &QuadratureConfig) -> Result<(f64, f64), PeriodsError> {
    let s = segment_integrals(c, q)?;
    Ok((s.j[1] / s.j[0], s.j[2] / s.j[0]))
}

/// Ratios of the Arnoux–Yoccoz trapezoid, `(1/α, 1 + α)`.
pub fn ay_ratios() -> (f64, f64) {
    let a = crate::numeric::ALPHA_F64;
    (1.0 / a, 1.0 + a)
}

/// Solver settings shared by [`solve_tu`] and [`solve_t_rectangle`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub initial: (f64, f64),
    pub tolerance: f64,
    pub max_iterations: usize,
    pub quadrature: QuadratureConfig,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            initial: (2.0, 2.0),
            tolerance: 1e-10,
            max_iterations: 50,
            quadrature: QuadratureConfig {
                target_error: 1e-14,
                max_level: 14,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Solution {
    pub curve: CurveTU,
    /// Max-norm of the ratio residual at the returned point.
    pub residual: f64,
    pub iterations: usize,
}

/// Newton's method on the shape ratios, in the variables `ln(t − 1)` and
/// `ln u` so that every iterate stays in the domain. The Jacobian is taken
/// by forward differences and steps are halved while they do not decrease
/// the residual.
pub fn solve_tu(target: (f64, f64), cfg: &SolverConfig) -> Result<Solution, PeriodsError> {
    // u < 1 gives r2 < 1: the base at ∞ is then the shorter one
    if !(target.0 > 0.0 && target.1 > 0.0 && target.0.is_finite() && target.1.is_finite()) {
        return Err(PeriodsError::Domain(format!(
            "ratios {target:?} must be positive"
        )));
    }
    let q = &cfg.quadrature;
    let to_curve = |p: [f64; 2]| CurveTU::new(1.0 + p[0].exp(), p[1].exp());
    let residual = |p: [f64; 2]| -> Result<[f64; 2], PeriodsError> {
        let (r1, r2) = shape_ratios(to_curve(p)?, q)?;
        Ok([r1 - target.0, r2 - target.1])
    };
    let size = |r: [f64; 2]| r[0].abs().max(r[1].abs());
    let (t0, u0) = cfg.initial;
    let c0 = CurveTU::new(t0, u0)?;
    let mut p = [(c0.t - 1.0).ln(), c0.u.ln()];
    let mut r = residual(p)?;
    for it in 0..cfg.max_iterations {
        if size(r) < cfg.tolerance {
            return Ok(Solution {
                curve: to_curve(p)?,
                residual: size(r),
                iterations: it,
            });
        }
        let mut jac = [[0.0; 2]; 2];
        for k in 0..2 {
            let h = 1e-7 * p[k].abs().max(1.0);
            let mut pk = p;
            pk[k] += h;
            let rk = residual(pk)?;
            for i in 0..2 {
                jac[i][k] = (rk[i] - r[i]) / h;
            }
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(PeriodsError::Divergence("singular Jacobian".into()));
        }
        let dx = [
            -(jac[1][1] * r[0] - jac[0][1] * r[1]) / det,
            -(-jac[1][0] * r[0] + jac[0][0] * r[1]) / det,
        ];
        let mut lambda = 1.0;
        loop {
            let cand = [p[0] + lambda * dx[0], p[1] + lambda * dx[1]];
            if let Ok(rc) = residual(cand) {
                if size(rc) < size(r) {
                    p = cand;
                    r = rc;
                    break;
                }
            }
            lambda /= 2.0;
            if lambda < 1e-6 {
                return Err(PeriodsError::Divergence(format!(
                    "no descent from residual {:.3e}",
                    size(r)
                )));
            }
        }
    }
    if size(r) < cfg.tolerance {
        return Ok(Solution {
            curve: to_curve(p)?,
            residual: size(r),
            iterations: cfg.max_iterations,
        });
    }
    Err(PeriodsError::Divergence(format!(
        "residual {:.3e} after {} iterations",
        size(r),
        cfg.max_iterations
    )))
}

/// Solves `J1 = μ·J2` on the line `u = 1`, where the trapezoid is a
/// rectangle of width/height `2μ`. A geometric scan brackets the root,
/// then safeguarded Newton steps (falling back to bisection) refine it.
pub fn solve_t_rectangle(mu: f64, cfg: &SolverConfig) -> Result<Solution, PeriodsError> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(PeriodsError::Domain(format!("need μ > 0, got {mu}")));
    }
    let q = &cfg.quadrature;
    let g = |t: f64| -> Result<f64, PeriodsError> {
        let s = segment_integrals(CurveTU::new(t, 1.0)?, q)?;
        Ok(s.j[0] - mu * s.j[1])
    };
    // J1/J2 falls from ∞ at t → 1 to 0 at t → ∞, so g is decreasing;
    // scan outwards from t = 2 until the sign changes
    let (mut lo, mut hi): (f64, f64) = (2.0, 2.0);
    if g(2.0)? > 0.0 {
        loop {
            if hi >= 1e6 {
                return Err(PeriodsError::NoBracket);
            }
            lo = hi;
            hi = (2.0 * hi).min(1e6);
            if g(hi)? <= 0.0 {
                break;
            }
        }
    } else {
        loop {
            if lo - 1.0 <= 1e-9 {
                return Err(PeriodsError::NoBracket);
            }
            hi = lo;
            lo = (1.0 + (lo - 1.0) / 4.0).max(1.0 + 1e-9);
            if g(lo)? > 0.0 {
                break;
            }
        }
    }
    let mut glo = g(lo)?;
    let mut x = 0.5 * (lo + hi);
    for it in 0..200 {
        let gx = g(x)?;
        if gx.abs() < cfg.tolerance {
            return Ok(Solution {
                curve: CurveTU::new(x, 1.0)?,
                residual: gx.abs(),
                iterations: it,
            });
        }
        if gx.signum() == glo.signum() {
            lo = x;
            glo = gx;
        } else {
            hi = x;
        }
        let h = 1e-7 * x.abs().max(1.0);
        let d = (g(x + h)? - gx) / h;
        let newton = x - gx / d;
        x = if d != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo < 1e-15 * hi {
            break;
        }
    }
    let gx = g(x)?;
    if gx.abs() < cfg.tolerance {
        return Ok(Solution {
            curve: CurveTU::new(x, 1.0)?,
            residual: gx.abs(),
            iterations: 200,
        });
    }
    Err(PeriodsError::Divergence(format!(
        "residual {gx:.3e} in [{lo}, {hi}]"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ay_parameters_reproduce_the_ratios() {
        let (r1, r2) = shape_ratios(CurveTU::ay_reference(), &QuadratureConfig::default()).unwrap();
        let (a1, a2) = ay_ratios();
        assert!((r1 - a1).abs() < 1e-8, "{r1} vs {a1}");
        assert!((r2 - a2).abs() < 1e-8, "{r2} vs {a2}");
    }

    #[test]
    fn rectangle_line_has_equal_bases() {
        let q = QuadratureConfig::default();
        for t in [1.1, 1.5, 2.0, 3.7, 4.9] {
            let (_, r2) = shape_ratios(CurveTU::new(t, 1.0).unwrap(), &q).unwrap();
            assert!((r2 - 1.0).abs() < 1e-9, "t = {t}: {r2}");
        }
    }

    #[test]
    fn solves_for_the_ay_parameters() {
        let s = solve_tu(ay_ratios(), &SolverConfig::default()).unwrap();
        assert!((s.curve.t - 1.91709843377).abs() < 1e-8, "{:?}", s);
        assert!((s.curve.u - 2.07067976690).abs() < 1e-8, "{:?}", s);
        assert!(s.residual < 1e-10);
    }

    #[test]
    fn round_trip() {
        let cfg = SolverConfig::default();
        let c = CurveTU::new(2.5, 1.5).unwrap();
        let r = shape_ratios(c, &cfg.quadrature).unwrap();
        let s = solve_tu(r, &cfg).unwrap();
        assert!((s.curve.t - 2.5).abs() < 1e-7 && (s.curve.u - 1.5).abs() < 1e-7);
    }

    #[test]
    fn rectangle_solver() {
        let cfg = SolverConfig::default();
        let (r1, _) = shape_ratios(CurveTU::new(3.0, 1.0).unwrap(), &cfg.quadrature).unwrap();
        let s = solve_t_rectangle(1.0 / r1, &cfg).unwrap();
        assert!((s.curve.t - 3.0).abs() < 1e-8, "{s:?}");
        let one = solve_t_rectangle(1.0, &cfg).unwrap();
        assert!(one.residual < 1e-10);
        // a wider rectangle needs a smaller t
        let wide = solve_t_rectangle(2.0, &cfg).unwrap();
        assert!(wide.curve.t < one.curve.t);
    }

    #[test]
    fn rectangle_ratio_is_one_over_mu() {
        let cfg = SolverConfig::default();
        let s = solve_t_rectangle(0.75, &cfg).unwrap();
        let (r1, r2) = shape_ratios(s.curve, &cfg.quadrature).unwrap();
        assert!((r1 - 1.0 / 0.75).abs() < 1e-8);
        assert!((r2 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_curves() {
        assert!(CurveTU::new(1.0, 1.0).is_err());
        assert!(CurveTU::new(2.0, 0.0).is_err());
        assert!(solve_t_rectangle(-1.0, &SolverConfig::default()).is_err());
    }
}
