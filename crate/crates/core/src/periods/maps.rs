//! Möbius coordinate changes taking the genus-2 quotients of both families
//! to the normal form `y² = x(x² − 1)(x − a)(x − 1/a)`.

use std::fmt;

use num_complex::Complex64;

use super::{CurveS, CurveTU};

/// A point of the Riemann sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpherePoint {
    Finite(Complex64),
    Infinity,
}

impl SpherePoint {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            SpherePoint::Finite(z) => Some(z),
            SpherePoint::Infinity => None,
        }
    }
}

impl From<Complex64> for SpherePoint {
    fn from(z: Complex64) -> Self {
        SpherePoint::Finite(z)
    }
}

impl fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpherePoint::Finite(z) => write!(f, "{} {:+}i", z.re, z.im),
            SpherePoint::Infinity => write!(f, "∞"),
        }
    }
}

/// Relative size of a denominator treated as zero.
const POLE_TOL: f64 = 1e-14;

/// `z ↦ (p z + q) / (r z + s)` on the sphere.
fn mobius(p: Complex64, q: Complex64, r: Complex64, s: Complex64, z: SpherePoint) -> SpherePoint {
    match z {
        SpherePoint::Infinity => {
            if r == Complex64::new(0.0, 0.0) {
                SpherePoint::Infinity
            } else {
                SpherePoint::Finite(p / r)
            }
        }
        SpherePoint::Finite(z) => {
            let den = r * z + s;
            if den.norm() <= POLE_TOL * ((r * z).norm() + s.norm()) {
                SpherePoint::Infinity
            } else {
                SpherePoint::Finite((p * z + q) / den)
            }
        }
    }
}

/// `Φ(x) = i√(tu)·(x − 1)/(x + tu)`, sending 1 to 0, −tu to ∞ and ±i√(tu)
/// to ∓1.
pub fn phi_map(c: CurveTU, x: SpherePoint) -> SpherePoint {
    let tu = c.t * c.u;
    let k = Complex64::new(0.0, tu.sqrt());
    let one = Complex64::new(1.0, 0.0);
    mobius(k, -k, one, Complex64::new(tu, 0.0), x)
}

/// `Ψ(x) = i(x − s)/(s x + 1)`, sending s to 0, −1/s to ∞ and ±i to ∓1.
pub fn psi_map(c: CurveS, x: SpherePoint) -> SpherePoint {
    let i = Complex64::i();
    mobius(i, -i * c.s, c.s, Complex64::new(1.0, 0.0), x)
}

/// `a = Φ(t) = i√(u/t)·(t − 1)/(u + 1)`, on the positive imaginary axis.
pub fn a_from_tu(c: CurveTU) -> Complex64 {
    Complex64::new(0.0, (c.u / c.t).sqrt() * (c.t - 1.0) / (c.u + 1.0))
}

/// `a = Ψ(s̄) = 2 Im s / (1 + |s|²)`, in `(0, 1)`.
pub fn a_from_s(c: CurveS) -> f64 {
    2.0 * c.s.im / (1.0 + c.s.norm_sqr())
}

/// Linear coefficient `k` of the image `(x² + k x + 1) dx²/y²` of the
/// quadratic differential under Φ. Its zeros are `Φ(0) = −i/√(tu)` and
/// `Φ(∞) = i√(tu)`, so `k = −(Φ(0) + Φ(∞)) = −i(tu − 1)/√(tu)`.
pub fn induced_q_coefficient(c: CurveTU) -> Complex64 {
    let r = (c.t * c.u).sqrt();
    Complex64::new(0.0, -(r - 1.0 / r))
}
