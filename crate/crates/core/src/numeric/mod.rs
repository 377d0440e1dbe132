//! Exact and floating-point scalars shared by every geometric module.
//!
//! Three number types form a small tower:
//!
//! * [`Rational`] — arbitrary-precision fractions,
//! * [`CubicNumber`] — elements of ℚ(α) where α ≈ 0.543689 is the real root
//!   of `x³ + x² + x − 1`,
//! * `f64`.
//!
//! [`Scalar`] is the tagged union the surface, Delaunay and symmetry code is
//! written against. Mixed arithmetic promotes up the tower and never drops an
//! exact value to `f64` unless a float operand is involved.

mod cubic;
mod linear;
mod predicates;
mod rational;
mod scalar;

pub use cubic::{CubicNumber, ALPHA_F64};
pub use linear::{Matrix2, Vec2};
pub use predicates::{
    incircle, incircle_determinant, incircle_normalized, orient, ORIENT_FLOAT_TOL,
};
pub use rational::{format_rational, parse_rational, rationalize, Rational};
pub use scalar::{Scalar, ScalarMode, Sign};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
}
