use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::cubic::CubicNumber;
use super::rational::{format_rational, parse_rational, Rational};
use super::NumericError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of_rational(r: &Rational) -> Sign {
        if r.is_zero() {
            Sign::Zero
        } else if r.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn of_f64(x: f64) -> Sign {
        if x > 0.0 {
            Sign::Positive
        } else if x < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn to_ordering(self) -> Ordering {
        match self {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// Position of a scalar in the numeric tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ScalarMode {
    Rational,
    Cubic,
    Float,
}

impl ScalarMode {
    pub fn name(self) -> &'static str {
        match self {
            ScalarMode::Rational => "rational",
            ScalarMode::Cubic => "cubic",
            ScalarMode::Float => "float",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "rational" => Some(ScalarMode::Rational),
            "cubic" => Some(ScalarMode::Cubic),
            "float" => Some(ScalarMode::Float),
            _ => None,
        }
    }
}

/// A number from ℚ, ℚ(α) or `f64`.
#[derive(Clone, Debug)]
pub enum Scalar {
    Rational(Rational),
    Cubic(CubicNumber),
    Float(f64),
}

impl Scalar {
    pub fn int(n: i64) -> Self {
        Scalar::Rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Scalar::Rational(Rational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn zero() -> Self {
        Scalar::int(0)
    }

    pub fn one() -> Self {
        Scalar::int(1)
    }

    /// α as an exact scalar.
    pub fn alpha() -> Self {
        Scalar::Cubic(CubicNumber::alpha())
    }

    /// `c0 + c1·α + c2·α²` with integer coefficients.
    pub fn cubic(c0: i64, c1: i64, c2: i64) -> Self {
        Scalar::Cubic(CubicNumber::from_ints(c0, c1, c2))
    }

    pub fn mode(&self) -> ScalarMode {
        match self {
            Scalar::Rational(_) => ScalarMode::Rational,
            Scalar::Cubic(_) => ScalarMode::Cubic,
            Scalar::Float(_) => ScalarMode::Float,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Scalar::Float(_))
    }

    pub fn sign(&self) -> Sign {
        match self {
            Scalar::Rational(r) => Sign::of_rational(r),
            Scalar::Cubic(c) => c.sign(),
            Scalar::Float(x) => Sign::of_f64(*x),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Cubic(c) => c.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Sign::Positive
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Sign::Negative
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Approximate value. Cubic numbers use the fast (uncertified) evaluation.
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Cubic(c) => c.to_f64(),
            Scalar::Float(x) => *x,
        }
    }

    /// Converts to the given mode. Going down the tower is only possible when
    /// the value actually lives there.
    pub fn to_mode(&self, mode: ScalarMode) -> Option<Scalar> {
        match (self, mode) {
            (Scalar::Rational(r), ScalarMode::Rational) => Some(Scalar::Rational(r.clone())),
            (Scalar::Rational(r), ScalarMode::Cubic) => {
                Some(Scalar::Cubic(CubicNumber::from_rational(r.clone())))
            }
            (Scalar::Cubic(c), ScalarMode::Rational) => {
                c.as_rational().map(|r| Scalar::Rational(r.clone()))
            }
            (Scalar::Cubic(c), ScalarMode::Cubic) => Some(Scalar::Cubic(c.clone())),
            (Scalar::Float(x), ScalarMode::Float) => Some(Scalar::Float(*x)),
            (s, ScalarMode::Float) => Some(Scalar::Float(s.to_f64())),
            (Scalar::Float(_), _) => None,
        }
    }

    /// Narrowest exact mode that represents the value.
    pub fn simplify(&self) -> Scalar {
        match self {
            Scalar::Cubic(c) => match c.as_rational() {
                Some(r) => Scalar::Rational(r.clone()),
                None => self.clone(),
            },
            _ => self.clone(),
        }
    }

    pub fn cmp_value(&self, other: &Scalar) -> Ordering {
        (self - other).sign().to_ordering()
    }

    /// Equality: exact for exact operands, within `tol` as soon as one side
    /// is a float.
    pub fn approx_eq(&self, other: &Scalar, tol: f64) -> bool {
        if self.is_exact() && other.is_exact() {
            (self - other).is_zero()
        } else {
            (self.to_f64() - other.to_f64()).abs() <= tol
        }
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, NumericError> {
        if other.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        Ok(match promote(self, other) {
            Pair::Rational(a, b) => Scalar::Rational(a / b),
            Pair::Cubic(a, b) => Scalar::Cubic(&a * &b.inv()?),
            Pair::Float(a, b) => Scalar::Float(a / b),
        })
    }

    pub fn recip(&self) -> Result<Scalar, NumericError> {
        Scalar::one().checked_div(self)
    }

    /// Parses a scalar written in the given mode: `p/q`, `[c0,c1,c2]`, or a
    /// decimal float.
    pub fn parse(s: &str, mode: ScalarMode) -> Result<Scalar, NumericError> {
        match mode {
            ScalarMode::Rational => Ok(Scalar::Rational(parse_rational(s)?)),
            ScalarMode::Cubic => Ok(Scalar::Cubic(CubicNumber::parse(s)?)),
            ScalarMode::Float => s
                .trim()
                .parse::<f64>()
                .map(Scalar::Float)
                .map_err(|_| NumericError::Parse(s.to_string())),
        }
    }

    /// Serialized form in the given mode (which must be at or above the
    /// scalar's own mode).
    pub fn format_in(&self, mode: ScalarMode) -> String {
        match self.to_mode(mode).unwrap_or_else(|| self.clone()) {
            Scalar::Rational(r) => format_rational(&r),
            Scalar::Cubic(c) => c.to_string(),
            Scalar::Float(x) => format!("{:?}", x),
        }
    }

    /// Deterministic key suitable for hashing: exact representation for exact
    /// values, rounded to 9 significant digits for floats.
    pub fn key(&self) -> String {
        match self.simplify() {
            Scalar::Rational(r) => format_rational(&r),
            Scalar::Cubic(c) => c.to_string(),
            Scalar::Float(x) => {
                let x = if x.abs() < 1e-12 { 0.0 } else { x };
                format!("{:.9e}", x)
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_in(self.mode()))
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Float(x)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Rational(r)
    }
}

impl From<CubicNumber> for Scalar {
    fn from(c: CubicNumber) -> Self {
        Scalar::Cubic(c)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        match promote(self, other) {
            Pair::Rational(a, b) => a == b,
            Pair::Cubic(a, b) => a == b,
            Pair::Float(a, b) => a == b,
        }
    }
}

enum Pair {
    Rational(Rational, Rational),
    Cubic(CubicNumber, CubicNumber),
    Float(f64, f64),
}

fn promote(a: &Scalar, b: &Scalar) -> Pair {
    use Scalar::*;
    match (a, b) {
        (Rational(x), Rational(y)) => Pair::Rational(x.clone(), y.clone()),
        (Float(_), _) | (_, Float(_)) => Pair::Float(a.to_f64(), b.to_f64()),
        (Cubic(x), Cubic(y)) => Pair::Cubic(x.clone(), y.clone()),
        (Cubic(x), Rational(y)) => Pair::Cubic(x.clone(), CubicNumber::from_rational(y.clone())),
        (Rational(x), Cubic(y)) => Pair::Cubic(CubicNumber::from_rational(x.clone()), y.clone()),
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $rat:expr, $cub:expr, $flt:expr) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, o: &Scalar) -> Scalar {
                match promote(self, o) {
                    Pair::Rational(a, b) => Scalar::Rational($rat(a, b)),
                    Pair::Cubic(a, b) => Scalar::Cubic($cub(&a, &b)),
                    Pair::Float(a, b) => Scalar::Float($flt(a, b)),
                }
            }
        }

        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, o: Scalar) -> Scalar {
                (&self).$method(&o)
            }
        }

        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, o: &Scalar) -> Scalar {
                (&self).$method(o)
            }
        }
    };
}

binop!(
    Add,
    add,
    |a: Rational, b: Rational| a + b,
    |a: &CubicNumber, b: &CubicNumber| a + b,
    |a: f64, b: f64| a + b
);
binop!(
    Sub,
    sub,
    |a: Rational, b: Rational| a - b,
    |a: &CubicNumber, b: &CubicNumber| a - b,
    |a: f64, b: f64| a - b
);
binop!(
    Mul,
    mul,
    |a: Rational, b: Rational| a * b,
    |a: &CubicNumber, b: &CubicNumber| a * b,
    |a: f64, b: f64| a * b
);

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// Panics on division by an exact zero; use [`Scalar::checked_div`] for
    /// fallible division.
    fn div(self, o: &Scalar) -> Scalar {
        self.checked_div(o).expect("scalar division by zero")
    }
}

impl Div<Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, o: Scalar) -> Scalar {
        &self / &o
    }
}

impl Div<&Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        &self / o
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Cubic(c) => Scalar::Cubic(-c),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}
