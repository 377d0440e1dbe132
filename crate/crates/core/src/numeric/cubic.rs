use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::{format_rational, parse_rational, Rational};
use super::{NumericError, Sign};

/// Floating-point value of α, the real root of `x³ + x² + x − 1`.
pub const ALPHA_F64: f64 = 0.543_689_012_692_076_4;

/// An element `c0 + c1·α + c2·α²` of ℚ(α).
///
/// Products are reduced with `α³ = 1 − α − α²`, so the representation is
/// unique and equality is coefficient-wise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CubicNumber {
    c: [Rational; 3],
}

fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl CubicNumber {
    pub fn new(c0: Rational, c1: Rational, c2: Rational) -> Self {
        CubicNumber { c: [c0, c1, c2] }
    }

    pub fn from_ints(c0: i64, c1: i64, c2: i64) -> Self {
        Self::new(q(c0), q(c1), q(c2))
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::new(r, Rational::zero(), Rational::zero())
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0, 0)
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0, 0)
    }

    /// The generator α.
    pub fn alpha() -> Self {
        Self::from_ints(0, 1, 0)
    }

    pub fn coefficients(&self) -> &[Rational; 3] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    /// `Some(r)` when the value lies in ℚ.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.c[1].is_zero() && self.c[2].is_zero() {
            Some(&self.c[0])
        } else {
            None
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CubicNumber {
            c: [&self.c[0] * r, &self.c[1] * r, &self.c[2] * r],
        }
    }

    /// Multiplicative inverse, found by solving the 3×3 linear system of
    /// multiplication by `self` over ℚ.
    pub fn inv(&self) -> Result<Self, NumericError> {
        if self.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        // columns: self·1, self·α, self·α²
        let cols = [
            self.clone(),
            self * &CubicNumber::alpha(),
            self * &CubicNumber::from_ints(0, 0, 1),
        ];
        let mut m: Vec<Vec<Rational>> = (0..3)
            .map(|row| {
                let mut r: Vec<Rational> = cols.iter().map(|c| c.c[row].clone()).collect();
                r.push(if row == 0 { q(1) } else { q(0) });
                r
            })
            .collect();
        for col in 0..3 {
            let pivot = (col..3)
                .find(|&r| !m[r][col].is_zero())
                .ok_or(NumericError::DivisionByZero)?;
            m.swap(col, pivot);
            let p = m[col][col].clone();
            for v in m[col].iter_mut() {
                *v = &*v / &p;
            }
            for r in 0..3 {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for k in 0..4 {
                        let sub = &f * &m[col][k];
                        m[r][k] = &m[r][k] - sub;
                    }
                }
            }
        }
        Ok(CubicNumber::new(
            m[0][3].clone(),
            m[1][3].clone(),
            m[2][3].clone(),
        ))
    }

    /// Fast approximation; not certified. Use [`embed_real`](Self::embed_real)
    /// when a guaranteed error is needed.
    pub fn to_f64(&self) -> f64 {
        let a = ALPHA_F64;
        let c: Vec<f64> = self
            .c
            .iter()
            .map(|r| r.to_f64().unwrap_or(f64::NAN))
            .collect();
        c[0] + a * (c[1] + a * c[2])
    }

    /// Real embedding α ↦ 0.543689… within `eps`, by refining an isolating
    /// interval of α until the value interval is narrower than `eps`.
    pub fn embed_real(&self, eps: f64) -> f64 {
        assert!(eps > 0.0, "embed_real needs a positive tolerance");
        if let Some(r) = self.as_rational() {
            return r.to_f64().unwrap_or(f64::NAN);
        }
        let eps_q = Rational::from_float(eps).unwrap_or_else(|| q(1));
        let mut iv = AlphaInterval::start();
        loop {
            let (lo, hi) = self.bounds(&iv);
            if &hi - &lo < eps_q {
                let mid: Rational = (lo + hi) / q(2);
                return mid.to_f64().unwrap_or(f64::NAN);
            }
            iv.bisect();
        }
    }

    /// Exact sign of the real embedding.
    pub fn sign(&self) -> Sign {
        if self.is_zero() {
            return Sign::Zero;
        }
        if let Some(r) = self.as_rational() {
            return Sign::of_rational(r);
        }
        // float filter
        let a = ALPHA_F64;
        let terms: Vec<f64> = self
            .c
            .iter()
            .zip([1.0, a, a * a])
            .map(|(r, p)| r.to_f64().unwrap_or(f64::NAN) * p)
            .collect();
        if terms.iter().all(|t| t.is_finite()) {
            let value: f64 = terms.iter().sum();
            let magnitude: f64 = terms.iter().map(|t| t.abs()).sum();
            if value.abs() > 1e-12 * magnitude {
                return if value > 0.0 {
                    Sign::Positive
                } else {
                    Sign::Negative
                };
            }
        }
        let mut iv = AlphaInterval::start();
        loop {
            let (lo, hi) = self.bounds(&iv);
            if lo.is_positive() {
                return Sign::Positive;
            }
            if hi.is_negative() {
                return Sign::Negative;
            }
            iv.bisect();
        }
    }

    /// Lower and upper bound of the value for α in the given interval.
    fn bounds(&self, iv: &AlphaInterval) -> (Rational, Rational) {
        let lo_pows = [q(1), iv.lo.clone(), &iv.lo * &iv.lo];
        let hi_pows = [q(1), iv.hi.clone(), &iv.hi * &iv.hi];
        let mut lo = Rational::zero();
        let mut hi = Rational::zero();
        for k in 0..3 {
            let a = &self.c[k] * &lo_pows[k];
            let b = &self.c[k] * &hi_pows[k];
            if a <= b {
                lo += a;
                hi += b;
            } else {
                lo += b;
                hi += a;
            }
        }
        (lo, hi)
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        (self - other).sign().to_ordering()
    }

    pub fn parse(s: &str) -> Result<Self, NumericError> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| NumericError::Parse(s.to_string()))?;
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != 3 {
            return Err(NumericError::Parse(s.to_string()));
        }
        Ok(CubicNumber::new(
            parse_rational(parts[0])?,
            parse_rational(parts[1])?,
            parse_rational(parts[2])?,
        ))
    }
}

/// Isolating interval for α with rational endpoints; α³+α²+α−1 is increasing,
/// so one evaluation at the midpoint decides which half keeps the root.
struct AlphaInterval {
    lo: Rational,
    hi: Rational,
}

impl AlphaInterval {
    fn start() -> Self {
        AlphaInterval {
            lo: Rational::new(BigInt::from(54), BigInt::from(100)),
            hi: Rational::new(BigInt::from(55), BigInt::from(100)),
        }
    }

    fn bisect(&mut self) {
        let mid: Rational = (&self.lo + &self.hi) / q(2);
        let p = &mid * &mid * &mid + &mid * &mid + &mid - q(1);
        if p.is_negative() {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }
}

impl fmt::Display for CubicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{},{},{}]",
            format_rational(&self.c[0]),
            format_rational(&self.c[1]),
            format_rational(&self.c[2])
        )
    }
}

impl<'a> Add<&'a CubicNumber> for &'a CubicNumber {
    type Output = CubicNumber;
    fn add(self, o: &CubicNumber) -> CubicNumber {
        CubicNumber {
            c: [
                &self.c[0] + &o.c[0],
                &self.c[1] + &o.c[1],
                &self.c[2] + &o.c[2],
            ],
        }
    }
}

impl<'a> Sub<&'a CubicNumber> for &'a CubicNumber {
    type Output = CubicNumber;
    fn sub(self, o: &CubicNumber) -> CubicNumber {
        CubicNumber {
            c: [
                &self.c[0] - &o.c[0],
                &self.c[1] - &o.c[1],
                &self.c[2] - &o.c[2],
            ],
        }
    }
}

impl<'a> Mul<&'a CubicNumber> for &'a CubicNumber {
    type Output = CubicNumber;
    fn mul(self, o: &CubicNumber) -> CubicNumber {
        let (a, b) = (&self.c, &o.c);
        let d0 = &a[0] * &b[0];
        let d1 = &a[0] * &b[1] + &a[1] * &b[0];
        let d2 = &a[0] * &b[2] + &a[1] * &b[1] + &a[2] * &b[0];
        let d3 = &a[1] * &b[2] + &a[2] * &b[1];
        let d4 = &a[2] * &b[2];
        // α³ = 1 − α − α², α⁴ = 2α − 1
        CubicNumber {
            c: [&d0 + &d3 - &d4, &d1 - &d3 + &d4 * q(2), &d2 - &d3],
        }
    }
}

impl Neg for &CubicNumber {
    type Output = CubicNumber;
    fn neg(self) -> CubicNumber {
        CubicNumber {
            c: [-&self.c[0], -&self.c[1], -&self.c[2]],
        }
    }
}

impl One for CubicNumber {
    fn one() -> Self {
        CubicNumber::one()
    }
}

impl Mul for CubicNumber {
    type Output = CubicNumber;
    fn mul(self, o: CubicNumber) -> CubicNumber {
        &self * &o
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a() -> CubicNumber {
        CubicNumber::alpha()
    }

    #[test]
    fn reduction_by_minimal_polynomial() {
        let a2 = CubicNumber::from_ints(0, 0, 1);
        assert_eq!(&a() * &a2, CubicNumber::from_ints(1, -1, -1));
        assert_eq!(&a() * &CubicNumber::from_ints(1, 1, 1), CubicNumber::one());
        let l = CubicNumber::from_ints(1, -1, 0);
        let r = CubicNumber::from_ints(1, 1, 0);
        assert_eq!(&l * &r, CubicNumber::from_ints(1, 0, -1));
    }

    #[test]
    fn inverses() {
        assert_eq!(a().inv().unwrap(), CubicNumber::from_ints(1, 1, 1));
        assert_eq!(CubicNumber::one().inv().unwrap(), CubicNumber::one());
        let a2 = CubicNumber::from_ints(0, 0, 1);
        let inv_a = a().inv().unwrap();
        assert_eq!(a2.inv().unwrap(), &inv_a * &inv_a);
        assert_eq!(&a2 * &a2.inv().unwrap(), CubicNumber::one());
        assert_eq!(CubicNumber::zero().inv(), Err(NumericError::DivisionByZero));
    }

    #[test]
    fn embedding() {
        assert!((a().embed_real(1e-6) - 0.543689).abs() < 1e-6);
        assert_eq!(CubicNumber::zero().embed_real(1e-6), 0.0);
        let inv = CubicNumber::from_ints(1, 1, 1);
        assert!((inv.embed_real(1e-6) - 1.839287).abs() < 1e-6);
        // tighter than the starting interval by many orders of magnitude
        assert!((a().embed_real(1e-15) - 0.543_689_012_692_076_4).abs() < 1e-15);
    }

    #[test]
    fn signs() {
        assert_eq!((&a() - &CubicNumber::one()).sign(), Sign::Negative);
        assert_eq!(CubicNumber::zero().sign(), Sign::Zero);
        let a2 = &a() * &a();
        let a3 = &a2 * &a();
        let p = &(&(&a3 + &a2) + &a()) - &CubicNumber::one();
        assert_eq!(p.sign(), Sign::Zero);
        // a tiny nonzero value that defeats the float filter
        let tiny = CubicNumber::new(Rational::from_float(ALPHA_F64).unwrap(), q(-1), q(0));
        let exact = Rational::from_float(ALPHA_F64).unwrap();
        let expected = exact_sign_reference(&exact);
        assert_ne!(expected, Sign::Zero);
        assert_eq!(tiny.sign(), expected);
    }

    // sign of r − α by direct evaluation of the increasing minimal polynomial
    fn exact_sign_reference(r: &Rational) -> Sign {
        let p = r * r * r + r * r + r - q(1);
        Sign::of_rational(&p)
    }

    #[test]
    fn parse_round_trip() {
        let x = CubicNumber::new(
            Rational::new(1.into(), 3.into()),
            q(-2),
            Rational::new((-5).into(), 7.into()),
        );
        let s = x.to_string();
        assert_eq!(s, "[1/3,-2/1,-5/7]");
        assert_eq!(CubicNumber::parse(&s).unwrap(), x);
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(p, d)| Rational::new(p.into(), d.into()))
    }

    proptest! {
        #[test]
        fn inverse_is_exact(c0 in small_rational(), c1 in small_rational(), c2 in small_rational()) {
            let x = CubicNumber::new(c0, c1, c2);
            prop_assume!(!x.is_zero());
            let inv = x.inv().unwrap();
            prop_assert_eq!(&x * &inv, CubicNumber::one());
        }

        #[test]
        fn sign_agrees_with_embedding(c0 in small_rational(), c1 in small_rational(), c2 in small_rational()) {
            let x = CubicNumber::new(c0, c1, c2);
            let eps = 1e-9;
            let v = x.embed_real(eps);
            if v.abs() > 2.0 * eps {
                let expected = if v > 0.0 { Sign::Positive } else { Sign::Negative };
                prop_assert_eq!(x.sign(), expected);
            }
        }
    }
}
