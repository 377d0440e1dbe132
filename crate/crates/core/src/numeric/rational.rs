use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::NumericError;

/// Arbitrary-precision rational number in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Formats as `p/q`. The denominator is always written, also when it is 1.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<Rational, NumericError> {
    let s = s.trim();
    let err = || NumericError::Parse(s.to_string());
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| err())?;
            let q: BigInt = q.trim().parse().map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| err())?;
            Ok(Rational::from_integer(p))
        }
    }
}

/// Best rational approximation of `x` with error at most `tol`, found by
/// walking the continued-fraction convergents.
pub fn rationalize(x: f64, tol: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let negative = x < 0.0;
    let mut rest = x.abs();
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    for _ in 0..64 {
        let a = rest.floor();
        let a_int = BigInt::from(a as i128);
        let h2 = &a_int * &h1 + &h0;
        let k2 = &a_int * &k1 + &k0;
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let approx = Rational::new(h1.clone(), k1.clone());
        let value = approx.to_f64().unwrap_or(f64::NAN);
        if (value - x.abs()).abs() <= tol {
            return Some(if negative { -approx } else { approx });
        }
        let frac = rest - a;
        if frac <= 0.0 {
            break;
        }
        rest = 1.0 / frac;
    }
    let approx = Rational::new(h1, k1);
    if (approx.to_f64()? - x.abs()).abs() <= tol {
        Some(if negative { -approx } else { approx })
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_and_parse() {
        let r = Rational::new(BigInt::from(-6), BigInt::from(4));
        assert_eq!(format_rational(&r), "-3/2");
        assert_eq!(parse_rational("-3/2").unwrap(), r);
        assert_eq!(
            parse_rational("7").unwrap(),
            Rational::from_integer(7.into())
        );
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn rationalize_recovers_small_fractions() {
        let r = rationalize(0.375, 1e-9).unwrap();
        assert_eq!(r, Rational::new(3.into(), 8.into()));
        let r = rationalize(-2.0 / 3.0, 1e-9).unwrap();
        assert_eq!(r, Rational::new((-2).into(), 3.into()));
        let r = rationalize(std::f64::consts::PI, 1e-9).unwrap();
        assert!((r.to_f64().unwrap() - std::f64::consts::PI).abs() <= 1e-9);
    }
}
