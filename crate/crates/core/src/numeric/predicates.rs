//! Orientation and in-circle predicates over [`Scalar`] coordinates.

use super::{NumericError, Scalar, Sign, Vec2};

/// Relative threshold below which a float orientation counts as collinear.
pub const ORIENT_FLOAT_TOL: f64 = 1e-12;

/// Sign of the signed area of `(p, q, r)`; positive for counterclockwise.
pub fn orient(p: &Vec2, q: &Vec2, r: &Vec2) -> Sign {
    (q - p).cross(&(r - p)).sign()
}

/// The lifted determinant
///
/// ```text
/// | ax ay ax²+ay² |
/// | bx by bx²+by² |      with a = p1 − p4, b = p2 − p4, c = p3 − p4,
/// | cx cy cx²+cy² |
/// ```
///
/// positive exactly when `p4` lies inside the circle through the
/// counterclockwise triangle `(p1, p2, p3)`.
pub fn incircle_determinant(p1: &Vec2, p2: &Vec2, p3: &Vec2, p4: &Vec2) -> Scalar {
    let a = p1 - p4;
    let b = p2 - p4;
    let c = p3 - p4;
    let (la, lb, lc) = (a.norm2(), b.norm2(), c.norm2());
    let m1 = b.cross(&c);
    let m2 = c.cross(&a);
    let m3 = a.cross(&b);
    &(&(&la * &m1) + &(&lb * &m2)) + &(&lc * &m3)
}

/// +1 when `p4` is strictly inside the circumcircle of the counterclockwise
/// triangle `(p1, p2, p3)`, 0 when the four points are cocircular, −1 outside.
pub fn incircle(p1: &Vec2, p2: &Vec2, p3: &Vec2, p4: &Vec2) -> Result<Sign, NumericError> {
    if orient(p1, p2, p3) == Sign::Zero {
        return Err(NumericError::Degenerate(
            "collinear triangle in incircle test",
        ));
    }
    Ok(incircle_determinant(p1, p2, p3, p4).sign())
}

/// The in-circle determinant divided by `|a|·|b|·|c|·max(|a|, |b|, |c|)` with
/// `a, b, c` the offsets of `p1, p2, p3` from `p4`; invariant under scaling.
pub fn incircle_normalized(p1: &Vec2, p2: &Vec2, p3: &Vec2, p4: &Vec2) -> f64 {
    let det = incircle_determinant(p1, p2, p3, p4).to_f64();
    let la = (p1 - p4).norm2().to_f64().sqrt();
    let lb = (p2 - p4).norm2().to_f64().sqrt();
    let lc = (p3 - p4).norm2().to_f64().sqrt();
    let scale = la * lb * lc * la.max(lb).max(lc);
    if scale == 0.0 {
        0.0
    } else {
        det / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Vec2 {
        Vec2::new(x, y)
    }

    /// Direct 4×4 evaluation with rows (x, y, x²+y², 1) by cofactor expansion,
    /// kept independent of the translated 3×3 form above.
    fn lifted_4x4(pts: [(f64, f64); 4]) -> f64 {
        let rows: Vec<[f64; 4]> = pts
            .iter()
            .map(|&(x, y)| [x, y, x * x + y * y, 1.0])
            .collect();
        fn det3(m: [[f64; 3]; 3]) -> f64 {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        let mut total = 0.0;
        for col in 0..4 {
            let mut minor = [[0.0; 3]; 3];
            for r in 1..4 {
                let mut k = 0;
                for c in 0..4 {
                    if c != col {
                        minor[r - 1][k] = rows[r][c];
                        k += 1;
                    }
                }
            }
            let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
            total += sign * rows[0][col] * det3(minor);
        }
        total
    }

    #[test]
    fn unit_square_cases() {
        let (a, b, c) = (p(0, 0), p(1, 0), p(1, 1));
        assert_eq!(incircle(&a, &b, &c, &p(0, 1)).unwrap(), Sign::Zero);
        let centre = Vec2::new(Scalar::ratio(1, 2), Scalar::ratio(1, 2));
        assert_eq!(incircle(&a, &b, &c, &centre).unwrap(), Sign::Positive);
        assert_eq!(incircle(&a, &b, &c, &p(-1, 2)).unwrap(), Sign::Negative);
        // oracle: the untranslated 4×4 determinant equals the translated 3×3
        let brute = lifted_4x4([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (-1.0, 2.0)]);
        assert!(brute < 0.0);
        let ours = incircle_determinant(&a, &b, &c, &p(-1, 2)).to_f64();
        assert_eq!(ours, brute);
    }

    #[test]
    fn collinear_triangle_is_rejected() {
        let r = incircle(&p(0, 0), &p(1, 1), &p(2, 2), &p(0, 1));
        assert!(matches!(r, Err(NumericError::Degenerate(_))));
    }

    #[test]
    fn cubic_coordinates_on_the_square_s0() {
        // corners of the square with side (α², α) are cocircular
        let a = Scalar::alpha();
        let a2 = &a * &a;
        let v0 = Vec2::new(0, 0);
        let v1 = Vec2::new(a2.clone(), a.clone());
        let v2 = Vec2::new(&a2 - &a, &a2 + &a);
        let v3 = Vec2::new(-&a, a2.clone());
        assert_eq!(incircle(&v0, &v1, &v2, &v3).unwrap(), Sign::Zero);
        let inside = Vec2::new(Scalar::ratio(-1, 10), Scalar::ratio(4, 10));
        assert_eq!(incircle(&v0, &v1, &v2, &inside).unwrap(), Sign::Positive);
    }

    #[test]
    fn float_and_exact_agree_away_from_zero() {
        let pts = [(0, 0), (3, 0), (1, 2), (2, 2), (5, 5), (-1, 1), (0, 3)];
        for &a in &pts {
            for &b in &pts {
                for &c in &pts {
                    for &d in &pts {
                        let (a, b, c, d) = (p(a.0, a.1), p(b.0, b.1), p(c.0, c.1), p(d.0, d.1));
                        if orient(&a, &b, &c) != Sign::Positive {
                            continue;
                        }
                        let f = |v: &Vec2| Vec2::from_f64(v.x.to_f64(), v.y.to_f64());
                        let det_f = incircle_determinant(&f(&a), &f(&b), &f(&c), &f(&d)).to_f64();
                        if det_f.abs() > 1e-9 {
                            let exact = incircle(&a, &b, &c, &d).unwrap();
                            assert_eq!(exact, Sign::of_f64(det_f));
                        }
                    }
                }
            }
        }
    }
}
