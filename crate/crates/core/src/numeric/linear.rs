use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{NumericError, Scalar, ScalarMode};

/// A point or vector in the plane.
#[derive(Clone, Debug, PartialEq)]
pub struct Vec2 {
    pub x: Scalar,
    pub y: Scalar,
}

impl Vec2 {
    pub fn new(x: impl Into<Scalar>, y: impl Into<Scalar>) -> Self {
        Vec2 {
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn zero() -> Self {
        Vec2::new(0, 0)
    }

    pub fn from_f64(x: f64, y: f64) -> Self {
        Vec2::new(Scalar::Float(x), Scalar::Float(y))
    }

    pub fn cross(&self, o: &Vec2) -> Scalar {
        &(&self.x * &o.y) - &(&self.y * &o.x)
    }

    pub fn dot(&self, o: &Vec2) -> Scalar {
        &(&self.x * &o.x) + &(&self.y * &o.y)
    }

    pub fn norm2(&self) -> Scalar {
        self.dot(self)
    }

    pub fn scale(&self, s: &Scalar) -> Vec2 {
        Vec2 {
            x: &self.x * s,
            y: &self.y * s,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_exact(&self) -> bool {
        self.x.is_exact() && self.y.is_exact()
    }

    pub fn mode(&self) -> ScalarMode {
        self.x.mode().max(self.y.mode())
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }

    pub fn approx_eq(&self, o: &Vec2, tol: f64) -> bool {
        self.x.approx_eq(&o.x, tol) && self.y.approx_eq(&o.y, tol)
    }

    /// Lexicographic comparison (x, then y), exact for exact coordinates.
    pub fn cmp_lex(&self, o: &Vec2) -> std::cmp::Ordering {
        self.x.cmp_value(&o.x).then_with(|| self.y.cmp_value(&o.y))
    }

    pub fn key(&self) -> String {
        format!("({},{})", self.x.key(), self.y.key())
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl<'a> Add<&'a Vec2> for &'a Vec2 {
    type Output = Vec2;
    fn add(self, o: &Vec2) -> Vec2 {
        Vec2 {
            x: &self.x + &o.x,
            y: &self.y + &o.y,
        }
    }
}

impl<'a> Sub<&'a Vec2> for &'a Vec2 {
    type Output = Vec2;
    fn sub(self, o: &Vec2) -> Vec2 {
        Vec2 {
            x: &self.x - &o.x,
            y: &self.y - &o.y,
        }
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        &self + &o
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        &self - &o
    }
}

impl Neg for &Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2 {
            x: -&self.x,
            y: -&self.y,
        }
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        -&self
    }
}

/// A 2×2 matrix `[[a, b], [c, d]]` acting on column vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix2 {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
}

impl Matrix2 {
    pub fn new(
        a: impl Into<Scalar>,
        b: impl Into<Scalar>,
        c: impl Into<Scalar>,
        d: impl Into<Scalar>,
    ) -> Self {
        Matrix2 {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn identity() -> Self {
        Matrix2::new(1, 0, 0, 1)
    }

    pub fn diag(x: impl Into<Scalar>, y: impl Into<Scalar>) -> Self {
        Matrix2::new(x, 0, 0, y)
    }

    /// Matrix with the given vectors as columns.
    pub fn from_columns(u: &Vec2, v: &Vec2) -> Self {
        Matrix2::new(u.x.clone(), v.x.clone(), u.y.clone(), v.y.clone())
    }

    pub fn det(&self) -> Scalar {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn trace(&self) -> Scalar {
        &self.a + &self.d
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        Vec2 {
            x: &(&self.a * &v.x) + &(&self.b * &v.y),
            y: &(&self.c * &v.x) + &(&self.d * &v.y),
        }
    }

    pub fn transpose(&self) -> Matrix2 {
        Matrix2::new(
            self.a.clone(),
            self.c.clone(),
            self.b.clone(),
            self.d.clone(),
        )
    }

    pub fn inverse(&self) -> Result<Matrix2, NumericError> {
        let det = self.det();
        if det.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        let inv = det.recip()?;
        Ok(Matrix2 {
            a: &self.d * &inv,
            b: -(&self.b * &inv),
            c: -(&self.c * &inv),
            d: &self.a * &inv,
        })
    }

    pub fn scale(&self, s: &Scalar) -> Matrix2 {
        Matrix2 {
            a: &self.a * s,
            b: &self.b * s,
            c: &self.c * s,
            d: &self.d * s,
        }
    }

    pub fn is_exact(&self) -> bool {
        [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .all(|s| s.is_exact())
    }

    pub fn to_f64(&self) -> [[f64; 2]; 2] {
        [
            [self.a.to_f64(), self.b.to_f64()],
            [self.c.to_f64(), self.d.to_f64()],
        ]
    }

    pub fn approx_eq(&self, o: &Matrix2, tol: f64) -> bool {
        self.a.approx_eq(&o.a, tol)
            && self.b.approx_eq(&o.b, tol)
            && self.c.approx_eq(&o.c, tol)
            && self.d.approx_eq(&o.d, tol)
    }

    /// `MᵀM = I`: exact for exact entries, Frobenius distance at most `tol`
    /// otherwise.
    pub fn is_orthogonal(&self, tol: f64) -> bool {
        let p = &self.transpose() * self;
        let id = Matrix2::identity();
        if p.is_exact() {
            p == id
        } else {
            let m = p.to_f64();
            let e = (m[0][0] - 1.0).powi(2)
                + m[0][1].powi(2)
                + m[1][0].powi(2)
                + (m[1][1] - 1.0).powi(2);
            e.sqrt() <= tol
        }
    }
}

impl fmt::Display for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl<'a> Mul<&'a Matrix2> for &'a Matrix2 {
    type Output = Matrix2;
    fn mul(self, o: &Matrix2) -> Matrix2 {
        Matrix2 {
            a: &(&self.a * &o.a) + &(&self.b * &o.c),
            b: &(&self.a * &o.b) + &(&self.b * &o.d),
            c: &(&self.c * &o.a) + &(&self.d * &o.c),
            d: &(&self.c * &o.b) + &(&self.d * &o.d),
        }
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;
    fn mul(self, o: Matrix2) -> Matrix2 {
        &self * &o
    }
}
