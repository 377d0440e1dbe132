//! The parallelogram family: a parallelogram P, a square on one side of P,
//! the rotation of P by π/2, and the mirror images of P and of its rotation
//! in their remaining sides.
//!
//! With `u` the side carrying the square and `v` the other side, the cells
//! and their edge vectors (counterclockwise) are
//!
//! ```text
//! Q₀ = [u, Ju, −u, −Ju]          P_A = [u, v, −u, −v]
//! Q₁ = [−Ru, −JRu, Ru, JRu]      P_B = [−Ru, v, Ru, −v]
//! P_C = [−Jv, −JRu, Jv, JRu]     P_D = [−Jv, Ju, Jv, −Ju]
//! ```
//!
//! where `J` is the rotation by π/2 and `R` the reflection in the line
//! spanned by `v`. The gluing table below was read off the Delaunay
//! decomposition of the Arnoux–Yoccoz surface with its horizontal direction
//! scaled by 1/α, where the parallelograms appear as pairs of triangles.

use crate::numeric::{Matrix2, Scalar, Vec2};
use crate::surface::{Gluing, Polygon, Surface, SurfaceError, SurfaceKind};

use super::ConstructionError;

/// Parallelogram spanned by `side1` (the side carrying the square) and
/// `side2`, positively oriented.
#[derive(Clone, Debug, PartialEq)]
pub struct ParallelogramShape {
    pub side1: Vec2,
    pub side2: Vec2,
}

impl ParallelogramShape {
    pub fn new(side1: Vec2, side2: Vec2) -> Self {
        ParallelogramShape { side1, side2 }
    }

    /// The shape realizing the horizontally rescaled Arnoux–Yoccoz surface:
    /// `side1 = (α², −1)`, `side2 = (α, α)`.
    pub fn ay_prime() -> Self {
        let a = Scalar::alpha();
        ParallelogramShape::new(Vec2::new(&a * &a, -1), Vec2::new(a.clone(), a))
    }

    /// The same parallelogram turned by π/2.
    pub fn rotated(&self) -> Self {
        let j = Matrix2::new(0, -1, 1, 0);
        ParallelogramShape::new(j.apply(&self.side1), j.apply(&self.side2))
    }
}

/// Reflection in the line spanned by `v`.
fn reflection_along(v: &Vec2) -> Result<Matrix2, ConstructionError> {
    let n = v.norm2();
    let inv = n
        .recip()
        .map_err(|_| ConstructionError::Degenerate("zero side".into()))?;
    let xx = &v.x * &v.x;
    let yy = &v.y * &v.y;
    let xy = &(&v.x * &v.y) * &Scalar::int(2);
    Ok(Matrix2::new(&xx - &yy, xy.clone(), xy, &yy - &xx).scale(&inv))
}

pub fn parallelogram_family(shape: &ParallelogramShape) -> Result<Surface, ConstructionError> {
    let (u, v) = (&shape.side1, &shape.side2);
    if !u.cross(v).is_positive() {
        return Err(ConstructionError::Degenerate(
            "sides must be positively oriented and independent".into(),
        ));
    }
    let j = Matrix2::new(0, -1, 1, 0);
    let r = reflection_along(v)?;
    let ju = j.apply(u);
    let jv = j.apply(v);
    let ru = r.apply(u);
    let jru = j.apply(&ru);
    let q0 = Polygon::from_edges(&[u.clone(), ju.clone(), -u, -&ju]);
    let q1 = Polygon::from_edges(&[-&ru, -&jru, ru.clone(), jru.clone()]);
    let pa = Polygon::from_edges(&[u.clone(), v.clone(), -u, -v]);
    let pb = Polygon::from_edges(&[-&ru, v.clone(), ru.clone(), -v]);
    let pc = Polygon::from_edges(&[-&jv, -&jru, jv.clone(), jru.clone()]);
    let pd = Polygon::from_edges(&[-&jv, ju.clone(), jv.clone(), -&ju]);
    let g = Gluing::translation;
    let gluings = vec![
        g((2, 0), (0, 2)),
        g((2, 1), (3, 3)),
        g((3, 1), (2, 3)),
        g((3, 2), (1, 0)),
        g((4, 0), (5, 2)),
        g((4, 1), (1, 3)),
        g((5, 0), (4, 2)),
        g((5, 3), (0, 1)),
        g((2, 2), (0, 0)),
        g((4, 3), (1, 1)),
        g((3, 0), (1, 2)),
        g((5, 1), (0, 3)),
    ];
    let s = Surface::new(
        vec![q0, q1, pa, pb, pc, pd],
        gluings,
        SurfaceKind::Translation,
    );
    let v = s.validate();
    if !v.is_empty() {
        return Err(SurfaceError::Invalid(v).into());
    }
    Ok(s)
}

/// The member whose parallelogram is the unit square.
pub fn escalator() -> Surface {
    parallelogram_family(&ParallelogramShape::new(Vec2::new(1, 0), Vec2::new(0, 1)))
        .expect("the unit square is a valid shape")
}
