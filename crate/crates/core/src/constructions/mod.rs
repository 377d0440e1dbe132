//! Builders for the surfaces studied here: the Arnoux–Yoccoz surface, the
//! trapezoid family containing it, the parallelogram family containing its
//! horizontally rescaled image, and small test surfaces.

mod origami;
mod parallelogram;

use thiserror::Error;

use crate::numeric::{Matrix2, Scalar, Vec2};
use crate::surface::{Gluing, Polygon, Surface, SurfaceError, SurfaceKind};

pub use origami::{origami_check, OrigamiCertificate, OrigamiVerdict, OrigamiWitness};
pub use parallelogram::{escalator, parallelogram_family, ParallelogramShape};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("degenerate shape: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// An isosceles trapezoid with short base `b`, long base `big_b` and height `h`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrapezoidShape {
    pub b: Scalar,
    pub big_b: Scalar,
    pub h: Scalar,
}

impl TrapezoidShape {
    pub fn new(b: impl Into<Scalar>, big_b: impl Into<Scalar>, h: impl Into<Scalar>) -> Self {
        TrapezoidShape {
            b: b.into(),
            big_b: big_b.into(),
            h: h.into(),
        }
    }

    fn check(&self) -> Result<(), ConstructionError> {
        if !self.b.is_positive() || !self.big_b.is_positive() || !self.h.is_positive() {
            return Err(ConstructionError::Degenerate(
                "bases and height must be positive".into(),
            ));
        }
        if self.big_b.cmp_value(&self.b) == std::cmp::Ordering::Less {
            return Err(ConstructionError::Degenerate(
                "long base shorter than short base".into(),
            ));
        }
        Ok(())
    }
}

/// Polygon indices in the surfaces built from the trapezoid template.
pub mod cells {
    pub const S0: usize = 0;
    pub const S1: usize = 1;
    pub const T0: usize = 2;
    pub const T10: usize = 3;
    pub const T01: usize = 4;
    pub const T11: usize = 5;
}

/// Two squares and four trapezoids in the chart where the trapezoid bases
/// point along (1, 1). `beta`, `beta_long` and `eta` are the short base, the
/// long base and the height, each divided by √2.
///
/// T₀ has vertices 0, β(1,1), ((β+β')/2)(1,1) + η(−1,1) and
/// ((β−β')/2)(1,1) + η(−1,1): edge 0 is the short base, edge 2 the long
/// base. S₀ is the square on the leg T₀ edge 3, S₁ its mirror image.
/// T₁₀, T₀₁ and T₁₁ are T₀ mirrored in a vertical line, a horizontal line
/// and both.
fn trapezoid_template(beta: &Scalar, beta_long: &Scalar, eta: &Scalar) -> Surface {
    let half = Scalar::ratio(1, 2);
    let diag = |s: &Scalar| Vec2::new(s.clone(), s.clone());
    let mid = &(beta + beta_long) * &half;
    let off = &(beta - beta_long) * &half;
    let up = Vec2::new(-eta, eta.clone());
    let t0 = Polygon::new(vec![
        Vec2::zero(),
        diag(beta),
        &diag(&mid) + &up,
        &diag(&off) + &up,
    ]);
    let leg = t0.edge(3);
    let (p, q) = (-&leg.y, leg.x.clone());
    let s0 = Polygon::from_edges(&[
        Vec2::new(p.clone(), q.clone()),
        Vec2::new(-&q, p.clone()),
        Vec2::new(-&p, -&q),
        Vec2::new(q.clone(), -&p),
    ]);
    let flip_x = Matrix2::diag(-1, 1);
    let flip_y = Matrix2::diag(1, -1);
    let s1 = s0.map_linear(&flip_x).normalized();
    let t10 = t0.map_linear(&flip_x).normalized();
    let t01 = t0.map_linear(&flip_y).normalized();
    let t11 = t0.map_linear(&Matrix2::diag(-1, -1)).normalized();
    let g = Gluing::translation;
    let gluings = vec![
        g((2, 2), (5, 2)),
        g((2, 0), (5, 0)),
        g((3, 1), (4, 1)),
        g((3, 3), (4, 3)),
        g((2, 1), (1, 3)),
        g((2, 3), (0, 1)),
        g((3, 0), (1, 2)),
        g((3, 2), (0, 0)),
        g((4, 0), (1, 0)),
        g((4, 2), (0, 2)),
        g((5, 1), (1, 1)),
        g((5, 3), (0, 3)),
    ];
    Surface::new(
        vec![s0, s1, t0, t10, t01, t11],
        gluings,
        SurfaceKind::Translation,
    )
}

/// The Arnoux–Yoccoz surface in exact ℚ(α) coordinates: S₀ has side
/// (α², α) and T₀ vertices (0,0), (1−α,1−α), (1−α−α²,1), (−α,α²).
pub fn ay_surface() -> Surface {
    let a = Scalar::alpha();
    let a2 = &a * &a;
    let one = Scalar::one();
    trapezoid_template(
        &(&one - &a),
        &(&one - &a2),
        &(&(&a + &a2) * &Scalar::ratio(1, 2)),
    )
}

/// The Arnoux–Yoccoz surface with the horizontal direction scaled by 1/α.
pub fn ay_prime() -> Surface {
    let m = Matrix2::diag(Scalar::alpha().recip().expect("α is nonzero"), 1);
    ay_surface()
        .apply_linear(&m)
        .expect("diagonal matrix is invertible")
}

/// Same gluings as [`ay_surface`] with T₀ replaced by the given isosceles
/// trapezoid, its bases horizontal (short base at the bottom).
pub fn trapezoid_family(shape: &TrapezoidShape) -> Result<Surface, ConstructionError> {
    shape.check()?;
    let s = trapezoid_template(&shape.b, &shape.big_b, &shape.h);
    // rotation by −π/4 composed with scaling by 1/√2, which has rational entries
    let m = Matrix2::new(1, 1, -1, 1).scale(&Scalar::ratio(1, 2));
    let out = s.apply_linear(&m)?;
    let v = out.validate();
    if !v.is_empty() {
        return Err(SurfaceError::Invalid(v).into());
    }
    Ok(out)
}

/// The square torus of side 1.
pub fn torus() -> Surface {
    Surface::new(
        vec![Polygon::new(vec![
            Vec2::new(0, 0),
            Vec2::new(1, 0),
            Vec2::new(1, 1),
            Vec2::new(0, 1),
        ])],
        vec![
            Gluing::translation((0, 0), (0, 2)),
            Gluing::translation((0, 1), (0, 3)),
        ],
        SurfaceKind::Translation,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ScalarMode;

    #[test]
    fn ay_is_genus_three_with_two_6pi_points() {
        let s = ay_surface();
        assert!(s.validate().is_empty(), "{:?}", s.validate());
        assert_eq!(s.genus().unwrap(), 3);
        let c = s.vertex_cycles().unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|c| c.angle_in_pi == 6));
        assert_eq!(s.mode(), ScalarMode::Cubic);
    }

    #[test]
    fn ay_polygons_match_the_published_vertex_lists() {
        let s = ay_surface();
        let a = Scalar::alpha();
        let a2 = &a * &a;
        let one = Scalar::one();
        let s0 = s.polygon(cells::S0);
        assert_eq!(s0.edge(0), Vec2::new(a2.clone(), a.clone()));
        assert_eq!(*s0.vertex(2), Vec2::new(&a2 - &a, &a2 + &a));
        assert_eq!(*s0.vertex(3), Vec2::new(-&a, a2.clone()));
        let t0 = s.polygon(cells::T0);
        assert_eq!(*t0.vertex(1), Vec2::new(&one - &a, &one - &a));
        assert_eq!(*t0.vertex(2), Vec2::new(&(&one - &a) - &a2, one.clone()));
        assert_eq!(*t0.vertex(3), Vec2::new(-&a, a2.clone()));
    }

    #[test]
    fn ay_area_by_shoelace() {
        // independent oracle: shoelace on the published coordinates in f64
        let a = crate::numeric::ALPHA_F64;
        let sq = a.powi(4) + a.powi(2);
        let t = [
            (0.0, 0.0),
            (1.0 - a, 1.0 - a),
            (1.0 - a - a * a, 1.0),
            (-a, a * a),
        ];
        let mut tw = 0.0;
        for i in 0..4 {
            let (x0, y0) = t[i];
            let (x1, y1) = t[(i + 1) % 4];
            tw += x0 * y1 - x1 * y0;
        }
        let expected = 2.0 * sq + 4.0 * tw / 2.0;
        assert!((ay_surface().area().to_f64() - expected).abs() < 1e-12);
    }

    #[test]
    fn trapezoid_family_members_are_valid() {
        for shape in [
            TrapezoidShape::new(1, 2, 1),
            TrapezoidShape::new(1, 1, Scalar::ratio(1, 2)),
            TrapezoidShape::new(Scalar::ratio(1, 3), 3, Scalar::ratio(7, 5)),
        ] {
            let s = trapezoid_family(&shape).unwrap();
            assert_eq!(s.genus().unwrap(), 3);
            let c = s.vertex_cycles().unwrap();
            assert!(c.iter().all(|c| c.angle_in_pi == 6), "{shape:?}");
            let t = s.polygon(cells::T0);
            assert_eq!(t.edge(0), Vec2::new(shape.b.clone(), 0));
        }
        assert!(trapezoid_family(&TrapezoidShape::new(2, 1, 1)).is_err());
        assert!(trapezoid_family(&TrapezoidShape::new(0, 1, 1)).is_err());
    }

    #[test]
    fn ay_prime_is_valid() {
        let s = ay_prime();
        assert!(s.validate().is_empty());
        assert_eq!(s.genus().unwrap(), 3);
        assert_eq!(
            s.area(),
            &ay_surface().area() * &Scalar::alpha().recip().unwrap()
        );
    }
}
