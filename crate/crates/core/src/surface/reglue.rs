//! Cutting a translation surface along two opposite sides of a square and
//! regluing by half turns, which yields a half-translation surface.

use crate::numeric::{Scalar, Vec2};

use super::{EdgeRef, Gluing, GluingKind, Polygon, Surface, SurfaceError, SurfaceKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    /// The pair of opposite edges closer to horizontal.
    Horizontal,
    /// The pair of opposite edges closer to vertical.
    Vertical,
}

impl Axis {
    pub fn from_name(s: &str) -> Option<Axis> {
        match s {
            "horizontal" | "h" => Some(Axis::Horizontal),
            "vertical" | "v" => Some(Axis::Vertical),
            _ => None,
        }
    }
}

/// Index `i ∈ {0, 1}` of the edge pair `(i, i + 2)` matching `axis`. Ties go
/// to pair 0 for the horizontal axis and pair 1 for the vertical one.
fn pair_for_axis(p: &Polygon, axis: Axis) -> usize {
    let (e0, e1) = (p.edge(0), p.edge(1));
    // compare x²/|e|² between the two pairs without square roots
    let h0 = &(&e0.x * &e0.x) * &e1.norm2();
    let h1 = &(&e1.x * &e1.x) * &e0.norm2();
    let horizontal = if h0.cmp_value(&h1) == std::cmp::Ordering::Less {
        1
    } else {
        0
    };
    match axis {
        Axis::Horizontal => horizontal,
        Axis::Vertical => 1 - horizontal,
    }
}

impl Surface {
    /// Cuts along the two opposite sides of polygon `square` picked by
    /// `axis` and reglues each cut side to the free side formerly glued to
    /// its opposite, by a half turn. When the two sides were glued to each
    /// other the polygon is split along its midline and each side is folded
    /// onto itself instead.
    pub fn cut_and_reglue_square(
        &self,
        square: usize,
        axis: Axis,
    ) -> Result<Surface, SurfaceError> {
        if self.kind != SurfaceKind::Translation {
            return Err(SurfaceError::BadGluing(
                square,
                "surface is not a translation surface".into(),
            ));
        }
        let poly = self
            .polygons
            .get(square)
            .ok_or(SurfaceError::NotAParallelogram(square))?;
        if poly.len() != 4 {
            return Err(SurfaceError::NotAParallelogram(square));
        }
        let e = poly.edges();
        let opposite = |a: &Vec2, b: &Vec2| {
            if a.is_exact() && b.is_exact() {
                *a == -b
            } else {
                a.approx_eq(&-b, super::EDGE_FLOAT_TOL)
            }
        };
        if !opposite(&e[0], &e[2]) || !opposite(&e[1], &e[3]) {
            return Err(SurfaceError::NotAParallelogram(square));
        }
        let i = pair_for_axis(poly, axis);
        let a = EdgeRef::new(square, i);
        let b = EdgeRef::new(square, i + 2);
        let (x, kx) = self
            .partner(a)
            .ok_or_else(|| SurfaceError::BadGluing(square, format!("edge {a} is not glued")))?;
        let (y, ky) = self
            .partner(b)
            .ok_or_else(|| SurfaceError::BadGluing(square, format!("edge {b} is not glued")))?;
        if kx != GluingKind::Translation || ky != GluingKind::Translation {
            return Err(SurfaceError::BadGluing(
                square,
                "cut edges must be glued by translations".into(),
            ));
        }
        let involved = |g: &Gluing| g.a == a || g.b == a || g.a == b || g.b == b;
        let mut gluings: Vec<Gluing> = self
            .gluings
            .iter()
            .filter(|g| !involved(g))
            .copied()
            .collect();
        let mut polygons = self.polygons.clone();

        if x == b {
            let w: Vec<Vec2> = (0..4).map(|k| poly.vertex(i + k).clone()).collect();
            let half = Scalar::ratio(1, 2);
            let m0 = (&w[0] + &w[1]).scale(&half);
            let m2 = (&w[2] + &w[3]).scale(&half);
            let left = Polygon::new(vec![w[0].clone(), m0.clone(), m2.clone(), w[3].clone()]);
            let right = Polygon::new(vec![m0, w[1].clone(), w[2].clone(), m2]);
            let l = square;
            let r = polygons.len();
            polygons[l] = left;
            polygons.push(right);
            // sides i + 1 and i + 3 of the old square move to the halves
            let side_next = EdgeRef::new(square, (i + 1) % 4);
            let side_prev = EdgeRef::new(square, (i + 3) % 4);
            let remap = |e: EdgeRef| {
                if e == side_next {
                    EdgeRef::new(r, 1)
                } else if e == side_prev {
                    EdgeRef::new(l, 3)
                } else {
                    e
                }
            };
            for g in gluings.iter_mut() {
                g.a = remap(g.a);
                g.b = remap(g.b);
            }
            gluings.push(Gluing::point_reflection((l, 0), (r, 0)));
            gluings.push(Gluing::point_reflection((l, 2), (r, 2)));
            gluings.push(Gluing::translation((l, 1), (r, 3)));
        } else {
            gluings.push(Gluing {
                a,
                b: y,
                kind: GluingKind::PointReflection,
            });
            gluings.push(Gluing {
                a: b,
                b: x,
                kind: GluingKind::PointReflection,
            });
        }
        let out = Surface::new(polygons, gluings, SurfaceKind::HalfTranslation);
        let v = out.validate();
        if !v.is_empty() {
            return Err(SurfaceError::Invalid(v));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::unit_torus;
    use super::*;

    #[test]
    fn torus_becomes_pillowcase() {
        let t = unit_torus();
        for axis in [Axis::Horizontal, Axis::Vertical] {
            let p = t.cut_and_reglue_square(0, axis).unwrap();
            assert_eq!(p.kind(), SurfaceKind::HalfTranslation);
            assert_eq!(p.genus().unwrap(), 0);
            let c = p.vertex_cycles().unwrap();
            assert_eq!(c.len(), 4);
            assert!(c.iter().all(|c| c.angle_in_pi == 1));
            assert_eq!(p.area(), Scalar::one());
        }
    }

    #[test]
    fn rejects_non_quadrilateral() {
        let t = unit_torus();
        assert!(t.cut_and_reglue_square(3, Axis::Horizontal).is_err());
    }
}
