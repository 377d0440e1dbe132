//! Randomized invariants across the modules.

use proptest::prelude::*;

use flatsurf_core::constructions::{
    ay_surface, origami_check, torus, trapezoid_family, TrapezoidShape,
};
use flatsurf_core::delaunay::{delaunay_triangulation, Decomposition};
use flatsurf_core::isodelaunay::{cell_at, wall_of_hinge, HPoint, HingeLocus};
use flatsurf_core::numeric::{incircle_determinant, Matrix2, Scalar, ALPHA_F64};
use flatsurf_core::symmetry::{group_summary, isometries};

fn shear(p: i64, q: i64) -> Matrix2 {
    Matrix2::new(
        Scalar::one(),
        Scalar::ratio(p, q),
        Scalar::zero(),
        Scalar::one(),
    )
}

fn trapezoid() -> impl Strategy<Value = TrapezoidShape> {
    (1i64..6, 0i64..6, 1i64..6, 1i64..5)
        .prop_map(|(b, extra, hp, hq)| TrapezoidShape::new(b, b + extra, Scalar::ratio(hp, hq)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn shearing_preserves_topology_and_area(p in -6i64..6, q in 1i64..5) {
        let s = ay_surface();
        let t = s.apply_linear(&shear(p, q)).unwrap();
        prop_assert!(t.is_valid());
        prop_assert_eq!(t.genus().unwrap(), 3);
        prop_assert_eq!(t.area(), s.area());
        let angles: Vec<u32> = t.vertex_cycles().unwrap().iter().map(|c| c.angle_in_pi).collect();
        prop_assert_eq!(angles, vec![6, 6]);
    }

    #[test]
    fn delaunay_after_shear(p in -6i64..6, q in 1i64..5) {
        let s = ay_surface().apply_linear(&shear(p, q)).unwrap();
        let t = delaunay_triangulation(&s).unwrap();
        prop_assert!(t.is_delaunay());
        prop_assert!(t.is_exact());
        // Euler characteristic of a genus 3 surface with two vertices
        prop_assert_eq!(t.num_vertices() as i64 - t.num_edges() as i64 + t.num_triangles() as i64, -4);
        let d = Decomposition::from_triangulation(&t).unwrap();
        prop_assert_eq!(d.surface.area(), s.area());
    }

    #[test]
    fn isometries_form_a_group(shape in trapezoid()) {
        let s = trapezoid_family(&shape).unwrap();
        let g = isometries(&s).unwrap();
        let sum = group_summary(&g).unwrap();
        prop_assert!(sum.closed);
        prop_assert_eq!(sum.order, g.len());
        prop_assert!(sum.order >= 2, "τ is always present");
        for i in &g {
            prop_assert!(i.derivative.is_orthogonal(0.0));
        }
    }

    #[test]
    fn rational_trapezoids_are_origamis(shape in trapezoid(), p in -3i64..3) {
        let s = trapezoid_family(&shape).unwrap();
        let v = origami_check(&s);
        let degree = v.certificate().expect("rational coordinates").degree;
        // an integer shear maps ℤ² onto itself
        let t = s.apply_linear(&Matrix2::new(1, p, 0, 1)).unwrap();
        prop_assert_eq!(origami_check(&t).certificate().map(|c| c.degree), Some(degree));
    }

    #[test]
    fn walls_agree_with_the_direct_test(px in -3.0f64..3.0, py in 0.1f64..4.0) {
        let s = ay_surface().apply_linear(&shear(1, 3)).unwrap();
        let t = delaunay_triangulation(&s).unwrap();
        let z = HPoint::new(px, py).unwrap();
        let m = Matrix2::new(1.0, z.x, 0.0, z.y);
        for e in t.edge_representatives() {
            let h = t.hinge(e);
            let [a, d, b, c] = h.p.each_ref().map(|p| m.apply(p));
            let direct = incircle_determinant(&a, &d, &b, &c).to_f64();
            let scale = h.p.iter().map(|p| { let (u, v) = p.to_f64(); u * u + v * v }).fold(1.0, f64::max);
            if direct.abs() < 1e-9 * scale * scale * z.y.max(1.0).powi(4) {
                continue;
            }
            match wall_of_hinge(&h) {
                HingeLocus::Wall { wall, violated } => {
                    let v = wall.value(&z);
                    if v.abs() > 1e-9 {
                        prop_assert_eq!(v.signum() as i8 == violated, direct > 0.0);
                    }
                }
                HingeLocus::Always => prop_assert!(direct <= 0.0),
                HingeLocus::Never => prop_assert!(direct > 0.0),
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn cells_contain_their_points(x in -1.5f64..1.5, y in 0.3f64..3.0) {
        let s = ay_surface();
        let z = HPoint::new(x, y).unwrap();
        let c = cell_at(&s, z).unwrap();
        prop_assert!(c.contains(&c.sample));
        prop_assert!(c.walls().iter().all(|w| w.geodesic().is_some()));
    }

    #[test]
    fn cell_hash_is_invariant_under_the_veech_scaling(x in -1.5f64..1.5, y in 0.3f64..3.0) {
        let s = ay_surface();
        let z = HPoint::new(x, y).unwrap();
        let c = cell_at(&s, z).unwrap();
        // diag(1/α, α) acts on the parameter as z ↦ z/α²
        let scaled = cell_at(&s, c.sample.scale(1.0 / (ALPHA_F64 * ALPHA_F64))).unwrap();
        let mirrored = cell_at(&s, c.sample.mirror()).unwrap();
        prop_assert_eq!(scaled.hash, c.hash);
        prop_assert_eq!(mirrored.hash, c.hash);
    }

    #[test]
    fn hyperbolic_distance_is_invariant(x in -3.0f64..3.0, y in 0.1f64..3.0, u in -3.0f64..3.0, v in 0.1f64..3.0, k in 0.1f64..10.0) {
        let (a, b) = (HPoint::new(x, y).unwrap(), HPoint::new(u, v).unwrap());
        let d = a.distance(&b);
        prop_assert!((a.scale(k).distance(&b.scale(k)) - d).abs() < 1e-9 * (1.0 + d));
        prop_assert!((a.mirror().distance(&b.mirror()) - d).abs() < 1e-12 * (1.0 + d));
    }

    #[test]
    fn torus_cells_have_three_walls(x in -2.0f64..2.0, y in 0.2f64..3.0) {
        let c = cell_at(&torus(), HPoint::new(x, y).unwrap()).unwrap();
        prop_assert_eq!(c.walls().len(), 3);
    }
}
