use flatsurf_core::periods::{
    segment_integrals, shape_ratios, solve_t_rectangle, solve_tu, CurveTU, QuadratureConfig,
    SolverConfig,
};

#[test]
fn inverse_problem_round_trips_on_a_grid() {
    let cfg = SolverConfig::default();
    let ts = [1.2, 1.9, 2.6, 3.3, 4.0];
    let us = [0.5, 1.375, 2.25, 3.125, 4.0];
    for &t in &ts {
        for &u in &us {
            let r = shape_ratios(CurveTU::new(t, u).unwrap(), &cfg.quadrature).unwrap();
            let s = solve_tu(r, &cfg).unwrap_or_else(|e| panic!("({t}, {u}): {e}"));
            assert!(
                (s.curve.t - t).abs() < 1e-7 && (s.curve.u - u).abs() < 1e-7,
                "({t}, {u}) came back as {:?}",
                s.curve
            );
        }
    }
}

#[test]
fn bases_agree_on_the_rectangle_line() {
    let q = QuadratureConfig::default();
    for k in 0..20 {
        // geometric sample of (1, 50)
        let t = 1.0 + 49.0f64.powf((k as f64 + 0.5) / 20.0);
        let t = t.min(49.9);
        let s = segment_integrals(CurveTU::new(t, 1.0).unwrap(), &q).unwrap();
        assert!((s.j[2] / s.j[0] - 1.0).abs() < 1e-9, "t = {t}");
    }
}

#[test]
fn halving_the_tolerance_stays_within_the_estimate() {
    let coarse = QuadratureConfig {
        target_error: 1e-10,
        max_level: 12,
    };
    let fine = QuadratureConfig {
        target_error: 5e-11,
        max_level: 12,
    };
    for (t, u) in [(1.917, 2.07), (3.0, 0.6), (1.3, 3.5)] {
        let c = CurveTU::new(t, u).unwrap();
        let a = segment_integrals(c, &coarse).unwrap();
        let b = segment_integrals(c, &fine).unwrap();
        for i in 0..3 {
            assert!(
                (a.j[i] - b.j[i]).abs() <= a.error[i].max(1e-15),
                "J{} at ({t}, {u})",
                i + 1
            );
        }
    }
}

#[test]
fn rectangle_solver_round_trips_and_is_monotone() {
    let cfg = SolverConfig::default();
    let mut last = f64::INFINITY;
    for t0 in [1.5, 2.0, 4.0, 9.0] {
        let (r1, _) = shape_ratios(CurveTU::new(t0, 1.0).unwrap(), &cfg.quadrature).unwrap();
        let mu = 1.0 / r1;
        let s = solve_t_rectangle(mu, &cfg).unwrap();
        assert!((s.curve.t - t0).abs() < 1e-8, "t₀ = {t0}: {:?}", s);
        assert!(s.residual < 1e-10);
        // larger t, smaller μ
        assert!(mu < last);
        last = mu;
    }
}
