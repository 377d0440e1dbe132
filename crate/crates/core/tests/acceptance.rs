//! Acceptance checks, one line per criterion. Runs without the test
//! harness so that every line is printed; the process fails if any check
//! fails.

use std::time::{Duration, Instant};

use num_complex::Complex64;

use flatsurf_core::constructions::{
    ay_surface, cells, origami_check, trapezoid_family, OrigamiVerdict, TrapezoidShape,
};
use flatsurf_core::delaunay::{congruent, CellShape, Decomposition};
use flatsurf_core::isodelaunay::{
    cell_at, explore, wall_of_hinge, walls_through, HPoint, HingeLocus,
};
use flatsurf_core::numeric::{incircle_determinant, Matrix2, Scalar, ScalarMode, Vec2, ALPHA_F64};
use flatsurf_core::periods::{
    a_from_s, ay_ratios, induced_q_coefficient, phi_map, segment_integrals, shape_ratios,
    silhol_ratio_with, solve_t_rectangle, solve_tu, CurveA, CurveS, CurveTU, QuadratureConfig,
    SilholOptions, SilholPath, SolverConfig, SpherePoint,
};
use flatsurf_core::surface::{Axis, SurfaceKind};
use flatsurf_core::symmetry::{
    affine_equivalent, compose, element_order, fixed_points, group_summary, isometries, Location,
    Orientation,
};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn c1_ay_invariants() -> Check {
    let s = ay_surface();
    ensure(
        s.mode() == ScalarMode::Cubic,
        "AY is not in exact ℚ(α) coordinates",
    )?;
    let g = s.genus().map_err(err)?;
    let cones = s.vertex_cycles().map_err(err)?;
    let angles: Vec<u32> = cones.iter().map(|c| c.angle_in_pi).collect();
    ensure(g == 3, format!("genus {g}"))?;
    ensure(angles == [6, 6], format!("cone angles {angles:?} (in π)"))?;
    Ok("genus 3, cone angles 6π 6π".into())
}

fn c2_delaunay_cells() -> Check {
    let d = Decomposition::of_surface(&ay_surface()).map_err(err)?;
    ensure(d.surface.is_exact(), "decomposition is not exact")?;
    let census = d.census();
    let cells = d.cells();
    ensure(cells.len() == 6, format!("{} cells", cells.len()))?;
    let squares: Vec<usize> = (0..6)
        .filter(|&i| census.shapes[i] == CellShape::Square)
        .collect();
    let traps: Vec<usize> = (0..6)
        .filter(|&i| census.shapes[i] == CellShape::IsoscelesTrapezoid)
        .collect();
    ensure(squares.len() == 2 && traps.len() == 4, census.summary())?;
    ensure(
        congruent(&cells[squares[0]], &cells[squares[1]]),
        "squares are not isometric",
    )?;
    ensure(
        traps
            .iter()
            .all(|&i| congruent(&cells[traps[0]], &cells[i])),
        "trapezoids are not isometric",
    )?;
    // the two squares are mirror images, so match the side up to the
    // symmetries of the coordinate cross
    let a = Scalar::alpha();
    let a2 = &a * &a;
    for &i in &squares {
        let found = cells[i].edges().iter().all(|e| {
            let (x, y) = (e.x.abs(), e.y.abs());
            (x == a2 && y == a) || (x == a && y == a2)
        });
        ensure(found, format!("square {i} does not have side (α², α)"))?;
    }
    let side = Vec2::new(a2.clone(), a.clone());
    ensure(
        squares.iter().any(|&i| cells[i].edges().contains(&side)),
        "no edge equal to (α², α)",
    )?;
    Ok("6 cells: 2 isometric squares with side (α², α), 4 isometric isosceles trapezoids".into())
}

fn c3_pseudo_anosov() -> Check {
    let s = ay_surface();
    let a = Scalar::alpha();
    let psi = Matrix2::diag(a.recip().map_err(err)?, a);
    let w = affine_equivalent(&s, &s, &psi).map_err(err)?;
    ensure(w.is_some(), "no witness for diag(1/α, α)")?;
    let none = affine_equivalent(&s, &s, &Matrix2::diag(2, 1)).map_err(err)?;
    ensure(none.is_none(), "diag(2, 1) was accepted")?;
    Ok("diag(1/α, α) has a witness, diag(2, 1) has none".into())
}

fn c4_symmetry_group() -> Check {
    let s = ay_surface();
    let g = isometries(&s).map_err(err)?;
    let sum = group_summary(&g).map_err(err)?;
    ensure(
        sum.order == 8 && sum.dihedral && sum.closed,
        format!("{sum:?}"),
    )?;
    ensure(g[0].is_identity(), "identity missing")?;
    let find = |name: &str| g.iter().find(|i| i.name() == name);
    let tau = find("τ").ok_or("τ missing")?;
    ensure(tau.derivative == Matrix2::diag(-1, -1), "τ is not −I")?;
    for name in ["σ₁", "σ₂"] {
        let sg = find(name).ok_or(format!("{name} missing"))?;
        ensure(
            element_order(sg).map_err(err)? == 2,
            format!("{name} is not an involution"),
        )?;
        ensure(
            fixed_points(sg).map_err(err)?.is_empty(),
            format!("{name} has fixed points"),
        )?;
        let d = &sg.derivative;
        ensure(
            *d == Matrix2::diag(1, -1) || *d == Matrix2::diag(-1, 1),
            format!("{name} derivative {d}"),
        )?;
    }
    for r in ["ρ₁", "ρ₂"] {
        for sg in ["σ₁", "σ₂"] {
            let p =
                compose(find(r).ok_or("ρ missing")?, find(sg).ok_or("σ missing")?).map_err(err)?;
            ensure(
                element_order(&p).map_err(err)? == 4,
                format!("{r}{sg} does not have order 4"),
            )?;
            ensure(
                p.orientation == Orientation::Preserving,
                format!("{r}{sg} reverses orientation"),
            )?;
        }
    }
    let f = fixed_points(tau).map_err(err)?;
    let cones = f
        .points
        .iter()
        .filter(|p| matches!(p, Location::Vertex { .. }))
        .count();
    ensure(
        f.points.len() == 8 && f.segments.is_empty(),
        format!("τ fixes {} points", f.points.len()),
    )?;
    ensure(cones == 2, format!("τ fixes {cones} cone points"))?;
    Ok("dihedral of order 8; τ fixes 6 regular points and 2 cone points".into())
}

fn c5_solver() -> Check {
    let sol = solve_tu(ay_ratios(), &SolverConfig::default()).map_err(err)?;
    let (t, u) = (sol.curve.t, sol.curve.u);
    ensure((t - 1.91709843377).abs() < 1e-8, format!("t = {t:.12}"))?;
    ensure((u - 2.07067976690).abs() < 1e-8, format!("u = {u:.12}"))?;
    let (r1, r2) = shape_ratios(sol.curve, &SolverConfig::default().quadrature).map_err(err)?;
    let (e1, e2) = ay_ratios();
    let res = (r1 - e1).abs().max((r2 - e2).abs());
    ensure(res < 1e-10, format!("residual {res:.2e}"))?;
    Ok(format!("t = {t:.11}, u = {u:.11}, residual {res:.1e}"))
}

fn c6_rectangle() -> Check {
    let q = QuadratureConfig::default();
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        // geometric samples across (1, 50)
        let t = 1.0 + 49f64.powf((k as f64 + 0.5) / 20.0);
        let t = t.min(49.9);
        let s = segment_integrals(CurveTU::new(t, 1.0).map_err(err)?, &q).map_err(err)?;
        worst = worst.max((s.j[2] / s.j[0] - 1.0).abs());
    }
    ensure(worst < 1e-9, format!("max |J3/J1 − 1| = {worst:.2e}"))?;
    let cfg = SolverConfig::default();
    for t0 in [1.5, 2.0, 4.0, 9.0] {
        let (r1, _) =
            shape_ratios(CurveTU::new(t0, 1.0).map_err(err)?, &cfg.quadrature).map_err(err)?;
        let sol = solve_t_rectangle(1.0 / r1, &cfg).map_err(err)?;
        let (r1b, _) = shape_ratios(sol.curve, &cfg.quadrature).map_err(err)?;
        ensure(
            (r1b - r1).abs() < 1e-8,
            format!("round trip at t = {t0}: {r1} vs {r1b}"),
        )?;
        ensure(
            (sol.curve.t - t0).abs() < 1e-8 * t0,
            format!("round trip at t = {t0} gives t = {}", sol.curve.t),
        )?;
    }
    Ok(format!(
        "max |J3/J1 − 1| = {worst:.1e}; μ round trips within 1e-8"
    ))
}

fn c7_parameter_maps() -> Check {
    let c = CurveTU::new(1.7, 2.4).map_err(err)?;
    let tu = c.t * c.u;
    let r = tu.sqrt();
    let at = |z: Complex64| phi_map(c, z.into());
    let near = |p: SpherePoint, w: Complex64| p.finite().is_some_and(|p| (p - w).norm() < 1e-12);
    ensure(
        near(at(Complex64::new(1.0, 0.0)), Complex64::new(0.0, 0.0)),
        "Φ(1) ≠ 0",
    )?;
    ensure(
        at(Complex64::new(-tu, 0.0)) == SpherePoint::Infinity,
        "Φ(−tu) ≠ ∞",
    )?;
    ensure(
        near(at(Complex64::new(0.0, r)), Complex64::new(-1.0, 0.0)),
        "Φ(i√tu) ≠ −1",
    )?;
    ensure(
        near(at(Complex64::new(0.0, -r)), Complex64::new(1.0, 0.0)),
        "Φ(−i√tu) ≠ 1",
    )?;
    let a = a_from_s(CurveS::new(Complex64::new(3f64.sqrt() / 2.0, 0.5)).map_err(err)?);
    ensure(a == 0.5, format!("a_from_s((√3+i)/2) = {a}"))?;
    let k = induced_q_coefficient(CurveTU::new(2.0, 0.5).map_err(err)?);
    ensure(
        k == Complex64::new(0.0, 0.0),
        format!("induced q coefficient at tu = 1 is {k}"),
    )?;
    Ok("Φ point checks, a_from_s = 0.5, k(tu = 1) = 0".into())
}

fn c8_silhol() -> Check {
    let q = QuadratureConfig::default();
    let mut notes = Vec::new();
    let mut failed = Vec::new();
    for im in [0.5, 2.0] {
        let r = silhol_ratio_with(
            CurveA::new(Complex64::new(0.0, im)).map_err(err)?,
            &q,
            &SilholOptions::default(),
        )
        .map_err(err)?;
        let rel = r.im.abs() / r.norm();
        notes.push(format!("a = {im}i: ratio {:.10} {:+.10}i", r.re, r.im));
        if rel >= 1e-8 {
            failed.push(format!("a = {im}i gives |Im|/|ratio| = {rel:.3e}"));
        }
    }
    let detour = SilholOptions {
        path: SilholPath::UpperDetour,
        subdivisions: 1,
    };
    let r = silhol_ratio_with(
        CurveA::new(Complex64::new(0.5, 0.0)).map_err(err)?,
        &q,
        &detour,
    )
    .map_err(err)?;
    if r.im.abs() <= 1e-4 {
        failed.push(format!("a = 0.5 gives |Im| = {:.3e}", r.im.abs()));
    }
    if failed.is_empty() {
        Ok(notes.join("; "))
    } else {
        Err(format!("{} ({})", failed.join("; "), notes.join("; ")))
    }
}

fn c9_genus_two() -> Check {
    let s = ay_surface()
        .cut_and_reglue_square(cells::S0, Axis::Horizontal)
        .map_err(err)?;
    ensure(
        s.kind() == SurfaceKind::HalfTranslation,
        "result is not a half-translation surface",
    )?;
    let g = s.genus().map_err(err)?;
    let angles: Vec<u32> = s
        .vertex_cycles()
        .map_err(err)?
        .iter()
        .map(|c| c.angle_in_pi)
        .collect();
    ensure(
        g == 2 && angles == [3, 3, 3, 3],
        format!("genus {g}, angles {angles:?} (in π)"),
    )?;
    Ok("genus 2, cone angles 3π 3π 3π 3π".into())
}

fn c10_isodelaunay() -> Check {
    let s = ay_surface();
    let a2 = ALPHA_F64 * ALPHA_F64;
    let z0 = HPoint::new(0.0, 1.0).map_err(err)?;
    // the ball of radius ln(1/α²) about i meets the axis in [α², 1/α²]
    let t = explore(&s, z0, (1.0 / a2).ln()).map_err(err)?;
    let mut own: Vec<u64> = t.cells.iter().map(|c| c.hash).collect();
    let mut mirrored = Vec::new();
    let mut scaled = Vec::new();
    for c in &t.cells {
        let m = cell_at(&s, c.sample.mirror()).map_err(err)?;
        ensure(
            t.find(&m.key).is_some(),
            format!("mirror image of the cell at {} not explored", c.sample),
        )?;
        mirrored.push(m.hash);
        scaled.push(cell_at(&s, c.sample.scale(1.0 / a2)).map_err(err)?.hash);
    }
    own.sort_unstable();
    mirrored.sort_unstable();
    scaled.sort_unstable();
    ensure(own == mirrored, "hash multiset changes under x ↦ −x")?;
    ensure(own == scaled, "hash multiset changes under z ↦ z/α²")?;
    let at_i = walls_through(&s, z0, 1e-7).map_err(err)?.len();
    let at_ia = walls_through(&s, HPoint::new(0.0, 1.0 / ALPHA_F64).map_err(err)?, 1e-7)
        .map_err(err)?
        .len();
    ensure(at_i == 3, format!("{at_i} walls through i"))?;
    ensure(at_ia == 2, format!("{at_ia} walls through i/α"))?;
    // every wall of every explored triangulation against the direct test
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut uniform = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut walls = 0;
    for c in &t.cells {
        let tri = c.triangulation();
        for h in tri.edge_representatives() {
            let hinge = tri.hinge(h);
            let HingeLocus::Wall { wall, violated } = wall_of_hinge(&hinge) else {
                continue;
            };
            walls += 1;
            for _ in 0..100 {
                let z = HPoint::new(8.0 * uniform() - 4.0, 0.05 + 4.0 * uniform()).map_err(err)?;
                let v = wall.value(&z);
                if v.abs() < 1e-9 {
                    continue;
                }
                let m = Matrix2::new(1.0, z.x, 0.0, z.y);
                let [p0, p1, p2, p3] = hinge.p.each_ref().map(|p| m.apply(p));
                let direct = incircle_determinant(&p0, &p1, &p2, &p3).to_f64() > 0.0;
                ensure(
                    direct == (v.signum() as i8 == violated),
                    format!("wall {wall} disagrees at {z}"),
                )?;
            }
        }
    }
    Ok(format!(
        "{} cells, mirror and z/α² invariant; 3 walls at i, 2 at i/α; {walls} walls pass the direct test",
        t.cells.len()
    ))
}

fn c11_origami() -> Check {
    // rectangle member with width/height 2μ = 2
    let rect = trapezoid_family(&TrapezoidShape::new(1, 1, Scalar::ratio(1, 2))).map_err(err)?;
    let cert = match origami_check(&rect) {
        OrigamiVerdict::Origami(c) => c,
        OrigamiVerdict::NotOrigami(w) => return Err(format!("rectangle rejected: {}", w.reason)),
    };
    let witness = match origami_check(&ay_surface()) {
        OrigamiVerdict::NotOrigami(w) => w,
        OrigamiVerdict::Origami(_) => return Err("AY accepted as an origami".into()),
    };
    let (x, y) = witness
        .incommensurable
        .ok_or("AY rejected without an incommensurability witness")?;
    Ok(format!(
        "rectangle covers the torus with degree {}; AY: {} (coordinates {x} and {y})",
        cert.degree, witness.reason
    ))
}

fn main() {
    type Criterion = (&'static str, fn() -> Check, Duration);
    let criteria: [Criterion; 11] = [
        ("AY invariants", c1_ay_invariants, Duration::from_secs(1)),
        (
            "Delaunay decomposition of AY",
            c2_delaunay_cells,
            Duration::from_secs(5),
        ),
        (
            "pseudo-Anosov invariance",
            c3_pseudo_anosov,
            Duration::from_secs(10),
        ),
        ("symmetry group", c4_symmetry_group, Duration::from_secs(10)),
        ("integral solver", c5_solver, Duration::from_secs(30)),
        ("rectangle identity", c6_rectangle, Duration::from_secs(30)),
        ("parameter maps", c7_parameter_maps, Duration::from_secs(1)),
        ("Silhol ratio", c8_silhol, Duration::from_secs(10)),
        ("genus-2 construction", c9_genus_two, Duration::from_secs(1)),
        (
            "iso-Delaunay tessellation",
            c10_isodelaunay,
            Duration::from_secs(300),
        ),
        ("origami checks", c11_origami, Duration::from_secs(5)),
    ];
    let mut failures = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let result = match result {
            Ok(m) if took > *limit => Err(format!("{m}; took {took:.2?}, limit {limit:?}")),
            r => r,
        };
        match result {
            Ok(m) => println!("criterion {:>2} PASS  {name} [{took:.2?}]: {m}", i + 1),
            Err(m) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name} [{took:.2?}]: {m}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
