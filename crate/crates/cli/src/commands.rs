use std::fs;
use std::io::{self, Read, Write};

use num_complex::Complex64;

use flatsurf_core::constructions::{
    ay_prime, ay_surface, escalator, origami_check, parallelogram_family, torus, trapezoid_family,
    OrigamiVerdict, ParallelogramShape, TrapezoidShape,
};
use flatsurf_core::delaunay::{render_net_svg, CellShape, Decomposition};
use flatsurf_core::isodelaunay::{explore_with, render_svg, ExploreOptions, HPoint, Viewport};
use flatsurf_core::numeric::{Matrix2, Scalar, ScalarMode, Vec2};
use flatsurf_core::periods::{
    ay_ratios, segment_integrals, shape_ratios, silhol_ratio_with, solve_t_rectangle, solve_tu,
    CurveA, CurveTU, QuadratureConfig, SilholOptions, SilholPath, SolverConfig,
};
use flatsurf_core::surface::{read_surface, write_surface, Axis, Surface};
use flatsurf_core::symmetry::{fixed_points, group_summary, isometries};

use crate::{BuildArgs, CliError, Command, Input, PeriodsCommand, Shape};

/// Environment variable holding the number of worker threads.
pub const THREADS_VAR: &str = "FLATSURF_THREADS";

type Res<T> = Result<T, CliError>;

fn usage(m: impl Into<String>) -> CliError {
    CliError::Usage(m.into())
}

fn read_input(input: &Input) -> Res<Surface> {
    let text = match input.file.as_deref() {
        None | Some("-") => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        }
        Some(path) => {
            fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))?
        }
    };
    Ok(read_surface(&text)?)
}

fn write_to(path: Option<&str>, text: &str) -> Res<()> {
    match path {
        None | Some("-") => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
        Some(p) => fs::write(p, text)?,
    }
    Ok(())
}

fn write_surface_to(path: Option<&str>, s: &Surface) -> Res<()> {
    write_to(path, &write_surface(s)?)
}

/// Scalars on the command line: `[c0,c1,c2]` in ℚ(α), a decimal point or
/// exponent makes a float, anything else is a rational `p/q`.
fn parse_scalar(s: &str) -> Res<Scalar> {
    let t = s.trim();
    let mode = if t.starts_with('[') {
        ScalarMode::Cubic
    } else if t.contains(['.', 'e', 'E']) {
        ScalarMode::Float
    } else {
        ScalarMode::Rational
    };
    Scalar::parse(t, mode).map_err(|e| usage(format!("bad number {s:?}: {e}")))
}

/// Splits at commas outside brackets, so `[1,0,0],0,0,1` has four parts.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

fn required(v: &Option<String>, name: &str) -> Res<Scalar> {
    match v {
        Some(s) => parse_scalar(s),
        None => Err(usage(format!("--{name} is required for this shape"))),
    }
}

/// Entries rounded to floats, which is exact for the signed permutation
/// matrices that occur as derivatives of isometries.
fn approx_matrix(m: &Matrix2) -> String {
    let [[a, b], [c, d]] = m.to_f64();
    format!("[[{a}, {b}], [{c}, {d}]]")
}

fn pi_multiple(n: u32) -> String {
    match n {
        1 => "π".into(),
        n => format!("{n}π"),
    }
}

fn solver_output(c: &CurveTU) -> String {
    format!("t = {:.11}\nu = {:.11}\n", c.t, c.u)
}

pub fn run(cmd: Command) -> Res<()> {
    match cmd {
        Command::Build(a) => build(&a),
        Command::Info(input) => {
            let s = read_input(&input)?;
            let cones = s.vertex_cycles()?;
            let angles: Vec<String> = cones.iter().map(|c| pi_multiple(c.angle_in_pi)).collect();
            let area = s.area();
            let text = format!(
                "genus {}, cone angles {}\narea {} ≈ {}\n{} surface, {} polygons, {} gluings\n",
                s.genus()?,
                angles.join(" "),
                area,
                area.to_f64(),
                s.kind().name(),
                s.polygons().len(),
                s.gluings().len()
            );
            write_to(None, &text)
        }
        Command::Delaunay(a) => {
            let s = read_input(&a.input)?;
            let d = Decomposition::of_surface(&s)?;
            let census = d.census();
            let mut text = coarse_census(&census.shapes) + "\n";
            if !a.census {
                text.push_str(&format!(
                    "{} cells: {}\n",
                    census.shapes.len(),
                    census.summary()
                ));
                for (i, p) in d.surface.polygons().iter().enumerate() {
                    let edges: Vec<String> = p.edges().iter().map(Vec2::to_string).collect();
                    text.push_str(&format!(
                        "cell {i}: {}, area {}, edges {}\n",
                        census.shapes[i],
                        census.areas[i],
                        edges.join(" ")
                    ));
                }
                let classes: Vec<String> = census
                    .congruence_classes
                    .iter()
                    .map(|c| format!("{c:?}"))
                    .collect();
                text.push_str(&format!("congruence classes {}\n", classes.join(" ")));
            }
            if let Some(path) = &a.svg {
                write_to(Some(path), &render_net_svg(&d.surface))?;
            }
            match &a.out {
                Some(path) => {
                    write_surface_to(Some(path), &d.surface)?;
                    write_to(None, &text)
                }
                None => write_to(None, &text),
            }
        }
        Command::Isometries(input) => {
            let s = read_input(&input)?;
            let g = isometries(&s)?;
            let sum = group_summary(&g)?;
            let mut text = format!(
                "order {}\nelement orders {:?}\nabelian {}, dihedral {}\n",
                sum.order, sum.element_orders, sum.abelian, sum.dihedral
            );
            for iso in &g {
                let f = fixed_points(iso)?;
                let fixed = if f.everything {
                    "fixes everything".to_string()
                } else {
                    format!(
                        "{} fixed points, {} fixed segments, {} components",
                        f.points.len(),
                        f.segments.len(),
                        f.components
                    )
                };
                text.push_str(&format!(
                    "{}: {}, derivative {}, order {}; {}\n",
                    iso.name(),
                    iso.orientation.name(),
                    approx_matrix(&iso.derivative),
                    flatsurf_core::symmetry::element_order(iso)?,
                    fixed
                ));
            }
            write_to(None, &text)
        }
        Command::Apply(a) => {
            let entries: Vec<Scalar> = split_top_level(&a.matrix)
                .into_iter()
                .map(parse_scalar)
                .collect::<Res<_>>()?;
            let [m00, m01, m10, m11]: [Scalar; 4] = entries
                .try_into()
                .map_err(|_| usage("--matrix needs four comma-separated entries"))?;
            let s = read_input(&a.input)?;
            let out = s.apply_linear(&Matrix2::new(m00, m01, m10, m11))?;
            write_surface_to(a.output.out.as_deref(), &out)
        }
        Command::SolveAy(a) => {
            let cfg = SolverConfig {
                tolerance: a.tolerance,
                ..Default::default()
            };
            let sol = solve_tu(ay_ratios(), &cfg)?;
            let text = solver_output(&sol.curve)
                + &format!(
                    "residual {:.3e}\niterations {}\n",
                    sol.residual, sol.iterations
                );
            write_to(None, &text)
        }
        Command::SolveRect(a) => {
            let cfg = SolverConfig {
                tolerance: a.tolerance,
                ..Default::default()
            };
            let sol = solve_t_rectangle(a.mu, &cfg)?;
            let text = solver_output(&sol.curve) + &format!("residual {:.3e}\n", sol.residual);
            write_to(None, &text)
        }
        Command::Periods(PeriodsCommand::Ratios { t, u }) => {
            let c = CurveTU::new(t, u)?;
            let q = QuadratureConfig::default();
            let s = segment_integrals(c, &q)?;
            let mut text = String::new();
            for k in 0..3 {
                text.push_str(&format!(
                    "J{} = {} (error {:.1e})\n",
                    k + 1,
                    s.j[k],
                    s.error[k]
                ));
            }
            text.push_str(&format!(
                "J2/J1 = {}\nJ3/J1 = {}\n",
                s.j[1] / s.j[0],
                s.j[2] / s.j[0]
            ));
            write_to(None, &text)
        }
        Command::Periods(PeriodsCommand::Silhol {
            a_real,
            a_imag,
            detour,
        }) => {
            let c = CurveA::new(Complex64::new(a_real, a_imag))?;
            let opts = SilholOptions {
                path: if detour {
                    SilholPath::UpperDetour
                } else {
                    SilholPath::Straight
                },
                ..Default::default()
            };
            let r = silhol_ratio_with(c, &QuadratureConfig::default(), &opts)?;
            let text = format!(
                "ratio = {} {:+}i\n|Im|/|ratio| = {:.3e}\n",
                r.re,
                r.im,
                r.im.abs() / r.norm()
            );
            write_to(None, &text)
        }
        Command::OrigamiCheck(input) => {
            let s = read_input(&input)?;
            let text = match origami_check(&s) {
                OrigamiVerdict::Origami(c) => format!(
                    "origami: degree {} over the torus with lattice basis {} {}\n",
                    c.degree, c.basis[0], c.basis[1]
                ),
                OrigamiVerdict::NotOrigami(w) => {
                    let mut t = format!("not an origami: {}\nrank {}\n", w.reason, w.rank);
                    if let Some((x, y)) = &w.incommensurable {
                        t.push_str(&format!("incommensurable coordinates {x} and {y}\n"));
                    }
                    t
                }
            };
            write_to(None, &text)
        }
        Command::Genus2(a) => {
            let axis = Axis::from_name(&a.axis)
                .ok_or_else(|| usage(format!("unknown axis {:?}", a.axis)))?;
            let s = read_input(&a.input)?;
            if a.square >= s.polygons().len() {
                return Err(usage(format!("no polygon {}", a.square)));
            }
            let out = s.cut_and_reglue_square(a.square, axis)?;
            write_surface_to(a.output.out.as_deref(), &out)
        }
        Command::Tessellate(a) => {
            let threads = threads()?;
            let s = read_input(&a.input)?;
            let z0 = HPoint::new(a.center_x, a.center_y).map_err(|e| usage(e.to_string()))?;
            let opts = ExploreOptions {
                budget: a.budget,
                threads,
            };
            let t = explore_with(&s, z0, a.radius, &opts)?;
            if let Some(p) = &a.svg {
                write_to(Some(p), &render_svg(&t, &Viewport::around(&t)))?;
            }
            if let Some(p) = &a.json {
                write_to(Some(p), &t.to_json())?;
            }
            let mut hashes: Vec<u64> = t.cells.iter().map(|c| c.hash).collect();
            hashes.sort_unstable();
            hashes.dedup();
            let text = format!(
                "{} cells ({} classes), {} walls, {} adjacencies\n",
                t.cells.len(),
                hashes.len(),
                t.walls().len(),
                t.adjacency.len()
            );
            write_to(None, &text)
        }
    }
}

/// Counts by shape with trapezoids and parallelograms lumped together,
/// e.g. `2 squares, 4 trapezoids`.
fn coarse_census(shapes: &[CellShape]) -> String {
    type Group = (&'static str, fn(&CellShape) -> bool);
    let groups: [Group; 7] = [
        ("triangle", |s| *s == CellShape::Triangle),
        ("square", |s| *s == CellShape::Square),
        ("rectangle", |s| *s == CellShape::Rectangle),
        ("rhombus", |s| *s == CellShape::Rhombus),
        ("parallelogram", |s| *s == CellShape::Parallelogram),
        ("trapezoid", CellShape::is_trapezoid),
        ("other polygon", |s| {
            matches!(s, CellShape::Quadrilateral | CellShape::Polygon(_))
        }),
    ];
    groups
        .iter()
        .filter_map(|(name, pred)| {
            let n = shapes.iter().filter(|s| pred(s)).count();
            match n {
                0 => None,
                1 => Some(format!("1 {name}")),
                n if name.ends_with('s') => Some(format!("{n} {name}es")),
                n => Some(format!("{n} {name}s")),
            }
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn threads() -> Res<usize> {
    match std::env::var(THREADS_VAR) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(usage(format!(
                "{THREADS_VAR} must be a positive integer, got {v:?}"
            ))),
        },
        Err(_) => Ok(std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)),
    }
}

fn build(a: &BuildArgs) -> Res<()> {
    let s = match a.shape {
        Shape::Ay => ay_surface(),
        Shape::AyPrime => ay_prime(),
        Shape::Torus => torus(),
        Shape::Escalator => escalator(),
        Shape::Trapezoid => {
            let shape = TrapezoidShape::new(
                required(&a.b, "b")?,
                required(&a.big_b, "B")?,
                required(&a.h, "h")?,
            );
            trapezoid_family(&shape)?
        }
        Shape::Parallelogram => {
            let side1 = Vec2::new(required(&a.s1x, "s1x")?, required(&a.s1y, "s1y")?);
            let side2 = Vec2::new(required(&a.s2x, "s2x")?, required(&a.s2y, "s2y")?);
            parallelogram_family(&ParallelogramShape::new(side1, side2))?
        }
        Shape::Rectangle => {
            // unit width and height 1/(2μ); from t, 1/μ = J2/J1 on u = 1
            let h = match (&a.mu, a.t) {
                (Some(mu), None) => {
                    let mu = parse_scalar(mu)?;
                    if !mu.is_positive() {
                        return Err(usage("--mu must be positive"));
                    }
                    (&mu * &Scalar::int(2)).recip()?
                }
                (None, Some(t)) => {
                    let (r1, _) =
                        shape_ratios(CurveTU::new(t, 1.0)?, &QuadratureConfig::default())?;
                    Scalar::Float(r1 / 2.0)
                }
                _ => return Err(usage("rectangle needs exactly one of --mu and --t")),
            };
            trapezoid_family(&TrapezoidShape::new(1, 1, h))?
        }
    };
    write_surface_to(a.output.out.as_deref(), &s)
}
