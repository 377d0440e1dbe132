//! The iso-Delaunay tessellation of the upper half-plane.
//!
//! The point `z = x + iy` stands for the surface `M_z·S` with
//! `M_z = [[1, x], [0, y]]`, so `z = i` is `S` itself. Every linear image of
//! a triangulation of `S` is a triangulation of `M_z·S` with the same
//! combinatorics, and for a hinge with offsets `v` from its fourth point the
//! lifted in-circle determinant of the image equals
//!
//! ```text
//! y · ( det[vx, vy, vy²]·|z|² + 2·det[vx, vy, vx·vy]·x + det[vx, vy, vx²] )
//! ```
//!
//! Its zero set is a geodesic of H (a wall). The set of `z` where a fixed
//! triangulation is Delaunay is an intersection of hyperbolic half-planes,
//! and these cells tile H.
//!
//! All triangulations stay in the chart of `S`; only the in-circle test
//! looks at `z`. A cell therefore knows its triangulation exactly; wall
//! coefficients are expanded in floating point from the hinge vectors, with
//! relative noise below 1e-13 flushed to zero.

mod svg;

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::delaunay::{next, prev, DelaunayError, Hinge, Triangulation};
use crate::numeric::Vec2;
use crate::surface::Surface;

pub use svg::{render_svg, Viewport};

/// Default cell budget of [`explore`].
pub const CELL_BUDGET: usize = 100_000;

/// Normalized violations at or below this count as Delaunay.
const FLIP_TOL: f64 = 1e-12;

/// Parameter range used for geodesic arc length; `e^40` is far beyond any
/// coordinate of interest.
const S_MAX: f64 = 40.0;

#[derive(Debug, Error)]
pub enum IsoDelaunayError {
    #[error("{0}")]
    Domain(String),
    #[error("cell budget of {0} exceeded")]
    Budget(usize),
    #[error("no cell found at {0}: it stays on a wall after perturbation")]
    OnWall(HPoint),
    #[error(transparent)]
    Delaunay(#[from] DelaunayError),
}

/// A point of the upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
}

impl HPoint {
    pub fn new(x: f64, y: f64) -> Result<Self, IsoDelaunayError> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(IsoDelaunayError::Domain(format!(
                "({x}, {y}) is not in the upper half-plane"
            )));
        }
        Ok(HPoint { x, y })
    }

    pub fn abs2(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    /// `x ↦ −x`.
    pub fn mirror(&self) -> HPoint {
        HPoint {
            x: -self.x,
            y: self.y,
        }
    }

    pub fn scale(&self, k: f64) -> HPoint {
        HPoint {
            x: self.x * k,
            y: self.y * k,
        }
    }

    pub fn distance(&self, o: &HPoint) -> f64 {
        let dx = self.x - o.x;
        let dy = self.y - o.y;
        (1.0 + (dx * dx + dy * dy) / (2.0 * self.y * o.y)).acosh()
    }
}

impl fmt::Display for HPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}i", self.x, self.y)
    }
}

/// The locus `a(x² + y²) + bx + c = 0`, scaled so that the largest
/// coefficient has absolute value 1 and the first nonzero one is positive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Wall {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// A geodesic of H in arc-length parametrization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Geodesic {
    /// `z(s) = m + r·tanh s + i·r·sech s`.
    Circle { m: f64, r: f64 },
    /// `z(s) = x0 + i·e^s`.
    Line { x0: f64 },
}

impl Geodesic {
    pub fn point(&self, s: f64) -> HPoint {
        match *self {
            Geodesic::Circle { m, r } => HPoint {
                x: m + r * s.tanh(),
                y: r / s.cosh(),
            },
            Geodesic::Line { x0 } => HPoint { x: x0, y: s.exp() },
        }
    }

    /// Arc-length parameter of a point on the geodesic.
    pub fn param(&self, z: &HPoint) -> f64 {
        match *self {
            Geodesic::Circle { m, r } => ((z.x - m) / r).clamp(-1.0, 1.0).atanh(),
            Geodesic::Line { .. } => z.y.ln(),
        }
    }
}

impl Wall {
    /// Coefficients below `NOISE` relative to the largest are rounding
    /// residue of exact zeros and are dropped.
    fn normalized(a: f64, b: f64, c: f64) -> Option<(Wall, f64)> {
        const NOISE: f64 = 1e-13;
        let m = a.abs().max(b.abs()).max(c.abs());
        if m == 0.0 || !m.is_finite() {
            return None;
        }
        let clean = |v: f64| if v.abs() <= NOISE * m { 0.0 } else { v };
        let (a, b, c) = (clean(a), clean(b), clean(c));
        let first = [a, b, c].into_iter().find(|v| *v != 0.0).expect("nonzero");
        let k = first.signum() / m;
        Some((
            // adding 0.0 turns −0.0 into 0.0
            Wall {
                a: a * k + 0.0,
                b: b * k + 0.0,
                c: c * k + 0.0,
            },
            first.signum(),
        ))
    }

    pub fn value(&self, z: &HPoint) -> f64 {
        self.a * z.abs2() + self.b * z.x + self.c
    }

    /// The geodesic, when the locus meets H.
    pub fn geodesic(&self) -> Option<Geodesic> {
        if self.a != 0.0 {
            let m = -self.b / (2.0 * self.a);
            let r2 = m * m - self.c / self.a;
            (r2 > 0.0).then(|| Geodesic::Circle { m, r: r2.sqrt() })
        } else if self.b != 0.0 {
            Some(Geodesic::Line {
                x0: -self.c / self.b,
            })
        } else {
            None
        }
    }

    /// Hyperbolic distance from `z` to the wall.
    pub fn distance(&self, z: &HPoint) -> f64 {
        let disc = self.b * self.b - 4.0 * self.a * self.c;
        (self.value(z).abs() / (z.y * disc.sqrt())).asinh()
    }

    pub fn approx_eq(&self, o: &Wall, tol: f64) -> bool {
        (self.a - o.a).abs() <= tol && (self.b - o.b).abs() <= tol && (self.c - o.c).abs() <= tol
    }

    /// Center and radius for a semicircle, `None` for a vertical line.
    pub fn circle(&self) -> Option<(f64, f64)> {
        match self.geodesic()? {
            Geodesic::Circle { m, r } => Some((m, r)),
            Geodesic::Line { .. } => None,
        }
    }
}

impl fmt::Display for Wall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.geodesic() {
            Some(Geodesic::Circle { m, r }) => write!(f, "|z − {m:.9}| = {r:.9}"),
            Some(Geodesic::Line { x0 }) => write!(f, "Re z = {x0:.9}"),
            None => write!(f, "{}(x²+y²) + {}x + {} = 0", self.a, self.b, self.c),
        }
    }
}

/// Where the Delaunay condition of a hinge changes in H.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HingeLocus {
    /// The hinge is not Delaunay exactly where `wall.value` has the sign
    /// `violated`.
    Wall {
        wall: Wall,
        violated: i8,
    },
    Always,
    Never,
}

/// Signed coefficients whose quadratic form is positive where the hinge
/// violates the Delaunay condition.
fn coefficients(h: &Hinge) -> [f64; 3] {
    let [a, d, b, c] = h.p.each_ref().map(Vec2::to_f64);
    let v = [a, d, b].map(|p| (p.0 - c.0, p.1 - c.1));
    let cross = |p: (f64, f64), q: (f64, f64)| p.0 * q.1 - p.1 * q.0;
    let minors = [cross(v[1], v[2]), cross(v[2], v[0]), cross(v[0], v[1])];
    let det =
        |q: fn((f64, f64)) -> f64| -> f64 { v.iter().zip(&minors).map(|(p, m)| q(*p) * m).sum() };
    [
        det(|p| p.1 * p.1),
        2.0 * det(|p| p.0 * p.1),
        det(|p| p.0 * p.0),
    ]
}

/// The cocircularity locus of a hinge of the base surface.
pub fn wall_of_hinge(h: &Hinge) -> HingeLocus {
    let [a, b, c] = coefficients(h);
    match Wall::normalized(a, b, c) {
        None => HingeLocus::Always,
        Some((wall, sign)) => match wall.geodesic() {
            Some(_) => HingeLocus::Wall {
                wall,
                violated: sign as i8,
            },
            // constant sign on H: that of c when a = b = 0, else that of a
            None => {
                let lead = if wall.a != 0.0 { wall.a } else { wall.c };
                if lead * sign > 0.0 {
                    HingeLocus::Never
                } else {
                    HingeLocus::Always
                }
            }
        },
    }
}

/// Normalized violation of a hinge at `z`; positive means not Delaunay.
fn violation(k: &[f64; 3], z: &HPoint) -> f64 {
    let scale = k[0].abs() * z.abs2() + k[1].abs() * z.x.abs() + k[2].abs();
    if scale == 0.0 {
        0.0
    } else {
        (k[0] * z.abs2() + k[1] * z.x + k[2]) / scale
    }
}

/// One side of a cell.
#[derive(Clone, Debug, PartialEq)]
pub struct Support {
    pub wall: Wall,
    /// Sign of `wall.value` outside the cell.
    pub outside: i8,
    /// Arc-length interval of the side along the wall's geodesic.
    pub arc: (f64, f64),
}

impl Support {
    pub fn geodesic(&self) -> Geodesic {
        self.wall
            .geodesic()
            .expect("supporting walls are geodesics")
    }
}

/// A region of H on which one triangulation is Delaunay.
#[derive(Clone, Debug)]
pub struct Cell {
    /// Hash of the triangulation up to relabeling and mirror image, with
    /// triangle areas; equal for cells related by an affine symmetry.
    pub hash: u64,
    /// Identity of the region: the edges of the triangulation in the chart
    /// of the base surface.
    pub key: String,
    pub sample: HPoint,
    pub supports: Vec<Support>,
    triangulation: Triangulation,
}

impl Cell {
    pub fn walls(&self) -> Vec<Wall> {
        self.supports.iter().map(|s| s.wall).collect()
    }

    pub fn triangulation(&self) -> &Triangulation {
        &self.triangulation
    }

    /// `z` lies in the closed cell.
    pub fn contains(&self, z: &HPoint) -> bool {
        let t = &self.triangulation;
        t.edge_representatives()
            .into_iter()
            .all(|h| violation(&coefficients(&t.hinge(h)), z) <= 1e-9)
    }
}

fn settle(t: &mut Triangulation, z: &HPoint) -> Result<(), IsoDelaunayError> {
    t.delaunayize_with(|t, h| violation(&coefficients(&t.hinge(h)), z) > FLIP_TOL)?;
    Ok(())
}

fn on_wall(t: &Triangulation, z: &HPoint) -> bool {
    t.edge_representatives().into_iter().any(|h| {
        let k = coefficients(&t.hinge(h));
        k.iter().any(|v| *v != 0.0) && violation(&k, z).abs() <= 1e-10
    })
}

/// The cell containing `z`, starting the flips from `t`.
fn cell_from(mut t: Triangulation, z: HPoint) -> Result<Cell, IsoDelaunayError> {
    let mut at = z;
    for k in 0..8 {
        settle(&mut t, &at)?;
        if !on_wall(&t, &at) {
            return build_cell(t, at);
        }
        let eps = 1e-9 * (k + 1) as f64 * at.y;
        at = HPoint {
            x: z.x + eps,
            y: z.y + 0.5 * eps,
        };
    }
    Err(IsoDelaunayError::OnWall(z))
}

/// The cell of the iso-Delaunay tessellation of `s` containing `z`; `z` is
/// nudged off any wall it sits on.
pub fn cell_at(s: &Surface, z: HPoint) -> Result<Cell, IsoDelaunayError> {
    cell_from(Triangulation::from_surface(s)?, z)
}

fn build_cell(t: Triangulation, sample: HPoint) -> Result<Cell, IsoDelaunayError> {
    let mut walls: Vec<(Wall, i8)> = Vec::new();
    for h in t.edge_representatives() {
        if let HingeLocus::Wall { wall, violated } = wall_of_hinge(&t.hinge(h)) {
            if !walls.iter().any(|(w, _)| w.approx_eq(&wall, 1e-12)) {
                walls.push((wall, violated));
            }
        }
    }
    let mut supports = Vec::new();
    for (i, (w, out)) in walls.iter().enumerate() {
        let g = w.geodesic().expect("walls are geodesics");
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for (j, (v, vout)) in walls.iter().enumerate() {
            if i == j {
                continue;
            }
            let (l, h) = feasible(&g, v, *vout);
            lo = lo.max(l);
            hi = hi.min(h);
        }
        if hi - lo > 1e-9 {
            supports.push(Support {
                wall: *w,
                outside: *out,
                arc: (lo, hi),
            });
        }
    }
    supports.sort_by(|a, b| {
        (a.wall.a, a.wall.b, a.wall.c)
            .partial_cmp(&(b.wall.a, b.wall.b, b.wall.c))
            .expect("finite coefficients")
    });
    Ok(Cell {
        hash: canonical_hash(&t),
        key: region_key(&t),
        sample,
        supports,
        triangulation: t,
    })
}

/// Arc-length interval of `g` on which `v.value` does not have the sign
/// `out`.
fn feasible(g: &Geodesic, v: &Wall, out: i8) -> (f64, f64) {
    let o = out as f64;
    let all = (f64::NEG_INFINITY, f64::INFINITY);
    let none = (0.0, -1.0);
    match *g {
        Geodesic::Circle { m, r } => {
            // on the circle |z|² = 2mx + r² − m², so the value is linear in x
            let k = o * (2.0 * m * v.a + v.b);
            let l = o * (v.a * (r * r - m * m) + v.c);
            let scale =
                (2.0 * m * v.a).abs() + v.b.abs() + (v.a * (r * r - m * m)).abs() + v.c.abs();
            if k.abs() <= 1e-14 * scale {
                return if l <= 1e-12 * scale { all } else { none };
            }
            let u = (-l / k - m) / r;
            let s = if u >= 1.0 {
                f64::INFINITY
            } else if u <= -1.0 {
                f64::NEG_INFINITY
            } else {
                u.atanh()
            };
            if k > 0.0 {
                (f64::NEG_INFINITY, s)
            } else {
                (s, f64::INFINITY)
            }
        }
        Geodesic::Line { x0 } => {
            // linear in Y = y² = e^{2s}
            let k = o * v.a;
            let l = o * (v.a * x0 * x0 + v.b * x0 + v.c);
            if k == 0.0 {
                return if l <= 0.0 { all } else { none };
            }
            let yy = -l / k;
            if yy <= 0.0 {
                return if k > 0.0 { none } else { all };
            }
            let s = yy.ln() / 2.0;
            if k > 0.0 {
                (f64::NEG_INFINITY, s)
            } else {
                (s, f64::INFINITY)
            }
        }
    }
}

/// Arc-length interval of `g` inside the closed hyperbolic ball.
fn ball_interval(g: &Geodesic, center: &HPoint, radius: f64) -> Option<(f64, f64)> {
    let d = |s: f64| g.point(s).distance(center);
    let (mut lo, mut hi) = (-S_MAX, S_MAX);
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if d(m1) < d(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let smin = (lo + hi) / 2.0;
    if d(smin) > radius {
        return None;
    }
    let edge = |inside: f64, outside: f64| {
        let (mut a, mut b) = (inside, outside);
        for _ in 0..100 {
            let m = (a + b) / 2.0;
            if d(m) <= radius {
                a = m;
            } else {
                b = m;
            }
        }
        a
    };
    Some((edge(smin, -S_MAX), edge(smin, S_MAX)))
}

/// FNV-1a, so that hashes are stable across builds and platforms.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Breadth-first code of the triangulation from one triangle side, reading
/// triangles counterclockwise or, for the mirror image, clockwise.
fn code_from(t: &Triangulation, start: usize, mirrored: bool, areas: &[String]) -> Vec<String> {
    let nt = t.num_triangles();
    let mut tri = vec![usize::MAX; nt];
    let mut edge: BTreeMap<usize, usize> = BTreeMap::new();
    let mut queue = std::collections::VecDeque::from([start]);
    tri[start / 3] = 0;
    let mut seen = 1;
    let mut out = Vec::with_capacity(4 * nt);
    while let Some(h) = queue.pop_front() {
        let sides = if mirrored {
            [h, prev(h), next(h)]
        } else {
            [h, next(h), prev(h)]
        };
        out.push(areas[h / 3].clone());
        for s in sides {
            let e = s.min(t.twin(s));
            let n = edge.len();
            let label = *edge.entry(e).or_insert(n);
            let r = if t.is_reflected(s) { "r" } else { "" };
            out.push(format!("{label}{r}"));
            let g = t.twin(s);
            if tri[g / 3] == usize::MAX {
                tri[g / 3] = seen;
                seen += 1;
                queue.push_back(g);
            }
        }
    }
    out
}

fn canonical_hash(t: &Triangulation) -> u64 {
    let nt = t.num_triangles();
    let area = |f: usize| t.vector(3 * f).cross(t.vector(3 * f + 1)).to_f64() / 2.0;
    let total: f64 = (0..nt).map(area).sum();
    let areas: Vec<String> = (0..nt).map(|f| format!("{:.9}", area(f) / total)).collect();
    let best = (0..t.num_half_edges())
        .flat_map(|h| [false, true].map(|m| code_from(t, h, m, &areas)))
        .min()
        .expect("a triangulation has half-edges");
    fnv1a(best.join(" ").as_bytes())
}

fn region_key(t: &Triangulation) -> String {
    let mut keys: Vec<String> = t
        .edge_representatives()
        .into_iter()
        .map(|h| {
            let (x, y) = t.vector(h).to_f64();
            let (x, y) = if y < 0.0 || (y == 0.0 && x < 0.0) {
                (-x, -y)
            } else {
                (x, y)
            };
            format!("{:.9},{:.9}", x + 0.0, y + 0.0)
        })
        .collect();
    keys.sort();
    keys.join(";")
}

/// Two cells sharing a side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Adjacency {
    pub cells: (usize, usize),
    pub wall: Wall,
}

#[derive(Clone, Debug, Default)]
pub struct Tessellation {
    pub center: Option<HPoint>,
    pub radius: f64,
    /// Sorted by key.
    pub cells: Vec<Cell>,
    pub adjacency: Vec<Adjacency>,
}

impl Tessellation {
    /// The distinct walls supporting some cell.
    pub fn walls(&self) -> Vec<Wall> {
        let mut out: Vec<Wall> = Vec::new();
        for c in &self.cells {
            for s in &c.supports {
                if !out.iter().any(|w| w.approx_eq(&s.wall, 1e-9)) {
                    out.push(s.wall);
                }
            }
        }
        out.sort_by(|a, b| {
            (a.a, a.b, a.c)
                .partial_cmp(&(b.a, b.b, b.c))
                .expect("finite")
        });
        out
    }

    pub fn find(&self, key: &str) -> Option<usize> {
        self.cells
            .binary_search_by(|c| c.key.as_str().cmp(key))
            .ok()
    }

    /// Cells with hash, sample point and wall coefficients, and the
    /// adjacency graph, as pretty-printed JSON.
    pub fn to_json(&self) -> String {
        let coef = |w: &Wall| json!([w.a, w.b, w.c]);
        let cells: Vec<Value> = self
            .cells
            .iter()
            .map(|c| {
                json!({
                    "hash": format!("{:016x}", c.hash),
                    "sample": [c.sample.x, c.sample.y],
                    "walls": c.supports.iter().map(|s| coef(&s.wall)).collect::<Vec<_>>(),
                })
            })
            .collect();
        let adjacency: Vec<Value> = self
            .adjacency
            .iter()
            .map(|a| json!([a.cells.0, a.cells.1, coef(&a.wall)]))
            .collect();
        let doc = json!({
            "center": self.center.map(|c| [c.x, c.y]),
            "radius": self.radius,
            "cells": cells,
            "adjacency": adjacency,
        });
        serde_json::to_string_pretty(&doc).expect("JSON values serialize") + "\n"
    }

    /// The cell whose closure contains `z`, if explored.
    pub fn locate(&self, z: &HPoint) -> Option<&Cell> {
        self.cells.iter().find(|c| c.contains(z))
    }
}

/// The point just outside `cell` across the middle of the part of side `sd`
/// within `range`.
fn crossing_point(sd: &Support, range: (f64, f64)) -> HPoint {
    let g = sd.geodesic();
    let mid = (range.0 + range.1) / 2.0;
    let z = g.point(mid);
    let w = &sd.wall;
    let o = sd.outside as f64;
    let (gx, gy) = (o * (2.0 * w.a * z.x + w.b), o * (2.0 * w.a * z.y));
    let n = gx.hypot(gy);
    let eps = 1e-7_f64.min((range.1 - range.0) * 1e-3) * z.y;
    HPoint {
        x: z.x + eps * gx / n,
        y: z.y + eps * gy / n,
    }
}

/// The neighbor of `cell` across side `sd`, sampled at the middle of the
/// part of the side inside `range`.
pub fn neighbor(cell: &Cell, sd: &Support, range: (f64, f64)) -> Result<Cell, IsoDelaunayError> {
    cell_from(cell.triangulation.clone(), crossing_point(sd, range))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExploreOptions {
    pub budget: usize,
    /// Worker threads for crossing walls; the result does not depend on it.
    pub threads: usize,
}

impl Default for ExploreOptions {
    fn default() -> Self {
        ExploreOptions {
            budget: CELL_BUDGET,
            threads: 1,
        }
    }
}

/// Cells are expanded in batches of this size, in key order, so that the
/// sample point recorded for each cell does not depend on the thread count.
const BATCH: usize = 64;

/// Breadth-first search over cells meeting the closed hyperbolic ball of
/// the given radius about `z0`, crossing walls inside the ball.
pub fn explore(s: &Surface, z0: HPoint, radius: f64) -> Result<Tessellation, IsoDelaunayError> {
    explore_with(s, z0, radius, &ExploreOptions::default())
}

/// Neighbors of `cell` across the parts of its sides inside the ball.
fn crossings(cell: &Cell, z0: &HPoint, radius: f64) -> Result<Vec<(Wall, Cell)>, IsoDelaunayError> {
    let mut out = Vec::new();
    for sd in &cell.supports {
        let Some((bl, bh)) = ball_interval(&sd.geodesic(), z0, radius) else {
            continue;
        };
        let (lo, hi) = (sd.arc.0.max(bl), sd.arc.1.min(bh));
        if hi - lo > 1e-9 {
            out.push((sd.wall, neighbor(cell, sd, (lo, hi))?));
        }
    }
    Ok(out)
}

pub fn explore_with(
    s: &Surface,
    z0: HPoint,
    radius: f64,
    opts: &ExploreOptions,
) -> Result<Tessellation, IsoDelaunayError> {
    if !(radius > 0.0) {
        return Err(IsoDelaunayError::Domain(format!(
            "radius {radius} is not positive"
        )));
    }
    let start = cell_at(s, z0)?;
    let mut done: BTreeMap<String, Cell> = BTreeMap::new();
    let mut pending: BTreeMap<String, Cell> = BTreeMap::from([(start.key.clone(), start)]);
    let mut edges: Vec<(String, String, Wall)> = Vec::new();
    let threads = opts.threads.max(1);
    while !pending.is_empty() {
        let mut batch = Vec::with_capacity(BATCH);
        while batch.len() < BATCH {
            match pending.pop_first() {
                Some(kc) => batch.push(kc),
                None => break,
            }
        }
        let results: Vec<Result<Vec<(Wall, Cell)>, IsoDelaunayError>> = if threads == 1 {
            batch
                .iter()
                .map(|(_, c)| crossings(c, &z0, radius))
                .collect()
        } else {
            let chunk = batch.len().div_ceil(threads);
            std::thread::scope(|sc| {
                let handles: Vec<_> = batch
                    .chunks(chunk)
                    .map(|part| {
                        sc.spawn(move || {
                            part.iter()
                                .map(|(_, c)| crossings(c, &z0, radius))
                                .collect::<Vec<_>>()
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .flat_map(|h| h.join().expect("worker thread panicked"))
                    .collect()
            })
        };
        let in_batch: HashSet<String> = batch.iter().map(|(k, _)| k.clone()).collect();
        for ((key, cell), found) in batch.into_iter().zip(results) {
            for (wall, nb) in found? {
                edges.push((key.clone(), nb.key.clone(), wall));
                let known = done.contains_key(&nb.key)
                    || pending.contains_key(&nb.key)
                    || in_batch.contains(&nb.key);
                if !known {
                    if done.len() + in_batch.len() + pending.len() + 1 > opts.budget {
                        return Err(IsoDelaunayError::Budget(opts.budget));
                    }
                    pending.insert(nb.key.clone(), nb);
                }
            }
            done.insert(key, cell);
        }
    }
    let cells: Vec<Cell> = done.into_values().collect();
    let index = |k: &str| {
        cells
            .binary_search_by(|c| c.key.as_str().cmp(k))
            .expect("explored")
    };
    let mut seen = HashSet::new();
    let mut adjacency = Vec::new();
    for (a, b, wall) in edges {
        let (i, j) = (index(&a), index(&b));
        let pair = (i.min(j), i.max(j));
        if i != j && seen.insert(pair) {
            adjacency.push(Adjacency { cells: pair, wall });
        }
    }
    adjacency.sort_by_key(|a| a.cells);
    Ok(Tessellation {
        center: Some(z0),
        radius,
        cells,
        adjacency,
    })
}

/// Walls of the cells around `z` that pass within `tol` of it.
pub fn walls_through(s: &Surface, z: HPoint, tol: f64) -> Result<Vec<Wall>, IsoDelaunayError> {
    let mut out: Vec<Wall> = Vec::new();
    let r = 1e-4;
    for k in 0..16 {
        let th = std::f64::consts::PI * (2 * k + 1) as f64 / 16.0;
        // a point at hyperbolic distance about r in direction th
        let w = HPoint {
            x: z.x + r * z.y * th.cos(),
            y: z.y * (1.0 + r * th.sin()),
        };
        let c = cell_at(s, w)?;
        for sd in c.supports {
            if sd.wall.distance(&z) <= tol && !out.iter().any(|v| v.approx_eq(&sd.wall, 1e-9)) {
                out.push(sd.wall);
            }
        }
    }
    out.sort_by(|a, b| {
        (a.a, a.b, a.c)
            .partial_cmp(&(b.a, b.b, b.c))
            .expect("finite")
    });
    Ok(out)
}

/// A stretch of the imaginary axis inside one cell.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisStep {
    pub from: f64,
    pub to: f64,
    pub hash: u64,
}

/// The cells met by the imaginary axis between `i·y0` and `i·y1`, walking
/// upwards along `x = offset`.
pub fn axis_walk(
    s: &Surface,
    offset: f64,
    y0: f64,
    y1: f64,
) -> Result<Vec<AxisStep>, IsoDelaunayError> {
    let mut steps = Vec::new();
    let mut y = y0;
    let mut t = Triangulation::from_surface(s)?;
    let line = Geodesic::Line { x0: offset };
    while y < y1 * (1.0 - 1e-12) {
        let c = cell_from(
            t,
            HPoint {
                x: offset,
                y: y * (1.0 + 1e-9),
            },
        )?;
        let s0 = y.ln();
        // leave the cell where the first wall crosses the line above y
        let mut exit = f64::INFINITY;
        for sd in &c.supports {
            let (lo, hi) = feasible(&line, &sd.wall, sd.outside);
            for e in [lo, hi] {
                if e.is_finite() && e > s0 + 1e-9 {
                    exit = exit.min(e);
                }
            }
        }
        let to = exit.exp().min(y1);
        steps.push(AxisStep {
            from: y,
            to,
            hash: c.hash,
        });
        t = c.triangulation;
        y = to;
        if !exit.is_finite() {
            break;
        }
    }
    Ok(steps)
}
