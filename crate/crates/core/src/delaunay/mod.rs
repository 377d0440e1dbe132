//! Triangulations of flat surfaces, the edge-flip algorithm and the
//! Delaunay decomposition.
//!
//! Half-edge `h` belongs to triangle `h / 3`; its successor inside the
//! triangle is implicit. Each half-edge stores its holonomy in the chart of
//! its own triangle. Across a point-reflection gluing the two charts differ
//! by a half turn, so the twin of such a half-edge carries the *same*
//! vector instead of the negated one; the `reflected` flag records this.

mod decompose;
mod svg;

use std::collections::VecDeque;

use thiserror::Error;

use crate::numeric::{incircle_normalized, orient, Matrix2, Scalar, Sign, Vec2};
use crate::surface::{EdgeRef, GluingKind, Surface, SurfaceError, SurfaceKind};

pub use decompose::{census, congruent, CellShape, Census, Decomposition};
pub use svg::render_net_svg;

/// Flip budget for one run of the flip algorithm.
pub const FLIP_CAP: usize = 1_000_000;

/// Normalized in-circle values within this bound count as cocircular for
/// float coordinates.
pub const COCIRCULAR_FLOAT_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum DelaunayError {
    #[error("hinge of half-edge {0} is not strictly convex")]
    NonConvexHinge(usize),
    #[error("half-edge {0} borders the same triangle on both sides")]
    SelfAdjacent(usize),
    #[error("flip cap of {cap} exceeded; last flipped half-edge {last}, queue length {queue}")]
    FlipCap {
        cap: usize,
        last: usize,
        queue: usize,
    },
    #[error("triangulation invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

#[inline]
pub fn next(h: usize) -> usize {
    3 * (h / 3) + (h + 1) % 3
}

#[inline]
pub fn prev(h: usize) -> usize {
    3 * (h / 3) + (h + 2) % 3
}

/// The two triangles on either side of a half-edge `e = A→B`, developed
/// into the chart of the triangle of `e`: `p = [A, D, B, C]` in
/// counterclockwise order, where `C` is opposite `e` and `D` opposite its
/// twin. The shared diagonal is `p[0]p[2]`.
#[derive(Clone, Debug)]
pub struct Hinge {
    pub edge: usize,
    pub p: [Vec2; 4],
}

impl Hinge {
    /// Sign of the in-circle determinant of `D` against the triangle `ABC`;
    /// positive means the hinge violates the Delaunay condition.
    pub fn incircle_sign(&self) -> Sign {
        let [a, d, b, c] = &self.p;
        crate::numeric::incircle_determinant(a, d, b, c).sign()
    }

    /// Scale-free in-circle value, for float tolerances.
    pub fn incircle_normalized(&self) -> f64 {
        let [a, d, b, c] = &self.p;
        incircle_normalized(a, d, b, c)
    }

    /// `C` is not strictly inside the circle through `A, D, B`.
    pub fn is_delaunay(&self) -> bool {
        if self.is_exact() {
            self.incircle_sign() != Sign::Positive
        } else {
            self.incircle_normalized() <= COCIRCULAR_FLOAT_TOL
        }
    }

    /// All four points on one circle.
    pub fn is_cocircular(&self) -> bool {
        if self.is_exact() {
            self.incircle_sign() == Sign::Zero
        } else {
            self.incircle_normalized().abs() < COCIRCULAR_FLOAT_TOL
        }
    }

    /// Both triangles after a flip would be counterclockwise.
    pub fn is_strictly_convex(&self) -> bool {
        let [a, d, b, c] = &self.p;
        orient(c, a, d) == Sign::Positive && orient(d, b, c) == Sign::Positive
    }

    fn is_exact(&self) -> bool {
        self.p.iter().all(Vec2::is_exact)
    }
}

/// A triangulation of a flat surface by triangles whose vertices are cone
/// points (possibly regular marked points).
#[derive(Clone, Debug)]
pub struct Triangulation {
    twin: Vec<usize>,
    vec: Vec<Vec2>,
    reflected: Vec<bool>,
    origin: Vec<usize>,
    num_vertices: usize,
    kind: SurfaceKind,
}

impl Triangulation {
    /// Fan triangulation from vertex 0 of every polygon.
    pub fn from_surface(s: &Surface) -> Result<Triangulation, DelaunayError> {
        let violations = s.validate();
        if !violations.is_empty() {
            return Err(SurfaceError::Invalid(violations).into());
        }
        let cycles = s.vertex_cycles()?;
        let mut label: Vec<Vec<usize>> = s.polygons().iter().map(|p| vec![0; p.len()]).collect();
        for c in &cycles {
            for &(p, v) in &c.corners {
                label[p][v] = c.id;
            }
        }
        let mut base = Vec::with_capacity(s.polygons().len());
        let mut nt = 0;
        for p in s.polygons() {
            base.push(nt);
            nt += p.len() - 2;
        }
        let nh = 3 * nt;
        let mut t = Triangulation {
            twin: vec![usize::MAX; nh],
            vec: vec![Vec2::zero(); nh],
            reflected: vec![false; nh],
            origin: vec![0; nh],
            num_vertices: cycles.len(),
            kind: s.kind(),
        };
        // half-edge carrying polygon edge j
        let edge_half = |pi: usize, j: usize, n: usize| -> usize {
            let f0 = base[pi];
            if j == 0 {
                3 * f0
            } else if j == n - 1 {
                3 * (f0 + n - 3) + 2
            } else {
                3 * (f0 + j - 1) + 1
            }
        };
        for (pi, p) in s.polygons().iter().enumerate() {
            let n = p.len();
            let v0 = p.vertex(0);
            for k in 1..n - 1 {
                let f = base[pi] + k - 1;
                let (vk, vk1) = (p.vertex(k), p.vertex(k + 1));
                t.vec[3 * f] = vk - v0;
                t.vec[3 * f + 1] = vk1 - vk;
                t.vec[3 * f + 2] = v0 - vk1;
                t.origin[3 * f] = label[pi][0];
                t.origin[3 * f + 1] = label[pi][k];
                t.origin[3 * f + 2] = label[pi][(k + 1) % n];
                if k + 1 < n - 1 {
                    t.twin[3 * f + 2] = 3 * (f + 1);
                    t.twin[3 * (f + 1)] = 3 * f + 2;
                }
            }
        }
        for g in s.gluings() {
            let ha = edge_half(g.a.polygon, g.a.edge, s.polygon(g.a.polygon).len());
            let hb = edge_half(g.b.polygon, g.b.edge, s.polygon(g.b.polygon).len());
            t.twin[ha] = hb;
            t.twin[hb] = ha;
            let r = g.kind == GluingKind::PointReflection;
            t.reflected[ha] = r;
            t.reflected[hb] = r;
        }
        t.check()?;
        Ok(t)
    }

    pub fn num_half_edges(&self) -> usize {
        self.twin.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.twin.len() / 3
    }

    pub fn num_edges(&self) -> usize {
        self.twin.len() / 2
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn twin(&self, h: usize) -> usize {
        self.twin[h]
    }

    /// Holonomy of `h` in the chart of its triangle.
    pub fn vector(&self, h: usize) -> &Vec2 {
        &self.vec[h]
    }

    pub fn is_reflected(&self, h: usize) -> bool {
        self.reflected[h]
    }

    /// Vertex-cycle label of the start of `h`.
    pub fn origin(&self, h: usize) -> usize {
        self.origin[h]
    }

    /// One half-edge per edge (the smaller index of each twin pair).
    pub fn edge_representatives(&self) -> Vec<usize> {
        (0..self.twin.len()).filter(|&h| h < self.twin[h]).collect()
    }

    pub fn is_exact(&self) -> bool {
        self.vec.iter().all(Vec2::is_exact)
    }

    /// +1, or −1 when the twin chart is rotated by π.
    pub fn chart_sign(&self, h: usize) -> Scalar {
        if self.reflected[h] {
            Scalar::int(-1)
        } else {
            Scalar::one()
        }
    }

    pub fn hinge(&self, e: usize) -> Hinge {
        self.hinge_with(e, |v| v.clone())
    }

    /// Hinge of `e` with every holonomy passed through `map` first.
    pub fn hinge_with(&self, e: usize, map: impl Fn(&Vec2) -> Vec2) -> Hinge {
        let g = self.twin[e];
        let sigma = self.chart_sign(e);
        let a = Vec2::zero();
        let b = map(&self.vec[e]);
        let c = &b + &map(&self.vec[next(e)]);
        let d = &a + &map(&self.vec[next(g)]).scale(&sigma);
        Hinge {
            edge: e,
            p: [a, d, b, c],
        }
    }

    /// Checks the combinatorial and metric invariants.
    pub fn check(&self) -> Result<(), DelaunayError> {
        let err = |m: String| Err(DelaunayError::Invariant(m));
        let nh = self.twin.len();
        for h in 0..nh {
            let t = self.twin[h];
            if t >= nh || self.twin[t] != h || t == h {
                return err(format!("twin of {h} is not an involution"));
            }
            if self.reflected[t] != self.reflected[h] {
                return err(format!("reflection flag of {h} is not symmetric"));
            }
            let expect = if self.reflected[h] {
                self.vec[h].clone()
            } else {
                -&self.vec[h]
            };
            let ok = if expect.is_exact() && self.vec[t].is_exact() {
                expect == self.vec[t]
            } else {
                expect.approx_eq(&self.vec[t], 1e-9)
            };
            if !ok {
                return err(format!("holonomy of {h} does not match its twin"));
            }
            if self.origin[t] != self.origin[next(h)] {
                return err(format!("vertex labels disagree across {h}"));
            }
        }
        for f in 0..nh / 3 {
            let (u, v, w) = (&self.vec[3 * f], &self.vec[3 * f + 1], &self.vec[3 * f + 2]);
            let sum = &(u + v) + w;
            let closed = if sum.is_exact() {
                sum.is_zero()
            } else {
                sum.approx_eq(&Vec2::zero(), 1e-9)
            };
            if !closed {
                return err(format!("triangle {f} does not close"));
            }
            if !u.cross(v).is_positive() {
                return err(format!("triangle {f} is not counterclockwise"));
            }
        }
        Ok(())
    }

    /// Replaces the diagonal of the hinge of `e` by the other diagonal.
    /// The new diagonal is half-edge `3·(e/3) + 1`, running from the vertex
    /// opposite the twin to the vertex opposite `e`.
    pub fn flip(&mut self, e: usize) -> Result<usize, DelaunayError> {
        let g = self.twin[e];
        let (fi, gi) = (e / 3, g / 3);
        if fi == gi {
            return Err(DelaunayError::SelfAdjacent(e));
        }
        let hinge = self.hinge(e);
        if !hinge.is_strictly_convex() {
            return Err(DelaunayError::NonConvexHinge(e));
        }
        let [_, d, _, c] = hinge.p;
        let flip_chart = self.reflected[e];
        let (ne, pe, ng, pg) = (next(e), prev(e), next(g), prev(g));
        let origin_a = self.origin[e];
        let origin_b = self.origin[g];
        let origin_c = self.origin[pe];
        let origin_d = self.origin[pg];
        let f_slots = [3 * fi, 3 * fi + 1, 3 * fi + 2];
        let g_slots = [3 * gi, 3 * gi + 1, 3 * gi + 2];
        // (old index, new index, comes from the twin triangle)
        let moved = [
            (ng, f_slots[0], true),
            (pe, f_slots[2], false),
            (pg, g_slots[1], true),
            (ne, g_slots[2], false),
        ];
        let remap =
            |h: usize| -> usize { moved.iter().find(|m| m.0 == h).map(|m| m.1).unwrap_or(h) };
        let changed = |h: usize| -> bool { flip_chart && moved.iter().any(|m| m.0 == h && m.2) };
        struct Outer {
            new: usize,
            twin_old: usize,
            vec: Vec2,
            reflected: bool,
        }
        let neg = Scalar::int(-1);
        let outer: Vec<Outer> = moved
            .iter()
            .map(|&(old, new, from_g)| {
                let t = self.twin[old];
                let vec = if from_g && flip_chart {
                    self.vec[old].scale(&neg)
                } else {
                    self.vec[old].clone()
                };
                Outer {
                    new,
                    twin_old: t,
                    vec,
                    reflected: self.reflected[old] ^ changed(old) ^ changed(t),
                }
            })
            .collect();
        for o in &outer {
            let t_new = remap(o.twin_old);
            self.vec[o.new] = o.vec.clone();
            self.reflected[o.new] = o.reflected;
            self.twin[o.new] = t_new;
            if remap(o.twin_old) == o.twin_old {
                // the partner stays put; point it back and keep its flag in sync
                self.twin[o.twin_old] = o.new;
                self.reflected[o.twin_old] = o.reflected;
            }
        }
        let (e_new, g_new) = (f_slots[1], g_slots[0]);
        self.vec[e_new] = &c - &d;
        self.vec[g_new] = &d - &c;
        self.twin[e_new] = g_new;
        self.twin[g_new] = e_new;
        self.reflected[e_new] = false;
        self.reflected[g_new] = false;
        self.origin[f_slots[0]] = origin_a;
        self.origin[f_slots[1]] = origin_d;
        self.origin[f_slots[2]] = origin_c;
        self.origin[g_slots[0]] = origin_c;
        self.origin[g_slots[1]] = origin_d;
        self.origin[g_slots[2]] = origin_b;
        Ok(e_new)
    }

    /// Flips every hinge for which `should_flip` holds until none remains.
    /// Suspect edges are processed first in, first out; after a flip the
    /// four outer edges of the hinge are re-examined.
    pub fn delaunayize_with(
        &mut self,
        mut should_flip: impl FnMut(&Triangulation, usize) -> bool,
    ) -> Result<usize, DelaunayError> {
        let mut queue: VecDeque<usize> = self.edge_representatives().into_iter().collect();
        let mut queued = vec![false; self.twin.len()];
        for &h in &queue {
            queued[h] = true;
        }
        let mut flips = 0;
        while let Some(h) = queue.pop_front() {
            queued[h] = false;
            let t = self.twin[h];
            if queued[t] {
                continue;
            }
            if !should_flip(self, h) {
                continue;
            }
            if flips >= FLIP_CAP {
                return Err(DelaunayError::FlipCap {
                    cap: FLIP_CAP,
                    last: h,
                    queue: queue.len(),
                });
            }
            let new = self.flip(h)?;
            flips += 1;
            for k in [
                next(new),
                prev(new),
                next(self.twin[new]),
                prev(self.twin[new]),
            ] {
                let rep = k.min(self.twin[k]);
                if !queued[rep] && !queued[self.twin[rep]] {
                    queued[rep] = true;
                    queue.push_back(rep);
                }
            }
        }
        Ok(flips)
    }

    /// Flip algorithm with the in-circle test: exact for exact coordinates,
    /// thresholded at [`COCIRCULAR_FLOAT_TOL`] for floats. Returns the
    /// number of flips.
    pub fn delaunayize(&mut self) -> Result<usize, DelaunayError> {
        self.delaunayize_with(|t, h| !t.hinge(h).is_delaunay())
    }

    /// Every hinge satisfies the Delaunay condition.
    pub fn is_delaunay(&self) -> bool {
        self.edge_representatives()
            .into_iter()
            .all(|h| self.hinge(h).is_delaunay())
    }

    /// Same combinatorics with every holonomy mapped by `m` (det m > 0).
    pub fn map_linear(&self, m: &Matrix2) -> Result<Triangulation, DelaunayError> {
        if !m.det().is_positive() {
            return Err(DelaunayError::Invariant(
                "only orientation-preserving maps keep triangles counterclockwise".into(),
            ));
        }
        let mut t = self.clone();
        t.vec = self.vec.iter().map(|v| m.apply(v)).collect();
        Ok(t)
    }

    /// The triangulation as a surface with one polygon per triangle.
    pub fn to_surface(&self) -> Surface {
        use crate::surface::{Gluing, Polygon};
        let polys = (0..self.num_triangles())
            .map(|f| {
                Polygon::from_edges(&[
                    self.vec[3 * f].clone(),
                    self.vec[3 * f + 1].clone(),
                    self.vec[3 * f + 2].clone(),
                ])
            })
            .collect();
        let gluings = self
            .edge_representatives()
            .into_iter()
            .map(|h| {
                let t = self.twin[h];
                let kind = if self.reflected[h] {
                    GluingKind::PointReflection
                } else {
                    GluingKind::Translation
                };
                Gluing {
                    a: EdgeRef::new(h / 3, h % 3),
                    b: EdgeRef::new(t / 3, t % 3),
                    kind,
                }
            })
            .collect();
        Surface::new(polys, gluings, self.kind)
    }
}

/// Fan triangulation followed by the flip algorithm.
pub fn delaunay_triangulation(s: &Surface) -> Result<Triangulation, DelaunayError> {
    let mut t = Triangulation::from_surface(s)?;
    t.delaunayize()?;
    Ok(t)
}
