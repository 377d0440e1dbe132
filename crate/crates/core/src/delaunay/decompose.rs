//! Merging cocircular Delaunay triangles into cells.

use std::cmp::Ordering;
use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use crate::numeric::{Matrix2, Scalar, Vec2};
use crate::surface::{EdgeRef, Gluing, GluingKind, Polygon, Surface};

use super::{delaunay_triangulation, next, DelaunayError, Triangulation};

/// The Delaunay decomposition: cells as polygons of a surface, together
/// with the triangles making up each cell.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub surface: Surface,
    /// Cell index of every triangle.
    pub face_cell: Vec<usize>,
    /// For every cell, the boundary half-edge carrying each cell edge.
    pub cell_edges: Vec<Vec<usize>>,
}

struct RawCell {
    vertices: Vec<Vec2>,
    halves: Vec<usize>,
    faces: Vec<usize>,
}

fn cmp_edges(a: &Polygon, b: &Polygon) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        for (u, v) in a.edges().iter().zip(b.edges().iter()) {
            let o = u.cmp_lex(v);
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    })
}

impl Decomposition {
    /// Delaunay decomposition of a surface.
    pub fn of_surface(s: &Surface) -> Result<Decomposition, DelaunayError> {
        Decomposition::from_triangulation(&delaunay_triangulation(s)?)
    }

    /// Merges the triangles of a Delaunay triangulation across every
    /// cocircular hinge. Cells start at their lexicographically smallest
    /// vertex, placed at the origin, and are sorted by their edge vectors.
    pub fn from_triangulation(t: &Triangulation) -> Result<Decomposition, DelaunayError> {
        let nh = t.num_half_edges();
        let nf = t.num_triangles();
        let mut internal = vec![false; nh];
        for h in t.edge_representatives() {
            if t.hinge(h).is_cocircular() {
                let g = t.twin(h);
                internal[h] = true;
                internal[g] = true;
            }
        }
        // develop every cell from its smallest triangle
        let mut pos: Vec<Option<Vec2>> = vec![None; nh];
        let mut sign: Vec<Scalar> = vec![Scalar::one(); nf];
        let mut placed = vec![false; nf];
        let mut raw: Vec<RawCell> = Vec::new();
        for root in 0..nf {
            if placed[root] {
                continue;
            }
            let mut faces = Vec::new();
            let mut queue = VecDeque::new();
            placed[root] = true;
            pos[3 * root] = Some(Vec2::zero());
            queue.push_back(root);
            while let Some(f) = queue.pop_front() {
                faces.push(f);
                let s = sign[f].clone();
                let start = pos[3 * f].clone().expect("placed triangle has a position");
                let p1 = &start + &t.vector(3 * f).scale(&s);
                let p2 = &p1 + &t.vector(3 * f + 1).scale(&s);
                pos[3 * f + 1] = Some(p1);
                pos[3 * f + 2] = Some(p2);
                for k in 0..3 {
                    let h = 3 * f + k;
                    if !internal[h] {
                        continue;
                    }
                    let g = t.twin(h);
                    let gf = g / 3;
                    if placed[gf] {
                        continue;
                    }
                    placed[gf] = true;
                    sign[gf] = &s * &t.chart_sign(h);
                    // g runs from the end of h back to its start
                    let end_of_h = pos[next(h)].clone().expect("set above");
                    let local = 3 * gf;
                    let mut p = end_of_h;
                    let mut cur = g;
                    while cur != local {
                        // walk backwards to the first half-edge of the triangle
                        let pr = super::prev(cur);
                        p = &p - &t.vector(pr).scale(&sign[gf]);
                        cur = pr;
                    }
                    pos[local] = Some(p);
                    queue.push_back(gf);
                }
            }
            // boundary walk
            let first = faces
                .iter()
                .flat_map(|&f| (0..3).map(move |k| 3 * f + k))
                .find(|&h| !internal[h]);
            let Some(h0) = first else {
                return Err(DelaunayError::Invariant(
                    "a cell has no boundary edge".into(),
                ));
            };
            let mut vertices = Vec::new();
            let mut halves = Vec::new();
            let mut h = h0;
            loop {
                vertices.push(pos[h].clone().expect("developed"));
                halves.push(h);
                let mut cand = next(h);
                let mut guard = 0;
                while internal[cand] {
                    cand = next(t.twin(cand));
                    guard += 1;
                    if guard > nh {
                        return Err(DelaunayError::Invariant(
                            "boundary walk does not close".into(),
                        ));
                    }
                }
                h = cand;
                if h == h0 {
                    break;
                }
                if halves.len() > nh {
                    return Err(DelaunayError::Invariant(
                        "boundary walk does not close".into(),
                    ));
                }
            }
            raw.push(RawCell {
                vertices,
                halves,
                faces,
            });
        }
        // canonical start vertex and order
        let mut cells: Vec<(Polygon, Vec<usize>, Vec<usize>)> = raw
            .into_iter()
            .map(|c| {
                let n = c.vertices.len();
                let mut best = 0;
                for i in 1..n {
                    if c.vertices[i].cmp_lex(&c.vertices[best]) == Ordering::Less {
                        best = i;
                    }
                }
                let origin = c.vertices[best].clone();
                let verts = (0..n)
                    .map(|k| &c.vertices[(best + k) % n] - &origin)
                    .collect();
                let halves = (0..n).map(|k| c.halves[(best + k) % n]).collect();
                (Polygon::new(verts), halves, c.faces)
            })
            .collect();
        cells.sort_by(|a, b| cmp_edges(&a.0, &b.0));
        let mut face_cell = vec![0; nf];
        let mut where_half = vec![None; nh];
        for (ci, (_, halves, faces)) in cells.iter().enumerate() {
            for &f in faces {
                face_cell[f] = ci;
            }
            for (k, &h) in halves.iter().enumerate() {
                where_half[h] = Some((ci, k));
            }
        }
        let mut gluings = Vec::new();
        for (ci, (_, halves, _)) in cells.iter().enumerate() {
            for (k, &h) in halves.iter().enumerate() {
                let g = t.twin(h);
                let (cj, kj) = where_half[g].ok_or_else(|| {
                    DelaunayError::Invariant("boundary edge glued to an interior edge".into())
                })?;
                if (ci, k) > (cj, kj) {
                    continue;
                }
                let s_f = &sign[h / 3];
                let s_g = &sign[g / 3];
                let translation = &(s_g * &t.chart_sign(h)) == s_f;
                gluings.push(Gluing {
                    a: EdgeRef::new(ci, k),
                    b: EdgeRef::new(cj, kj),
                    kind: if translation {
                        GluingKind::Translation
                    } else {
                        GluingKind::PointReflection
                    },
                });
            }
        }
        let cell_edges = cells.iter().map(|c| c.1.clone()).collect();
        let polygons = cells.into_iter().map(|c| c.0).collect();
        Ok(Decomposition {
            surface: Surface::new(polygons, gluings, t.kind()),
            face_cell,
            cell_edges,
        })
    }

    pub fn cells(&self) -> &[Polygon] {
        self.surface.polygons()
    }

    pub fn census(&self) -> Census {
        census(&self.surface)
    }
}

/// Shape class of a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CellShape {
    Triangle,
    Square,
    Rectangle,
    Rhombus,
    Parallelogram,
    IsoscelesTrapezoid,
    Trapezoid,
    Quadrilateral,
    Polygon(usize),
}

impl CellShape {
    pub fn name(&self) -> String {
        match self {
            CellShape::Triangle => "triangle".into(),
            CellShape::Square => "square".into(),
            CellShape::Rectangle => "rectangle".into(),
            CellShape::Rhombus => "rhombus".into(),
            CellShape::Parallelogram => "parallelogram".into(),
            CellShape::IsoscelesTrapezoid => "isosceles trapezoid".into(),
            CellShape::Trapezoid => "trapezoid".into(),
            CellShape::Quadrilateral => "quadrilateral".into(),
            CellShape::Polygon(n) => format!("{n}-gon"),
        }
    }

    /// Squares, rectangles and rhombi are parallelograms too.
    pub fn is_parallelogram(&self) -> bool {
        matches!(
            self,
            CellShape::Square
                | CellShape::Rectangle
                | CellShape::Rhombus
                | CellShape::Parallelogram
        )
    }

    pub fn is_trapezoid(&self) -> bool {
        matches!(self, CellShape::IsoscelesTrapezoid | CellShape::Trapezoid)
    }
}

impl fmt::Display for CellShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Zero test: exact for exact scalars, relative to `scale` for floats.
fn vanishes(x: &Scalar, scale: f64) -> bool {
    if x.is_exact() {
        x.is_zero()
    } else {
        x.to_f64().abs() <= 1e-9 * scale.max(1e-300)
    }
}

fn same(x: &Scalar, y: &Scalar, scale: f64) -> bool {
    vanishes(&(x - y), scale)
}

pub fn classify(p: &Polygon) -> CellShape {
    let n = p.len();
    if n == 3 {
        return CellShape::Triangle;
    }
    if n != 4 {
        return CellShape::Polygon(n);
    }
    let e = p.edges();
    let scale = e.iter().map(|v| v.norm2().to_f64()).fold(0.0, f64::max);
    let par02 = vanishes(&e[0].cross(&e[2]), scale);
    let par13 = vanishes(&e[1].cross(&e[3]), scale);
    let right = vanishes(&e[0].dot(&e[1]), scale);
    let equal01 = same(&e[0].norm2(), &e[1].norm2(), scale);
    match (par02, par13) {
        (true, true) => match (right, equal01) {
            (true, true) => CellShape::Square,
            (true, false) => CellShape::Rectangle,
            (false, true) => CellShape::Rhombus,
            (false, false) => CellShape::Parallelogram,
        },
        (true, false) => {
            if same(&e[1].norm2(), &e[3].norm2(), scale) {
                CellShape::IsoscelesTrapezoid
            } else {
                CellShape::Trapezoid
            }
        }
        (false, true) => {
            if same(&e[0].norm2(), &e[2].norm2(), scale) {
                CellShape::IsoscelesTrapezoid
            } else {
                CellShape::Trapezoid
            }
        }
        (false, false) => CellShape::Quadrilateral,
    }
}

/// Per-corner invariants (|eᵢ|², eᵢ·eᵢ₊₁, eᵢ×eᵢ₊₁), which determine a
/// polygon up to rotation and translation.
fn corner_data(p: &Polygon) -> Vec<[Scalar; 3]> {
    let e = p.edges();
    let n = e.len();
    (0..n)
        .map(|i| {
            let (u, v) = (&e[i], &e[(i + 1) % n]);
            [u.norm2(), u.dot(v), u.cross(v)]
        })
        .collect()
}

fn rotation_congruent(p: &Polygon, q: &Polygon) -> bool {
    if p.len() != q.len() {
        return false;
    }
    let (a, b) = (corner_data(p), corner_data(q));
    let n = a.len();
    let scale = a
        .iter()
        .chain(b.iter())
        .map(|c| c[0].to_f64())
        .fold(0.0, f64::max);
    (0..n).any(|shift| {
        (0..n).all(|i| {
            let (x, y) = (&a[i], &b[(i + shift) % n]);
            (0..3).all(|k| same(&x[k], &y[k], scale))
        })
    })
}

/// Congruent by a rigid motion, allowing reflections.
pub fn congruent(p: &Polygon, q: &Polygon) -> bool {
    rotation_congruent(p, q) || rotation_congruent(p, &q.map_linear(&Matrix2::diag(-1, 1)))
}

/// Shapes and areas of the cells.
#[derive(Clone, Debug)]
pub struct Census {
    pub shapes: Vec<CellShape>,
    pub areas: Vec<Scalar>,
    /// Classes of mutually congruent cells, as lists of cell indices.
    pub congruence_classes: Vec<Vec<usize>>,
}

impl Census {
    pub fn count(&self, pred: impl Fn(&CellShape) -> bool) -> usize {
        self.shapes.iter().filter(|s| pred(s)).count()
    }

    pub fn counts(&self) -> BTreeMap<String, usize> {
        let mut m = BTreeMap::new();
        for s in &self.shapes {
            *m.entry(s.name()).or_insert(0) += 1;
        }
        m
    }

    pub fn summary(&self) -> String {
        self.counts()
            .iter()
            .map(|(k, v)| format!("{v} {k}"))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

pub fn census(s: &Surface) -> Census {
    let shapes: Vec<CellShape> = s.polygons().iter().map(classify).collect();
    let areas = s.polygons().iter().map(Polygon::area).collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, p) in s.polygons().iter().enumerate() {
        match classes.iter_mut().find(|c| congruent(s.polygon(c[0]), p)) {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }
    Census {
        shapes,
        areas,
        congruence_classes: classes,
    }
}
