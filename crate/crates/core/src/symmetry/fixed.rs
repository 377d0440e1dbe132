//! Fixed points of an isometry of a surface onto itself.
//!
//! A fixed point is a vertex, an interior point of an edge or an interior
//! point of a cell. Vertices and edges are decided combinatorially. Inside a
//! cell mapped to itself the map is affine and permutes the corners, so it
//! fixes their average: a rotation fixes only that point and a reflection
//! fixes the chord through it along its mirror.

use std::collections::{HashMap, HashSet};

use crate::numeric::{Scalar, Vec2};
use crate::surface::{EdgeRef, Surface};

use super::{Isometry, Orientation, SymmetryError, ISOMETRY_FLOAT_TOL};

/// A point of the decomposition.
#[derive(Clone, Debug, PartialEq)]
pub enum Location {
    /// A vertex, by its index among the vertex cycles of the decomposition.
    Vertex { cone: usize },
    /// The point at parameter `0 < t < 1` along an edge, measured from its
    /// start. The edge is the first side of its gluing.
    Edge { edge: EdgeRef, t: Scalar },
    /// A point inside a cell, in the cell's chart.
    Interior { cell: usize, point: Vec2 },
}

impl Location {
    fn key(&self) -> String {
        match self {
            Location::Vertex { cone } => format!("v{cone}"),
            Location::Edge { edge, t } => {
                format!("e{}.{}:{}", edge.polygon, edge.edge, scalar_key(t))
            }
            Location::Interior { cell, point } => {
                format!("c{cell}:{},{}", scalar_key(&point.x), scalar_key(&point.y))
            }
        }
    }
}

/// A fixed segment inside one cell (or along one of its edges).
#[derive(Clone, Debug, PartialEq)]
pub struct FixedSegment {
    pub cell: usize,
    pub from: Vec2,
    pub to: Vec2,
    pub ends: [Location; 2],
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixedPoints {
    /// The identity fixes everything; the lists are then empty.
    pub everything: bool,
    /// Isolated fixed points.
    pub points: Vec<Location>,
    /// Pieces of fixed curves.
    pub segments: Vec<FixedSegment>,
    /// Connected components of the fixed set.
    pub components: usize,
}

impl FixedPoints {
    pub fn is_empty(&self) -> bool {
        !self.everything && self.points.is_empty() && self.segments.is_empty()
    }
}

fn scalar_key(s: &Scalar) -> String {
    if s.is_exact() {
        s.simplify().key()
    } else {
        let x = s.to_f64();
        let x = if x.abs() < ISOMETRY_FLOAT_TOL { 0.0 } else { x };
        format!("{x:.7}")
    }
}

fn sign(s: &Scalar) -> i8 {
    if s.is_exact() {
        s.sign().as_i8()
    } else {
        let x = s.to_f64();
        if x.abs() < ISOMETRY_FLOAT_TOL {
            0
        } else if x > 0.0 {
            1
        } else {
            -1
        }
    }
}

struct Context<'a> {
    surface: &'a Surface,
    cone_of: HashMap<(usize, usize), usize>,
    side_b: HashMap<EdgeRef, EdgeRef>,
}

impl Context<'_> {
    /// Edge location on the first side of the gluing.
    fn edge_location(&self, e: EdgeRef, t: Scalar) -> Location {
        match self.side_b.get(&e) {
            Some(&a) => Location::Edge {
                edge: a,
                t: (&Scalar::one() - &t).simplify(),
            },
            None => Location::Edge {
                edge: e,
                t: t.simplify(),
            },
        }
    }

    fn vertex(&self, cell: usize, corner: usize) -> Location {
        let n = self.surface.polygon(cell).len();
        Location::Vertex {
            cone: self.cone_of[&(cell, corner % n)],
        }
    }
}

/// The fixed set of an automorphism.
pub fn fixed_points(iso: &Isometry) -> Result<FixedPoints, SymmetryError> {
    if !std::sync::Arc::ptr_eq(&iso.source, &iso.target) {
        return Err(SymmetryError::Mismatched);
    }
    if iso.is_identity() {
        return Ok(FixedPoints {
            everything: true,
            points: Vec::new(),
            segments: Vec::new(),
            components: 1,
        });
    }
    let s = &iso.source.surface;
    let cones = s.vertex_cycles()?;
    let mut cone_of = HashMap::new();
    for c in &cones {
        for &corner in &c.corners {
            cone_of.insert(corner, c.id);
        }
    }
    let side_b = s.gluings().iter().map(|g| (g.b, g.a)).collect();
    let cx = Context {
        surface: s,
        cone_of,
        side_b,
    };
    let half = Scalar::ratio(1, 2);
    let mut points = Vec::new();
    let mut segments = Vec::new();

    for c in &cones {
        let (p, v) = c.corners[0];
        if cx.cone_of[&iso.flag_map(p, v)] == c.id {
            points.push(Location::Vertex { cone: c.id });
        }
    }

    for g in s.gluings() {
        let img = iso.edge_map(g.a);
        let same = img == g.a;
        let swapped = img == g.b;
        if !same && !swapped {
            continue;
        }
        let preserving = iso.orientation == Orientation::Preserving;
        if same != preserving {
            points.push(Location::Edge {
                edge: g.a,
                t: half.clone(),
            });
        } else {
            let p = s.polygon(g.a.polygon);
            segments.push(FixedSegment {
                cell: g.a.polygon,
                from: p.vertex(g.a.edge).clone(),
                to: p.vertex(g.a.edge + 1).clone(),
                ends: [
                    cx.vertex(g.a.polygon, g.a.edge),
                    cx.vertex(g.a.polygon, g.a.edge + 1),
                ],
            });
        }
    }

    for (i, img) in iso.cells.iter().enumerate() {
        if img.cell != i {
            continue;
        }
        let p = s.polygon(i);
        let n = p.len();
        let mut c = Vec2::zero();
        for v in p.vertices() {
            c = &c + v;
        }
        let c = c.scale(&Scalar::ratio(1, n as i64));
        match iso.orientation {
            Orientation::Preserving => points.push(Location::Interior { cell: i, point: c }),
            Orientation::Reversing => {
                let m = iso.local_derivative(i);
                let mut d = &m.apply(&Vec2::new(1, 0)) + &Vec2::new(1, 0);
                if sign(&d.norm2()) == 0 {
                    d = &m.apply(&Vec2::new(0, 1)) + &Vec2::new(0, 1);
                }
                let f: Vec<Scalar> = p.vertices().iter().map(|v| d.cross(&(v - &c))).collect();
                let mut ends = Vec::new();
                for j in 0..n {
                    let (fa, fb) = (&f[j], &f[(j + 1) % n]);
                    if sign(fa) == 0 {
                        ends.push((p.vertex(j).clone(), cx.vertex(i, j)));
                    } else if sign(fa) * sign(fb) < 0 {
                        let t = fa
                            .checked_div(&(fa - fb))
                            .map_err(crate::surface::SurfaceError::from)?;
                        let pos = p.vertex(j) + &p.edge(j).scale(&t);
                        ends.push((pos, cx.edge_location(EdgeRef::new(i, j), t)));
                    }
                }
                if ends.len() != 2 {
                    return Err(crate::surface::SurfaceError::Inconsistent(format!(
                        "mirror of cell {i} meets its boundary {} times",
                        ends.len()
                    ))
                    .into());
                }
                let (b, a) = (ends.pop().expect("two"), ends.pop().expect("two"));
                segments.push(FixedSegment {
                    cell: i,
                    from: a.0,
                    to: b.0,
                    ends: [a.1, b.1],
                });
            }
        }
    }

    // components of the union of points and segments
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut parent: Vec<usize> = Vec::new();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut id = |key: String, parent: &mut Vec<usize>| {
        *index.entry(key).or_insert_with(|| {
            parent.push(parent.len());
            parent.len() - 1
        })
    };
    let mut on_segments = HashSet::new();
    for seg in &segments {
        let a = id(seg.ends[0].key(), &mut parent);
        let b = id(seg.ends[1].key(), &mut parent);
        on_segments.insert(seg.ends[0].key());
        on_segments.insert(seg.ends[1].key());
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    points.retain(|p| !on_segments.contains(&p.key()));
    for p in &points {
        id(p.key(), &mut parent);
    }
    let components = (0..parent.len())
        .map(|x| find(&mut parent, x))
        .collect::<HashSet<_>>()
        .len();
    Ok(FixedPoints {
        everything: false,
        points,
        segments,
        components,
    })
}
