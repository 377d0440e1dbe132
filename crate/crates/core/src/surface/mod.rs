//! Flat surfaces presented as convex polygons with edge identifications.
//!
//! Each polygon lives in its own chart. Edge `i` of a polygon runs from
//! vertex `i` to vertex `i + 1` (indices mod the vertex count), so edges are
//! read counterclockwise.

mod cones;
mod format;
mod reglue;

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::numeric::{orient, Matrix2, NumericError, Scalar, ScalarMode, Sign, Vec2};

pub use cones::ConePoint;
pub use format::{read_surface, write_surface, FormatError};
pub use reglue::Axis;

/// Absolute tolerance for comparing float edge vectors.
pub const EDGE_FLOAT_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum SurfaceError {
    #[error("surface is invalid: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("singular matrix")]
    Singular,
    #[error("inconsistent complex: {0}")]
    Inconsistent(String),
    #[error("cone angle at vertex cycle {cycle} is {angle} rad, not a multiple of pi")]
    AngleNotMultipleOfPi { cycle: usize, angle: f64 },
    #[error("polygon {0} is not a parallelogram")]
    NotAParallelogram(usize),
    #[error("edges of polygon {0} are not glued as required: {1}")]
    BadGluing(usize, String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// A strictly convex polygon given by its vertices in counterclockwise order.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon {
    vertices: Vec<Vec2>,
}

impl Polygon {
    pub fn new(vertices: Vec<Vec2>) -> Self {
        Polygon { vertices }
    }

    /// Polygon with the given edge vectors (summing to zero), starting at the
    /// origin.
    pub fn from_edges(edges: &[Vec2]) -> Self {
        let mut vertices = Vec::with_capacity(edges.len());
        let mut p = Vec2::zero();
        for e in edges {
            vertices.push(p.clone());
            p = &p + e;
        }
        Polygon { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Vec2 {
        &self.vertices[i % self.vertices.len()]
    }

    pub fn edge(&self, i: usize) -> Vec2 {
        let n = self.vertices.len();
        &self.vertices[(i + 1) % n] - &self.vertices[i % n]
    }

    pub fn edges(&self) -> Vec<Vec2> {
        (0..self.len()).map(|i| self.edge(i)).collect()
    }

    /// Signed shoelace area.
    pub fn area(&self) -> Scalar {
        let n = self.len();
        let mut twice = Scalar::zero();
        for i in 0..n {
            twice = &twice + &self.vertices[i].cross(&self.vertices[(i + 1) % n]);
        }
        &twice * &Scalar::ratio(1, 2)
    }

    pub fn is_exact(&self) -> bool {
        self.vertices.iter().all(Vec2::is_exact)
    }

    pub fn mode(&self) -> ScalarMode {
        self.vertices
            .iter()
            .map(Vec2::mode)
            .max()
            .unwrap_or(ScalarMode::Rational)
    }

    /// Every vertex lies strictly to the left of every edge it is not on.
    /// Float coordinates use a relative threshold on the cross products.
    pub fn is_strictly_convex(&self) -> bool {
        let n = self.len();
        if n < 3 {
            return false;
        }
        let exact = self.is_exact();
        for i in 0..n {
            let a = &self.vertices[i];
            let b = &self.vertices[(i + 1) % n];
            let e = b - a;
            for j in 0..n {
                if j == i || j == (i + 1) % n {
                    continue;
                }
                let w = &self.vertices[j] - a;
                if exact {
                    if orient(a, b, &self.vertices[j]) != Sign::Positive {
                        return false;
                    }
                } else {
                    let (ex, ey) = e.to_f64();
                    let (wx, wy) = w.to_f64();
                    let scale = (ex.hypot(ey) * wx.hypot(wy)).max(f64::MIN_POSITIVE);
                    if (ex * wy - ey * wx) / scale <= 1e-12 {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Translated so that vertex 0 is at the origin.
    pub fn normalized(&self) -> Polygon {
        Polygon::from_edges(&self.edges())
    }

    pub fn translate(&self, t: &Vec2) -> Polygon {
        Polygon {
            vertices: self.vertices.iter().map(|v| v + t).collect(),
        }
    }

    /// Image under `m`, reordered to stay counterclockwise when `det m < 0`:
    /// new vertex `k` is the image of old vertex `(n − k) mod n`, so old edge
    /// `j` becomes new edge `(n − 1 − j) mod n`.
    pub fn map_linear(&self, m: &Matrix2) -> Polygon {
        let n = self.len();
        let imgs: Vec<Vec2> = self.vertices.iter().map(|v| m.apply(v)).collect();
        if m.det().is_negative() {
            Polygon {
                vertices: (0..n).map(|k| imgs[(n - k) % n].clone()).collect(),
            }
        } else {
            Polygon { vertices: imgs }
        }
    }

    pub fn centroid_f64(&self) -> (f64, f64) {
        let n = self.len() as f64;
        let (mut x, mut y) = (0.0, 0.0);
        for v in &self.vertices {
            let (a, b) = v.to_f64();
            x += a;
            y += b;
        }
        (x / n, y / n)
    }
}

/// An edge of a surface: `(polygon index, edge index)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeRef {
    pub polygon: usize,
    pub edge: usize,
}

impl EdgeRef {
    pub fn new(polygon: usize, edge: usize) -> Self {
        EdgeRef { polygon, edge }
    }
}

impl fmt::Display for EdgeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.polygon, self.edge)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GluingKind {
    /// Edge vectors are opposite; identified by a translation.
    Translation,
    /// Edge vectors are equal; identified by a rotation by π.
    PointReflection,
}

impl GluingKind {
    pub fn name(self) -> &'static str {
        match self {
            GluingKind::Translation => "translation",
            GluingKind::PointReflection => "point-reflection",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "translation" => Some(GluingKind::Translation),
            "point-reflection" => Some(GluingKind::PointReflection),
            _ => None,
        }
    }

    /// +1 for translations, −1 for point reflections.
    pub fn sign(self) -> i8 {
        match self {
            GluingKind::Translation => 1,
            GluingKind::PointReflection => -1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gluing {
    pub a: EdgeRef,
    pub b: EdgeRef,
    pub kind: GluingKind,
}

impl Gluing {
    pub fn new(a: (usize, usize), b: (usize, usize), kind: GluingKind) -> Self {
        Gluing {
            a: EdgeRef::new(a.0, a.1),
            b: EdgeRef::new(b.0, b.1),
            kind,
        }
    }

    pub fn translation(a: (usize, usize), b: (usize, usize)) -> Self {
        Gluing::new(a, b, GluingKind::Translation)
    }

    pub fn point_reflection(a: (usize, usize), b: (usize, usize)) -> Self {
        Gluing::new(a, b, GluingKind::PointReflection)
    }

    /// Same gluing with the smaller edge first.
    pub fn normalized(&self) -> Gluing {
        if self.b < self.a {
            Gluing {
                a: self.b,
                b: self.a,
                kind: self.kind,
            }
        } else {
            *self
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SurfaceKind {
    Translation,
    HalfTranslation,
}

impl SurfaceKind {
    pub fn name(self) -> &'static str {
        match self {
            SurfaceKind::Translation => "translation",
            SurfaceKind::HalfTranslation => "half-translation",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "translation" => Some(SurfaceKind::Translation),
            "half-translation" => Some(SurfaceKind::HalfTranslation),
            _ => None,
        }
    }
}

/// A single failed invariant.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    TooFewVertices { polygon: usize },
    NotStrictlyConvex { polygon: usize },
    NonPositiveArea { polygon: usize },
    EdgeOutOfRange { gluing: usize },
    SelfGluedEdge { gluing: usize },
    EdgeMatchedTwice { edge: EdgeRef },
    EdgeUnmatched { edge: EdgeRef },
    VectorMismatch { gluing: usize },
    KindMismatch { gluing: usize },
    Disconnected,
    ConeAngle { detail: String },
}

impl Violation {
    /// Stable machine-readable tag.
    pub fn code(&self) -> &'static str {
        match self {
            Violation::TooFewVertices { .. } => "too few vertices",
            Violation::NotStrictlyConvex { .. } => "not strictly convex",
            Violation::NonPositiveArea { .. } => "non-positive area",
            Violation::EdgeOutOfRange { .. } => "edge out of range",
            Violation::SelfGluedEdge { .. } => "edge glued to itself",
            Violation::EdgeMatchedTwice { .. } => "edge matched twice",
            Violation::EdgeUnmatched { .. } => "edge unmatched",
            Violation::VectorMismatch { .. } => "vector mismatch",
            Violation::KindMismatch { .. } => "kind mismatch",
            Violation::Disconnected => "disconnected",
            Violation::ConeAngle { .. } => "cone angle",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooFewVertices { polygon }
            | Violation::NotStrictlyConvex { polygon }
            | Violation::NonPositiveArea { polygon } => {
                write!(f, "{}: polygon {}", self.code(), polygon)
            }
            Violation::EdgeOutOfRange { gluing }
            | Violation::SelfGluedEdge { gluing }
            | Violation::VectorMismatch { gluing }
            | Violation::KindMismatch { gluing } => write!(f, "{}: gluing {}", self.code(), gluing),
            Violation::EdgeMatchedTwice { edge } | Violation::EdgeUnmatched { edge } => {
                write!(f, "{}: edge {}", self.code(), edge)
            }
            Violation::Disconnected => write!(f, "{}", self.code()),
            Violation::ConeAngle { detail } => write!(f, "{}: {}", self.code(), detail),
        }
    }
}

/// Polygons, a matching of their edges and the kind of structure.
#[derive(Clone, Debug)]
pub struct Surface {
    polygons: Vec<Polygon>,
    gluings: Vec<Gluing>,
    kind: SurfaceKind,
    partner: Vec<Vec<Option<(EdgeRef, GluingKind)>>>,
}

impl Surface {
    /// Assembles a surface without validating it.
    pub fn new(polygons: Vec<Polygon>, gluings: Vec<Gluing>, kind: SurfaceKind) -> Self {
        let mut partner: Vec<Vec<Option<(EdgeRef, GluingKind)>>> =
            polygons.iter().map(|p| vec![None; p.len()]).collect();
        for g in &gluings {
            let ok = |e: &EdgeRef| e.polygon < polygons.len() && e.edge < polygons[e.polygon].len();
            if ok(&g.a) && ok(&g.b) {
                partner[g.a.polygon][g.a.edge] = Some((g.b, g.kind));
                partner[g.b.polygon][g.b.edge] = Some((g.a, g.kind));
            }
        }
        Surface {
            polygons,
            gluings,
            kind,
            partner,
        }
    }

    /// Assembles and validates.
    pub fn checked(
        polygons: Vec<Polygon>,
        gluings: Vec<Gluing>,
        kind: SurfaceKind,
    ) -> Result<Self, SurfaceError> {
        let s = Surface::new(polygons, gluings, kind);
        let v = s.validate();
        if v.is_empty() {
            Ok(s)
        } else {
            Err(SurfaceError::Invalid(v))
        }
    }

    pub fn polygons(&self) -> &[Polygon] {
        &self.polygons
    }

    pub fn polygon(&self, i: usize) -> &Polygon {
        &self.polygons[i]
    }

    pub fn gluings(&self) -> &[Gluing] {
        &self.gluings
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    /// The edge glued to `e` and the kind of that gluing.
    pub fn partner(&self, e: EdgeRef) -> Option<(EdgeRef, GluingKind)> {
        self.partner.get(e.polygon)?.get(e.edge).copied().flatten()
    }

    pub fn edge_vector(&self, e: EdgeRef) -> Vec2 {
        self.polygons[e.polygon].edge(e.edge)
    }

    pub fn num_edges(&self) -> usize {
        self.polygons.iter().map(Polygon::len).sum()
    }

    pub fn is_exact(&self) -> bool {
        self.polygons.iter().all(Polygon::is_exact)
    }

    /// Widest scalar mode among the coordinates.
    pub fn mode(&self) -> ScalarMode {
        self.polygons
            .iter()
            .map(Polygon::mode)
            .max()
            .unwrap_or(ScalarMode::Rational)
    }

    /// Checks every invariant and lists what fails.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (i, p) in self.polygons.iter().enumerate() {
            if p.len() < 3 {
                out.push(Violation::TooFewVertices { polygon: i });
                continue;
            }
            if !p.area().is_positive() {
                out.push(Violation::NonPositiveArea { polygon: i });
            }
            if !p.is_strictly_convex() {
                out.push(Violation::NotStrictlyConvex { polygon: i });
            }
        }
        let mut seen: HashSet<EdgeRef> = HashSet::new();
        let mut twice: Vec<EdgeRef> = Vec::new();
        for (gi, g) in self.gluings.iter().enumerate() {
            let in_range = |e: &EdgeRef| {
                e.polygon < self.polygons.len() && e.edge < self.polygons[e.polygon].len()
            };
            if !in_range(&g.a) || !in_range(&g.b) {
                out.push(Violation::EdgeOutOfRange { gluing: gi });
                continue;
            }
            if g.a == g.b {
                out.push(Violation::SelfGluedEdge { gluing: gi });
            }
            for e in [g.a, g.b] {
                if !seen.insert(e) && !twice.contains(&e) {
                    twice.push(e);
                }
            }
            if self.kind == SurfaceKind::Translation && g.kind != GluingKind::Translation {
                out.push(Violation::KindMismatch { gluing: gi });
            }
            let va = self.edge_vector(g.a);
            let vb = self.edge_vector(g.b);
            let target = match g.kind {
                GluingKind::Translation => -&vb,
                GluingKind::PointReflection => vb,
            };
            let matches = if va.is_exact() && target.is_exact() {
                va == target
            } else {
                va.approx_eq(&target, EDGE_FLOAT_TOL)
            };
            if !matches {
                out.push(Violation::VectorMismatch { gluing: gi });
            }
        }
        for e in twice {
            out.push(Violation::EdgeMatchedTwice { edge: e });
        }
        for (pi, p) in self.polygons.iter().enumerate() {
            for ei in 0..p.len() {
                let e = EdgeRef::new(pi, ei);
                if !seen.contains(&e) {
                    out.push(Violation::EdgeUnmatched { edge: e });
                }
            }
        }
        if !self.is_connected() {
            out.push(Violation::Disconnected);
        }
        if out.is_empty() {
            match self.vertex_cycles() {
                Ok(cycles) => {
                    for c in cycles {
                        if c.angle_in_pi == 0 {
                            out.push(Violation::ConeAngle {
                                detail: format!("vertex cycle {} has zero angle", c.id),
                            });
                        }
                        if self.kind == SurfaceKind::Translation && c.angle_in_pi % 2 != 0 {
                            out.push(Violation::ConeAngle {
                                detail: format!(
                                    "vertex cycle {} has angle {}pi on a translation surface",
                                    c.id, c.angle_in_pi
                                ),
                            });
                        }
                    }
                }
                Err(e) => out.push(Violation::ConeAngle {
                    detail: e.to_string(),
                }),
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    fn is_connected(&self) -> bool {
        let n = self.polygons.len();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(p) = stack.pop() {
            for e in 0..self.polygons[p].len() {
                if let Some((q, _)) = self.partner(EdgeRef::new(p, e)) {
                    if !seen[q.polygon] {
                        seen[q.polygon] = true;
                        stack.push(q.polygon);
                    }
                }
            }
        }
        seen.into_iter().all(|x| x)
    }

    /// Sum of the polygon areas.
    pub fn area(&self) -> Scalar {
        self.polygons
            .iter()
            .fold(Scalar::zero(), |acc, p| &acc + &p.area())
    }

    /// Genus from the Euler characteristic `V − E + F = 2 − 2g`.
    pub fn genus(&self) -> Result<usize, SurfaceError> {
        let v = self.vertex_cycles()?.len() as i64;
        let e = self.gluings.len() as i64;
        let f = self.polygons.len() as i64;
        if 2 * e != self.num_edges() as i64 {
            return Err(SurfaceError::Inconsistent(
                "gluings do not pair all edges".into(),
            ));
        }
        let chi = v - e + f;
        if chi > 2 || chi % 2 != 0 {
            return Err(SurfaceError::Inconsistent(format!(
                "Euler characteristic {chi} is not that of a closed orientable surface"
            )));
        }
        Ok(((2 - chi) / 2) as usize)
    }

    /// Image under `m`. Orientation-reversing maps reorder vertices so that
    /// polygons stay counterclockwise, and gluings are relabelled to match.
    pub fn apply_linear(&self, m: &Matrix2) -> Result<Surface, SurfaceError> {
        let det = m.det();
        if det.is_zero() {
            return Err(SurfaceError::Singular);
        }
        let reverse = det.is_negative();
        let polygons: Vec<Polygon> = self.polygons.iter().map(|p| p.map_linear(m)).collect();
        let relabel = |e: EdgeRef| {
            if reverse {
                let n = self.polygons[e.polygon].len();
                EdgeRef::new(e.polygon, (2 * n - 1 - e.edge) % n)
            } else {
                e
            }
        };
        let gluings = self
            .gluings
            .iter()
            .map(|g| Gluing {
                a: relabel(g.a),
                b: relabel(g.b),
                kind: g.kind,
            })
            .collect();
        Ok(Surface::new(polygons, gluings, self.kind))
    }

    /// Same polygons up to per-polygon translation and the same gluings.
    /// Float coordinates are compared within [`EDGE_FLOAT_TOL`].
    pub fn same_as(&self, other: &Surface) -> bool {
        if self.kind != other.kind || self.polygons.len() != other.polygons.len() {
            return false;
        }
        for (p, q) in self.polygons.iter().zip(&other.polygons) {
            if p.len() != q.len() {
                return false;
            }
            for (a, b) in p.edges().iter().zip(q.edges().iter()) {
                let eq = if a.is_exact() && b.is_exact() {
                    a == b
                } else {
                    a.approx_eq(b, EDGE_FLOAT_TOL)
                };
                if !eq {
                    return false;
                }
            }
        }
        let key = |s: &Surface| {
            let mut g: Vec<_> = s
                .gluings
                .iter()
                .map(|g| {
                    let n = g.normalized();
                    (n.a, n.b, n.kind)
                })
                .collect();
            g.sort();
            g
        };
        key(self) == key(other)
    }

    /// Every polygon translated so that its vertex 0 is the origin.
    pub fn normalized(&self) -> Surface {
        Surface::new(
            self.polygons.iter().map(Polygon::normalized).collect(),
            self.gluings.clone(),
            self.kind,
        )
    }

    /// All coordinates converted to `mode` where possible.
    pub fn to_mode(&self, mode: ScalarMode) -> Option<Surface> {
        let mut polys = Vec::with_capacity(self.polygons.len());
        for p in &self.polygons {
            let mut vs = Vec::with_capacity(p.len());
            for v in p.vertices() {
                vs.push(Vec2::new(v.x.to_mode(mode)?, v.y.to_mode(mode)?));
            }
            polys.push(Polygon::new(vs));
        }
        Some(Surface::new(polys, self.gluings.clone(), self.kind))
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn unit_square() -> Polygon {
        Polygon::new(vec![
            Vec2::new(0, 0),
            Vec2::new(1, 0),
            Vec2::new(1, 1),
            Vec2::new(0, 1),
        ])
    }

    pub(crate) fn unit_torus() -> Surface {
        Surface::new(
            vec![unit_square()],
            vec![
                Gluing::translation((0, 0), (0, 2)),
                Gluing::translation((0, 1), (0, 3)),
            ],
            SurfaceKind::Translation,
        )
    }

    #[test]
    fn torus_is_valid() {
        let t = unit_torus();
        assert!(t.validate().is_empty(), "{:?}", t.validate());
        assert_eq!(t.genus().unwrap(), 1);
        assert_eq!(t.area(), Scalar::one());
        let c = t.vertex_cycles().unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].angle_in_pi, 2);
    }

    #[test]
    fn double_matching_is_reported() {
        let s = Surface::new(
            vec![unit_square()],
            vec![
                Gluing::translation((0, 0), (0, 2)),
                Gluing::translation((0, 0), (0, 2)),
            ],
            SurfaceKind::Translation,
        );
        let v = s.validate();
        assert!(v.iter().any(|v| v.code() == "edge matched twice"));
        assert!(v.iter().any(|v| v.code() == "edge unmatched"));
    }

    #[test]
    fn vector_mismatch_is_reported() {
        let s = Surface::new(
            vec![unit_square()],
            vec![
                Gluing::translation((0, 0), (0, 1)),
                Gluing::translation((0, 2), (0, 3)),
            ],
            SurfaceKind::Translation,
        );
        assert!(s.validate().iter().any(|v| v.code() == "vector mismatch"));
    }

    #[test]
    fn non_convex_polygon_is_reported() {
        let p = Polygon::new(vec![
            Vec2::new(0, 0),
            Vec2::new(2, 0),
            Vec2::new(1, 1),
            Vec2::new(2, 2),
            Vec2::new(0, 2),
        ]);
        assert!(!p.is_strictly_convex());
        let collinear = Polygon::new(vec![
            Vec2::new(0, 0),
            Vec2::new(1, 0),
            Vec2::new(2, 0),
            Vec2::new(1, 1),
        ]);
        assert!(!collinear.is_strictly_convex());
    }

    #[test]
    fn reflection_keeps_counterclockwise_order() {
        let t = unit_torus();
        let r = t.apply_linear(&Matrix2::diag(-1, 1)).unwrap();
        assert!(r.validate().is_empty(), "{:?}", r.validate());
        assert_eq!(r.area(), Scalar::one());
        assert!(t.apply_linear(&Matrix2::new(1, 1, 1, 1)).is_err());
    }

    #[test]
    fn float_torus_tolerates_rounding() {
        let p = Polygon::new(vec![
            Vec2::from_f64(0.0, 0.0),
            Vec2::from_f64(0.1 + 0.2, 0.0),
            Vec2::from_f64(0.3, 1.0),
            Vec2::from_f64(0.0, 1.0),
        ]);
        let s = Surface::new(
            vec![p],
            vec![
                Gluing::translation((0, 0), (0, 2)),
                Gluing::translation((0, 1), (0, 3)),
            ],
            SurfaceKind::Translation,
        );
        assert!(s.validate().is_empty(), "{:?}", s.validate());
        assert_eq!(s.genus().unwrap(), 1);
    }
}
