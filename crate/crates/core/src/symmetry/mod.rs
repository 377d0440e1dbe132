//! Isometries and affine equivalences, found as automorphisms of the
//! Delaunay decomposition.
//!
//! An isometry sends cells to cells. On a cell with `n` corners it acts on
//! corner indices by `j ↦ o·j + k (mod n)`, with `o = +1` when it preserves
//! orientation and `o = −1` otherwise, and on chart vectors by `s·D`, where
//! `D` is the global derivative and `s = ±1` a per-cell sign that is only
//! ever `−1` on half-translation surfaces. The sign of cell 0 is `+1`.
//!
//! Fixing the image of one flag forces `D` (two edge vectors of the base
//! cell determine it), and the rest of the map follows by walking across
//! gluings, so the search over flags is finite and complete.

mod fixed;

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use crate::delaunay::{Decomposition, DelaunayError};
use crate::numeric::{Matrix2, Scalar, Vec2};
use crate::surface::{EdgeRef, Surface, SurfaceError, SurfaceKind};

pub use fixed::{fixed_points, FixedPoints, FixedSegment, Location};

/// Tolerance on `DᵀD − I` and on edge comparisons for float surfaces.
pub const ISOMETRY_FLOAT_TOL: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum SymmetryError {
    #[error("isometries act on different surfaces")]
    Mismatched,
    #[error(transparent)]
    Delaunay(#[from] DelaunayError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Preserving,
    Reversing,
}

impl Orientation {
    fn sign(self) -> i64 {
        match self {
            Orientation::Preserving => 1,
            Orientation::Reversing => -1,
        }
    }

    fn from_sign(s: i64) -> Self {
        if s > 0 {
            Orientation::Preserving
        } else {
            Orientation::Reversing
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Orientation::Preserving => "preserving",
            Orientation::Reversing => "reversing",
        }
    }
}

/// Where one cell goes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CellImage {
    pub cell: usize,
    /// Corner `j` goes to corner `o·j + shift`.
    pub shift: usize,
    /// Chart sign: the map is `sign · derivative` in this cell's chart.
    pub sign: i8,
}

/// An isometry between the Delaunay decompositions of two surfaces,
/// usually an automorphism of one surface.
#[derive(Clone, Debug)]
pub struct Isometry {
    source: Arc<Decomposition>,
    target: Arc<Decomposition>,
    pub derivative: Matrix2,
    pub orientation: Orientation,
    pub cells: Vec<CellImage>,
}

impl PartialEq for Isometry {
    /// Same action on flags; derivatives then agree automatically.
    fn eq(&self, o: &Isometry) -> bool {
        self.orientation == o.orientation && self.cells == o.cells
    }
}

impl Isometry {
    pub fn source(&self) -> &Decomposition {
        &self.source
    }

    pub fn target(&self) -> &Decomposition {
        &self.target
    }

    /// Image of the flag `(cell, corner)`.
    pub fn flag_map(&self, cell: usize, corner: usize) -> (usize, usize) {
        let img = self.cells[cell];
        let n = self.target.surface.polygon(img.cell).len() as i64;
        let j = (self.orientation.sign() * corner as i64 + img.shift as i64).rem_euclid(n);
        (img.cell, j as usize)
    }

    /// Image of an edge of the source, as an edge of the target. Reversing
    /// maps send edge `j` to edge `k − j − 1`, traversed backwards.
    pub fn edge_map(&self, e: EdgeRef) -> EdgeRef {
        let img = self.cells[e.polygon];
        let n = self.target.surface.polygon(img.cell).len();
        EdgeRef::new(
            img.cell,
            image_index(e.edge, img.shift, n, self.orientation),
        )
    }

    /// The linear part in the chart of a given source cell.
    pub fn local_derivative(&self, cell: usize) -> Matrix2 {
        if self.cells[cell].sign > 0 {
            self.derivative.clone()
        } else {
            self.derivative.scale(&Scalar::int(-1))
        }
    }

    pub fn is_identity(&self) -> bool {
        self.orientation == Orientation::Preserving
            && self
                .cells
                .iter()
                .enumerate()
                .all(|(i, c)| c.cell == i && c.shift == 0 && c.sign == 1)
    }

    /// Conventional name by derivative signature: `τ` for `−I`, `σ₁`/`σ₂`
    /// for the reflections in the horizontal/vertical axis, `ρ₁`/`ρ₂` for
    /// the reflections fixing lines of slope −1/+1.
    pub fn name(&self) -> String {
        let d = &self.derivative;
        let is = |m: Matrix2| {
            if d.is_exact() {
                *d == m
            } else {
                d.approx_eq(&m, ISOMETRY_FLOAT_TOL)
            }
        };
        let name = if self.is_identity() {
            "id"
        } else if is(Matrix2::new(-1, 0, 0, -1)) {
            "τ"
        } else if is(Matrix2::diag(1, -1)) {
            "σ₁"
        } else if is(Matrix2::diag(-1, 1)) {
            "σ₂"
        } else if is(Matrix2::new(0, -1, -1, 0)) {
            "ρ₁"
        } else if is(Matrix2::new(0, 1, 1, 0)) {
            "ρ₂"
        } else if self.orientation == Orientation::Preserving {
            "rotation"
        } else {
            "reflection"
        };
        name.to_string()
    }
}

impl fmt::Display for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}",
            self.name(),
            self.orientation.name(),
            self.derivative
        )
    }
}

fn near(a: &Vec2, b: &Vec2) -> bool {
    if a.is_exact() && b.is_exact() {
        (a - b).is_zero()
    } else {
        a.approx_eq(b, ISOMETRY_FLOAT_TOL)
    }
}

fn sign_scalar(s: i8) -> Scalar {
    Scalar::int(s as i64)
}

/// Index of the image of edge `j` of an `n`-gon.
fn image_index(j: usize, shift: usize, n: usize, o: Orientation) -> usize {
    let (j, k, n) = (j as i64, shift as i64, n as i64);
    match o {
        Orientation::Preserving => (j + k).rem_euclid(n) as usize,
        Orientation::Reversing => (k - j - 1).rem_euclid(n) as usize,
    }
}

/// Image vector of edge `j` of a source cell under a map with the given
/// shift and orientation, read in the target cell.
fn image_edge(t: &Surface, cell: usize, shift: usize, o: Orientation, j: usize) -> Vec2 {
    let p = t.polygon(cell);
    let e = p.edge(image_index(j, shift, p.len(), o));
    match o {
        Orientation::Preserving => e,
        Orientation::Reversing => -e,
    }
}

/// Tries the candidate sending the base flag `(0, 0)` to `(cell, shift)`.
fn try_candidate(
    src: &Arc<Decomposition>,
    dst: &Arc<Decomposition>,
    cell: usize,
    shift: usize,
    o: Orientation,
) -> Option<Isometry> {
    let a = &src.surface;
    let b = &dst.surface;
    let base = a.polygon(0);
    let e = Matrix2::from_columns(&base.edge(0), &base.edge(1));
    let f = Matrix2::from_columns(
        &image_edge(b, cell, shift, o, 0),
        &image_edge(b, cell, shift, o, 1),
    );
    let d = &f * &e.inverse().ok()?;
    if !d.is_orthogonal(ISOMETRY_FLOAT_TOL) {
        return None;
    }
    let det_ok = match o {
        Orientation::Preserving => d.det().is_positive(),
        Orientation::Reversing => d.det().is_negative(),
    };
    if !det_ok {
        return None;
    }
    let nc = a.polygons().len();
    let mut cells: Vec<Option<CellImage>> = vec![None; nc];
    let mut used = vec![false; nc];
    cells[0] = Some(CellImage {
        cell,
        shift,
        sign: 1,
    });
    used[cell] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let img = cells[i].expect("queued cells are assigned");
        let p = a.polygon(i);
        let n = p.len();
        if b.polygon(img.cell).len() != n {
            return None;
        }
        let local = d.scale(&sign_scalar(img.sign));
        for j in 0..n {
            if !near(
                &local.apply(&p.edge(j)),
                &image_edge(b, img.cell, img.shift, o, j),
            ) {
                return None;
            }
        }
        for j in 0..n {
            let (other, kind) = a.partner(EdgeRef::new(i, j))?;
            let ej = image_index(j, img.shift, n, o);
            let (other_img, kind_img) = b.partner(EdgeRef::new(img.cell, ej))?;
            let n2 = a.polygon(other.polygon).len() as i64;
            let k2 = match o {
                Orientation::Preserving => other_img.edge as i64 - other.edge as i64,
                Orientation::Reversing => other_img.edge as i64 + other.edge as i64 + 1,
            }
            .rem_euclid(n2) as usize;
            let s2 = img.sign * kind.sign() * kind_img.sign();
            let want = CellImage {
                cell: other_img.polygon,
                shift: k2,
                sign: s2,
            };
            match cells[other.polygon] {
                Some(have) if have != want => return None,
                Some(_) => {}
                None => {
                    if used[want.cell] {
                        return None;
                    }
                    used[want.cell] = true;
                    cells[other.polygon] = Some(want);
                    queue.push_back(other.polygon);
                }
            }
        }
    }
    let cells: Option<Vec<CellImage>> = cells.into_iter().collect();
    Some(Isometry {
        source: src.clone(),
        target: dst.clone(),
        derivative: d,
        orientation: o,
        cells: cells?,
    })
}

fn search(src: &Arc<Decomposition>, dst: &Arc<Decomposition>) -> Vec<Isometry> {
    let a = &src.surface;
    let b = &dst.surface;
    if a.polygons().len() != b.polygons().len() || a.polygons().is_empty() {
        return Vec::new();
    }
    let n0 = a.polygon(0).len();
    let mut out = Vec::new();
    for o in [Orientation::Preserving, Orientation::Reversing] {
        for cell in 0..b.polygons().len() {
            if b.polygon(cell).len() != n0 {
                continue;
            }
            for shift in 0..n0 {
                if let Some(iso) = try_candidate(src, dst, cell, shift, o) {
                    out.push(iso);
                }
            }
        }
    }
    out
}

/// All isometries of a surface, identity first.
pub fn isometries(s: &Surface) -> Result<Vec<Isometry>, SymmetryError> {
    let dec = Arc::new(Decomposition::of_surface(s)?);
    Ok(search(&dec, &dec))
}

/// All isometries from one surface onto another.
pub fn isometries_between(a: &Surface, b: &Surface) -> Result<Vec<Isometry>, SymmetryError> {
    let da = Arc::new(Decomposition::of_surface(a)?);
    let db = Arc::new(Decomposition::of_surface(b)?);
    Ok(search(&da, &db))
}

/// The composite `a ∘ b` (first `b`, then `a`).
pub fn compose(a: &Isometry, b: &Isometry) -> Result<Isometry, SymmetryError> {
    if !Arc::ptr_eq(&a.source, &b.target) {
        return Err(SymmetryError::Mismatched);
    }
    let oa = a.orientation.sign();
    let c0 = a.cells[b.cells[0].cell].sign * b.cells[0].sign;
    let cells = b
        .cells
        .iter()
        .map(|ib| {
            let ia = a.cells[ib.cell];
            let n = a.target.surface.polygon(ia.cell).len() as i64;
            CellImage {
                cell: ia.cell,
                shift: (oa * ib.shift as i64 + ia.shift as i64).rem_euclid(n) as usize,
                sign: ia.sign * ib.sign * c0,
            }
        })
        .collect();
    let d = (&a.derivative * &b.derivative).scale(&sign_scalar(c0));
    Ok(Isometry {
        source: b.source.clone(),
        target: a.target.clone(),
        derivative: d,
        orientation: Orientation::from_sign(oa * b.orientation.sign()),
        cells,
    })
}

/// The inverse map.
pub fn inverse(a: &Isometry) -> Isometry {
    let n = a.cells.len();
    let mut cells = vec![
        CellImage {
            cell: 0,
            shift: 0,
            sign: 1
        };
        n
    ];
    let o = a.orientation.sign();
    for (i, img) in a.cells.iter().enumerate() {
        let len = a.source.surface.polygon(i).len() as i64;
        // j' = o·j + k  ⇔  j = o·(j' − k)
        cells[img.cell] = CellImage {
            cell: i,
            shift: (-o * img.shift as i64).rem_euclid(len) as usize,
            sign: img.sign,
        };
    }
    let c0 = cells[0].sign;
    for c in cells.iter_mut() {
        c.sign *= c0;
    }
    let d = a.derivative.transpose().scale(&sign_scalar(c0));
    Isometry {
        source: a.target.clone(),
        target: a.source.clone(),
        derivative: d,
        orientation: a.orientation,
        cells,
    }
}

/// Smallest `m ≥ 1` with `aᵐ = id`.
pub fn element_order(a: &Isometry) -> Result<usize, SymmetryError> {
    let mut p = a.clone();
    let mut m = 1;
    while !p.is_identity() {
        p = compose(a, &p)?;
        m += 1;
        if m > 4 * a.cells.len().max(1) * 12 {
            return Err(SymmetryError::Surface(SurfaceError::Inconsistent(
                "isometry of unbounded order".into(),
            )));
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSummary {
    pub order: usize,
    /// Element orders, sorted.
    pub element_orders: Vec<usize>,
    pub abelian: bool,
    pub dihedral: bool,
    /// The list is closed under composition and inverses.
    pub closed: bool,
}

pub fn group_summary(elements: &[Isometry]) -> Result<GroupSummary, SymmetryError> {
    let n = elements.len();
    let mut orders = Vec::with_capacity(n);
    for a in elements {
        orders.push(element_order(a)?);
    }
    let mut closed = elements.iter().any(Isometry::is_identity);
    let mut abelian = true;
    for a in elements {
        closed &= elements.contains(&inverse(a));
        for b in elements {
            let ab = compose(a, b)?;
            closed &= elements.contains(&ab);
            if abelian && ab != compose(b, a)? {
                abelian = false;
            }
        }
    }
    // dihedral of order 2m: an element r of order m whose powers are the
    // rotations, with every other element an involution
    let dihedral = n >= 2
        && n.is_multiple_of(2)
        && elements.iter().zip(&orders).any(|(r, &o)| {
            if o != n / 2 {
                return false;
            }
            let mut powers = vec![r.clone()];
            for _ in 1..o {
                let last = powers.last().expect("nonempty").clone();
                match compose(r, &last) {
                    Ok(p) => powers.push(p),
                    Err(_) => return false,
                }
            }
            elements
                .iter()
                .zip(&orders)
                .all(|(x, &ox)| powers.contains(x) || ox == 2)
        });
    orders.sort_unstable();
    Ok(GroupSummary {
        order: n,
        element_orders: orders,
        abelian,
        dihedral,
        closed,
    })
}

/// Decides whether `m · a` is translation equivalent to `b`, so that an
/// affine map `a → b` with derivative `m` exists. On half-translation
/// surfaces the derivative is only defined up to sign, and `−I` is
/// accepted as well. The witness is the cell correspondence.
pub fn affine_equivalent(
    a: &Surface,
    b: &Surface,
    m: &Matrix2,
) -> Result<Option<Isometry>, SymmetryError> {
    if m.det().is_zero() {
        return Err(SurfaceError::Singular.into());
    }
    let ma = a.apply_linear(m)?;
    let area_ok = {
        let (x, y) = (ma.area(), b.area());
        if x.is_exact() && y.is_exact() {
            x == y
        } else {
            x.approx_eq(&y, ISOMETRY_FLOAT_TOL * (1.0 + y.to_f64().abs()))
        }
    };
    if !area_ok || ma.kind() != b.kind() {
        return Ok(None);
    }
    let id = Matrix2::identity();
    let minus = id.scale(&Scalar::int(-1));
    let half = b.kind() == SurfaceKind::HalfTranslation;
    let accept = |d: &Matrix2| {
        let eq = |x: &Matrix2| {
            if d.is_exact() {
                d == x
            } else {
                d.approx_eq(x, ISOMETRY_FLOAT_TOL)
            }
        };
        eq(&id) || (half && eq(&minus))
    };
    Ok(isometries_between(&ma, b)?
        .into_iter()
        .find(|iso| accept(&iso.derivative)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{
        ay_prime, ay_surface, parallelogram_family, torus, trapezoid_family, ParallelogramShape,
        TrapezoidShape,
    };
    use crate::numeric::ScalarMode;

    fn find<'a>(g: &'a [Isometry], name: &str) -> &'a Isometry {
        g.iter()
            .find(|i| i.name() == name)
            .unwrap_or_else(|| panic!("no {name}"))
    }

    #[test]
    fn ay_group_is_dihedral_of_order_eight() {
        let g = isometries(&ay_surface()).unwrap();
        assert_eq!(g.len(), 8);
        assert!(g[0].is_identity());
        let s = group_summary(&g).unwrap();
        assert!(s.closed);
        assert!(s.dihedral);
        assert!(!s.abelian);
        assert_eq!(s.element_orders, vec![1, 2, 2, 2, 2, 2, 4, 4]);
        for iso in &g {
            assert!(iso.derivative.is_orthogonal(0.0));
        }
        let mut names: Vec<String> = g.iter().map(Isometry::name).collect();
        names.sort();
        for n in ["id", "τ", "σ₁", "σ₂", "ρ₁", "ρ₂"] {
            assert!(names.iter().any(|m| m == n), "{n} missing from {names:?}");
        }
    }

    #[test]
    fn named_products() {
        let g = isometries(&ay_surface()).unwrap();
        let t = compose(find(&g, "σ₁"), find(&g, "σ₂")).unwrap();
        assert_eq!(&t, find(&g, "τ"));
        let r = compose(find(&g, "ρ₁"), find(&g, "σ₁")).unwrap();
        assert_eq!(element_order(&r).unwrap(), 4);
        assert_eq!(compose(&r, &r).unwrap(), *find(&g, "τ"));
        let a = find(&g, "ρ₂");
        assert_eq!(&compose(&g[0], a).unwrap(), a);
        assert!(compose(a, &inverse(a)).unwrap().is_identity());
    }

    #[test]
    fn torus_has_the_symmetries_of_the_square() {
        let g = isometries(&torus()).unwrap();
        assert_eq!(g.len(), 8);
        assert!(group_summary(&g).unwrap().dihedral);
    }

    #[test]
    fn generic_trapezoid_member_is_dihedral() {
        let s = trapezoid_family(&TrapezoidShape::new(3, 5, 2)).unwrap();
        let g = isometries(&s).unwrap();
        let sum = group_summary(&g).unwrap();
        assert_eq!(sum.order, 8);
        assert!(sum.dihedral);
    }

    #[test]
    fn float_ay_has_the_same_group() {
        let s = ay_surface().to_mode(ScalarMode::Float).unwrap();
        let g = isometries(&s).unwrap();
        assert_eq!(g.len(), 8);
        assert!(group_summary(&g).unwrap().dihedral);
    }

    #[test]
    fn pseudo_anosov_candidate() {
        let a = Scalar::alpha();
        let ay = ay_surface();
        let psi = Matrix2::diag(a.recip().unwrap(), a.clone());
        assert!(affine_equivalent(&ay, &ay, &psi).unwrap().is_some());
        assert!(affine_equivalent(&ay, &ay, &Matrix2::diag(2, 1))
            .unwrap()
            .is_none());
        let stretch = Matrix2::diag(a.recip().unwrap(), 1);
        assert!(affine_equivalent(&ay, &ay_prime(), &stretch)
            .unwrap()
            .is_some());
    }

    #[test]
    fn parallelogram_builder_reproduces_the_stretched_surface() {
        let p = parallelogram_family(&ParallelogramShape::ay_prime()).unwrap();
        assert!(affine_equivalent(&p, &ay_prime(), &Matrix2::identity())
            .unwrap()
            .is_some());
    }

    #[test]
    fn trapezoid_builder_reproduces_ay() {
        let a = Scalar::alpha();
        let a2 = &a * &a;
        let one = Scalar::one();
        // the trapezoid T₀ of the surface, measured in its own frame
        let shape = TrapezoidShape::new(&one - &a, &one - &a2, &(&a + &a2) * &Scalar::ratio(1, 2));
        let s = trapezoid_family(&shape).unwrap();
        let m = Matrix2::new(1, -1, 1, 1);
        assert!(affine_equivalent(&s, &ay_surface(), &m).unwrap().is_some());
    }
}
