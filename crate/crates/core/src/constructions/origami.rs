//! Deciding whether a translation surface is square-tiled.
//!
//! The relative periods of a surface are generated by the holonomies of
//! the edges of any triangulation with vertices at the cone points. The
//! surface covers a torus branched over a single point exactly when these
//! holonomies generate a lattice Λ ⊂ ℝ²: the developing map then descends to
//! a covering `X → ℝ²/Λ` sending every cone point to 0, of degree
//! `area(X) / covol(Λ)`.
//!
//! Coordinates in ℚ(α) are expanded in the basis 1, α, α², so every
//! holonomy becomes a vector in ℚ⁶ and the ℤ-rank of the generated group
//! equals the ℚ-rank of these vectors; discreteness in ℝ² is rank 2.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::delaunay::delaunay_triangulation;
use crate::numeric::{rationalize, CubicNumber, Rational, Scalar, Vec2};
use crate::surface::{Surface, SurfaceKind};

/// Float coordinates are replaced by rationals within this distance.
pub const RATIONALIZE_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct OrigamiCertificate {
    /// Basis of the period lattice, from the Hermite normal form of the
    /// coefficient vectors.
    pub basis: [Vec2; 2],
    /// Degree of the covering of `ℝ²/Λ`.
    pub degree: u64,
}

#[derive(Clone, Debug)]
pub struct OrigamiWitness {
    pub reason: String,
    /// ℤ-rank of the group generated by the holonomies.
    pub rank: usize,
    /// Holonomies spanning a subgroup of rank greater than 2, when that is
    /// the obstruction.
    pub independent: Vec<Vec2>,
    /// Two holonomy coordinates whose ratio is irrational.
    pub incommensurable: Option<(Scalar, Scalar)>,
}

#[derive(Clone, Debug)]
pub enum OrigamiVerdict {
    Origami(OrigamiCertificate),
    NotOrigami(OrigamiWitness),
}

impl OrigamiVerdict {
    pub fn certificate(&self) -> Option<&OrigamiCertificate> {
        match self {
            OrigamiVerdict::Origami(c) => Some(c),
            OrigamiVerdict::NotOrigami(_) => None,
        }
    }

    pub fn is_origami(&self) -> bool {
        matches!(self, OrigamiVerdict::Origami(_))
    }
}

fn reject(reason: impl Into<String>) -> OrigamiVerdict {
    OrigamiVerdict::NotOrigami(OrigamiWitness {
        reason: reason.into(),
        rank: 0,
        independent: Vec::new(),
        incommensurable: None,
    })
}

fn coefficients(s: &Scalar) -> Option<[Rational; 3]> {
    match s {
        Scalar::Rational(r) => Some([r.clone(), Rational::zero(), Rational::zero()]),
        Scalar::Cubic(c) => Some(c.coefficients().clone()),
        Scalar::Float(x) => {
            rationalize(*x, RATIONALIZE_TOL).map(|r| [r, Rational::zero(), Rational::zero()])
        }
    }
}

fn exact(s: &Scalar) -> Option<Scalar> {
    coefficients(s).map(|[a, b, c]| Scalar::Cubic(CubicNumber::new(a, b, c)).simplify())
}

/// Row-style Hermite normal form; returns the nonzero rows.
fn hermite_rows(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivot_row = 0;
    for col in 0..ncols {
        if pivot_row >= rows.len() {
            break;
        }
        loop {
            // smallest nonzero entry in this column at or below the pivot row
            let best = (pivot_row..rows.len())
                .filter(|&r| !rows[r][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let Some(best) = best else { break };
            rows.swap(pivot_row, best);
            let mut done = true;
            for r in pivot_row + 1..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                let q = rows[r][col].div_floor(&rows[pivot_row][col]);
                let pr = rows[pivot_row].clone();
                for (x, p) in rows[r].iter_mut().zip(pr.iter()) {
                    *x -= &q * p;
                }
                if !rows[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[pivot_row][col].is_zero() {
            continue;
        }
        if rows[pivot_row][col].is_negative() {
            for x in rows[pivot_row].iter_mut() {
                *x = -x.clone();
            }
        }
        for r in 0..pivot_row {
            let q = rows[r][col].div_floor(&rows[pivot_row][col]);
            if !q.is_zero() {
                let pr = rows[pivot_row].clone();
                for (x, p) in rows[r].iter_mut().zip(pr.iter()) {
                    *x -= &q * p;
                }
            }
        }
        pivot_row += 1;
    }
    rows.truncate(pivot_row);
    rows
}

/// Indices of a maximal ℚ-independent subset of `vectors`.
fn independent_subset(vectors: &[Vec<Rational>]) -> Vec<usize> {
    let mut basis: Vec<Vec<Rational>> = Vec::new();
    let mut picked = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        let mut w = v.clone();
        for b in &basis {
            let lead = b
                .iter()
                .position(|x| !x.is_zero())
                .expect("basis rows are nonzero");
            if !w[lead].is_zero() {
                let f = &w[lead] / &b[lead];
                for (x, y) in w.iter_mut().zip(b.iter()) {
                    *x -= &f * y;
                }
            }
        }
        if w.iter().any(|x| !x.is_zero()) {
            basis.push(w);
            picked.push(i);
        }
    }
    picked
}

fn incommensurable_pair(values: &[Scalar]) -> Option<(Scalar, Scalar)> {
    let nonzero: Vec<&Scalar> = values.iter().filter(|v| !v.is_zero()).collect();
    let first = nonzero.first()?;
    for v in &nonzero[1..] {
        let ratio = v.checked_div(first).ok()?;
        let rational = match ratio.simplify() {
            Scalar::Rational(_) => true,
            Scalar::Cubic(c) => c.as_rational().is_some(),
            Scalar::Float(_) => true,
        };
        if !rational {
            return Some(((*first).clone(), (*v).clone()));
        }
    }
    None
}

pub fn origami_check(s: &Surface) -> OrigamiVerdict {
    if s.kind() != SurfaceKind::Translation {
        return reject("not a translation surface");
    }
    let t = match delaunay_triangulation(s) {
        Ok(t) => t,
        Err(e) => return reject(format!("no triangulation: {e}")),
    };
    let mut hol: Vec<Vec2> = Vec::new();
    for h in t.edge_representatives() {
        let v = t.vector(h);
        match (exact(&v.x), exact(&v.y)) {
            (Some(x), Some(y)) => hol.push(Vec2::new(x, y)),
            _ => return reject("coordinate could not be rationalized"),
        }
    }
    let coeffs: Vec<Vec<Rational>> = hol
        .iter()
        .map(|v| {
            let mut c = coefficients(&v.x).expect("exact").to_vec();
            c.extend(coefficients(&v.y).expect("exact"));
            c
        })
        .collect();
    let indep = independent_subset(&coeffs);
    if indep.len() != 2 {
        let coords: Vec<Scalar> = hol
            .iter()
            .flat_map(|v| [v.x.clone(), v.y.clone()])
            .collect();
        return OrigamiVerdict::NotOrigami(OrigamiWitness {
            reason: format!(
                "holonomies generate a group of rank {}, which is not discrete in the plane",
                indep.len()
            ),
            rank: indep.len(),
            independent: indep.iter().map(|&i| hol[i].clone()).collect(),
            incommensurable: incommensurable_pair(&coords),
        });
    }
    // clear denominators and reduce
    let mut denom = BigInt::one();
    for c in coeffs.iter().flatten() {
        denom = denom.lcm(c.denom());
    }
    let rows: Vec<Vec<BigInt>> = coeffs
        .iter()
        .map(|c| {
            c.iter()
                .map(|x| (x * Rational::from_integer(denom.clone())).to_integer())
                .collect()
        })
        .collect();
    let h = hermite_rows(rows);
    if h.len() != 2 {
        return reject("unexpected rank after reduction");
    }
    let d = Rational::from_integer(denom);
    let to_vec = |row: &[BigInt]| {
        let r = |k: usize| Rational::new(row[k].clone(), BigInt::one()) / &d;
        let x = Scalar::Cubic(CubicNumber::new(r(0), r(1), r(2))).simplify();
        let y = Scalar::Cubic(CubicNumber::new(r(3), r(4), r(5))).simplify();
        Vec2::new(x, y)
    };
    let b1 = to_vec(&h[0]);
    let b2 = to_vec(&h[1]);
    let covol = b1.cross(&b2).abs();
    if covol.is_zero() {
        return reject("holonomies are collinear");
    }
    let area = match (exact(&s.area())).map(|a| a.simplify()) {
        Some(a) => a,
        None => return reject("area could not be rationalized"),
    };
    let ratio = match area.checked_div(&covol) {
        Ok(r) => r.simplify(),
        Err(_) => return reject("zero covolume"),
    };
    let degree = match ratio {
        Scalar::Rational(r) if r.is_integer() && r.is_positive() => {
            r.to_integer().try_into().unwrap_or(u64::MAX)
        }
        _ => {
            return reject(format!(
                "area / covolume = {ratio} is not a positive integer"
            ))
        }
    };
    OrigamiVerdict::Origami(OrigamiCertificate {
        basis: [b1, b2],
        degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{ay_surface, escalator, torus, trapezoid_family, TrapezoidShape};
    use crate::numeric::{Matrix2, ScalarMode};

    #[test]
    fn torus_is_degree_one() {
        let c = origami_check(&torus());
        let c = c.certificate().unwrap();
        assert_eq!(c.degree, 1);
        assert_eq!(c.basis[0], Vec2::new(1, 0));
        assert_eq!(c.basis[1], Vec2::new(0, 1));
    }

    #[test]
    fn escalator_covers_the_unit_torus_six_times() {
        let c = origami_check(&escalator());
        assert_eq!(c.certificate().unwrap().degree, 6);
    }

    #[test]
    fn ay_is_not_an_origami() {
        match origami_check(&ay_surface()) {
            OrigamiVerdict::NotOrigami(w) => {
                assert!(w.rank >= 3);
                let (a, b) = w.incommensurable.unwrap();
                assert!(a.checked_div(&b).unwrap().simplify().mode() == ScalarMode::Cubic);
            }
            OrigamiVerdict::Origami(_) => panic!("AY is not square-tiled"),
        }
    }

    #[test]
    fn rational_rectangle_member_is_an_origami() {
        let s = trapezoid_family(&TrapezoidShape::new(2, 2, 1)).unwrap();
        assert!(origami_check(&s).is_origami());
    }

    #[test]
    fn unimodular_shear_preserves_the_verdict() {
        let s = escalator();
        let before = origami_check(&s).certificate().unwrap().degree;
        let sheared = s.apply_linear(&Matrix2::new(1, 1, 0, 1)).unwrap();
        let after = origami_check(&sheared).certificate().unwrap().degree;
        assert_eq!(before, after);
        let a = ay_surface()
            .apply_linear(&Matrix2::new(2, 1, 1, 1))
            .unwrap();
        assert!(!origami_check(&a).is_origami());
    }

    #[test]
    fn float_input_is_rationalized() {
        let s = escalator().to_mode(ScalarMode::Float).unwrap();
        assert_eq!(origami_check(&s).certificate().unwrap().degree, 6);
    }

    #[test]
    fn hermite_form_example() {
        let rows = vec![
            vec![BigInt::from(4), BigInt::from(6)],
            vec![BigInt::from(2), BigInt::from(2)],
            vec![BigInt::from(0), BigInt::from(4)],
        ];
        let h = hermite_rows(rows);
        assert_eq!(
            h,
            vec![
                vec![BigInt::from(2), BigInt::from(0)],
                vec![BigInt::from(0), BigInt::from(2)]
            ]
        );
    }
}
