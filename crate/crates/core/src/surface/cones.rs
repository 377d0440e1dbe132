//! Vertex cycles and cone angles.

use std::f64::consts::PI;

use crate::numeric::{Sign, Vec2};

use super::{EdgeRef, GluingKind, Surface, SurfaceError};

/// Tolerance on float cone angles, in radians.
const ANGLE_FLOAT_TOL: f64 = 1e-9;

/// A vertex of the surface: an equivalence class of polygon corners.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConePoint {
    pub id: usize,
    /// `(polygon, vertex)` pairs in the order met when turning counterclockwise.
    pub corners: Vec<(usize, usize)>,
    /// Total angle as a multiple of π.
    pub angle_in_pi: u32,
}

impl ConePoint {
    pub fn angle(&self) -> f64 {
        self.angle_in_pi as f64 * PI
    }

    /// Regular points have angle 2π.
    pub fn is_singular(&self) -> bool {
        self.angle_in_pi != 2
    }
}

/// `r` lies on the counterclockwise arc from `a` to `b`, excluding `a` and
/// including `b`; the arc is assumed shorter than π.
fn in_arc(a: &Vec2, b: &Vec2, r: &Vec2) -> bool {
    let ar = a.cross(r).sign();
    let rb = r.cross(b).sign();
    if rb == Sign::Zero {
        return r.dot(b).is_positive();
    }
    ar == Sign::Positive && rb == Sign::Positive
}

impl Surface {
    /// Walks the gluings around each vertex. Crossing edge `i − 1` of a
    /// polygon leads to the start of the partner edge, for both gluing kinds.
    pub fn vertex_cycles(&self) -> Result<Vec<ConePoint>, SurfaceError> {
        let exact = self.is_exact();
        let mut visited: Vec<Vec<bool>> =
            self.polygons.iter().map(|p| vec![false; p.len()]).collect();
        let mut out = Vec::new();
        for p0 in 0..self.polygons.len() {
            for v0 in 0..self.polygons[p0].len() {
                if visited[p0][v0] {
                    continue;
                }
                let id = out.len();
                let mut corners = Vec::new();
                let (mut p, mut v) = (p0, v0);
                let mut sign = 1i8;
                let reference = self.polygons[p0].edge(v0);
                let mut crossings = 0u32;
                let mut total = 0.0f64;
                let mut last = reference.clone();
                loop {
                    if visited[p][v] {
                        if (p, v) == (p0, v0) {
                            break;
                        }
                        return Err(SurfaceError::Inconsistent(format!(
                            "corner ({p}, {v}) reached from two vertex cycles"
                        )));
                    }
                    visited[p][v] = true;
                    corners.push((p, v));
                    let poly = &self.polygons[p];
                    let n = poly.len();
                    let out_edge = poly.edge(v);
                    let back = -&poly.edge((v + n - 1) % n);
                    let (a, b) = if sign > 0 {
                        (out_edge, back)
                    } else {
                        (-&out_edge, -&back)
                    };
                    if exact {
                        if in_arc(&a, &b, &reference) {
                            crossings += 1;
                        }
                    } else {
                        let (ax, ay) = a.to_f64();
                        let (bx, by) = b.to_f64();
                        total += (ax * by - ay * bx).atan2(ax * bx + ay * by);
                    }
                    last = b;
                    let incoming = EdgeRef::new(p, (v + n - 1) % n);
                    let (q, kind) = self.partner(incoming).ok_or_else(|| {
                        SurfaceError::Inconsistent(format!("edge {incoming} is not glued"))
                    })?;
                    if kind == GluingKind::PointReflection {
                        sign = -sign;
                    }
                    p = q.polygon;
                    v = q.edge;
                }
                let angle_in_pi = if exact {
                    let closes_forward = last.dot(&reference).is_positive();
                    2 * crossings + if closes_forward { 0 } else { 1 }
                } else {
                    let k = (total / PI).round();
                    if (total - k * PI).abs() > ANGLE_FLOAT_TOL || k < 1.0 {
                        return Err(SurfaceError::AngleNotMultipleOfPi {
                            cycle: id,
                            angle: total,
                        });
                    }
                    k as u32
                };
                out.push(ConePoint {
                    id,
                    corners,
                    angle_in_pi,
                });
            }
        }
        Ok(out)
    }

    /// Σ(angle − 2π) divided by 2π equals 2g − 2; returns both sides.
    pub fn gauss_bonnet(&self) -> Result<(i64, i64), SurfaceError> {
        let cycles = self.vertex_cycles()?;
        let excess_in_pi: i64 = cycles.iter().map(|c| c.angle_in_pi as i64 - 2).sum();
        let g = self.genus()? as i64;
        Ok((excess_in_pi, 2 * (2 * g - 2)))
    }
}
