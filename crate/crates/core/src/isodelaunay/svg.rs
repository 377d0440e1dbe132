//! Drawing of a tessellation in the upper half-plane.

use std::collections::BTreeSet;
use std::fmt::Write;

use super::{Geodesic, Tessellation, S_MAX};

/// The window `[x_min, x_max] × (0, y_max]` drawn `width` pixels wide.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Viewport {
    pub x_min: f64,
    pub x_max: f64,
    pub y_max: f64,
    pub width: f64,
}

impl Viewport {
    /// A window around the explored ball.
    pub fn around(t: &Tessellation) -> Viewport {
        match t.center {
            Some(c) => {
                let top = c.y * t.radius.cosh() + c.y * t.radius.sinh();
                let half = c.y * t.radius.sinh();
                Viewport {
                    x_min: c.x - 1.1 * half,
                    x_max: c.x + 1.1 * half,
                    y_max: 1.05 * top,
                    width: 800.0,
                }
            }
            None => Viewport {
                x_min: -2.0,
                x_max: 2.0,
                y_max: 2.0,
                width: 800.0,
            },
        }
    }
}

/// SVG with every side of every cell drawn as a circular arc or a vertical
/// segment, and the real axis at the bottom.
pub fn render_svg(t: &Tessellation, v: &Viewport) -> String {
    let k = v.width / (v.x_max - v.x_min);
    let height = v.y_max * k;
    let px = |x: f64| (x - v.x_min) * k;
    let py = |y: f64| (v.y_max - y) * k;
    let mut paths = BTreeSet::new();
    for c in &t.cells {
        for sd in &c.supports {
            let (lo, hi) = (sd.arc.0.max(-S_MAX), sd.arc.1.min(S_MAX));
            let g = sd.geodesic();
            let (a, b) = (g.point(lo), g.point(hi));
            let d = match g {
                Geodesic::Circle { r, .. } => {
                    // the arc runs from lower x to higher x, clockwise on screen
                    format!(
                        "M {:.3} {:.3} A {:.3} {:.3} 0 0 1 {:.3} {:.3}",
                        px(a.x),
                        py(a.y),
                        r * k,
                        r * k,
                        px(b.x),
                        py(b.y)
                    )
                }
                Geodesic::Line { .. } => format!(
                    "M {:.3} {:.3} L {:.3} {:.3}",
                    px(a.x),
                    py(a.y),
                    px(b.x),
                    py(b.y.min(2.0 * v.y_max))
                ),
            };
            paths.insert(d);
        }
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="0 0 {:.3} {:.3}">"#,
        v.width, height, v.width, height
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(out, r#"<g fill="none" stroke="black" stroke-width="0.8">"#);
    for d in &paths {
        let _ = writeln!(out, r#"<path d="{d}"/>"#);
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(
        out,
        r#"<line x1="0" y1="{height:.3}" x2="{:.3}" y2="{height:.3}" stroke="gray" stroke-width="1"/>"#,
        v.width
    );
    out.push_str("</svg>\n");
    out
}
