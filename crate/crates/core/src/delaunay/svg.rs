//! SVG net of a surface: polygons laid out in a row, glued edges sharing a
//! label.

use std::fmt::Write;

use crate::surface::{GluingKind, Surface};

/// Renders every polygon of `s` side by side, edges labelled by gluing
/// index (point-reflection gluings are marked with a trailing `*`).
pub fn render_net_svg(s: &Surface) -> String {
    let polys: Vec<Vec<(f64, f64)>> = s
        .polygons()
        .iter()
        .map(|p| p.vertices().iter().map(|v| v.to_f64()).collect())
        .collect();
    let mut labels: Vec<Vec<String>> = s
        .polygons()
        .iter()
        .map(|p| vec![String::new(); p.len()])
        .collect();
    for (i, g) in s.gluings().iter().enumerate() {
        let mark = if g.kind == GluingKind::PointReflection {
            "*"
        } else {
            ""
        };
        for e in [g.a, g.b] {
            labels[e.polygon][e.edge] = format!("{i}{mark}");
        }
    }
    let size = polys
        .iter()
        .flat_map(|p| {
            let (x0, x1) = bounds(p.iter().map(|v| v.0));
            let (y0, y1) = bounds(p.iter().map(|v| v.1));
            [x1 - x0, y1 - y0]
        })
        .fold(0.0, f64::max)
        .max(1e-12);
    let scale = 200.0 / size;
    let gap = 30.0;
    let mut body = String::new();
    let mut x_cursor = gap;
    let mut height: f64 = 0.0;
    for (pi, p) in polys.iter().enumerate() {
        let (x0, x1) = bounds(p.iter().map(|v| v.0));
        let (y0, y1) = bounds(p.iter().map(|v| v.1));
        let to_screen = |(x, y): (f64, f64)| (x_cursor + (x - x0) * scale, gap + (y1 - y) * scale);
        let pts: Vec<String> = p
            .iter()
            .map(|&v| {
                let (sx, sy) = to_screen(v);
                format!("{sx:.3},{sy:.3}")
            })
            .collect();
        let _ = writeln!(
            body,
            "  <polygon points=\"{}\" fill=\"#eef3fb\" stroke=\"#223\" stroke-width=\"1.2\"/>",
            pts.join(" ")
        );
        let (cx, cy) = p.iter().fold((0.0, 0.0), |a, v| (a.0 + v.0, a.1 + v.1));
        let (cx, cy) = (cx / p.len() as f64, cy / p.len() as f64);
        let (scx, scy) = to_screen((cx, cy));
        let _ = writeln!(
            body,
            "  <text x=\"{scx:.3}\" y=\"{scy:.3}\" font-size=\"12\" text-anchor=\"middle\" fill=\"#888\">P{pi}</text>"
        );
        for (k, label) in labels[pi].iter().enumerate() {
            let a = p[k];
            let b = p[(k + 1) % p.len()];
            let m = ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0);
            // nudge towards the centre so labels sit inside
            let m = (m.0 + (cx - m.0) * 0.12, m.1 + (cy - m.1) * 0.12);
            let (sx, sy) = to_screen(m);
            let _ = writeln!(
                body,
                "  <text x=\"{sx:.3}\" y=\"{sy:.3}\" font-size=\"11\" text-anchor=\"middle\" dominant-baseline=\"middle\">{label}</text>"
            );
        }
        x_cursor += (x1 - x0) * scale + gap;
        height = height.max((y1 - y0) * scale);
    }
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\">\n{}</svg>\n",
        x_cursor,
        height + 2.0 * gap,
        body
    )
}

fn bounds(it: impl Iterator<Item = f64>) -> (f64, f64) {
    it.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
        (lo.min(x), hi.max(x))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::ay_surface;

    #[test]
    fn every_edge_gets_a_label() {
        let svg = render_net_svg(&ay_surface());
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<polygon").count(), 6);
        // 12 gluings, each label printed on two edges
        for i in 0..12 {
            assert_eq!(svg.matches(&format!(">{i}</text>")).count(), 2, "label {i}");
        }
    }
}
