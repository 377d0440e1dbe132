//! Text format for surfaces.
//!
//! A JSON document with a header naming the surface kind and the scalar
//! mode, polygons as lists of `[x, y]` scalar strings and gluings as
//! `[[polyA, edgeA], [polyB, edgeB], kind]`:
//!
//! ```text
//! {
//!   "format": "flatsurf",
//!   "version": 1,
//!   "kind": "translation",
//!   "scalars": "rational",
//!   "polygons": [
//!     [["0/1", "0/1"], ["1/1", "0/1"], ["1/1", "1/1"], ["0/1", "1/1"]]
//!   ],
//!   "gluings": [
//!     [[0, 0], [0, 2], "translation"],
//!     [[0, 1], [0, 3], "translation"]
//!   ]
//! }
//! ```
//!
//! Rationals are written `p/q`, elements of the cubic field as
//! `[c0,c1,c2]` (coefficients of 1, α, α²), floats in shortest round-trip
//! form. Exact surfaces round-trip bit for bit.

use serde_json::Value;
use thiserror::Error;

use crate::numeric::{Scalar, ScalarMode, Vec2};

use super::{Gluing, GluingKind, Polygon, Surface, SurfaceKind};

pub const FORMAT_NAME: &str = "flatsurf";
pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed surface file: {0}")]
    Malformed(String),
    #[error("unsupported format version {0}")]
    Version(u64),
    #[error("scalar {value:?} cannot be written in {mode} mode")]
    Mode { value: String, mode: &'static str },
}

fn malformed(msg: impl Into<String>) -> FormatError {
    FormatError::Malformed(msg.into())
}

/// Serializes in the widest scalar mode that occurs.
pub fn write_surface(s: &Surface) -> Result<String, FormatError> {
    let mode = s.mode();
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!("  \"format\": \"{FORMAT_NAME}\",\n"));
    out.push_str(&format!("  \"version\": {FORMAT_VERSION},\n"));
    out.push_str(&format!("  \"kind\": \"{}\",\n", s.kind().name()));
    out.push_str(&format!("  \"scalars\": \"{}\",\n", mode.name()));
    out.push_str("  \"polygons\": [\n");
    for (i, p) in s.polygons().iter().enumerate() {
        let mut pts = Vec::with_capacity(p.len());
        for v in p.vertices() {
            let x = v.x.to_mode(mode).ok_or_else(|| FormatError::Mode {
                value: v.x.to_string(),
                mode: mode.name(),
            })?;
            let y = v.y.to_mode(mode).ok_or_else(|| FormatError::Mode {
                value: v.y.to_string(),
                mode: mode.name(),
            })?;
            pts.push(format!(
                "[\"{}\", \"{}\"]",
                x.format_in(mode),
                y.format_in(mode)
            ));
        }
        let sep = if i + 1 < s.polygons().len() { "," } else { "" };
        out.push_str(&format!("    [{}]{}\n", pts.join(", "), sep));
    }
    out.push_str("  ],\n");
    out.push_str("  \"gluings\": [\n");
    for (i, g) in s.gluings().iter().enumerate() {
        let sep = if i + 1 < s.gluings().len() { "," } else { "" };
        out.push_str(&format!(
            "    [[{}, {}], [{}, {}], \"{}\"]{}\n",
            g.a.polygon,
            g.a.edge,
            g.b.polygon,
            g.b.edge,
            g.kind.name(),
            sep
        ));
    }
    out.push_str("  ]\n}\n");
    Ok(out)
}

fn as_index(v: &Value, what: &str) -> Result<usize, FormatError> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| malformed(format!("{what} must be a non-negative integer")))
}

fn as_edge(v: &Value) -> Result<(usize, usize), FormatError> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| malformed("edge must be [polygon, edge]"))?;
    Ok((
        as_index(&arr[0], "polygon index")?,
        as_index(&arr[1], "edge index")?,
    ))
}

fn as_scalar(v: &Value, mode: ScalarMode) -> Result<Scalar, FormatError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        _ => return Err(malformed("scalar must be a string")),
    };
    Scalar::parse(&text, mode).map_err(|e| malformed(e.to_string()))
}

/// Parses a surface. Does not validate it.
pub fn read_surface(text: &str) -> Result<Surface, FormatError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| malformed("top level must be an object"))?;
    if let Some(f) = obj.get("format") {
        if f.as_str() != Some(FORMAT_NAME) {
            return Err(malformed(format!("unknown format {f}")));
        }
    }
    let version = obj
        .get("version")
        .and_then(Value::as_u64)
        .ok_or_else(|| malformed("missing version"))?;
    if version != FORMAT_VERSION {
        return Err(FormatError::Version(version));
    }
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .and_then(SurfaceKind::from_name)
        .ok_or_else(|| malformed("missing or unknown kind"))?;
    let mode = obj
        .get("scalars")
        .and_then(Value::as_str)
        .and_then(ScalarMode::from_name)
        .ok_or_else(|| malformed("missing or unknown scalar mode"))?;
    let polys = obj
        .get("polygons")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("missing polygons"))?;
    let mut polygons = Vec::with_capacity(polys.len());
    for p in polys {
        let pts = p
            .as_array()
            .ok_or_else(|| malformed("polygon must be a list"))?;
        let mut vs = Vec::with_capacity(pts.len());
        for q in pts {
            let xy = q
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| malformed("vertex must be [x, y]"))?;
            vs.push(Vec2::new(
                as_scalar(&xy[0], mode)?,
                as_scalar(&xy[1], mode)?,
            ));
        }
        polygons.push(Polygon::new(vs));
    }
    let gl = obj
        .get("gluings")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("missing gluings"))?;
    let mut gluings = Vec::with_capacity(gl.len());
    for g in gl {
        let arr = g
            .as_array()
            .filter(|a| a.len() == 3)
            .ok_or_else(|| malformed("gluing must be [edgeA, edgeB, kind]"))?;
        let kind = arr[2]
            .as_str()
            .and_then(GluingKind::from_name)
            .ok_or_else(|| malformed("unknown gluing kind"))?;
        gluings.push(Gluing::new(as_edge(&arr[0])?, as_edge(&arr[1])?, kind));
    }
    Ok(Surface::new(polygons, gluings, kind))
}

#[cfg(test)]
mod tests {
    use super::super::tests::unit_torus;
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let t = unit_torus();
        let text = write_surface(&t).unwrap();
        let back = read_surface(&text).unwrap();
        assert!(back.same_as(&t));
        assert_eq!(write_surface(&back).unwrap(), text);
        assert!(text.contains("\"1/1\""));
    }

    #[test]
    fn cubic_and_float_round_trip() {
        let a = Scalar::alpha();
        let p = Polygon::new(vec![
            Vec2::new(0, 0),
            Vec2::new(a.clone(), 0),
            Vec2::new(a.clone(), 1),
            Vec2::new(0, 1),
        ]);
        let s = Surface::new(
            vec![p],
            vec![
                Gluing::translation((0, 0), (0, 2)),
                Gluing::translation((0, 1), (0, 3)),
            ],
            SurfaceKind::Translation,
        );
        let text = write_surface(&s).unwrap();
        assert!(text.contains("\"scalars\": \"cubic\""));
        assert_eq!(write_surface(&read_surface(&text).unwrap()).unwrap(), text);

        let f = s.to_mode(ScalarMode::Float).unwrap();
        let text = write_surface(&f).unwrap();
        let back = read_surface(&text).unwrap();
        assert_eq!(
            back.polygon(0).vertex(1).x.to_f64().to_bits(),
            a.to_f64().to_bits()
        );
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_surface("not json").is_err());
        assert!(read_surface("{\"version\": 2}").is_err());
        let bad_kind = write_surface(&unit_torus())
            .unwrap()
            .replace("\"translation\"]", "\"glide\"]");
        assert!(read_surface(&bad_kind).is_err());
    }
}
