//! SVG drawing of planar instances.

use std::fmt::Write as _;

use stubmatch::{Error, MarkedPointSet64, Matching64, Result};

/// Canvas size in SVG user units.
pub const CANVAS: u32 = 1000;

#[derive(Clone, Debug, PartialEq)]
pub struct Style {
    pub background: String,
    pub point_fill: String,
    pub edge_stroke: String,
    /// Point radius per unit of degree, as a fraction of the box side.
    pub radius_per_degree: f64,
    /// Edge stroke width as a fraction of the box side.
    pub stroke_width: f64,
}

impl Default for Style {
    fn default() -> Self {
        Self {
            background: "#ffffff".into(),
            point_fill: "#1f3b73".into(),
            edge_stroke: "#c0392b".into(),
            radius_per_degree: 0.0025,
            stroke_width: 0.0015,
        }
    }
}

/// Pieces of the segment `p -> p + v` that fall in each periodic image of the
/// box `[0, side)^2`, translated back into the box.
pub fn wrapped_pieces(p: [f64; 2], v: [f64; 2], side: f64) -> Vec<([f64; 2], [f64; 2])> {
    let mut out = Vec::new();
    for sx in [-1.0, 0.0, 1.0] {
        for sy in [-1.0, 0.0, 1.0] {
            let shift = [sx * side, sy * side];
            // clip p + t v, t in [0, 1], against the shifted tile
            let (mut t0, mut t1) = (0.0f64, 1.0f64);
            let mut empty = false;
            for a in 0..2 {
                let lo = shift[a];
                let hi = shift[a] + side;
                if v[a] == 0.0 {
                    if p[a] < lo || p[a] >= hi {
                        empty = true;
                    }
                    continue;
                }
                let (mut ta, mut tb) = ((lo - p[a]) / v[a], (hi - p[a]) / v[a]);
                if ta > tb {
                    std::mem::swap(&mut ta, &mut tb);
                }
                t0 = t0.max(ta);
                t1 = t1.min(tb);
            }
            if empty || t1 - t0 <= 1e-12 {
                continue;
            }
            let at = |t: f64| [p[0] + t * v[0] - shift[0], p[1] + t * v[1] - shift[1]];
            out.push((at(t0), at(t1)));
        }
    }
    out
}

fn fmt(x: f64) -> String {
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

/// Points as discs whose radius grows with degree, edges as lines. The y axis
/// points up. Edges that cross the boundary of a torus are split at it.
pub fn render_svg(m: &MarkedPointSet64, matching: Option<&Matching64>, style: &Style) -> Result<String> {
    let bx = *m.points().bbox();
    if bx.dim != 2 {
        return Err(Error::UnsupportedDimension(bx.dim));
    }
    let side = bx.side;
    let flip = |y: f64| side - y;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" viewBox="0 0 {s} {s}">"#,
        s = fmt(side)
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{s}" height="{s}" fill="{}"/>"#, style.background, s = fmt(side));
    if let Some(g) = matching.filter(|g| !g.is_empty()) {
        let _ = writeln!(
            svg,
            r#"<g stroke="{}" stroke-width="{}" stroke-linecap="round">"#,
            style.edge_stroke,
            fmt(style.stroke_width * side)
        );
        for e in g.edges() {
            let (p, q) = (m.points().point(e.i), m.points().point(e.j));
            let pieces = if bx.periodic {
                let v = [bx.displacement(p[0], q[0]), bx.displacement(p[1], q[1])];
                wrapped_pieces([p[0], p[1]], v, side)
            } else {
                vec![([p[0], p[1]], [q[0], q[1]])]
            };
            for (a, b) in pieces {
                let _ = writeln!(
                    svg,
                    r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                    fmt(a[0]),
                    fmt(flip(a[1])),
                    fmt(b[0]),
                    fmt(flip(b[1]))
                );
            }
        }
        svg.push_str("</g>\n");
    }
    if !m.is_empty() {
        let _ = writeln!(svg, r#"<g fill="{}">"#, style.point_fill);
        for (p, &k) in m.points().iter().zip(m.degrees()) {
            let r = style.radius_per_degree * side * (1.0 + k as f64);
            let _ = writeln!(svg, r#"<circle cx="{}" cy="{}" r="{}"/>"#, fmt(p[0]), fmt(flip(p[1])), fmt(r));
        }
        svg.push_str("</g>\n");
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
