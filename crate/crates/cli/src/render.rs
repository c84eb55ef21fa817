//! SVG drawing of the real picture in the normalized frame.

use std::fmt::Write;

use num_traits::ToPrimitive;
use twisted_betti::geometry::{chambers, normalize, sharp_pairs, Arrangement, BoundaryVertex, GeometryError, Profile};
use twisted_betti::local_system::{resonant_points, LocalSystem};
use twisted_betti::Rational;

const SIZE: f64 = 640.0;
const MARGIN: f64 = 48.0;

fn f(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(0.0)
}

struct Frame {
    x0: f64,
    y0: f64,
    scale: f64,
}

impl Frame {
    fn fit(points: &[(f64, f64)]) -> Frame {
        let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for &(x, y) in points {
            xmin = xmin.min(x);
            xmax = xmax.max(x);
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
        if points.is_empty() {
            (xmin, xmax, ymin, ymax) = (-1.0, 1.0, -1.0, 1.0);
        }
        let span = (xmax - xmin).max(ymax - ymin).max(2.0) * 1.3;
        let (cx, cy) = ((xmin + xmax) / 2.0, (ymin + ymax) / 2.0);
        Frame {
            x0: cx - span / 2.0,
            y0: cy - span / 2.0,
            scale: (SIZE - 2.0 * MARGIN) / span,
        }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (MARGIN + (x - self.x0) * self.scale, SIZE - MARGIN - (y - self.y0) * self.scale)
    }

    fn x_range(&self) -> (f64, f64) {
        (self.x0, self.x0 + (SIZE - 2.0 * MARGIN) / self.scale)
    }
}

/// Lines, intersection points (resonant ones highlighted), shaded bounded chambers and a note
/// listing sharp pairs.
pub fn svg(arr: &Arrangement, ls: &LocalSystem, seed: u64) -> Result<String, GeometryError> {
    let (norm, _) = normalize(arr, Profile::Basic, seed)?;
    let resonant = resonant_points(&norm, ls);
    let coords: Vec<(f64, f64)> = norm
        .points()
        .iter()
        .map(|p| {
            let (x, y) = p.xy();
            (f(x), f(y))
        })
        .collect();
    let frame = Frame::fit(&coords);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(
        out,
        r#"<style>.chamber{{fill:#dfe8f5;stroke:none}}.line{{stroke:#222;stroke-width:1.5}}.point{{fill:#222}}.resonant{{fill:#c62828}}text{{font:12px sans-serif}}</style>"#
    );
    let _ = writeln!(
        out,
        r#"<clipPath id="frame"><rect x="{MARGIN}" y="{MARGIN}" width="{w}" height="{w}"/></clipPath>"#,
        w = SIZE - 2.0 * MARGIN
    );
    let _ = writeln!(out, r#"<g clip-path="url(#frame)">"#);
    for c in chambers(&norm)?.iter().filter(|c| c.bounded) {
        let pts: Vec<String> = c
            .boundary
            .iter()
            .filter_map(|s| match s.vertex {
                BoundaryVertex::Point(p) => Some(coords[p]),
                BoundaryVertex::Infinity => None,
            })
            .map(|(x, y)| {
                let (sx, sy) = frame.map(x, y);
                format!("{sx:.2},{sy:.2}")
            })
            .collect();
        let _ = writeln!(out, r#"<polygon class="chamber" points="{}"/>"#, pts.join(" "));
    }
    let (xa, xb) = frame.x_range();
    for (i, l) in norm.lines().iter().enumerate() {
        let (s, b) = (f(&l.slope().expect("normalized")), f(&l.intercept().expect("normalized")));
        let (x1, y1) = frame.map(xa, s * xa + b);
        let (x2, y2) = frame.map(xb, s * xb + b);
        let _ = writeln!(
            out,
            r#"<line class="line" data-line="{i}" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#
        );
    }
    for p in norm.points() {
        let (sx, sy) = frame.map(coords[p.id].0, coords[p.id].1);
        let class = if resonant.contains(p.id) { "resonant" } else { "point" };
        let r = if resonant.contains(p.id) { 5.0 } else { 3.5 };
        let _ = writeln!(
            out,
            r#"<circle class="{class}" data-point="{}" cx="{sx:.2}" cy="{sy:.2}" r="{r}"/>"#,
            p.id
        );
    }
    let _ = writeln!(out, "</g>");
    for (i, l) in norm.lines().iter().enumerate() {
        let (s, b) = (f(&l.slope().expect("normalized")), f(&l.intercept().expect("normalized")));
        // label where the line leaves the drawing area on the right, or its top/bottom edge
        let ymax = frame.y0 + (SIZE - 2.0 * MARGIN) / frame.scale;
        let mut x = xb;
        let mut y = s * x + b;
        if y > ymax || y < frame.y0 {
            y = y.clamp(frame.y0, ymax);
            x = if s != 0.0 { (y - b) / s } else { xb };
        }
        let (sx, sy) = frame.map(x, y);
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}">l{}</text>"#, sx.min(SIZE - 24.0) + 4.0, sy.clamp(14.0, SIZE - 4.0), i + 1);
    }
    let pairs = sharp_pairs(arr);
    let note = if pairs.is_empty() {
        "no sharp pairs".to_string()
    } else {
        let list: Vec<String> = pairs.iter().map(|(a, b)| format!("(l{}, l{})", a + 1, b + 1)).collect();
        format!("sharp pairs: {}", list.join(" "))
    };
    let _ = writeln!(out, r#"<text class="sharp" x="{MARGIN}" y="{:.0}">{note}</text>"#, SIZE - 16.0);
    out.push_str("</svg>\n");
    Ok(out)
}
