//! Deterministic SVG rendering of a skeleton with labeled rays.

use std::fmt::Write;

use super::curve::TropCurve;
use super::skeleton::TropicalSkeleton;
use super::EndSpec;

#[derive(Clone, Debug)]
pub struct SvgOptions {
    /// Half-width of the square viewing box in tropical coordinates; `None` fits the vertices.
    pub half_width: Option<f64>,
    pub pixels: u32,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions { half_width: None, pixels: 480 }
    }
}

/// Parameter `t ≥ 0` where `p + t·d` leaves the box `[c−h, c+h]²`.
fn exit_time(p: [f64; 2], d: [f64; 2], c: [f64; 2], h: f64) -> f64 {
    let mut t = f64::INFINITY;
    for k in 0..2 {
        if d[k] > 0.0 {
            t = t.min((c[k] + h - p[k]) / d[k]);
        } else if d[k] < 0.0 {
            t = t.min((c[k] - h - p[k]) / d[k]);
        }
    }
    t.max(0.0)
}

pub fn skeleton_svg(curve: &TropCurve, sk: &TropicalSkeleton, ends: &[EndSpec], opts: &SvgOptions) -> String {
    let pts: Vec<[f64; 2]> = (0..sk.vertices.len()).map(|i| sk.numeric_vertex(curve, i)).collect();
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (0f64, 0f64, 0f64, 0f64);
    for p in &pts {
        xmin = xmin.min(p[0]);
        xmax = xmax.max(p[0]);
        ymin = ymin.min(p[1]);
        ymax = ymax.max(p[1]);
    }
    let c = [0.5 * (xmin + xmax), 0.5 * (ymin + ymax)];
    let h = opts.half_width.unwrap_or_else(|| 0.5 * (xmax - xmin).max(ymax - ymin) + 2.0);
    let px = opts.pixels as f64;
    let map = |p: [f64; 2]| [(p[0] - c[0] + h) / (2.0 * h) * px, (c[1] + h - p[1]) / (2.0 * h) * px];
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{0}" viewBox="0 0 {0} {0}">"#, opts.pixels);
    let _ = writeln!(s, r#"<rect width="{0}" height="{0}" fill="white"/>"#, opts.pixels);
    let _ = writeln!(s, r#"<g stroke="black" stroke-width="2" fill="none">"#);
    for e in &sk.edges {
        let a = map(pts[e.from]);
        let b = map(pts[e.to]);
        let _ = writeln!(s, r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#, a[0], a[1], b[0], b[1]);
    }
    for r in &sk.rays {
        let p = pts[r.vertex];
        let d = [r.direction[0] as f64, r.direction[1] as f64];
        let t = exit_time(p, d, c, h);
        let a = map(p);
        let b = map([p[0] + t * d[0], p[1] + t * d[1]]);
        let _ = writeln!(s, r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#, a[0], a[1], b[0], b[1]);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g fill="black">"#);
    for p in &pts {
        let a = map(*p);
        let _ = writeln!(s, r#"<circle cx="{:.3}" cy="{:.3}" r="4"/>"#, a[0], a[1]);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g font-family="monospace" font-size="12" fill="navy">"#);
    for (r, e) in sk.rays.iter().zip(ends) {
        let p = pts[r.vertex];
        let d = [r.direction[0] as f64, r.direction[1] as f64];
        let t = 0.75 * exit_time(p, d, c, h);
        let a = map([p[0] + t * d[0], p[1] + t * d[1]]);
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}">α=({},{})</text>"#,
            a[0] + 6.0,
            a[1] - 6.0,
            e.alpha[0],
            e.alpha[1]
        );
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}
