//! Deterministic text output: CSV tables and SVG 1.1 drawings of the parameter square and
//! of sphere projections.

use std::fmt::Write;

use crate::moduli::{BoundaryTrace, RegionTag, ScanCell};
use crate::spheres::LabelledDisc;

pub const COLOUR_Z: &str = "#dceaf7";
pub const COLOUR_L: &str = "#8fb4db";
pub const COLOUR_E: &str = "#27466f";
pub const STROKE_Z: &str = "#c0392b";
pub const STROKE_P: &str = "#1b1b1b";

/// Seventeen significant digits, locale independent.
pub fn float(v: f64) -> String {
    format!("{v:.16e}")
}

fn coord(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

pub fn region_colour(tag: RegionTag) -> &'static str {
    match tag {
        RegionTag::ZInterior | RegionTag::ZBoundary => COLOUR_Z,
        RegionTag::LOutsideZ | RegionTag::PCurve => COLOUR_L,
        RegionTag::EElliptic => COLOUR_E,
    }
}

pub const SCAN_HEADER: &str = "alpha1,alpha2,D,G,region";

pub fn scan_csv(cells: &[ScanCell]) -> String {
    let mut out = String::with_capacity(cells.len() * 100);
    out.push_str(SCAN_HEADER);
    out.push('\n');
    for c in cells {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            float(c.alpha1),
            float(c.alpha2),
            float(c.class.d),
            float(c.class.g),
            c.class.tag.label()
        );
    }
    out
}

const UNITS: f64 = 200.0;

/// Colour map of a scan with the traced curves overlaid, in (α₁, α₂) with equal aspect.
pub fn scan_svg(cells: &[ScanCell], bounds: [f64; 4], n: usize, curves: &[BoundaryTrace]) -> String {
    let [x0, x1, y0, y1] = bounds;
    let (w, h) = ((x1 - x0) * UNITS, (y1 - y0) * UNITS);
    let (dx, dy) = if n > 1 {
        ((x1 - x0) / (n - 1) as f64, (y1 - y0) / (n - 1) as f64)
    } else {
        (x1 - x0, y1 - y0)
    };
    let px = |a: f64| (a - x0 + dx / 2.0) * UNITS;
    let py = |b: f64| (y1 - b + dy / 2.0) * UNITS;
    let (vw, vh) = (w + dx * UNITS, h + dy * UNITS);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="0 0 {} {}" width="{}" height="{}">"#,
        coord(vw),
        coord(vh),
        coord(vw),
        coord(vh)
    );
    let _ = writeln!(
        out,
        r#"<defs><clipPath id="frame"><rect x="0" y="0" width="{}" height="{}"/></clipPath></defs>"#,
        coord(vw),
        coord(vh)
    );
    let _ = writeln!(out, r#"<g shape-rendering="crispEdges">"#);
    for c in cells {
        let _ = writeln!(
            out,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
            coord(px(c.alpha1) - dx * UNITS / 2.0),
            coord(py(c.alpha2) - dy * UNITS / 2.0),
            coord(dx * UNITS),
            coord(dy * UNITS),
            region_colour(c.class.tag)
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<g clip-path="url(#frame)" fill="none" stroke-width="1.5">"#);
    for trace in curves {
        let stroke = match trace.curve {
            crate::moduli::BoundaryCurve::Z => STROKE_Z,
            crate::moduli::BoundaryCurve::P => STROKE_P,
        };
        for line in &trace.quadrants {
            let pts: Vec<String> = line
                .iter()
                .map(|&(a, b)| format!("{},{}", coord(px(a)), coord(py(b))))
                .collect();
            let _ = writeln!(out, r#"<polyline stroke="{stroke}" points="{}"/>"#, pts.join(" "));
        }
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "</svg>");
    out
}

/// Pairs of discs whose centres are exactly two radii apart, with the contact point.
pub fn tangent_contacts(discs: &[LabelledDisc], tol: f64) -> Vec<(String, String, f64, f64)> {
    let mut out = Vec::new();
    for (i, a) in discs.iter().enumerate() {
        for b in &discs[i + 1..] {
            let (ddx, ddy) = (b.center_re - a.center_re, b.center_im - a.center_im);
            let d = ddx.hypot(ddy);
            if (d - a.radius - b.radius).abs() <= tol {
                let t = a.radius / d;
                out.push((a.label.clone(), b.label.clone(), a.center_re + t * ddx, a.center_im + t * ddy));
            }
        }
    }
    out
}

/// Labelled projection discs, with tangency points marked.
pub fn spheres_svg(discs: &[LabelledDisc], contacts: &[(String, String, f64, f64)]) -> String {
    let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for d in discs {
        lo_x = lo_x.min(d.center_re - d.radius);
        hi_x = hi_x.max(d.center_re + d.radius);
        lo_y = lo_y.min(d.center_im - d.radius);
        hi_y = hi_y.max(d.center_im + d.radius);
    }
    if discs.is_empty() {
        (lo_x, hi_x, lo_y, hi_y) = (-1.0, 1.0, -1.0, 1.0);
    }
    let scale = 100.0;
    let pad = 0.25;
    let px = |x: f64| (x - lo_x + pad) * scale;
    let py = |y: f64| (hi_y - y + pad) * scale;
    let (w, h) = ((hi_x - lo_x + 2.0 * pad) * scale, (hi_y - lo_y + 2.0 * pad) * scale);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="0 0 {} {}" width="{}" height="{}">"#,
        coord(w),
        coord(h),
        coord(w),
        coord(h)
    );
    for d in discs {
        let fill = if d.label.ends_with('+') { COLOUR_L } else { COLOUR_Z };
        let _ = writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="{}" fill="{fill}" fill-opacity="0.5" stroke="{COLOUR_E}" stroke-width="1"/>"#,
            coord(px(d.center_re)),
            coord(py(d.center_im)),
            coord(d.radius * scale)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="monospace" font-size="10" text-anchor="middle">{}</text>"#,
            coord(px(d.center_re)),
            coord(py(d.center_im)),
            d.label
        );
    }
    for (_, _, x, y) in contacts {
        let _ = writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="3" fill="{STROKE_Z}"/>"#,
            coord(px(*x)),
            coord(py(*y))
        );
    }
    let _ = writeln!(out, "</svg>");
    out
}
