//! SVG drawing of a configuration and its bond graph.
//!
//! Output depends only on the input: coordinates are printed with four
//! decimals and elements appear in index order.

use std::fmt::Write;

use crate::energy::analyze;
use crate::error::Result;
use crate::geometry::{Configuration, Tolerances};
use crate::bond_graph::build_edges;
use crate::scalar::Scalar;

/// Disc radius; the viewBox is padded by the same amount.
const RADIUS: f64 = 0.5;
const ARROW: f64 = 0.4;

fn num(x: f64) -> String {
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

/// Renders discs, orientation arrows, bonds and bounded faces. Rhombic
/// faces are shaded and all other faces hatched. When the bond graph has no
/// face structure (for instance it is not planar) faces are omitted.
pub fn render_svg<S: Scalar>(config: &Configuration<S>, gamma: S, tol: &Tolerances<S>) -> Result<String> {
    let graph = build_edges(config, gamma, tol)?;
    let pts: Vec<(f64, f64)> = config
        .particles
        .iter()
        .map(|p| (p.pos.x.as_f64(), -p.pos.y.as_f64()))
        .collect();
    let (x0, y0, w, h) = if pts.is_empty() {
        (0.0, 0.0, 2.0 * RADIUS, 2.0 * RADIUS)
    } else {
        let pad = 2.0 * RADIUS;
        let xmin = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min) - pad;
        let xmax = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max) + pad;
        let ymin = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min) - pad;
        let ymax = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max) + pad;
        (xmin, ymin, xmax - xmin, ymax - ymin)
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="{}" height="{}">"#,
        num(x0),
        num(y0),
        num(w),
        num(h),
        (w * 60.0).round(),
        (h * 60.0).round()
    );
    s.push_str(concat!(
        "<defs>\n",
        r#"<pattern id="hatch" width="0.2" height="0.2" patternUnits="userSpaceOnUse" patternTransform="rotate(45)">"#,
        r##"<line x1="0" y1="0" x2="0" y2="0.2" stroke="#b03a2e" stroke-width="0.05"/></pattern>"##,
        "\n",
        r##"<marker id="tip" viewBox="0 0 10 10" refX="8" refY="5" markerWidth="4" markerHeight="4" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="#1f4e79"/></marker>"##,
        "\n</defs>\n"
    ));

    if let Ok(a) = analyze(config, gamma, tol) {
        s.push_str("<g id=\"faces\">\n");
        for f in &a.faces.faces {
            let verts = f.walk_vertices(&a.graph);
            let poly: Vec<String> = verts
                .iter()
                .map(|&v| format!("{},{}", num(pts[v].0), num(pts[v].1)))
                .collect();
            let (class, fill) = if f.is_rhombus {
                ("rhombus", "#d6e4f0")
            } else {
                ("bad-face", "url(#hatch)")
            };
            let _ = writeln!(
                s,
                r#"<polygon class="{class}" points="{}" fill="{fill}" stroke="none"/>"#,
                poly.join(" ")
            );
        }
        s.push_str("</g>\n");
    }

    s.push_str("<g id=\"discs\">\n");
    for &(x, y) in &pts {
        let _ = writeln!(
            s,
            r##"<circle class="disc" cx="{}" cy="{}" r="{}" fill="none" stroke="#9e9e9e" stroke-width="0.02"/>"##,
            num(x),
            num(y),
            num(RADIUS)
        );
    }
    s.push_str("</g>\n<g id=\"bonds\">\n");
    for &(i, j) in graph.edges() {
        let _ = writeln!(
            s,
            r##"<line class="bond" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#222222" stroke-width="0.06"/>"##,
            num(pts[i].0),
            num(pts[i].1),
            num(pts[j].0),
            num(pts[j].1)
        );
    }
    s.push_str("</g>\n<g id=\"arrows\">\n");
    for (p, &(x, y)) in config.particles.iter().zip(&pts) {
        let (ox, oy) = (p.ori.x.as_f64(), -p.ori.y.as_f64());
        let _ = writeln!(
            s,
            r##"<line class="arrow" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#1f4e79" stroke-width="0.04" marker-end="url(#tip)"/>"##,
            num(x),
            num(y),
            num(x + ARROW * ox),
            num(y + ARROW * oy)
        );
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}
