//! SVG 1.1 rendering of one fundamental domain of a colouring.

use hexfold::constructions::PeriodicColouring;
use hexfold::geometry::{HexCell, Point};
use std::fmt::Write;

pub const PX_PER_UNIT: f64 = 100.0;
const MARGIN: f64 = 10.0;

/// Cells of every layer meeting the period parallelogram anchored at the
/// first layer's offset; cells carrying `marked` are filled, the rest are
/// outlined. Output is clipped to the parallelogram.
pub fn render(c: &PeriodicColouring, marked: u32) -> String {
    let origin = c.layers()[0].grid.offset();
    let [v1, v2] = c.period_vectors();
    let corners = [origin, origin + v1, origin + v1 + v2, origin + v2];
    let (min_x, max_x) = span(corners.iter().map(|p| p.x));
    let (min_y, max_y) = span(corners.iter().map(|p| p.y));
    let width = (max_x - min_x) * PX_PER_UNIT + 2.0 * MARGIN;
    let height = (max_y - min_y) * PX_PER_UNIT + 2.0 * MARGIN;
    let to_px = |p: Point| ((p.x - min_x) * PX_PER_UNIT + MARGIN, (max_y - p.y) * PX_PER_UNIT + MARGIN);
    let path = |pts: &[Point]| {
        let mut s = String::new();
        for (i, &p) in pts.iter().enumerate() {
            let (x, y) = to_px(p);
            let _ = write!(s, "{}{x:.3},{y:.3} ", if i == 0 { "M" } else { "L" });
        }
        s.push('Z');
        s
    };

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.3} {height:.3}">"#
    );
    let _ = writeln!(
        out,
        "<!-- {} j={} k={} colour {marked} filled -->",
        c.provenance().method,
        c.j(),
        c.k()
    );
    let _ = writeln!(out, r#"<defs><clipPath id="domain"><path d="{}"/></clipPath></defs>"#, path(&corners));
    let _ = writeln!(out, r#"<g clip-path="url(#domain)" stroke="black" stroke-width="0.5">"#);
    let centre = origin + (v1 + v2) * 0.5;
    let reach = 0.5 * (v1 + v2).norm().max((v1 - v2).norm()) + 2.0 * c.side();
    for (l, layer) in c.layers().iter().enumerate() {
        for cell in layer.grid.cells_within(centre, reach) {
            let poly = layer.grid.cell_polygon(cell);
            let fill = if has_colour(c, l, cell, marked) { "#d62728" } else { "none" };
            let _ = writeln!(out, r#"<path d="{}" fill="{fill}" fill-opacity="0.6"/>"#, path(poly.vertices()));
        }
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<path d="{}" fill="none" stroke="blue" stroke-width="1.5"/>"#, path(&corners));
    let _ = writeln!(out, "</svg>");
    out
}

fn has_colour(c: &PeriodicColouring, layer: usize, cell: HexCell, colour: u32) -> bool {
    c.layers()[layer].colours.colours(cell).any(|x| x == colour)
}

fn span(v: impl Iterator<Item = f64>) -> (f64, f64) {
    v.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
}
