//! Deterministic SVG drawings of bond graphs, face complexes, selected
//! regions and polygonal sets.
//!
//! Output depends only on the input and the options: elements are emitted in
//! face/edge index order and every coordinate is printed with three decimals.

use std::fmt::Write as _;

use crate::anisotropy::PolygonalSet;
use crate::defects::face_defect;
use crate::face_complex::{ComponentRole, EdgeClass, FaceComplex, FaceKind, RegionSelection};
use crate::geometry::Point;

#[derive(Debug, Clone, PartialEq)]
pub struct SvgOptions {
    /// Pixels per unit length.
    pub scale: f64,
    /// Blank border, in units.
    pub margin: f64,
    pub show_vertices: bool,
    /// Write the face defect at the centre of every bounded face.
    pub annotate_defects: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions { scale: 40.0, margin: 0.75, show_vertices: true, annotate_defects: false }
    }
}

pub enum Drawable<'a> {
    Faces(&'a FaceComplex),
    Region(&'a FaceComplex, &'a RegionSelection),
    Polygon(&'a PolygonalSet),
}

pub fn render_svg(item: Drawable<'_>, opts: &SvgOptions) -> String {
    match item {
        Drawable::Faces(fc) => render_complex(fc, None, opts),
        Drawable::Region(fc, sel) => render_complex(fc, Some(sel), opts),
        Drawable::Polygon(set) => render_polygon(set, opts),
    }
}

const BOXTIMES_FILL: &str = "#c9dcf0";
const PLANAR_FILL: &str = "#f3e3b5";
const SELECTED_FILL: &str = "#a8d5a2";
const UNSELECTED_FILL: &str = "#eeeeee";

fn edge_style(class: EdgeClass, diagonal: bool) -> (&'static str, &'static str) {
    if diagonal {
        return ("diagonal", r##"stroke="#2e86c1" stroke-width="1" stroke-dasharray="4 3""##);
    }
    match class {
        EdgeClass::Interior => ("interior", r##"stroke="#777777" stroke-width="1.5""##),
        EdgeClass::Boundary => ("boundary", r##"stroke="#111111" stroke-width="2.5""##),
        EdgeClass::WireExt => ("wire wire-ext", r##"stroke="#c0392b" stroke-width="2""##),
        EdgeClass::WireInt => ("wire wire-int", r##"stroke="#8e44ad" stroke-width="2""##),
    }
}

struct Frame {
    x0: f64,
    y1: f64,
    scale: f64,
    width: f64,
    height: f64,
}

impl Frame {
    fn new<'a>(points: impl Iterator<Item = &'a Point>, opts: &SvgOptions) -> Frame {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for p in points {
            x0 = x0.min(p.x);
            x1 = x1.max(p.x);
            y0 = y0.min(p.y);
            y1 = y1.max(p.y);
        }
        if !x0.is_finite() {
            (x0, x1, y0, y1) = (0.0, 0.0, 0.0, 0.0);
        }
        let m = opts.margin;
        Frame {
            x0: x0 - m,
            y1: y1 + m,
            scale: opts.scale,
            width: (x1 - x0 + 2.0 * m) * opts.scale,
            height: (y1 - y0 + 2.0 * m) * opts.scale,
        }
    }

    /// Screen coordinates; the y axis points down in SVG.
    fn map(&self, p: &Point) -> (f64, f64) {
        ((p.x - self.x0) * self.scale + 0.0, (self.y1 - p.y) * self.scale + 0.0)
    }

    fn header(&self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w:.3}\" height=\"{h:.3}\" viewBox=\"0 0 {w:.3} {h:.3}\">\n",
            w = self.width,
            h = self.height
        )
    }

    fn closed_path(&self, out: &mut String, ring: &[Point]) {
        for (i, p) in ring.iter().enumerate() {
            let (x, y) = self.map(p);
            write!(out, "{}{x:.3} {y:.3} ", if i == 0 { "M" } else { "L" }).unwrap();
        }
        out.push('Z');
    }
}

fn render_complex(fc: &FaceComplex, sel: Option<&RegionSelection>, opts: &SvgOptions) -> String {
    let g = fc.graph();
    let frame = Frame::new(g.config().points().iter(), opts);
    let mut out = frame.header();

    out.push_str("<g id=\"faces\" fill-rule=\"evenodd\" stroke=\"none\">\n");
    for f in fc.bounded_faces() {
        let face = fc.face(f);
        let (class, fill) = match (sel, face.kind) {
            (Some(s), _) if s.contains(f) => ("face selected", SELECTED_FILL),
            (Some(_), _) => ("face unselected", UNSELECTED_FILL),
            (None, FaceKind::Boxtimes) => ("face boxtimes", BOXTIMES_FILL),
            (None, _) => ("face planar", PLANAR_FILL),
        };
        let mut d = String::new();
        match face.quad {
            Some(q) => frame.closed_path(&mut d, &q.map(|v| g.point(v))),
            None => {
                // holes come from the interior walks; even-odd leaves them blank
                for c in face.components.iter().filter(|c| c.walk.len() > 1) {
                    let ring: Vec<Point> = c.walk.iter().map(|&v| g.point(v)).collect();
                    frame.closed_path(&mut d, &ring);
                }
            }
        }
        writeln!(out, "<path class=\"{class}\" data-face=\"{f}\" fill=\"{fill}\" d=\"{}\"/>", d.trim_end()).unwrap();
    }
    out.push_str("</g>\n");

    out.push_str("<g id=\"edges\" stroke-linecap=\"round\">\n");
    let highlighted: std::collections::HashSet<usize> =
        sel.map(|s| s.boundary_edges.iter().copied().collect()).unwrap_or_default();
    for (e, &[a, b]) in g.edges().iter().enumerate() {
        let (class, style) = edge_style(fc.edge_class(e), fc.is_diagonal(e));
        let (x1, y1) = frame.map(&g.point(a));
        let (x2, y2) = frame.map(&g.point(b));
        writeln!(
            out,
            "<line class=\"edge {class}\" data-edge=\"{e}\" x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" {style}/>"
        )
        .unwrap();
        if highlighted.contains(&e) {
            writeln!(
                out,
                "<line class=\"region-boundary\" x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" stroke=\"#1e8449\" stroke-width=\"5\" stroke-opacity=\"0.5\"/>"
            )
            .unwrap();
        }
    }
    out.push_str("</g>\n");

    // interior boundary components of bounded faces: the holes and islands
    out.push_str("<g id=\"interior-components\" fill=\"none\" stroke=\"#e67e22\" stroke-width=\"3\" stroke-dasharray=\"2 4\">\n");
    for f in fc.bounded_faces() {
        for c in fc.face(f).components.iter().filter(|c| c.role == ComponentRole::Interior) {
            if c.walk.len() == 1 {
                let (x, y) = frame.map(&g.point(c.walk[0]));
                writeln!(out, "<circle class=\"interior-component\" data-face=\"{f}\" cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"7.000\"/>")
                    .unwrap();
            } else {
                let ring: Vec<Point> = c.walk.iter().map(|&v| g.point(v)).collect();
                let mut d = String::new();
                frame.closed_path(&mut d, &ring);
                writeln!(out, "<path class=\"interior-component\" data-face=\"{f}\" d=\"{}\"/>", d.trim_end()).unwrap();
            }
        }
    }
    out.push_str("</g>\n");

    if opts.show_vertices {
        out.push_str("<g id=\"vertices\" fill=\"#111111\">\n");
        for p in g.config().points() {
            let (x, y) = frame.map(p);
            writeln!(out, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"3.000\"/>").unwrap();
        }
        out.push_str("</g>\n");
    }

    if opts.annotate_defects {
        out.push_str("<g id=\"defects\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">\n");
        for f in fc.bounded_faces() {
            let Some(ext) = fc.face(f).exterior() else { continue };
            let n = ext.walk.len() as f64;
            let c = ext.walk.iter().fold(Point::new(0.0, 0.0), |acc, &v| {
                let p = g.point(v);
                Point::new(acc.x + p.x / n, acc.y + p.y / n)
            });
            let (x, y) = frame.map(&c);
            writeln!(out, "<text class=\"defect\" data-face=\"{f}\" x=\"{x:.3}\" y=\"{y:.3}\">{}</text>", face_defect(fc, f))
                .unwrap();
        }
        out.push_str("</g>\n");
    }

    out.push_str("</svg>\n");
    out
}

fn render_polygon(set: &PolygonalSet, opts: &SvgOptions) -> String {
    let frame = Frame::new(set.vertices(), opts);
    let mut out = frame.header();
    let mut d = String::new();
    for curve in &set.curves {
        frame.closed_path(&mut d, curve);
        d.push(' ');
    }
    writeln!(
        out,
        "<path class=\"polygon\" fill=\"{PLANAR_FILL}\" fill-rule=\"evenodd\" stroke=\"#111111\" stroke-width=\"2\" d=\"{}\"/>",
        d.trim_end()
    )
    .unwrap();
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anisotropy::wulff_octagon;
    use crate::config::Configuration;

    fn unit_square() -> FaceComplex {
        FaceComplex::from_config(Configuration::lattice([(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap()).unwrap()
    }

    #[test]
    fn unit_square_with_diagonals() {
        let svg = render_svg(Drawable::Faces(&unit_square()), &SvgOptions::default());
        assert_eq!(svg.matches("class=\"edge boundary\"").count(), 4);
        assert_eq!(svg.matches("class=\"edge diagonal\"").count(), 2);
        assert_eq!(svg.matches("class=\"face boxtimes\"").count(), 1);
        assert_eq!(svg.matches("class=\"face ").count(), 1);
        assert!(svg.starts_with("<svg ") && svg.ends_with("</svg>\n"));
    }

    #[test]
    fn holes_get_distinct_strokes() {
        // a 3x3 ring with its centre point: one planar face with a point hole
        let mut pts: Vec<(i64, i64)> = (0..4).flat_map(|i| [(i, 0), (i, 4), (0, i + 1), (4, i)]).collect();
        pts.sort();
        pts.dedup();
        pts.push((2, 2));
        let fc = FaceComplex::from_config(Configuration::lattice(pts).unwrap()).unwrap();
        let opts = SvgOptions { annotate_defects: true, ..SvgOptions::default() };
        let svg = render_svg(Drawable::Faces(&fc), &opts);
        assert_eq!(svg.matches("<circle class=\"interior-component\"").count(), 1);
        assert!(svg.contains("class=\"defect\""));
        assert_eq!(svg, render_svg(Drawable::Faces(&fc), &opts));
    }

    #[test]
    fn region_highlights_selection() {
        let fc = unit_square();
        let sel = fc.select_region(&fc.boxtimes_faces()).unwrap();
        let svg = render_svg(Drawable::Region(&fc, &sel), &SvgOptions::default());
        assert_eq!(svg.matches("class=\"face selected\"").count(), 1);
        assert_eq!(svg.matches("class=\"region-boundary\"").count(), 4);
    }

    #[test]
    fn wulff_octagon_is_an_eight_gon() {
        let svg = render_svg(Drawable::Polygon(&wulff_octagon(1.0).unwrap()), &SvgOptions::default());
        let d = svg.split(" d=\"").nth(1).unwrap();
        let d = &d[..d.find('"').unwrap()];
        assert_eq!(d.matches('M').count(), 1);
        assert_eq!(d.matches('L').count(), 7);
        assert!(d.ends_with('Z'));
    }
}
