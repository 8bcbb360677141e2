//! SVG rendering of planar forests: black edges, red terminals, blue
//! branch points.

use std::fmt::Write;

use steiner_core::{Forest64, Point64, VertexKind};

/// Extra circle drawn under the tree, e.g. the ball of an analysis.
#[derive(Clone, Debug)]
pub struct Circle {
    pub center: Point64,
    pub radius: f64,
}

const SIZE: f64 = 600.0;
const MARGIN: f64 = 20.0;

/// `None` for non-planar forests.
pub fn render(tree: &Forest64, circles: &[Circle], title: &str) -> Option<String> {
    if tree.dim().is_some_and(|d| d != 2) {
        return None;
    }
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    let mut grow = |x: f64, y: f64, r: f64| {
        lo[0] = lo[0].min(x - r);
        lo[1] = lo[1].min(y - r);
        hi[0] = hi[0].max(x + r);
        hi[1] = hi[1].max(y + r);
    };
    for p in tree.vertices() {
        grow(p.x(), p.y(), 0.0);
    }
    for c in circles {
        grow(c.center.x(), c.center.y(), c.radius);
    }
    if !lo[0].is_finite() {
        lo = [-1.0, -1.0];
        hi = [1.0, 1.0];
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-300);
    let k = (SIZE - 2.0 * MARGIN) / span;
    // y grows downward in SVG.
    let map = |p: &Point64| (MARGIN + (p.x() - lo[0]) * k, SIZE - MARGIN - (p.y() - lo[1]) * k);
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(s, "<title>{}</title>", escape(title)).unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for c in circles {
        let (x, y) = map(&c.center);
        writeln!(
            s,
            r##"<circle cx="{x:.3}" cy="{y:.3}" r="{:.3}" fill="none" stroke="#999999" stroke-dasharray="4 3"/>"##,
            c.radius * k
        )
        .unwrap();
    }
    for &(u, v) in tree.edges() {
        let (x1, y1) = map(tree.vertex(u));
        let (x2, y2) = map(tree.vertex(v));
        writeln!(
            s,
            r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="black" stroke-width="1.5"/>"#
        )
        .unwrap();
    }
    for (i, p) in tree.vertices().iter().enumerate() {
        let (x, y) = map(p);
        let (color, r) = match tree.kind(i) {
            VertexKind::Terminal => ("red", 4.0),
            VertexKind::Branch => ("blue", 3.0),
            VertexKind::Boundary => ("gray", 2.0),
        };
        writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{r}" fill="{color}"/>"#).unwrap();
    }
    s.push_str("</svg>\n");
    Some(s)
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_has_one_line() {
        let mut f = Forest64::new();
        f.add_vertex(Point64::xy(0.0, 0.0), VertexKind::Terminal);
        f.add_vertex(Point64::xy(1.0, 0.0), VertexKind::Terminal);
        f.add_edge(0, 1).unwrap();
        let s = render(&f, &[], "a<b").unwrap();
        assert_eq!(s.matches("<line").count(), 1);
        assert_eq!(s.matches(r#"fill="red""#).count(), 2);
        assert!(s.contains("a&lt;b"));
        assert!(s.ends_with("</svg>\n"));
    }

    #[test]
    fn space_is_not_rendered() {
        let mut f = Forest64::new();
        f.add_vertex(Point64::new(vec![0.0, 0.0, 0.0]).unwrap(), VertexKind::Terminal);
        assert!(render(&f, &[], "").is_none());
    }
}
