//! SVG figures of a single case.
//!
//! The patch hull (plus the CoP when it falls outside) is fitted into a fixed
//! 800x800 viewport with a 10% margin and the y axis pointing up. All
//! coordinates are printed with three decimals so the output is byte-stable.

use std::fmt::Write as _;

use signorini_core::{ExtendedCop, Hull, Patch, Shape, SupportSet, Vec2, Verdict, Wrench};

pub const SIZE: f64 = 800.0;
pub const MARGIN: f64 = 0.1 * SIZE;

const OUTLINE: &str = "#1f4e79";
const HULL: &str = "#7f7f7f";
const HIGHLIGHT: &str = "#e07b00";
const LINE: &str = "#b22222";
const COP: &str = "#000000";

/// Fixed decimal formatting; `-0.000` is printed as `0.000`.
pub fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".to_owned()
    } else {
        s
    }
}

/// World-to-viewport map.
#[derive(Clone, Copy, Debug)]
pub struct View {
    center: Vec2,
    scale: f64,
    /// World-space half extent of the drawable area, margin included.
    half: f64,
}

impl View {
    pub fn fit(lo: Vec2, hi: Vec2) -> Self {
        let center = (lo + hi) * 0.5;
        let extent = (hi.x - lo.x).max(hi.y - lo.y);
        let extent = if extent > 0.0 { extent } else { 2.0 };
        let scale = (SIZE - 2.0 * MARGIN) / extent;
        Self {
            center,
            scale,
            half: 0.5 * SIZE / scale,
        }
    }

    pub fn map(&self, p: Vec2) -> (f64, f64) {
        (
            0.5 * SIZE + (p.x - self.center.x) * self.scale,
            0.5 * SIZE - (p.y - self.center.y) * self.scale,
        )
    }

    fn pt(&self, p: Vec2) -> String {
        let (x, y) = self.map(p);
        format!("{},{}", num(x), num(y))
    }

    /// Clips the line `{x : <n, x> = offset}` to the visible square.
    fn clip_line(&self, n: Vec2, offset: f64) -> Option<(Vec2, Vec2)> {
        let base = n * offset;
        let dir = n.perp();
        let (lo, hi) = (
            self.center - Vec2::new(self.half, self.half),
            self.center + Vec2::new(self.half, self.half),
        );
        let mut t0 = f64::NEG_INFINITY;
        let mut t1 = f64::INFINITY;
        for (b, d, l, h) in [(base.x, dir.x, lo.x, hi.x), (base.y, dir.y, lo.y, hi.y)] {
            if d.abs() < 1e-15 {
                if b < l || b > h {
                    return None;
                }
            } else {
                let (a, c) = ((l - b) / d, (h - b) / d);
                t0 = t0.max(a.min(c));
                t1 = t1.min(a.max(c));
            }
        }
        (t0 < t1).then(|| (base + dir * t0, base + dir * t1))
    }
}

fn polygon_points(view: &View, vertices: &[Vec2]) -> String {
    vertices.iter().map(|&v| view.pt(v)).collect::<Vec<_>>().join(" ")
}

fn ellipse_element(view: &View, e: &signorini_core::Ellipse, style: &str) -> String {
    let (cx, cy) = view.map(e.center);
    // The y flip turns a counterclockwise world rotation into a clockwise one.
    format!(
        "<ellipse cx=\"{}\" cy=\"{}\" rx=\"{}\" ry=\"{}\" transform=\"rotate({} {} {})\" {style}/>\n",
        num(cx),
        num(cy),
        num(e.semi_axes.0 * view.scale),
        num(e.semi_axes.1 * view.scale),
        num(-e.rotation.to_degrees()),
        num(cx),
        num(cy)
    )
}

fn hull_element(view: &View, hull: &Hull, style: &str) -> String {
    match hull {
        Hull::Polygon(v) if v.len() == 1 => {
            let (x, y) = view.map(v[0]);
            format!("<circle cx=\"{}\" cy=\"{}\" r=\"3.000\" {style}/>\n", num(x), num(y))
        }
        Hull::Polygon(v) if v.len() == 2 => {
            format!("<polyline points=\"{}\" {style}/>\n", polygon_points(view, v))
        }
        Hull::Polygon(v) => format!("<polygon points=\"{}\" {style}/>\n", polygon_points(view, v)),
        Hull::Ellipse(e) => ellipse_element(view, e, style),
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

/// File name for a case: ASCII alphanumerics, `-` and `_` kept, everything
/// else replaced by `_`.
pub fn file_name(case: &str, index: usize) -> String {
    let stem: String = case
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect();
    if stem.is_empty() {
        format!("case{index}.svg")
    } else {
        format!("{stem}.svg")
    }
}

/// Renders one case.
pub fn render_case(patch: &Patch, name: &str, w: &Wrench, verdict: &Verdict) -> String {
    let (mut lo, mut hi) = patch.bounding_box();
    let extent = (hi.x - lo.x).max(hi.y - lo.y).max(1e-12);
    let mid = (lo + hi) * 0.5;
    let mut extra = Vec::new();
    extra.extend(verdict.cop);
    // Pull a nearby zero-line into view, but not one far from the patch.
    if let Some(line) = verdict.zero_line {
        let d = line.signed_distance(mid);
        if d.abs() <= 2.0 * extent {
            extra.push(mid - line.normal * d);
        }
    }
    for p in extra {
        lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let view = View::fit(lo, hi);

    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">"
    );
    s.push_str(
        "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"8\" markerHeight=\"8\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#b22222\"/></marker></defs>\n",
    );
    s.push_str("<rect x=\"0\" y=\"0\" width=\"800\" height=\"800\" fill=\"#ffffff\"/>\n");

    let regime = verdict.regime.map(|r| r.kind.as_str()).unwrap_or("not satisfied");
    let _ = writeln!(
        s,
        "<text x=\"400.000\" y=\"40.000\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"24\">{} ({regime})</text>",
        escape(name)
    );

    // Extended CoP highlight goes under the outlines.
    match verdict.extended_cop {
        ExtendedCop::Set(SupportSet::FullHull) => {
            s.push_str(&hull_element(
                &view,
                patch.hull(),
                &format!("fill=\"{HIGHLIGHT}\" fill-opacity=\"0.25\" stroke=\"none\""),
            ));
        }
        ExtendedCop::Set(SupportSet::Segment(a, b)) => {
            let _ = writeln!(
                s,
                "<polyline points=\"{} {}\" fill=\"none\" stroke=\"{HIGHLIGHT}\" stroke-width=\"10\" stroke-linecap=\"round\"/>",
                view.pt(a),
                view.pt(b)
            );
        }
        ExtendedCop::Set(SupportSet::Vertex(p)) | ExtendedCop::Point(p) => {
            let (x, y) = view.map(p);
            let _ = writeln!(
                s,
                "<circle cx=\"{}\" cy=\"{}\" r=\"12.000\" fill=\"{HIGHLIGHT}\" fill-opacity=\"0.6\"/>",
                num(x),
                num(y)
            );
        }
    }

    let hull_style = format!("fill=\"none\" stroke=\"{HULL}\" stroke-width=\"1.5\" stroke-dasharray=\"8 6\"");
    let outline_style = format!("fill=\"{OUTLINE}\" fill-opacity=\"0.12\" stroke=\"{OUTLINE}\" stroke-width=\"2.5\"");
    match patch.shape() {
        Shape::Polygon(v) => {
            s.push_str(&hull_element(&view, patch.hull(), &hull_style));
            if v.len() >= 3 {
                let _ = writeln!(s, "<polygon points=\"{}\" {outline_style}/>", polygon_points(&view, v));
            } else {
                s.push_str(&hull_element(&view, patch.hull(), &outline_style));
            }
        }
        Shape::Ellipse(e) => s.push_str(&ellipse_element(&view, e, &outline_style)),
    }

    if let Some(line) = verdict.zero_line {
        if let Some((a, b)) = view.clip_line(line.normal, line.offset) {
            let _ = writeln!(
                s,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{LINE}\" stroke-width=\"2\"/>",
                num(view.map(a).0),
                num(view.map(a).1),
                num(view.map(b).0),
                num(view.map(b).1)
            );
            // Arrow toward the side where the normal velocity is positive.
            let foot = (a + b) * 0.5;
            let tip = foot + line.normal * (60.0 / view.scale);
            let _ = writeln!(
                s,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{LINE}\" stroke-width=\"2\" marker-end=\"url(#arrow)\"/>",
                num(view.map(foot).0),
                num(view.map(foot).1),
                num(view.map(tip).0),
                num(view.map(tip).1)
            );
        }
    }

    if let Some(c) = verdict.cop {
        let (x, y) = view.map(c);
        let _ = writeln!(
            s,
            "<circle cx=\"{}\" cy=\"{}\" r=\"6.000\" fill=\"{COP}\"/>",
            num(x),
            num(y)
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"18\">f_N = {}</text>",
            num(x + 12.0),
            num(y - 12.0),
            num(w.f_n)
        );
    }

    s.push_str("</svg>\n");
    s
}
