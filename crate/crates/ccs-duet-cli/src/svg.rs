//! Trace plots. Initial placements are green, goals red, traces blue, and the forbidden regions
//! around B's start and goal are drawn as faint dashed outlines.

use std::fmt::Write;

use ccs_duet::pathfind::PointPath;
use ccs_duet::shape::{RoundedPolygon, SumBoundary};
use ccs_duet::{CcsShape, Instance, PlanResult, Point};

const WIDTH: f64 = 800.0;

fn shape_outline(shape: &CcsShape, at: Point) -> Vec<Point> {
    match shape {
        CcsShape::Disc { radius } => (0..96)
            .map(|i| at + Point::unit(std::f64::consts::TAU * i as f64 / 96.0) * *radius)
            .collect(),
        CcsShape::Polygon { vertices } => vertices.iter().map(|v| at + *v).collect(),
    }
}

fn body_outline(body: &RoundedPolygon, at: Point) -> Vec<Point> {
    let s = SumBoundary::new(body.clone(), at);
    let n = 192;
    (0..n).map(|i| s.point_at(s.perimeter * i as f64 / n as f64)).collect()
}

fn path_points(p: &PointPath) -> Vec<Point> {
    let n = 400;
    (0..=n).map(|i| p.point_at(p.length * i as f64 / n as f64)).collect()
}

struct Frame {
    lo: Point,
    scale: f64,
    height: f64,
}

impl Frame {
    fn map(&self, p: Point) -> (f64, f64) {
        ((p.x - self.lo.x) * self.scale, self.height - (p.y - self.lo.y) * self.scale)
    }

    fn points(&self, pts: &[Point]) -> String {
        let mut s = String::new();
        for p in pts {
            let (x, y) = self.map(*p);
            let _ = write!(s, "{x:.2},{y:.2} ");
        }
        s.trim_end().to_string()
    }
}

pub fn render(inst: &Instance, plan: &PlanResult) -> String {
    let body = inst.body();
    let reach = body.core.iter().map(|v| v.norm()).fold(0.0, f64::max) + body.radius;
    let pts = inst.points();
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in pts.iter().chain([plan.chosen.a_int].iter()) {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    lo = lo - Point::new(reach, reach);
    hi = hi + Point::new(reach, reach);
    let scale = WIDTH / (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
    let height = (hi.y - lo.y) * scale;
    let width = (hi.x - lo.x) * scale;
    let f = Frame { lo, scale, height };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.2} {height:.2}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for c in [inst.b0, inst.b1] {
        let _ = writeln!(
            out,
            r##"<polygon points="{}" fill="none" stroke="#999" stroke-dasharray="4 3" stroke-width="1"/>"##,
            f.points(&body_outline(&body, c))
        );
    }
    let robots = [
        (&inst.shape_a, inst.a0, "#2a2", "A0"),
        (&inst.shape_b, inst.b0, "#2a2", "B0"),
        (&inst.shape_a, inst.a1, "#d22", "A1"),
        (&inst.shape_b, inst.b1, "#d22", "B1"),
    ];
    for (shape, at, color, label) in robots {
        let _ = writeln!(
            out,
            r#"<polygon points="{}" fill="{color}" fill-opacity="0.15" stroke="{color}" stroke-width="1.5"/>"#,
            f.points(&shape_outline(shape, at))
        );
        let (x, y) = f.map(at);
        let _ = writeln!(out, r#"<text x="{x:.2}" y="{y:.2}" font-size="12" fill="{color}">{label}</text>"#);
    }
    let m = &plan.chosen.comotion;
    for (path, dash) in [(&m.path_a, ""), (&m.path_b, r#" stroke-dasharray="6 3""#)] {
        let _ = writeln!(
            out,
            r##"<polyline points="{}" fill="none" stroke="#23c" stroke-width="2"{dash}/>"##,
            f.points(&path_points(path))
        );
    }
    let (x, y) = f.map(plan.chosen.a_int);
    let _ = writeln!(out, r##"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="#23c"/>"##);
    out.push_str("</svg>\n");
    out
}
