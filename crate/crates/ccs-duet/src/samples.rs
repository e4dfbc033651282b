//! Random instance generation for tests and benchmarks.

use std::f64::consts::{PI, TAU};

use rand::Rng;

use crate::geom::{convex_hull, Point, TolerancePolicy};
use crate::pathfind::in_corridor;
use crate::planner::{check_straight_line, Instance};
use crate::shape::{CcsShape, SumBoundary};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeMix {
    DiscDisc,
    DiscPolygon,
    PolygonPolygon,
}

impl ShapeMix {
    pub const ALL: [ShapeMix; 3] = [ShapeMix::DiscDisc, ShapeMix::DiscPolygon, ShapeMix::PolygonPolygon];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// Any viable instance.
    Any,
    /// Straight-line motion is blocked.
    Blocked,
    /// Straight-line motion is free.
    Straight,
}

pub fn random_disc<R: Rng>(rng: &mut R) -> CcsShape {
    CcsShape::disc(rng.gen_range(0.3..1.5))
}

/// A random convex centrally-symmetric polygon with 4 to 10 vertices.
pub fn random_polygon<R: Rng>(rng: &mut R) -> CcsShape {
    match rng.gen_range(0..3) {
        0 => CcsShape::rect(rng.gen_range(0.3..1.5), rng.gen_range(0.3..1.5)),
        1 => CcsShape::regular(rng.gen_range(2..6), rng.gen_range(0.4..1.5), rng.gen_range(0.0..PI)),
        _ => loop {
            let k = rng.gen_range(2..5);
            let mut pts = Vec::new();
            for _ in 0..k {
                let a: f64 = rng.gen_range(0.0..TAU);
                let p = Point::unit(a) * rng.gen_range(0.4..1.5);
                pts.push(p);
                pts.push(-p);
            }
            let hull = convex_hull(&pts);
            if hull.len() % 2 != 0 || hull.len() < 4 {
                continue;
            }
            let shape = CcsShape::polygon(hull);
            if well_shaped(&shape) {
                break shape;
            }
        },
    }
}

/// Rejects slivers and near-collinear corners that only test rounding.
fn well_shaped(shape: &CcsShape) -> bool {
    let CcsShape::Polygon { vertices } = shape else {
        return true;
    };
    if shape.validate(&TolerancePolicy::default()).is_err() {
        return false;
    }
    let n = vertices.len();
    (0..n).all(|i| {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        let c = vertices[(i + 2) % n];
        let turn = (b - a).normalized().cross((c - b).normalized());
        a.dist(b) > 0.05 && turn > 0.05
    })
}

pub fn random_shapes<R: Rng>(rng: &mut R, mix: ShapeMix) -> (CcsShape, CcsShape) {
    match mix {
        ShapeMix::DiscDisc => (random_disc(rng), random_disc(rng)),
        ShapeMix::DiscPolygon => {
            if rng.gen_bool(0.5) {
                (random_disc(rng), random_polygon(rng))
            } else {
                (random_polygon(rng), random_disc(rng))
            }
        }
        ShapeMix::PolygonPolygon => (random_polygon(rng), random_polygon(rng)),
    }
}

fn viable(inst: &Instance) -> bool {
    let body = inst.body();
    body.signed_distance(inst.a0 - inst.b0) > 1e-6 && body.signed_distance(inst.a1 - inst.b1) > 1e-6
}

/// A random viable instance of the requested kind.
pub fn random_instance<R: Rng>(rng: &mut R, mix: ShapeMix, kind: Kind) -> Instance {
    let tol = TolerancePolicy::default();
    loop {
        let (sa, sb) = random_shapes(rng, mix);
        let span = rng.gen_range(2.0..8.0);
        let mut pt = || Point::new(rng.gen_range(-span..span), rng.gen_range(-span..span));
        let inst = Instance::new(sa, sb, pt(), pt(), pt(), pt());
        if !viable(&inst) {
            continue;
        }
        let straight = check_straight_line(&inst, &tol).is_some();
        match kind {
            Kind::Any => return inst,
            Kind::Blocked if !straight => return inst,
            Kind::Straight if straight => return inst,
            _ => {}
        }
    }
}

/// An instance whose robots travel along separated parallel lanes, so that the corridor
/// conditions for straight motion hold by construction.
pub fn separated_lanes<R: Rng>(rng: &mut R, mix: ShapeMix) -> Instance {
    let tol = TolerancePolicy::default();
    loop {
        let (sa, sb) = random_shapes(rng, mix);
        let probe = Instance::new(sa.clone(), sb.clone(), Point::ORIGIN, Point::ORIGIN, Point::ORIGIN, Point::ORIGIN);
        let body = probe.body();
        let width = body.core.iter().map(|v| v.norm()).fold(0.0, f64::max) + body.radius;
        let dir = Point::unit(rng.gen_range(0.0..TAU));
        let normal = dir.perp();
        let gap = 2.0 * width + rng.gen_range(0.1..3.0);
        let base = Point::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let along = |s: f64| dir * s;
        let a0 = base + normal * gap + along(rng.gen_range(-4.0..4.0));
        let a1 = base + normal * gap + along(rng.gen_range(-4.0..4.0));
        let b0 = base + along(rng.gen_range(-4.0..4.0));
        let b1 = base + along(rng.gen_range(-4.0..4.0));
        let inst = Instance::new(sa, sb, a0, b0, a1, b1);
        let tpl = SumBoundary::new(body, Point::ORIGIN);
        if !in_corridor(inst.a0, inst.b0, inst.b1, &tpl, &tol) && !in_corridor(inst.b1, inst.a0, inst.a1, &tpl, &tol) {
            return inst;
        }
    }
}
