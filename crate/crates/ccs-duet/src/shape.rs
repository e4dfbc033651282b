//! Robot bodies and their Minkowski sums.
//!
//! Every sum that arises here is a *rounded polygon*: a convex core (a point, a segment or a
//! polygon) inflated by a radius. Disc + disc gives a point core, polygon + disc a polygon core,
//! and polygon + polygon a polygon core with zero radius.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{
    ccw_delta, convex_hull, segment_closest, segment_segment_distance, signed_area, Angle, AngularInterval, Point, RigidTransform,
    TolerancePolicy,
};

#[derive(Debug, Error, PartialEq)]
pub enum ShapeError {
    #[error("disc radius must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("polygon needs an even number of at least 4 vertices, got {0}")]
    VertexCount(usize),
    #[error("polygon vertex {0} is not finite")]
    NonFinite(usize),
    #[error("polygon is not strictly convex and counter-clockwise at vertex {0}")]
    NotConvex(usize),
    #[error("polygon is not centrally symmetric: vertex {0} and vertex {1} are not opposite (off by {2:.3e})")]
    NotSymmetric(usize, usize, f64),
    #[error("configuration is not viable: separation {0:.3e} is negative")]
    NonViable(f64),
    #[error("point ({0}, {1}) is not on the boundary (off by {2:.3e})")]
    OffBoundary(f64, f64, f64),
}

/// A convex centrally-symmetric body, described around its own center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CcsShape {
    Disc { radius: f64 },
    Polygon { vertices: Vec<Point> },
}

/// Support point(s) of a body in a direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support {
    Point(Point),
    Edge(Point, Point),
}

impl CcsShape {
    pub fn disc(radius: f64) -> Self {
        CcsShape::Disc { radius }
    }

    pub fn polygon(vertices: Vec<Point>) -> Self {
        CcsShape::Polygon { vertices }
    }

    /// Axis-aligned rectangle with half extents `hx`, `hy`.
    pub fn rect(hx: f64, hy: f64) -> Self {
        CcsShape::polygon(vec![
            Point::new(-hx, -hy),
            Point::new(hx, -hy),
            Point::new(hx, hy),
            Point::new(-hx, hy),
        ])
    }

    /// Regular `2k`-gon of circumradius `r`, rotated by `phase`.
    pub fn regular(k: usize, r: f64, phase: f64) -> Self {
        let n = 2 * k.max(2);
        CcsShape::polygon(
            (0..n)
                .map(|i| Point::unit(phase + TAU * i as f64 / n as f64) * r)
                .collect(),
        )
    }

    pub fn validate(&self, tol: &TolerancePolicy) -> Result<(), ShapeError> {
        match self {
            CcsShape::Disc { radius } => {
                if radius.is_finite() && *radius > 0.0 {
                    Ok(())
                } else {
                    Err(ShapeError::BadRadius(*radius))
                }
            }
            CcsShape::Polygon { vertices } => {
                let n = vertices.len();
                if n < 4 || n % 2 != 0 {
                    return Err(ShapeError::VertexCount(n));
                }
                if let Some(i) = vertices.iter().position(|v| !v.is_finite()) {
                    return Err(ShapeError::NonFinite(i));
                }
                for i in 0..n {
                    let a = vertices[i];
                    let b = vertices[(i + 1) % n];
                    let c = vertices[(i + 2) % n];
                    if (b - a).cross(c - b) <= 0.0 {
                        return Err(ShapeError::NotConvex((i + 1) % n));
                    }
                }
                if signed_area(vertices) <= 0.0 {
                    return Err(ShapeError::NotConvex(0));
                }
                let h = n / 2;
                for i in 0..h {
                    let off = (vertices[i] + vertices[i + h]).norm();
                    if off > tol.eps_length.max(1e-12) * (1.0 + vertices[i].norm()) {
                        return Err(ShapeError::NotSymmetric(i, i + h, off));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn reach(&self, a: Angle) -> f64 {
        let u = a.unit();
        match self {
            CcsShape::Disc { radius } => *radius,
            CcsShape::Polygon { vertices } => vertices.iter().map(|v| v.dot(u)).fold(f64::NEG_INFINITY, f64::max),
        }
    }

    pub fn support_point(&self, a: Angle, tol: &TolerancePolicy) -> Support {
        let u = a.unit();
        match self {
            CcsShape::Disc { radius } => Support::Point(u * *radius),
            CcsShape::Polygon { vertices } => {
                let r = self.reach(a);
                let hits: Vec<usize> = (0..vertices.len())
                    .filter(|&i| vertices[i].dot(u) >= r - tol.eps_length)
                    .collect();
                if hits.len() >= 2 {
                    // Order the edge CCW.
                    let n = vertices.len();
                    let (i, j) = (hits[0], hits[hits.len() - 1]);
                    if (i + 1) % n == j {
                        Support::Edge(vertices[i], vertices[j])
                    } else {
                        Support::Edge(vertices[j], vertices[i])
                    }
                } else {
                    Support::Point(vertices[hits[0]])
                }
            }
        }
    }

    /// Core polygon and radius describing the body as a rounded polygon.
    pub fn rounded(&self) -> RoundedPolygon {
        match self {
            CcsShape::Disc { radius } => RoundedPolygon::new(vec![Point::ORIGIN], *radius),
            CcsShape::Polygon { vertices } => RoundedPolygon::new(vertices.clone(), 0.0),
        }
    }

    pub fn transformed_linear(&self, t: &RigidTransform) -> CcsShape {
        match self {
            CcsShape::Disc { radius } => CcsShape::Disc { radius: *radius },
            CcsShape::Polygon { vertices } => {
                let mut v: Vec<Point> = vertices.iter().map(|p| t.apply_vector(*p)).collect();
                if t.flipped {
                    v.reverse();
                }
                CcsShape::Polygon { vertices: v }
            }
        }
    }

    /// Largest distance from the center to a boundary point.
    pub fn circumradius(&self) -> f64 {
        match self {
            CcsShape::Disc { radius } => *radius,
            CcsShape::Polygon { vertices } => vertices.iter().map(|v| v.norm()).fold(0.0, f64::max),
        }
    }
}

/// Closest point on the core of a rounded polygon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoreFeature {
    Vertex(usize),
    /// Edge `i` runs from vertex `i` to vertex `i + 1`.
    Edge(usize),
    Interior,
}

/// A convex core (CCW vertex list, possibly a single point or a segment) inflated by `radius`.
/// Coordinates are relative to the body center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundedPolygon {
    pub core: Vec<Point>,
    pub radius: f64,
}

impl RoundedPolygon {
    pub fn new(core: Vec<Point>, radius: f64) -> Self {
        RoundedPolygon { core, radius }
    }

    pub fn n(&self) -> usize {
        self.core.len()
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.core[i % self.core.len()]
    }

    /// Outward normal angle of edge `i` (from vertex `i` to `i + 1`).
    pub fn edge_normal(&self, i: usize) -> f64 {
        let e = self.vertex(i + 1) - self.vertex(i);
        e.angle() - FRAC_PI_2
    }

    /// Normal cone of vertex `i`.
    pub fn vertex_cone(&self, i: usize) -> AngularInterval {
        let n = self.n();
        if n == 1 {
            return AngularInterval::full();
        }
        let a = self.edge_normal(i + n - 1);
        let b = self.edge_normal(i);
        AngularInterval::new(Angle::new(a), Angle::new(b))
    }

    pub fn reach(&self, a: f64) -> f64 {
        let u = Point::unit(a);
        self.core.iter().map(|v| v.dot(u)).fold(f64::NEG_INFINITY, f64::max) + self.radius
    }

    /// Index of the core vertex attaining the support in direction `a`.
    pub fn support_vertex(&self, a: f64) -> usize {
        let u = Point::unit(a);
        let mut best = 0;
        for (i, v) in self.core.iter().enumerate() {
            if v.dot(u) > self.core[best].dot(u) {
                best = i;
            }
        }
        best
    }

    /// Boundary point whose outward normal is `a`.
    pub fn boundary_point(&self, a: f64) -> Point {
        self.vertex(self.support_vertex(a)) + Point::unit(a) * self.radius
    }

    fn core_is_polygon(&self) -> bool {
        self.n() >= 3
    }

    fn inside_core(&self, p: Point) -> bool {
        if !self.core_is_polygon() {
            return false;
        }
        let n = self.n();
        (0..n).all(|i| (self.vertex(i + 1) - self.vertex(i)).cross(p - self.vertex(i)) >= 0.0)
    }

    /// Closest core point to `p` (relative coordinates) and the feature it lies on.
    pub fn nearest_core(&self, p: Point) -> (Point, CoreFeature, f64) {
        let n = self.n();
        if n == 1 {
            return (self.core[0], CoreFeature::Vertex(0), p.dist(self.core[0]));
        }
        if self.inside_core(p) {
            return (p, CoreFeature::Interior, 0.0);
        }
        let edges = if n == 2 { 1 } else { n };
        let mut best = (self.core[0], CoreFeature::Vertex(0), f64::INFINITY);
        for i in 0..edges {
            let a = self.vertex(i);
            let b = self.vertex(i + 1);
            let (d, c) = segment_closest(p, a, b);
            if d < best.2 {
                let len = a.dist(b);
                let feat = if c.dist(a) <= 1e-12 * (1.0 + len) {
                    CoreFeature::Vertex(i)
                } else if c.dist(b) <= 1e-12 * (1.0 + len) {
                    CoreFeature::Vertex((i + 1) % n)
                } else {
                    CoreFeature::Edge(i)
                };
                best = (c, feat, d);
            }
        }
        best
    }

    /// Signed distance from `p` (relative) to the boundary; negative inside.
    pub fn signed_distance(&self, p: Point) -> f64 {
        if self.inside_core(p) {
            let n = self.n();
            let depth = (0..n)
                .map(|i| {
                    let a = self.vertex(i);
                    let e = (self.vertex(i + 1) - a).normalized();
                    e.cross(p - a)
                })
                .fold(f64::INFINITY, f64::min);
            -depth - self.radius
        } else {
            self.nearest_core(p).2 - self.radius
        }
    }

    /// Minimum of [`Self::signed_distance`] over the closed segment `ab` (relative coordinates).
    /// Negative exactly when the segment enters the open region.
    pub fn segment_clearance(&self, a: Point, b: Point) -> f64 {
        let n = self.n();
        let d = if n >= 3 {
            (0..n)
                .map(|i| segment_segment_distance(a, b, self.vertex(i), self.vertex(i + 1)))
                .fold(f64::INFINITY, f64::min)
        } else if n == 2 {
            segment_segment_distance(a, b, self.core[0], self.core[1])
        } else {
            segment_closest(self.core[0], a, b).0
        };
        let meets_core = n >= 3 && (d == 0.0 || self.inside_core(a) || self.inside_core(b));
        if !meets_core {
            return d - self.radius;
        }
        // The signed distance is convex along the segment.
        let f = |t: f64| self.signed_distance(a.lerp(b, t));
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        let g = 0.5 * (5.0_f64.sqrt() - 1.0);
        let mut x1 = hi - g * (hi - lo);
        let mut x2 = lo + g * (hi - lo);
        let (mut f1, mut f2) = (f(x1), f(x2));
        for _ in 0..90 {
            if f1 <= f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = f(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = f(x2);
            }
        }
        f1.min(f2).min(f(0.0)).min(f(1.0))
    }

    /// Outward normal(s) at the boundary point nearest to `rel`.
    pub fn orientation(&self, rel: Point, tol: &TolerancePolicy) -> Result<AngularInterval, ShapeError> {
        let sd = self.signed_distance(rel);
        if sd < -tol.eps_length {
            return Err(ShapeError::NonViable(sd));
        }
        let (q, feat, dist) = self.nearest_core(rel);
        if dist > tol.eps_length {
            return Ok(AngularInterval::point(Angle::of(rel - q)));
        }
        // Contact with a sharp corner or a flat edge of a zero-radius sum.
        Ok(match feat {
            CoreFeature::Edge(i) => AngularInterval::point(Angle::new(self.edge_normal(i))),
            CoreFeature::Vertex(i) => self.vertex_cone(i),
            CoreFeature::Interior => self.interior_contact(rel),
        })
    }

    /// Contact feature for a point that rounding placed just inside a sharp core.
    fn interior_contact(&self, rel: Point) -> AngularInterval {
        let n = self.n();
        if n < 3 {
            return self.vertex_cone(self.support_vertex(rel.angle()));
        }
        let depth = |i: usize| Point::unit(self.edge_normal(i)).dot(rel - self.vertex(i));
        let i = (0..n).max_by(|&x, &y| depth(x).total_cmp(&depth(y))).unwrap_or(0);
        let (a, b) = (self.vertex(i), self.vertex(i + 1));
        let (_, c) = segment_closest(rel, a, b);
        let len = a.dist(b);
        if c.dist(a) <= 1e-12 * (1.0 + len) {
            self.vertex_cone(i)
        } else if c.dist(b) <= 1e-12 * (1.0 + len) {
            self.vertex_cone(i + 1)
        } else {
            AngularInterval::point(Angle::new(self.edge_normal(i)))
        }
    }

    /// Region swept when the body is translated along `v`.
    pub fn swept(&self, v: Point) -> RoundedPolygon {
        let mut pts = self.core.clone();
        pts.extend(self.core.iter().map(|p| *p + v));
        RoundedPolygon::new(convex_hull(&pts), self.radius)
    }

    /// Image under the linear part of `t`, kept CCW.
    pub fn transformed_linear(&self, t: &RigidTransform) -> RoundedPolygon {
        let mut core: Vec<Point> = self.core.iter().map(|p| t.apply_vector(*p)).collect();
        if t.flipped {
            core.reverse();
        }
        RoundedPolygon::new(core, self.radius)
    }

    pub fn perimeter(&self) -> f64 {
        let n = self.n();
        let edges: f64 = if n == 1 {
            0.0
        } else {
            (0..n).map(|i| self.vertex(i).dist(self.vertex(i + 1))).sum()
        };
        edges + TAU * self.radius
    }

    /// Boundary features, starting with the corner at vertex 0, then edge 0, and so on.
    pub fn features(&self, center: Point) -> Vec<BoundaryFeature> {
        let n = self.n();
        if n == 1 {
            return vec![BoundaryFeature {
                kind: FeatureKind::Arc {
                    center: center + self.core[0],
                    radius: self.radius,
                    from_angle: Angle::ZERO,
                    to_angle: Angle::ZERO,
                },
                normal_range: AngularInterval::full(),
            }];
        }
        let mut out = Vec::with_capacity(2 * n);
        for i in 0..n {
            let cone = self.vertex_cone(i);
            out.push(BoundaryFeature {
                kind: FeatureKind::Arc {
                    center: center + self.vertex(i),
                    radius: self.radius,
                    from_angle: cone.start,
                    to_angle: cone.end(),
                },
                normal_range: cone,
            });
            let nrm = self.edge_normal(i);
            let off = Point::unit(nrm) * self.radius;
            out.push(BoundaryFeature {
                kind: FeatureKind::Segment {
                    from: center + self.vertex(i) + off,
                    to: center + self.vertex(i + 1) + off,
                },
                normal_range: AngularInterval::point(Angle::new(nrm)),
            });
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FeatureKind {
    Segment {
        from: Point,
        to: Point,
    },
    /// CCW arc; a zero radius marks a polygon corner. A full circle has `from_angle == to_angle`
    /// and a full normal range.
    Arc {
        center: Point,
        radius: f64,
        from_angle: Angle,
        to_angle: Angle,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryFeature {
    pub kind: FeatureKind,
    pub normal_range: AngularInterval,
}

impl BoundaryFeature {
    pub fn length(&self) -> f64 {
        match self.kind {
            FeatureKind::Segment { from, to } => from.dist(to),
            FeatureKind::Arc { radius, .. } => radius * self.normal_range.width,
        }
    }

    /// Point at distance `s` along the feature (CCW).
    pub fn point_at(&self, s: f64) -> Point {
        match self.kind {
            FeatureKind::Segment { from, to } => {
                let l = from.dist(to);
                if l == 0.0 {
                    from
                } else {
                    from.lerp(to, (s / l).clamp(0.0, 1.0))
                }
            }
            FeatureKind::Arc {
                center,
                radius,
                from_angle,
                ..
            } => {
                if radius == 0.0 {
                    center
                } else {
                    center + Point::unit(from_angle.value() + s / radius) * radius
                }
            }
        }
    }

    /// Distance from `p` to the feature and the parameter of the closest point.
    pub fn project(&self, p: Point) -> (f64, f64) {
        match self.kind {
            FeatureKind::Segment { from, to } => {
                let (d, c) = segment_closest(p, from, to);
                (d, c.dist(from))
            }
            FeatureKind::Arc {
                center,
                radius,
                from_angle,
                ..
            } => {
                if radius == 0.0 {
                    return (p.dist(center), 0.0);
                }
                let w = self.normal_range.width;
                let a = (p - center).angle();
                let mut t = ccw_delta(from_angle.value(), a);
                if t > w {
                    // Snap to the nearer end.
                    t = if t - w < TAU - t { w } else { 0.0 };
                }
                let q = center + Point::unit(from_angle.value() + t) * radius;
                (p.dist(q), t * radius)
            }
        }
    }
}

/// A piece of a boundary walk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum WalkElement {
    Segment { from: Point, to: Point },
    /// Signed sweep: positive is CCW.
    Arc { center: Point, radius: f64, start: f64, sweep: f64 },
}

impl WalkElement {
    pub fn length(&self) -> f64 {
        match *self {
            WalkElement::Segment { from, to } => from.dist(to),
            WalkElement::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    pub fn start_point(&self) -> Point {
        match *self {
            WalkElement::Segment { from, .. } => from,
            WalkElement::Arc { center, radius, start, .. } => center + Point::unit(start) * radius,
        }
    }

    pub fn end_point(&self) -> Point {
        match *self {
            WalkElement::Segment { to, .. } => to,
            WalkElement::Arc {
                center,
                radius,
                start,
                sweep,
            } => center + Point::unit(start + sweep) * radius,
        }
    }

    pub fn point_at(&self, s: f64) -> Point {
        match *self {
            WalkElement::Segment { from, to } => {
                let l = from.dist(to);
                if l == 0.0 {
                    from
                } else {
                    from.lerp(to, (s / l).clamp(0.0, 1.0))
                }
            }
            WalkElement::Arc {
                center,
                radius,
                start,
                sweep,
            } => {
                if radius == 0.0 {
                    return center;
                }
                let t = (s / radius).clamp(0.0, sweep.abs());
                center + Point::unit(start + t * sweep.signum()) * radius
            }
        }
    }

    pub fn transformed(&self, t: &RigidTransform) -> WalkElement {
        match *self {
            WalkElement::Segment { from, to } => WalkElement::Segment {
                from: t.apply(from),
                to: t.apply(to),
            },
            WalkElement::Arc {
                center,
                radius,
                start,
                sweep,
            } => WalkElement::Arc {
                center: t.apply(center),
                radius,
                start: t.apply_angle(start),
                sweep: if t.flipped { -sweep } else { sweep },
            },
        }
    }

    pub fn reversed(&self) -> WalkElement {
        match *self {
            WalkElement::Segment { from, to } => WalkElement::Segment { from: to, to: from },
            WalkElement::Arc {
                center,
                radius,
                start,
                sweep,
            } => WalkElement::Arc {
                center,
                radius,
                start: start + sweep,
                sweep: -sweep,
            },
        }
    }
}

/// Direction of travel along a boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Turn {
    Ccw,
    Cw,
}

impl Turn {
    pub fn opposite(self) -> Turn {
        match self {
            Turn::Ccw => Turn::Cw,
            Turn::Cw => Turn::Ccw,
        }
    }
}

/// A contiguous part of a sum boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryWalk {
    pub elements: Vec<WalkElement>,
    pub length: f64,
}

/// The Minkowski sum A+B placed at `center`.
#[derive(Debug, Clone, PartialEq)]
pub struct SumBoundary {
    pub body: RoundedPolygon,
    pub center: Point,
    pub features: Vec<BoundaryFeature>,
    pub perimeter: f64,
    offsets: Vec<f64>,
}

impl SumBoundary {
    pub fn new(body: RoundedPolygon, center: Point) -> Self {
        let features = body.features(center);
        let mut offsets = Vec::with_capacity(features.len());
        let mut acc = 0.0;
        for f in &features {
            offsets.push(acc);
            acc += f.length();
        }
        SumBoundary {
            body,
            center,
            features,
            perimeter: acc,
            offsets,
        }
    }

    pub fn at(&self, center: Point) -> SumBoundary {
        SumBoundary::new(self.body.clone(), center)
    }

    /// Reach of the placed region, so it includes the offset of `center`.
    pub fn reach(&self, a: Angle) -> f64 {
        self.center.dot(a.unit()) + self.body.reach(a.value())
    }

    pub fn support_point(&self, a: Angle) -> Point {
        self.center + self.body.boundary_point(a.value())
    }

    pub fn signed_distance(&self, p: Point) -> f64 {
        self.body.signed_distance(p - self.center)
    }

    pub fn contains(&self, p: Point, closed: bool) -> bool {
        let d = self.signed_distance(p);
        if closed {
            d <= 0.0
        } else {
            d < 0.0
        }
    }

    /// Outward normal(s) at the boundary point nearest to `p`.
    pub fn orientation(&self, p: Point, tol: &TolerancePolicy) -> Result<AngularInterval, ShapeError> {
        self.body.orientation(p - self.center, tol)
    }

    pub fn feature_offset(&self, k: usize) -> f64 {
        self.offsets[k]
    }

    /// Arc-length coordinate of the boundary point nearest to `p`.
    pub fn locate(&self, p: Point, tol: &TolerancePolicy) -> Result<f64, ShapeError> {
        let mut best = (f64::INFINITY, 0.0);
        for (k, f) in self.features.iter().enumerate() {
            let (d, t) = f.project(p);
            if d < best.0 - 1e-15 {
                best = (d, self.offsets[k] + t);
            }
        }
        let slack = tol.eps_length.max(1e-9) * (1.0 + self.perimeter);
        if best.0 > slack.max(1e3 * tol.eps_length) {
            return Err(ShapeError::OffBoundary(p.x, p.y, best.0));
        }
        Ok(best.1.rem_euclid(self.perimeter.max(f64::MIN_POSITIVE)))
    }

    pub fn point_at(&self, s: f64) -> Point {
        let s = s.rem_euclid(self.perimeter.max(f64::MIN_POSITIVE));
        let k = self.feature_at(s);
        self.features[k].point_at(s - self.offsets[k])
    }

    fn feature_at(&self, s: f64) -> usize {
        match self.offsets.binary_search_by(|o| o.total_cmp(&s)) {
            Ok(k) => k,
            Err(k) => k.saturating_sub(1),
        }
        .min(self.features.len() - 1)
    }

    /// The part of the boundary between two arc-length coordinates.
    pub fn walk_between(&self, from_s: f64, to_s: f64, dir: Turn) -> BoundaryWalk {
        let p = self.perimeter;
        match dir {
            Turn::Ccw => {
                let len = {
                    let d = (to_s - from_s).rem_euclid(p);
                    if d >= p {
                        0.0
                    } else {
                        d
                    }
                };
                BoundaryWalk {
                    elements: self.ccw_elements(from_s.rem_euclid(p), len),
                    length: len,
                }
            }
            Turn::Cw => {
                let w = self.walk_between(to_s, from_s, Turn::Ccw);
                BoundaryWalk {
                    elements: w.elements.iter().rev().map(|e| e.reversed()).collect(),
                    length: w.length,
                }
            }
        }
    }

    fn ccw_elements(&self, start: f64, len: f64) -> Vec<WalkElement> {
        let mut out = Vec::new();
        if len <= 0.0 {
            return out;
        }
        let nf = self.features.len();
        let mut k = self.feature_at(start);
        let mut local = start - self.offsets[k];
        let mut left = len;
        let mut guard = 0;
        while left > 1e-15 && guard < 2 * nf + 2 {
            guard += 1;
            let f = &self.features[k];
            let avail = (f.length() - local).max(0.0);
            let take = avail.min(left);
            if take > 0.0 {
                out.push(match f.kind {
                    FeatureKind::Segment { .. } => WalkElement::Segment {
                        from: f.point_at(local),
                        to: f.point_at(local + take),
                    },
                    FeatureKind::Arc {
                        center,
                        radius,
                        from_angle,
                        ..
                    } => WalkElement::Arc {
                        center,
                        radius,
                        start: from_angle.value() + local / radius,
                        sweep: take / radius,
                    },
                });
            }
            left -= take;
            k = (k + 1) % nf;
            local = 0.0;
        }
        out
    }

    /// Boundary portion between two points on the boundary.
    pub fn boundary_walk(&self, from: Point, to: Point, dir: Turn, tol: &TolerancePolicy) -> Result<BoundaryWalk, ShapeError> {
        let a = self.locate(from, tol)?;
        let b = self.locate(to, tol)?;
        Ok(self.walk_between(a, b, dir))
    }
}

pub fn reach(shape: &CcsShape, a: Angle) -> f64 {
    shape.reach(a)
}

/// Minkowski sum A+B placed at `center`.
pub fn minkowski_sum(a: &CcsShape, b: &CcsShape, center: Point) -> SumBoundary {
    SumBoundary::new(sum_body(a, b, &TolerancePolicy::default()), center)
}

/// The rounded polygon A+B centred at the origin.
pub fn sum_body(a: &CcsShape, b: &CcsShape, tol: &TolerancePolicy) -> RoundedPolygon {
    match (a, b) {
        (CcsShape::Disc { radius: r1 }, CcsShape::Disc { radius: r2 }) => {
            RoundedPolygon::new(vec![Point::ORIGIN], r1 + r2)
        }
        (CcsShape::Polygon { vertices }, CcsShape::Disc { radius })
        | (CcsShape::Disc { radius }, CcsShape::Polygon { vertices }) => {
            RoundedPolygon::new(vertices.clone(), *radius)
        }
        (CcsShape::Polygon { vertices: p }, CcsShape::Polygon { vertices: q }) => {
            let mut pts = Vec::with_capacity(p.len() * q.len());
            for u in p {
                for v in q {
                    pts.push(*u + *v);
                }
            }
            RoundedPolygon::new(clean_polygon(convex_hull(&pts), tol.eps_length), 0.0)
        }
    }
}

/// Fuses vertices closer than `eps` and removes vertices whose turn is below `eps`.
fn clean_polygon(mut poly: Vec<Point>, eps: f64) -> Vec<Point> {
    loop {
        let n = poly.len();
        if n <= 3 {
            return poly;
        }
        let mut removed = false;
        for i in 0..n {
            let prev = poly[(i + n - 1) % n];
            let cur = poly[i];
            let next = poly[(i + 1) % n];
            let chord = next - prev;
            let dev = if chord.norm() > 0.0 {
                chord.cross(cur - prev).abs() / chord.norm()
            } else {
                0.0
            };
            if cur.dist(prev) <= eps || dev <= eps {
                poly.remove(i);
                removed = true;
                break;
            }
        }
        if !removed {
            return poly;
        }
    }
}

/// Signed distance from `pos_a` to the boundary of (A+B) placed at `pos_b`.
pub fn separation(a: &CcsShape, pos_a: Point, b: &CcsShape, pos_b: Point) -> f64 {
    sum_body(a, b, &TolerancePolicy::default()).signed_distance(pos_a - pos_b)
}

pub fn orientation(
    a: &CcsShape,
    pos_a: Point,
    b: &CcsShape,
    pos_b: Point,
    tol: &TolerancePolicy,
) -> Result<AngularInterval, ShapeError> {
    minkowski_sum(a, b, pos_b).orientation(pos_a, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn square(h: f64) -> CcsShape {
        CcsShape::rect(h, h)
    }

    #[test]
    fn reach_examples() {
        assert_eq!(CcsShape::disc(2.0).reach(Angle::new(1.3)), 2.0);
        assert!((square(1.0).reach(Angle::new(0.0)) - 1.0).abs() < 1e-15);
        assert!((square(1.0).reach(Angle::new(FRAC_PI_4)) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn support_examples() {
        let tol = TolerancePolicy::default();
        assert_eq!(CcsShape::disc(1.0).support_point(Angle::new(0.0), &tol), Support::Point(Point::new(1.0, 0.0)));
        assert_eq!(square(1.0).support_point(Angle::new(FRAC_PI_4), &tol), Support::Point(Point::new(1.0, 1.0)));
        assert_eq!(
            square(1.0).support_point(Angle::new(0.0), &tol),
            Support::Edge(Point::new(1.0, -1.0), Point::new(1.0, 1.0))
        );
    }

    #[test]
    fn sums() {
        let discs = minkowski_sum(&CcsShape::disc(1.0), &CcsShape::disc(2.0), Point::ORIGIN);
        assert!((discs.perimeter - 6.0 * PI).abs() < 1e-12);
        let squares = minkowski_sum(&square(1.0), &square(1.0), Point::ORIGIN);
        assert_eq!(squares.body.core.len(), 4);
        assert!((squares.perimeter - 16.0).abs() < 1e-12);
        let rounded = minkowski_sum(&square(1.0), &CcsShape::disc(0.5), Point::ORIGIN);
        assert!((rounded.perimeter - (8.0 + PI)).abs() < 1e-12);
        for k in 0..360 {
            let a = Angle::new(k as f64 * PI / 180.0);
            assert!((rounded.reach(a) - square(1.0).reach(a) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn containment() {
        let circle = minkowski_sum(&CcsShape::disc(1.0), &CcsShape::disc(2.0), Point::ORIGIN);
        assert!(circle.contains(Point::ORIGIN, false));
        assert!(circle.contains(Point::new(3.0, 0.0), true));
        assert!(!circle.contains(Point::new(3.0, 0.0), false));
        let rounded = minkowski_sum(&square(1.0), &CcsShape::disc(0.5), Point::ORIGIN);
        assert!(rounded.contains(Point::new(1.3, 1.3), false));
        assert!(!rounded.contains(Point::new(1.4, 1.4), false));
    }

    #[test]
    fn separation_and_orientation() {
        let d = CcsShape::disc(1.0);
        let tol = TolerancePolicy::default();
        assert!((separation(&d, Point::new(3.0, 0.0), &d, Point::ORIGIN) - 1.0).abs() < 1e-15);
        assert_eq!(separation(&d, Point::new(2.0, 0.0), &d, Point::ORIGIN), 0.0);
        assert!((separation(&d, Point::new(1.0, 0.0), &d, Point::ORIGIN) + 1.0).abs() < 1e-15);
        let o = orientation(&d, Point::new(2.0, 2.0), &d, Point::ORIGIN, &tol).unwrap();
        assert!((o.start.value() - FRAC_PI_4).abs() < 1e-15 && o.width == 0.0);
        let o = orientation(&square(1.0), Point::new(5.0, 0.3), &square(1.0), Point::ORIGIN, &tol).unwrap();
        assert!(o.start.value().abs() < 1e-15 && o.width == 0.0);
        let o = orientation(&d, Point::new(2.0, 0.0), &d, Point::ORIGIN, &tol).unwrap();
        assert!(o.start.value().abs() < 1e-15 && o.width == 0.0);
        assert!(orientation(&d, Point::new(1.0, 0.0), &d, Point::ORIGIN, &tol).is_err());
    }

    #[test]
    fn corner_contact_returns_the_normal_cone() {
        let tol = TolerancePolicy::default();
        let o = orientation(&square(1.0), Point::new(2.0, 2.0), &square(1.0), Point::ORIGIN, &tol).unwrap();
        assert!(o.start.value().abs() < 1e-12 && (o.width - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn walks() {
        let tol = TolerancePolicy::default();
        let circle = minkowski_sum(&CcsShape::disc(0.5), &CcsShape::disc(0.5), Point::ORIGIN);
        let (p, q) = (Point::new(1.0, 0.0), Point::new(0.0, 1.0));
        let ccw = circle.boundary_walk(p, q, Turn::Ccw, &tol).unwrap();
        assert!((ccw.length - FRAC_PI_2).abs() < 1e-12);
        let cw = circle.boundary_walk(p, q, Turn::Cw, &tol).unwrap();
        assert!((cw.length - 3.0 * FRAC_PI_2).abs() < 1e-12);
        let rounded = minkowski_sum(&square(1.0), &CcsShape::disc(0.5), Point::ORIGIN);
        let w = rounded
            .boundary_walk(Point::new(1.5, 0.0), Point::new(0.0, 1.5), Turn::Ccw, &tol)
            .unwrap();
        assert!((w.length - (2.0 + FRAC_PI_4)).abs() < 1e-12);
        let sampled: f64 = {
            let pts: Vec<Point> = (0..=2000)
                .map(|i| {
                    let s0 = rounded.locate(Point::new(1.5, 0.0), &tol).unwrap();
                    rounded.point_at(s0 + w.length * i as f64 / 2000.0)
                })
                .collect();
            pts.windows(2).map(|p| p[0].dist(p[1])).sum()
        };
        assert!((sampled - w.length).abs() < 1e-5);
    }

    #[test]
    fn invalid_shapes() {
        let tol = TolerancePolicy::default();
        assert!(CcsShape::disc(0.0).validate(&tol).is_err());
        let skew = CcsShape::polygon(vec![
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(-1.0, 0.0),
            Point::new(0.2, -1.3),
        ]);
        assert!(matches!(skew.validate(&tol), Err(ShapeError::NotSymmetric(..))));
        let cw = CcsShape::polygon(vec![
            Point::new(1.0, 1.0),
            Point::new(1.0, -1.0),
            Point::new(-1.0, -1.0),
            Point::new(-1.0, 1.0),
        ]);
        assert!(cw.validate(&tol).is_err());
    }
}
