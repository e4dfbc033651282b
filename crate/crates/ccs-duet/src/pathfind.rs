//! Tangents, corridors and shortest paths around one convex obstacle.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{ccw_delta, wrap_pi, Point, RigidTransform, TolerancePolicy};
use crate::shape::{BoundaryWalk, FeatureKind, ShapeError, SumBoundary, Turn, WalkElement};

#[derive(Debug, Error, PartialEq)]
pub enum PathError {
    #[error("point ({0}, {1}) lies strictly inside the obstacle (depth {2:.3e})")]
    Inside(f64, f64, f64),
    #[error(transparent)]
    Shape(#[from] ShapeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TangentSide {
    Upper,
    Lower,
}

/// A support line through `through` touching the boundary at `touch`.
///
/// `polyline` is `[through, touch]` for ordinary tangents; composite tangents carry the bent
/// path explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentLine {
    pub through: Point,
    pub touch: Point,
    pub side: TangentSide,
    pub polyline: Vec<Point>,
    /// Arc-length coordinate of `touch` on the boundary it supports.
    pub touch_param: f64,
}

impl TangentLine {
    pub fn direction(&self) -> Point {
        (self.touch - self.through).normalized()
    }
}

/// Side the traveller keeps the obstacle on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Ccw,
    Cw,
    Either,
}

impl From<Turn> for Side {
    fn from(t: Turn) -> Side {
        match t {
            Turn::Ccw => Side::Ccw,
            Turn::Cw => Side::Cw,
        }
    }
}

/// Tangent touching the boundary such that a traveller leaving `p` along it and then following
/// the boundary goes counter-clockwise. Requires `p` outside (or on) the boundary.
fn departure(p: Point, s: &SumBoundary) -> (Point, f64) {
    touch(p, s, true)
}

/// Tangent along which a counter-clockwise boundary walk can leave towards `q`.
fn arrival(q: Point, s: &SumBoundary) -> (Point, f64) {
    touch(q, s, false)
}

fn touch(p: Point, s: &SumBoundary, dep: bool) -> (Point, f64) {
    let body = &s.body;
    let r = body.radius;
    let reference = (s.center - p).angle();
    // (relative angle, distance, vertex index, absolute direction)
    let mut best: Option<(f64, f64, usize, f64)> = None;
    for k in 0..body.n() {
        let w = s.center + body.vertex(k);
        let rho = w.dist(p);
        if rho <= 1e-14 * (1.0 + w.norm()) && r == 0.0 {
            continue;
        }
        let phi = (w - p).angle();
        let alpha = if r == 0.0 { 0.0 } else { (r / rho).min(1.0).asin() };
        let psi = if dep { phi - alpha } else { phi + alpha };
        let rel = wrap_pi(psi - reference);
        let better = match best {
            None => true,
            Some((brel, brho, _, _)) => {
                let d = if dep { brel - rel } else { rel - brel };
                d > 1e-13 || (d.abs() <= 1e-13 && rho < brho)
            }
        };
        if better {
            best = Some((rel, rho, k, psi));
        }
    }
    let (_, _, k, psi) = best.expect("boundary with at least one vertex");
    let normal = if dep {
        psi - std::f64::consts::FRAC_PI_2
    } else {
        psi + std::f64::consts::FRAC_PI_2
    };
    let point = s.center + body.vertex(k) + Point::unit(normal) * r;
    (point, vertex_param(s, k, normal))
}

/// Arc-length coordinate of the boundary point on the corner/arc of vertex `k` with outward
/// normal `normal`.
pub fn vertex_param(s: &SumBoundary, k: usize, normal: f64) -> f64 {
    let n = s.body.n();
    if n == 1 {
        return s.body.radius * ccw_delta(0.0, normal);
    }
    let idx = 2 * (k % n);
    let f = &s.features[idx];
    let t = match f.kind {
        FeatureKind::Arc { from_angle, .. } => {
            let d = ccw_delta(from_angle.value(), normal);
            let w = f.normal_range.width;
            if d <= w {
                d
            } else if d - w < std::f64::consts::TAU - d {
                w
            } else {
                0.0
            }
        }
        FeatureKind::Segment { .. } => 0.0,
    };
    s.feature_offset(idx) + t * s.body.radius
}

fn check_outside(p: Point, s: &SumBoundary, tol: &TolerancePolicy) -> Result<(), PathError> {
    let d = s.signed_distance(p);
    if d < -tol.eps_length {
        Err(PathError::Inside(p.x, p.y, -d))
    } else {
        Ok(())
    }
}

/// The two support lines through `p`. The upper one touches to the right of the ray from `p`
/// towards the center; it is the departure line for a counter-clockwise walk.
pub fn tangents_from_point(p: Point, s: &SumBoundary, tol: &TolerancePolicy) -> Result<(TangentLine, TangentLine), PathError> {
    check_outside(p, s, tol)?;
    let (tu, su) = departure(p, s);
    let (tl, sl) = arrival(p, s);
    Ok((
        TangentLine {
            through: p,
            touch: tu,
            side: TangentSide::Upper,
            polyline: vec![p, tu],
            touch_param: su,
        },
        TangentLine {
            through: p,
            touch: tl,
            side: TangentSide::Lower,
            polyline: vec![p, tl],
            touch_param: sl,
        },
    ))
}

/// Upper tangent through a point that lies inside `secondary` but outside `primary`: it follows
/// the upper tangent to `primary` until it leaves `secondary`, then continues along the boundary
/// direction of `secondary` at the exit point.
pub fn composite_upper_tangent(
    p: Point,
    primary: &SumBoundary,
    secondary: &SumBoundary,
    tol: &TolerancePolicy,
) -> Result<TangentLine, PathError> {
    check_outside(p, primary, tol)?;
    let gamma = departure_curve(p, primary);
    let exit = first_exit(&gamma, secondary).unwrap_or(gamma[0].end_point());
    let s = secondary.locate(exit, &TolerancePolicy {
        eps_length: 1e-6,
        ..*tol
    })?;
    let ahead = secondary.point_at(s + 1e-3 * (1.0 + secondary.perimeter));
    let dir = (ahead - exit).normalized();
    Ok(TangentLine {
        through: p,
        touch: exit,
        side: TangentSide::Upper,
        polyline: vec![p, exit, exit + dir],
        touch_param: s,
    })
}

fn first_exit(curve: &[WalkElement], s: &SumBoundary) -> Option<Point> {
    // Sample-and-bisect along the curve for the first point where the signed distance turns
    // non-negative.
    for e in curve {
        let len = e.length();
        if len == 0.0 {
            continue;
        }
        let steps = 256;
        let mut prev = 0.0;
        for i in 1..=steps {
            let t = len * i as f64 / steps as f64;
            if s.signed_distance(e.point_at(t)) >= 0.0 {
                let (mut lo, mut hi) = (prev, t);
                for _ in 0..80 {
                    let m = 0.5 * (lo + hi);
                    if s.signed_distance(e.point_at(m)) >= 0.0 {
                        hi = m;
                    } else {
                        lo = m;
                    }
                }
                return Some(e.point_at(hi));
            }
            prev = t;
        }
    }
    None
}

/// Departure tangent from `p` followed by one full counter-clockwise lap of the boundary.
pub fn departure_curve(p: Point, s: &SumBoundary) -> Vec<WalkElement> {
    let (t, st) = departure(p, s);
    let mut out = vec![WalkElement::Segment { from: p, to: t }];
    out.extend(s.walk_between(st, st + s.perimeter * (1.0 - 1e-12), Turn::Ccw).elements);
    out
}

/// Arrival tangent into `q`, traced backwards from `q`, followed by one full clockwise lap.
pub fn arrival_curve(q: Point, s: &SumBoundary) -> Vec<WalkElement> {
    let (u, su) = arrival(q, s);
    let mut out = vec![WalkElement::Segment { from: q, to: u }];
    let w = s.walk_between(su, su + s.perimeter * (1.0 - 1e-12), Turn::Ccw);
    // Reversing an almost-full CCW lap from `u` gives a clockwise lap that starts at `u`.
    out.extend(w.elements.iter().rev().map(|e| e.reversed()));
    out
}

/// Every crossing between two chains of segments and arcs (overlapping collinear segments
/// contribute their overlap endpoints).
pub fn chain_intersections(a: &[WalkElement], b: &[WalkElement]) -> Vec<Point> {
    let mut out = Vec::new();
    for x in a {
        for y in b {
            element_intersections(x, y, &mut out);
        }
    }
    out
}

fn element_intersections(x: &WalkElement, y: &WalkElement, out: &mut Vec<Point>) {
    match (*x, *y) {
        (WalkElement::Segment { from: a, to: b }, WalkElement::Segment { from: c, to: d }) => seg_seg(a, b, c, d, out),
        (WalkElement::Segment { from, to }, arc @ WalkElement::Arc { .. })
        | (arc @ WalkElement::Arc { .. }, WalkElement::Segment { from, to }) => seg_arc(from, to, &arc, out),
        (a1 @ WalkElement::Arc { .. }, a2 @ WalkElement::Arc { .. }) => arc_arc(&a1, &a2, out),
    }
}

const PARAM_SLACK: f64 = 1e-12;

fn seg_seg(a: Point, b: Point, c: Point, d: Point, out: &mut Vec<Point>) {
    let r = b - a;
    let s = d - c;
    let den = r.cross(s);
    let scale = r.norm() * s.norm();
    if scale == 0.0 {
        return;
    }
    if den.abs() <= 1e-14 * scale {
        // Parallel; collinear overlaps yield their endpoints.
        if (c - a).cross(r).abs() > 1e-12 * r.norm() * (1.0 + (c - a).norm()) {
            return;
        }
        let rr = r.norm_sq();
        let t0 = (c - a).dot(r) / rr;
        let t1 = (d - a).dot(r) / rr;
        let (lo, hi) = (t0.min(t1).max(0.0), t0.max(t1).min(1.0));
        if hi >= lo {
            out.push(a + r * lo);
            out.push(a + r * hi);
        }
        return;
    }
    let t = (c - a).cross(s) / den;
    let u = (c - a).cross(r) / den;
    if (-PARAM_SLACK..=1.0 + PARAM_SLACK).contains(&t) && (-PARAM_SLACK..=1.0 + PARAM_SLACK).contains(&u) {
        out.push(a + r * t.clamp(0.0, 1.0));
    }
}

fn on_arc(arc: &WalkElement, p: Point) -> bool {
    if let WalkElement::Arc { center, start, sweep, .. } = *arc {
        let a = (p - center).angle();
        let d = if sweep >= 0.0 {
            ccw_delta(start, a)
        } else {
            ccw_delta(a, start)
        };
        let w = sweep.abs();
        d <= w + 1e-12 || d >= std::f64::consts::TAU - 1e-12
    } else {
        false
    }
}

fn seg_arc(a: Point, b: Point, arc: &WalkElement, out: &mut Vec<Point>) {
    let WalkElement::Arc { center, radius, .. } = *arc else {
        return;
    };
    if radius == 0.0 {
        return;
    }
    let d = b - a;
    let f = a - center;
    let qa = d.norm_sq();
    if qa == 0.0 {
        return;
    }
    let qb = 2.0 * f.dot(d);
    let qc = f.norm_sq() - radius * radius;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return;
    }
    let sq = disc.sqrt();
    for t in [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)] {
        if (-PARAM_SLACK..=1.0 + PARAM_SLACK).contains(&t) {
            let p = a + d * t.clamp(0.0, 1.0);
            if on_arc(arc, p) {
                out.push(p);
            }
        }
    }
}

fn arc_arc(x: &WalkElement, y: &WalkElement, out: &mut Vec<Point>) {
    let (WalkElement::Arc { center: c1, radius: r1, .. }, WalkElement::Arc { center: c2, radius: r2, .. }) = (*x, *y) else {
        return;
    };
    if r1 == 0.0 || r2 == 0.0 {
        return;
    }
    let d = c1.dist(c2);
    if d < 1e-14 || d > r1 + r2 || d < (r1 - r2).abs() {
        return;
    }
    let a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let h = (r1 * r1 - a * a).max(0.0).sqrt();
    let e = (c2 - c1) / d;
    let m = c1 + e * a;
    for sgn in [-1.0, 1.0] {
        let p = m + e.perp() * (sgn * h);
        if on_arc(x, p) && on_arc(y, p) {
            out.push(p);
        }
    }
}

/// `p ∈ corr(q0, q1)`: the open region swept by the sum when moved from `q0` to `q1`.
pub fn in_corridor(p: Point, q0: Point, q1: Point, template: &SumBoundary, tol: &TolerancePolicy) -> bool {
    corridor_depth(p, q0, q1, template) < -tol.eps_length
}

/// Signed distance from `p` to the corridor boundary.
pub fn corridor_depth(p: Point, q0: Point, q1: Point, template: &SumBoundary) -> f64 {
    template.body.swept(q1 - q0).signed_distance(p - q0)
}

/// One piece of a point path: a straight segment or a walk along a sum boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PathPiece {
    Segment {
        from: Point,
        to: Point,
    },
    Walk {
        /// Placement of the boundary being followed.
        center: Point,
        turn: Turn,
        length: f64,
        elements: Vec<WalkElement>,
    },
}

impl PathPiece {
    pub fn length(&self) -> f64 {
        match self {
            PathPiece::Segment { from, to } => from.dist(*to),
            PathPiece::Walk { elements, .. } => elements.iter().map(|e| e.length()).sum(),
        }
    }

    pub fn start(&self) -> Point {
        match self {
            PathPiece::Segment { from, .. } => *from,
            PathPiece::Walk { elements, center, .. } => elements.first().map(|e| e.start_point()).unwrap_or(*center),
        }
    }

    pub fn end(&self) -> Point {
        match self {
            PathPiece::Segment { to, .. } => *to,
            PathPiece::Walk { elements, center, .. } => elements.last().map(|e| e.end_point()).unwrap_or(*center),
        }
    }

    pub fn point_at(&self, s: f64) -> Point {
        match self {
            PathPiece::Segment { from, to } => WalkElement::Segment { from: *from, to: *to }.point_at(s),
            PathPiece::Walk { elements, .. } => {
                let mut left = s;
                for e in elements {
                    let l = e.length();
                    if left <= l {
                        return e.point_at(left);
                    }
                    left -= l;
                }
                self.end()
            }
        }
    }

    pub fn elements(&self) -> Vec<WalkElement> {
        match self {
            PathPiece::Segment { from, to } => vec![WalkElement::Segment { from: *from, to: *to }],
            PathPiece::Walk { elements, .. } => elements.clone(),
        }
    }

    pub fn transformed(&self, t: &RigidTransform) -> PathPiece {
        match self {
            PathPiece::Segment { from, to } => PathPiece::Segment {
                from: t.apply(*from),
                to: t.apply(*to),
            },
            PathPiece::Walk {
                center,
                turn,
                length,
                elements,
            } => PathPiece::Walk {
                center: t.apply(*center),
                turn: if t.flipped { turn.opposite() } else { *turn },
                length: *length,
                elements: elements.iter().map(|e| e.transformed(t)).collect(),
            },
        }
    }

    pub fn reversed(&self) -> PathPiece {
        match self {
            PathPiece::Segment { from, to } => PathPiece::Segment { from: *to, to: *from },
            PathPiece::Walk {
                center,
                turn,
                length,
                elements,
            } => PathPiece::Walk {
                center: *center,
                turn: turn.opposite(),
                length: *length,
                elements: elements.iter().rev().map(|e| e.reversed()).collect(),
            },
        }
    }
}

/// A continuous path of segments and boundary walks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointPath {
    pub start: Point,
    pub pieces: Vec<PathPiece>,
    pub length: f64,
}

impl PointPath {
    pub fn stationary(p: Point) -> Self {
        PointPath {
            start: p,
            pieces: Vec::new(),
            length: 0.0,
        }
    }

    pub fn from_pieces(start: Point, pieces: Vec<PathPiece>) -> Self {
        let pieces: Vec<PathPiece> = pieces.into_iter().filter(|p| p.length() > 0.0).collect();
        let length = pieces.iter().map(|p| p.length()).sum();
        PointPath { start, pieces, length }
    }

    pub fn end(&self) -> Point {
        self.pieces.last().map(|p| p.end()).unwrap_or(self.start)
    }

    pub fn point_at(&self, s: f64) -> Point {
        let mut left = s.max(0.0);
        for p in &self.pieces {
            let l = p.length();
            if left <= l {
                return p.point_at(left);
            }
            left -= l;
        }
        self.end()
    }

    /// Concatenation; `other` must start where `self` ends.
    pub fn then(&self, other: &PointPath) -> PointPath {
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        PointPath::from_pieces(self.start, pieces)
    }

    pub fn transformed(&self, t: &RigidTransform) -> PointPath {
        PointPath {
            start: t.apply(self.start),
            pieces: self.pieces.iter().map(|p| p.transformed(t)).collect(),
            length: self.length,
        }
    }

    pub fn reversed(&self) -> PointPath {
        PointPath {
            start: self.end(),
            pieces: self.pieces.iter().rev().map(|p| p.reversed()).collect(),
            length: self.length,
        }
    }

    pub fn elements(&self) -> Vec<WalkElement> {
        self.pieces.iter().flat_map(|p| p.elements()).collect()
    }

    /// Number of pieces after merging consecutive collinear segments.
    pub fn piece_count(&self) -> usize {
        let mut count = 0;
        let mut last_dir: Option<Point> = None;
        for p in &self.pieces {
            match p {
                PathPiece::Segment { from, to } => {
                    let d = (*to - *from).normalized();
                    match last_dir {
                        Some(ld) if ld.cross(d).abs() < 1e-9 && ld.dot(d) > 0.0 => {}
                        _ => count += 1,
                    }
                    last_dir = Some(d);
                }
                PathPiece::Walk { .. } => {
                    count += 1;
                    last_dir = None;
                }
            }
        }
        count
    }
}

/// Shortest path from `from` to `to` that avoids the open region of `s`, passing on `side`.
pub fn shortest_path_around(from: Point, to: Point, s: &SumBoundary, side: Side, tol: &TolerancePolicy) -> Result<PointPath, PathError> {
    check_outside(from, s, tol)?;
    check_outside(to, s, tol)?;
    match side {
        Side::Ccw => Ok(ccw_path(from, to, s, tol)),
        Side::Cw => {
            let f = RigidTransform::flip();
            let sf = SumBoundary::new(s.body.transformed_linear(&f), s.center.flip());
            Ok(ccw_path(from.flip(), to.flip(), &sf, tol).transformed(&f))
        }
        Side::Either => {
            let a = shortest_path_around(from, to, s, Side::Ccw, tol)?;
            let b = shortest_path_around(from, to, s, Side::Cw, tol)?;
            Ok(if b.length < a.length - tol.eps_length { b } else { a })
        }
    }
}

fn ccw_path(from: Point, to: Point, s: &SumBoundary, tol: &TolerancePolicy) -> PointPath {
    if s.body.segment_clearance(from - s.center, to - s.center) >= -tol.eps_length {
        return PointPath::from_pieces(from, vec![PathPiece::Segment { from, to }]);
    }
    let (t, st) = departure(from, s);
    let (u, su) = arrival(to, s);
    let mut walk: BoundaryWalk = s.walk_between(st, su, Turn::Ccw);
    if walk.length > s.perimeter * (1.0 - 1e-9) {
        // The touch points coincide up to rounding; no lap is ever needed.
        walk = BoundaryWalk {
            elements: Vec::new(),
            length: 0.0,
        };
    }
    PointPath::from_pieces(
        from,
        vec![
            PathPiece::Segment { from, to: t },
            PathPiece::Walk {
                center: s.center,
                turn: Turn::Ccw,
                length: walk.length,
                elements: walk.elements,
            },
            PathPiece::Segment { from: u, to },
        ],
    )
}

/// Length of the counter-clockwise shortest path, without building it.
pub fn ccw_path_length(from: Point, to: Point, s: &SumBoundary, tol: &TolerancePolicy) -> f64 {
    if s.body.segment_clearance(from - s.center, to - s.center) >= -tol.eps_length {
        return from.dist(to);
    }
    let (t, st) = departure(from, s);
    let (u, su) = arrival(to, s);
    let mut walk = (su - st).rem_euclid(s.perimeter);
    if walk > s.perimeter * (1.0 - 1e-9) {
        walk = 0.0;
    }
    from.dist(t) + walk + u.dist(to)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shape::CcsShape;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn circle(r: f64) -> SumBoundary {
        SumBoundary::new(CcsShape::disc(r).rounded(), Point::ORIGIN)
    }

    fn close(p: Point, q: Point) -> bool {
        p.dist(q) < 1e-9
    }

    #[test]
    fn tangents_to_circles() {
        let tol = TolerancePolicy::default();
        let (up, lo) = tangents_from_point(Point::new(2.0, 0.0), &circle(1.0), &tol).unwrap();
        let h = 3f64.sqrt() / 2.0;
        assert!(close(up.touch, Point::new(0.5, h)), "{:?}", up.touch);
        assert!(close(lo.touch, Point::new(0.5, -h)), "{:?}", lo.touch);

        let (up, lo) = tangents_from_point(Point::new(0.0, 3.0), &circle(1.0), &tol).unwrap();
        let x = 2.0 * 2f64.sqrt() / 3.0;
        assert!(close(up.touch, Point::new(-x, 1.0 / 3.0)), "{:?}", up.touch);
        assert!(close(lo.touch, Point::new(x, 1.0 / 3.0)), "{:?}", lo.touch);
    }

    #[test]
    fn tangents_to_a_square() {
        let tol = TolerancePolicy::default();
        let s = SumBoundary::new(CcsShape::rect(2.0, 2.0).rounded(), Point::ORIGIN);
        let (up, lo) = tangents_from_point(Point::new(3.0, 0.0), &s, &tol).unwrap();
        assert!(close(up.touch, Point::new(2.0, 2.0)), "{:?}", up.touch);
        assert!(close(lo.touch, Point::new(2.0, -2.0)), "{:?}", lo.touch);
    }

    #[test]
    fn tangents_from_inside_fail() {
        let tol = TolerancePolicy::default();
        assert!(matches!(
            tangents_from_point(Point::new(0.2, 0.1), &circle(1.0), &tol),
            Err(PathError::Inside(..))
        ));
    }

    #[test]
    fn corridor_membership() {
        let tol = TolerancePolicy::default();
        let s = circle(1.0);
        let (q0, q1) = (Point::ORIGIN, Point::new(10.0, 0.0));
        assert!(in_corridor(Point::new(5.0, 0.5), q0, q1, &s, &tol));
        assert!(in_corridor(Point::new(10.5, 0.0), q0, q1, &s, &tol));
        assert!(!in_corridor(Point::new(5.0, 2.0), q0, q1, &s, &tol));
        assert!(!in_corridor(Point::new(-2.0, 0.0), q0, q1, &s, &tol));
        // The boundary itself is not inside.
        assert!(!in_corridor(Point::new(5.0, 1.0), q0, q1, &s, &tol));
    }

    #[test]
    fn shortest_paths() {
        let tol = TolerancePolicy::default();
        let s = circle(1.0);
        let (a, b) = (Point::new(-2.0, 0.0), Point::new(2.0, 0.0));
        let want = 2.0 * 3f64.sqrt() + PI / 3.0;
        for side in [Side::Ccw, Side::Cw, Side::Either] {
            let p = shortest_path_around(a, b, &s, side, &tol).unwrap();
            assert!((p.length - want).abs() < 1e-9, "{side:?} {}", p.length);
            assert!(close(p.end(), b));
        }
        assert!((ccw_path_length(a, b, &s, &tol) - want).abs() < 1e-9);

        let p = shortest_path_around(Point::new(-5.0, 3.0), Point::new(5.0, 3.0), &s, Side::Ccw, &tol).unwrap();
        assert!((p.length - 10.0).abs() < 1e-12);
        assert_eq!(p.piece_count(), 1);

        let p = shortest_path_around(Point::new(1.0, 0.0), Point::new(0.0, 1.0), &s, Side::Ccw, &tol).unwrap();
        assert!((p.length - FRAC_PI_2).abs() < 1e-9, "{}", p.length);
        let mid = p.point_at(0.5 * p.length);
        assert!((mid.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn paths_reverse_and_transform() {
        let tol = TolerancePolicy::default();
        let s = SumBoundary::new(CcsShape::rect(1.0, 0.5).rounded(), Point::new(1.0, 1.0));
        let p = shortest_path_around(Point::new(-2.0, 1.2), Point::new(4.0, 0.7), &s, Side::Cw, &tol).unwrap();
        let r = p.reversed();
        assert!((r.length - p.length).abs() < 1e-12);
        assert!(close(r.end(), p.start));
        let t = RigidTransform {
            rotation: 0.7,
            translation: Point::new(3.0, -1.0),
            flipped: false,
        };
        let q = p.transformed(&t);
        assert!((q.length - p.length).abs() < 1e-12);
        assert!(close(q.point_at(0.3 * q.length), t.apply(p.point_at(0.3 * p.length))));
    }
}
