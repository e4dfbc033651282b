//! Planar primitives shared by the rest of the crate.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeomError {
    #[error("non-finite angle {0}")]
    NonFiniteAngle(f64),
    #[error("non-finite coordinate ({0}, {1})")]
    NonFinitePoint(f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Point {
    fn from(v: [f64; 2]) -> Self {
        Point::new(v[0], v[1])
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Unit vector at angle `a`.
    pub fn unit(a: f64) -> Self {
        let (s, c) = a.sin_cos();
        Point::new(c, s)
    }

    pub fn checked(x: f64, y: f64) -> Result<Self, GeomError> {
        if x.is_finite() && y.is_finite() {
            Ok(Point::new(x, y))
        } else {
            Err(GeomError::NonFinitePoint(x, y))
        }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Polar angle in (-π, π].
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    /// Counter-clockwise quarter turn.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Point {
        let n = self.norm();
        if n == 0.0 {
            self
        } else {
            self / n
        }
    }

    pub fn flip(self) -> Point {
        Point::new(self.x, -self.y)
    }

    pub fn rotate(self, a: f64) -> Point {
        let (s, c) = a.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Point {
    fn add_assign(&mut self, o: Point) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl Div<f64> for Point {
    type Output = Point;
    fn div(self, k: f64) -> Point {
        Point::new(self.x / k, self.y / k)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// An angle kept in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);

    /// Wraps a finite angle; panics on NaN. Use [`normalize_angle`] for untrusted input.
    pub fn new(raw: f64) -> Angle {
        normalize_angle(raw).expect("finite angle")
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn unit(self) -> Point {
        Point::unit(self.0)
    }

    pub fn of(v: Point) -> Angle {
        Angle::new(v.angle())
    }
}

pub fn normalize_angle(raw: f64) -> Result<Angle, GeomError> {
    if !raw.is_finite() {
        return Err(GeomError::NonFiniteAngle(raw));
    }
    let mut a = raw.rem_euclid(TAU);
    if a >= TAU {
        a = 0.0;
    }
    Ok(Angle(a))
}

/// CCW distance from `from` to `to`, in `[0, 2π)`.
pub fn ccw_delta(from: f64, to: f64) -> f64 {
    let d = (to - from).rem_euclid(TAU);
    if d >= TAU {
        0.0
    } else {
        d
    }
}

/// Wraps into `(-π, π]`.
pub fn wrap_pi(a: f64) -> f64 {
    let w = (a + PI).rem_euclid(TAU) - PI;
    if w <= -PI {
        w + TAU
    } else {
        w
    }
}

/// Counter-clockwise arc of directions from `start`, `width` radians long.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngularInterval {
    pub start: Angle,
    pub width: f64,
}

impl AngularInterval {
    pub fn new(start: Angle, end: Angle) -> Self {
        AngularInterval {
            start,
            width: ccw_delta(start.0, end.0),
        }
    }

    pub fn from_width(start: f64, width: f64) -> Self {
        AngularInterval {
            start: Angle::new(start),
            width: width.clamp(0.0, TAU),
        }
    }

    pub fn point(a: Angle) -> Self {
        AngularInterval { start: a, width: 0.0 }
    }

    pub fn full() -> Self {
        AngularInterval {
            start: Angle::ZERO,
            width: TAU,
        }
    }

    pub fn end(&self) -> Angle {
        Angle::new(self.start.0 + self.width)
    }

    pub fn is_full(&self, eps_angle: f64) -> bool {
        self.width >= TAU - eps_angle
    }

    /// Membership with endpoints included (up to `eps_angle`).
    pub fn contains_eps(&self, a: Angle, eps_angle: f64) -> bool {
        if self.is_full(eps_angle) {
            return true;
        }
        let d = ccw_delta(self.start.0, a.0);
        d <= self.width + eps_angle || d >= TAU - eps_angle
    }

    pub fn contains(&self, a: Angle) -> bool {
        self.contains_eps(a, 1e-12)
    }

    /// The complementary arc, sharing both endpoints.
    pub fn complement(&self) -> Self {
        AngularInterval {
            start: self.end(),
            width: TAU - self.width,
        }
    }

    pub fn mid(&self) -> Angle {
        Angle::new(self.start.0 + 0.5 * self.width)
    }

    /// Intersection with another interval; at most two disjoint pieces.
    pub fn intersect(&self, o: &AngularInterval) -> Vec<AngularInterval> {
        if self.width >= TAU {
            return vec![*o];
        }
        if o.width >= TAU {
            return vec![*self];
        }
        let mut out = Vec::new();
        // Work in the frame where self starts at zero.
        let os = ccw_delta(self.start.0, o.start.0);
        for shift in [os - TAU, os] {
            let lo = shift.max(0.0);
            let hi = (shift + o.width).min(self.width);
            if hi >= lo {
                out.push(AngularInterval::from_width(self.start.0 + lo, hi - lo));
            }
        }
        out.dedup_by(|a, b| (a.start.0 - b.start.0).abs() < 1e-15 && (a.width - b.width).abs() < 1e-15);
        out
    }
}

pub fn interval_contains(i: &AngularInterval, a: Angle) -> bool {
    i.contains(a)
}

/// `p -> R(rotation) * F(p) + translation`, where `F` is the optional x-axis reflection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RigidTransform {
    pub rotation: f64,
    pub translation: Point,
    pub flipped: bool,
}

impl Default for RigidTransform {
    fn default() -> Self {
        Self::identity()
    }
}

impl RigidTransform {
    pub fn identity() -> Self {
        RigidTransform {
            rotation: 0.0,
            translation: Point::ORIGIN,
            flipped: false,
        }
    }

    pub fn rotation(a: f64) -> Self {
        RigidTransform {
            rotation: a,
            ..Self::identity()
        }
    }

    pub fn translation(t: Point) -> Self {
        RigidTransform {
            translation: t,
            ..Self::identity()
        }
    }

    pub fn flip() -> Self {
        RigidTransform {
            flipped: true,
            ..Self::identity()
        }
    }

    /// Applies only the linear part.
    pub fn apply_vector(&self, v: Point) -> Point {
        let v = if self.flipped { v.flip() } else { v };
        v.rotate(self.rotation)
    }

    pub fn apply(&self, p: Point) -> Point {
        self.apply_vector(p) + self.translation
    }

    /// Maps a direction angle through the linear part.
    pub fn apply_angle(&self, a: f64) -> f64 {
        if self.flipped {
            -a + self.rotation
        } else {
            a + self.rotation
        }
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &RigidTransform) -> RigidTransform {
        let rotation = if self.flipped {
            self.rotation - other.rotation
        } else {
            self.rotation + other.rotation
        };
        RigidTransform {
            rotation,
            translation: self.apply(other.translation),
            flipped: self.flipped != other.flipped,
        }
    }

    pub fn inverse(&self) -> RigidTransform {
        // p = R F q + t  =>  q = F R^-1 (p - t) = R' F (p - t) with R' = R^-1 or R for flips.
        let rotation = if self.flipped {
            self.rotation
        } else {
            -self.rotation
        };
        let lin = RigidTransform {
            rotation,
            translation: Point::ORIGIN,
            flipped: self.flipped,
        };
        RigidTransform {
            rotation,
            translation: lin.apply_vector(-self.translation),
            flipped: self.flipped,
        }
    }
}

pub fn apply_transform(t: &RigidTransform, p: Point) -> Point {
    t.apply(p)
}

/// Numeric tolerances used by every predicate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    pub eps_length: f64,
    pub eps_angle: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            eps_length: 1e-9,
            eps_angle: 1e-9,
        }
    }
}

pub const EPS_ENV: &str = "CCS_DUET_EPS";

impl TolerancePolicy {
    /// Defaults, with `eps_length` overridden by `CCS_DUET_EPS` when it parses to a positive number.
    pub fn from_env() -> Self {
        let mut tol = Self::default();
        if let Some(v) = std::env::var(EPS_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
        {
            if v > 0.0 && v.is_finite() {
                tol.eps_length = v;
            }
        }
        tol
    }
}

/// Andrew's monotone chain. Output is CCW, starts at the lexicographically smallest point,
/// and drops collinear points.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let turn = |o: Point, a: Point, b: Point| (a - o).cross(b - o);
    let mut lower: Vec<Point> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 && turn(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && turn(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

pub fn polygon_perimeter(poly: &[Point]) -> f64 {
    if poly.len() < 2 {
        return 0.0;
    }
    let n = poly.len();
    (0..n).map(|i| poly[i].dist(poly[(i + 1) % n])).sum()
}

pub fn signed_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    0.5 * (0..n).map(|i| poly[i].cross(poly[(i + 1) % n])).sum::<f64>()
}

/// Distance from `p` to the closed segment `ab`, together with the closest point.
pub fn segment_closest(p: Point, a: Point, b: Point) -> (f64, Point) {
    let d = b - a;
    let l2 = d.norm_sq();
    let t = if l2 == 0.0 {
        0.0
    } else {
        ((p - a).dot(d) / l2).clamp(0.0, 1.0)
    };
    let c = a + d * t;
    (p.dist(c), c)
}

/// Distance between closed segments `ab` and `cd`.
pub fn segment_segment_distance(a: Point, b: Point, c: Point, d: Point) -> f64 {
    if segments_cross(a, b, c, d) {
        return 0.0;
    }
    segment_closest(a, c, d)
        .0
        .min(segment_closest(b, c, d).0)
        .min(segment_closest(c, a, b).0)
        .min(segment_closest(d, a, b).0)
}

fn segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = (b - a).cross(c - a);
    let d2 = (b - a).cross(d - a);
    let d3 = (d - c).cross(a - c);
    let d4 = (d - c).cross(b - c);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

/// Functions of the form `θ ↦ max_k (q_k·u(θ) + ρ_k)` where some terms are only active on an
/// angular gate. Support functions of hulls of points and circular arcs all have this shape,
/// so perimeters and lower-bound integrals reduce to exact sums over breakpoints.
pub mod envelope {
    use super::*;

    #[derive(Debug, Clone, Copy, PartialEq)]
    pub struct CosTerm {
        pub q: Point,
        pub rho: f64,
        pub gate: Option<AngularInterval>,
    }

    impl CosTerm {
        pub fn point(q: Point) -> Self {
            CosTerm { q, rho: 0.0, gate: None }
        }

        pub fn arc(center: Point, radius: f64, gate: AngularInterval) -> Self {
            CosTerm {
                q: center,
                rho: radius,
                gate: Some(gate),
            }
        }

        fn active(&self, a: f64) -> bool {
            match &self.gate {
                None => true,
                Some(g) => g.contains_eps(Angle::new(a), 0.0),
            }
        }

        pub fn value(&self, a: f64) -> f64 {
            self.q.dot(Point::unit(a)) + self.rho
        }

        fn antiderivative(&self, a: f64) -> f64 {
            let (s, c) = a.sin_cos();
            self.q.x * s - self.q.y * c + self.rho * a
        }
    }

    /// A maximal angular range where a single term attains the maximum.
    #[derive(Debug, Clone, Copy, PartialEq)]
    pub struct EnvelopePiece {
        pub from: f64,
        pub to: f64,
        pub term: usize,
    }

    pub fn evaluate(terms: &[CosTerm], a: f64) -> f64 {
        argmax(terms, a).map(|k| terms[k].value(a)).unwrap_or(f64::NEG_INFINITY)
    }

    fn argmax(terms: &[CosTerm], a: f64) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (k, t) in terms.iter().enumerate() {
            if !t.active(a) {
                continue;
            }
            let v = t.value(a);
            if best.is_none_or(|(_, bv)| v > bv) {
                best = Some((k, v));
            }
        }
        best.map(|(k, _)| k)
    }

    fn breakpoints(terms: &[CosTerm]) -> Vec<f64> {
        let mut bps = vec![0.0];
        for t in terms {
            if let Some(g) = &t.gate {
                bps.push(g.start.value());
                bps.push(g.end().value());
            }
        }
        for i in 0..terms.len() {
            for j in (i + 1)..terms.len() {
                let dq = terms[i].q - terms[j].q;
                let l = dq.norm();
                if l < 1e-300 {
                    continue;
                }
                let c = (terms[j].rho - terms[i].rho) / l;
                if c.abs() > 1.0 {
                    continue;
                }
                let base = dq.angle();
                let h = c.acos();
                bps.push(Angle::new(base + h).value());
                bps.push(Angle::new(base - h).value());
            }
        }
        bps.sort_by(f64::total_cmp);
        bps.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        bps.push(TAU);
        bps
    }

    /// Decomposes the circle into pieces, each owned by one term.
    pub fn pieces(terms: &[CosTerm]) -> Vec<EnvelopePiece> {
        let bps = breakpoints(terms);
        let mut out: Vec<EnvelopePiece> = Vec::new();
        for w in bps.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b - a <= 0.0 {
                continue;
            }
            if let Some(k) = argmax(terms, 0.5 * (a + b)) {
                match out.last_mut() {
                    Some(last) if last.term == k && last.to == a => last.to = b,
                    _ => out.push(EnvelopePiece { from: a, to: b, term: k }),
                }
            }
        }
        out
    }

    /// Exact `∫_0^{2π} max_k (...) dθ`.
    pub fn integrate(terms: &[CosTerm]) -> f64 {
        pieces(terms)
            .iter()
            .map(|p| {
                let t = &terms[p.term];
                t.antiderivative(p.to) - t.antiderivative(p.from)
            })
            .sum()
    }

    /// Composite Simpson quadrature of the envelope; an independent check on [`integrate`].
    pub fn integrate_numeric(terms: &[CosTerm], n: usize) -> f64 {
        let n = n.max(2) & !1;
        let h = TAU / n as f64;
        let mut s = evaluate(terms, 0.0) + evaluate(terms, TAU);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * evaluate(terms, i as f64 * h);
        }
        s * h / 3.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12
    }

    #[test]
    fn angles_normalize() {
        assert!(close(normalize_angle(3.0 * PI).unwrap().value(), PI));
        assert!(close(normalize_angle(-FRAC_PI_2).unwrap().value(), 3.0 * FRAC_PI_2));
        assert_eq!(normalize_angle(0.0).unwrap().value(), 0.0);
        assert!(normalize_angle(f64::NAN).is_err());
    }

    #[test]
    fn interval_membership() {
        let upper = AngularInterval::new(Angle::new(0.0), Angle::new(PI));
        assert!(interval_contains(&upper, Angle::new(FRAC_PI_2)));
        assert!(!interval_contains(&upper, Angle::new(3.0 * FRAC_PI_2)));
        let wrap = AngularInterval::new(Angle::new(3.0 * FRAC_PI_2), Angle::new(FRAC_PI_2));
        assert!(interval_contains(&wrap, Angle::new(0.0)));
        assert!(!interval_contains(&wrap, Angle::new(PI)));
    }

    #[test]
    fn transforms() {
        let p = Point::new(3.0, 4.0);
        assert_eq!(apply_transform(&RigidTransform::identity(), p), p);
        let q = apply_transform(&RigidTransform::rotation(FRAC_PI_2), Point::new(1.0, 0.0));
        assert!(q.dist(Point::new(0.0, 1.0)) < 1e-15);
        assert_eq!(apply_transform(&RigidTransform::flip(), Point::new(1.0, 2.0)), Point::new(1.0, -2.0));
    }

    #[test]
    fn hull_examples() {
        let pts = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0), Point::new(0.2, 0.2)];
        assert_eq!(convex_hull(&pts), vec![pts[0], pts[1], pts[2]]);
        assert_eq!(convex_hull(&[Point::ORIGIN]), vec![Point::ORIGIN]);
    }

    #[test]
    fn envelope_of_a_square_integrates_to_its_perimeter() {
        let terms: Vec<envelope::CosTerm> = [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)]
            .iter()
            .map(|&(x, y)| envelope::CosTerm::point(Point::new(x, y)))
            .collect();
        assert!((envelope::integrate(&terms) - 8.0).abs() < 1e-12);
        assert!((envelope::evaluate(&terms, FRAC_PI_4) - 2f64.sqrt()).abs() < 1e-12);
        assert!((envelope::integrate_numeric(&terms, 20_000) - 8.0).abs() < 1e-6);
    }
}
