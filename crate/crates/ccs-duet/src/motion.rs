//! Time-parameterized co-motions and their reparameterizations.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{wrap_pi, AngularInterval, Point, RigidTransform, TolerancePolicy};
use crate::pathfind::{PathPiece, PointPath};
use crate::shape::{RoundedPolygon, SumBoundary, Turn, WalkElement};

#[derive(Debug, Error, PartialEq)]
pub enum MotionError {
    #[error("time {0} is outside [0, 1]")]
    TimeOutOfRange(f64),
}

/// Separation at or below this counts as contact.
pub const CONTACT_THRESHOLD: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Robot {
    A,
    B,
}

/// Contact-following coupling: `A - B` runs along `elements` (plus a small offset that is
/// interpolated between the two ends) while both robots move along straight pieces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Slide {
    /// Path parameters at `tau = 0` and `tau = 1`.
    pub origin: [f64; 2],
    pub end: [f64; 2],
    /// Portion of `[0, 1]` this segment covers.
    pub tau: [f64; 2],
    pub elements: Vec<WalkElement>,
    pub offset_start: Point,
    pub offset_end: Point,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ScheduleKind {
    /// Path parameters interpolate linearly between `s0` and `s1`.
    Linear,
    Slide(Slide),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleSegment {
    pub t0: f64,
    pub t1: f64,
    pub s0: [f64; 2],
    pub s1: [f64; 2],
    pub kind: ScheduleKind,
}

/// Two synchronized paths. The schedule maps time to arc-length positions on each path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoMotion {
    pub path_a: PointPath,
    pub path_b: PointPath,
    pub schedule: Vec<ScheduleSegment>,
    pub phase_marks: Vec<f64>,
}

fn chain_length(elements: &[WalkElement]) -> f64 {
    elements.iter().map(|e| e.length()).sum()
}

fn chain_point(elements: &[WalkElement], s: f64) -> Point {
    let mut left = s.max(0.0);
    for e in elements {
        let l = e.length();
        if left <= l {
            return e.point_at(left);
        }
        left -= l;
    }
    elements.last().map(|e| e.end_point()).unwrap_or(Point::ORIGIN)
}

impl CoMotion {
    /// Robots move one at a time, in the order given, at unit speed.
    pub fn decoupled(start_a: Point, start_b: Point, phases: &[(Robot, PointPath)]) -> CoMotion {
        let mut pa: Vec<PathPiece> = Vec::new();
        let mut pb: Vec<PathPiece> = Vec::new();
        let total: f64 = phases.iter().map(|(_, p)| p.length).sum();
        let mut schedule = Vec::new();
        let mut marks = Vec::new();
        let (mut sa, mut sb, mut acc) = (0.0, 0.0, 0.0);
        for (i, (who, path)) in phases.iter().enumerate() {
            let t0 = if total > 0.0 { acc / total } else { 0.0 };
            acc += path.length;
            let t1 = if total > 0.0 { acc / total } else { 0.0 };
            let s0 = [sa, sb];
            match who {
                Robot::A => {
                    pa.extend(path.pieces.iter().cloned());
                    sa += path.length;
                }
                Robot::B => {
                    pb.extend(path.pieces.iter().cloned());
                    sb += path.length;
                }
            }
            if t1 > t0 {
                schedule.push(ScheduleSegment {
                    t0,
                    t1,
                    s0,
                    s1: [sa, sb],
                    kind: ScheduleKind::Linear,
                });
            }
            if i + 1 < phases.len() {
                marks.push(t1);
            }
        }
        if schedule.is_empty() {
            schedule.push(ScheduleSegment {
                t0: 0.0,
                t1: 1.0,
                s0: [0.0, 0.0],
                s1: [0.0, 0.0],
                kind: ScheduleKind::Linear,
            });
        }
        if let Some(last) = schedule.last_mut() {
            last.t1 = 1.0;
        }
        CoMotion {
            path_a: PointPath::from_pieces(start_a, pa),
            path_b: PointPath::from_pieces(start_b, pb),
            schedule,
            phase_marks: marks,
        }
    }

    pub fn length(&self) -> f64 {
        self.path_a.length + self.path_b.length
    }

    fn segment_at(&self, t: f64) -> &ScheduleSegment {
        let k = self.schedule.partition_point(|s| s.t1 < t);
        &self.schedule[k.min(self.schedule.len() - 1)]
    }

    /// Arc-length positions on both paths at time `t`.
    pub fn params(&self, t: f64) -> [f64; 2] {
        let seg = self.segment_at(t.clamp(0.0, 1.0));
        let u = if seg.t1 > seg.t0 {
            ((t - seg.t0) / (seg.t1 - seg.t0)).clamp(0.0, 1.0)
        } else {
            1.0
        };
        match &seg.kind {
            ScheduleKind::Linear => [
                seg.s0[0] + u * (seg.s1[0] - seg.s0[0]),
                seg.s0[1] + u * (seg.s1[1] - seg.s0[1]),
            ],
            ScheduleKind::Slide(sl) => self.slide_params(sl, sl.tau[0] + u * (sl.tau[1] - sl.tau[0])),
        }
    }

    fn slide_params(&self, sl: &Slide, tau: f64) -> [f64; 2] {
        let (da, db) = (sl.end[0] - sl.origin[0], sl.end[1] - sl.origin[1]);
        let a0 = self.path_a.point_at(sl.origin[0]);
        let b0 = self.path_b.point_at(sl.origin[1]);
        let dir_a = (self.path_a.point_at(sl.end[0]) - a0) / da;
        let dir_b = (self.path_b.point_at(sl.end[1]) - b0) / db;
        let x = chain_point(&sl.elements, tau * chain_length(&sl.elements)) + sl.offset_start.lerp(sl.offset_end, tau);
        let d = x - (a0 - b0);
        // Solve dir_a * p - dir_b * q = d.
        let m = -dir_a.cross(dir_b);
        let p = d.cross(-dir_b) / m;
        let q = dir_a.cross(d) / m;
        [sl.origin[0] + p.clamp(0.0, da), sl.origin[1] + q.clamp(0.0, db)]
    }

    pub fn evaluate(&self, t: f64) -> Result<(Point, Point), MotionError> {
        if !(0.0..=1.0).contains(&t) {
            return Err(MotionError::TimeOutOfRange(t));
        }
        Ok(self.positions(t))
    }

    fn positions(&self, t: f64) -> (Point, Point) {
        let [sa, sb] = self.params(t);
        (self.path_a.point_at(sa), self.path_b.point_at(sb))
    }

    pub fn start(&self) -> (Point, Point) {
        (self.path_a.start, self.path_b.start)
    }

    pub fn end(&self) -> (Point, Point) {
        (self.path_a.end(), self.path_b.end())
    }

    pub fn transformed(&self, t: &RigidTransform) -> CoMotion {
        let lin = RigidTransform {
            translation: Point::ORIGIN,
            ..*t
        };
        CoMotion {
            path_a: self.path_a.transformed(t),
            path_b: self.path_b.transformed(t),
            schedule: self
                .schedule
                .iter()
                .map(|s| ScheduleSegment {
                    kind: match &s.kind {
                        ScheduleKind::Linear => ScheduleKind::Linear,
                        ScheduleKind::Slide(sl) => ScheduleKind::Slide(Slide {
                            elements: sl.elements.iter().map(|e| e.transformed(&lin)).collect(),
                            offset_start: lin.apply_vector(sl.offset_start),
                            offset_end: lin.apply_vector(sl.offset_end),
                            ..sl.clone()
                        }),
                    },
                    ..s.clone()
                })
                .collect(),
            phase_marks: self.phase_marks.clone(),
        }
    }

    /// The same motion run backwards in time.
    pub fn reversed(&self) -> CoMotion {
        let (la, lb) = (self.path_a.length, self.path_b.length);
        let flip = |s: [f64; 2]| [la - s[0], lb - s[1]];
        CoMotion {
            path_a: self.path_a.reversed(),
            path_b: self.path_b.reversed(),
            schedule: self
                .schedule
                .iter()
                .rev()
                .map(|s| ScheduleSegment {
                    t0: 1.0 - s.t1,
                    t1: 1.0 - s.t0,
                    s0: flip(s.s1),
                    s1: flip(s.s0),
                    kind: match &s.kind {
                        ScheduleKind::Linear => ScheduleKind::Linear,
                        ScheduleKind::Slide(sl) => ScheduleKind::Slide(Slide {
                            origin: flip(sl.end),
                            end: flip(sl.origin),
                            tau: [1.0 - sl.tau[1], 1.0 - sl.tau[0]],
                            elements: sl.elements.iter().rev().map(|e| e.reversed()).collect(),
                            offset_start: sl.offset_end,
                            offset_end: sl.offset_start,
                        }),
                    },
                })
                .collect(),
            phase_marks: self.phase_marks.iter().rev().map(|m| 1.0 - m).collect(),
        }
    }

    /// Exchanges the roles of the two robots.
    pub fn swapped(&self) -> CoMotion {
        let sw = |s: [f64; 2]| [s[1], s[0]];
        let neg = RigidTransform::rotation(std::f64::consts::PI);
        CoMotion {
            path_a: self.path_b.clone(),
            path_b: self.path_a.clone(),
            schedule: self
                .schedule
                .iter()
                .map(|s| ScheduleSegment {
                    t0: s.t0,
                    t1: s.t1,
                    s0: sw(s.s0),
                    s1: sw(s.s1),
                    kind: match &s.kind {
                        ScheduleKind::Linear => ScheduleKind::Linear,
                        ScheduleKind::Slide(sl) => ScheduleKind::Slide(Slide {
                            origin: sw(sl.origin),
                            end: sw(sl.end),
                            tau: sl.tau,
                            elements: sl.elements.iter().map(|e| e.transformed(&neg)).collect(),
                            offset_start: -sl.offset_start,
                            offset_end: -sl.offset_end,
                        }),
                    },
                })
                .collect(),
            phase_marks: self.phase_marks.clone(),
        }
    }

    /// The schedule restricted to `[a, b]`, with times kept as they are.
    fn clipped(&self, a: f64, b: f64) -> Vec<ScheduleSegment> {
        let mut out = Vec::new();
        for s in &self.schedule {
            let lo = s.t0.max(a);
            let hi = s.t1.min(b);
            if hi <= lo {
                continue;
            }
            let span = s.t1 - s.t0;
            let (u0, u1) = ((lo - s.t0) / span, (hi - s.t0) / span);
            let kind = match &s.kind {
                ScheduleKind::Linear => ScheduleKind::Linear,
                ScheduleKind::Slide(sl) => {
                    let w = sl.tau[1] - sl.tau[0];
                    ScheduleKind::Slide(Slide {
                        tau: [sl.tau[0] + u0 * w, sl.tau[0] + u1 * w],
                        ..sl.clone()
                    })
                }
            };
            out.push(ScheduleSegment {
                t0: lo,
                t1: hi,
                s0: self.params(lo),
                s1: self.params(hi),
                kind,
            });
        }
        out
    }

    /// Replaces the schedule on `[a, b]` with `middle`.
    fn spliced(&self, a: f64, b: f64, middle: ScheduleSegment) -> CoMotion {
        let mut schedule = self.clipped(0.0, a);
        schedule.push(middle);
        schedule.extend(self.clipped(b, 1.0));
        CoMotion {
            schedule,
            ..self.clone()
        }
    }

    /// Difference `A - B` at time `t`.
    pub fn relative(&self, t: f64) -> Point {
        let (a, b) = self.positions(t);
        a - b
    }
}

fn sample_times(n: usize) -> impl Iterator<Item = f64> {
    let n = n.max(2);
    (0..n).map(move |i| i as f64 / (n - 1) as f64)
}

/// Smallest separation over `n` evenly spaced times; `body` is the sum A+B.
pub fn min_separation(m: &CoMotion, body: &RoundedPolygon, n: usize) -> f64 {
    sample_times(n)
        .map(|t| body.signed_distance(m.relative(t)))
        .fold(f64::INFINITY, f64::min)
}

/// Orientation samples of a co-motion.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientationProfile {
    pub samples: Vec<(f64, AngularInterval)>,
}

impl OrientationProfile {
    /// Whether some choice of angle per sample is weakly monotone in the given sense.
    pub fn is_monotone(&self, dir: Turn, eps_angle: f64) -> bool {
        let sign = match dir {
            Turn::Ccw => 1.0,
            Turn::Cw => -1.0,
        };
        let mut level: Option<f64> = None;
        let mut prev_mid = 0.0;
        for (_, iv) in &self.samples {
            let mid = iv.start.value() + 0.5 * iv.width;
            let w = 0.5 * iv.width;
            let unwrapped = match level {
                None => mid,
                Some(_) => prev_mid + wrap_pi(mid - prev_mid),
            };
            prev_mid = unwrapped;
            let (lo, hi) = if sign > 0.0 {
                (unwrapped - w, unwrapped + w)
            } else {
                (-unwrapped - w, -unwrapped + w)
            };
            match level {
                None => level = Some(lo),
                Some(v) => {
                    if hi < v - eps_angle {
                        return false;
                    }
                    level = Some(v.max(lo));
                }
            }
        }
        true
    }
}

/// Orientation at `rel`, widened by the rounding error of the direction to the nearest core
/// point. Near a contact that error exceeds any fixed angle tolerance.
fn sampled_orientation(body: &RoundedPolygon, rel: Point, tol: &TolerancePolicy) -> Option<AngularInterval> {
    let iv = body.orientation(rel, tol).ok()?;
    if iv.width > 0.0 {
        return Some(iv);
    }
    let (q, _, dist) = body.nearest_core(rel);
    if dist <= tol.eps_length {
        return Some(iv);
    }
    let err = 64.0 * f64::EPSILON * (rel.norm() + q.norm() + 1.0) / dist;
    Some(AngularInterval::from_width(iv.start.value() - err, 2.0 * err))
}

/// Samples that are not viable are skipped.
pub fn orientation_profile(m: &CoMotion, body: &RoundedPolygon, n: usize, tol: &TolerancePolicy) -> OrientationProfile {
    OrientationProfile {
        samples: sample_times(n)
            .filter_map(|t| sampled_orientation(body, m.relative(t), tol).map(|o| (t, o)))
            .collect(),
    }
}

/// Net change of the orientation over the motion, positive for counter-clockwise.
pub fn net_rotation(m: &CoMotion, body: &RoundedPolygon, n: usize, tol: &TolerancePolicy) -> f64 {
    let mids: Vec<f64> = sample_times(n)
        .filter_map(|t| sampled_orientation(body, m.relative(t), tol))
        .map(|iv| iv.start.value() + 0.5 * iv.width)
        .collect();
    mids.windows(2).map(|w| wrap_pi(w[1] - w[0])).sum()
}

/// Signed, unwrapped orientation interval of a co-motion, sampled densely and evaluated exactly.
struct Unwrapped<'a> {
    m: &'a CoMotion,
    body: &'a RoundedPolygon,
    sign: f64,
    times: Vec<f64>,
    mids: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl<'a> Unwrapped<'a> {
    fn new(m: &'a CoMotion, body: &'a RoundedPolygon, dir: Turn, n: usize) -> Self {
        let sign = if dir == Turn::Ccw { 1.0 } else { -1.0 };
        let times: Vec<f64> = sample_times(n).collect();
        let mut mids: Vec<f64> = Vec::with_capacity(n);
        let mut lo = Vec::with_capacity(n);
        let mut hi = Vec::with_capacity(n);
        for &t in &times {
            let (mid, w) = Self::raw(m, body, t);
            let v = match mids.last() {
                None => sign * mid,
                Some(&p) => p + wrap_pi(sign * mid - p),
            };
            mids.push(v);
            lo.push(v - w);
            hi.push(v + w);
        }
        Unwrapped {
            m,
            body,
            sign,
            times,
            mids,
            lo,
            hi,
        }
    }

    /// Mid-angle and half-width of the orientation at `t`.
    fn raw(m: &CoMotion, body: &RoundedPolygon, t: f64) -> (f64, f64) {
        let rel = m.relative(t);
        let loose = TolerancePolicy {
            eps_length: 1e-6,
            eps_angle: 1e-9,
        };
        match sampled_orientation(body, rel, &loose) {
            Some(iv) => (iv.start.value() + 0.5 * iv.width, 0.5 * iv.width),
            None => (rel.angle(), 0.0),
        }
    }

    /// Signed interval at `t`, unwrapped next to the sample at index `near`.
    fn at(&self, t: f64, near: usize) -> (f64, f64) {
        let (mid, w) = Self::raw(self.m, self.body, t);
        let v = self.mids[near] + wrap_pi(self.sign * mid - self.mids[near]);
        (v - w, v + w)
    }

    /// First time in `[lo, hi]` whose interval reaches `level`, assuming one crossing.
    fn crossing(&self, mut lo: f64, mut hi: f64, level: f64, near: usize) -> f64 {
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if self.at(mid, near).1 < level {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }

    /// Location and value of the largest lower bound in `[lo, hi]` (golden section).
    fn peak(&self, mut lo: f64, mut hi: f64, near: usize) -> (f64, f64) {
        let g = 0.5 * (5.0_f64.sqrt() - 1.0);
        let f = |t: f64| self.at(t, near).0;
        let mut x1 = hi - g * (hi - lo);
        let mut x2 = lo + g * (hi - lo);
        let (mut f1, mut f2) = (f(x1), f(x2));
        for _ in 0..80 {
            if f1 >= f2 {
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
        if f1 >= f2 {
            (x1, f1)
        } else {
            (x2, f2)
        }
    }
}

const REPARAM_SAMPLES: usize = 10_000;

/// Replaces every stretch where the orientation backtracks by a coupled straight-line motion
/// between two configurations of equal orientation. Traces and length are unchanged.
pub fn make_orientation_monotone(m: &CoMotion, body: &RoundedPolygon, dir: Turn, tol: &TolerancePolicy) -> CoMotion {
    let u = Unwrapped::new(m, body, dir, REPARAM_SAMPLES);
    let n = u.mids.len();
    let mut prefix = vec![f64::NEG_INFINITY; n];
    let mut suffix = vec![f64::INFINITY; n];
    for i in 1..n {
        prefix[i] = prefix[i - 1].max(u.lo[i - 1]);
    }
    for i in (0..n - 1).rev() {
        suffix[i] = suffix[i + 1].min(u.hi[i + 1]);
    }
    let slack = 0.5 * tol.eps_angle.max(1e-12);
    let good: Vec<bool> = (0..n)
        .map(|i| u.hi[i] >= prefix[i] - slack && u.lo[i] <= suffix[i] + slack)
        .collect();
    let anchors: Vec<usize> = (0..n).filter(|&i| good[i] || i == 0 || i == n - 1).collect();
    let mut out = m.clone();
    for w in anchors.windows(2).rev() {
        let (a, b) = (w[0], w[1]);
        if b == a + 1 && good[a] && good[b] {
            continue;
        }
        let gap_max = u.lo[a..=b].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let (ta, tb);
        if b == n - 1 && gap_max > u.hi[n - 1] + slack {
            // Overshoot before the goal: couple from the last configuration at the final level.
            let level = u.hi[n - 1];
            ta = if a + 1 < n { u.crossing(u.times[a], u.times[a + 1], level, a) } else { u.times[a] };
            tb = 1.0;
        } else {
            let (t_start, level) = if a == 0 {
                (0.0, u.lo[0])
            } else {
                u.peak(u.times[a - 1], u.times[(a + 1).min(n - 1)], a)
            };
            ta = t_start;
            tb = if u.hi[b] >= level {
                u.crossing(u.times[b - 1], u.times[b], level, b)
            } else {
                u.times[b]
            };
        }
        if tb <= ta {
            continue;
        }
        let seg = ScheduleSegment {
            t0: ta,
            t1: tb,
            s0: out.params(ta),
            s1: out.params(tb),
            kind: ScheduleKind::Linear,
        };
        out = out.spliced(ta, tb, seg);
    }
    out
}

/// Start and end times of the maximal contact stretches, sampled at `n` times.
pub fn contact_components(m: &CoMotion, body: &RoundedPolygon, n: usize) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut open: Option<f64> = None;
    let mut last = 0.0;
    for t in sample_times(n) {
        let c = body.signed_distance(m.relative(t)) <= CONTACT_THRESHOLD;
        match (c, open) {
            (true, None) => open = Some(t),
            (false, Some(s)) => {
                out.push((s, last));
                open = None;
            }
            _ => {}
        }
        last = t;
    }
    if let Some(s) = open {
        out.push((s, last));
    }
    out
}

/// Straight piece of `path` covering arc positions `[s0, s1]`, if any.
fn straight_over(path: &PointPath, s0: f64, s1: f64) -> bool {
    if s1 - s0 <= 0.0 {
        return true;
    }
    let mut acc = 0.0;
    for p in &path.pieces {
        let l = p.length();
        let (lo, hi) = (acc, acc + l);
        acc = hi;
        if s0 >= lo - 1e-12 && s1 <= hi + 1e-12 {
            return matches!(p, PathPiece::Segment { .. });
        }
    }
    false
}

/// Joins separate contact stretches by sliding along the sum boundary wherever both robots move
/// in straight lines in between. Traces and length are unchanged.
pub fn make_contact_preserving(m: &CoMotion, body: &RoundedPolygon, tol: &TolerancePolicy) -> CoMotion {
    let n = 20_001;
    let comps = contact_components(m, body, n);
    if comps.len() < 2 {
        return m.clone();
    }
    let step = 1.0 / (n - 1) as f64;
    let sep = |t: f64| body.signed_distance(m.relative(t));
    let target = 0.1 * CONTACT_THRESHOLD;
    let mut out = m.clone();
    for w in comps.windows(2).rev() {
        // Tighten both ends onto the contact set.
        let refine = |lo: f64, hi: f64, leaving: bool| {
            let (mut lo, mut hi) = (lo, hi);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let inside = sep(mid) <= target;
                if inside == leaving {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            if leaving {
                lo
            } else {
                hi
            }
        };
        let ta = if sep(w[0].1) <= target { refine(w[0].1, (w[0].1 + step).min(1.0), true) } else { w[0].1 };
        let tb = if sep(w[1].0) <= target { refine((w[1].0 - step).max(0.0), w[1].0, false) } else { w[1].0 };
        if tb <= ta {
            continue;
        }
        if let Some(seg) = slide_segment(m, body, ta, tb, tol) {
            out = out.spliced(ta, tb, seg);
        }
    }
    out
}

fn slide_segment(m: &CoMotion, body: &RoundedPolygon, ta: f64, tb: f64, tol: &TolerancePolicy) -> Option<ScheduleSegment> {
    let s0 = m.params(ta);
    let s1 = m.params(tb);
    let (da, db) = (s1[0] - s0[0], s1[1] - s0[1]);
    if da <= 0.0 || db <= 0.0 || !straight_over(&m.path_a, s0[0], s1[0]) || !straight_over(&m.path_b, s0[1], s1[1]) {
        return None;
    }
    let dir_a = (m.path_a.point_at(s1[0]) - m.path_a.point_at(s0[0])) / da;
    let dir_b = (m.path_b.point_at(s1[1]) - m.path_b.point_at(s0[1])) / db;
    if dir_a.cross(dir_b).abs() < 1e-9 {
        return None;
    }
    let sb = SumBoundary::new(body.clone(), Point::ORIGIN);
    let xa = m.relative(ta);
    let xb = m.relative(tb);
    let loose = TolerancePolicy {
        eps_length: 1e-6,
        ..*tol
    };
    let pa = sb.locate(xa, &loose).ok()?;
    let pb = sb.locate(xb, &loose).ok()?;
    for turn in [Turn::Ccw, Turn::Cw] {
        let walk = sb.walk_between(pa, pb, turn);
        let elements = walk.elements;
        let (ws, we) = if elements.is_empty() {
            (sb.point_at(pa), sb.point_at(pb))
        } else {
            (elements[0].start_point(), elements[elements.len() - 1].end_point())
        };
        let slide = Slide {
            origin: s0,
            end: s1,
            tau: [0.0, 1.0],
            elements: if elements.is_empty() {
                vec![WalkElement::Segment { from: ws, to: we }]
            } else {
                elements
            },
            offset_start: xa - ws,
            offset_end: xb - we,
        };
        if slide_is_monotone(m, &slide, da, db) {
            return Some(ScheduleSegment {
                t0: ta,
                t1: tb,
                s0,
                s1,
                kind: ScheduleKind::Slide(slide),
            });
        }
    }
    None
}

fn slide_is_monotone(m: &CoMotion, sl: &Slide, da: f64, db: f64) -> bool {
    let (a0, b0) = (m.path_a.point_at(sl.origin[0]), m.path_b.point_at(sl.origin[1]));
    let dir_a = (m.path_a.point_at(sl.end[0]) - a0) / da;
    let dir_b = (m.path_b.point_at(sl.end[1]) - b0) / db;
    let det = -dir_a.cross(dir_b);
    let total = chain_length(&sl.elements);
    let slack = 1e-7 * (1.0 + da + db);
    let mut prev = (-slack, -slack);
    let k = 400;
    for i in 0..=k {
        let tau = i as f64 / k as f64;
        let x = chain_point(&sl.elements, tau * total) + sl.offset_start.lerp(sl.offset_end, tau);
        let d = x - (a0 - b0);
        let p = d.cross(-dir_b) / det;
        let q = dir_a.cross(d) / det;
        if p < prev.0 - slack || q < prev.1 - slack || p > da + slack || q > db + slack || p < -slack || q < -slack {
            return false;
        }
        prev = (p.max(prev.0), q.max(prev.1));
    }
    (prev.0 - da).abs() <= slack && (prev.1 - db).abs() <= slack
}
