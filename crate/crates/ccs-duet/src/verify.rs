//! Independent checks on planned co-motions.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geom::envelope::{self, CosTerm};
use crate::geom::{AngularInterval, Point, RigidTransform, TolerancePolicy};
use crate::motion::{min_separation, CoMotion};
use crate::pathfind::{ccw_path_length, PointPath};
use crate::planner::{lower_bound, path_hull_perimeter, swept_range, Instance, PlanError, PlanResult};
use crate::shape::{RoundedPolygon, SumBoundary, Turn, WalkElement};

pub const LENGTH_GAP_TOL: f64 = 1e-6;
pub const TRACE_HULL_TOL: f64 = 1e-9;
pub const SEPARATION_TOL: f64 = 1e-9;
/// Claimed length versus the sum of its piece lengths.
pub const PIECE_LENGTH_TOL: f64 = 1e-9;
pub const ENDPOINT_TOL: f64 = 1e-9;
pub const MAX_PIECES: usize = 6;
/// Allowed oracle excess, in grid steps.
pub const ORACLE_STEPS: f64 = 5.0;
pub const VALIDATION_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    /// `|length - min(lower bounds)|`.
    pub lower_bound_gap: f64,
    /// `|length - (min hull perimeter - |A0A1| - |B0B1|)|`.
    pub hull_identity_residual: f64,
    /// `|length - (perimeter of the hull of the trace difference - |A0A1| - |B0B1|)|`.
    pub trace_hull_residual: f64,
    /// Same as `hull_identity_residual` but subtracting `|A0B0| + |A1B1|`.
    pub endpoint_variant_residual: f64,
    /// Which subtraction reproduces the length: "segments", "endpoints", "both" or "neither".
    pub subtraction_match: String,
    /// `|claimed length - sum of piece lengths|`.
    pub length_residual: f64,
    /// Largest distance between a trace endpoint and the instance, or between consecutive pieces.
    pub endpoint_residual: f64,
    pub oracle_gap: Option<f64>,
    pub oracle_step: Option<f64>,
    pub min_separation: f64,
    pub piece_count_a: usize,
    pub piece_count_b: usize,
    pub pass: bool,
}

impl Default for CertificateReport {
    fn default() -> Self {
        CertificateReport {
            lower_bound_gap: f64::INFINITY,
            hull_identity_residual: f64::INFINITY,
            trace_hull_residual: f64::INFINITY,
            endpoint_variant_residual: f64::INFINITY,
            subtraction_match: "neither".into(),
            length_residual: f64::INFINITY,
            endpoint_residual: f64::INFINITY,
            oracle_gap: None,
            oracle_step: None,
            min_separation: f64::NEG_INFINITY,
            piece_count_a: 0,
            piece_count_b: 0,
            pass: false,
        }
    }
}

impl CertificateReport {
    /// Names of the checks that failed.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !(self.lower_bound_gap <= LENGTH_GAP_TOL) {
            out.push("lower_bound_gap");
        }
        if !(self.hull_identity_residual <= LENGTH_GAP_TOL) {
            out.push("hull_identity_residual");
        }
        if !(self.length_residual <= PIECE_LENGTH_TOL) {
            out.push("length_residual");
        }
        if !(self.endpoint_residual <= ENDPOINT_TOL) {
            out.push("endpoint_residual");
        }
        if let (Some(g), Some(h)) = (self.oracle_gap, self.oracle_step) {
            if !(g >= -LENGTH_GAP_TOL && g <= ORACLE_STEPS * h) {
                out.push("oracle_gap");
            }
        }
        if !(self.min_separation >= -SEPARATION_TOL) {
            out.push("min_separation");
        }
        if self.piece_count_a > MAX_PIECES || self.piece_count_b > MAX_PIECES {
            out.push("piece_count");
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Which {
    Top,
    Bottom,
}

/// Hull of the four difference points and part of the sum boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct HullRegion {
    /// CCW closed boundary; zero-length corners are omitted.
    pub features: Vec<WalkElement>,
    pub perimeter: f64,
    pub which: Which,
    pub terms: Vec<CosTerm>,
}

impl HullRegion {
    pub fn reach(&self, a: f64) -> f64 {
        envelope::evaluate(&self.terms, a)
    }
}

fn turn_of(which: Which) -> Turn {
    match which {
        Which::Top => Turn::Ccw,
        Which::Bottom => Turn::Cw,
    }
}

/// Support terms of the hull region: the four difference points and the sum boundary arcs whose
/// normals lie in the range (top) or outside it (bottom).
pub fn hull_terms(inst: &Instance, body: &RoundedPolygon, which: Which, tol: &TolerancePolicy) -> Result<Vec<CosTerm>, PlanError> {
    crate::planner::lower_bound_terms(inst, body, turn_of(which), tol)
}

/// Support terms of the plain convex hull of the difference points and the closed boundary
/// portion, end points included. Its perimeter can exceed that of [`build_hull_region`].
pub fn closed_portion_terms(inst: &Instance, body: &RoundedPolygon, which: Which, tol: &TolerancePolicy) -> Result<Vec<CosTerm>, PlanError> {
    let range = swept_range(inst, body, turn_of(which), tol)?;
    let mut terms = hull_terms(inst, body, which, tol)?;
    for k in 0..body.n() {
        let v = body.vertex(k);
        for gate in body.vertex_cone(k).intersect(&range) {
            terms.push(CosTerm::point(v + gate.start.unit() * body.radius));
            terms.push(CosTerm::point(v + gate.end().unit() * body.radius));
        }
    }
    Ok(terms)
}

pub fn build_hull_region(inst: &Instance, which: Which, tol: &TolerancePolicy) -> Result<HullRegion, PlanError> {
    let body = inst.body();
    let terms = hull_terms(inst, &body, which, tol)?;
    let pieces = envelope::pieces(&terms);
    let mut features: Vec<WalkElement> = Vec::new();
    let boundary_at = |t: &CosTerm, a: f64| t.q + Point::unit(a) * t.rho;
    for (i, p) in pieces.iter().enumerate() {
        let t = &terms[p.term];
        if t.rho > 0.0 {
            features.push(WalkElement::Arc {
                center: t.q,
                radius: t.rho,
                start: p.from,
                sweep: p.to - p.from,
            });
        }
        let next = &pieces[(i + 1) % pieces.len()];
        let here = boundary_at(t, p.to);
        let there = boundary_at(&terms[next.term], next.from);
        if here.dist(there) > 0.0 {
            features.push(WalkElement::Segment { from: here, to: there });
        }
    }
    let perimeter = features.iter().map(|f| f.length()).sum();
    Ok(HullRegion {
        features,
        perimeter,
        which,
        terms,
    })
}

/// Largest difference, over `n` directions, between the support of the hull region's boundary
/// (read off its features) and the lower-bound integrand.
pub fn region_support_gap(region: &HullRegion, inst: &Instance, n: usize, tol: &TolerancePolicy) -> Result<f64, PlanError> {
    let lb = crate::planner::lower_bound_terms(inst, &inst.body(), turn_of(region.which), tol)?;
    let feats = crate::planner::chain_support_terms(&region.features);
    Ok((0..n)
        .map(|i| {
            let a = std::f64::consts::TAU * i as f64 / n as f64;
            (envelope::evaluate(&feats, a) - envelope::evaluate(&lb, a)).abs()
        })
        .fold(0.0, f64::max))
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, eps: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        return left + right + delta / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) + simpson(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)
}

/// Adaptive Simpson quadrature of a support envelope over the circle, split at its kinks.
pub fn cauchy_quadrature(terms: &[CosTerm], eps: f64) -> f64 {
    let f = |a: f64| envelope::evaluate(terms, a);
    let pieces = envelope::pieces(terms);
    let per = eps / pieces.len().max(1) as f64;
    pieces
        .iter()
        .map(|p| {
            let (a, b) = (p.from, p.to);
            let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
            let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
            simpson(&f, a, b, fa, fm, fb, whole, per, 40)
        })
        .sum()
}

/// Lower bound by adaptive quadrature; agrees with the exact integral.
pub fn lower_bound_quadrature(inst: &Instance, dir: Turn, tol: &TolerancePolicy) -> Result<f64, PlanError> {
    let body = inst.body();
    let terms = crate::planner::lower_bound_terms(inst, &body, dir, tol)?;
    Ok(cauchy_quadrature(&terms, 1e-11) - inst.straight_length())
}

/// Length of the three-phase decoupled motion through `a_int` for every side choice; `None` when
/// `a_int` is forbidden.
fn standard_lengths(inst: &Instance, a: Point, sums: &(SumBoundary, SumBoundary), tol: &TolerancePolicy) -> Option<f64> {
    let (s, sf) = sums;
    let forbidden = |c: Point| s.body.signed_distance(a - c) < -tol.eps_length;
    if forbidden(inst.b0) || forbidden(inst.b1) {
        return None;
    }
    // Paths around a body at `c` are computed about the origin.
    let both = |p: Point, q: Point, c: Point| {
        let ccw = ccw_path_length(p - c, q - c, s, tol);
        let cw = ccw_path_length((p - c).flip(), (q - c).flip(), sf, tol);
        ccw.min(cw)
    };
    Some(both(inst.a0, a, inst.b0) + both(inst.b0, inst.b1, a) + both(a, inst.a1, inst.b1))
}

fn bbox(inst: &Instance) -> (Point, Point) {
    let pts = inst.points();
    let lo = pts.iter().fold(Point::new(f64::INFINITY, f64::INFINITY), |m, p| Point::new(m.x.min(p.x), m.y.min(p.y)));
    let hi = pts
        .iter()
        .fold(Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY), |m, p| Point::new(m.x.max(p.x), m.y.max(p.y)));
    (lo, hi)
}

/// Diameter of the instance's bounding box.
pub fn scene_diameter(inst: &Instance) -> f64 {
    let (lo, hi) = bbox(inst);
    lo.dist(hi)
}

/// Brute-force minimum over standard-form co-motions: every grid placement of the intermediate
/// position, every passing side per phase, and either robot moving first.
pub fn oracle_grid(inst: &Instance, bbox_margin: f64, step: f64, tol: &TolerancePolicy) -> f64 {
    oracle_grid_argmin(inst, bbox_margin, step, tol).0
}

/// Like [`oracle_grid`], also returning the best intermediate placement of A (in the original
/// labeling when the best variant is a relabeled one, the placement of the robot moving twice).
pub fn oracle_grid_argmin(inst: &Instance, bbox_margin: f64, step: f64, tol: &TolerancePolicy) -> (f64, Point) {
    assert!(step > 0.0, "grid step must be positive");
    let body = inst.body();
    let sums = (
        SumBoundary::new(body.clone(), Point::ORIGIN),
        SumBoundary::new(body.transformed_linear(&RigidTransform::flip()), Point::ORIGIN),
    );
    let (lo, hi) = bbox(inst);
    let lo = lo - Point::new(bbox_margin, bbox_margin);
    let hi = hi + Point::new(bbox_margin, bbox_margin);
    let nx = ((hi.x - lo.x) / step).floor() as usize + 1;
    let ny = ((hi.y - lo.y) / step).floor() as usize + 1;
    let variants = [inst.clone(), inst.reversed(), inst.swapped(), inst.swapped().reversed()];
    (0..nx * ny)
        .into_par_iter()
        .map(|k| {
            let a = Point::new(lo.x + (k % nx) as f64 * step, lo.y + (k / nx) as f64 * step);
            let v = variants
                .iter()
                .filter_map(|v| standard_lengths(v, a, &sums, tol))
                .fold(f64::INFINITY, f64::min);
            (v, a)
        })
        .reduce(|| (f64::INFINITY, Point::ORIGIN), |x, y| if y.0 < x.0 { y } else { x })
}

/// Oracle objective at a single intermediate placement; `None` when it is forbidden in every
/// relabeling.
pub fn oracle_value_at(inst: &Instance, a: Point, tol: &TolerancePolicy) -> Option<f64> {
    let body = inst.body();
    let sums = (
        SumBoundary::new(body.clone(), Point::ORIGIN),
        SumBoundary::new(body.transformed_linear(&RigidTransform::flip()), Point::ORIGIN),
    );
    let variants = [inst.clone(), inst.reversed(), inst.swapped(), inst.swapped().reversed()];
    let v = variants
        .iter()
        .filter_map(|v| standard_lengths(v, a, &sums, tol))
        .fold(f64::INFINITY, f64::min);
    v.is_finite().then_some(v)
}

/// Default margin: the reach of the sum body in its widest direction.
pub fn default_margin(inst: &Instance) -> f64 {
    let body = inst.body();
    body.core.iter().map(|v| v.norm()).fold(0.0, f64::max) + body.radius
}

/// Fills in a certificate for a planned result; `oracle` is `(step, value)` when available.
pub fn certify_plan(
    plan: &PlanResult,
    inst: &Instance,
    body: &RoundedPolygon,
    oracle: Option<(f64, f64)>,
    tol: &TolerancePolicy,
) -> CertificateReport {
    let claim = Claim {
        comotion: &plan.chosen.comotion,
        length: plan.chosen.length,
        lower_bound: plan.lower_bound_ccw.min(plan.lower_bound_cw),
    };
    certify_claim(&claim, inst, body, oracle, VALIDATION_SAMPLES, tol)
}

/// A co-motion together with the length it is claimed to have, e.g. as read back from a file.
#[derive(Debug, Clone, Copy)]
pub struct Claim<'a> {
    pub comotion: &'a CoMotion,
    pub length: f64,
    /// Smaller of the two directional lower bounds of the instance.
    pub lower_bound: f64,
}

impl<'a> Claim<'a> {
    /// Claim whose lower bound is recomputed from the instance.
    pub fn new(comotion: &'a CoMotion, length: f64, inst: &Instance, tol: &TolerancePolicy) -> Result<Self, PlanError> {
        let lb = lower_bound(inst, Turn::Ccw, tol)?.min(lower_bound(inst, Turn::Cw, tol)?);
        Ok(Claim {
            comotion,
            length,
            lower_bound: lb,
        })
    }
}

/// Certificate for an arbitrary claimed co-motion of `inst`, separation sampled at `samples` times.
pub fn certify_claim(
    claim: &Claim,
    inst: &Instance,
    body: &RoundedPolygon,
    oracle: Option<(f64, f64)>,
    samples: usize,
    tol: &TolerancePolicy,
) -> CertificateReport {
    let m = claim.comotion;
    let length = claim.length;
    let straight = inst.straight_length();
    let endpoints = inst.a0.dist(inst.b0) + inst.a1.dist(inst.b1);
    let lower_bound_gap = (length - claim.lower_bound).abs();
    let hulls = [Which::Top, Which::Bottom]
        .iter()
        .filter_map(|w| build_hull_region(inst, *w, tol).ok())
        .map(|h| h.perimeter)
        .fold(f64::INFINITY, f64::min);
    let hull_identity_residual = (length - (hulls - straight)).abs();
    let endpoint_variant_residual = (length - (hulls - endpoints)).abs();
    let trace = path_hull_perimeter(&m.path_a) + path_hull_perimeter(&m.path_b) - straight;
    let trace_hull_residual = (m.length() - trace).abs();
    let seg_ok = hull_identity_residual <= LENGTH_GAP_TOL;
    let end_ok = endpoint_variant_residual <= LENGTH_GAP_TOL;
    let subtraction_match = match (seg_ok, end_ok) {
        (true, true) => "both",
        (true, false) => "segments",
        (false, true) => "endpoints",
        (false, false) => "neither",
    }
    .to_string();
    let piece_sum = |p: &PointPath| p.pieces.iter().map(|x| x.length()).sum::<f64>();
    let length_residual = (length - piece_sum(&m.path_a) - piece_sum(&m.path_b))
        .abs()
        .max((m.path_a.length - piece_sum(&m.path_a)).abs())
        .max((m.path_b.length - piece_sum(&m.path_b)).abs());
    let (s, e) = (m.start(), m.end());
    let endpoint_residual = [s.0.dist(inst.a0), s.1.dist(inst.b0), e.0.dist(inst.a1), e.1.dist(inst.b1)]
        .into_iter()
        .chain(continuity_gaps(&m.path_a))
        .chain(continuity_gaps(&m.path_b))
        .fold(0.0, f64::max);
    let mut report = CertificateReport {
        lower_bound_gap,
        hull_identity_residual,
        trace_hull_residual,
        endpoint_variant_residual,
        subtraction_match,
        length_residual,
        endpoint_residual,
        oracle_gap: oracle.map(|(_, v)| v - length),
        oracle_step: oracle.map(|(h, _)| h),
        min_separation: min_separation(m, body, samples),
        piece_count_a: m.path_a.piece_count(),
        piece_count_b: m.path_b.piece_count(),
        pass: false,
    };
    report.pass = report.failures().is_empty();
    report
}

/// Jumps between consecutive pieces of a path.
fn continuity_gaps(p: &PointPath) -> Vec<f64> {
    let mut at = p.start;
    let mut out = Vec::new();
    for piece in &p.pieces {
        out.push(at.dist(piece.start()));
        at = piece.end();
    }
    out
}

pub fn certify(plan: &PlanResult, inst: &Instance, tol: &TolerancePolicy) -> CertificateReport {
    certify_plan(plan, inst, &inst.body(), None, tol)
}

/// Certificate including the grid oracle with the given step and margin.
pub fn certify_with_oracle(plan: &PlanResult, inst: &Instance, step: f64, margin: f64, tol: &TolerancePolicy) -> CertificateReport {
    let value = oracle_grid(inst, margin, step, tol);
    certify_plan(plan, inst, &inst.body(), Some((step, value)), tol)
}

/// Largest support mismatch, over `n` directions, between a hull region and the densely sampled
/// difference of the two traces.
pub fn sampled_trace_gap(plan: &PlanResult, region: &HullRegion, samples: usize, n: usize) -> f64 {
    let m = &plan.chosen.comotion;
    let pa: Vec<Point> = (0..=samples)
        .map(|i| m.path_a.point_at(m.path_a.length * i as f64 / samples as f64))
        .collect();
    let pb: Vec<Point> = (0..=samples)
        .map(|i| m.path_b.point_at(m.path_b.length * i as f64 / samples as f64))
        .collect();
    (0..n)
        .map(|i| {
            let a = std::f64::consts::TAU * i as f64 / n as f64;
            let u = Point::unit(a);
            let ra = pa.iter().map(|p| p.dot(u)).fold(f64::NEG_INFINITY, f64::max);
            let rb = pb.iter().map(|p| -p.dot(u)).fold(f64::NEG_INFINITY, f64::max);
            (ra + rb - region.reach(a)).abs()
        })
        .fold(0.0, f64::max)
}

/// The gate of `which` as an interval of directions.
pub fn region_range(inst: &Instance, which: Which, tol: &TolerancePolicy) -> Result<AngularInterval, PlanError> {
    swept_range(inst, &inst.body(), turn_of(which), tol)
}
