//! Optimal co-motion planning for a pair of robots.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::envelope::{self, CosTerm};
use crate::geom::{AngularInterval, Point, RigidTransform, TolerancePolicy};
use crate::motion::{net_rotation, CoMotion, Robot};
use crate::pathfind::{
    arrival_curve, chain_intersections, composite_upper_tangent, departure_curve, in_corridor, shortest_path_around,
    tangents_from_point, PathError, PointPath, Side,
};
use crate::shape::{sum_body, CcsShape, RoundedPolygon, ShapeError, SumBoundary, Turn, WalkElement};
use crate::verify::{certify_plan, CertificateReport};

#[derive(Debug, Error, PartialEq)]
pub enum PlanError {
    #[error("robot {which}: {source}")]
    Shape {
        which: char,
        #[source]
        source: ShapeError,
    },
    #[error("{which} configuration is not viable: separation {separation:.6e} < 0")]
    NonViable { which: &'static str, separation: f64 },
    #[error("no relabelling brings the instance into normal form")]
    Normalization,
    #[error("intermediate placement ({0}, {1}) is inside a forbidden region")]
    BadIntermediate(f64, f64),
    #[error("tangent lines are parallel")]
    ParallelTangents,
    #[error("no convex candidate was found")]
    NoConvexCandidate,
    #[error(transparent)]
    Path(#[from] PathError),
}

/// Two robots with start and goal positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub shape_a: CcsShape,
    pub shape_b: CcsShape,
    pub a0: Point,
    pub b0: Point,
    pub a1: Point,
    pub b1: Point,
}

impl Instance {
    pub fn new(shape_a: CcsShape, shape_b: CcsShape, a0: Point, b0: Point, a1: Point, b1: Point) -> Self {
        Instance {
            shape_a,
            shape_b,
            a0,
            b0,
            a1,
            b1,
        }
    }

    /// The sum A+B about the origin.
    pub fn body(&self) -> RoundedPolygon {
        sum_body(&self.shape_a, &self.shape_b, &TolerancePolicy::default())
    }

    /// Checks both bodies and both end configurations; returns the sum body.
    pub fn validate(&self, tol: &TolerancePolicy) -> Result<RoundedPolygon, PlanError> {
        self.shape_a
            .validate(tol)
            .map_err(|source| PlanError::Shape { which: 'A', source })?;
        self.shape_b
            .validate(tol)
            .map_err(|source| PlanError::Shape { which: 'B', source })?;
        for p in [self.a0, self.b0, self.a1, self.b1] {
            if !p.is_finite() {
                return Err(PlanError::Shape {
                    which: '?',
                    source: ShapeError::NonFinite(0),
                });
            }
        }
        let body = sum_body(&self.shape_a, &self.shape_b, tol);
        for (which, a, b) in [("initial", self.a0, self.b0), ("goal", self.a1, self.b1)] {
            let separation = body.signed_distance(a - b);
            if separation < -tol.eps_length {
                return Err(PlanError::NonViable { which, separation });
            }
        }
        Ok(body)
    }

    pub fn transformed(&self, t: &RigidTransform) -> Instance {
        Instance {
            shape_a: self.shape_a.transformed_linear(t),
            shape_b: self.shape_b.transformed_linear(t),
            a0: t.apply(self.a0),
            b0: t.apply(self.b0),
            a1: t.apply(self.a1),
            b1: t.apply(self.b1),
        }
    }

    /// Mirror image across the x-axis.
    pub fn flipped(&self) -> Instance {
        self.transformed(&RigidTransform::flip())
    }

    /// Start and goal exchanged.
    pub fn reversed(&self) -> Instance {
        Instance {
            a0: self.a1,
            a1: self.a0,
            b0: self.b1,
            b1: self.b0,
            ..self.clone()
        }
    }

    /// Robots exchanged.
    pub fn swapped(&self) -> Instance {
        Instance {
            shape_a: self.shape_b.clone(),
            shape_b: self.shape_a.clone(),
            a0: self.b0,
            a1: self.b1,
            b0: self.a0,
            b1: self.a1,
        }
    }

    pub fn straight_length(&self) -> f64 {
        self.a0.dist(self.a1) + self.b0.dist(self.b1)
    }

    pub fn points(&self) -> [Point; 4] {
        [self.a0, self.b0, self.a1, self.b1]
    }
}

/// How a normalized instance relates to the original one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformRecord {
    /// Maps the relabelled original onto the normalized instance.
    pub transform: RigidTransform,
    pub swap_roles: bool,
    pub reverse: bool,
    pub flip: bool,
}

impl TransformRecord {
    pub fn identity() -> Self {
        TransformRecord {
            transform: RigidTransform::identity(),
            swap_roles: false,
            reverse: false,
            flip: false,
        }
    }

    /// Carries a co-motion of the normalized instance back to the original instance.
    pub fn denormalize(&self, m: &CoMotion) -> CoMotion {
        let mut out = m.transformed(&self.transform.inverse());
        if self.swap_roles {
            out = out.swapped();
        }
        if self.reverse {
            out = out.reversed();
        }
        out
    }

    pub fn denormalize_turn(&self, t: Turn) -> Turn {
        if self.reverse != self.flip {
            t.opposite()
        } else {
            t
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedInstance {
    pub instance: Instance,
    pub record: TransformRecord,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CaseLabel {
    Straight,
    B0InAcorrAbove,
    B0InAcorrBelow,
    B0InAcorrMiddle,
    A1AboveBoth,
    A1BelowBoth,
    A1LeftOfBoth,
    A1RightOfBoth,
    A1BetweenXTangents,
    A1BelowXTangents,
    DegenerateFixedB,
    DegenerateFixedA,
    DegenerateNoop,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 13] = [
        CaseLabel::Straight,
        CaseLabel::B0InAcorrAbove,
        CaseLabel::B0InAcorrBelow,
        CaseLabel::B0InAcorrMiddle,
        CaseLabel::A1AboveBoth,
        CaseLabel::A1BelowBoth,
        CaseLabel::A1LeftOfBoth,
        CaseLabel::A1RightOfBoth,
        CaseLabel::A1BetweenXTangents,
        CaseLabel::A1BelowXTangents,
        CaseLabel::DegenerateFixedB,
        CaseLabel::DegenerateFixedA,
        CaseLabel::DegenerateNoop,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseLabel::Straight => "STRAIGHT",
            CaseLabel::B0InAcorrAbove => "B0_IN_ACORR_ABOVE",
            CaseLabel::B0InAcorrBelow => "B0_IN_ACORR_BELOW",
            CaseLabel::B0InAcorrMiddle => "B0_IN_ACORR_MIDDLE",
            CaseLabel::A1AboveBoth => "A1_ABOVE_BOTH",
            CaseLabel::A1BelowBoth => "A1_BELOW_BOTH",
            CaseLabel::A1LeftOfBoth => "A1_LEFT_OF_BOTH",
            CaseLabel::A1RightOfBoth => "A1_RIGHT_OF_BOTH",
            CaseLabel::A1BetweenXTangents => "A1_BETWEEN_X_TANGENTS",
            CaseLabel::A1BelowXTangents => "A1_BELOW_X_TANGENTS",
            CaseLabel::DegenerateFixedB => "DEGENERATE_FIXED_B",
            CaseLabel::DegenerateFixedA => "DEGENERATE_FIXED_A",
            CaseLabel::DegenerateNoop => "DEGENERATE_NOOP",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub comotion: CoMotion,
    /// Intermediate placement of the robot that moves first and last.
    pub a_int: Point,
    pub direction: Turn,
    pub convex: bool,
    pub length: f64,
}

impl Candidate {
    fn transformed(&self, t: &RigidTransform) -> Candidate {
        Candidate {
            comotion: self.comotion.transformed(t),
            a_int: t.apply(self.a_int),
            direction: if t.flipped {
                self.direction.opposite()
            } else {
                self.direction
            },
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanResult {
    pub chosen: Candidate,
    pub case: CaseLabel,
    pub lower_bound_ccw: f64,
    pub lower_bound_cw: f64,
    pub record: TransformRecord,
    /// Lengths of the case-table candidates that were dropped for not being convex.
    pub rejected_nonconvex: Vec<f64>,
    pub certificate: CertificateReport,
}

impl PlanResult {
    pub fn length(&self) -> f64 {
        self.chosen.length
    }
}

fn corridor_template(body: &RoundedPolygon) -> SumBoundary {
    SumBoundary::new(body.clone(), Point::ORIGIN)
}

/// Straight-line co-motion (one robot after the other) when one of the two orders is free.
pub fn check_straight_line(inst: &Instance, tol: &TolerancePolicy) -> Option<Candidate> {
    let body = inst.body();
    let tpl = corridor_template(&body);
    let a_free_of_b = |p: Point| !in_corridor(p, inst.b0, inst.b1, &tpl, tol);
    let b_free_of_a = |p: Point| !in_corridor(p, inst.a0, inst.a1, &tpl, tol);
    let seg = |p: Point, q: Point| PointPath::from_pieces(p, vec![crate::pathfind::PathPiece::Segment { from: p, to: q }]);
    let pa = seg(inst.a0, inst.a1);
    let pb = seg(inst.b0, inst.b1);
    let (phases, a_int) = if a_free_of_b(inst.a0) && b_free_of_a(inst.b1) {
        (vec![(Robot::B, pb), (Robot::A, pa)], inst.a0)
    } else if a_free_of_b(inst.a1) && b_free_of_a(inst.b0) {
        (vec![(Robot::A, pa), (Robot::B, pb)], inst.a1)
    } else {
        return None;
    };
    let comotion = CoMotion::decoupled(inst.a0, inst.b0, &phases);
    Some(Candidate {
        length: comotion.length(),
        comotion,
        a_int,
        direction: Turn::Ccw,
        convex: true,
    })
}

/// Relabels, translates and rotates so that B moves along the positive x-axis from the origin
/// and the corridor conditions of the normal form hold.
pub fn normalize(inst: &Instance, tol: &TolerancePolicy) -> Result<NormalizedInstance, PlanError> {
    let body = inst.body();
    let tpl = corridor_template(&body);
    for (reverse, swap_roles) in [(false, false), (true, false), (false, true), (true, true)] {
        let mut cand = inst.clone();
        if reverse {
            cand = cand.reversed();
        }
        if swap_roles {
            cand = cand.swapped();
        }
        let a0_in = in_corridor(cand.a0, cand.b0, cand.b1, &tpl, tol);
        let a1_in = in_corridor(cand.a1, cand.b0, cand.b1, &tpl, tol);
        let b0_in = in_corridor(cand.b0, cand.a0, cand.a1, &tpl, tol);
        if a0_in && (a1_in || b0_in) {
            let d = cand.b1 - cand.b0;
            let rot = if d.norm() > 0.0 { -d.angle() } else { 0.0 };
            let transform = RigidTransform::rotation(rot).compose(&RigidTransform::translation(-cand.b0));
            let mut instance = cand.transformed(&transform);
            // Remove rounding noise from the normal-form coordinates.
            instance.b0 = Point::ORIGIN;
            instance.b1 = Point::new(d.norm(), 0.0);
            return Ok(NormalizedInstance {
                instance,
                record: TransformRecord {
                    transform,
                    swap_roles,
                    reverse,
                    flip: false,
                },
            });
        }
    }
    Err(PlanError::Normalization)
}

fn boundaries(inst: &Instance) -> (SumBoundary, SumBoundary) {
    let body = inst.body();
    (SumBoundary::new(body.clone(), inst.b0), SumBoundary::new(body, inst.b1))
}

/// Which of the case families the normalized instance falls in.
pub fn classify(n: &NormalizedInstance, tol: &TolerancePolicy) -> Result<CaseLabel, PlanError> {
    let inst = &n.instance;
    let body = inst.body();
    let tpl = corridor_template(&body);
    let (s0, s1) = boundaries(inst);
    let w = inst.a1 - inst.a0;
    let a0_inside_s1 = s1.signed_distance(inst.a0) < -tol.eps_length;
    if !in_corridor(inst.a1, inst.b0, inst.b1, &tpl, tol) {
        let top = inst.b0.y + body.reach(std::f64::consts::FRAC_PI_2);
        if inst.a1.y > top + tol.eps_length {
            return Ok(CaseLabel::B0InAcorrAbove);
        }
        let dir = if a0_inside_s1 {
            let c = composite_upper_tangent(inst.a0, &s0, &s1, tol)?;
            c.touch - c.through
        } else {
            tangents_from_point(inst.a0, &s1, tol)?.1.touch - inst.a0
        };
        return Ok(if dir.cross(w) < -tol.eps_length {
            CaseLabel::B0InAcorrBelow
        } else {
            CaseLabel::B0InAcorrMiddle
        });
    }
    let d0 = tangents_from_point(inst.a0, &s0, tol)?.0.touch - inst.a0;
    if a0_inside_s1 {
        return Ok(if d0.cross(w) > 0.0 {
            CaseLabel::A1BetweenXTangents
        } else {
            CaseLabel::A1BelowXTangents
        });
    }
    let e0 = tangents_from_point(inst.a0, &s1, tol)?.1.touch - inst.a0;
    let ca = e0.cross(w);
    let cd = d0.cross(w);
    Ok(if ca > 0.0 && cd < 0.0 {
        CaseLabel::A1AboveBoth
    } else if ca < 0.0 && cd > 0.0 {
        CaseLabel::A1BelowBoth
    } else if ca > 0.0 && cd > 0.0 {
        CaseLabel::A1LeftOfBoth
    } else {
        CaseLabel::A1RightOfBoth
    })
}

fn line_intersection(p: Point, dp: Point, q: Point, dq: Point, tol: &TolerancePolicy) -> Result<Point, PlanError> {
    let den = dp.cross(dq);
    if den.abs() <= tol.eps_angle * dp.norm() * dq.norm() {
        return Err(PlanError::ParallelTangents);
    }
    Ok(p + dp * ((q - p).cross(dq) / den))
}

/// Intermediate placement prescribed for each case.
pub fn select_a_int(case: CaseLabel, n: &NormalizedInstance, tol: &TolerancePolicy) -> Result<Point, PlanError> {
    let inst = &n.instance;
    let (s0, s1) = boundaries(inst);
    match case {
        CaseLabel::B0InAcorrAbove | CaseLabel::A1AboveBoth | CaseLabel::Straight => Ok(inst.a1),
        CaseLabel::B0InAcorrBelow | CaseLabel::A1BelowBoth | CaseLabel::A1BelowXTangents => Ok(inst.a0),
        CaseLabel::B0InAcorrMiddle | CaseLabel::A1LeftOfBoth => {
            let dep = tangents_from_point(inst.a0, &s0, tol)?.0;
            let arr = tangents_from_point(inst.a1, &s1, tol)?.1;
            line_intersection(dep.through, dep.touch - dep.through, arr.through, arr.touch - arr.through, tol)
        }
        CaseLabel::A1RightOfBoth => {
            let dep = tangents_from_point(inst.a1, &s0, tol)?.0;
            let arr = tangents_from_point(inst.a0, &s1, tol)?.1;
            line_intersection(dep.through, dep.touch - dep.through, arr.through, arr.touch - arr.through, tol)
        }
        CaseLabel::A1BetweenXTangents => Ok(composite_upper_tangent(inst.a0, &s0, &s1, tol)?.touch),
        CaseLabel::DegenerateFixedB | CaseLabel::DegenerateFixedA | CaseLabel::DegenerateNoop => Ok(inst.a1),
    }
}

/// Points where the tangent-and-boundary curves out of the start and into the goal meet;
/// the optimal intermediate placement is always among them.
pub fn critical_points(inst: &Instance, tol: &TolerancePolicy) -> Vec<Point> {
    let (s0, s1) = boundaries(inst);
    let mut out = vec![inst.a1, inst.a0];
    let outside = |p: Point, s: &SumBoundary| s.signed_distance(p) >= -tol.eps_length;
    if outside(inst.a0, &s0) && outside(inst.a1, &s1) {
        out.extend(chain_intersections(&departure_curve(inst.a0, &s0), &arrival_curve(inst.a1, &s1)));
    }
    if outside(inst.a1, &s0) && outside(inst.a0, &s1) {
        out.extend(chain_intersections(&departure_curve(inst.a1, &s0), &arrival_curve(inst.a0, &s1)));
    }
    out
}

/// Support terms of the convex hull of a chain of segments and arcs.
pub fn chain_support_terms(elements: &[WalkElement]) -> Vec<CosTerm> {
    let mut terms = Vec::new();
    for e in elements {
        terms.push(CosTerm::point(e.start_point()));
        terms.push(CosTerm::point(e.end_point()));
        if let WalkElement::Arc {
            center,
            radius,
            start,
            sweep,
        } = *e
        {
            if radius > 0.0 && sweep != 0.0 {
                let gate = if sweep > 0.0 {
                    AngularInterval::from_width(start, sweep)
                } else {
                    AngularInterval::from_width(start + sweep, -sweep)
                };
                terms.push(CosTerm::arc(center, radius, gate));
            }
        }
    }
    terms
}

pub fn path_support_terms(path: &PointPath) -> Vec<CosTerm> {
    let mut terms = chain_support_terms(&path.elements());
    if terms.is_empty() {
        terms.push(CosTerm::point(path.start));
    }
    terms
}

/// Perimeter of the convex hull of a path.
pub fn path_hull_perimeter(path: &PointPath) -> f64 {
    envelope::integrate(&path_support_terms(path))
}

/// A path is convex when it and its chord bound a convex region.
pub fn is_convex_path(path: &PointPath, tol: &TolerancePolicy) -> bool {
    let chord = path.start.dist(path.end());
    path_hull_perimeter(path) >= path.length + chord - tol.eps_length * (1.0 + path.length)
}

/// Three-phase co-motion through `a_int`, every phase passing its obstacle counter-clockwise.
pub fn build_standard(inst: &Instance, a_int: Point, tol: &TolerancePolicy) -> Result<Candidate, PlanError> {
    let body = inst.body();
    let s0 = SumBoundary::new(body.clone(), inst.b0);
    let s1 = SumBoundary::new(body.clone(), inst.b1);
    let sa = SumBoundary::new(body, a_int);
    if s0.signed_distance(a_int) < -tol.eps_length || s1.signed_distance(a_int) < -tol.eps_length {
        return Err(PlanError::BadIntermediate(a_int.x, a_int.y));
    }
    let p1 = shortest_path_around(inst.a0, a_int, &s0, Side::Ccw, tol)?;
    let p2 = shortest_path_around(inst.b0, inst.b1, &sa, Side::Ccw, tol)?;
    let p3 = shortest_path_around(a_int, inst.a1, &s1, Side::Ccw, tol)?;
    let convex = is_convex_path(&p1.then(&p3), tol);
    let comotion = CoMotion::decoupled(inst.a0, inst.b0, &[(Robot::A, p1), (Robot::B, p2), (Robot::A, p3)]);
    Ok(Candidate {
        length: comotion.length(),
        comotion,
        a_int,
        direction: Turn::Ccw,
        convex,
    })
}

/// Normal cones of the sum body at the start and goal relative positions.
pub fn end_orientations(
    inst: &Instance,
    body: &RoundedPolygon,
    tol: &TolerancePolicy,
) -> Result<(AngularInterval, AngularInterval), PlanError> {
    let loose = TolerancePolicy {
        eps_length: tol.eps_length.max(1e-9),
        ..*tol
    };
    let o0 = body
        .orientation(inst.a0 - inst.b0, &loose)
        .map_err(|_| PlanError::NonViable {
            which: "initial",
            separation: body.signed_distance(inst.a0 - inst.b0),
        })?;
    let o1 = body
        .orientation(inst.a1 - inst.b1, &loose)
        .map_err(|_| PlanError::NonViable {
            which: "goal",
            separation: body.signed_distance(inst.a1 - inst.b1),
        })?;
    Ok((o0, o1))
}

/// Directions a co-motion of the given sense must sweep through.
pub fn swept_range(inst: &Instance, body: &RoundedPolygon, dir: Turn, tol: &TolerancePolicy) -> Result<AngularInterval, PlanError> {
    let (o0, o1) = end_orientations(inst, body, tol)?;
    if o0.contains_eps(o1.start, tol.eps_angle) || o1.contains_eps(o0.start, tol.eps_angle) {
        // Some orientation is shared by both ends, so a motion need not turn at all.
        return Ok(AngularInterval { start: o0.end(), width: 0.0 });
    }
    Ok(match dir {
        Turn::Ccw => AngularInterval::new(o0.end(), o1.start),
        Turn::Cw => AngularInterval::new(o1.end(), o0.start),
    })
}

/// Support terms of the lower-bound integrand: the four difference points, and the sum body
/// restricted to the swept range.
pub fn lower_bound_terms(inst: &Instance, body: &RoundedPolygon, dir: Turn, tol: &TolerancePolicy) -> Result<Vec<CosTerm>, PlanError> {
    let range = swept_range(inst, body, dir, tol)?;
    let mut terms: Vec<CosTerm> = [inst.a0 - inst.b0, inst.a0 - inst.b1, inst.a1 - inst.b0, inst.a1 - inst.b1]
        .into_iter()
        .map(CosTerm::point)
        .collect();
    for k in 0..body.n() {
        for gate in body.vertex_cone(k).intersect(&range) {
            if gate.width > 0.0 {
                terms.push(CosTerm::arc(body.vertex(k), body.radius, gate));
            }
        }
    }
    Ok(terms)
}

/// No co-motion of the given sense is shorter than this.
pub fn lower_bound(inst: &Instance, dir: Turn, tol: &TolerancePolicy) -> Result<f64, PlanError> {
    let body = inst.body();
    let terms = lower_bound_terms(inst, &body, dir, tol)?;
    Ok(envelope::integrate(&terms) - inst.straight_length())
}

fn better(new: &Candidate, best: &Option<Candidate>) -> bool {
    match best {
        None => true,
        Some(b) => new.length < b.length - 1e-12,
    }
}

/// Best convex standard-form candidate of a normalized (possibly mirrored) instance, plus the
/// lengths of case-table candidates rejected for non-convexity.
fn best_ccw(inst: &Instance, case_point: Option<Point>, tol: &TolerancePolicy) -> (Option<Candidate>, Vec<f64>) {
    let mut best: Option<Candidate> = None;
    let mut rejected = Vec::new();
    if let Some(p) = case_point {
        if let Ok(c) = build_standard(inst, p, tol) {
            if c.convex {
                best = Some(c);
            } else {
                rejected.push(c.length);
            }
        }
    }
    for p in critical_points(inst, tol) {
        if let Ok(c) = build_standard(inst, p, tol) {
            if c.convex && better(&c, &best) {
                best = Some(c);
            }
        }
    }
    (best, rejected)
}

fn fixed_obstacle(inst: &Instance, mover: Robot, tol: &TolerancePolicy) -> Result<Candidate, PlanError> {
    let body = inst.body();
    let (from, to, obstacle) = match mover {
        Robot::A => (inst.a0, inst.a1, inst.b0),
        Robot::B => (inst.b0, inst.b1, inst.a0),
    };
    let s = SumBoundary::new(body, obstacle);
    let ccw = shortest_path_around(from, to, &s, Side::Ccw, tol)?;
    let cw = shortest_path_around(from, to, &s, Side::Cw, tol)?;
    let (path, direction) = if cw.length < ccw.length - tol.eps_length {
        (cw, Turn::Cw)
    } else {
        (ccw, Turn::Ccw)
    };
    let comotion = CoMotion::decoupled(inst.a0, inst.b0, &[(mover, path)]);
    Ok(Candidate {
        length: comotion.length(),
        comotion,
        a_int: match mover {
            Robot::A => inst.a1,
            Robot::B => inst.a0,
        },
        direction,
        convex: true,
    })
}

/// A straight co-motion meets the smaller of the two bounds; with equal bounds, its own sense
/// of rotation decides.
fn straight_direction(c: &Candidate, body: &RoundedPolygon, lb_ccw: f64, lb_cw: f64, tol: &TolerancePolicy) -> Turn {
    if lb_cw < lb_ccw - LB_TIE {
        Turn::Cw
    } else if lb_ccw < lb_cw - LB_TIE {
        Turn::Ccw
    } else if net_rotation(&c.comotion, body, 2000, tol) < 0.0 {
        Turn::Cw
    } else {
        Turn::Ccw
    }
}

const LB_TIE: f64 = 1e-9;

/// Plans a shortest collision-free co-motion.
pub fn plan(inst: &Instance, tol: &TolerancePolicy) -> Result<PlanResult, PlanError> {
    let body = inst.validate(tol)?;
    let lower_bound_ccw = lower_bound(inst, Turn::Ccw, tol)?;
    let lower_bound_cw = lower_bound(inst, Turn::Cw, tol)?;
    let (mut chosen, case, record, rejected) = plan_inner(inst, tol)?;
    if matches!(case, CaseLabel::Straight | CaseLabel::DegenerateNoop) {
        chosen.direction = straight_direction(&chosen, &body, lower_bound_ccw, lower_bound_cw, tol);
    }
    let mut result = PlanResult {
        chosen,
        case,
        lower_bound_ccw,
        lower_bound_cw,
        record,
        rejected_nonconvex: rejected,
        certificate: CertificateReport::default(),
    };
    result.certificate = certify_plan(&result, inst, &body, None, tol);
    Ok(result)
}

type Inner = (Candidate, CaseLabel, TransformRecord, Vec<f64>);

fn plan_inner(inst: &Instance, tol: &TolerancePolicy) -> Result<Inner, PlanError> {
    let same = |p: Point, q: Point| p.dist(q) <= tol.eps_length;
    let id = TransformRecord::identity();
    if same(inst.a0, inst.a1) && same(inst.b0, inst.b1) {
        let c = check_straight_line(inst, tol).expect("a motionless instance is always straight");
        return Ok((c, CaseLabel::DegenerateNoop, id, Vec::new()));
    }
    if let Some(c) = check_straight_line(inst, tol) {
        return Ok((c, CaseLabel::Straight, id, Vec::new()));
    }
    if same(inst.b0, inst.b1) {
        return Ok((fixed_obstacle(inst, Robot::A, tol)?, CaseLabel::DegenerateFixedB, id, Vec::new()));
    }
    if same(inst.a0, inst.a1) {
        return Ok((fixed_obstacle(inst, Robot::B, tol)?, CaseLabel::DegenerateFixedA, id, Vec::new()));
    }
    let n = normalize(inst, tol)?;
    let case = classify(&n, tol)?;
    let case_point = select_a_int(case, &n, tol).ok();
    let (ccw, mut rejected) = best_ccw(&n.instance, case_point, tol);

    let flip = RigidTransform::flip();
    let nf = NormalizedInstance {
        instance: n.instance.flipped(),
        record: n.record,
    };
    let case_f = classify(&nf, tol)?;
    let case_point_f = select_a_int(case_f, &nf, tol).ok();
    let (cw, rejected_f) = best_ccw(&nf.instance, case_point_f, tol);
    rejected.extend(rejected_f);
    let cw = cw.map(|c| c.transformed(&flip));

    let chosen = match (ccw, cw) {
        (Some(a), Some(b)) => {
            if b.length < a.length - 1e-9 {
                b
            } else {
                a
            }
        }
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (None, None) => return Err(PlanError::NoConvexCandidate),
    };
    let record = n.record;
    let out = Candidate {
        comotion: record.denormalize(&chosen.comotion),
        a_int: record.transform.inverse().apply(chosen.a_int),
        direction: record.denormalize_turn(chosen.direction),
        convex: chosen.convex,
        length: chosen.length,
    };
    Ok((out, case, record, rejected))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn discs(a0: (f64, f64), b0: (f64, f64), a1: (f64, f64), b1: (f64, f64)) -> Instance {
        let p = |q: (f64, f64)| Point::new(q.0, q.1);
        Instance::new(CcsShape::disc(1.0), CcsShape::disc(1.0), p(a0), p(b0), p(a1), p(b1))
    }

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn straight_examples() {
        let inst = discs((0.0, 5.0), (0.0, 0.0), (10.0, 5.0), (10.0, 0.0));
        let c = check_straight_line(&inst, &tol()).unwrap();
        assert_eq!(c.length, 20.0);
        assert!(check_straight_line(&discs((0.0, 1.0), (0.0, 0.0), (10.0, 1.0), (10.0, 0.0)), &tol()).is_none());
        let still = discs((0.0, 3.0), (0.0, 0.0), (0.0, 3.0), (0.0, 0.0));
        assert_eq!(check_straight_line(&still, &tol()).unwrap().length, 0.0);
        let r = plan(&inst, &tol()).unwrap();
        assert_eq!(r.case, CaseLabel::Straight);
        assert_eq!(r.length(), 20.0);
        assert!((r.lower_bound_ccw.min(r.lower_bound_cw) - 20.0).abs() < 1e-9);
    }

    #[test]
    fn motionless_lower_bounds_are_nonnegative() {
        let still = discs((0.0, 3.0), (0.0, 0.0), (0.0, 3.0), (0.0, 0.0));
        let lc = lower_bound(&still, Turn::Ccw, &tol()).unwrap();
        let lw = lower_bound(&still, Turn::Cw, &tol()).unwrap();
        assert!(lc.abs() < 1e-12);
        assert!(lw >= 0.0);
        assert_eq!(plan(&still, &tol()).unwrap().case, CaseLabel::DegenerateNoop);
    }

    #[test]
    fn normalize_vertical_instance() {
        let inst = discs((1.0, 5.0), (0.0, 0.0), (-1.0, 5.0), (0.0, 10.0));
        let n = normalize(&inst, &tol()).unwrap();
        assert!(!n.record.swap_roles && !n.record.reverse);
        assert!((n.record.transform.rotation + PI / 2.0).abs() < 1e-12);
        assert_eq!(n.instance.b1, Point::new(10.0, 0.0));
    }

    #[test]
    fn normalize_identity_when_already_normal() {
        let inst = discs((1.0, 1.5), (0.0, 0.0), (5.0, -1.5), (6.0, 0.0));
        let n = normalize(&inst, &tol()).unwrap();
        assert!(!n.record.swap_roles && !n.record.reverse);
        assert_eq!(n.record.transform.apply(Point::new(3.0, 4.0)), Point::new(3.0, 4.0));
        assert_eq!(n.instance, inst);
    }

    #[test]
    fn normalize_swaps_roles_when_needed() {
        // Both B positions lie in A's corridor, neither A position in B's.
        let inst = discs((0.0, 0.0), (3.0, 1.0), (10.0, 0.0), (7.0, -1.0));
        assert!(check_straight_line(&inst, &tol()).is_none());
        let n = normalize(&inst, &tol()).unwrap();
        assert!(n.record.swap_roles);
        let body = n.instance.body();
        let tpl = corridor_template(&body);
        let i = &n.instance;
        assert!(in_corridor(i.a0, i.b0, i.b1, &tpl, &tol()));
        assert!(in_corridor(i.a1, i.b0, i.b1, &tpl, &tol()) || in_corridor(i.b0, i.a0, i.a1, &tpl, &tol()));
    }

    #[test]
    fn fixed_b_goes_around() {
        let inst = discs((-3.0, 0.0), (0.0, 0.0), (3.0, 0.0), (0.0, 0.0));
        let r = plan(&inst, &tol()).unwrap();
        assert_eq!(r.case, CaseLabel::DegenerateFixedB);
        let expect = 2.0 * 5.0_f64.sqrt() + 2.0 * (PI - 2.0 * (2.0_f64 / 3.0).acos());
        assert!((r.length() - expect).abs() < 1e-9, "{} vs {}", r.length(), expect);
    }

    #[test]
    fn left_case_intersection_lies_on_both_tangents() {
        let inst = discs((1.0, 2.5), (0.0, 0.0), (-1.0, 1.2), (6.0, 0.0));
        let n = NormalizedInstance {
            instance: inst,
            record: TransformRecord::identity(),
        };
        let p = select_a_int(CaseLabel::A1LeftOfBoth, &n, &tol()).unwrap();
        let (s0, s1) = boundaries(&n.instance);
        let dep = tangents_from_point(n.instance.a0, &s0, &tol()).unwrap().0;
        let arr = tangents_from_point(n.instance.a1, &s1, &tol()).unwrap().1;
        let off = |l: &crate::pathfind::TangentLine| (l.touch - l.through).normalized().cross(p - l.through).abs();
        assert!(off(&dep) < 1e-9 && off(&arr) < 1e-9);
    }

    #[test]
    fn disc_swap_matches_bound() {
        let inst = discs((0.0, 0.0), (3.0, 0.0), (3.0, 0.0), (0.0, 0.0));
        let r = plan(&inst, &tol()).unwrap();
        let lb = r.lower_bound_ccw.min(r.lower_bound_cw);
        assert!((r.length() - lb).abs() < 1e-6, "{} vs {}", r.length(), lb);
    }
}
