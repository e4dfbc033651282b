use ccs_duet::verify::{default_margin, oracle_grid, scene_diameter};
use ccs_duet::{plan, CaseLabel, CcsShape, Instance, Point, TolerancePolicy};

fn p(x: f64, y: f64) -> Point {
    Point::new(x, y)
}

fn discs(a0: Point, b0: Point, a1: Point, b1: Point) -> Instance {
    Instance::new(CcsShape::disc(1.0), CcsShape::disc(1.0), a0, b0, a1, b1)
}

#[test]
fn disc_swap_matches_the_oracle() {
    let tol = TolerancePolicy::default();
    let inst = discs(p(-2.0, 0.0), p(2.0, 0.0), p(2.0, 0.0), p(-2.0, 0.0));
    let r = plan(&inst, &tol).unwrap();
    assert!(r.certificate.pass, "{:?}", r.certificate.failures());
    assert!(r.length() > inst.straight_length());
    let step = 0.01 * scene_diameter(&inst);
    let oracle = oracle_grid(&inst, default_margin(&inst), step, &tol);
    assert!(oracle >= r.length() - 1e-6);
    assert!(oracle - r.length() < 1e-2, "planner {} oracle {oracle}", r.length());
}

#[test]
fn free_lanes_go_straight() {
    let tol = TolerancePolicy::default();
    let inst = discs(p(0.0, 0.0), p(0.0, 5.0), p(10.0, 0.0), p(10.0, 5.0));
    let r = plan(&inst, &tol).unwrap();
    assert_eq!(r.case, CaseLabel::Straight);
    assert!((r.length() - 20.0).abs() < 1e-12);
}

#[test]
fn nothing_to_do() {
    let tol = TolerancePolicy::default();
    let inst = discs(p(0.0, 0.0), p(3.0, 0.0), p(0.0, 0.0), p(3.0, 0.0));
    let r = plan(&inst, &tol).unwrap();
    assert_eq!(r.length(), 0.0);
    assert!(r.certificate.pass);
}

#[test]
fn one_robot_stays_put() {
    let tol = TolerancePolicy::default();
    // B sits on A's straight route and does not need to move.
    let inst = discs(p(-4.0, 0.0), p(0.0, 0.0), p(4.0, 0.0), p(0.0, 0.0));
    let r = plan(&inst, &tol).unwrap();
    assert!(r.certificate.pass, "{:?}", r.certificate.failures());
    assert!(r.length() >= 8.0);
    // Detouring around a fixed B costs at most the walk over half the sum.
    let around = 2.0 * 12f64.sqrt() + 2.0 * std::f64::consts::PI / 3.0;
    assert!(r.length() <= around + 1e-9, "{}", r.length());
}

#[test]
fn overlapping_ends_are_rejected() {
    let tol = TolerancePolicy::default();
    let inst = discs(p(0.0, 0.0), p(1.0, 0.0), p(5.0, 0.0), p(9.0, 0.0));
    assert!(matches!(plan(&inst, &tol), Err(ccs_duet::PlanError::NonViable { which: "initial", .. })));
}

#[test]
fn square_and_disc_swap_is_certified() {
    let tol = TolerancePolicy::default();
    let inst = Instance::new(CcsShape::rect(1.0, 0.5), CcsShape::disc(0.7), p(-3.0, 0.2), p(3.0, -0.1), p(3.0, 0.0), p(-3.0, 0.3));
    let r = plan(&inst, &tol).unwrap();
    assert!(r.certificate.pass, "{:?}", r.certificate.failures());
    assert!(r.certificate.piece_count_a <= 6 && r.certificate.piece_count_b <= 6);
    let flipped = plan(&inst.flipped(), &tol).unwrap();
    assert!((flipped.length() - r.length()).abs() < 1e-9);
}
