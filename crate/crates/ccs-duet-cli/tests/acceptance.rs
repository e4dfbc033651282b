//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and exits nonzero if
//! any criterion fails.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use ccs_duet::geom::envelope::CosTerm;
use ccs_duet::motion::{contact_components, make_contact_preserving, make_orientation_monotone, min_separation, orientation_profile};
use ccs_duet::pathfind::tangents_from_point;
use ccs_duet::samples::{random_instance, random_shapes, separated_lanes, Kind, ShapeMix};
use ccs_duet::shape::{sum_body, SumBoundary};
use ccs_duet::verify::{cauchy_quadrature, default_margin, oracle_grid, scene_diameter};
use ccs_duet::{plan, Angle, AngularInterval, CaseLabel, Instance, PlanResult, Point, RigidTransform, TolerancePolicy};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde_json::Value;

const CORPUS: usize = 600;
const SAMPLES: usize = 10_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

struct Planned {
    inst: Instance,
    plan: PlanResult,
}

fn corpus(tol: &TolerancePolicy) -> (Vec<Planned>, Duration) {
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    let insts: Vec<Instance> = (0..CORPUS)
        .map(|i| {
            let kind = if i % 5 == 0 { Kind::Any } else { Kind::Blocked };
            random_instance(&mut rng, ShapeMix::ALL[i % 3], kind)
        })
        .collect();
    let start = Instant::now();
    let planned = insts
        .into_par_iter()
        .map(|inst| {
            let plan = plan(&inst, tol).expect("viable instance plans");
            Planned { inst, plan }
        })
        .collect();
    (planned, start.elapsed())
}

fn tightness(c: &[Planned], elapsed: Duration) -> Outcome {
    let worst = c
        .iter()
        .map(|p| (p.plan.length() - p.plan.lower_bound_ccw.min(p.plan.lower_bound_cw)).abs())
        .fold(0.0, f64::max);
    let pass = worst <= 1e-6 && elapsed.as_secs_f64() < 60.0;
    outcome(pass, format!("{} instances, max gap {worst:.2e}, {:.2}s", c.len(), elapsed.as_secs_f64()))
}

fn hull_identity(c: &[Planned]) -> Outcome {
    let worst = c.iter().map(|p| p.plan.certificate.hull_identity_residual).fold(0.0, f64::max);
    let mut matches: BTreeMap<&str, usize> = BTreeMap::new();
    for p in c {
        *matches.entry(p.plan.certificate.subtraction_match.as_str()).or_default() += 1;
    }
    outcome(worst <= 1e-9, format!("max residual {worst:.2e}, subtraction matches {matches:?}"))
}

fn oracle_dominance(tol: &TolerancePolicy) -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed_0003);
    let insts: Vec<Instance> = (0..50)
        .map(|i| random_instance(&mut rng, ShapeMix::ALL[i % 3], Kind::Blocked))
        .collect();
    let mut below = 0;
    let mut beyond = 0;
    let mut worst_excess: f64 = 0.0;
    let mut gaps = Vec::new();
    for inst in &insts {
        let len = plan(inst, tol).expect("plans").length();
        let step = 0.01 * scene_diameter(inst);
        let value = oracle_grid(inst, default_margin(inst), step, tol);
        if len > value + 1e-6 {
            below += 1;
        }
        if value - len > 5.0 * step {
            beyond += 1;
        }
        worst_excess = worst_excess.max((value - len) / step);
        gaps.push((len, step, value - len));
    }
    let coarse = gaps[..10].iter().map(|g| g.2).fold(0.0, f64::max);
    let fine = insts[..10]
        .iter()
        .zip(&gaps)
        .map(|(inst, &(len, step, _))| oracle_grid(inst, default_margin(inst), 0.5 * step, tol) - len)
        .fold(0.0, f64::max);
    let halves = fine <= 0.5 * coarse;
    let secs = start.elapsed().as_secs_f64();
    let pass = below == 0 && beyond == 0 && halves && secs < 300.0;
    outcome(
        pass,
        format!(
            "planner above oracle on {below}, oracle beyond 5 steps on {beyond}, worst gap {worst_excess:.2e} steps; \
             max gap on 10-instance subset {coarse:.3e} at step, {fine:.3e} at half step; {secs:.1}s"
        ),
    )
}

fn piece_bound(c: &[Planned]) -> Outcome {
    let worst = c
        .iter()
        .map(|p| p.plan.certificate.piece_count_a.max(p.plan.certificate.piece_count_b))
        .max()
        .unwrap_or(0);
    outcome(worst <= 6, format!("max pieces per trace {worst}"))
}

struct Reparam {
    sep_plan: f64,
    sep_mono: f64,
    sep_contact: f64,
    monotone: bool,
    one_contact: bool,
    multi_contact: bool,
    same_length: bool,
}

fn reparametrize(c: &[Planned], tol: &TolerancePolicy) -> Vec<Reparam> {
    c.par_iter()
        .map(|p| {
            let body = p.inst.body();
            let m = &p.plan.chosen.comotion;
            let dir = p.plan.chosen.direction;
            let mono = make_orientation_monotone(m, &body, dir, tol);
            let contact = make_contact_preserving(m, &body, tol);
            Reparam {
                sep_plan: min_separation(m, &body, SAMPLES),
                sep_mono: min_separation(&mono, &body, SAMPLES),
                sep_contact: min_separation(&contact, &body, SAMPLES),
                monotone: orientation_profile(&mono, &body, SAMPLES, tol).is_monotone(dir, tol.eps_angle),
                one_contact: contact_components(&contact, &body, SAMPLES).len() <= 1,
                multi_contact: contact_components(m, &body, SAMPLES).len() > 1,
                same_length: mono.length() == m.length() && contact.length() == m.length(),
            }
        })
        .collect()
}

fn collision_free(r: &[Reparam]) -> Outcome {
    let min = |f: fn(&Reparam) -> f64| r.iter().map(f).fold(f64::INFINITY, f64::min);
    let (a, b, c) = (min(|x| x.sep_plan), min(|x| x.sep_mono), min(|x| x.sep_contact));
    let pass = a >= -1e-9 && b >= -1e-9 && c >= -1e-9;
    outcome(pass, format!("min separation: plans {a:.2e}, monotone {b:.2e}, contact-preserving {c:.2e}"))
}

fn straight_cases(tol: &TolerancePolicy) -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0006);
    let mut worst: f64 = 0.0;
    let mut wrong_case = 0;
    for i in 0..100 {
        let inst = separated_lanes(&mut rng, ShapeMix::ALL[i % 3]);
        let r = plan(&inst, tol).expect("plans");
        worst = worst.max((r.length() - inst.straight_length()).abs());
        if r.case != CaseLabel::Straight {
            wrong_case += 1;
        }
    }
    outcome(worst <= 1e-12 && wrong_case == 0, format!("max error {worst:.2e}, non-STRAIGHT labels {wrong_case}"))
}

fn invariance(c: &[Planned], tol: &TolerancePolicy) -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0007);
    let transforms: Vec<RigidTransform> = (0..200)
        .map(|_| RigidTransform {
            rotation: rng.gen_range(0.0..std::f64::consts::TAU),
            translation: Point::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0)),
            flipped: false,
        })
        .collect();
    let results: Vec<([f64; 4], Option<bool>)> = c[..200]
        .par_iter()
        .zip(&transforms)
        .map(|(p, t)| {
            let len = p.plan.length();
            let variants = [p.inst.transformed(t), p.inst.flipped(), p.inst.swapped(), p.inst.reversed()];
            let plans: Vec<PlanResult> = variants.iter().map(|v| plan(v, tol).expect("plans")).collect();
            let diffs = [0, 1, 2, 3].map(|k| (plans[k].length() - len).abs());
            // With equal bounds both labels are correct and ties go counter-clockwise.
            let decided = (p.plan.lower_bound_ccw - p.plan.lower_bound_cw).abs() > 1e-9;
            let swapped = decided.then(|| plans[1].chosen.direction == p.plan.chosen.direction.opposite());
            (diffs, swapped)
        })
        .collect();
    let worst = results.iter().fold([0.0f64; 4], |w, (d, _)| [0, 1, 2, 3].map(|k| w[k].max(d[k])));
    let decided = results.iter().filter(|r| r.1.is_some()).count();
    let label_bad = results.iter().filter(|r| r.1 == Some(false)).count();
    let pass = worst.iter().all(|&w| w <= 1e-9) && label_bad == 0;
    outcome(
        pass,
        format!(
            "max |dlength| transform {:.1e}, flip {:.1e}, swap {:.1e}, reverse {:.1e}; flip label mismatches {label_bad}/{decided}",
            worst[0], worst[1], worst[2], worst[3]
        ),
    )
}

fn reparam_contracts(r: &[Reparam]) -> Outcome {
    let not_mono = r.iter().filter(|x| !x.monotone).count();
    let split = r.iter().filter(|x| !x.one_contact).count();
    let multi = r.iter().filter(|x| x.multi_contact).count();
    let changed = r.iter().filter(|x| !x.same_length).count();
    let pass = not_mono == 0 && split == 0 && changed == 0;
    outcome(
        pass,
        format!(
            "{} motions: non-monotone {not_mono}, split contact {split} (of {multi} with several contacts before), length changed {changed}",
            r.len()
        ),
    )
}

fn geometry_kernel(tol: &TolerancePolicy) -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0009);
    let (mut quad, mut reach, mut tangent): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for i in 0..50 {
        let (a, b) = random_shapes(&mut rng, ShapeMix::ALL[i % 3]);
        let body = sum_body(&a, &b, tol);
        let terms: Vec<CosTerm> = body.core.iter().map(|&v| CosTerm::arc(v, body.radius, AngularInterval::full())).collect();
        let exact = body.perimeter();
        quad = quad.max((cauchy_quadrature(&terms, 1e-10) - exact).abs() / exact);
        for k in 0..360 {
            let t = std::f64::consts::TAU * k as f64 / 360.0;
            reach = reach.max((body.reach(t) - a.reach(Angle::new(t)) - b.reach(Angle::new(t))).abs());
        }
        let s = SumBoundary::new(body.clone(), Point::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)));
        let extent = body.core.iter().map(|v| v.norm()).fold(0.0, f64::max) + body.radius;
        for _ in 0..10 {
            let p = s.center + Point::unit(rng.gen_range(0.0..std::f64::consts::TAU)) * extent * rng.gen_range(1.05..4.0);
            let (up, low) = tangents_from_point(p, &s, tol).expect("outside point has tangents");
            for line in [up, low] {
                // The line through p and the touch point supports the body: its offset equals the reach.
                let d = line.direction();
                for n in [d.perp(), -d.perp()] {
                    let offset = n.dot(line.touch);
                    let r = s.reach(Angle::of(n));
                    if offset > n.dot(s.center) {
                        tangent = tangent.max((offset - r).abs());
                    }
                }
            }
        }
    }
    let pass = quad <= 1e-6 && reach <= 1e-9 && tangent <= 1e-9;
    outcome(
        pass,
        format!("quadrature rel err {quad:.2e}, reach additivity {reach:.2e}, tangent support {tangent:.2e}"),
    )
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ccs-duet")).args(args).output().expect("binary runs");
    let text = String::from_utf8_lossy(&out.stdout).into_owned() + &String::from_utf8_lossy(&out.stderr);
    (out.status.code().unwrap_or(-1), text)
}

fn s(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

fn cli_round_trip() -> Outcome {
    let dir = tempfile::tempdir().expect("temp dir");
    let corpus = dir.path().join("corpus");
    let (code, text) = run(&["generate", s(&corpus), "--count", "50", "--seed", "11"]);
    if code != 0 {
        return outcome(false, format!("generate failed: {text}"));
    }
    let mut scenes: Vec<_> = std::fs::read_dir(&corpus).unwrap().map(|e| e.unwrap().path()).collect();
    scenes.sort();
    let mut ok = 0;
    for (i, scene) in scenes.iter().enumerate() {
        let result = dir.path().join(format!("result_{i}.json"));
        let (plan_code, _) = run(&["plan", s(scene), "-o", s(&result)]);
        let (val_code, _) = run(&["validate", s(&result), s(scene)]);
        if plan_code == 0 && val_code == 0 {
            ok += 1;
        }
    }
    let scene = &scenes[0];
    let result = dir.path().join("result_0.json");
    let original: Value = serde_json::from_str(&std::fs::read_to_string(&result).unwrap()).unwrap();
    let scene_json: Value = serde_json::from_str(&std::fs::read_to_string(scene).unwrap()).unwrap();
    let write = |name: &str, v: &Value| {
        let p = dir.path().join(name);
        std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
        p
    };

    let mut inflated = original.clone();
    inflated["length"] = Value::from(original["length"].as_f64().unwrap() + 0.1);
    let inflated = write("inflated.json", &inflated);
    let (inflated_code, _) = run(&["validate", s(&inflated), s(scene)]);

    // A drives straight through B's start while B waits there.
    let mut collided = original.clone();
    let (a0, b0, a1) = (&scene_json["a0"], &scene_json["b0"], &scene_json["a1"]);
    let pt = |v: &Value| Point::new(v[0].as_f64().unwrap(), v[1].as_f64().unwrap());
    let la = pt(a0).dist(pt(b0)) + pt(b0).dist(pt(a1));
    let lb = original["robot_b"]["length"].as_f64().unwrap();
    collided["robot_a"] = serde_json::json!({
        "start": a0,
        "pieces": [{"type": "segment", "from": a0, "to": b0}, {"type": "segment", "from": b0, "to": a1}],
        "length": la,
    });
    collided["schedule"] = serde_json::json!([
        {"t0": 0.0, "t1": 0.5, "s0": [0.0, 0.0], "s1": [la, 0.0], "kind": {"type": "linear"}},
        {"t0": 0.5, "t1": 1.0, "s0": [la, 0.0], "s1": [la, lb], "kind": {"type": "linear"}},
    ]);
    collided["length"] = Value::from(la + lb);
    let collided = write("collided.json", &collided);
    let (collided_code, collided_text) = run(&["validate", s(&collided), s(scene)]);
    let reports_collision = collided_text.contains("min_separation");

    let mut asym = scene_json.clone();
    asym["robot_a"] = serde_json::json!({"type": "polygon", "vertices": [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.2, -1.3]]});
    let asym = write("asym.json", &asym);
    let (asym_code, _) = run(&["plan", s(&asym), "-o", s(&dir.path().join("asym_out.json"))]);

    let mut overlap = scene_json.clone();
    overlap["b0"] = scene_json["a0"].clone();
    let overlap = write("overlap.json", &overlap);
    let (overlap_code, overlap_text) = run(&["plan", s(&overlap), "-o", s(&dir.path().join("overlap_out.json"))]);

    let pass = ok == scenes.len()
        && scenes.len() == 50
        && inflated_code == 3
        && collided_code == 3
        && reports_collision
        && asym_code == 1
        && overlap_code == 2
        && overlap_text.contains("separation");
    outcome(
        pass,
        format!(
            "round trips {ok}/{}; exit codes: inflated {inflated_code}, collided {collided_code}, asymmetric {asym_code}, overlapping {overlap_code}",
            scenes.len()
        ),
    )
}

fn main() {
    let tol = TolerancePolicy::default();
    let (c, elapsed) = corpus(&tol);
    let reparams = reparametrize(&c, &tol);
    let checks: Vec<(&str, Outcome)> = vec![
        ("tightness identity", tightness(&c, elapsed)),
        ("hull identity", hull_identity(&c)),
        ("oracle dominance", oracle_dominance(&tol)),
        ("six-piece bound", piece_bound(&c)),
        ("collision-freeness", collision_free(&reparams)),
        ("straight-line cases", straight_cases(&tol)),
        ("invariance suite", invariance(&c, &tol)),
        ("reparameterization contracts", reparam_contracts(&reparams)),
        ("geometry kernel", geometry_kernel(&tol)),
        ("cli round-trip", cli_round_trip()),
    ];
    let mut failed = 0;
    for (i, (name, o)) in checks.iter().enumerate() {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag} {name}: {}", i + 1, o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
