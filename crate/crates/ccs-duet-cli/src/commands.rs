use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use ccs_duet::samples::{random_instance, Kind, ShapeMix};
use ccs_duet::verify::{certify_claim, certify_with_oracle, default_margin, oracle_grid_argmin, scene_diameter, Claim};
use ccs_duet::{plan, Instance, PlanResult, Point, TolerancePolicy};
use rand::rngs::StdRng;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::CliError;
use crate::scene::{ClaimedMotion, ResultFile, SceneFile};
use crate::svg;

fn load_instance(path: &Path, tol: &TolerancePolicy) -> Result<Instance, CliError> {
    let inst = SceneFile::read(path)?.instance();
    inst.validate(tol)?;
    Ok(inst)
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Malformed(format!("cannot write {}: {e}", path.display())))
}

fn certificate_failure(plan: &PlanResult) -> Result<(), CliError> {
    let failures = plan.certificate.failures();
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Invariant(format!("certificate failed: {}", failures.join(", "))))
    }
}

pub fn cmd_plan(scene: &Path, out: &Path, svg_path: Option<&Path>, tol: &TolerancePolicy) -> Result<(), CliError> {
    let inst = load_instance(scene, tol)?;
    let result = plan(&inst, tol)?;
    write(out, &ResultFile::new(&result).to_json())?;
    if let Some(p) = svg_path {
        write(p, &svg::render(&inst, &result))?;
    }
    println!(
        "length {} direction {:?} case {}",
        result.length(),
        result.chosen.direction,
        result.case.name()
    );
    certificate_failure(&result)
}

pub fn cmd_validate(result: &Path, scene: &Path, samples: usize, tol: &TolerancePolicy) -> Result<(), CliError> {
    let inst = load_instance(scene, tol)?;
    let claimed = ClaimedMotion::read(result)?;
    let m = claimed.comotion();
    let claim = Claim::new(&m, claimed.length, &inst, tol)?;
    let report = certify_claim(&claim, &inst, &inst.body(), None, samples, tol);
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    if report.pass {
        Ok(())
    } else {
        Err(CliError::Invariant(format!(
            "validation failed: {} (min_separation {:.3e})",
            report.failures().join(", "),
            report.min_separation
        )))
    }
}

#[derive(Debug, Serialize)]
struct OracleReport {
    oracle_length: f64,
    oracle_a_int: Point,
    step: f64,
    margin: f64,
    planner_length: f64,
    gap: f64,
}

pub fn cmd_oracle(scene: &Path, step: Option<f64>, margin: Option<f64>, tol: &TolerancePolicy) -> Result<(), CliError> {
    let inst = load_instance(scene, tol)?;
    let step = step.unwrap_or(0.01 * scene_diameter(&inst).max(1e-9));
    if !(step > 0.0 && step.is_finite()) {
        return Err(CliError::Malformed(format!("grid step must be positive, got {step}")));
    }
    let margin = margin.unwrap_or_else(|| default_margin(&inst));
    let result = plan(&inst, tol)?;
    let (value, a) = oracle_grid_argmin(&inst, margin, step, tol);
    let report = OracleReport {
        oracle_length: value,
        oracle_a_int: a,
        step,
        margin,
        planner_length: result.length(),
        gap: value - result.length(),
    };
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    let cert = certify_with_oracle(&result, &inst, step, margin, tol);
    if cert.pass {
        Ok(())
    } else {
        Err(CliError::Invariant(format!("certificate failed: {}", cert.failures().join(", "))))
    }
}

#[derive(Debug, Serialize)]
struct BatchEntry {
    file: String,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    case: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lower_bound_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hull_identity_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_separation: Option<f64>,
    millis: f64,
    #[serde(skip)]
    code: i32,
}

#[derive(Debug, Serialize)]
struct BatchSummary {
    scenes: usize,
    passed: usize,
    failed: usize,
    max_lower_bound_gap: f64,
    max_hull_identity_residual: f64,
    max_oracle_gap: Option<f64>,
    min_separation: Option<f64>,
    total_millis: f64,
    mean_millis: f64,
    max_millis: f64,
}

#[derive(Debug, Serialize)]
struct BatchReport {
    entries: Vec<BatchEntry>,
    summary: BatchSummary,
}

fn batch_one(path: &Path, step: Option<f64>, tol: &TolerancePolicy) -> BatchEntry {
    let start = Instant::now();
    let file = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let outcome = load_instance(path, tol).and_then(|inst| {
        let result = plan(&inst, tol)?;
        let cert = match step {
            Some(h) => certify_with_oracle(&result, &inst, h, default_margin(&inst), tol),
            None => result.certificate.clone(),
        };
        Ok((result, cert))
    });
    let millis = start.elapsed().as_secs_f64() * 1e3;
    match outcome {
        Ok((result, cert)) => {
            let failures = cert.failures();
            BatchEntry {
                file,
                status: if cert.pass { "pass" } else { "fail" },
                message: (!failures.is_empty()).then(|| failures.join(", ")),
                length: Some(result.length()),
                case: Some(result.case.name()),
                lower_bound_gap: Some(cert.lower_bound_gap),
                hull_identity_residual: Some(cert.hull_identity_residual),
                oracle_gap: cert.oracle_gap,
                min_separation: Some(cert.min_separation),
                millis,
                code: if cert.pass { 0 } else { 3 },
            }
        }
        Err(e) => BatchEntry {
            file,
            status: match e {
                CliError::Malformed(_) => "malformed",
                CliError::NonViable(_) => "non_viable",
                CliError::Invariant(_) => "error",
            },
            message: Some(e.to_string()),
            length: None,
            case: None,
            lower_bound_gap: None,
            hull_identity_residual: None,
            oracle_gap: None,
            min_separation: None,
            millis,
            code: e.exit_code(),
        },
    }
}

/// Plans every `*.json` scene in `dir` (in file name order) and prints a JSON report.
/// Returns the largest per-file exit code.
pub fn cmd_batch(dir: &Path, step: Option<f64>, tol: &TolerancePolicy) -> Result<i32, CliError> {
    let read = fs::read_dir(dir).map_err(|e| CliError::io(dir, e))?;
    let mut files: Vec<PathBuf> = read
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let entries: Vec<BatchEntry> = files.par_iter().map(|p| batch_one(p, step, tol)).collect();
    let fold = |f: fn(&BatchEntry) -> Option<f64>, pick: fn(f64, f64) -> f64| {
        entries.iter().filter_map(f).reduce(pick)
    };
    let times: Vec<f64> = entries.iter().map(|e| e.millis).collect();
    let total: f64 = times.iter().sum();
    let passed = entries.iter().filter(|e| e.status == "pass").count();
    let summary = BatchSummary {
        scenes: entries.len(),
        passed,
        failed: entries.len() - passed,
        max_lower_bound_gap: fold(|e| e.lower_bound_gap, f64::max).unwrap_or(0.0),
        max_hull_identity_residual: fold(|e| e.hull_identity_residual, f64::max).unwrap_or(0.0),
        max_oracle_gap: fold(|e| e.oracle_gap, f64::max),
        min_separation: fold(|e| e.min_separation, f64::min),
        total_millis: total,
        mean_millis: if times.is_empty() { 0.0 } else { total / times.len() as f64 },
        max_millis: times.iter().cloned().fold(0.0, f64::max),
    };
    let code = entries.iter().map(|e| e.code).max().unwrap_or(0);
    let report = BatchReport { entries, summary };
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(code)
}

/// Writes `count` random viable scenes, cycling through the shape mixes.
pub fn cmd_generate(dir: &Path, count: usize, seed: u64) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut rng = StdRng::seed_from_u64(seed);
    for i in 0..count {
        let inst = random_instance(&mut rng, ShapeMix::ALL[i % ShapeMix::ALL.len()], Kind::Any);
        let text = serde_json::to_string_pretty(&SceneFile::from_instance(&inst)).expect("scene serializes");
        write(&dir.join(format!("scene_{i:04}.json")), &(text + "\n"))?;
    }
    Ok(())
}
