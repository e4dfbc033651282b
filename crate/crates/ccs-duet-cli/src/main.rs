use std::path::PathBuf;
use std::process::ExitCode;

use ccs_duet::verify::VALIDATION_SAMPLES;
use ccs_duet::TolerancePolicy;
use clap::{Parser, Subcommand};

mod commands;
mod error;
mod scene;
mod svg;

/// Optimal coordinated motion of two translating convex centrally-symmetric robots.
#[derive(Debug, Parser)]
#[command(name = "ccs-duet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Plan a shortest co-motion for a scene.
    Plan {
        scene: PathBuf,
        /// Result file to write.
        #[arg(short, long)]
        output: PathBuf,
        /// Also draw the traces.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Re-check a result file against its scene.
    Validate {
        result: PathBuf,
        scene: PathBuf,
        #[arg(long, default_value_t = VALIDATION_SAMPLES)]
        samples: usize,
    },
    /// Compare the planner with a brute-force grid search over intermediate placements.
    Oracle {
        scene: PathBuf,
        /// Grid step (default: 1% of the scene diameter).
        #[arg(long)]
        step: Option<f64>,
        /// Margin around the bounding box of the four placements (default: reach of A+B).
        #[arg(long)]
        margin: Option<f64>,
    },
    /// Write random viable scenes into a directory.
    Generate {
        dir: PathBuf,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Plan and certify every scene in a directory.
    Batch {
        dir: PathBuf,
        /// Run the grid oracle with this step as well.
        #[arg(long)]
        step: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = TolerancePolicy::from_env();
    let outcome = match &cli.command {
        Command::Plan { scene, output, svg } => commands::cmd_plan(scene, output, svg.as_deref(), &tol).map(|_| 0),
        Command::Validate { result, scene, samples } => commands::cmd_validate(result, scene, *samples, &tol).map(|_| 0),
        Command::Oracle { scene, step, margin } => commands::cmd_oracle(scene, *step, *margin, &tol).map(|_| 0),
        Command::Generate { dir, count, seed } => commands::cmd_generate(dir, *count, *seed).map(|_| 0),
        Command::Batch { dir, step } => commands::cmd_batch(dir, *step, &tol),
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
