//! `qec-seesaw`: sweep the damping parameter and compare no coding, the Leung
//! code with optimized recovery, and jointly optimized encoding + recovery.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use seesaw_core::report::{write_csv, write_svg_plot};
use seesaw_core::{run_sweep, Execution, Mode, SolveOptions, SweepConfig};

#[derive(Debug, Parser)]
#[command(name = "qec-seesaw", version, about)]
struct Args {
    #[arg(long, default_value_t = 0.0)]
    gamma_min: f64,

    #[arg(long, default_value_t = 1.0)]
    gamma_max: f64,

    /// Number of grid points, endpoints included.
    #[arg(long, default_value_t = 21)]
    steps: usize,

    /// Parallel uses of the damping channel.
    #[arg(long, default_value_t = 4)]
    copies: usize,

    /// Comma-separated subset of nocoding, leung_optrec, seesaw.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "nocoding,leung_optrec,seesaw"
    )]
    modes: Vec<Mode>,

    /// Starting encoders per seesaw run, Leung and trivial seeds included.
    #[arg(long, default_value_t = 8)]
    restarts: usize,

    /// Outer convergence tolerance on the fidelity gain per round.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,

    #[arg(long, default_value_t = 200)]
    max_outer: usize,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,

    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,

    /// Write 0 for wall_time_ms so repeated runs give identical files.
    #[arg(long)]
    no_timing: bool,

    /// Run restarts and modes on the calling thread only.
    #[arg(long)]
    sequential: bool,
}

impl Args {
    fn config(&self) -> SweepConfig {
        SweepConfig {
            gamma_min: self.gamma_min,
            gamma_max: self.gamma_max,
            steps: self.steps,
            copies: self.copies,
            modes: self.modes.clone(),
            solve: SolveOptions {
                restarts: self.restarts,
                outer_tol: self.tol,
                max_outer_rounds: self.max_outer,
                seed: self.seed,
                execution: if self.sequential {
                    Execution::Sequential
                } else {
                    Execution::Parallel
                },
                ..SolveOptions::default()
            },
            record_timing: !self.no_timing,
        }
    }
}

fn run(args: &Args) -> seesaw_core::Result<()> {
    let records = run_sweep(&args.config())?;
    if let Some(path) = &args.csv {
        write_csv(&records, path)?;
    }
    if let Some(path) = &args.svg {
        write_svg_plot(&records, path)?;
    }
    if args.csv.is_none() {
        print!("{}", seesaw_core::report::render_csv(&records));
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qec-seesaw: {e}");
            ExitCode::FAILURE
        }
    }
}
