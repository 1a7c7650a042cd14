use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fwdosc::Mode;
use fwdosc_cli::commands::{self, ProblemSpec, SweepRange};
use fwdosc_cli::report::Thresholds;
use fwdosc_cli::{verify, Failure};

#[derive(Parser, Debug)]
#[command(name = "fwdosc", version)]
#[command(about = "Energy-optimal forward-only control of the unit harmonic oscillator x'' + x = u, x' >= 0")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one problem and write the sampled trajectory and a JSON summary
    Solve {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Number of uniform trajectory samples
        #[arg(long, default_value_t = 1001)]
        samples: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Solve analytically and by collocation, then report the discrepancies
    Compare {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Collocation nodes
        #[arg(long, default_value_t = 500)]
        nodes: usize,
        /// Largest accepted |J_analytic - J_numeric|
        #[arg(long, default_value_t = 2e-2)]
        max_cost_gap: f64,
        /// Largest accepted sup-norm gap in x1
        #[arg(long, default_value_t = 5e-3)]
        max_sup_x1: f64,
        /// Largest accepted sup-norm gap in u
        #[arg(long, default_value_t = 2e-2)]
        max_sup_u: f64,
        /// Accept hold intervals that disagree with the analytic mode
        #[arg(long)]
        allow_mode_mismatch: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Solve over a range of horizons, one summary row per horizon
    Sweep {
        #[arg(long = "s", allow_negative_numbers = true)]
        s: f64,
        #[arg(long = "xf", allow_negative_numbers = true)]
        x_f: f64,
        /// Horizon range start:end:step
        #[arg(long)]
        sweep: SweepRange,
        /// Force a mode instead of classifying
        #[arg(long)]
        mode: Option<Mode>,
        /// Worker threads; 0 uses every available core
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the reference verification suite and print a pass/fail table
    Verify {
        /// Directory for the report and reference trajectories
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed of the randomized property cases
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        /// Number of randomized property cases
        #[arg(long, default_value_t = verify::PROPERTY_CASES)]
        cases: usize,
    },
}

#[derive(Args, Debug)]
struct ProblemArgs {
    /// Initial position
    #[arg(long = "s", allow_negative_numbers = true)]
    s: f64,
    /// Target position
    #[arg(long = "xf", allow_negative_numbers = true)]
    x_f: f64,
    /// Horizon
    #[arg(long = "T")]
    horizon: f64,
    /// Force a mode: unconstrained, wait_move, move_wait, move_wait_move or hold
    #[arg(long)]
    mode: Option<Mode>,
}

impl ProblemArgs {
    fn spec(&self) -> ProblemSpec {
        ProblemSpec {
            s: self.s,
            x_f: self.x_f,
            horizon: self.horizon,
            mode: self.mode,
        }
    }
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// CSV output path
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON output path; printed to standard output when omitted
    #[arg(long)]
    json: Option<PathBuf>,
}

impl OutputArgs {
    fn emit(&self, csv: &str, json: &str) -> Result<(), Failure> {
        if let Some(path) = &self.out {
            write(path, csv)?;
        }
        match &self.json {
            Some(path) => write(path, json),
            None => {
                print!("{json}");
                Ok(())
            }
        }
    }
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Solver(format!("cannot write {}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve { problem, samples, output } => {
            let out = commands::solve(&problem.spec(), samples)?;
            output.emit(&out.csv, &out.json)
        }
        Command::Compare {
            problem,
            nodes,
            max_cost_gap,
            max_sup_x1,
            max_sup_u,
            allow_mode_mismatch,
            output,
        } => {
            let thresholds = Thresholds {
                cost_gap: max_cost_gap,
                sup_x1: max_sup_x1,
                sup_u: max_sup_u,
                require_mode_consistent: !allow_mode_mismatch,
            };
            let out = commands::compare_with_oracle(&problem.spec(), nodes, thresholds)?;
            output.emit(&out.csv, &out.json)?;
            if out.breaches.is_empty() {
                Ok(())
            } else {
                Err(Failure::Threshold(format!("thresholds breached: {}", out.breaches.join("; "))))
            }
        }
        Command::Sweep {
            s,
            x_f,
            sweep,
            mode,
            workers,
            output,
        } => {
            let out = commands::sweep(s, x_f, sweep, mode, workers)?;
            match &output.out {
                Some(path) => write(path, &out.csv)?,
                None => print!("{}", out.csv),
            }
            if let Some(path) = &output.json {
                write(path, &out.json)?;
            }
            Ok(())
        }
        Command::Verify { out, seed, cases } => {
            let (report, artifacts) = verify::run(seed, cases);
            print!("{}", report.table());
            if let Some(dir) = out {
                fs::create_dir_all(&dir)
                    .map_err(|e| Failure::Solver(format!("cannot create {}: {e}", dir.display())))?;
                for (name, contents) in &artifacts {
                    write(&dir.join(name), contents)?;
                }
            }
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Verify(report.failures()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
