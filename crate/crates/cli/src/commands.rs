use std::str::FromStr;

use fwdosc::{classify_and_solve, compare, qp_solve, solve_mode, transcribe, Config, Mode, Problem, Solution};
use rayon::prelude::*;

use crate::report::{comparison_csv, sweep_csv, to_json, trajectory_csv, ComparisonSummary, SolutionSummary, SweepRow, Thresholds};
use crate::Failure;

/// Problem data plus an optional forced mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemSpec {
    pub s: f64,
    pub x_f: f64,
    pub horizon: f64,
    pub mode: Option<Mode>,
}

impl ProblemSpec {
    pub fn problem(&self) -> Result<Problem, Failure> {
        Ok(Problem::new(self.s, self.x_f, self.horizon)?)
    }

    /// Classifies and solves, or solves in the forced mode.
    pub fn solve(&self, cfg: &Config) -> Result<Solution, Failure> {
        let p = self.problem()?;
        let sol = match self.mode {
            Some(mode) => solve_mode(&p, mode, cfg)?,
            None => classify_and_solve(&p, cfg)?,
        };
        Ok(sol)
    }
}

pub struct SolveOutput {
    pub summary: SolutionSummary,
    pub csv: String,
    pub json: String,
}

pub fn solve(spec: &ProblemSpec, samples: usize) -> Result<SolveOutput, Failure> {
    let cfg = Config::default();
    let sol = spec.solve(&cfg)?;
    let summary = SolutionSummary::new(&sol, &cfg);
    Ok(SolveOutput {
        csv: trajectory_csv(&sol, samples),
        json: to_json(&summary),
        summary,
    })
}

pub struct CompareOutput {
    pub summary: ComparisonSummary,
    pub csv: String,
    pub json: String,
    /// Empty when every threshold is met.
    pub breaches: Vec<String>,
}

pub fn compare_with_oracle(spec: &ProblemSpec, nodes: usize, thresholds: Thresholds) -> Result<CompareOutput, Failure> {
    let cfg = Config::default();
    let sol = spec.solve(&cfg)?;
    let dt = qp_solve(&transcribe(sol.problem(), nodes)?)?;
    let report = compare(&sol, &dt)?;
    let summary = ComparisonSummary::new(&sol, &dt, &report, thresholds);
    Ok(CompareOutput {
        csv: comparison_csv(&sol, &dt),
        json: to_json(&summary),
        breaches: thresholds.breaches(&report),
        summary,
    })
}

/// Inclusive horizon range written `start:end:step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl FromStr for SweepRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, h] = parts.as_slice() else {
            return Err(format!("expected start:end:step, got '{s}'"));
        };
        let parse = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("'{x}': {e}"));
        let range = Self {
            start: parse(a)?,
            end: parse(b)?,
            step: parse(h)?,
        };
        if !(range.start.is_finite() && range.end.is_finite() && range.step.is_finite()) {
            return Err("range bounds must be finite".into());
        }
        if !(range.step > 0.0) || range.end < range.start {
            return Err(format!("need step > 0 and end >= start, got '{s}'"));
        }
        Ok(range)
    }
}

impl SweepRange {
    /// `start + k step` for every `k` that stays within `end`, allowing for
    /// rounding in the last step.
    pub fn values(&self) -> Vec<f64> {
        let span = (self.end - self.start) / self.step;
        let count = (span + 1e-9).floor() as usize + 1;
        (0..count).map(|k| self.start + self.step * k as f64).collect()
    }
}

fn sweep_row(s: f64, x_f: f64, horizon: f64, mode: Option<Mode>) -> SweepRow {
    let spec = ProblemSpec { s, x_f, horizon, mode };
    match spec.solve(&Config::default()) {
        Ok(sol) => {
            let j = sol.junction_times();
            SweepRow {
                horizon,
                mode: Some(sol.mode().as_str().to_string()),
                cost: Some(sol.cost()),
                tau1: j.first().copied(),
                tau2: j.get(1).copied(),
                x1s: match sol.mode() {
                    Mode::MoveWaitMove => sol.hold_position(),
                    _ => None,
                },
                error: None,
            }
        }
        Err(e) => SweepRow {
            horizon,
            mode: None,
            cost: None,
            tau1: None,
            tau2: None,
            x1s: None,
            error: Some(e.to_string()),
        },
    }
}

pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub csv: String,
    pub json: String,
}

/// Solves every horizon of `range` in parallel on `workers` threads
/// (0 means one per core). Rows come back sorted by horizon.
pub fn sweep(s: f64, x_f: f64, range: SweepRange, mode: Option<Mode>, workers: usize) -> Result<SweepOutput, Failure> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Failure::Solver(format!("cannot start worker pool: {e}")))?;
    let horizons = range.values();
    let mut rows: Vec<SweepRow> = pool.install(|| horizons.par_iter().map(|&t| sweep_row(s, x_f, t, mode)).collect());
    rows.sort_by(|a, b| a.horizon.total_cmp(&b.horizon));
    Ok(SweepOutput {
        csv: sweep_csv(&rows),
        json: to_json(&rows),
        rows,
    })
}
