//! Reference-problem verification suite run by `fwdosc verify`.
//!
//! Every check is deterministic: random problems come from a seeded ChaCha
//! stream and all solves run on one thread. Timings are reported on the
//! terminal only and never enter the written artifacts.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use fwdosc::{
    check_feasibility, classify_and_solve, compare, move_wait_cost, move_wait_move_cost, qp_solve, residuals,
    solve_unconstrained, transcribe, wait_move_cost, Config, Mode, Problem, Solution,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::report::{table, to_json, trajectory_csv, SolutionSummary};

pub const DEFAULT_SEED: u64 = 20_240_917;
pub const PROPERTY_CASES: usize = 200;

/// The four reference problems `(s, x_f, T)`.
pub const EXPERIMENTS: [(f64, f64, f64); 4] = [(0.0, 2.0, 5.0), (1.0, 2.0, 5.0), (-2.0, 1.0, 8.0), (-2.0, -1.0, 5.0)];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Option<Duration>,
}

impl Check {
    fn new(id: &str, name: &str, passed: bool, detail: String) -> Self {
        Self {
            id: id.to_string(),
            name: name.to_string(),
            passed,
            detail,
            elapsed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub property_cases: usize,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} {}", c.id, c.name))
            .collect()
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("id,name,passed,detail\n");
        for c in &self.checks {
            out.push_str(&format!("{},{},{},\"{}\"\n", c.id, c.name, c.passed, c.detail.replace('"', "\"\"")));
        }
        out
    }

    pub fn table(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .checks
            .iter()
            .map(|c| {
                let time = c.elapsed.map(|d| format!("{:.3} ms", d.as_secs_f64() * 1e3)).unwrap_or_default();
                vec![
                    c.id.clone(),
                    if c.passed { "PASS" } else { "FAIL" }.to_string(),
                    c.name.clone(),
                    c.detail.clone(),
                    time,
                ]
            })
            .collect();
        table(&["id", "result", "check", "detail", "time"], &rows)
    }
}

/// A named file produced by the suite.
pub type Artifact = (String, String);

fn solve(s: f64, x_f: f64, t: f64) -> Result<Solution, String> {
    let p = Problem::new(s, x_f, t).map_err(|e| e.to_string())?;
    classify_and_solve(&p, &Config::default()).map_err(|e| e.to_string())
}

fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

fn failed(id: &str, name: &str, err: String) -> Check {
    Check::new(id, name, false, err)
}

fn rest_start_energy() -> Check {
    let (id, name) = ("1", "rest-start wait-move energy");
    let sol = match solve(0.0, 2.0, 5.0) {
        Ok(s) => s,
        Err(e) => return failed(id, name, e),
    };
    let best = (0..5)
        .map(|_| {
            let start = Instant::now();
            let _ = solve(0.0, 2.0, 5.0);
            start.elapsed()
        })
        .min()
        .unwrap_or_default();
    let j = sol.cost();
    let ok = sol.mode() == Mode::WaitMove && within(j, 4.0 / PI, 1e-9) && within(j, 1.2732, 5e-5);
    let mut c = Check::new(
        id,
        name,
        ok && best < Duration::from_millis(10),
        format!("J = {j:.12}, |J - 4/pi| = {:.3e}", (j - 4.0 / PI).abs()),
    );
    c.elapsed = Some(best);
    c
}

fn single_hold(id: &str, name: &str, s: f64, x_f: f64, t: f64, mode: Mode, tau: f64, cost: f64) -> Check {
    match solve(s, x_f, t) {
        Ok(sol) => {
            let jt = sol.junction_times();
            let ok = sol.mode() == mode && jt.len() == 1 && within(jt[0], tau, 5e-3) && within(sol.cost(), cost, 5e-3);
            Check::new(id, name, ok, format!("{} tau = {:.6}, J = {:.6}", sol.mode(), jt.first().copied().unwrap_or(f64::NAN), sol.cost()))
        }
        Err(e) => failed(id, name, e),
    }
}

fn interior_hold() -> Check {
    let (id, name) = ("3", "interior hold reference values");
    match solve(-2.0, 1.0, 8.0) {
        Ok(sol) => {
            let jt = sol.junction_times();
            let (t1, t2) = (jt.first().copied().unwrap_or(f64::NAN), jt.get(1).copied().unwrap_or(f64::NAN));
            let x1s = sol.hold_position().unwrap_or(f64::NAN);
            let j = sol.cost();
            let ok = sol.mode() == Mode::MoveWaitMove
                && within(t1, 3.3333, 5e-3)
                && within(t2, 5.1890, 5e-3)
                && within(x1s, 0.2279, 5e-3)
                && within(j, 1.5109, 5e-3);
            Check::new(
                id,
                name,
                ok,
                format!("tau1 = {t1:.6}, tau2 = {t2:.6}, x1s = {x1s:.6}, J = {j:.6} (reference 3.3333, 5.1890, 0.2279, 1.5109)"),
            )
        }
        Err(e) => failed(id, name, e),
    }
}

fn mirrored_pair() -> Check {
    let (id, name) = ("4", "trailing hold and mirror symmetry");
    let (a, b) = match (solve(-2.0, -1.0, 5.0), solve(1.0, 2.0, 5.0)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return failed(id, name, e),
    };
    let jt = a.junction_times();
    let tau = jt.first().copied().unwrap_or(f64::NAN);
    let gap = (a.cost() - b.cost()).abs();
    let ok = a.mode() == Mode::MoveWait && within(tau, 2.432, 5e-3) && within(a.cost(), 3.918, 5e-3) && gap <= 1e-8;
    Check::new(id, name, ok, format!("tau = {tau:.6}, J = {:.6}, |J - J_mirror| = {gap:.3e}", a.cost()))
}

fn activation_threshold() -> Check {
    let (id, name) = ("5", "activation threshold at pi");
    // Endpoints carry x2 = 0 as boundary conditions; the sign is read off
    // the open interval on a fine grid.
    let min_x2 = |t: f64| -> Result<f64, String> {
        let p = Problem::new(0.0, 1.0, t).map_err(|e| e.to_string())?;
        let sol = solve_unconstrained(&p).map_err(|e| e.to_string())?;
        let n = 100_000;
        (1..n)
            .map(|k| sol.eval(t * k as f64 / n as f64).map(|st| st.x2))
            .try_fold(f64::INFINITY, |acc, v| v.map(|v| acc.min(v)))
            .map_err(|e| e.to_string())
    };
    match (min_x2(PI - 1e-3), min_x2(PI + 1e-3)) {
        (Ok(below), Ok(above)) => Check::new(
            id,
            name,
            below >= 0.0 && above < 0.0,
            format!("min x2 = {below:.3e} at pi - 1e-3, {above:.3e} at pi + 1e-3"),
        ),
        (Err(e), _) | (_, Err(e)) => failed(id, name, e),
    }
}

fn horizon_independence() -> Check {
    let (id, name) = ("6", "rest-start energy independent of T");
    let mut worst: f64 = 0.0;
    for t in [4.0, 5.0, 6.0, 8.0, 12.0] {
        match solve(0.0, 1.0, t) {
            Ok(sol) if sol.mode() == Mode::WaitMove => worst = worst.max((sol.cost() - 1.0 / PI).abs()),
            Ok(sol) => return failed(id, name, format!("T = {t}: mode {}", sol.mode())),
            Err(e) => return failed(id, name, e),
        }
    }
    Check::new(id, name, worst <= 1e-10, format!("max |J - 1/pi| = {worst:.3e}"))
}

fn oracle_agreement() -> Vec<Check> {
    let mut checks = Vec::new();
    for (k, &(s, x_f, t)) in EXPERIMENTS.iter().enumerate() {
        let id = format!("7.{}", k + 1);
        let name = format!("oracle agreement ({s}, {x_f}, {t})");
        let outcome = solve(s, x_f, t).and_then(|sol| {
            let dt = qp_solve(&transcribe(sol.problem(), 800).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            compare(&sol, &dt).map_err(|e| e.to_string())
        });
        checks.push(match outcome {
            Ok(r) => Check::new(
                &id,
                &name,
                r.cost_gap <= 2e-2 && r.sup_x1 <= 5e-3 && r.sup_u <= 2e-2 && r.mode_consistent,
                format!(
                    "cost_gap = {:.3e}, sup_x1 = {:.3e}, sup_u = {:.3e}, mode_consistent = {}",
                    r.cost_gap, r.sup_x1, r.sup_u, r.mode_consistent
                ),
            ),
            Err(e) => failed(&id, &name, e),
        });
    }

    let (id, name) = ("7.5", "oracle convergence order");
    let gaps: Result<Vec<f64>, String> = [200, 400, 800]
        .iter()
        .map(|&n| {
            let sol = solve(0.0, 2.0, 5.0)?;
            let dt = qp_solve(&transcribe(sol.problem(), n).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            Ok(compare(&sol, &dt).map_err(|e| e.to_string())?.cost_gap)
        })
        .collect();
    checks.push(match gaps {
        Ok(g) => {
            let ratios = [g[0] / g[1], g[1] / g[2]];
            Check::new(
                id,
                name,
                ratios.iter().all(|r| (3.0..=5.0).contains(r)),
                format!("gap ratios {:.4}, {:.4}", ratios[0], ratios[1]),
            )
        }
        Err(e) => failed(id, name, e),
    });
    checks
}

/// Random problem with `s` in [-3, 3], `x_f` in [s, s + 4], `T` in (0.2, 12].
pub fn random_problem(rng: &mut ChaCha8Rng) -> (f64, f64, f64) {
    let s = rng.gen_range(-3.0..=3.0);
    let x_f = s + rng.gen_range(0.0..=4.0);
    let t = 12.0 - rng.gen_range(0.0..11.8);
    (s, x_f, t)
}

/// Largest spread of the Hamiltonian over 15 interior samples of any arc.
pub fn hamiltonian_spread(sol: &Solution) -> f64 {
    sol.arcs()
        .iter()
        .map(|arc| {
            let values: Vec<f64> = (1..16)
                .map(|k| arc.t_start + (arc.t_end - arc.t_start) * k as f64 / 16.0)
                .map(|t| sol.costate(t).map(|a| a.hamiltonian).unwrap_or(f64::NAN))
                .collect();
            let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
            hi - lo
        })
        .fold(0.0, f64::max)
}

/// Largest energy decrease over admissible `+-1e-3` perturbations of the
/// junction time (or hold position); zero when nothing decreases.
pub fn perturbation_drop(p: &Problem, sol: &Solution) -> f64 {
    let cfg = Config::default();
    let j = sol.cost();
    let d = [-1e-3, 1e-3];
    let perturbed: Vec<f64> = match sol.mode() {
        Mode::WaitMove => {
            let tau = sol.junction_times()[0];
            d.iter().filter_map(|d| wait_move_cost(p, tau + d, &cfg)).collect()
        }
        Mode::MoveWait => {
            let tau = sol.junction_times()[0];
            d.iter().filter_map(|d| move_wait_cost(p, tau + d, &cfg)).collect()
        }
        Mode::MoveWaitMove => {
            let x1s = sol.hold_position().unwrap_or(f64::NAN);
            d.iter().filter_map(|d| move_wait_move_cost(p, x1s + d, &cfg)).collect()
        }
        Mode::Unconstrained | Mode::Hold => Vec::new(),
    };
    perturbed.into_iter().map(|jp| j - jp).fold(0.0, f64::max)
}

fn property_suites(seed: u64, cases: usize) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = Config::default();
    let mut worst = [0.0_f64; 4];
    let mut min_x2 = f64::INFINITY;
    let mut drop: f64 = 0.0;
    let mut errors = Vec::new();
    for _ in 0..cases {
        let (s, x_f, t) = random_problem(&mut rng);
        let p = Problem::new(s, x_f, t).expect("sampled problems are valid");
        match classify_and_solve(&p, &cfg) {
            Ok(sol) => {
                let r = residuals(&sol);
                worst[0] = worst[0].max(r.dynamics);
                worst[1] = worst[1].max(r.boundary.max(r.junction));
                worst[2] = worst[2].max(hamiltonian_spread(&sol));
                min_x2 = min_x2.min(check_feasibility(&sol, &cfg).min_x2);
                let d = perturbation_drop(&p, &sol);
                drop = drop.max(d);
                // absorbs rounding in the energy sums only
                worst[3] = worst[3].max(d - 1e-12 * (1.0 + sol.cost()));
            }
            Err(e) => errors.push(format!("({s}, {x_f}, {t}): {e}")),
        }
    }
    let err_note = if errors.is_empty() {
        String::new()
    } else {
        format!("; {} solve failures, first {}", errors.len(), errors[0])
    };
    let ok = errors.is_empty();

    let mut mu_min = f64::INFINITY;
    for &(s, x_f, t) in &EXPERIMENTS {
        if let Ok(sol) = solve(s, x_f, t) {
            for arc in sol.hold_arcs() {
                for k in 0..=64 {
                    let tt = arc.t_start + (arc.t_end - arc.t_start) * k as f64 / 64.0;
                    if let Ok(a) = sol.costate(tt) {
                        mu_min = mu_min.min(a.mu);
                    }
                }
            }
        } else {
            mu_min = f64::NAN;
        }
    }

    vec![
        Check::new("8.1", "dynamics residuals", ok && worst[0] <= 1e-6, format!("max {:.3e}{err_note}", worst[0])),
        Check::new("8.2", "boundary and junction residuals", ok && worst[1] <= 1e-8, format!("max {:.3e}{err_note}", worst[1])),
        Check::new("8.3", "forward motion", ok && min_x2 >= -1e-9, format!("min x2 {min_x2:.3e}{err_note}")),
        Check::new("8.4", "Hamiltonian constant per arc", ok && worst[2] <= 1e-8, format!("max spread {:.3e}{err_note}", worst[2])),
        Check::new("8.5", "local optimality under perturbation", ok && worst[3] <= 0.0, format!("max decrease {drop:.3e}{err_note}")),
        Check::new("8.6", "hold multipliers non-negative", mu_min >= -1e-8, format!("min mu {mu_min:.6}")),
    ]
}

/// Trajectory CSV and JSON summary for each reference problem.
pub fn experiment_artifacts() -> Result<Vec<Artifact>, String> {
    let cfg = Config::default();
    let mut out = Vec::new();
    for (k, &(s, x_f, t)) in EXPERIMENTS.iter().enumerate() {
        let sol = solve(s, x_f, t)?;
        out.push((format!("experiment{}.csv", k + 1), trajectory_csv(&sol, 1001)));
        out.push((format!("experiment{}.json", k + 1), to_json(&SolutionSummary::new(&sol, &cfg))));
    }
    Ok(out)
}

fn determinism(first: &[Artifact]) -> Check {
    let (id, name) = ("9", "byte-identical artifacts");
    match experiment_artifacts() {
        Ok(second) => {
            let same = first == second.as_slice();
            let bytes: usize = first.iter().map(|(_, c)| c.len()).sum();
            Check::new(id, name, same, format!("{} files, {bytes} bytes compared", first.len()))
        }
        Err(e) => failed(id, name, e),
    }
}

/// Runs every check. Returns the report and the artifacts to write: the
/// report as JSON and CSV plus the reference trajectories.
pub fn run(seed: u64, cases: usize) -> (VerifyReport, Vec<Artifact>) {
    let experiments = experiment_artifacts().unwrap_or_default();
    let mut checks = vec![
        rest_start_energy(),
        single_hold("2", "leading hold reference values", 1.0, 2.0, 5.0, Mode::WaitMove, 2.568, 3.918),
        interior_hold(),
        mirrored_pair(),
        activation_threshold(),
        horizon_independence(),
    ];
    checks.extend(oracle_agreement());
    checks.extend(property_suites(seed, cases));
    checks.push(determinism(&experiments));

    let report = VerifyReport {
        seed,
        property_cases: cases,
        passed: checks.iter().all(|c| c.passed),
        checks,
    };
    let mut artifacts = vec![("verify.json".to_string(), to_json(&report)), ("verify.csv".to_string(), report.csv())];
    artifacts.extend(experiments);
    (report, artifacts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_problems_stay_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let (s, x_f, t) = random_problem(&mut rng);
            assert!((-3.0..=3.0).contains(&s));
            assert!(x_f >= s && x_f <= s + 4.0);
            assert!(t > 0.2 && t <= 12.0);
        }
    }

    #[test]
    fn seeded_stream_repeats() {
        let a: Vec<_> = {
            let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
            (0..5).map(|_| random_problem(&mut rng)).collect()
        };
        let b: Vec<_> = {
            let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
            (0..5).map(|_| random_problem(&mut rng)).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn hold_problem_has_flat_hamiltonian() {
        let sol = solve(1.0, 1.0, 3.0).unwrap();
        assert_eq!(hamiltonian_spread(&sol), 0.0);
        let p = Problem::new(1.0, 1.0, 3.0).unwrap();
        assert_eq!(perturbation_drop(&p, &sol), 0.0);
    }
}
