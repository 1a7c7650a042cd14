//! Move-wait-move: free arc to a hold position, hold, free arc to the target.
//!
//! For a fixed hold position `x1s` the entry arc (continuity of `u` on
//! arrival) and the exit arc (continuity of `u` on departure) are determined
//! by one junction time each, so the energy is a function of `x1s` alone and
//! is minimized by a coarse scan followed by golden-section search.

use super::transfer::{entry_arcs, exit_arcs};
use super::SolveError;
use crate::model::{Arc, ArcCoefficients, BoundaryProblem, Mode, PiecewiseSolution, SolverConfig};
use crate::numerics::golden_section;
use crate::Scalar;

/// Junction times, hold position and both free arcs of a move-wait-move solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MwmParameters<S> {
    pub tau1: S,
    pub tau2: S,
    pub x1s: S,
    pub entry: ArcCoefficients<S>,
    pub exit: ArcCoefficients<S>,
    pub cost: S,
}

fn plan_at<S: Scalar>(p: &BoundaryProblem<S>, x1s: S, cfg: &SolverConfig<S>) -> Option<MwmParameters<S>> {
    let horizon = p.horizon();
    let entries = entry_arcs(p.s(), x1s, horizon, cfg);
    if entries.is_empty() {
        return None;
    }
    let exits = exit_arcs(x1s, p.x_f(), horizon, cfg);
    let hold_rate = S::lit(0.5) * x1s * x1s;
    let mut best: Option<MwmParameters<S>> = None;
    for &(tau1, entry, e_in) in &entries {
        for &(tau2, exit, e_out) in &exits {
            if tau2 - tau1 <= cfg.junction_tol {
                continue;
            }
            let cost = e_in + e_out + hold_rate * (tau2 - tau1);
            if best.is_none_or(|b| cost < b.cost) {
                best = Some(MwmParameters {
                    tau1,
                    tau2,
                    x1s,
                    entry,
                    exit,
                    cost,
                });
            }
        }
    }
    best
}

/// Energy of the cheapest move-wait-move plan holding at `x1s`, or `None`
/// when no admissible entry/exit pair fits in the horizon.
pub fn move_wait_move_cost<S: Scalar>(p: &BoundaryProblem<S>, x1s: S, cfg: &SolverConfig<S>) -> Option<S> {
    plan_at(p, x1s, cfg).map(|plan| plan.cost)
}

/// Optimal hold position and junction times for `s < 0 < x_f`.
pub fn mwm_parameters<S: Scalar>(p: &BoundaryProblem<S>, cfg: &SolverConfig<S>) -> Result<MwmParameters<S>, SolveError> {
    let (s, x_f) = (p.s(), p.x_f());
    if !(s < S::zero() && x_f > S::zero()) {
        return Err(SolveError::Precondition(format!(
            "move-wait-move needs s < 0 < x_f, got s = {s}, x_f = {x_f}"
        )));
    }
    let n = cfg.hold_scan;
    let candidate = |k: usize| s + (x_f - s) * S::lit(k as f64) / S::lit((n + 1) as f64);
    let cost_at = |x: S| move_wait_move_cost(p, x, cfg).unwrap_or_else(S::infinity);

    let mut best = (0, S::infinity());
    for k in 1..=n {
        let j = cost_at(candidate(k));
        if j < best.1 {
            best = (k, j);
        }
    }
    if !best.1.is_finite() {
        return Err(SolveError::NotActivated(format!(
            "no hold position in ({s}, {x_f}) admits both transfers within T = {}",
            p.horizon()
        )));
    }
    let (k, scan_cost) = best;
    let refined = golden_section(cost_at, candidate(k - 1), candidate(k + 1), cfg.hold_tol, cfg.max_iter)?;
    let x1s = if refined.value <= scan_cost { refined.x } else { candidate(k) };
    plan_at(p, x1s, cfg).ok_or_else(|| SolveError::NotActivated(format!("hold position {x1s} became inadmissible")))
}

/// Move to the optimal hold position, wait, then move to the target.
pub fn solve_mwm<S: Scalar>(p: &BoundaryProblem<S>, cfg: &SolverConfig<S>) -> Result<PiecewiseSolution<S>, SolveError> {
    let m = mwm_parameters(p, cfg)?;
    let arcs = vec![
        Arc::free(m.entry, S::zero(), m.tau1),
        Arc::hold(m.x1s, m.tau1, m.tau2),
        Arc::free(m.exit, m.tau2, p.horizon()),
    ];
    Ok(PiecewiseSolution::new(*p, arcs, Mode::MoveWaitMove)?)
}
