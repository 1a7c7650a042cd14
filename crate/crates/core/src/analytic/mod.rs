//! Closed-form optimal solutions and mode classification.
//!
//! With `s = 0` the constraint activates exactly when `T > π`, and the
//! solution waits at the origin for `T - π` before a half-period sine pull
//! costing `x_f² / π`. For other starts the junction times have no closed
//! form: for a trial junction the boundary conditions are linear in the arc
//! coefficients, and control continuity at the junction is enforced by a
//! scalar root find. Move-wait-move solutions additionally minimize the
//! energy over the hold position.

mod mwm;
mod transfer;

pub use mwm::{move_wait_move_cost, mwm_parameters, solve_mwm, MwmParameters};

use crate::model::{
    check_feasibility, residuals, Arc, ArcCoefficients, BoundaryProblem, ModelError, Mode, PiecewiseSolution,
    SolverConfig,
};
use crate::numerics::NumericsError;
use crate::Scalar;
use transfer::{arc_between, arc_is_forward, entry_arcs, exit_arcs, rest_to_rest};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolveError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("constraint not activated: {0}")]
    NotActivated(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("solution failed verification: {0}")]
    Verification(String),
    #[error("invalid solver configuration: {0}")]
    Config(String),
}

impl SolveError {
    pub fn is_infeasible_target(&self) -> bool {
        matches!(self, SolveError::Model(ModelError::InfeasibleTarget { .. }))
    }
}

/// Single-arc solution coefficients together with the boundary matrix determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnconstrainedCoefficients<S> {
    pub coeffs: ArcCoefficients<S>,
    /// `sin²T - T²`, negative for every `T > 0`.
    pub det_m: S,
    x_f: S,
    horizon: S,
}

impl<S: Scalar> UnconstrainedCoefficients<S> {
    pub fn new(p: &BoundaryProblem<S>) -> Result<Self, SolveError> {
        let t = p.horizon();
        let coeffs = rest_to_rest(p.s(), p.x_f(), t)?;
        let sin_t = t.sin();
        Ok(Self {
            coeffs,
            det_m: sin_t * sin_t - t * t,
            x_f: p.x_f(),
            horizon: t,
        })
    }

    /// `x_f / (T² - sin²T)`, the scale of the rest-start solution.
    pub fn beta(&self) -> S {
        -self.x_f / self.det_m
    }

    pub fn horizon(&self) -> S {
        self.horizon
    }
}

/// Single free arc meeting both boundary states; ignores the constraint.
pub fn solve_unconstrained<S: Scalar>(p: &BoundaryProblem<S>) -> Result<PiecewiseSolution<S>, SolveError> {
    let uc = UnconstrainedCoefficients::new(p)?;
    let arcs = vec![Arc::free(uc.coeffs, S::zero(), p.horizon())];
    Ok(PiecewiseSolution::new(*p, arcs, Mode::Unconstrained)?)
}

/// Horizon beyond which the rest-start unconstrained solution reverses: `π`.
pub fn rest_start_critical_time<S: Scalar>() -> S {
    S::PI()
}

/// Wait at the origin for `T - π`, then `u = (2 x_f / π) sin(T - t)`.
pub fn solve_wm_rest<S: Scalar>(x_f: S, horizon: S) -> Result<PiecewiseSolution<S>, SolveError> {
    let pi = S::PI();
    if !(x_f > S::zero()) {
        return Err(SolveError::Precondition(format!("rest-start wait-move needs x_f > 0, got {x_f}")));
    }
    if !(horizon > pi) {
        return Err(SolveError::Precondition(format!(
            "rest-start wait-move needs T > π, got {horizon}; the unconstrained solution applies"
        )));
    }
    let p = BoundaryProblem::new(S::zero(), x_f, horizon)?;
    let (sin_t, cos_t) = horizon.sin_cos();
    let k = x_f / pi;
    let coeffs = ArcCoefficients::new(
        k * (sin_t + pi * cos_t - horizon * cos_t),
        -k * (cos_t - pi * sin_t + horizon * sin_t),
        k * cos_t,
        k * sin_t,
    );
    let tau = horizon - pi;
    let arcs = vec![Arc::hold(S::zero(), S::zero(), tau), Arc::free(coeffs, tau, horizon)];
    Ok(PiecewiseSolution::new(p, arcs, Mode::WaitMove)?)
}

/// Energy of holding at `s` until `tau`, then the free arc to `(x_f, 0)`,
/// without the control-continuity condition at `tau`.
///
/// Returns `None` when `tau` is outside the horizon or the free arc leaves
/// the admissible set `x2 >= -feas_tol`.
pub fn wait_move_cost<S: Scalar>(p: &BoundaryProblem<S>, tau: S, cfg: &SolverConfig<S>) -> Option<S> {
    if !(tau >= S::zero() && tau < p.horizon()) {
        return None;
    }
    let c = arc_between(p.s(), tau, p.x_f(), p.horizon()).ok()?;
    arc_is_forward(&c, tau, p.horizon(), cfg).then(|| S::lit(0.5) * p.s() * p.s() * tau + c.energy(tau, p.horizon()))
}

/// Energy of the free arc to `(x_f, 0)` at `tau`, then holding there,
/// without the control-continuity condition at `tau`.
///
/// Returns `None` when `tau` is outside the horizon or the free arc leaves
/// the admissible set.
pub fn move_wait_cost<S: Scalar>(p: &BoundaryProblem<S>, tau: S, cfg: &SolverConfig<S>) -> Option<S> {
    if !(tau > S::zero() && tau <= p.horizon()) {
        return None;
    }
    let c = rest_to_rest(p.s(), p.x_f(), tau).ok()?;
    arc_is_forward(&c, S::zero(), tau, cfg)
        .then(|| c.energy(S::zero(), tau) + S::lit(0.5) * p.x_f() * p.x_f() * (p.horizon() - tau))
}

/// Cheapest admissible hold-at-`s`-then-move solution, any sign of `s`.
fn wait_move<S: Scalar>(p: &BoundaryProblem<S>, cfg: &SolverConfig<S>) -> Result<PiecewiseSolution<S>, SolveError> {
    let (s, horizon) = (p.s(), p.horizon());
    let hold_rate = S::lit(0.5) * s * s;
    let best = exit_arcs(s, p.x_f(), horizon, cfg)
        .into_iter()
        .filter(|(tau, _, _)| *tau > cfg.junction_tol)
        .map(|(tau, c, energy)| (hold_rate * tau + energy, tau, c))
        .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    let Some((_, tau, c)) = best else {
        return Err(SolveError::NotActivated(format!(
            "no admissible departure time in (0, {horizon}) for wait-move"
        )));
    };
    let arcs = vec![Arc::hold(s, S::zero(), tau), Arc::free(c, tau, horizon)];
    Ok(PiecewiseSolution::new(*p, arcs, Mode::WaitMove)?)
}

/// Cheapest admissible move-then-hold-at-`x_f` solution, any sign of `x_f`.
fn move_wait<S: Scalar>(p: &BoundaryProblem<S>, cfg: &SolverConfig<S>) -> Result<PiecewiseSolution<S>, SolveError> {
    let (x_f, horizon) = (p.x_f(), p.horizon());
    let hold_rate = S::lit(0.5) * x_f * x_f;
    let best = entry_arcs(p.s(), x_f, horizon, cfg)
        .into_iter()
        .filter(|(tau, _, _)| horizon - *tau > cfg.junction_tol)
        .map(|(tau, c, energy)| (energy + hold_rate * (horizon - tau), tau, c))
        .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    let Some((_, tau, c)) = best else {
        return Err(SolveError::NotActivated(format!(
            "no admissible arrival time in (0, {horizon}) for move-wait"
        )));
    };
    let arcs = vec![Arc::free(c, S::zero(), tau), Arc::hold(x_f, tau, horizon)];
    Ok(PiecewiseSolution::new(*p, arcs, Mode::MoveWait)?)
}

/// Wait at `s` then move, for `0 < s < x_f`.
pub fn solve_wm<S: Scalar>(p: &BoundaryProblem<S>, cfg: &SolverConfig<S>) -> Result<PiecewiseSolution<S>, SolveError> {
    if !(p.s() > S::zero() && p.s() < p.x_f()) {
        return Err(SolveError::Precondition(format!(
            "wait-move needs 0 < s < x_f, got s = {}, x_f = {}",
            p.s(),
            p.x_f()
        )));
    }
    wait_move(p, cfg)
}

/// Move then wait at `x_f`, for `s < x_f <= 0`.
pub fn solve_mw<S: Scalar>(p: &BoundaryProblem<S>, cfg: &SolverConfig<S>) -> Result<PiecewiseSolution<S>, SolveError> {
    if !(p.s() < p.x_f() && p.x_f() <= S::zero()) {
        return Err(SolveError::Precondition(format!(
            "move-wait needs s < x_f <= 0, got s = {}, x_f = {}",
            p.s(),
            p.x_f()
        )));
    }
    move_wait(p, cfg)
}

fn hold_solution<S: Scalar>(p: &BoundaryProblem<S>) -> Result<PiecewiseSolution<S>, SolveError> {
    let arcs = vec![Arc::hold(p.s(), S::zero(), p.horizon())];
    Ok(PiecewiseSolution::new(*p, arcs, Mode::Hold)?)
}

/// Solves with a prescribed mode, skipping classification.
///
/// A rest start (`s = 0`) in wait-move mode uses the closed form.
pub fn solve_mode<S: Scalar>(
    p: &BoundaryProblem<S>,
    mode: Mode,
    cfg: &SolverConfig<S>,
) -> Result<PiecewiseSolution<S>, SolveError> {
    match mode {
        Mode::Unconstrained => solve_unconstrained(p),
        Mode::Hold if p.s() == p.x_f() => hold_solution(p),
        Mode::Hold => Err(SolveError::Precondition("hold mode needs s == x_f".into())),
        Mode::WaitMove if p.s() == S::zero() => solve_wm_rest(p.x_f(), p.horizon()),
        Mode::WaitMove => solve_wm(p, cfg),
        Mode::MoveWait => solve_mw(p, cfg),
        Mode::MoveWaitMove => solve_mwm(p, cfg),
    }
}

/// Picks the optimal mode and returns its verified solution.
///
/// The unconstrained arc is returned whenever it is forward-feasible.
/// Otherwise the hold goes where holding is cheapest: at `s` for `s >= 0`,
/// at `x_f` for `x_f <= 0`. For `s < 0 < x_f` an interior hold competes with
/// holding at either end, and the lowest energy wins.
pub fn classify_and_solve<S: Scalar>(
    p: &BoundaryProblem<S>,
    cfg: &SolverConfig<S>,
) -> Result<PiecewiseSolution<S>, SolveError> {
    cfg.validate().map_err(SolveError::Config)?;
    let (s, x_f, horizon) = (p.s(), p.x_f(), p.horizon());
    if s == x_f {
        return verified(hold_solution(p)?, cfg);
    }

    let unconstrained = solve_unconstrained(p)?;
    if check_feasibility(&unconstrained, cfg).feasible {
        return verified(unconstrained, cfg);
    }

    let zero = S::zero();
    let solution = if s == zero && horizon > S::PI() {
        solve_wm_rest(x_f, horizon)?
    } else if s >= zero {
        wait_move(p, cfg)?
    } else if x_f <= zero {
        move_wait(p, cfg)?
    } else {
        let candidates = [solve_mwm(p, cfg), move_wait(p, cfg), wait_move(p, cfg)];
        let mut errors = Vec::new();
        let mut best: Option<PiecewiseSolution<S>> = None;
        for candidate in candidates {
            match candidate {
                Ok(sol) if check_feasibility(&sol, cfg).feasible => {
                    if best.as_ref().is_none_or(|b| sol.cost() < b.cost()) {
                        best = Some(sol);
                    }
                }
                Ok(sol) => errors.push(format!("{} candidate violates x2 >= 0", sol.mode())),
                Err(e) => errors.push(e.to_string()),
            }
        }
        best.ok_or_else(|| SolveError::NotActivated(errors.join("; ")))?
    };
    verified(solution, cfg)
}

const BOUNDARY_TOL: f64 = 1e-8;
const DYNAMICS_TOL: f64 = 1e-6;

fn verified<S: Scalar>(sol: PiecewiseSolution<S>, cfg: &SolverConfig<S>) -> Result<PiecewiseSolution<S>, SolveError> {
    let r = residuals(&sol);
    // loosened only for scalars coarser than f64
    let eps = S::epsilon();
    let tol = S::lit(BOUNDARY_TOL).max(eps * S::lit(1e4));
    let dyn_tol = S::lit(DYNAMICS_TOL).max(eps.cbrt().powi(2) * S::lit(100.0));
    if r.boundary > tol || r.junction > tol || r.dynamics > dyn_tol {
        return Err(SolveError::Verification(format!(
            "{} residuals too large: dynamics {}, boundary {}, junction {}",
            sol.mode(),
            r.dynamics,
            r.boundary,
            r.junction
        )));
    }
    let f = check_feasibility(&sol, cfg);
    if !f.feasible {
        return Err(SolveError::Verification(format!(
            "{} solution reaches x2 = {} at t = {}",
            sol.mode(),
            f.min_x2,
            f.argmin_t
        )));
    }
    Ok(sol)
}
