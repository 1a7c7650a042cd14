//! Problem data, closed-form arcs and piecewise solutions.
//!
//! Dynamics are `x1' = x2`, `x2' = -x1 + u` with the forward-motion constraint
//! `x2 >= 0`. A free arc follows the four-parameter family
//!
//! ```text
//! x1(t) = c1 cos t + c2 sin t + c3 t cos t + c4 t sin t
//! x2(t) = (c4 - c1) sin t + (c2 + c3) cos t - c3 t sin t + c4 t cos t
//! u(t)  = -2 c3 sin t + 2 c4 cos t
//! ```
//!
//! in absolute time. A hold arc parks the state at `(x1s, 0)` with `u = x1s`.

mod arc;
mod diagnostics;

pub use arc::{Arc, ArcCoefficients, ArcKind, ArcState};
pub use diagnostics::{check_feasibility, residuals, AdjointSample, FeasibilityReport, Residuals};
pub(crate) use diagnostics::arc_min_x2;

use std::fmt;
use std::str::FromStr;

use crate::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("horizon must be positive and finite, got {0}")]
    InvalidHorizon(f64),
    #[error("problem data must be finite")]
    NonFinite,
    #[error("target {x_f} lies behind start {s}: the oscillator cannot move backward")]
    InfeasibleTarget { s: f64, x_f: f64 },
    #[error("time {t} outside [0, {horizon}]")]
    OutsideHorizon { t: f64, horizon: f64 },
    #[error("invalid arc layout: {0}")]
    InvalidArcs(String),
}

/// Rest-to-rest transfer from `(s, 0)` to `(x_f, 0)` over `[0, horizon]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryProblem<S> {
    s: S,
    x_f: S,
    horizon: S,
}

impl<S: Scalar> BoundaryProblem<S> {
    pub fn new(s: S, x_f: S, horizon: S) -> Result<Self, ModelError> {
        if !s.is_finite() || !x_f.is_finite() {
            return Err(ModelError::NonFinite);
        }
        if !(horizon > S::zero()) || !horizon.is_finite() {
            return Err(ModelError::InvalidHorizon(horizon.to_f64_lossy()));
        }
        if x_f < s {
            return Err(ModelError::InfeasibleTarget {
                s: s.to_f64_lossy(),
                x_f: x_f.to_f64_lossy(),
            });
        }
        Ok(Self { s, x_f, horizon })
    }

    /// Initial position.
    pub fn s(&self) -> S {
        self.s
    }

    /// Final position.
    pub fn x_f(&self) -> S {
        self.x_f
    }

    pub fn horizon(&self) -> S {
        self.horizon
    }
}

/// Placement of the constrained (hold) arc in a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Unconstrained,
    WaitMove,
    MoveWait,
    MoveWaitMove,
    /// `s == x_f`: the only admissible motion is standing still.
    Hold,
}

impl Mode {
    pub const ALL: [Mode; 5] = [
        Mode::Unconstrained,
        Mode::WaitMove,
        Mode::MoveWait,
        Mode::MoveWaitMove,
        Mode::Hold,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Unconstrained => "unconstrained",
            Mode::WaitMove => "wait_move",
            Mode::MoveWait => "move_wait",
            Mode::MoveWaitMove => "move_wait_move",
            Mode::Hold => "hold",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        match key.as_str() {
            "unconstrained" => Ok(Mode::Unconstrained),
            "wait_move" | "wm" => Ok(Mode::WaitMove),
            "move_wait" | "mw" => Ok(Mode::MoveWait),
            "move_wait_move" | "mwm" => Ok(Mode::MoveWaitMove),
            "hold" => Ok(Mode::Hold),
            _ => Err(format!("unknown mode '{s}'")),
        }
    }
}

/// Tolerances and iteration limits for the analytic solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig<S> {
    /// Allowed violation of `x2 >= 0`.
    pub feas_tol: S,
    /// Bracket width at which junction-time root finding stops.
    pub junction_tol: S,
    /// Feasibility scan points over the whole horizon.
    pub grid_n: usize,
    pub max_iter: usize,
    /// Samples of the junction-time scan over `(0, T)`.
    pub junction_scan: usize,
    /// Candidate hold positions scanned before golden-section refinement.
    pub hold_scan: usize,
    /// Bracket width for the hold-position minimization.
    pub hold_tol: S,
}

impl<S: Scalar> Default for SolverConfig<S> {
    fn default() -> Self {
        Self {
            feas_tol: S::lit(1e-9),
            junction_tol: S::lit(1e-10),
            grid_n: 4096,
            max_iter: crate::numerics::DEFAULT_MAX_ITER,
            junction_scan: 512,
            hold_scan: 128,
            hold_tol: S::lit(1e-9),
        }
    }
}

impl<S: Scalar> SolverConfig<S> {
    pub fn validate(&self) -> Result<(), String> {
        let positive = |v: S| v > S::zero() && v.is_finite();
        if !positive(self.feas_tol) || !positive(self.junction_tol) || !positive(self.hold_tol) {
            return Err("tolerances must be positive".into());
        }
        if self.grid_n < 2 || self.junction_scan < 2 || self.hold_scan < 3 || self.max_iter == 0 {
            return Err("scan sizes and iteration caps are too small".into());
        }
        Ok(())
    }
}

/// Ordered arcs tiling `[0, T]`, with mode label and energy.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseSolution<S> {
    problem: BoundaryProblem<S>,
    arcs: Vec<Arc<S>>,
    mode: Mode,
    cost: S,
}

impl<S: Scalar> PiecewiseSolution<S> {
    /// Validates the tiling of `[0, T]` and computes the energy.
    pub fn new(problem: BoundaryProblem<S>, arcs: Vec<Arc<S>>, mode: Mode) -> Result<Self, ModelError> {
        let invalid = |msg: String| Err(ModelError::InvalidArcs(msg));
        let (Some(first), Some(last)) = (arcs.first(), arcs.last()) else {
            return invalid("no arcs".into());
        };
        if first.t_start != S::zero() {
            return invalid(format!("first arc starts at {}", first.t_start));
        }
        if last.t_end != problem.horizon() {
            return invalid(format!("last arc ends at {}, horizon {}", last.t_end, problem.horizon()));
        }
        for (i, arc) in arcs.iter().enumerate() {
            if !(arc.t_start < arc.t_end) {
                return invalid(format!("arc {i} has empty span [{}, {}]", arc.t_start, arc.t_end));
            }
            if !arc.is_finite() {
                return invalid(format!("arc {i} has non-finite data"));
            }
        }
        for (i, pair) in arcs.windows(2).enumerate() {
            if pair[0].t_end != pair[1].t_start {
                return invalid(format!("gap between arcs {i} and {}", i + 1));
            }
        }
        if mode == Mode::Hold && problem.s() != problem.x_f() {
            return invalid("hold mode requires s == x_f".into());
        }
        let cost = arcs.iter().fold(S::zero(), |acc, a| acc + a.energy());
        Ok(Self {
            problem,
            arcs,
            mode,
            cost,
        })
    }

    pub fn problem(&self) -> &BoundaryProblem<S> {
        &self.problem
    }

    pub fn arcs(&self) -> &[Arc<S>] {
        &self.arcs
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Applied energy `1/2 ∫ u² dt`.
    pub fn cost(&self) -> S {
        self.cost
    }

    /// Interior arc boundaries in increasing order.
    pub fn junction_times(&self) -> Vec<S> {
        self.arcs.iter().skip(1).map(|a| a.t_start).collect()
    }

    pub fn hold_arcs(&self) -> impl Iterator<Item = &Arc<S>> {
        self.arcs.iter().filter(|a| a.is_hold())
    }

    /// Position of the first hold arc, if any.
    pub fn hold_position(&self) -> Option<S> {
        self.arcs.iter().find_map(|a| match a.kind {
            ArcKind::Hold { position } => Some(position),
            ArcKind::Free(_) => None,
        })
    }

    /// Index of the arc containing `t`; junctions resolve to the left arc.
    pub fn arc_index_at(&self, t: S) -> Result<usize, ModelError> {
        if !(t >= S::zero() && t <= self.problem.horizon()) {
            return Err(ModelError::OutsideHorizon {
                t: t.to_f64_lossy(),
                horizon: self.problem.horizon().to_f64_lossy(),
            });
        }
        let idx = self.arcs.partition_point(|a| a.t_end < t);
        Ok(idx.min(self.arcs.len() - 1))
    }

    pub fn eval(&self, t: S) -> Result<ArcState<S>, ModelError> {
        let i = self.arc_index_at(t)?;
        Ok(self.arcs[i].eval(t))
    }

    /// Costates, constraint multiplier and Hamiltonian at `t`.
    ///
    /// On a hold arc `lambda1` is propagated with slope `lambda2 = -x1s` from
    /// the adjacent free arc (left neighbour preferred); `mu = lambda1` there.
    pub fn costate(&self, t: S) -> Result<AdjointSample<S>, ModelError> {
        let i = self.arc_index_at(t)?;
        Ok(diagnostics::costate_on_arc(&self.arcs, i, t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hold(position: f64, a: f64, b: f64) -> Arc<f64> {
        Arc::hold(position, a, b)
    }

    #[test]
    fn problem_validation() {
        assert!(BoundaryProblem::new(0.0, 2.0, 5.0).is_ok());
        assert_eq!(
            BoundaryProblem::new(2.0, 1.0, 5.0),
            Err(ModelError::InfeasibleTarget { s: 2.0, x_f: 1.0 })
        );
        assert!(matches!(BoundaryProblem::new(0.0, 1.0, 0.0), Err(ModelError::InvalidHorizon(_))));
        assert!(matches!(BoundaryProblem::new(0.0, 1.0, -1.0), Err(ModelError::InvalidHorizon(_))));
        assert_eq!(BoundaryProblem::new(f64::NAN, 1.0, 1.0), Err(ModelError::NonFinite));
    }

    #[test]
    fn hold_solution_eval_and_cost() {
        let p = BoundaryProblem::new(1.0, 1.0, 10.0).unwrap();
        let sol = PiecewiseSolution::new(p, vec![hold(1.0, 0.0, 10.0)], Mode::Hold).unwrap();
        let st = sol.eval(3.0).unwrap();
        assert_eq!((st.x1, st.x2, st.u), (1.0, 0.0, 1.0));
        assert_eq!(sol.cost(), 5.0);
        assert!(sol.junction_times().is_empty());
        assert!(matches!(sol.eval(10.5), Err(ModelError::OutsideHorizon { .. })));
        assert!(sol.eval(-1e-9).is_err());
    }

    #[test]
    fn layout_errors() {
        let p = BoundaryProblem::new(1.0, 1.0, 10.0).unwrap();
        assert!(PiecewiseSolution::new(p, vec![], Mode::Hold).is_err());
        assert!(PiecewiseSolution::new(p, vec![hold(1.0, 0.0, 9.0)], Mode::Hold).is_err());
        assert!(PiecewiseSolution::new(p, vec![hold(1.0, 0.5, 10.0)], Mode::Hold).is_err());
        let gap = vec![hold(1.0, 0.0, 4.0), hold(1.0, 5.0, 10.0)];
        assert!(PiecewiseSolution::new(p, gap, Mode::Hold).is_err());
        let p2 = BoundaryProblem::new(0.0, 1.0, 10.0).unwrap();
        assert!(PiecewiseSolution::new(p2, vec![hold(0.0, 0.0, 10.0)], Mode::Hold).is_err());
    }

    #[test]
    fn arc_lookup_prefers_left_arc_at_junction() {
        let p = BoundaryProblem::new(0.0, 0.0, 2.0).unwrap();
        let sol = PiecewiseSolution::new(p, vec![hold(0.0, 0.0, 1.0), hold(0.0, 1.0, 2.0)], Mode::Hold).unwrap();
        assert_eq!(sol.arc_index_at(1.0).unwrap(), 0);
        assert_eq!(sol.arc_index_at(1.5).unwrap(), 1);
        assert_eq!(sol.arc_index_at(0.0).unwrap(), 0);
        assert_eq!(sol.arc_index_at(2.0).unwrap(), 1);
        assert_eq!(sol.junction_times(), vec![1.0]);
    }

    #[test]
    fn mode_names_round_trip() {
        for m in Mode::ALL {
            assert_eq!(m.as_str().parse::<Mode>().unwrap(), m);
        }
        assert_eq!("MWM".parse::<Mode>().unwrap(), Mode::MoveWaitMove);
        assert!("sideways".parse::<Mode>().is_err());
    }

    #[test]
    fn default_config_is_valid() {
        let cfg = SolverConfig::<f64>::default();
        assert!(cfg.validate().is_ok());
        assert_eq!(cfg.grid_n, 4096);
        let bad = SolverConfig { feas_tol: 0.0, ..cfg };
        assert!(bad.validate().is_err());
    }
}
