//! Energy-optimal rest-to-rest control of the unit harmonic oscillator
//! `x'' + x = u` under the forward-motion constraint `x' >= 0`.
//!
//! The [`analytic`] module builds closed-form piecewise solutions (free arcs
//! joined to hold arcs); the [`oracle`] module solves the same problem by
//! trapezoidal collocation and an active-set QP for cross-checking.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the aliases at the
//! crate root fix the scalar to `f64`.

pub mod analytic;
pub mod model;
pub mod numerics;
pub mod oracle;
mod scalar;

pub use analytic::{
    classify_and_solve, move_wait_cost, move_wait_move_cost, mwm_parameters, rest_start_critical_time, solve_mode,
    solve_mw, solve_mwm, solve_unconstrained, solve_wm, solve_wm_rest, wait_move_cost, MwmParameters, SolveError,
    UnconstrainedCoefficients,
};
pub use model::{
    check_feasibility, residuals, AdjointSample, Arc, ArcCoefficients, ArcKind, ArcState, BoundaryProblem,
    FeasibilityReport, ModelError, Mode, PiecewiseSolution, Residuals, SolverConfig,
};
pub use numerics::{BandMatrix, DenseMatrix, NumericsError};
pub use oracle::{
    compare, qp_solve, qp_solve_with, transcribe, CollocationGrid, CollocationQp, ComparisonReport, DiscreteTrajectory,
    OracleError, QpOptions,
};

pub use scalar::Scalar;

pub type Problem = BoundaryProblem<f64>;
pub type Coefficients = ArcCoefficients<f64>;
pub type Solution = PiecewiseSolution<f64>;
pub type Config = SolverConfig<f64>;
pub type Trajectory = DiscreteTrajectory<f64>;
pub type Comparison = ComparisonReport<f64>;
