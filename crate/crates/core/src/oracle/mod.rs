//! Direct-collocation oracle.
//!
//! The continuous problem is transcribed with the trapezoidal rule on a
//! uniform grid into a convex QP in the node values `(x1, x2, u)`. The QP is
//! solved by an active-set iteration on the bounds `x2_i >= 0`; each
//! iteration solves one banded KKT system. [`compare`] measures how far an
//! analytic [`PiecewiseSolution`](crate::PiecewiseSolution) is from the
//! discrete optimum.

mod active_set;
mod compare;
mod transcribe;

pub use active_set::{qp_solve, qp_solve_with, QpOptions};
pub use compare::{compare, ComparisonReport};
pub use transcribe::{transcribe, CollocationGrid, CollocationQp, Component, LinearConstraint};

use crate::model::{BoundaryProblem, ModelError};
use crate::numerics::NumericsError;
use crate::Scalar;

/// Tolerance for primal feasibility and KKT checks of oracle output.
pub const ORACLE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("collocation grid needs at least 3 nodes, got {0}")]
    TooFewNodes(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("KKT solve failed: {0}")]
    Kkt(#[from] NumericsError),
    #[error("active set did not settle after {changes} changes (limit {limit})")]
    IterationCap { changes: usize, limit: usize },
    #[error("analytic and discrete solutions belong to different problems")]
    MismatchedProblems,
}

/// Node values of a collocation solution.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteTrajectory<S> {
    pub problem: BoundaryProblem<S>,
    pub grid: CollocationGrid<S>,
    pub x1: Vec<S>,
    pub x2: Vec<S>,
    pub u: Vec<S>,
    /// Multiplier of `x2_i >= 0`; zero where the bound is inactive.
    pub multipliers: Vec<S>,
    /// Nodes whose bound was active at termination, ascending.
    pub active: Vec<usize>,
    /// Trapezoidal estimate of the control energy.
    pub cost: S,
    /// Largest stationarity violation over the free variables.
    pub kkt_residual: S,
    /// Largest absolute defect or boundary-condition violation.
    pub max_defect: S,
    /// Number of active-set additions and removals performed.
    pub changes: usize,
}

impl<S: Scalar> DiscreteTrajectory<S> {
    pub fn n_nodes(&self) -> usize {
        self.x1.len()
    }

    pub fn times(&self) -> Vec<S> {
        self.grid.times()
    }

    pub fn min_x2(&self) -> S {
        self.x2.iter().fold(S::infinity(), |acc, &v| acc.min(v))
    }

    /// Maximal runs of at least two consecutive nodes with `x2 <= threshold`,
    /// as inclusive node index pairs.
    pub fn hold_runs(&self, threshold: S) -> Vec<(usize, usize)> {
        let mut runs = Vec::new();
        let mut start = None;
        for (i, &v) in self.x2.iter().enumerate() {
            match (v <= threshold, start) {
                (true, None) => start = Some(i),
                (false, Some(a)) => {
                    if i - 1 > a {
                        runs.push((a, i - 1));
                    }
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(a) = start {
            if self.x2.len() - 1 > a {
                runs.push((a, self.x2.len() - 1));
            }
        }
        runs
    }

    /// [`hold_runs`](Self::hold_runs) converted to time intervals.
    pub fn hold_intervals(&self, threshold: S) -> Vec<(S, S)> {
        self.hold_runs(threshold)
            .into_iter()
            .map(|(a, b)| (self.grid.time(a), self.grid.time(b)))
            .collect()
    }
}
