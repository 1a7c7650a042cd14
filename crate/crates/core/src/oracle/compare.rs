use super::{DiscreteTrajectory, OracleError, ORACLE_TOL};
use crate::model::PiecewiseSolution;
use crate::Scalar;

/// Grid discrepancies between an analytic solution and a collocation solution.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport<S> {
    pub nodes: usize,
    pub sup_x1: S,
    pub sup_x2: S,
    pub sup_u: S,
    pub cost_gap: S,
    /// Hold arcs of the analytic solution as `(start, end)`.
    pub analytic_holds: Vec<(S, S)>,
    /// Runs of numerically zero velocity in the discrete solution.
    pub numeric_holds: Vec<(S, S)>,
    /// Same number of holds, each pair of endpoints within [`junction_slack`](Self::junction_slack).
    pub mode_consistent: bool,
    pub junction_slack: S,
}

/// Evaluates `sol` on the grid of `dt` and measures the gaps.
///
/// A node counts as holding when `x2 <= 10 * ORACLE_TOL`; hold endpoints
/// may differ from the analytic junctions by up to five grid steps, because
/// junctions do not fall on grid nodes.
pub fn compare<S: Scalar>(sol: &PiecewiseSolution<S>, dt: &DiscreteTrajectory<S>) -> Result<ComparisonReport<S>, OracleError> {
    if *sol.problem() != dt.problem {
        return Err(OracleError::MismatchedProblems);
    }
    let mut sup = [S::zero(); 3];
    for (i, t) in dt.times().into_iter().enumerate() {
        let st = sol.eval(t)?;
        sup[0] = sup[0].max((st.x1 - dt.x1[i]).abs());
        sup[1] = sup[1].max((st.x2 - dt.x2[i]).abs());
        sup[2] = sup[2].max((st.u - dt.u[i]).abs());
    }
    let analytic_holds: Vec<(S, S)> = sol.hold_arcs().map(|a| (a.t_start, a.t_end)).collect();
    let numeric_holds = dt.hold_intervals(S::lit(10.0 * ORACLE_TOL));
    let junction_slack = dt.grid.h() * S::lit(5.0);
    let mode_consistent = analytic_holds.len() == numeric_holds.len()
        && analytic_holds
            .iter()
            .zip(&numeric_holds)
            .all(|(a, b)| (a.0 - b.0).abs() <= junction_slack && (a.1 - b.1).abs() <= junction_slack);
    Ok(ComparisonReport {
        nodes: dt.n_nodes(),
        sup_x1: sup[0],
        sup_x2: sup[1],
        sup_u: sup[2],
        cost_gap: (sol.cost() - dt.cost).abs(),
        analytic_holds,
        numeric_holds,
        mode_consistent,
        junction_slack,
    })
}

impl<S: Scalar> DiscreteTrajectory<S> {
    /// Samples an analytic solution at the grid nodes, carrying its exact
    /// energy. Multipliers are zero and no bound is marked active.
    pub fn sample(sol: &PiecewiseSolution<S>, grid: super::CollocationGrid<S>) -> Result<Self, OracleError> {
        if grid.horizon() != sol.problem().horizon() {
            return Err(OracleError::MismatchedProblems);
        }
        let n = grid.n_nodes();
        let (mut x1, mut x2, mut u) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
        for t in grid.times() {
            let st = sol.eval(t)?;
            x1.push(st.x1);
            x2.push(st.x2);
            u.push(st.u);
        }
        Ok(Self {
            problem: *sol.problem(),
            grid,
            x1,
            x2,
            u,
            multipliers: vec![S::zero(); n],
            active: Vec::new(),
            cost: sol.cost(),
            kkt_residual: S::zero(),
            max_defect: S::zero(),
            changes: 0,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::classify_and_solve;
    use crate::model::{BoundaryProblem, SolverConfig};
    use crate::oracle::{qp_solve, transcribe, CollocationGrid};

    fn pair(s: f64, x_f: f64, t: f64, n: usize) -> (PiecewiseSolution<f64>, DiscreteTrajectory<f64>) {
        let p = BoundaryProblem::new(s, x_f, t).unwrap();
        let sol = classify_and_solve(&p, &SolverConfig::default()).unwrap();
        let dt = qp_solve(&transcribe(&p, n).unwrap()).unwrap();
        (sol, dt)
    }

    #[test]
    fn self_comparison_is_exact() {
        let p = BoundaryProblem::new(0.0, 2.0, 5.0).unwrap();
        let sol = classify_and_solve(&p, &SolverConfig::default()).unwrap();
        let dt = DiscreteTrajectory::sample(&sol, CollocationGrid::new(5.0, 101).unwrap()).unwrap();
        let r = compare(&sol, &dt).unwrap();
        assert_eq!((r.sup_x1, r.sup_x2, r.sup_u, r.cost_gap), (0.0, 0.0, 0.0, 0.0));
        assert!(r.mode_consistent);
    }

    #[test]
    fn rest_start_agreement() {
        let (sol, dt) = pair(0.0, 2.0, 5.0, 500);
        let r = compare(&sol, &dt).unwrap();
        assert!(r.sup_x1 <= 5e-3, "{r:?}");
        assert!(r.cost_gap <= 1e-2, "{r:?}");
        assert!(r.mode_consistent, "{r:?}");
    }

    #[test]
    fn trailing_hold_detected() {
        let (sol, dt) = pair(-2.0, -1.0, 5.0, 500);
        let r = compare(&sol, &dt).unwrap();
        assert!(r.mode_consistent, "{r:?}");
        assert_eq!(r.numeric_holds.len(), 1);
        assert_eq!(r.numeric_holds[0].1, 5.0);
    }

    #[test]
    fn hold_problem_gaps_vanish() {
        let (sol, dt) = pair(1.0, 1.0, 10.0, 100);
        let r = compare(&sol, &dt).unwrap();
        assert!(r.sup_x1.max(r.sup_x2).max(r.sup_u).max(r.cost_gap) <= 1e-8, "{r:?}");
    }

    #[test]
    fn mismatched_problems_rejected() {
        let (sol, _) = pair(0.0, 2.0, 5.0, 50);
        let (_, other) = pair(0.0, 1.0, 5.0, 50);
        assert_eq!(compare(&sol, &other), Err(OracleError::MismatchedProblems));
    }
}
