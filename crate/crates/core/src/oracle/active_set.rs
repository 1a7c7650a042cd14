use std::collections::BTreeSet;

use super::transcribe::{CollocationQp, Component};
use super::{DiscreteTrajectory, OracleError};
use crate::numerics::BandMatrix;
use crate::Scalar;

/// Settings for [`qp_solve_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct QpOptions<S> {
    /// Cap on active-set additions plus removals; `None` means `4 n`.
    pub max_changes: Option<usize>,
    /// Interior nodes whose bound starts active. An inconsistent warm start
    /// falls back to a cold start.
    pub warm_start: Vec<usize>,
    /// A bound is violated below `-tol`; a multiplier is negative below `-tol`.
    pub tol: S,
}

impl<S: Scalar> Default for QpOptions<S> {
    fn default() -> Self {
        Self {
            max_changes: None,
            warm_start: Vec::new(),
            tol: S::lit(1e-11).max(S::epsilon() * S::lit(10.0)),
        }
    }
}

/// Solves the collocation QP from a cold start.
pub fn qp_solve<S: Scalar>(qp: &CollocationQp<S>) -> Result<DiscreteTrajectory<S>, OracleError> {
    qp_solve_with(qp, &QpOptions::default())
}

/// Primal active-set iteration: solve the equality-constrained KKT system,
/// activate the most violated bound, otherwise release the most negative
/// multiplier, until neither exists.
pub fn qp_solve_with<S: Scalar>(
    qp: &CollocationQp<S>,
    options: &QpOptions<S>,
) -> Result<DiscreteTrajectory<S>, OracleError> {
    let n = qp.grid.n_nodes();
    let limit = options.max_changes.unwrap_or(4 * n);
    let kkt = KktLayout::new(qp);
    let mut active: BTreeSet<usize> = options
        .warm_start
        .iter()
        .copied()
        .filter(|&i| i > 0 && i + 1 < n)
        .collect();
    let mut changes = 0;

    loop {
        let step = match kkt.solve(qp, &active) {
            Ok(step) => step,
            Err(_) if changes == 0 && !active.is_empty() => {
                active.clear();
                kkt.solve(qp, &active)?
            }
            Err(e) => return Err(e),
        };
        let x2 = |i: usize| step.z[CollocationQp::<S>::variable(i, Component::X2)];

        let violated = (1..n - 1)
            .filter(|i| !active.contains(i))
            .map(|i| (x2(i), i))
            .filter(|&(v, _)| v < -options.tol)
            .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
        if let Some((_, i)) = violated {
            if changes == limit {
                return Err(OracleError::IterationCap { changes, limit });
            }
            active.insert(i);
            changes += 1;
            continue;
        }

        let negative = active
            .iter()
            .map(|&i| (step.gradient[CollocationQp::<S>::variable(i, Component::X2)], i))
            .filter(|&(m, _)| m < -options.tol)
            .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
        if let Some((_, i)) = negative {
            if changes == limit {
                return Err(OracleError::IterationCap { changes, limit });
            }
            active.remove(&i);
            changes += 1;
            continue;
        }

        return Ok(step.into_trajectory(qp, &active, changes));
    }
}

struct KktLayout<S> {
    /// For every variable, the defect rows it appears in with its coefficient.
    columns: Vec<Vec<(usize, S)>>,
    unknowns: usize,
}

struct KktStep<S> {
    z: Vec<S>,
    /// `H z + A^T nu`: zero on free variables, the bound multiplier on active ones.
    gradient: Vec<S>,
    fixed: Vec<bool>,
}

fn var_slot(j: usize) -> usize {
    5 * (j / 3) + j % 3
}

fn row_slot(r: usize) -> usize {
    5 * (r / 2) + 3 + r % 2
}

impl<S: Scalar> KktLayout<S> {
    fn new(qp: &CollocationQp<S>) -> Self {
        let mut columns = vec![Vec::new(); qp.n_variables()];
        for (r, row) in qp.defects.iter().enumerate() {
            for &(j, a) in &row.terms {
                columns[j].push((r, a));
            }
        }
        Self {
            columns,
            unknowns: qp.n_variables() + qp.defects.len(),
        }
    }

    fn fixed_values(&self, qp: &CollocationQp<S>, active: &BTreeSet<usize>) -> Vec<Option<S>> {
        let n = qp.grid.n_nodes();
        let mut fixed = vec![None; qp.n_variables()];
        for &(j, v) in &qp.boundary {
            fixed[j] = Some(v);
        }
        for &i in active {
            fixed[CollocationQp::<S>::variable(i, Component::X2)] = Some(S::zero());
        }
        // With every velocity pinned to zero the two position conditions
        // coincide, so one of them is left to the dynamics.
        let (s, x_f) = (qp.problem.s(), qp.problem.x_f());
        let tie = (x_f - s).abs() <= S::epsilon() * (S::one() + s.abs());
        if active.len() == n - 2 && tie {
            fixed[CollocationQp::<S>::variable(n - 1, Component::X1)] = None;
        }
        fixed
    }

    fn solve(&self, qp: &CollocationQp<S>, active: &BTreeSet<usize>) -> Result<KktStep<S>, OracleError> {
        let fixed = self.fixed_values(qp, active);
        let mut triplets = Vec::with_capacity(8 * self.unknowns);
        let mut rhs = vec![S::zero(); self.unknowns];

        for (j, fix) in fixed.iter().enumerate() {
            let row = var_slot(j);
            if let Some(v) = fix {
                triplets.push((row, row, S::one()));
                rhs[row] = *v;
                continue;
            }
            if j % 3 == Component::U as usize {
                triplets.push((row, row, qp.weights[j / 3]));
            }
            for &(r, a) in &self.columns[j] {
                triplets.push((row, row_slot(r), a));
            }
        }
        for (r, constraint) in qp.defects.iter().enumerate() {
            let row = row_slot(r);
            for &(j, a) in &constraint.terms {
                triplets.push((row, var_slot(j), a));
            }
            rhs[row] = constraint.rhs;
        }

        let solution = BandMatrix::from_triplets(self.unknowns, &triplets)?.solve(&rhs)?;
        let z: Vec<S> = (0..qp.n_variables()).map(|j| solution[var_slot(j)]).collect();
        let gradient = (0..qp.n_variables())
            .map(|j| {
                let hess = if j % 3 == Component::U as usize {
                    qp.weights[j / 3] * z[j]
                } else {
                    S::zero()
                };
                self.columns[j]
                    .iter()
                    .fold(hess, |acc, &(r, a)| acc + a * solution[row_slot(r)])
            })
            .collect();
        Ok(KktStep {
            z,
            gradient,
            fixed: fixed.iter().map(Option::is_some).collect(),
        })
    }
}

impl<S: Scalar> KktStep<S> {
    fn into_trajectory(self, qp: &CollocationQp<S>, active: &BTreeSet<usize>, changes: usize) -> DiscreteTrajectory<S> {
        let n = qp.grid.n_nodes();
        let pick = |c: Component| -> Vec<S> { (0..n).map(|i| self.z[CollocationQp::<S>::variable(i, c)]).collect() };
        let kkt_residual = self
            .gradient
            .iter()
            .zip(&self.fixed)
            .filter(|(_, &f)| !f)
            .fold(S::zero(), |acc, (g, _)| acc.max(g.abs()));
        let max_defect = qp
            .equality_residuals(&self.z)
            .into_iter()
            .fold(S::zero(), |acc, r| acc.max(r.abs()));
        let multipliers = (0..n)
            .map(|i| {
                if active.contains(&i) {
                    self.gradient[CollocationQp::<S>::variable(i, Component::X2)]
                } else {
                    S::zero()
                }
            })
            .collect();
        DiscreteTrajectory {
            problem: qp.problem,
            grid: qp.grid,
            x1: pick(Component::X1),
            x2: pick(Component::X2),
            u: pick(Component::U),
            multipliers,
            active: active.iter().copied().collect(),
            cost: qp.objective(&self.z),
            kkt_residual,
            max_defect,
            changes,
        }
    }
}
