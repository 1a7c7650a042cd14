use super::OracleError;
use crate::model::BoundaryProblem;
use crate::Scalar;

/// Uniform grid `t_i = i h` on `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollocationGrid<S> {
    n_nodes: usize,
    horizon: S,
    h: S,
}

impl<S: Scalar> CollocationGrid<S> {
    pub fn new(horizon: S, n_nodes: usize) -> Result<Self, OracleError> {
        if n_nodes < 3 {
            return Err(OracleError::TooFewNodes(n_nodes));
        }
        let h = horizon / S::lit((n_nodes - 1) as f64);
        Ok(Self { n_nodes, horizon, h })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn horizon(&self) -> S {
        self.horizon
    }

    pub fn h(&self) -> S {
        self.h
    }

    /// Node time; the last node is exactly the horizon.
    pub fn time(&self, i: usize) -> S {
        if i + 1 == self.n_nodes {
            self.horizon
        } else {
            self.h * S::lit(i as f64)
        }
    }

    pub fn times(&self) -> Vec<S> {
        (0..self.n_nodes).map(|i| self.time(i)).collect()
    }

    /// Trapezoid weights: `h/2` at the ends, `h` inside.
    pub fn weights(&self) -> Vec<S> {
        let half = self.h * S::lit(0.5);
        (0..self.n_nodes)
            .map(|i| if i == 0 || i + 1 == self.n_nodes { half } else { self.h })
            .collect()
    }
}

/// One of the three values stored per node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    X1 = 0,
    X2 = 1,
    U = 2,
}

/// Sparse row `sum(coef * z[index]) = rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearConstraint<S> {
    pub terms: Vec<(usize, S)>,
    pub rhs: S,
}

impl<S: Scalar> LinearConstraint<S> {
    pub fn residual(&self, z: &[S]) -> S {
        self.terms.iter().fold(-self.rhs, |acc, &(j, a)| acc + a * z[j])
    }
}

/// Trapezoidal transcription of the forward-motion problem.
///
/// The decision vector holds `(x1_i, x2_i, u_i)` for every node, in node
/// order. The objective is `1/2 sum w_i u_i^2` with trapezoid weights `w_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct CollocationQp<S> {
    pub problem: BoundaryProblem<S>,
    pub grid: CollocationGrid<S>,
    pub weights: Vec<S>,
    /// Two rows per interval: the `x1` defect, then the `x2` defect.
    pub defects: Vec<LinearConstraint<S>>,
    /// Fixed variables `(index, value)` from the rest-to-rest conditions.
    pub boundary: Vec<(usize, S)>,
    /// Variables bounded below by zero.
    pub lower_bounds: Vec<usize>,
}

impl<S: Scalar> CollocationQp<S> {
    pub fn variable(node: usize, component: Component) -> usize {
        3 * node + component as usize
    }

    pub fn n_variables(&self) -> usize {
        3 * self.grid.n_nodes()
    }

    pub fn n_equalities(&self) -> usize {
        self.defects.len() + self.boundary.len()
    }

    pub fn n_inequalities(&self) -> usize {
        self.lower_bounds.len()
    }

    pub fn objective(&self, z: &[S]) -> S {
        let half = S::lit(0.5);
        self.weights.iter().enumerate().fold(S::zero(), |acc, (i, &w)| {
            let u = z[Self::variable(i, Component::U)];
            acc + half * w * u * u
        })
    }

    /// Residuals of every defect row followed by every boundary condition.
    pub fn equality_residuals(&self, z: &[S]) -> Vec<S> {
        self.defects
            .iter()
            .map(|row| row.residual(z))
            .chain(self.boundary.iter().map(|&(j, v)| z[j] - v))
            .collect()
    }
}

/// Builds the collocation QP for `p` on `n_nodes` uniform nodes.
pub fn transcribe<S: Scalar>(p: &BoundaryProblem<S>, n_nodes: usize) -> Result<CollocationQp<S>, OracleError> {
    use Component::{U, X1, X2};
    let grid = CollocationGrid::new(p.horizon(), n_nodes)?;
    let v = CollocationQp::<S>::variable;
    let half_h = grid.h() * S::lit(0.5);
    let one = S::one();

    let mut defects = Vec::with_capacity(2 * (n_nodes - 1));
    for i in 0..n_nodes - 1 {
        let k = i + 1;
        defects.push(LinearConstraint {
            terms: vec![(v(k, X1), one), (v(i, X1), -one), (v(i, X2), -half_h), (v(k, X2), -half_h)],
            rhs: S::zero(),
        });
        defects.push(LinearConstraint {
            terms: vec![
                (v(k, X2), one),
                (v(i, X2), -one),
                (v(i, X1), half_h),
                (v(i, U), -half_h),
                (v(k, X1), half_h),
                (v(k, U), -half_h),
            ],
            rhs: S::zero(),
        });
    }
    let last = n_nodes - 1;
    let boundary = vec![
        (v(0, X1), p.s()),
        (v(0, X2), S::zero()),
        (v(last, X1), p.x_f()),
        (v(last, X2), S::zero()),
    ];
    Ok(CollocationQp {
        problem: *p,
        weights: grid.weights(),
        grid,
        defects,
        boundary,
        lower_bounds: (0..n_nodes).map(|i| v(i, X2)).collect(),
    })
}
