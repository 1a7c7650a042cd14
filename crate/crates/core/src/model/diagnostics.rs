use super::{Arc, ArcCoefficients, ArcKind, PiecewiseSolution, SolverConfig};
use crate::numerics::{golden_section, DEFAULT_MAX_ITER};
use crate::scalar::max_abs;
use crate::Scalar;

/// Costates, inequality multiplier and Hamiltonian at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdjointSample<S> {
    pub lambda1: S,
    pub lambda2: S,
    /// Zero on free arcs; expected non-negative on hold arcs.
    pub mu: S,
    pub hamiltonian: S,
}

pub(super) fn costate_on_arc<S: Scalar>(arcs: &[Arc<S>], i: usize, t: S) -> AdjointSample<S> {
    let arc = &arcs[i];
    let st = arc.eval(t);
    let half = S::lit(0.5);
    let hamiltonian = |l1: S, l2: S, mu: S| {
        half * st.u * st.u + l1 * st.x2 + l2 * (st.u - st.x1) - mu * st.x2
    };
    match arc.kind {
        ArcKind::Free(c) => {
            let lambda1 = c.lambda1(t);
            let lambda2 = -st.u;
            AdjointSample {
                lambda1,
                lambda2,
                mu: S::zero(),
                hamiltonian: hamiltonian(lambda1, lambda2, S::zero()),
            }
        }
        ArcKind::Hold { position } => {
            let free_at = |j: usize, at: S| match arcs.get(j).map(|a| a.kind) {
                Some(ArcKind::Free(c)) => Some((at, c.lambda1(at))),
                _ => None,
            };
            let (t_ref, l_ref) = i
                .checked_sub(1)
                .and_then(|j| free_at(j, arc.t_start))
                .or_else(|| free_at(i + 1, arc.t_end))
                .unwrap_or((arc.t_start, S::zero()));
            let lambda2 = -position;
            let lambda1 = l_ref + lambda2 * (t - t_ref);
            let mu = lambda1;
            AdjointSample {
                lambda1,
                lambda2,
                mu,
                hamiltonian: hamiltonian(lambda1, lambda2, mu),
            }
        }
    }
}

/// Outcome of the `x2 >= 0` scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityReport<S> {
    pub feasible: bool,
    pub min_x2: S,
    pub argmin_t: S,
}

/// Minimum of `x2` over `[a, b]` for one free arc: grid scan with `n`
/// intervals, each interior local minimum refined by golden-section search.
pub(crate) fn arc_min_x2<S: Scalar>(c: &ArcCoefficients<S>, a: S, b: S, n: usize) -> (S, S) {
    let n = n.max(2);
    let h = (b - a) / S::lit(n as f64);
    let node = |k: usize| if k == n { b } else { a + h * S::lit(k as f64) };
    let values: Vec<S> = (0..=n).map(|k| c.eval(node(k)).x2).collect();

    let mut best = (values[0], a);
    if values[n] < best.0 {
        best = (values[n], b);
    }
    let tol = S::lit(1e-13) * (S::one() + b.abs());
    let mut refine = |lo: S, hi: S, fallback: (S, S)| {
        let refined = golden_section(|t| c.eval(t).x2, lo, hi, tol, DEFAULT_MAX_ITER)
            .map(|m| (m.value, m.x))
            .unwrap_or(fallback);
        let candidate = if refined.0 <= fallback.0 { refined } else { fallback };
        if candidate.0 < best.0 {
            best = candidate;
        }
    };
    for k in 1..n {
        if values[k] <= values[k - 1] && values[k] <= values[k + 1] {
            refine(node(k - 1), node(k + 1), (values[k], node(k)));
        }
    }
    // A dip narrower than one grid cell can hide next to either endpoint.
    let slope = |t: S| {
        let st = c.eval(t);
        st.u - st.x1
    };
    if slope(a) < S::zero() && values[1] > values[0] {
        refine(a, node(1), (values[0], a));
    }
    if slope(b) > S::zero() && values[n - 1] > values[n] {
        refine(node(n - 1), b, (values[n], b));
    }
    best
}

/// Scans `x2` over every free arc; hold arcs contribute exactly zero.
pub fn check_feasibility<S: Scalar>(sol: &PiecewiseSolution<S>, cfg: &SolverConfig<S>) -> FeasibilityReport<S> {
    let horizon = sol.problem().horizon();
    let mut min_x2 = S::infinity();
    let mut argmin_t = S::zero();
    for arc in sol.arcs() {
        let (value, at) = match &arc.kind {
            ArcKind::Hold { .. } => (S::zero(), arc.t_start),
            ArcKind::Free(c) => {
                let share = (S::lit(cfg.grid_n as f64) * arc.duration() / horizon)
                    .ceil()
                    .to_usize()
                    .unwrap_or(cfg.grid_n);
                arc_min_x2(c, arc.t_start, arc.t_end, share.max(16))
            }
        };
        if value < min_x2 {
            min_x2 = value;
            argmin_t = at;
        }
    }
    FeasibilityReport {
        feasible: min_x2 >= -cfg.feas_tol,
        min_x2,
        argmin_t,
    }
}

/// Largest violations of the dynamics, boundary values and junction continuity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals<S> {
    pub dynamics: S,
    pub boundary: S,
    pub junction: S,
}

impl<S: Scalar> Residuals<S> {
    pub fn max(&self) -> S {
        self.dynamics.max(self.boundary).max(self.junction)
    }
}

const FD_STEP: f64 = 1e-5;
const FD_SAMPLES: usize = 64;

pub fn residuals<S: Scalar>(sol: &PiecewiseSolution<S>) -> Residuals<S> {
    let p = sol.problem();
    let arcs = sol.arcs();
    let h = S::lit(FD_STEP).max(S::epsilon().cbrt());
    let two = S::lit(2.0);

    let mut dynamics = S::zero();
    for arc in arcs {
        // stay two steps clear of the junctions, where u has a kink
        let lo = arc.t_start + two * h;
        let hi = arc.t_end - two * h;
        if !(hi > lo) {
            continue;
        }
        let step = (hi - lo) / S::lit((FD_SAMPLES - 1) as f64);
        for k in 0..FD_SAMPLES {
            let t = lo + step * S::lit(k as f64);
            let (plus, minus, mid) = (arc.eval(t + h), arc.eval(t - h), arc.eval(t));
            let dx1 = (plus.x1 - minus.x1) / (two * h);
            let dx2 = (plus.x2 - minus.x2) / (two * h);
            dynamics = dynamics
                .max((dx1 - mid.x2).abs())
                .max((dx2 + mid.x1 - mid.u).abs());
        }
    }

    let start = arcs[0].eval(S::zero());
    let end = arcs[arcs.len() - 1].eval(p.horizon());
    let boundary = max_abs([start.x1 - p.s(), start.x2, end.x1 - p.x_f(), end.x2]);

    let junction = arcs.windows(2).fold(S::zero(), |acc, pair| {
        let t = pair[0].t_end;
        let (l, r) = (pair[0].eval(t), pair[1].eval(t));
        acc.max(max_abs([l.x1 - r.x1, l.x2 - r.x2, l.u - r.u]))
    });

    Residuals {
        dynamics,
        boundary,
        junction,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BoundaryProblem, Mode};

    fn hold_solution() -> PiecewiseSolution<f64> {
        let p = BoundaryProblem::new(1.0, 1.0, 10.0).unwrap();
        PiecewiseSolution::new(p, vec![Arc::hold(1.0, 0.0, 10.0)], Mode::Hold).unwrap()
    }

    #[test]
    fn hold_costate() {
        let sol = hold_solution();
        let a = sol.costate(4.0).unwrap();
        assert_eq!(a.lambda2, -1.0);
        assert_eq!(a.mu, a.lambda1);
        assert_eq!(a.hamiltonian, 0.5);
    }

    #[test]
    fn free_arc_costate() {
        let c = ArcCoefficients::new(0.2, 0.0, 0.0, 0.25);
        let arcs = [Arc::free(c, 0.0, 1.0)];
        // u(0) = 2 c4 = 0.5
        let a = costate_on_arc(&arcs, 0, 0.0);
        assert_eq!(a.lambda2, -0.5);
        assert_eq!(a.mu, 0.0);
        assert_eq!(a.lambda1, 0.0);
    }

    #[test]
    fn hold_costate_propagates_from_left_free_arc() {
        let c = ArcCoefficients::new(0.0_f64, 0.0, 0.3, -0.2);
        let arcs = [Arc::free(c, 0.0, 1.0), Arc::hold(0.5, 1.0, 3.0)];
        let at_junction = costate_on_arc(&arcs, 1, 1.0);
        assert!((at_junction.lambda1 - c.lambda1(1.0)).abs() < 1e-15);
        let later = costate_on_arc(&arcs, 1, 2.0);
        assert!((later.lambda1 - (c.lambda1(1.0) - 0.5)).abs() < 1e-15);
        assert_eq!(later.mu, later.lambda1);
    }

    #[test]
    fn hold_residuals_vanish() {
        let r = residuals(&hold_solution());
        assert_eq!(r.boundary, 0.0);
        assert_eq!(r.junction, 0.0);
        assert!(r.dynamics <= 1e-8);
    }

    #[test]
    fn zero_trajectory_is_feasible() {
        let p = BoundaryProblem::new(0.0, 0.0, 3.0).unwrap();
        let sol = PiecewiseSolution::new(p, vec![Arc::hold(0.0, 0.0, 3.0)], Mode::Hold).unwrap();
        let f = check_feasibility(&sol, &SolverConfig::default());
        assert!(f.feasible);
        assert_eq!(f.min_x2, 0.0);
    }

    #[test]
    fn arc_minimum_is_refined() {
        // x2 = -sin t on the (1,0,0,0) arc; minimum -1 at pi/2.
        let c = ArcCoefficients::new(1.0_f64, 0.0, 0.0, 0.0);
        let (v, t) = arc_min_x2(&c, 0.0, 3.0, 7);
        assert!((v + 1.0).abs() < 1e-14);
        assert!((t - std::f64::consts::FRAC_PI_2).abs() < 1e-6);
    }
}
