//! Rest-to-rest free arcs and the junction-time scans built on them.

use crate::model::{arc_min_x2, ArcCoefficients};
use crate::numerics::{find_root, linear_solve, DenseMatrix, NumericsError};
use crate::{Scalar, SolverConfig};

/// Free arc leaving `(a, 0)` at `t = 0` and reaching `(b, 0)` at `t = d`.
///
/// Uses `c1 = a`, `c3 = -c2` and the 2×2 boundary matrix for `(c2, c4)`.
pub(crate) fn rest_to_rest<S: Scalar>(a: S, b: S, d: S) -> Result<ArcCoefficients<S>, NumericsError> {
    let (s, c) = d.sin_cos();
    let m = DenseMatrix::from_rows(&[[s - d * c, d * s], [d * s, d * c + s]])?;
    let sol = linear_solve(&m, &[b - a * c, a * s])?;
    Ok(ArcCoefficients::new(a, sol[0], -sol[0], sol[1]))
}

fn position_row<S: Scalar>(t: S) -> [S; 4] {
    let (s, c) = t.sin_cos();
    [c, s, t * c, t * s]
}

fn velocity_row<S: Scalar>(t: S) -> [S; 4] {
    let (s, c) = t.sin_cos();
    [-s, c, c - t * s, s + t * c]
}

/// Free arc through `(a, 0)` at `t_start` and `(b, 0)` at `t_end`, solved as
/// the 4×4 absolute-time system.
pub(crate) fn arc_between<S: Scalar>(
    a: S,
    t_start: S,
    b: S,
    t_end: S,
) -> Result<ArcCoefficients<S>, NumericsError> {
    let m = DenseMatrix::from_rows(&[
        position_row(t_start),
        velocity_row(t_start),
        position_row(t_end),
        velocity_row(t_end),
    ])?;
    let c = linear_solve(&m, &[a, S::zero(), b, S::zero()])?;
    Ok(ArcCoefficients::new(c[0], c[1], c[2], c[3]))
}

/// Sign changes of `residual` on `samples + 1` equispaced points of
/// `[lo, hi]`, each refined to `cfg.junction_tol`. Points where the residual
/// is undefined are skipped, and refined points whose residual is not small
/// (poles, kinks) are discarded.
pub(crate) fn scan_roots<S, F>(residual: F, lo: S, hi: S, cfg: &SolverConfig<S>) -> Vec<S>
where
    S: Scalar,
    F: Fn(S) -> Option<S>,
{
    let n = cfg.junction_scan;
    let node = |k: usize| if k == n { hi } else { lo + (hi - lo) * S::lit(k as f64) / S::lit(n as f64) };
    let values: Vec<Option<S>> = (0..=n).map(|k| residual(node(k)).filter(|v| v.is_finite())).collect();
    let as_fn = |t: S| residual(t).unwrap_or_else(S::nan);

    let mut roots: Vec<S> = Vec::new();
    let mut push = |t: S| {
        if roots.last().is_none_or(|&last| t - last > cfg.junction_tol) {
            roots.push(t);
        }
    };
    for k in 0..n {
        let (Some(fa), Some(fb)) = (values[k], values[k + 1]) else {
            continue;
        };
        if fa == S::zero() {
            push(node(k));
            continue;
        }
        if fa.signum() == fb.signum() {
            continue;
        }
        if let Ok(t) = find_root(as_fn, node(k), node(k + 1), cfg.junction_tol, cfg.max_iter) {
            let scale = S::one() + fa.abs().min(fb.abs());
            if as_fn(t).abs() <= S::lit(1e-6) * scale {
                push(t);
            }
        }
    }
    if let Some(last) = values[n] {
        if last == S::zero() {
            push(hi);
        }
    }
    roots
}

/// Whether a free arc keeps `x2 >= -feas_tol` over `[a, b]`.
pub(crate) fn arc_is_forward<S: Scalar>(c: &ArcCoefficients<S>, a: S, b: S, cfg: &SolverConfig<S>) -> bool {
    arc_min_x2(c, a, b, 256).0 >= -cfg.feas_tol
}

/// Entry arc of a move-then-hold transfer: `(a, 0)` at 0 to `(b, 0)` at `d`
/// with `u(d) = b`. Returns admissible durations `d` in `(0, horizon]`,
/// their arcs and energies.
pub(crate) fn entry_arcs<S: Scalar>(a: S, b: S, horizon: S, cfg: &SolverConfig<S>) -> Vec<(S, ArcCoefficients<S>, S)> {
    let residual = |d: S| rest_to_rest(a, b, d).ok().map(|c| c.eval(d).u - b);
    let lo = horizon / S::lit(cfg.junction_scan as f64);
    scan_roots(residual, lo, horizon, cfg)
        .into_iter()
        .filter_map(|d| {
            let c = rest_to_rest(a, b, d).ok()?;
            arc_is_forward(&c, S::zero(), d, cfg).then(|| (d, c, c.energy(S::zero(), d)))
        })
        .collect()
}

/// Exit arc of a hold-then-move transfer: leaves `(a, 0)` at `tau` with
/// `u(tau) = a` and reaches `(b, 0)` at `horizon`. Returns admissible
/// departure times `tau` in `[0, horizon)`, their arcs and energies.
pub(crate) fn exit_arcs<S: Scalar>(a: S, b: S, horizon: S, cfg: &SolverConfig<S>) -> Vec<(S, ArcCoefficients<S>, S)> {
    let residual = |tau: S| arc_between(a, tau, b, horizon).ok().map(|c| c.eval(tau).u - a);
    let hi = horizon - horizon / S::lit(cfg.junction_scan as f64);
    scan_roots(residual, S::zero(), hi, cfg)
        .into_iter()
        .filter_map(|tau| {
            let c = arc_between(a, tau, b, horizon).ok()?;
            arc_is_forward(&c, tau, horizon, cfg).then(|| (tau, c, c.energy(tau, horizon)))
        })
        .collect()
}
