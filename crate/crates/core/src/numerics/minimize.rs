use super::{NumericsError, DEFAULT_MAX_ITER};
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum<S> {
    pub x: S,
    pub value: S,
}

const SCAN_POINTS: usize = 32;

/// Golden-section search on `[a, b]` until the bracket is narrower than `tol`.
///
/// Assumes a single local minimum in the bracket. Non-finite values are
/// treated as `+inf`, so callers may return `inf` for inadmissible points.
pub fn golden_section<S, F>(
    mut f: F,
    a: S,
    b: S,
    tol: S,
    max_iter: usize,
) -> Result<Minimum<S>, NumericsError>
where
    S: Scalar,
    F: FnMut(S) -> S,
{
    let mut eval = |x: S| {
        let v = f(x);
        if v.is_nan() {
            S::infinity()
        } else {
            v
        }
    };
    let inv_phi = (S::lit(5.0).sqrt() - S::one()) / S::lit(2.0);
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);
    for _ in 0..max_iter {
        if hi - lo <= tol {
            return Ok(if f1 <= f2 {
                Minimum { x: x1, value: f1 }
            } else {
                Minimum { x: x2, value: f2 }
            });
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = eval(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = eval(x2);
        }
    }
    Err(NumericsError::MaxIterations(max_iter))
}

/// Minimizes `f` on `[a, b]`: a coarse scan locates the lowest sample, which
/// must be interior, then golden-section refines between its neighbours.
pub fn minimize_scalar<S, F>(mut f: F, a: S, b: S, tol: S) -> Result<Minimum<S>, NumericsError>
where
    S: Scalar,
    F: FnMut(S) -> S,
{
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let step = (hi - lo) / S::lit(SCAN_POINTS as f64);
    let node = |k: usize| lo + step * S::lit(k as f64);
    let mut best = (0, S::infinity());
    for k in 0..=SCAN_POINTS {
        let v = f(node(k));
        if v < best.1 {
            best = (k, v);
        }
    }
    if best.0 == 0 || best.0 == SCAN_POINTS || !best.1.is_finite() {
        return Err(NumericsError::NoInteriorMinimum {
            a: lo.to_f64_lossy(),
            b: hi.to_f64_lossy(),
        });
    }
    golden_section(f, node(best.0 - 1), node(best.0 + 1), tol, DEFAULT_MAX_ITER)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn parabola() {
        let m = minimize_scalar(|x: f64| (x - 1.0).powi(2), 0.0, 3.0, 1e-10).unwrap();
        assert!((m.x - 1.0).abs() < 1e-8);
        assert!(m.value < 1e-16);
    }

    #[test]
    fn cosine_minimum_at_pi() {
        let m = minimize_scalar(f64::cos, 2.0, 4.0, 1e-10).unwrap();
        assert!((m.x - PI).abs() < 1e-7);
        assert!((m.value + 1.0).abs() < 1e-14);
    }

    #[test]
    fn monotone_function_has_no_interior_minimum() {
        let err = minimize_scalar(|x: f64| x, 0.0, 1.0, 1e-10).unwrap_err();
        assert!(matches!(err, NumericsError::NoInteriorMinimum { .. }));
    }

    #[test]
    fn infinite_regions_are_skipped() {
        let f = |x: f64| if x < 0.5 { f64::INFINITY } else { (x - 0.7).powi(2) };
        let m = minimize_scalar(f, 0.0, 1.0, 1e-10).unwrap();
        assert!((m.x - 0.7).abs() < 1e-7);
    }

    #[test]
    fn golden_cap() {
        let err = golden_section(|x: f64| x * x, -1.0, 1.0, 0.0, 10).unwrap_err();
        assert_eq!(err, NumericsError::MaxIterations(10));
    }

    #[test]
    fn deterministic() {
        let f = |x: f64| (x - 0.3).powi(4) + x.sin();
        let a = minimize_scalar(f, -2.0, 2.0, 1e-12).unwrap();
        let b = minimize_scalar(f, -2.0, 2.0, 1e-12).unwrap();
        assert_eq!(a.x.to_bits(), b.x.to_bits());
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }
}
