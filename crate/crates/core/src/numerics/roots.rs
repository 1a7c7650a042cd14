use super::NumericsError;
use crate::Scalar;

/// Finds a root of `f` inside the sign-changing bracket `[a, b]`.
///
/// Secant steps are taken while they shrink the bracket by at least half;
/// otherwise the next step bisects. Returns once the bracket is narrower than
/// `tol`, picking the endpoint with the smaller residual.
pub fn find_root<S, F>(mut f: F, a: S, b: S, tol: S, max_iter: usize) -> Result<S, NumericsError>
where
    S: Scalar,
    F: FnMut(S) -> S,
{
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut flo = f(lo);
    let mut fhi = f(hi);
    let invalid = || NumericsError::InvalidBracket {
        a: lo.to_f64_lossy(),
        b: hi.to_f64_lossy(),
        fa: flo.to_f64_lossy(),
        fb: fhi.to_f64_lossy(),
    };
    if !flo.is_finite() || !fhi.is_finite() {
        return Err(invalid());
    }
    if flo == S::zero() {
        return Ok(lo);
    }
    if fhi == S::zero() {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(invalid());
    }

    let half = S::lit(0.5);
    let mut bisect_next = false;
    for _ in 0..max_iter {
        let width = hi - lo;
        if width <= tol {
            return Ok(if flo.abs() <= fhi.abs() { lo } else { hi });
        }
        let mid = lo + half * width;
        let x = if bisect_next {
            mid
        } else {
            let secant = hi - fhi * width / (fhi - flo);
            if secant > lo && secant < hi {
                secant
            } else {
                mid
            }
        };
        let fx = f(x);
        if fx == S::zero() {
            return Ok(x);
        }
        if !fx.is_finite() {
            return Err(NumericsError::InvalidBracket {
                a: lo.to_f64_lossy(),
                b: hi.to_f64_lossy(),
                fa: flo.to_f64_lossy(),
                fb: fhi.to_f64_lossy(),
            });
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        bisect_next = hi - lo > half * width;
    }
    Err(NumericsError::MaxIterations(max_iter))
}
