//! Small numerical kernels: dense and banded pivoted solves, bracketed root finding,
//! golden-section minimization, Gauss-Legendre quadrature and `sinc`.

mod banded;
mod linalg;
mod minimize;
mod quadrature;
mod roots;

pub use banded::BandMatrix;
pub use linalg::{linear_solve, DenseMatrix, MAX_DENSE_DIM};
pub use minimize::{golden_section, minimize_scalar, Minimum};
pub use quadrature::quadrature;
pub use roots::find_root;

use crate::Scalar;

/// Default iteration cap shared by the iterative kernels.
pub const DEFAULT_MAX_ITER: usize = 200;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericsError {
    #[error("singular matrix: pivot {pivot:e} at column {column}")]
    SingularMatrix { column: usize, pivot: f64 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid bracket [{a}, {b}]: f(a) = {fa:e}, f(b) = {fb:e}")]
    InvalidBracket { a: f64, b: f64, fa: f64, fb: f64 },
    #[error("iteration cap of {0} reached")]
    MaxIterations(usize),
    #[error("no interior minimum found on [{a}, {b}]")]
    NoInteriorMinimum { a: f64, b: f64 },
}

/// `sin(x) / x`, equal to 1 at the origin.
pub fn sinc<S: Scalar>(x: S) -> S {
    if x.abs() < S::lit(1e-4) {
        let x2 = x * x;
        S::one() - x2 / S::lit(6.0) + x2 * x2 / S::lit(120.0)
    } else {
        x.sin() / x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sinc_values() {
        assert_eq!(sinc(0.0_f64), 1.0);
        assert!(sinc(PI).abs() < 1e-15);
        assert!((sinc(PI / 2.0) - 2.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn sinc_is_continuous_at_switch() {
        for x in [1e-4_f64, -1e-4] {
            let below = sinc(x * (1.0 - 1e-12));
            let direct = x.sin() / x;
            assert!((below - direct).abs() <= 1e-14, "{below} vs {direct}");
        }
    }

    #[test]
    fn sinc_f32() {
        assert_eq!(sinc(0.0_f32), 1.0);
        assert!((sinc(1.0_f32) - 1.0_f32.sin()).abs() < 1e-7);
    }
}
