use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar the solver is generic over: `f32` or `f64`.
///
/// Default tolerances are tuned for `f64`; with `f32` they should be
/// loosened through [`SolverConfig`](crate::SolverConfig).
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Panics only if the value is not representable,
    /// which cannot happen for the finite literals used in this crate.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Maximum of absolute values, ignoring an empty input.
pub(crate) fn max_abs<S: Scalar>(values: impl IntoIterator<Item = S>) -> S {
    values
        .into_iter()
        .fold(S::zero(), |acc, v| acc.max(v.abs()))
}
