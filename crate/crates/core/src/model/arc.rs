use crate::Scalar;

/// Coefficients `(c1, c2, c3, c4)` of one unconstrained arc, in absolute time.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ArcCoefficients<S> {
    pub c1: S,
    pub c2: S,
    pub c3: S,
    pub c4: S,
}

/// Position, velocity and control at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ArcState<S> {
    pub x1: S,
    pub x2: S,
    pub u: S,
}

impl<S: Scalar> ArcCoefficients<S> {
    pub fn new(c1: S, c2: S, c3: S, c4: S) -> Self {
        Self { c1, c2, c3, c4 }
    }

    pub fn is_finite(&self) -> bool {
        self.c1.is_finite() && self.c2.is_finite() && self.c3.is_finite() && self.c4.is_finite()
    }

    pub fn eval(&self, t: S) -> ArcState<S> {
        let (s, c) = t.sin_cos();
        let Self { c1, c2, c3, c4 } = *self;
        ArcState {
            x1: c1 * c + c2 * s + c3 * t * c + c4 * t * s,
            x2: (c4 - c1) * s + (c2 + c3) * c - c3 * t * s + c4 * t * c,
            u: S::lit(2.0) * (c4 * c - c3 * s),
        }
    }

    /// Costate `lambda1 = -lambda2'` on a free arc.
    pub fn lambda1(&self, t: S) -> S {
        let (s, c) = t.sin_cos();
        -S::lit(2.0) * (self.c3 * c + self.c4 * s)
    }

    /// Coefficients of `t ↦ self(t - t0)`, i.e. the same arc started at `t0`.
    pub fn shifted(&self, t0: S) -> Self {
        let (s0, c0) = t0.sin_cos();
        let p = self.c1 - self.c3 * t0;
        let q = self.c2 - self.c4 * t0;
        Self {
            c1: p * c0 - q * s0,
            c2: p * s0 + q * c0,
            c3: self.c3 * c0 - self.c4 * s0,
            c4: self.c3 * s0 + self.c4 * c0,
        }
    }

    /// Exact `1/2 ∫_a^b u² dt`.
    pub fn energy(&self, a: S, b: S) -> S {
        let two = S::lit(2.0);
        let (c3, c4) = (self.c3, self.c4);
        let (s2b, c2b) = (two * b).sin_cos();
        let (s2a, c2a) = (two * a).sin_cos();
        let antiderivative_gap = two * (c3 * c3 + c4 * c4) * (b - a)
            + (c4 * c4 - c3 * c3) * (s2b - s2a)
            + two * c3 * c4 * (c2b - c2a);
        antiderivative_gap / two
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArcKind<S> {
    Free(ArcCoefficients<S>),
    /// State parked at `(position, 0)` with `u = position`.
    Hold { position: S },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc<S> {
    pub kind: ArcKind<S>,
    pub t_start: S,
    pub t_end: S,
}

impl<S: Scalar> Arc<S> {
    pub fn free(coeffs: ArcCoefficients<S>, t_start: S, t_end: S) -> Self {
        Self {
            kind: ArcKind::Free(coeffs),
            t_start,
            t_end,
        }
    }

    pub fn hold(position: S, t_start: S, t_end: S) -> Self {
        Self {
            kind: ArcKind::Hold { position },
            t_start,
            t_end,
        }
    }

    pub fn is_hold(&self) -> bool {
        matches!(self.kind, ArcKind::Hold { .. })
    }

    pub fn duration(&self) -> S {
        self.t_end - self.t_start
    }

    pub fn is_finite(&self) -> bool {
        let kind_ok = match &self.kind {
            ArcKind::Free(c) => c.is_finite(),
            ArcKind::Hold { position } => position.is_finite(),
        };
        kind_ok && self.t_start.is_finite() && self.t_end.is_finite()
    }

    /// Evaluates the arc formula at `t` without checking the span.
    pub fn eval(&self, t: S) -> ArcState<S> {
        match &self.kind {
            ArcKind::Free(c) => c.eval(t),
            ArcKind::Hold { position } => ArcState {
                x1: *position,
                x2: S::zero(),
                u: *position,
            },
        }
    }

    pub fn energy(&self) -> S {
        match &self.kind {
            ArcKind::Free(c) => c.energy(self.t_start, self.t_end),
            ArcKind::Hold { position } => S::lit(0.5) * *position * *position * self.duration(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quadrature;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn closed_form_examples() {
        let st = ArcCoefficients::new(1.0, 0.0, 0.0, 0.0).eval(0.0);
        assert_eq!((st.x1, st.x2, st.u), (1.0, 0.0, 0.0));

        let st = ArcCoefficients::new(0.0, 1.0, 0.0, 0.0).eval(FRAC_PI_2);
        assert!(close(st.x1, 1.0, 1e-15) && close(st.x2, 0.0, 1e-15) && close(st.u, 0.0, 1e-15));

        // x1 = t cos t, x2 = cos t - t sin t, u = -2 sin t at t = pi/2.
        let st = ArcCoefficients::new(0.0, 0.0, 1.0, 0.0).eval(FRAC_PI_2);
        assert!(close(st.x1, 0.0, 1e-15));
        assert!(close(st.x2, -FRAC_PI_2, 1e-15));
        assert!(close(st.u, -2.0, 1e-15));
    }

    #[test]
    fn lambda1_at_origin() {
        let c = ArcCoefficients::new(0.0, 0.0, 0.7, -0.4);
        assert!(close(c.lambda1(0.0), -1.4, 1e-15));
    }

    #[test]
    fn energy_matches_quadrature() {
        let c = ArcCoefficients::new(0.3, -1.2, 0.8, 2.5);
        let exact = c.energy(0.4, 7.3);
        let quad = 0.5 * quadrature(|t: f64| c.eval(t).u.powi(2), 0.4, 7.3, 64);
        assert!(close(exact, quad, 1e-11), "{exact} vs {quad}");
    }

    #[test]
    fn hold_arc() {
        let a = Arc::hold(1.5, 2.0, 4.0);
        let st = a.eval(3.0);
        assert_eq!((st.x1, st.x2, st.u), (1.5, 0.0, 1.5));
        assert_eq!(a.energy(), 0.5 * 1.5 * 1.5 * 2.0);
    }

    #[test]
    fn f32_evaluation() {
        let c = ArcCoefficients::<f32>::new(0.0, 0.0, 1.0, 0.0);
        let st = c.eval(std::f32::consts::FRAC_PI_2);
        assert!((st.u + 2.0).abs() < 1e-6);
    }

    fn coeffs() -> impl Strategy<Value = ArcCoefficients<f64>> {
        (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64)
            .prop_map(|(a, b, c, d)| ArcCoefficients::new(a, b, c, d))
    }

    proptest! {
        #[test]
        fn family_solves_dynamics(c in coeffs(), t in -12.0..12.0f64) {
            let h = 1e-5;
            let (p, m, mid) = (c.eval(t + h), c.eval(t - h), c.eval(t));
            let dx1 = (p.x1 - m.x1) / (2.0 * h);
            let dx2 = (p.x2 - m.x2) / (2.0 * h);
            prop_assert!((dx1 - mid.x2).abs() <= 1e-6);
            prop_assert!((dx2 + mid.x1 - mid.u).abs() <= 1e-6);
            // lambda2 = -u and lambda2' = -lambda1 on a free arc.
            let dl2 = -(p.u - m.u) / (2.0 * h);
            prop_assert!((dl2 + c.lambda1(t)).abs() <= 1e-6);
        }

        #[test]
        fn shift_reproduces_local_arc(c in coeffs(), t0 in -6.0..6.0f64, sigma in -3.0..3.0f64) {
            let shifted = c.shifted(t0).eval(t0 + sigma);
            let local = c.eval(sigma);
            prop_assert!((shifted.x1 - local.x1).abs() <= 1e-9);
            prop_assert!((shifted.x2 - local.x2).abs() <= 1e-9);
            prop_assert!((shifted.u - local.u).abs() <= 1e-9);
        }

        #[test]
        fn energy_is_additive(c in coeffs(), a in 0.0..5.0f64, w in 0.1..5.0f64, f in 0.05..0.95f64) {
            let b = a + w;
            let m = a + f * w;
            let whole = c.energy(a, b);
            prop_assert!(whole >= 0.0);
            prop_assert!((whole - c.energy(a, m) - c.energy(m, b)).abs() <= 1e-9 * (1.0 + whole));
        }
    }
}
