use crate::Scalar;

const GL8_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL8_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Composite 8-point Gauss-Legendre rule over `n` equal panels of `[a, b]`.
pub fn quadrature<S, F>(mut f: F, a: S, b: S, n: usize) -> S
where
    S: Scalar,
    F: FnMut(S) -> S,
{
    let n = n.max(1);
    let width = (b - a) / S::lit(n as f64);
    let half = width / S::lit(2.0);
    let mut total = S::zero();
    for panel in 0..n {
        let center = a + width * S::lit(panel as f64) + half;
        let mut acc = S::zero();
        for (&node, &weight) in GL8_NODES.iter().zip(&GL8_WEIGHTS) {
            let dx = half * S::lit(node);
            acc = acc + S::lit(weight) * (f(center - dx) + f(center + dx));
        }
        total = total + acc * half;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_and_sine() {
        assert!((quadrature(|_| 1.0_f64, 0.0, 1.0, 2) - 1.0).abs() < 1e-15);
        assert!((quadrature(f64::sin, 0.0, PI, 4) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn exact_for_degree_fifteen() {
        let v = quadrature(|x: f64| x.powi(15), 0.0, 1.0, 1);
        assert!((v - 1.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn empty_interval() {
        assert_eq!(quadrature(|x: f64| x, 2.0, 2.0, 3), 0.0);
    }
}
