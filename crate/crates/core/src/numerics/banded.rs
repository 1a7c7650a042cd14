use super::NumericsError;
use crate::Scalar;

/// Square band matrix with `lower` sub-diagonals and `upper` super-diagonals,
/// stored with room for the fill-in produced by partial pivoting.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix<S> {
    n: usize,
    lower: usize,
    upper: usize,
    width: usize,
    data: Vec<S>,
}

impl<S: Scalar> BandMatrix<S> {
    pub fn zeros(n: usize, lower: usize, upper: usize) -> Self {
        let width = 2 * lower + upper + 1;
        Self {
            n,
            lower,
            upper,
            width,
            data: vec![S::zero(); n * width],
        }
    }

    /// Builds the matrix from `(row, col, value)` triplets, summing duplicates.
    /// Bandwidths are taken from the triplets themselves.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, S)]) -> Result<Self, NumericsError> {
        let mut lower = 0;
        let mut upper = 0;
        for &(r, c, _) in triplets {
            if r >= n || c >= n {
                return Err(NumericsError::Dimension(format!("entry ({r}, {c}) outside a {n}x{n} matrix")));
            }
            lower = lower.max(r.saturating_sub(c));
            upper = upper.max(c.saturating_sub(r));
        }
        let mut m = Self::zeros(n, lower, upper);
        for &(r, c, v) in triplets {
            let k = m.slot(r, c);
            m.data[k] = m.data[k] + v;
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.lower, self.upper)
    }

    fn in_storage(&self, r: usize, c: usize) -> bool {
        c + self.lower >= r && c <= r + self.lower + self.upper
    }

    fn slot(&self, r: usize, c: usize) -> usize {
        r * self.width + (c + self.lower - r)
    }

    pub fn get(&self, r: usize, c: usize) -> S {
        if r < self.n && c < self.n && self.in_storage(r, c) {
            self.data[self.slot(r, c)]
        } else {
            S::zero()
        }
    }

    pub fn mul_vec(&self, x: &[S]) -> Vec<S> {
        (0..self.n)
            .map(|r| {
                let lo = r.saturating_sub(self.lower);
                let hi = (r + self.lower + self.upper).min(self.n - 1);
                (lo..=hi).fold(S::zero(), |acc, c| acc + self.get(r, c) * x[c])
            })
            .collect()
    }

    /// Solves `A x = rhs` by LU factorization with partial pivoting,
    /// consuming the matrix.
    pub fn solve(mut self, rhs: &[S]) -> Result<Vec<S>, NumericsError> {
        let n = self.n;
        if rhs.len() != n {
            return Err(NumericsError::Dimension(format!("rhs has {} entries, matrix is {n}x{n}", rhs.len())));
        }
        let mut b = rhs.to_vec();
        let scale = self.data.iter().fold(S::zero(), |acc, v| acc.max(v.abs()));
        let tiny = S::epsilon() * scale.max(S::min_positive_value());
        let reach = self.lower + self.upper;

        for k in 0..n {
            let last_row = (k + self.lower).min(n - 1);
            let last_col = (k + reach).min(n - 1);
            let mut p = k;
            for r in k + 1..=last_row {
                if self.get(r, k).abs() > self.get(p, k).abs() {
                    p = r;
                }
            }
            let pivot = self.get(p, k);
            if !(pivot.abs() > tiny) {
                return Err(NumericsError::SingularMatrix {
                    column: k,
                    pivot: pivot.to_f64_lossy(),
                });
            }
            if p != k {
                for c in k..=last_col {
                    let (a, b2) = (self.slot(k, c), self.slot(p, c));
                    self.data.swap(a, b2);
                }
                b.swap(k, p);
            }
            for r in k + 1..=last_row {
                let f = self.get(r, k) / pivot;
                if f == S::zero() {
                    continue;
                }
                let rk = self.slot(r, k);
                self.data[rk] = S::zero();
                for c in k + 1..=last_col {
                    let (rc, kc) = (self.slot(r, c), self.slot(k, c));
                    self.data[rc] = self.data[rc] - f * self.data[kc];
                }
                b[r] = b[r] - f * b[k];
            }
        }

        let mut x = vec![S::zero(); n];
        for k in (0..n).rev() {
            let last_col = (k + reach).min(n - 1);
            let mut acc = b[k];
            for c in k + 1..=last_col {
                acc = acc - self.data[self.slot(k, c)] * x[c];
            }
            x[k] = acc / self.data[self.slot(k, k)];
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{linear_solve, DenseMatrix};
    use proptest::prelude::*;

    #[test]
    fn tridiagonal_solve() {
        let n = 6;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0_f64));
            if i > 0 {
                t.push((i, i - 1, -1.0));
                t.push((i - 1, i, -1.0));
            }
        }
        let m = BandMatrix::from_triplets(n, &t).unwrap();
        assert_eq!(m.bandwidths(), (1, 1));
        let x_true: Vec<f64> = (0..n).map(|i| i as f64 - 2.5).collect();
        let b = m.mul_vec(&x_true);
        let x = m.solve(&b).unwrap();
        for (a, e) in x.iter().zip(&x_true) {
            assert!((a - e).abs() < 1e-13);
        }
    }

    #[test]
    fn zero_leading_entry_needs_pivoting() {
        let t = [(0, 1, 1.0_f64), (1, 0, 1.0), (1, 1, 1.0), (2, 1, 3.0), (2, 2, 1.0)];
        let m = BandMatrix::from_triplets(3, &t).unwrap();
        let x = m.clone().solve(&[2.0, 3.0, 7.0]).unwrap();
        for (a, e) in m.mul_vec(&x).iter().zip([2.0, 3.0, 7.0]) {
            assert!((a - e).abs() < 1e-14);
        }
    }

    #[test]
    fn singular_band_is_reported() {
        let t = [(0, 0, 1.0_f64), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 1.0)];
        let m = BandMatrix::from_triplets(2, &t).unwrap();
        assert!(matches!(m.solve(&[1.0, 1.0]), Err(NumericsError::SingularMatrix { .. })));
    }

    #[test]
    fn out_of_range_triplet() {
        assert!(BandMatrix::<f64>::from_triplets(2, &[(2, 0, 1.0)]).is_err());
    }

    proptest! {
        #[test]
        fn agrees_with_dense_solve(
            entries in proptest::collection::vec(-1.0_f64..1.0, 8 * 8),
            rhs in proptest::collection::vec(-1.0_f64..1.0, 8),
            lower in 0usize..3,
            upper in 0usize..3,
        ) {
            let n = 8;
            let mut t = Vec::new();
            let mut rows = vec![vec![0.0; n]; n];
            for r in 0..n {
                for c in 0..n {
                    if c + lower >= r && c <= r + upper {
                        let v = entries[r * n + c] + if r == c { 4.0 } else { 0.0 };
                        t.push((r, c, v));
                        rows[r][c] = v;
                    }
                }
            }
            let band = BandMatrix::from_triplets(n, &t).unwrap();
            let dense = DenseMatrix::from_rows(&rows).unwrap();
            let x = band.solve(&rhs).unwrap();
            let y = linear_solve(&dense, &rhs).unwrap();
            for (a, b) in x.iter().zip(&y) {
                prop_assert!((a - b).abs() < 1e-10);
            }
        }
    }
}
