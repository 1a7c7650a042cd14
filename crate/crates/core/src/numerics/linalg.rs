use super::NumericsError;
use crate::Scalar;

/// Largest system handled by [`linear_solve`].
pub const MAX_DENSE_DIM: usize = 8;

/// Row-major square-or-rectangular matrix for the tiny boundary systems.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> DenseMatrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    /// Builds a matrix from row slices; all rows must have equal length.
    pub fn from_rows<R: AsRef<[S]>>(rows: &[R]) -> Result<Self, NumericsError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(NumericsError::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, x: &[S]) -> Vec<S> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(S::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

impl<S> std::ops::Index<(usize, usize)> for DenseMatrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for DenseMatrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
///
/// Fails with [`NumericsError::SingularMatrix`] when a pivot falls below `1e-12`.
pub fn linear_solve<S: Scalar>(a: &DenseMatrix<S>, b: &[S]) -> Result<Vec<S>, NumericsError> {
    let n = a.rows();
    if a.cols() != n || b.len() != n {
        return Err(NumericsError::Dimension(format!(
            "{}x{} system with rhs of length {}",
            a.rows(),
            a.cols(),
            b.len()
        )));
    }
    if n > MAX_DENSE_DIM {
        return Err(NumericsError::Dimension(format!(
            "{n}x{n} exceeds dense limit {MAX_DENSE_DIM}"
        )));
    }
    let mut m = a.clone();
    let mut x = b.to_vec();
    let eps = S::lit(1e-12);

    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| {
                m[(i, k)]
                    .abs()
                    .partial_cmp(&m[(j, k)].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(k);
        let pivot = m[(p, k)];
        if !(pivot.abs() >= eps) {
            return Err(NumericsError::SingularMatrix {
                column: k,
                pivot: pivot.to_f64_lossy(),
            });
        }
        if p != k {
            for j in 0..n {
                let tmp = m[(k, j)];
                m[(k, j)] = m[(p, j)];
                m[(p, j)] = tmp;
            }
            x.swap(k, p);
        }
        for i in k + 1..n {
            let factor = m[(i, k)] / pivot;
            if factor == S::zero() {
                continue;
            }
            for j in k..n {
                let mkj = m[(k, j)];
                m[(i, j)] = m[(i, j)] - factor * mkj;
            }
            x[i] = x[i] - factor * x[k];
        }
    }

    for k in (0..n).rev() {
        let mut acc = x[k];
        for j in k + 1..n {
            acc = acc - m[(k, j)] * x[j];
        }
        x[k] = acc / m[(k, k)];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_and_permutation() {
        let i2 = DenseMatrix::<f64>::identity(2);
        assert_eq!(linear_solve(&i2, &[3.0, 4.0]).unwrap(), vec![3.0, 4.0]);
        let p = DenseMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert_eq!(linear_solve(&p, &[1.0, 2.0]).unwrap(), vec![2.0, 1.0]);
    }

    #[test]
    fn boundary_matrix_at_unit_horizon() {
        let t = 1.0_f64;
        let (s, c) = t.sin_cos();
        let m = DenseMatrix::from_rows(&[[s - t * c, t * s], [t * s, t * c + s]]).unwrap();
        let x = linear_solve(&m, &[2.0, 0.0]).unwrap();
        assert!((x[0] + 9.4665).abs() < 2e-4, "{x:?}");
        assert!((x[1] - 5.7651).abs() < 2e-4, "{x:?}");
    }

    #[test]
    fn singular_is_reported() {
        let m = DenseMatrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap();
        assert!(matches!(
            linear_solve(&m, &[1.0, 1.0]),
            Err(NumericsError::SingularMatrix { column: 1, .. })
        ));
    }

    #[test]
    fn rejects_bad_shapes() {
        let m = DenseMatrix::<f64>::identity(9);
        assert!(matches!(
            linear_solve(&m, &[0.0; 9]),
            Err(NumericsError::Dimension(_))
        ));
        let m = DenseMatrix::<f64>::identity(2);
        assert!(linear_solve(&m, &[0.0; 3]).is_err());
        assert!(DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![1.0]]).is_err());
    }

    proptest! {
        // Diagonally dominant matrices keep the condition number well below 1e6.
        #[test]
        fn round_trip_residual(
            n in 1usize..=8,
            entries in prop::collection::vec(-1.0f64..1.0, 64),
            rhs in prop::collection::vec(-10.0f64..10.0, 8),
        ) {
            let mut a = DenseMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    a[(i, j)] = entries[i * 8 + j];
                }
                a[(i, i)] = a[(i, i)] + if entries[i * 8 + i] >= 0.0 { n as f64 } else { -(n as f64) };
            }
            let b = &rhs[..n];
            let x = linear_solve(&a, b).unwrap();
            let ax = a.mul_vec(&x);
            let res = ax.iter().zip(b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
            prop_assert!(res <= 1e-9, "residual {res}");
        }
    }
}
