//! Dense square matrices and the elementary Lie-algebra bases.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{domain, Result};

/// Square real matrix with finite entries. Indices are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix(DMatrix<f64>);

/// Square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl RealMatrix {
    pub fn from_dmatrix(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() == 0 || m.nrows() != m.ncols() {
            return domain(format!(
                "expected a non-empty square matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            ));
        }
        if m.iter().any(|v| !v.is_finite()) {
            return domain("matrix entries must be finite");
        }
        Ok(RealMatrix(m))
    }

    /// Builds an `n x n` matrix from row-major entries.
    pub fn from_row_major(n: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != n * n {
            return domain(format!("expected {} entries, got {}", n * n, entries.len()));
        }
        Self::from_dmatrix(DMatrix::from_row_slice(n, n, entries))
    }

    pub fn identity(n: usize) -> Self {
        RealMatrix(DMatrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        RealMatrix(DMatrix::zeros(n, n))
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        Self::from_dmatrix(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(entries)))
    }

    /// `E_ij`: one at `(i, j)`, zero elsewhere.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = DMatrix::zeros(n, n);
        m[(i, j)] = 1.0;
        RealMatrix(m)
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn diag(&self) -> Vec<f64> {
        self.0.diagonal().iter().copied().collect()
    }

    pub fn row_major(&self) -> Vec<f64> {
        self.0.transpose().as_slice().to_vec()
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn mul(&self, other: &RealMatrix) -> RealMatrix {
        RealMatrix(&self.0 * &other.0)
    }

    pub fn scale(&self, c: f64) -> RealMatrix {
        RealMatrix(&self.0 * c)
    }

    pub fn transpose(&self) -> RealMatrix {
        RealMatrix(self.0.transpose())
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    pub fn inverse(&self) -> Result<RealMatrix> {
        match self.0.clone().try_inverse() {
            Some(m) => Ok(RealMatrix(m)),
            None => domain("matrix is singular"),
        }
    }

    /// Largest `|A_ij - B_ij|`.
    pub fn max_abs_diff(&self, other: &RealMatrix) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_strictly_lower(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (i..n).all(|j| self.0[(i, j)] == 0.0))
    }

    pub fn is_strictly_upper(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..=i).all(|j| self.0[(i, j)] == 0.0))
    }

    pub fn is_unit_upper(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| self.0[(i, i)] == 1.0 && (0..i).all(|j| self.0[(i, j)] == 0.0))
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (0..n).all(|j| i == j || self.0[(i, j)] == 0.0))
    }

    /// `max |(A^T A - I)_ij|`.
    pub fn orthogonality_residual(&self) -> f64 {
        let g = self.0.transpose() * &self.0;
        let n = self.n();
        g.iter()
            .enumerate()
            .map(|(k, v)| (v - if k % n == k / n { 1.0 } else { 0.0 }).abs())
            .fold(0.0, f64::max)
    }
}

impl ComplexMatrix {
    pub fn from_dmatrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() == 0 || m.nrows() != m.ncols() {
            return domain("expected a non-empty square matrix");
        }
        Ok(ComplexMatrix(m))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    /// `max |(A^* A - I)_ij|`.
    pub fn unitarity_residual(&self) -> f64 {
        let g = self.0.adjoint() * &self.0;
        let n = self.n();
        g.iter()
            .enumerate()
            .map(|(k, v)| {
                (v - if k % n == k / n {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                })
                .norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Basis index sets of the triangular subalgebras.
pub mod basis {
    /// Positions `(i, j)`, `i > j`, spanning the strictly lower algebra,
    /// ordered by sub-diagonal `i - j` and then by row.
    pub fn lower_by_subdiagonal(n: usize) -> Vec<(usize, usize)> {
        (1..n).flat_map(|k| (k..n).map(move |i| (i, i - k))).collect()
    }

    /// Positions `(i, j)`, `i < j`, spanning the strictly upper algebra, row-major.
    pub fn upper(n: usize) -> Vec<(usize, usize)> {
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
    }
}

/// `exp(N)` for strictly triangular `N`: the series `I + N + ... + N^{n-1}/(n-1)!`
/// terminates because `N^n = 0`.
pub fn nilpotent_exp(nil: &RealMatrix) -> Result<RealMatrix> {
    if !nil.is_strictly_lower() && !nil.is_strictly_upper() {
        return domain("nilpotent_exp needs a strictly lower or strictly upper triangular matrix");
    }
    let n = nil.n();
    let mut acc = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..n {
        term = &term * nil.as_dmatrix() / k as f64;
        acc += &term;
    }
    Ok(RealMatrix(acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_zero_is_identity() {
        assert_eq!(nilpotent_exp(&RealMatrix::zeros(4)).unwrap(), RealMatrix::identity(4));
    }

    #[test]
    fn exp_of_rank_one_step() {
        let n = RealMatrix::unit(2, 1, 0).scale(2.5);
        let e = nilpotent_exp(&n).unwrap();
        assert_eq!(e, RealMatrix::from_row_major(2, &[1.0, 0.0, 2.5, 1.0]).unwrap());
    }

    #[test]
    fn exp_inverse_identity() {
        let n = RealMatrix::from_row_major(3, &[0.0, 0.3, -1.2, 0.0, 0.0, 0.7, 0.0, 0.0, 0.0]).unwrap();
        let e = nilpotent_exp(&n).unwrap();
        let einv = nilpotent_exp(&n.scale(-1.0)).unwrap();
        assert!(e.mul(&einv).max_abs_diff(&RealMatrix::identity(3)) < 1e-12);
        assert!(e.is_unit_upper());
        // closed form for 3x3: I + N + N^2/2
        let want = -1.2 + 0.3 * 0.7 / 2.0;
        assert!((e.get(0, 2) - want).abs() < 1e-15);
    }

    #[test]
    fn exp_rejects_non_nilpotent_shape() {
        let m = RealMatrix::from_row_major(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert!(nilpotent_exp(&m).is_err());
        assert!(nilpotent_exp(&RealMatrix::identity(2)).is_err());
    }

    #[test]
    fn bases() {
        assert_eq!(basis::lower_by_subdiagonal(3), vec![(1, 0), (2, 1), (2, 0)]);
        assert_eq!(basis::upper(3), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(basis::lower_by_subdiagonal(5).len(), 10);
    }

    #[test]
    fn row_major_round_trip() {
        let v: Vec<f64> = (0..9).map(|x| x as f64).collect();
        let m = RealMatrix::from_row_major(3, &v).unwrap();
        assert_eq!(m.get(1, 2), 5.0);
        assert_eq!(m.row_major(), v);
        assert!(RealMatrix::from_row_major(3, &v[..8]).is_err());
        assert!(RealMatrix::from_row_major(1, &[f64::NAN]).is_err());
    }
}
