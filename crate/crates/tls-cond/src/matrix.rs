use std::ops::Deref;

use nalgebra::DMatrix;

use crate::error::Error;

/// Dense real matrix with validated construction: nonempty and all
/// entries finite. Derefs to [`nalgebra::DMatrix`] for arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    inner: DMatrix<f64>,
}

impl DenseMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[f64]) -> Result<Self, Error> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        if entries.len() != rows * cols {
            return Err(Error::dim(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Self::from_matrix(DMatrix::from_row_slice(rows, cols, entries))
    }

    pub fn from_matrix(inner: DMatrix<f64>) -> Result<Self, Error> {
        if inner.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        if !inner.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { inner })
    }

    pub fn column_vector(entries: &[f64]) -> Result<Self, Error> {
        Self::from_row_major(entries.len(), 1, entries)
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    /// Entries in row-major order.
    pub fn row_major(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.inner[(i, j)]);
            }
        }
        out
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.inner
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.inner
    }
}

impl Deref for DenseMatrix {
    type Target = DMatrix<f64>;

    fn deref(&self) -> &Self::Target {
        &self.inner
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_construction() {
        assert!(matches!(
            DenseMatrix::from_row_major(0, 2, &[]),
            Err(Error::EmptyMatrix)
        ));
        assert!(matches!(
            DenseMatrix::from_row_major(2, 2, &[1.0, 2.0, 3.0]),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            DenseMatrix::from_row_major(1, 2, &[1.0, f64::NAN]),
            Err(Error::NonFinite)
        ));
        assert!(matches!(
            DenseMatrix::from_row_major(1, 2, &[1.0, f64::INFINITY]),
            Err(Error::NonFinite)
        ));
    }

    #[test]
    fn row_major_round_trip() {
        let entries = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let m = DenseMatrix::from_row_major(2, 3, &entries).unwrap();
        assert_eq!(m[(0, 1)], 2.0);
        assert_eq!(m[(1, 0)], 4.0);
        assert_eq!(m.row_major(), entries.to_vec());
    }
}
