//! Dense linear-algebra substrate: SVD, norms, Kronecker product, the
//! vec operator and the vec-transpose permutation.

use nalgebra::{DMatrix, DVector};

use crate::error::Error;

/// Singular value decomposition `M = U diag(S) V^T` with singular values
/// sorted nonincreasing.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub u: DMatrix<f64>,
    pub s: DVector<f64>,
    pub v: DMatrix<f64>,
}

/// Computes the SVD of `m`. With `full`, `U` and `V` are completed to
/// square orthogonal matrices; otherwise the thin factors are returned.
pub fn svd(m: &DMatrix<f64>, full: bool) -> Result<SvdResult, Error> {
    if m.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    if !m.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let fact = m
        .clone()
        .try_svd(true, true, f64::EPSILON, 0)
        .ok_or(Error::SvdFailed)?;
    let mut u = fact.u.ok_or(Error::SvdFailed)?;
    let mut v = fact.v_t.ok_or(Error::SvdFailed)?.transpose();
    let s = fact.singular_values;
    debug_assert!(s.as_slice().windows(2).all(|w| w[0] >= w[1]));
    if full {
        u = complete_orthonormal(&u);
        v = complete_orthonormal(&v);
    }
    Ok(SvdResult { u, s, v })
}

/// Extends a matrix with orthonormal columns to a square orthogonal
/// matrix by Gram-Schmidt against the canonical basis.
fn complete_orthonormal(q: &DMatrix<f64>) -> DMatrix<f64> {
    let n = q.nrows();
    if q.ncols() == n {
        return q.clone();
    }
    let mut cols: Vec<DVector<f64>> = q.column_iter().map(|c| c.into_owned()).collect();
    for i in 0..n {
        if cols.len() == n {
            break;
        }
        let mut cand = DVector::zeros(n);
        cand[i] = 1.0;
        // two rounds of Gram-Schmidt for numerical orthogonality
        for _ in 0..2 {
            for c in &cols {
                let proj = c.dot(&cand);
                cand -= c * proj;
            }
        }
        let norm = cand.norm();
        if norm > 1e-8 {
            cols.push(cand / norm);
        }
    }
    DMatrix::from_columns(&cols)
}

/// Largest singular value of `m`.
pub fn spectral_norm(m: &DMatrix<f64>) -> Result<f64, Error> {
    Ok(svd(m, false)?.s[0])
}

/// The product norm `sqrt(||dA||_F^2 + ||db||_2^2)` on perturbation pairs.
pub fn product_norm(da: &DMatrix<f64>, db: &DMatrix<f64>) -> Result<f64, Error> {
    if db.ncols() != 1 {
        return Err(Error::dim(format!("db must be a column vector, got {} columns", db.ncols())));
    }
    if da.nrows() != db.nrows() {
        return Err(Error::dim(format!(
            "dA has {} rows but db has {}",
            da.nrows(),
            db.nrows()
        )));
    }
    Ok((da.norm_squared() + db.norm_squared()).sqrt())
}

/// Kronecker product `A (x) B`.
pub fn kron(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<DMatrix<f64>, Error> {
    let rows = a
        .nrows()
        .checked_mul(b.nrows())
        .ok_or(Error::DimensionOverflow)?;
    rows.checked_mul(
        a.ncols()
            .checked_mul(b.ncols())
            .ok_or(Error::DimensionOverflow)?,
    )
    .ok_or(Error::DimensionOverflow)?;
    Ok(a.kronecker(b))
}

/// Column-stacking vec operator.
pub fn vec_stack(m: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_column_slice(m.as_slice())
}

/// For an m-by-n argument, maps each index of vec(B) to the index of the
/// same entry in vec(B^T): entry (i,j) sits at i + j*m in vec(B) and at
/// j + i*n in vec(B^T).
pub(crate) fn vec_transpose_targets(m: usize, n: usize) -> Vec<usize> {
    let mut targets = vec![0usize; m * n];
    for j in 0..n {
        for i in 0..m {
            targets[i + j * m] = j + i * n;
        }
    }
    targets
}

/// The permutation matrix P with `P vec(B) = vec(B^T)` for every m-by-n B.
pub fn vec_transpose_permutation(m: usize, n: usize) -> Result<DMatrix<f64>, Error> {
    if m == 0 || n == 0 {
        return Err(Error::EmptyMatrix);
    }
    let mn = m.checked_mul(n).ok_or(Error::DimensionOverflow)?;
    mn.checked_mul(mn).ok_or(Error::DimensionOverflow)?;
    let targets = vec_transpose_targets(m, n);
    let mut p = DMatrix::zeros(mn, mn);
    for (src, &dst) in targets.iter().enumerate() {
        p[(dst, src)] = 1.0;
    }
    Ok(p)
}
