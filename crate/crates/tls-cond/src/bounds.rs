//! Upper bounds on the TLS condition number and the dense Kronecker
//! matrix of the derivative, kept as a small-scale exactness oracle.

use nalgebra::DMatrix;

use crate::error::Error;
use crate::exact::{check_generic, ObservationMap};
use crate::iterative::{blambda_inv_l, d_lambda};
use crate::linalg::spectral_norm;
use crate::tls::{TlsProblem, TlsSolution};

/// Maximum number of entries the oracle will materialize.
pub const DEFAULT_SIZE_CAP: usize = 10_000_000;

/// Bounds attached to a condition estimate. `kappa` is `None` when one
/// of its denominators is nonpositive.
#[derive(Debug, Clone)]
pub struct BoundsReport {
    pub k_bar: f64,
    pub kappa: Option<f64>,
}

/// The SVD-based upper bound
/// `(1+||x||^2)^{1/2} ||L||_2 (sigma_1^2 + sigma_{n+1}^2)^{1/2} / (sigma'_n^2 - sigma_{n+1}^2)`.
pub fn upper_bound_kbar(sol: &TlsSolution, l: &ObservationMap) -> Result<f64, Error> {
    check_generic(sol)?;
    let n = sol.n();
    let s1 = sol.sigma[0];
    let sn1 = sol.sigma[n];
    let spn = sol.sigma_prime[n - 1];
    let l_norm = spectral_norm(l.matrix())?;
    Ok(sol.one_plus_x2().sqrt() * l_norm * (s1 * s1 + sn1 * sn1).sqrt() / (spn * spn - sn1 * sn1))
}

/// The van Huffel-Vandewalle bound
/// `9 sigma_1 ||x|| / (sigma_n - sigma_{n+1}) (1 + ||b|| / (sigma'_n - sigma_{n+1})) / (||b|| - sigma_{n+1})`.
/// Returns `None` when a denominator is nonpositive.
pub fn kappa_vanhuffel(sol: &TlsSolution, p: &TlsProblem) -> Option<f64> {
    let n = sol.n();
    let s1 = sol.sigma[0];
    let sn = sol.sigma[n - 1];
    let sn1 = sol.sigma[n];
    let spn = sol.sigma_prime[n - 1];
    let b_norm = p.b().norm();
    if b_norm <= sn1 || sn <= sn1 || spn <= sn1 {
        return None;
    }
    Some(
        9.0 * s1 * sol.x.norm() / (sn - sn1) * (1.0 + b_norm / (spn - sn1)) / (b_norm - sn1),
    )
}

pub fn bounds_report(sol: &TlsSolution, p: &TlsProblem, l: &ObservationMap) -> Result<BoundsReport, Error> {
    Ok(BoundsReport {
        k_bar: upper_bound_kbar(sol, l)?,
        kappa: kappa_vanhuffel(sol, p),
    })
}

/// Materializes the k-by-(nm+m) matrix representing the derivative,
/// `[-x^T (x) D + (r^T (x) L^T B^{-1}) P, D]`. Its spectral norm is the
/// condition number. The transpose permutation P is applied through an
/// index map, never stored densely.
pub fn kronecker_matrix(
    sol: &TlsSolution,
    p: &TlsProblem,
    l: &ObservationMap,
) -> Result<DMatrix<f64>, Error> {
    kronecker_matrix_capped(sol, p, l, DEFAULT_SIZE_CAP)
}

pub fn kronecker_matrix_capped(
    sol: &TlsSolution,
    p: &TlsProblem,
    l: &ObservationMap,
    cap: usize,
) -> Result<DMatrix<f64>, Error> {
    if l.n() != p.ncols() {
        return Err(Error::dim(format!(
            "L has {} rows for an n = {} problem",
            l.n(),
            p.ncols()
        )));
    }
    check_generic(sol)?;
    let (m, n, k) = (p.nrows(), p.ncols(), l.k());
    let width = n
        .checked_mul(m)
        .and_then(|nm| nm.checked_add(m))
        .ok_or(Error::DimensionOverflow)?;
    let required = k.checked_mul(width).ok_or(Error::DimensionOverflow)?;
    if required > cap {
        return Err(Error::SizeCapExceeded { required, cap });
    }
    let dl = d_lambda(sol, p, l);
    let wlt = blambda_inv_l(sol, l).transpose(); // k-by-n
    let mut mat = DMatrix::zeros(k, width);
    // column for vec(dA) entry (i,j): -x_j D[:,i] + r_i (L^T B^{-1})[:,j]
    for j in 0..n {
        for i in 0..m {
            let col = i + j * m;
            for row in 0..k {
                mat[(row, col)] = -sol.x[j] * dl[(row, i)] + sol.r[i] * wlt[(row, j)];
            }
        }
    }
    mat.view_mut((0, n * m), (k, m)).copy_from(&dl);
    Ok(mat)
}

/// Oracle condition number: spectral norm of the dense derivative matrix.
pub fn oracle_condition(
    sol: &TlsSolution,
    p: &TlsProblem,
    l: &ObservationMap,
) -> Result<f64, Error> {
    spectral_norm(&kronecker_matrix(sol, p, l)?)
}
