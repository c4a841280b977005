//! Closed-form condition numbers of a linear function `L^T x` of the
//! TLS solution: the normal-equations form, the SVD form, and the
//! relative condition number.

use nalgebra::DMatrix;

use crate::error::Error;
use crate::linalg::spectral_norm;
use crate::tls::{TlsProblem, TlsSolution};

/// How the observation matrix was built; the SVD formula simplifies for
/// the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    Identity,
    /// Canonical basis vector e_i (zero-based index).
    Canonical(usize),
    General,
}

/// The n-by-k matrix `L` selecting or combining solution components.
#[derive(Debug, Clone)]
pub struct ObservationMap {
    matrix: DMatrix<f64>,
    kind: MapKind,
}

impl ObservationMap {
    pub fn identity(n: usize) -> Self {
        Self {
            matrix: DMatrix::identity(n, n),
            kind: MapKind::Identity,
        }
    }

    /// `L = e_i`, zero-based.
    pub fn canonical(n: usize, i: usize) -> Result<Self, Error> {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, len: n });
        }
        let mut matrix = DMatrix::zeros(n, 1);
        matrix[(i, 0)] = 1.0;
        Ok(Self {
            matrix,
            kind: MapKind::Canonical(i),
        })
    }

    pub fn general(matrix: DMatrix<f64>) -> Result<Self, Error> {
        if matrix.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        if matrix.ncols() > matrix.nrows() {
            return Err(Error::dim(format!(
                "L must be n-by-k with k <= n, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if !matrix.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            matrix,
            kind: MapKind::General,
        })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn k(&self) -> usize {
        self.matrix.ncols()
    }

    fn check_rows(&self, n: usize) -> Result<(), Error> {
        if self.n() != n {
            return Err(Error::dim(format!(
                "L has {} rows but the solution has dimension {n}",
                self.n()
            )));
        }
        Ok(())
    }
}

/// Which route produced a condition number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Closed,
    Svd,
    Power,
    Oracle,
}

/// A condition estimate plus optional bounds, as reported by the CLI.
#[derive(Debug, Clone)]
pub struct ConditionReport {
    pub k_abs: f64,
    pub k_rel: Option<f64>,
    pub method: Method,
    pub iterations: Option<usize>,
    pub bound_kbar: Option<f64>,
    pub bound_kappa: Option<f64>,
}

/// Condition number via the symmetric k-by-k matrix
/// `C = (1+||x||^2) L^T B^{-1} (A^T A + lambda (I - 2xx^T/(1+||x||^2))) B^{-1} L`,
/// returned as `||C||_2^{1/2}`. `B^{-1}` is applied through the spectral
/// factorization held by the solution.
pub fn condition_closed(
    sol: &TlsSolution,
    p: &TlsProblem,
    l: &ObservationMap,
) -> Result<f64, Error> {
    l.check_rows(sol.n())?;
    check_generic(sol)?;
    let n = sol.n();
    let gamma = sol.one_plus_x2();
    let w = sol.apply_blambda_inv(l.matrix());
    let mut mid = p.a().transpose() * p.a();
    let xxt = &sol.x * sol.x.transpose();
    for i in 0..n {
        mid[(i, i)] += sol.lambda_n1;
    }
    mid -= (2.0 * sol.lambda_n1 / gamma) * xxt;
    let c = gamma * w.transpose() * mid * &w;
    Ok(spectral_norm(&c)?.sqrt())
}

/// Condition number from the right singular vectors of `A` and `[A,b]`.
/// For the identity map the leading `V'` factor drops out.
pub fn condition_svd(sol: &TlsSolution, l: &ObservationMap) -> Result<f64, Error> {
    l.check_rows(sol.n())?;
    check_generic(sol)?;
    let n = sol.n();
    let lam = sol.lambda_n1;
    // [V'^T, 0] V, an n-by-(n+1) block of inner products
    let v_top = sol.v.view((0, 0), (n, n + 1));
    let mut t = sol.v_prime.transpose() * v_top;
    for i in 0..n {
        let d_prime = (sol.sigma_prime[i] * sol.sigma_prime[i] - lam).recip();
        let mut row = t.row_mut(i);
        row *= d_prime;
    }
    // right-multiply by [D; 0], dropping the last column
    let mut td = DMatrix::zeros(n, n);
    for j in 0..n {
        let d = (sol.sigma[j] * sol.sigma[j] + lam).sqrt();
        td.set_column(j, &(t.column(j) * d));
    }
    let core = match l.kind() {
        MapKind::Identity => td,
        _ => l.matrix().transpose() * &sol.v_prime * td,
    };
    Ok(sol.one_plus_x2().sqrt() * spectral_norm(&core)?)
}

/// Relative condition number `K ||(A,b)||_F / ||L^T x||_2`.
pub fn condition_relative(
    k_abs: f64,
    p: &TlsProblem,
    sol: &TlsSolution,
    l: &ObservationMap,
) -> Result<f64, Error> {
    l.check_rows(sol.n())?;
    let ltx_norm = (l.matrix().transpose() * &sol.x).norm();
    if ltx_norm == 0.0 {
        return Err(Error::ZeroObservation);
    }
    Ok(k_abs * p.data_norm() / ltx_norm)
}

pub(crate) fn check_generic(sol: &TlsSolution) -> Result<(), Error> {
    let n = sol.n();
    let gap2 = sol.sigma_prime[n - 1] * sol.sigma_prime[n - 1] - sol.lambda_n1;
    if gap2 <= 0.0 {
        return Err(Error::Nongeneric {
            gap: sol.genericity_gap,
            threshold: 0.0,
        });
    }
    Ok(())
}
