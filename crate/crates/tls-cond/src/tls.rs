//! Total least squares solver built on the SVDs of `A` and `[A,b]`.

use nalgebra::{DMatrix, DVector};

use crate::error::Error;
use crate::linalg::svd;

/// Default genericity threshold, relative to the largest singular value
/// of `[A,b]`.
pub const DEFAULT_GAP_TOL: f64 = 1e-12;

/// An overdetermined TLS instance `A x ~ b` with `A` m-by-n, `m > n`.
#[derive(Debug, Clone)]
pub struct TlsProblem {
    a: DMatrix<f64>,
    b: DVector<f64>,
}

impl TlsProblem {
    pub fn new(a: DMatrix<f64>, b: DVector<f64>) -> Result<Self, Error> {
        if a.nrows() <= a.ncols() || a.ncols() == 0 {
            return Err(Error::dim(format!(
                "A must be strictly tall, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        if b.len() != a.nrows() {
            return Err(Error::dim(format!(
                "b has length {} but A has {} rows",
                b.len(),
                a.nrows()
            )));
        }
        if !a.iter().all(|v| v.is_finite()) || !b.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DVector<f64> {
        &self.b
    }

    pub fn nrows(&self) -> usize {
        self.a.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.a.ncols()
    }

    /// The m-by-(n+1) matrix `[A, b]`.
    pub fn augmented(&self) -> DMatrix<f64> {
        let mut ab = DMatrix::zeros(self.nrows(), self.ncols() + 1);
        ab.view_mut((0, 0), (self.nrows(), self.ncols())).copy_from(&self.a);
        ab.set_column(self.ncols(), &self.b);
        ab
    }

    /// `||(A,b)||_F`, the product norm of the data.
    pub fn data_norm(&self) -> f64 {
        (self.a.norm_squared() + self.b.norm_squared()).sqrt()
    }

    /// The problem `(A + dA) x ~ (b + db)`.
    pub fn perturbed(&self, da: &DMatrix<f64>, db: &DVector<f64>) -> Result<Self, Error> {
        if da.shape() != self.a.shape() || db.len() != self.b.len() {
            return Err(Error::dim("perturbation shape differs from problem"));
        }
        Self::new(&self.a + da, &self.b + db)
    }
}

/// The solved problem together with every SVD by-product the condition
/// formulas consume.
#[derive(Debug, Clone)]
pub struct TlsSolution {
    /// TLS solution x.
    pub x: DVector<f64>,
    /// Residual b - A x.
    pub r: DVector<f64>,
    /// lambda_{n+1} = sigma_{n+1}^2 of [A,b].
    pub lambda_n1: f64,
    /// Singular values of [A,b], length n+1.
    pub sigma: DVector<f64>,
    /// Singular values of A, length n.
    pub sigma_prime: DVector<f64>,
    /// Right singular vectors of [A,b], (n+1)-by-(n+1).
    pub v: DMatrix<f64>,
    /// Right singular vectors of A, n-by-n.
    pub v_prime: DMatrix<f64>,
    /// sigma'_n - sigma_{n+1}, the distance to nongenericity.
    pub genericity_gap: f64,
}

impl TlsSolution {
    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// `1 + x^T x`.
    pub fn one_plus_x2(&self) -> f64 {
        1.0 + self.x.norm_squared()
    }

    /// Applies `B_lambda^{-1} = V' diag(1/(sigma'_i^2 - lambda)) V'^T`
    /// to the columns of `rhs`. Uses the spectral factorization rather
    /// than forming or inverting the normal-equations matrix.
    pub fn apply_blambda_inv(&self, rhs: &DMatrix<f64>) -> DMatrix<f64> {
        let mut w = self.v_prime.transpose() * rhs;
        for i in 0..self.n() {
            let d = self.sigma_prime[i] * self.sigma_prime[i] - self.lambda_n1;
            let mut row = w.row_mut(i);
            row /= d;
        }
        &self.v_prime * w
    }
}

/// Solves the TLS problem. Fails with [`Error::Nongeneric`] when
/// `sigma'_n - sigma_{n+1} <= gap_tol * sigma_1`.
pub fn solve_tls(p: &TlsProblem, gap_tol: f64) -> Result<TlsSolution, Error> {
    if gap_tol.is_nan() || gap_tol < 0.0 {
        return Err(Error::InvalidArgument("gap_tol must be nonnegative".into()));
    }
    let n = p.ncols();
    let aug = svd(&p.augmented(), true)?;
    let prime = svd(p.a(), false)?;
    let sigma = aug.s;
    let sigma_prime = prime.s;
    let gap = sigma_prime[n - 1] - sigma[n];
    let threshold = gap_tol * sigma[0];
    if gap <= threshold {
        return Err(Error::Nongeneric { gap, threshold });
    }
    let v_last = aug.v.column(n);
    let pivot = v_last[n];
    if pivot == 0.0 {
        return Err(Error::Degenerate);
    }
    let x = DVector::from_fn(n, |i, _| -v_last[i] / pivot);
    let r = p.b() - p.a() * &x;
    Ok(TlsSolution {
        lambda_n1: sigma[n] * sigma[n],
        x,
        r,
        sigma,
        sigma_prime,
        v: aug.v,
        v_prime: prime.v,
        genericity_gap: gap,
    })
}

/// Cross-check route: solves `(A^T A - lambda I) x = A^T b` directly.
pub fn solution_via_normal_equations(p: &TlsProblem, lambda: f64) -> Result<DVector<f64>, Error> {
    let n = p.ncols();
    let mut blambda = p.a().transpose() * p.a();
    for i in 0..n {
        blambda[(i, i)] -= lambda;
    }
    let atb = p.a().transpose() * p.b();
    blambda.lu().solve(&atb).ok_or(Error::SingularSystem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{random_problem, rel_err, rng};

    fn trivial_problem() -> TlsProblem {
        TlsProblem::new(
            DMatrix::from_column_slice(2, 1, &[1.0, 0.0]),
            DVector::from_column_slice(&[1.0, 0.0]),
        )
        .unwrap()
    }

    #[test]
    fn solves_consistent_rank_one_problem() {
        let sol = solve_tls(&trivial_problem(), DEFAULT_GAP_TOL).unwrap();
        assert!(rel_err(sol.x[0], 1.0) < 1e-14);
        assert!(sol.r.norm() < 1e-14);
        assert!(sol.lambda_n1 < 1e-28);
        assert!(rel_err(sol.genericity_gap, 1.0) < 1e-14);
        assert!(rel_err(sol.sigma[0], 2f64.sqrt()) < 1e-14);
    }

    #[test]
    fn detects_nongeneric_problem() {
        // A = e1, b = e2: sigma'_1 = sigma_2 = 1
        let p = TlsProblem::new(
            DMatrix::from_column_slice(2, 1, &[1.0, 0.0]),
            DVector::from_column_slice(&[0.0, 1.0]),
        )
        .unwrap();
        assert!(matches!(
            solve_tls(&p, DEFAULT_GAP_TOL),
            Err(Error::Nongeneric { .. })
        ));
    }

    #[test]
    fn normal_equations_route_agrees() {
        let p = trivial_problem();
        let x = solution_via_normal_equations(&p, 0.0).unwrap();
        assert!(rel_err(x[0], 1.0) < 1e-14);

        let mut r = rng(21);
        for _ in 0..10 {
            let p = random_problem(&mut r, 8, 3);
            let sol = solve_tls(&p, DEFAULT_GAP_TOL).unwrap();
            let x2 = solution_via_normal_equations(&p, sol.lambda_n1).unwrap();
            assert!((&sol.x - &x2).norm() <= 1e-8 * sol.x.norm());
        }
    }

    #[test]
    fn invariants_on_random_problems() {
        let mut r = rng(22);
        for _ in 0..25 {
            let p = random_problem(&mut r, 12, 4);
            let sol = solve_tls(&p, DEFAULT_GAP_TOL).unwrap();
            let n = sol.n();
            // interlacing
            for i in 0..n {
                assert!(sol.sigma[i] + 1e-10 * sol.sigma[0] >= sol.sigma_prime[i]);
                assert!(sol.sigma_prime[i] + 1e-10 * sol.sigma[0] >= sol.sigma[i + 1]);
            }
            // lambda identity (eq. between residual and smallest eigenvalue)
            let lhs = sol.lambda_n1 * sol.one_plus_x2();
            assert!(rel_err(lhs, sol.r.norm_squared()) < 1e-8);
            // [x; -1] is an eigenvector of [A,b]^T [A,b]
            let aug = p.augmented();
            let mut xe = DVector::zeros(n + 1);
            xe.view_mut((0, 0), (n, 1)).copy_from(&sol.x);
            xe[n] = -1.0;
            let resid = aug.transpose() * (&aug * &xe) - sol.lambda_n1 * &xe;
            assert!(resid.norm() <= 1e-8 * sol.sigma[0] * sol.sigma[0] * xe.norm());
        }
    }

    #[test]
    fn left_orthogonal_invariance() {
        let mut r = rng(23);
        let p = random_problem(&mut r, 10, 3);
        let q = crate::testutil::random_orthogonal(&mut r, 10);
        let pq = TlsProblem::new(&q * p.a(), &q * p.b()).unwrap();
        let s1 = solve_tls(&p, DEFAULT_GAP_TOL).unwrap();
        let s2 = solve_tls(&pq, DEFAULT_GAP_TOL).unwrap();
        assert!((&s1.x - &s2.x).norm() <= 1e-10 * s1.x.norm());
        assert!((&s1.sigma - &s2.sigma).norm() <= 1e-10 * s1.sigma[0]);
        assert!((&s1.sigma_prime - &s2.sigma_prime).norm() <= 1e-10 * s1.sigma[0]);
    }

    #[test]
    fn rejects_wide_or_mismatched_input() {
        assert!(TlsProblem::new(DMatrix::zeros(2, 2), DVector::zeros(2)).is_err());
        assert!(TlsProblem::new(DMatrix::zeros(3, 1), DVector::zeros(2)).is_err());
    }
}
