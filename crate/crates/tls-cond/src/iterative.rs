//! Matrix-free condition estimation: the Fréchet derivative of the map
//! `(A,b) -> L^T x`, its adjoint, the power method built on the pair,
//! and the exact k = 1 formula.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::exact::{check_generic, ObservationMap};
use crate::linalg::product_norm;
use crate::tls::{TlsProblem, TlsSolution};

/// A data-space perturbation `(dA, db)`.
#[derive(Debug, Clone)]
pub struct PerturbationPair {
    pub da: DMatrix<f64>,
    pub db: DVector<f64>,
}

impl PerturbationPair {
    pub fn zeros(m: usize, n: usize) -> Self {
        Self {
            da: DMatrix::zeros(m, n),
            db: DVector::zeros(m),
        }
    }

    /// Product Frobenius norm `sqrt(||dA||_F^2 + ||db||_2^2)`.
    pub fn norm(&self) -> f64 {
        (self.da.norm_squared() + self.db.norm_squared()).sqrt()
    }

    /// Data-space inner product `trace(dA^T eA) + db^T eb`.
    pub fn dot(&self, other: &Self) -> f64 {
        self.da.dot(&other.da) + self.db.dot(&other.db)
    }

    pub fn scale_mut(&mut self, s: f64) {
        self.da *= s;
        self.db *= s;
    }
}

/// Power method controls. Convergence is judged on the absolute
/// difference of successive `nu` values; `relative` switches the test
/// to `|nu_p - nu_{p-1}| < tol * nu_p`.
#[derive(Debug, Clone)]
pub struct PowerSettings {
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub relative: bool,
}

impl Default for PowerSettings {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 200,
            seed: 0,
            relative: false,
        }
    }
}

/// Result of the power iteration.
#[derive(Debug, Clone)]
pub struct PowerOutcome {
    /// Estimated condition number `sqrt(nu)`.
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// `D_lambda = L^T B^{-1} (A^T + 2 x r^T / (1 + x^T x))`, k-by-m.
pub(crate) fn d_lambda(sol: &TlsSolution, p: &TlsProblem, l: &ObservationMap) -> DMatrix<f64> {
    let inner = p.a().transpose() + (2.0 / sol.one_plus_x2()) * (&sol.x * sol.r.transpose());
    l.matrix().transpose() * sol.apply_blambda_inv(&inner)
}

/// `B^{-1} L`, n-by-k.
pub(crate) fn blambda_inv_l(sol: &TlsSolution, l: &ObservationMap) -> DMatrix<f64> {
    sol.apply_blambda_inv(l.matrix())
}

fn check_shapes(p: &TlsProblem, l: &ObservationMap) -> Result<(), Error> {
    if l.n() != p.ncols() {
        return Err(Error::dim(format!(
            "L has {} rows for an n = {} problem",
            l.n(),
            p.ncols()
        )));
    }
    Ok(())
}

/// Applies the Fréchet derivative of `(A,b) -> L^T x` to a perturbation.
pub fn apply_derivative(
    sol: &TlsSolution,
    p: &TlsProblem,
    l: &ObservationMap,
    d: &PerturbationPair,
) -> Result<DVector<f64>, Error> {
    check_shapes(p, l)?;
    check_generic(sol)?;
    if d.da.shape() != p.a().shape() || d.db.len() != p.nrows() {
        return Err(Error::dim("perturbation shape differs from problem"));
    }
    let dl = d_lambda(sol, p, l);
    let wl = blambda_inv_l(sol, l);
    let s = &d.db - &d.da * &sol.x;
    Ok(&dl * s + wl.transpose() * (d.da.transpose() * &sol.r))
}

/// Applies the adjoint of the derivative to `y`, landing back in data
/// space: `(-D^T y x^T + r y^T L^T B^{-1}, D^T y)`.
pub fn apply_adjoint(
    sol: &TlsSolution,
    p: &TlsProblem,
    l: &ObservationMap,
    y: &DVector<f64>,
) -> Result<PerturbationPair, Error> {
    check_shapes(p, l)?;
    check_generic(sol)?;
    if y.len() != l.k() {
        return Err(Error::dim(format!(
            "y has length {} but L has {} columns",
            y.len(),
            l.k()
        )));
    }
    let dl = d_lambda(sol, p, l);
    let wl = blambda_inv_l(sol, l);
    let dty = dl.transpose() * y;
    let da = -(&dty * sol.x.transpose()) + &sol.r * (wl * y).transpose();
    Ok(PerturbationPair { da, db: dty })
}

/// Exact condition number for k = 1: the product norm of the adjoint
/// image of the unit scalar.
fn k1_condition(sol: &TlsSolution, p: &TlsProblem, l: &ObservationMap) -> Result<f64, Error> {
    let image = apply_adjoint(sol, p, l, &DVector::from_element(1, 1.0))?;
    product_norm(&image.da, &DMatrix::from_column_slice(image.db.len(), 1, image.db.as_slice()))
}

/// Condition number of the i-th solution component (zero-based).
pub fn component_condition(sol: &TlsSolution, p: &TlsProblem, i: usize) -> Result<f64, Error> {
    let l = ObservationMap::canonical(p.ncols(), i)?;
    k1_condition(sol, p, &l)
}

/// Power iteration on the derivative/adjoint pair. For k = 1 the exact
/// closed formula is returned instead of iterating.
pub fn power_condition(
    sol: &TlsSolution,
    p: &TlsProblem,
    l: &ObservationMap,
    settings: &PowerSettings,
) -> Result<PowerOutcome, Error> {
    check_shapes(p, l)?;
    check_generic(sol)?;
    if settings.tol.is_nan() || settings.tol <= 0.0 || settings.max_iter == 0 {
        return Err(Error::InvalidArgument(
            "power settings need tol > 0 and max_iter >= 1".into(),
        ));
    }
    if l.k() == 1 {
        return Ok(PowerOutcome {
            value: k1_condition(sol, p, l)?,
            iterations: 0,
            converged: true,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let mut y = DVector::from_fn(l.k(), |_, _| standard_normal(&mut rng));
    let norm = y.norm();
    if norm > 0.0 {
        y /= norm;
    } else {
        y[0] = 1.0;
    }
    let mut nu_prev: Option<f64> = None;
    let mut nu = 0.0;
    for it in 1..=settings.max_iter {
        let mut pair = apply_adjoint(sol, p, l, &y)?;
        nu = pair.norm();
        if nu == 0.0 {
            // L^T x insensitive to the data: the operator is zero
            return Ok(PowerOutcome {
                value: 0.0,
                iterations: it,
                converged: true,
            });
        }
        pair.scale_mut(nu.recip());
        y = apply_derivative(sol, p, l, &pair)?;
        if let Some(prev) = nu_prev {
            let diff = (nu - prev).abs();
            let tol = if settings.relative { settings.tol * nu } else { settings.tol };
            // a difference at roundoff level of nu is a fixed point
            if diff < tol || diff <= 4.0 * f64::EPSILON * nu {
                return Ok(PowerOutcome {
                    value: nu.sqrt(),
                    iterations: it,
                    converged: true,
                });
            }
        }
        nu_prev = Some(nu);
    }
    Ok(PowerOutcome {
        value: nu.sqrt(),
        iterations: settings.max_iter,
        converged: false,
    })
}

/// Standard normal deviate via the Box-Muller transform.
pub(crate) fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    loop {
        let u1: f64 = rng.gen();
        let u2: f64 = rng.gen();
        if u1 > 0.0 {
            return (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos();
        }
    }
}
