//! Shared helpers for the unit tests.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exact::ObservationMap;
use crate::iterative::standard_normal;
use crate::tls::TlsProblem;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

pub fn random_problem<R: Rng>(r: &mut R, m: usize, n: usize) -> TlsProblem {
    let a = DMatrix::from_fn(m, n, |_, _| standard_normal(r));
    let b = DVector::from_fn(m, |_, _| standard_normal(r));
    TlsProblem::new(a, b).unwrap()
}

pub fn random_orthogonal<R: Rng>(r: &mut R, n: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| standard_normal(r));
    g.qr().q()
}

/// An observation map with a random width in `1..=n`.
pub fn random_observation<R: Rng>(r: &mut R, n: usize) -> ObservationMap {
    let k = r.gen_range(1..=n);
    let l = DMatrix::from_fn(n, k, |_, _| standard_normal(r));
    ObservationMap::general(l).unwrap()
}
