//! Seeded random states and operators for property sweeps and search.
//!
//! Everything is driven by `ChaCha8Rng`, so a seed reproduces a sweep
//! bit-for-bit across platforms.

use nalgebra::linalg::QR;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::tensor_core::{
    antisymmetric_projector, hermitian_part, BipartiteOperator, CMatrix, CVector, PureState,
};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-random pure state on `d x d`.
pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Result<PureState> {
    let v = CVector::from_fn(d * d, |_, _| gaussian(rng));
    PureState::normalized(d, v)
}

/// A random product state `|a> (x) |b>`.
pub fn random_product_state<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Result<PureState> {
    let a = CVector::from_fn(d, |_, _| gaussian(rng));
    let b = CVector::from_fn(d, |_, _| gaussian(rng));
    PureState::normalized(d, a.kronecker(&b))
}

/// Random state of Schmidt rank at most `rank`.
pub fn random_low_rank_state<R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    rank: usize,
) -> Result<PureState> {
    let left = gaussian_matrix(rng, d, rank);
    let right = gaussian_matrix(rng, rank, d);
    let a = left * right;
    PureState::normalized(d, CVector::from_fn(d * d, |k, _| a[(k / d, k % d)]))
}

/// Antisymmetrized Haar-random state `P_A |phi> / |P_A |phi>|`.
pub fn random_antisymmetric_state<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Result<PureState> {
    let phi = random_pure_state(rng, d)?;
    let projected = antisymmetric_projector(d)?.apply(&phi)?;
    PureState::normalized(d, projected)
}

/// Mixture of `rank` random antisymmetric pure states with random weights.
pub fn random_antisymmetric_density<R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    rank: usize,
) -> Result<BipartiteOperator> {
    let mut rho = BipartiteOperator::zeros(d);
    let mut total = 0.0;
    for _ in 0..rank.max(1) {
        let w: f64 = rng.gen_range(0.05..1.0);
        let psi = random_antisymmetric_state(rng, d)?;
        rho = rho.combine(1.0, &BipartiteOperator::projector(&psi), w)?;
        total += w;
    }
    let rho = rho.scale(1.0 / total);
    BipartiteOperator::new(d, hermitian_part(rho.matrix()))
}

/// Haar-random `n x n` unitary (QR of a Ginibre matrix with phase correction).
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let g = gaussian_matrix(rng, n, n);
    let qr = QR::new(g);
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..n {
        let diag = r[(k, k)];
        let phase = if diag.norm() > 0.0 {
            diag / diag.norm()
        } else {
            Complex64::from(1.0)
        };
        let mut col = q.column_mut(k);
        col *= phase;
    }
    q
}

/// Random PSD operator `G G^dagger` normalized to unit trace.
pub fn random_psd<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Result<BipartiteOperator> {
    let n = d * d;
    let g = gaussian_matrix(rng, n, n);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    BipartiteOperator::new(d, hermitian_part(&m.map(|z| z / tr)))
}

/// Random Hermitian operator with entries of order one.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Result<BipartiteOperator> {
    let n = d * d;
    let g = CMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    BipartiteOperator::new(d, hermitian_part(&g))
}
