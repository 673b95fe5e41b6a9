//! Dense complex linear algebra on `d x d` bipartite spaces.
//!
//! Basis kets are labelled `|i,j>` with `i, j` in `1..=d`, as in the
//! physics literature. Storage is 0-based and row-major in the pair: the ket
//! `|i,j>` lives at index `(i-1)*d + (j-1)`. The public accessors that take
//! `(i, j)` pairs use the 1-based labels; everything that exposes a raw
//! matrix uses the 0-based storage index.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{domain, Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Numerical tolerances shared by the whole crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Largest entrywise `|M - M^dagger|` accepted as Hermitian.
    pub hermitian: f64,
    /// An operator is PSD when its smallest eigenvalue is `>= -psd`.
    pub psd: f64,
}

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-9;

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: HERMITIAN_TOL,
            psd: PSD_TOL,
        }
    }
}

/// Storage index of the 1-based ket `|i,j>`.
pub fn ket_index(d: usize, i: usize, j: usize) -> usize {
    debug_assert!(i >= 1 && i <= d && j >= 1 && j <= d, "ket label out of range");
    (i - 1) * d + (j - 1)
}

pub(crate) fn require_local_dim(d: usize) -> Result<()> {
    if d < 2 {
        return domain(format!("local dimension must be at least 2, got {d}"));
    }
    Ok(())
}

/// Operator on the `d x d` bipartite space, stored as a dense `d^2 x d^2` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteOperator {
    local_dim: usize,
    matrix: CMatrix,
}

impl BipartiteOperator {
    pub fn new(local_dim: usize, matrix: CMatrix) -> Result<Self> {
        if local_dim == 0 {
            return domain("local dimension must be positive");
        }
        let n = local_dim * local_dim;
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::Dimension(format!(
                "expected {n}x{n} matrix for local dimension {local_dim}, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { local_dim, matrix })
    }

    pub fn zeros(local_dim: usize) -> Self {
        let n = local_dim * local_dim;
        Self {
            local_dim,
            matrix: CMatrix::zeros(n, n),
        }
    }

    pub fn identity(local_dim: usize) -> Self {
        let n = local_dim * local_dim;
        Self {
            local_dim,
            matrix: CMatrix::identity(n, n),
        }
    }

    /// The rank-one dyad `|i,j><k,l|` (1-based labels).
    pub fn dyad(local_dim: usize, ket: (usize, usize), bra: (usize, usize)) -> Self {
        let mut op = Self::zeros(local_dim);
        let r = ket_index(local_dim, ket.0, ket.1);
        let c = ket_index(local_dim, bra.0, bra.1);
        op.matrix[(r, c)] = ONE;
        op
    }

    /// `|psi><psi|`.
    pub fn projector(state: &PureState) -> Self {
        let v = state.amplitudes();
        Self {
            local_dim: state.local_dim(),
            matrix: v * v.adjoint(),
        }
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    /// Full dimension `d^2`.
    pub fn dim(&self) -> usize {
        self.local_dim * self.local_dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// `<i,j| op |k,l>` with 1-based labels.
    pub fn entry(&self, ket: (usize, usize), bra: (usize, usize)) -> Complex64 {
        let d = self.local_dim;
        self.matrix[(ket_index(d, ket.0, ket.1), ket_index(d, bra.0, bra.1))]
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            local_dim: self.local_dim,
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            local_dim: self.local_dim,
            matrix: self.matrix.map(|z| z * factor),
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.local_dim != other.local_dim {
            return Err(Error::Dimension(format!(
                "local dimensions differ: {} vs {}",
                self.local_dim, other.local_dim
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            local_dim: self.local_dim,
            matrix: &self.matrix + &other.matrix,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            local_dim: self.local_dim,
            matrix: &self.matrix - &other.matrix,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            local_dim: self.local_dim,
            matrix: &self.matrix * &other.matrix,
        })
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            local_dim: self.local_dim,
            matrix: self.matrix.map(|z| z * a) + other.matrix.map(|z| z * b),
        })
    }

    /// `<psi| self |psi>`.
    pub fn expectation(&self, state: &PureState) -> Result<Complex64> {
        if state.local_dim() != self.local_dim {
            return Err(Error::Dimension("state and operator dimensions differ".into()));
        }
        let v = state.amplitudes();
        Ok(v.dotc(&(&self.matrix * v)))
    }

    pub fn apply(&self, state: &PureState) -> Result<CVector> {
        if state.local_dim() != self.local_dim {
            return Err(Error::Dimension("state and operator dimensions differ".into()));
        }
        Ok(&self.matrix * state.amplitudes())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs_diff(&self.matrix, &other.matrix)
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.matrix)
    }

    /// Largest entrywise `|M - M^dagger|`.
    pub fn hermitian_defect(&self) -> f64 {
        hermitian_defect(&self.matrix)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    /// Transpose on the second factor: `<i,l| op^G |k,j> = <i,j| op |k,l>`.
    pub fn partial_transpose(&self) -> Self {
        let d = self.local_dim;
        let n = self.dim();
        let mut out = CMatrix::zeros(n, n);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        out[(i * d + l, k * d + j)] = self.matrix[(i * d + j, k * d + l)];
                    }
                }
            }
        }
        Self {
            local_dim: d,
            matrix: out,
        }
    }

    /// Smallest eigenvalue; the PPT test is `min_eigenvalue(sigma^G) >= -tol`.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(hermitian_eig(self)?.eigenvalues[0])
    }

    pub fn is_psd(&self, tol: f64) -> Result<bool> {
        Ok(self.min_eigenvalue()? >= -tol)
    }

    pub fn is_ppt(&self, tol: f64) -> Result<bool> {
        self.partial_transpose().is_psd(tol)
    }

    /// `U_local (x) U_local` applied by conjugation: `(W (x) W) op (W (x) W)^dagger`.
    pub fn local_conjugate(&self, local: &CMatrix) -> Result<Self> {
        let d = self.local_dim;
        if local.nrows() != d || local.ncols() != d {
            return Err(Error::Dimension(format!("local unitary must be {d}x{d}")));
        }
        let w = local.kronecker(local);
        Ok(Self {
            local_dim: d,
            matrix: &w * &self.matrix * w.adjoint(),
        })
    }

    /// Pad into a larger local dimension, keeping basis labels `1..=d`.
    pub fn embed(&self, target_dim: usize) -> Result<Self> {
        let d = self.local_dim;
        if target_dim < d {
            return domain(format!("cannot embed dimension {d} into {target_dim}"));
        }
        let mut out = Self::zeros(target_dim);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        out.matrix[(i * target_dim + j, k * target_dim + l)] =
                            self.matrix[(i * d + j, k * d + l)];
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Pure state on the `d x d` space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    local_dim: usize,
    amplitudes: CVector,
}

impl PureState {
    /// Accepts amplitudes with unit norm (within `1e-9`) and renormalizes exactly.
    pub fn new(local_dim: usize, amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return domain(format!("state is not normalized: norm = {norm}"));
        }
        Self::normalized(local_dim, amplitudes)
    }

    /// Normalizes any nonzero vector of length `d^2`.
    pub fn normalized(local_dim: usize, amplitudes: CVector) -> Result<Self> {
        if local_dim == 0 {
            return domain("local dimension must be positive");
        }
        if amplitudes.len() != local_dim * local_dim {
            return Err(Error::Dimension(format!(
                "expected {} amplitudes for local dimension {local_dim}, got {}",
                local_dim * local_dim,
                amplitudes.len()
            )));
        }
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return domain("cannot normalize a zero or non-finite vector");
        }
        Ok(Self {
            local_dim,
            amplitudes: amplitudes / Complex64::from(norm),
        })
    }

    /// The product ket `|i,j>` (1-based labels).
    pub fn basis(local_dim: usize, i: usize, j: usize) -> Self {
        let mut v = CVector::zeros(local_dim * local_dim);
        v[ket_index(local_dim, i, j)] = ONE;
        Self {
            local_dim,
            amplitudes: v,
        }
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// `<i,j|psi>` with 1-based labels.
    pub fn amplitude(&self, i: usize, j: usize) -> Complex64 {
        self.amplitudes[ket_index(self.local_dim, i, j)]
    }

    /// The `d x d` matrix `A` with `|psi> = sum_ij A_ij |i,j>`.
    pub fn amplitude_matrix(&self) -> CMatrix {
        let d = self.local_dim;
        CMatrix::from_fn(d, d, |i, j| self.amplitudes[i * d + j])
    }

    pub fn from_amplitude_matrix(a: &CMatrix) -> Result<Self> {
        let d = a.nrows();
        if a.ncols() != d {
            return Err(Error::Dimension("amplitude matrix must be square".into()));
        }
        let v = CVector::from_fn(d * d, |k, _| a[(k / d, k % d)]);
        Self::new(d, v)
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// Apply `W (x) W` for a local `d x d` matrix `W`; the result is renormalized.
    pub fn local_transform(&self, local: &CMatrix) -> Result<Self> {
        let a = self.amplitude_matrix();
        let out = local * a * local.transpose();
        let d = self.local_dim;
        Self::normalized(d, CVector::from_fn(d * d, |k, _| out[(k / d, k % d)]))
    }
}

/// Real spectrum with eigenvectors, sorted ascending.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    /// Column `k` pairs with `eigenvalues[k]`.
    pub eigenvectors: CMatrix,
    /// `max_k |M v_k - lambda_k v_k|`.
    pub residual: f64,
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn hermitian_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `(M + M^dagger) / 2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).map(|z| z * 0.5)
}

/// Eigendecomposition of any square Hermitian matrix (within [`HERMITIAN_TOL`]).
pub fn hermitian_eig_matrix(m: &CMatrix) -> Result<SpectrumResult> {
    hermitian_eig_matrix_tol(m, HERMITIAN_TOL)
}

pub fn hermitian_eig_matrix_tol(m: &CMatrix, tol: f64) -> Result<SpectrumResult> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension("eigendecomposition needs a square matrix".into()));
    }
    let asymmetry = hermitian_defect(m);
    if asymmetry > tol {
        return Err(Error::NotHermitian { asymmetry });
    }
    let h = hermitian_part(m);
    let eig = SymmetricEigen::new(h.clone());
    let (values, vectors) = jacobi_polish(&h, eig.eigenvectors);
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let n = m.nrows();
    let eigenvalues: Vec<f64> = order.iter().map(|&k| values[k]).collect();
    let mut eigenvectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &vectors.column(src));
    }
    let mut residual: f64 = 0.0;
    for (k, &lambda) in eigenvalues.iter().enumerate() {
        let v = eigenvectors.column(k);
        let r = &h * v - v * Complex64::from(lambda);
        residual = residual.max(r.norm());
    }
    Ok(SpectrumResult {
        eigenvalues,
        eigenvectors,
        residual,
    })
}

const JACOBI_MAX_SWEEPS: usize = 12;

/// Cyclic complex Jacobi sweeps on `Q^dagger H Q`.
///
/// `SymmetricEigen` stops once off-diagonals are small relative to the
/// neighbouring diagonal, which can leave eigenpair residuals near `1e-9`.
/// Starting from its nearly diagonal output, Jacobi converges in one or two
/// sweeps to residuals at rounding level.
fn jacobi_polish(h: &CMatrix, q: CMatrix) -> (Vec<f64>, CMatrix) {
    let n = h.nrows();
    let mut a = hermitian_part(&(q.adjoint() * h * &q));
    let mut v = q;
    let floor = a.norm() * 1e-18;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for r in (p + 1)..n {
                let apr = a[(p, r)];
                let mag = apr.norm();
                if mag <= floor {
                    continue;
                }
                rotated = true;
                let g = apr.conj() / mag;
                let theta = (a[(r, r)].re - a[(p, p)].re) / (2.0 * mag);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // columns: (x_p, x_r) <- (c x_p - g s x_r, s x_p + g c x_r)
                for k in 0..n {
                    let (xp, xr) = (a[(k, p)], a[(k, r)]);
                    a[(k, p)] = xp * c - xr * g * s;
                    a[(k, r)] = xp * s + xr * g * c;
                    let (vp, vr) = (v[(k, p)], v[(k, r)]);
                    v[(k, p)] = vp * c - vr * g * s;
                    v[(k, r)] = vp * s + vr * g * c;
                }
                for k in 0..n {
                    let (xp, xr) = (a[(p, k)], a[(r, k)]);
                    a[(p, k)] = xp * c - xr * g.conj() * s;
                    a[(r, k)] = xp * s + xr * g.conj() * c;
                }
                a[(p, r)] = ZERO;
                a[(r, p)] = ZERO;
                a[(p, p)] = Complex64::from(a[(p, p)].re);
                a[(r, r)] = Complex64::from(a[(r, r)].re);
            }
        }
        if !rotated {
            break;
        }
    }
    ((0..n).map(|k| a[(k, k)].re).collect(), v)
}

pub fn hermitian_eig(op: &BipartiteOperator) -> Result<SpectrumResult> {
    hermitian_eig_matrix(op.matrix())
}

pub fn hermitian_eig_with(op: &BipartiteOperator, tol: &Tolerances) -> Result<SpectrumResult> {
    hermitian_eig_matrix_tol(op.matrix(), tol.hermitian)
}

pub fn min_eigenvalue(op: &BipartiteOperator) -> Result<f64> {
    op.min_eigenvalue()
}

pub fn partial_transpose(op: &BipartiteOperator) -> BipartiteOperator {
    op.partial_transpose()
}

/// `V = sum_ij |j,i><i,j|`.
pub fn swap_operator(d: usize) -> Result<BipartiteOperator> {
    require_local_dim(d)?;
    let mut op = BipartiteOperator::zeros(d);
    for i in 0..d {
        for j in 0..d {
            op.matrix[(j * d + i, i * d + j)] = ONE;
        }
    }
    Ok(op)
}

/// `P_S = (I + V) / 2`, trace `d(d+1)/2`.
pub fn symmetric_projector(d: usize) -> Result<BipartiteOperator> {
    let v = swap_operator(d)?;
    BipartiteOperator::identity(d).combine(0.5, &v, 0.5)
}

/// `P_A = (I - V) / 2`, trace `d(d-1)/2`.
pub fn antisymmetric_projector(d: usize) -> Result<BipartiteOperator> {
    let v = swap_operator(d)?;
    BipartiteOperator::identity(d).combine(0.5, &v, -0.5)
}

pub fn symmetric_dim(d: usize) -> usize {
    d * (d + 1) / 2
}

pub fn antisymmetric_dim(d: usize) -> usize {
    d * (d - 1) / 2
}

/// Orthonormal basis of the symmetric subspace as the columns of a
/// `d^2 x d_S` isometry, ordered `|i,i>` and `(|i,j> + |j,i>)/sqrt 2` for
/// `i < j` lexicographically in `(i, j)`.
pub fn symmetric_basis(d: usize) -> CMatrix {
    let mut b = CMatrix::zeros(d * d, symmetric_dim(d));
    let h = Complex64::from(std::f64::consts::FRAC_1_SQRT_2);
    let mut col = 0;
    for i in 0..d {
        for j in i..d {
            if i == j {
                b[(i * d + i, col)] = ONE;
            } else {
                b[(i * d + j, col)] = h;
                b[(j * d + i, col)] = h;
            }
            col += 1;
        }
    }
    b
}

/// Orthonormal basis of the antisymmetric subspace: `(|i,j> - |j,i>)/sqrt 2`, `i < j`.
pub fn antisymmetric_basis(d: usize) -> CMatrix {
    let mut b = CMatrix::zeros(d * d, antisymmetric_dim(d));
    let h = Complex64::from(std::f64::consts::FRAC_1_SQRT_2);
    let mut col = 0;
    for i in 0..d {
        for j in (i + 1)..d {
            b[(i * d + j, col)] = h;
            b[(j * d + i, col)] = -h;
            col += 1;
        }
    }
    b
}
