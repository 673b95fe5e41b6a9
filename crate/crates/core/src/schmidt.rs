//! Schmidt decomposition of bipartite pure states and the normal form of
//! antisymmetric states under simultaneous local unitaries.

use nalgebra::SVD;
use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::states::PsiACoefficients;
use crate::tensor_core::{
    antisymmetric_projector, hermitian_eig_matrix, hermitian_part, max_abs_diff, swap_operator,
    CMatrix, CVector, PureState,
};

/// Default relative cut-off: singular values `<= tol * s_max` count as zero.
pub const RANK_TOL: f64 = 1e-9;

/// Largest `|V phi + phi|` accepted as antisymmetric.
pub const ANTISYMMETRY_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// `sqrt(pi_i)`, descending, only those above the cut-off.
    pub coefficients: Vec<f64>,
    /// Columns `|a_i>`.
    pub left_vectors: CMatrix,
    /// Columns `|b_i>`.
    pub right_vectors: CMatrix,
    pub rank: usize,
}

impl SchmidtDecomposition {
    /// `sum_i sqrt(pi_i) |a_i> (x) |b_i>`.
    pub fn reconstruct(&self) -> CVector {
        let d = self.left_vectors.nrows();
        let mut v = CVector::zeros(d * d);
        for (k, &s) in self.coefficients.iter().enumerate() {
            let a = self.left_vectors.column(k).into_owned();
            let b = self.right_vectors.column(k).into_owned();
            v += a.kronecker(&b) * Complex64::from(s);
        }
        v
    }
}

fn sorted_singular_values(a: &CMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = SVD::new(a.clone(), false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

fn count_above(values: &[f64], tol: f64) -> usize {
    let top = values.first().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return 0;
    }
    values.iter().filter(|&&s| s > tol * top).count()
}

/// Singular-value decomposition of the amplitude matrix.
pub fn schmidt_decompose(state: &PureState, tol: f64) -> Result<SchmidtDecomposition> {
    if !(tol > 0.0) {
        return domain(format!("rank tolerance must be positive, got {tol}"));
    }
    let norm = state.amplitudes().norm();
    if (norm - 1.0).abs() > 1e-9 {
        return domain(format!("state is not normalized: norm = {norm}"));
    }
    let a = state.amplitude_matrix();
    let svd = SVD::new(a, true, true);
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
    let all: Vec<f64> = order.iter().map(|&k| svd.singular_values[k]).collect();
    let rank = count_above(&all, tol);
    let d = state.local_dim();
    let mut left = CMatrix::zeros(d, rank);
    let mut right = CMatrix::zeros(d, rank);
    for (dst, &src) in order.iter().take(rank).enumerate() {
        left.set_column(dst, &u.column(src));
        // A = sum_k s_k u_k v_k^dagger, so the second-factor vector is conj(v_k),
        // which is row k of V^dagger.
        right.set_column(dst, &v_t.row(src).transpose());
    }
    Ok(SchmidtDecomposition {
        coefficients: all[..rank].to_vec(),
        left_vectors: left,
        right_vectors: right,
        rank,
    })
}

/// Schmidt rank with a relative cut-off.
pub fn schmidt_rank(state: &PureState, tol: f64) -> usize {
    count_above(&sorted_singular_values(&state.amplitude_matrix()), tol)
}

/// `|V phi + phi|`.
pub fn antisymmetry_residual(state: &PureState) -> Result<f64> {
    let v = swap_operator(state.local_dim())?.apply(state)?;
    Ok((v + state.amplitudes()).norm())
}

fn require_antisymmetric(state: &PureState) -> Result<()> {
    let residual = antisymmetry_residual(state)?;
    if residual > ANTISYMMETRY_TOL {
        return Err(Error::NotAntisymmetric { residual });
    }
    Ok(())
}

/// `U^T A U` in block form, with `U` unitary.
#[derive(Debug, Clone)]
pub struct NormalFormResult {
    pub unitary: CMatrix,
    /// `c_mu` for `mu = 1, 3, ...`, descending; `floor(d/2)` entries.
    pub coefficients: Vec<f64>,
    /// `max |U^T A U - N(c)|` entrywise.
    pub residual: f64,
}

impl NormalFormResult {
    /// The block matrix with `+c_mu` at `(mu, mu+1)` and `-c_mu` at `(mu+1, mu)`.
    pub fn normal_form_matrix(&self) -> CMatrix {
        block_matrix(self.unitary.nrows(), &self.coefficients)
    }

    pub fn as_psi_a_coefficients(&self) -> Result<PsiACoefficients> {
        PsiACoefficients::new(self.unitary.nrows(), self.coefficients.clone())
    }
}

fn block_matrix(d: usize, coefficients: &[f64]) -> CMatrix {
    let mut n = CMatrix::zeros(d, d);
    for (k, &c) in coefficients.iter().enumerate() {
        n[(2 * k, 2 * k + 1)] = Complex64::from(c);
        n[(2 * k + 1, 2 * k)] = Complex64::from(-c);
    }
    n
}

/// Orthonormal completion of `taken` (columns, `k x t`) using the standard
/// basis vectors in index order.
fn complement(taken: &[CVector], k: usize) -> Vec<CVector> {
    let mut basis: Vec<CVector> = taken.to_vec();
    let mut out = Vec::new();
    for j in 0..k {
        if basis.len() == k {
            break;
        }
        let mut e = CVector::zeros(k);
        e[j] = Complex64::from(1.0);
        // two passes of Gram-Schmidt
        for _ in 0..2 {
            for b in &basis {
                let overlap = b.dotc(&e);
                e -= b * overlap;
            }
        }
        let norm = e.norm();
        if norm > 1e-6 {
            let e = e / Complex64::from(norm);
            basis.push(e.clone());
            out.push(e);
        }
    }
    out
}

/// Normal form of an antisymmetric state's amplitude matrix `A`: a unitary
/// `U` with `U^T A U` block diagonal, blocks `[[0, c], [-c, 0]]`.
///
/// Each step deflates the largest singular value. Within a degenerate
/// singular subspace the first vector is the projection of the lowest-index
/// basis vector, so `U` is the identity for states already in normal form.
pub fn youla_normal_form(state: &PureState, tol: f64) -> Result<NormalFormResult> {
    if !(tol > 0.0) {
        return domain(format!("rank tolerance must be positive, got {tol}"));
    }
    require_antisymmetric(state)?;
    let a = state.amplitude_matrix();
    let d = state.local_dim();
    let s_max = sorted_singular_values(&a)[0];

    let mut frame = CMatrix::identity(d, d);
    let mut columns: Vec<CVector> = Vec::with_capacity(d);
    let mut coefficients = Vec::with_capacity(d / 2);

    while frame.ncols() >= 2 {
        let k = frame.ncols();
        let b = frame.transpose() * &a * &frame;
        let h = b.adjoint() * &b;
        let eig = hermitian_eig_matrix(&hermitian_part(&h))?;
        let top = *eig.eigenvalues.last().expect("non-empty spectrum");
        if top.max(0.0).sqrt() <= tol * s_max {
            break;
        }
        // Singular subspace of the top singular value (always at least 2-dimensional).
        let cluster_floor = top * (1.0 - 1e-10);
        let cluster: Vec<usize> = (0..k).filter(|&i| eig.eigenvalues[i] >= cluster_floor).collect();
        let proj_norms: Vec<f64> = (0..k)
            .map(|j| {
                cluster
                    .iter()
                    .map(|&c| eig.eigenvectors[(j, c)].norm_sqr())
                    .sum::<f64>()
            })
            .collect();
        let best = proj_norms.iter().cloned().fold(0.0, f64::max);
        let j = proj_norms
            .iter()
            .position(|&w| w >= 0.5 * best)
            .expect("some basis vector overlaps the cluster");
        let mut u1 = CVector::zeros(k);
        for &c in &cluster {
            let col = eig.eigenvectors.column(c);
            u1 += col * col[j].conj();
        }
        u1 /= Complex64::from(u1.norm());

        let x = &b * &u1;
        let s = x.norm();
        let mut u2 = -x.map(|z| z.conj()) / Complex64::from(s);
        let overlap = u1.dotc(&u2);
        u2 -= &u1 * overlap;
        u2 /= Complex64::from(u2.norm());

        coefficients.push(s);
        columns.push(&frame * &u1);
        columns.push(&frame * &u2);

        let rest = complement(&[u1, u2], k);
        let mut next = CMatrix::zeros(k, rest.len());
        for (c, v) in rest.iter().enumerate() {
            next.set_column(c, v);
        }
        frame = &frame * next;
    }
    for c in 0..frame.ncols() {
        columns.push(frame.column(c).into_owned());
    }
    while coefficients.len() < d / 2 {
        coefficients.push(0.0);
    }

    let mut unitary = CMatrix::zeros(d, d);
    for (c, v) in columns.iter().enumerate() {
        unitary.set_column(c, v);
    }
    let transformed = unitary.transpose() * &a * &unitary;
    let residual = max_abs_diff(&transformed, &block_matrix(d, &coefficients));
    Ok(NormalFormResult {
        unitary,
        coefficients,
        residual,
    })
}

/// Schmidt rank of `|phi>` and of the normalized `P_A |phi>` (0 if the projection vanishes).
pub fn doubling_bound_check(state: &PureState) -> Result<(usize, usize)> {
    let before = schmidt_rank(state, RANK_TOL);
    let projected = antisymmetric_projector(state.local_dim())?.apply(state)?;
    if projected.norm() <= 1e-12 {
        return Ok((before, 0));
    }
    let after = schmidt_rank(&PureState::normalized(state.local_dim(), projected)?, RANK_TOL);
    Ok((before, after))
}

/// Schmidt rank of an antisymmetric state, which must be even.
pub fn antisymmetric_rank_parity(state: &PureState) -> Result<usize> {
    require_antisymmetric(state)?;
    let rank = schmidt_rank(state, RANK_TOL);
    if !rank.is_multiple_of(2) {
        return Err(Error::Tolerance(format!(
            "antisymmetric state has odd numerical Schmidt rank {rank}"
        )));
    }
    Ok(rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_antisymmetric_state, random_pure_state, seeded};
    use crate::states::{max_entangled, psi_0a, psi_a};

    #[test]
    fn product_state_has_rank_one() {
        let s = schmidt_decompose(&PureState::basis(3, 1, 1), RANK_TOL).unwrap();
        assert_eq!(s.rank, 1);
        assert!((s.coefficients[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn max_entangled_has_flat_spectrum() {
        for d in 2..=6 {
            let s = schmidt_decompose(&max_entangled(d).unwrap(), RANK_TOL).unwrap();
            assert_eq!(s.rank, d);
            for c in &s.coefficients {
                assert!((c * c - 1.0 / d as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn psi_a_coefficients_appear_twice() {
        let c = PsiACoefficients::new(4, vec![(3.0f64 / 8.0).sqrt(), (1.0f64 / 8.0).sqrt()]).unwrap();
        let s = schmidt_decompose(&psi_a(&c).unwrap(), RANK_TOL).unwrap();
        assert_eq!(s.rank, 4);
        let want = [c.values()[0], c.values()[0], c.values()[1], c.values()[1]];
        for (got, want) in s.coefficients.iter().zip(want) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn reconstruction_on_random_states() {
        let mut rng = seeded(11);
        for trial in 0..100 {
            let d = 2 + trial % 7;
            let phi = random_pure_state(&mut rng, d).unwrap();
            let s = schmidt_decompose(&phi, RANK_TOL).unwrap();
            assert!((s.reconstruct() - phi.amplitudes()).amax_norm() <= 1e-9);
            let total: f64 = s.coefficients.iter().map(|c| c * c).sum();
            assert!((total - 1.0).abs() < 1e-10);
            assert!(s.rank <= d);
        }
    }

    trait AmaxNorm {
        fn amax_norm(&self) -> f64;
    }
    impl AmaxNorm for CVector {
        fn amax_norm(&self) -> f64 {
            self.iter().fold(0.0, |m, z| m.max(z.norm()))
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(schmidt_decompose(&PureState::basis(2, 1, 1), 0.0).is_err());
        let sym = PureState::basis(2, 1, 1);
        assert!(matches!(
            youla_normal_form(&sym, RANK_TOL),
            Err(Error::NotAntisymmetric { .. })
        ));
        assert!(matches!(
            antisymmetric_rank_parity(&sym),
            Err(Error::NotAntisymmetric { .. })
        ));
    }

    #[test]
    fn singlet_normal_form_is_trivial() {
        let singlet = psi_0a(2).unwrap();
        let nf = youla_normal_form(&singlet, RANK_TOL).unwrap();
        assert!((nf.coefficients[0] - 0.5f64.sqrt()).abs() < 1e-14);
        assert!(max_abs_diff(&nf.unitary, &CMatrix::identity(2, 2)) < 1e-14);
        assert!(nf.residual < 1e-14);
    }

    #[test]
    fn equal_coefficient_state_is_already_normal() {
        for d in [4, 6, 8] {
            let nf = youla_normal_form(&psi_0a(d).unwrap(), RANK_TOL).unwrap();
            assert!(nf.residual <= 1e-10);
            let c = 1.0 / (d as f64).sqrt();
            assert!(nf.coefficients.iter().all(|x| (x - c).abs() < 1e-12));
            assert!(max_abs_diff(&nf.unitary, &CMatrix::identity(d, d)) < 1e-12);
        }
    }

    #[test]
    fn odd_dimension_leaves_last_row_zero() {
        let mut rng = seeded(5);
        let phi = random_antisymmetric_state(&mut rng, 5).unwrap();
        let nf = youla_normal_form(&phi, RANK_TOL).unwrap();
        assert_eq!(nf.coefficients.len(), 2);
        assert!(nf.coefficients.iter().all(|&c| c > 1e-6));
        assert!(nf.residual <= 1e-9);
        let n = nf.unitary.transpose() * phi.amplitude_matrix() * &nf.unitary;
        for k in 0..5 {
            assert!(n[(4, k)].norm() < 1e-9 && n[(k, 4)].norm() < 1e-9);
        }
    }

    #[test]
    fn doubling_examples() {
        assert_eq!(doubling_bound_check(&PureState::basis(3, 1, 2)).unwrap(), (1, 2));
        assert_eq!(doubling_bound_check(&PureState::basis(3, 1, 1)).unwrap(), (1, 0));
    }

    #[test]
    fn parity_examples() {
        assert_eq!(antisymmetric_rank_parity(&psi_0a(2).unwrap()).unwrap(), 2);
        assert_eq!(antisymmetric_rank_parity(&psi_0a(6).unwrap()).unwrap(), 6);
        let mut rng = seeded(9);
        for _ in 0..20 {
            let phi = random_antisymmetric_state(&mut rng, 7).unwrap();
            let r = antisymmetric_rank_parity(&phi).unwrap();
            assert!([2, 4, 6].contains(&r));
        }
    }
}
