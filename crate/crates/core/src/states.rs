//! Constructors for the named states and operators: the maximally entangled
//! and isotropic states, the antisymmetric normal-form family `psi_A`, the
//! symmetric-admixture family `sigma_0`, and the diagonal local filter `tau`.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::tensor_core::{
    ket_index, require_local_dim, symmetric_dim, symmetric_projector, BipartiteOperator, CMatrix,
    CVector, PureState,
};

/// Normal-form coefficients `c_mu` for odd `mu = 1, 3, ...`.
///
/// `values()[k]` is `c_{2k+1}`; it weights the pair of kets `|mu,mu+1>`,
/// `|mu+1,mu>`. The coefficients satisfy `sum c_mu^2 = 1/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiACoefficients {
    local_dim: usize,
    values: Vec<f64>,
}

/// Accepted deviation of `sum c^2` from `1/2`.
pub const COEFFICIENT_NORM_TOL: f64 = 1e-9;

impl PsiACoefficients {
    /// Validates, never renormalizes. For odd `d` the last basis label is unused
    /// and there are `(d-1)/2` coefficients.
    pub fn new(local_dim: usize, values: Vec<f64>) -> Result<Self> {
        require_local_dim(local_dim)?;
        if values.len() != local_dim / 2 {
            return Err(Error::Dimension(format!(
                "local dimension {local_dim} needs {} coefficients, got {}",
                local_dim / 2,
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|c| !(c.is_finite() && **c >= 0.0)) {
            return domain(format!("coefficients must be finite and non-negative, got {bad}"));
        }
        let sum_sq: f64 = values.iter().map(|c| c * c).sum();
        if (sum_sq - 0.5).abs() > COEFFICIENT_NORM_TOL {
            return domain(format!("sum of squared coefficients is {sum_sq}, expected 1/2"));
        }
        Ok(Self { local_dim, values })
    }

    /// Rescales non-negative `raw` so that `sum c^2 = 1/2`.
    pub fn normalized(local_dim: usize, raw: Vec<f64>) -> Result<Self> {
        let sum_sq: f64 = raw.iter().map(|c| c * c).sum();
        if !(sum_sq > 0.0) || !sum_sq.is_finite() {
            return domain("cannot normalize all-zero coefficients");
        }
        let scale = (0.5 / sum_sq).sqrt();
        Self::new(local_dim, raw.into_iter().map(|c| c * scale).collect())
    }

    /// All coefficients equal, `c_mu = 1/sqrt(d)` for even `d`.
    pub fn equal(local_dim: usize) -> Result<Self> {
        require_local_dim(local_dim)?;
        Self::normalized(local_dim, vec![1.0; local_dim / 2])
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

fn require_even(d: usize) -> Result<()> {
    require_local_dim(d)?;
    if !d.is_multiple_of(2) {
        return domain(format!("local dimension must be even, got {d}"));
    }
    Ok(())
}

fn require_probability(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return domain(format!("{name} must lie in [0, 1], got {x}"));
    }
    Ok(())
}

/// `|Psi_d^+> = (1/sqrt d) sum_k |k,k>`.
pub fn max_entangled(d: usize) -> Result<PureState> {
    require_local_dim(d)?;
    let mut v = CVector::zeros(d * d);
    let amp = Complex64::from(1.0 / (d as f64).sqrt());
    for k in 1..=d {
        v[ket_index(d, k, k)] = amp;
    }
    PureState::new(d, v)
}

/// `F |Psi+><Psi+| + (1 - F)(I - |Psi+><Psi+|)/(d^2 - 1)`.
pub fn isotropic_state(d: usize, fraction: f64) -> Result<BipartiteOperator> {
    require_probability("entanglement fraction", fraction)?;
    let phi = BipartiteOperator::projector(&max_entangled(d)?);
    let n = (d * d) as f64;
    let rest = BipartiteOperator::identity(d).sub(&phi)?;
    phi.combine(fraction, &rest, (1.0 - fraction) / (n - 1.0))
}

/// `|psi_A> = sum_{mu odd} c_mu (|mu,mu+1> - |mu+1,mu>)`.
pub fn psi_a(coeffs: &PsiACoefficients) -> Result<PureState> {
    let d = coeffs.local_dim();
    let mut v = CVector::zeros(d * d);
    for (k, &c) in coeffs.values().iter().enumerate() {
        let mu = 2 * k + 1;
        v[ket_index(d, mu, mu + 1)] = Complex64::from(c);
        v[ket_index(d, mu + 1, mu)] = Complex64::from(-c);
    }
    PureState::new(d, v)
}

/// The equal-coefficient antisymmetric state, amplitudes `+-1/sqrt d`.
pub fn psi_0a(d: usize) -> Result<PureState> {
    require_even(d)?;
    psi_a(&PsiACoefficients::equal(d)?)
}

/// `p |psi_0A><psi_0A| + (1 - p) P_S / d_S`.
pub fn sigma_0(d: usize, p: f64) -> Result<BipartiteOperator> {
    require_even(d)?;
    require_probability("p", p)?;
    let anti = BipartiteOperator::projector(&psi_0a(d)?);
    let sym = symmetric_projector(d)?;
    anti.combine(p, &sym, (1.0 - p) / symmetric_dim(d) as f64)
}

/// Local filter factors `t_mu = t_{mu+1} = sqrt(c_mu) d^{1/4}` (index `i-1` holds `t_i`).
pub fn tau_factors(coeffs: &PsiACoefficients) -> Result<Vec<f64>> {
    let d = coeffs.local_dim();
    require_even(d)?;
    let quarter = (d as f64).powf(0.25);
    Ok(coeffs
        .values()
        .iter()
        .flat_map(|&c| {
            let t = c.sqrt() * quarter;
            [t, t]
        })
        .collect())
}

/// Diagonal operator `tau = sum_ij t_i t_j |i,j><i,j|`; maps `psi_0A` onto `psi_A`.
pub fn tau_operator(coeffs: &PsiACoefficients) -> Result<BipartiteOperator> {
    let t = tau_factors(coeffs)?;
    let d = coeffs.local_dim();
    let mut m = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            m[(i * d + j, i * d + j)] = Complex64::from(t[i] * t[j]);
        }
    }
    BipartiteOperator::new(d, m)
}

/// `tau op tau`, computed entrywise since `tau` is diagonal.
pub fn tau_conjugate(op: &BipartiteOperator, coeffs: &PsiACoefficients) -> Result<BipartiteOperator> {
    let d = coeffs.local_dim();
    if op.local_dim() != d {
        return Err(Error::Dimension(format!(
            "operator has local dimension {}, coefficients {d}",
            op.local_dim()
        )));
    }
    let t = tau_factors(coeffs)?;
    let diag: Vec<f64> = (0..d * d).map(|k| t[k / d] * t[k % d]).collect();
    let m = CMatrix::from_fn(d * d, d * d, |r, c| op.matrix()[(r, c)] * (diag[r] * diag[c]));
    BipartiteOperator::new(d, m)
}
