//! JSON exchange formats.
//!
//! Operators are `{"local_dim": d, "entries": [[re, im], ...]}` with the
//! `d^2 x d^2` entries row-major; pure states are
//! `{"local_dim": d, "amplitudes": [[re, im], ...]}`. Readers accept either
//! where a state is expected.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ppt_sdp::{PpptProblem, PpptResiduals, PpptResult, PpptStatus};
use crate::schmidt::NormalFormResult;
use crate::tensor_core::{hermitian_eig, BipartiteOperator, CMatrix, CVector, PureState};

/// Rank-one detection when a projector is read where a pure state is needed.
pub const PURITY_TOL: f64 = 1e-9;

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn complex(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub local_dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl From<&BipartiteOperator> for MatrixJson {
    fn from(op: &BipartiteOperator) -> Self {
        let m = op.matrix();
        let n = m.nrows();
        Self {
            local_dim: op.local_dim(),
            entries: (0..n * n).map(|k| pair(m[(k / n, k % n)])).collect(),
        }
    }
}

impl TryFrom<&MatrixJson> for BipartiteOperator {
    type Error = Error;

    fn try_from(j: &MatrixJson) -> Result<Self> {
        let n = j.local_dim * j.local_dim;
        if j.entries.len() != n * n {
            return Err(Error::Dimension(format!(
                "expected {} entries for local_dim {}, got {}",
                n * n,
                j.local_dim,
                j.entries.len()
            )));
        }
        BipartiteOperator::new(j.local_dim, CMatrix::from_fn(n, n, |r, c| complex(j.entries[r * n + c])))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PureStateJson {
    pub local_dim: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl From<&PureState> for PureStateJson {
    fn from(s: &PureState) -> Self {
        Self {
            local_dim: s.local_dim(),
            amplitudes: s.amplitudes().iter().map(|&z| pair(z)).collect(),
        }
    }
}

impl TryFrom<&PureStateJson> for PureState {
    type Error = Error;

    fn try_from(j: &PureStateJson) -> Result<Self> {
        let n = j.local_dim * j.local_dim;
        if j.amplitudes.len() != n {
            return Err(Error::Dimension(format!(
                "expected {n} amplitudes for local_dim {}, got {}",
                j.local_dim,
                j.amplitudes.len()
            )));
        }
        PureState::new(j.local_dim, CVector::from_iterator(n, j.amplitudes.iter().map(|&p| complex(p))))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateJson {
    Matrix(MatrixJson),
    Pure(PureStateJson),
}

impl StateJson {
    pub fn to_operator(&self) -> Result<BipartiteOperator> {
        match self {
            StateJson::Matrix(m) => m.try_into(),
            StateJson::Pure(p) => Ok(BipartiteOperator::projector(&p.try_into()?)),
        }
    }

    /// A projector is accepted when it has rank one; the global phase is then
    /// fixed by making the largest amplitude real and positive.
    pub fn to_pure_state(&self) -> Result<PureState> {
        match self {
            StateJson::Pure(p) => p.try_into(),
            StateJson::Matrix(m) => {
                let op: BipartiteOperator = m.try_into()?;
                let eig = hermitian_eig(&op)?;
                let n = eig.eigenvalues.len();
                let top = eig.eigenvalues[n - 1];
                let rest: f64 = eig.eigenvalues[..n - 1].iter().map(|x| x.abs()).sum();
                if (top - 1.0).abs() > PURITY_TOL || rest > PURITY_TOL {
                    return Err(Error::Domain("operator is not a rank-one projector".into()));
                }
                let v = eig.eigenvectors.column(n - 1).into_owned();
                let lead = v.iter().fold(Complex64::new(0.0, 0.0), |best, &z| {
                    if z.norm() > best.norm() + 1e-12 {
                        z
                    } else {
                        best
                    }
                });
                let phase = lead.conj() / lead.norm();
                PureState::normalized(op.local_dim(), v * phase)
            }
        }
    }
}

pub fn matrix_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| pair(m[(r, c)])).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalFormJson {
    pub unitary: Vec<Vec<[f64; 2]>>,
    pub coefficients: Vec<f64>,
    pub residual: f64,
}

impl From<&NormalFormResult> for NormalFormJson {
    fn from(r: &NormalFormResult) -> Self {
        Self {
            unitary: matrix_rows(&r.unitary),
            coefficients: r.coefficients.clone(),
            residual: r.residual,
        }
    }
}

/// Solver output together with the input, so it can be audited on its own.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PpptResultJson {
    pub local_dim: usize,
    pub p_value: f64,
    pub upper_bound: Option<f64>,
    pub status: PpptStatus,
    pub iterations: usize,
    pub tolerance: f64,
    pub residuals: PpptResiduals,
    pub rho_a: MatrixJson,
    pub sigma_opt: MatrixJson,
    pub rho_s_opt: MatrixJson,
}

impl PpptResultJson {
    pub fn new(problem: &PpptProblem, result: &PpptResult) -> Self {
        Self {
            local_dim: problem.local_dim(),
            p_value: result.p_value,
            upper_bound: result.upper_bound.is_finite().then_some(result.upper_bound),
            status: result.status,
            iterations: result.iterations,
            tolerance: problem.tolerance,
            residuals: result.residuals,
            rho_a: problem.rho_a().into(),
            sigma_opt: (&result.sigma_opt).into(),
            rho_s_opt: (&result.rho_s_opt).into(),
        }
    }

    /// Rebuilds the problem and result; the problem is re-validated.
    pub fn restore(&self) -> Result<(PpptProblem, PpptResult)> {
        let rho_a: BipartiteOperator = (&self.rho_a).try_into()?;
        let problem = PpptProblem::with_settings(rho_a, self.tolerance, crate::ppt_sdp::DEFAULT_MAX_ITERATIONS)?;
        let result = PpptResult {
            p_value: self.p_value,
            upper_bound: self.upper_bound.unwrap_or(f64::NAN),
            sigma_opt: (&self.sigma_opt).try_into()?,
            rho_s_opt: (&self.rho_s_opt).try_into()?,
            residuals: self.residuals,
            iterations: self.iterations,
            status: self.status,
        };
        Ok((problem, result))
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Domain(format!("cannot serialize: {e}")))
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Domain(format!("malformed JSON: {e}")))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))?;
    from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{psi_0a, sigma_0};

    #[test]
    fn operator_round_trip() {
        let op = sigma_0(4, 0.1).unwrap();
        let text = to_json(&MatrixJson::from(&op)).unwrap();
        let back = from_json::<StateJson>(&text).unwrap().to_operator().unwrap();
        assert_eq!(back, op);
    }

    #[test]
    fn pure_state_round_trip_and_promotion() {
        let psi = psi_0a(4).unwrap();
        let text = to_json(&PureStateJson::from(&psi)).unwrap();
        let parsed: StateJson = from_json(&text).unwrap();
        assert!(matches!(parsed, StateJson::Pure(_)));
        assert_eq!(parsed.to_pure_state().unwrap(), psi);
        let proj = BipartiteOperator::projector(&psi);
        assert!(parsed.to_operator().unwrap().max_abs_diff(&proj) < 1e-15);

        let from_matrix = StateJson::Matrix((&proj).into()).to_pure_state().unwrap();
        assert!((from_matrix.inner(&psi).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mixed_matrix_is_not_pure() {
        let m = StateJson::Matrix((&sigma_0(4, 0.1).unwrap()).into());
        assert!(m.to_pure_state().is_err());
    }

    #[test]
    fn wrong_length_rejected() {
        let j = MatrixJson {
            local_dim: 2,
            entries: vec![[0.0, 0.0]; 15],
        };
        assert!(BipartiteOperator::try_from(&j).is_err());
        assert!(from_json::<StateJson>("{\"local_dim\": 2}").is_err());
    }
}
