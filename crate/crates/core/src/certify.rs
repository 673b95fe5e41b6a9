//! Schmidt-number lower bounds with an auditable chain of reasoning.
//!
//! Certificates are only ever weakened by numerical noise: every threshold
//! comparison is strict and shifted by the stated tolerance.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{domain, Error, Result};
use crate::spectral_analytic::ppt_threshold_analytic;
use crate::states::sigma_0;
use crate::tensor_core::BipartiteOperator;

pub const SCHEMA_VERSION: &str = "schmidt-certificate/1";
/// Slack applied to the closed isotropic boundary `F >= (r-1)/d`.
pub const BOUNDARY_EPS: f64 = 1e-12;
/// Allowed negativity of the partial transpose in a constructed state.
pub const CONSTRUCTION_PPT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    PpptThreshold,
    IsotropicFraction,
    AntisymProjection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    /// Antisymmetric states have even Schmidt number, at least 2.
    AntisymmetricEven,
    /// `p^PPT(rho_A) < L(r)` forces Schmidt number above `r`.
    ThresholdContrapositive,
    /// Projecting onto the antisymmetric subspace at most doubles the Schmidt number.
    ProjectionDoubling,
    /// A pure state's Schmidt number is its Schmidt rank.
    PureStateRank,
    /// The closed-form spectrum of the partial transpose is non-negative.
    AnalyticPpt,
    /// Fresh eigendecomposition of the partial transpose.
    NumericPpt,
    /// Entanglement fraction `F >= (r-1)/d` of an isotropic state gives Schmidt number at least `r`.
    IsotropicFraction,
    /// A `d x d` state has Schmidt number at most `d`.
    DimensionCap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InferenceStep {
    pub rule: Rule,
    pub statement: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchmidtCertificate {
    pub schema_version: String,
    /// SHA-256 of the certified input, hex.
    pub input_digest: String,
    pub method: Method,
    pub measured_value: f64,
    pub threshold_used: f64,
    pub schmidt_lower_bound: usize,
    /// Bound for any PPT state whose antisymmetric projection is proportional to the input.
    pub ppt_extension_bound: Option<usize>,
    pub inference_chain: Vec<InferenceStep>,
    pub tolerance: f64,
}

impl SchmidtCertificate {
    pub fn with_digest(mut self, digest: String) -> Self {
        self.input_digest = digest;
        self
    }
}

fn step(rule: Rule, statement: impl Into<String>) -> InferenceStep {
    InferenceStep {
        rule,
        statement: statement.into(),
    }
}

/// Hash of the local dimension and every matrix entry (row-major, re then im, little endian).
pub fn state_digest(op: &BipartiteOperator) -> String {
    let mut h = Sha256::new();
    h.update((op.local_dim() as u64).to_le_bytes());
    let m = op.matrix();
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            h.update(m[(r, c)].re.to_le_bytes());
            h.update(m[(r, c)].im.to_le_bytes());
        }
    }
    hex::encode(h.finalize())
}

fn parameter_digest(tag: &str, values: &[f64]) -> String {
    let mut h = Sha256::new();
    h.update(tag.as_bytes());
    for v in values {
        h.update(v.to_le_bytes());
    }
    hex::encode(h.finalize())
}

/// `L(2) = L(3) = 1/2`, `1/(d+2)` for even `d >= 4`, `1/(d+1)` for odd `d >= 5`.
pub fn l_threshold(d: usize) -> Result<f64> {
    match d {
        0 | 1 => domain(format!("L(d) needs d >= 2, got {d}")),
        2 | 3 => Ok(0.5),
        _ if d.is_multiple_of(2) => Ok(1.0 / (d as f64 + 2.0)),
        _ => Ok(1.0 / (d as f64 + 1.0)),
    }
}

/// Bound from a measured `p^PPT` of an antisymmetric state in ambient dimension `d`.
///
/// Walks even `r = 2, 4, ..., d`; each `p < L(r) - tol` lifts the bound to
/// `r + 2`. The first failure stops the walk, since `L` is non-increasing.
pub fn infer_from_pppt(d: usize, p_measured: f64, tol: f64) -> Result<SchmidtCertificate> {
    if d < 2 {
        return domain(format!("ambient dimension must be at least 2, got {d}"));
    }
    if !(tol >= 0.0) {
        return domain(format!("tolerance must be non-negative, got {tol}"));
    }
    if !(p_measured >= 0.0 && p_measured <= 0.5 + tol) {
        return domain(format!("p must lie in [0, 1/2 + tol], got {p_measured}"));
    }
    let mut chain = vec![step(
        Rule::AntisymmetricEven,
        "input is antisymmetric, so its Schmidt number is even and at least 2",
    )];
    let mut bound = 2;
    let mut threshold = l_threshold(2)?;
    let mut r = 2;
    while r <= d {
        let l = l_threshold(r)?;
        threshold = l;
        if p_measured < l - tol {
            bound = r + 2;
            chain.push(step(
                Rule::ThresholdContrapositive,
                format!("p = {p_measured} < L({r}) - tol = {}, so Schmidt number exceeds {r}", l - tol),
            ));
            r += 2;
        } else {
            chain.push(step(
                Rule::ThresholdContrapositive,
                format!("p = {p_measured} >= L({r}) - tol = {}, no bound beyond {bound}", l - tol),
            ));
            break;
        }
    }
    if bound > 2 {
        chain.push(step(
            Rule::AntisymmetricEven,
            format!("Schmidt number is even, so the bound is {bound}"),
        ));
    }
    let extension = bound.div_ceil(2);
    chain.push(step(
        Rule::ProjectionDoubling,
        format!("any PPT state projecting onto a multiple of the input has Schmidt number at least {extension}"),
    ));
    Ok(SchmidtCertificate {
        schema_version: SCHEMA_VERSION.into(),
        input_digest: parameter_digest("pppt", &[d as f64, p_measured, tol]),
        method: Method::PpptThreshold,
        measured_value: p_measured,
        threshold_used: threshold,
        schmidt_lower_bound: bound,
        ppt_extension_bound: Some(extension),
        inference_chain: chain,
        tolerance: tol,
    })
}

/// Largest `r <= d` with `F >= (r-1)/d`, boundary included.
pub fn isotropic_witness(d: usize, fraction: f64) -> Result<SchmidtCertificate> {
    if d < 2 {
        return domain(format!("dimension must be at least 2, got {d}"));
    }
    if !(0.0..=1.0).contains(&fraction) {
        return domain(format!("entanglement fraction must lie in [0, 1], got {fraction}"));
    }
    let reached = ((fraction * d as f64) + BOUNDARY_EPS).floor() as usize + 1;
    let bound = reached.min(d);
    let threshold = (bound - 1) as f64 / d as f64;
    let mut chain = vec![step(
        Rule::IsotropicFraction,
        format!("F = {fraction} >= ({bound} - 1)/{d} = {threshold}"),
    )];
    if reached > d {
        chain.push(step(Rule::DimensionCap, format!("capped at the local dimension {d}")));
    }
    Ok(SchmidtCertificate {
        schema_version: SCHEMA_VERSION.into(),
        input_digest: parameter_digest("isotropic", &[d as f64, fraction]),
        method: Method::IsotropicFraction,
        measured_value: fraction,
        threshold_used: threshold,
        schmidt_lower_bound: bound,
        ppt_extension_bound: None,
        inference_chain: chain,
        tolerance: BOUNDARY_EPS,
    })
}

/// `sigma_0(d, 1/(d+2))`, a PPT state with Schmidt number at least `d/2`.
pub fn construct_half_d_state(d: usize) -> Result<(BipartiteOperator, SchmidtCertificate)> {
    if d < 4 || !d.is_multiple_of(2) {
        return domain(format!("construction needs even d >= 4, got {d}"));
    }
    let p = ppt_threshold_analytic(d)?;
    let sigma = sigma_0(d, p)?;
    let ppt_min = sigma.partial_transpose().min_eigenvalue()?;
    if ppt_min < -CONSTRUCTION_PPT_TOL {
        return Err(Error::Tolerance(format!(
            "constructed state has partial-transpose eigenvalue {ppt_min:e}"
        )));
    }
    let bound = d / 2;
    let chain = vec![
        step(
            Rule::PureStateRank,
            format!("the equal-coefficient antisymmetric state has Schmidt rank {d}"),
        ),
        step(
            Rule::ProjectionDoubling,
            format!("the antisymmetric projection is proportional to it, so the Schmidt number is at least {d}/2 = {bound}"),
        ),
        step(
            Rule::AnalyticPpt,
            format!("at p = 1/({d}+2) the smallest partial-transpose eigenvalue family vanishes"),
        ),
        step(
            Rule::NumericPpt,
            format!("recomputed smallest partial-transpose eigenvalue {ppt_min:.3e} >= -{CONSTRUCTION_PPT_TOL:e}"),
        ),
    ];
    let cert = SchmidtCertificate {
        schema_version: SCHEMA_VERSION.into(),
        input_digest: state_digest(&sigma),
        method: Method::AntisymProjection,
        measured_value: p,
        threshold_used: p,
        schmidt_lower_bound: bound,
        ppt_extension_bound: Some(bound),
        inference_chain: chain,
        tolerance: CONSTRUCTION_PPT_TOL,
    };
    Ok((sigma, cert))
}
