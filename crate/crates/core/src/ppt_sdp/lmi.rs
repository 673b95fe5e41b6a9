//! Primal-dual interior-point method for linear matrix inequalities over
//! complex Hermitian blocks.
//!
//! Solves
//!
//! ```text
//! maximize    b . y
//! subject to  S(y) = F_0 + sum_i y_i F_i  >= 0      (block diagonal)
//! ```
//!
//! together with its dual `minimize tr(F_0 Z)` s.t. `tr(F_i Z) = -b_i`,
//! `Z >= 0`. Iterates use the HKM search direction with a Mehrotra
//! predictor-corrector step. The `y` iterates stay strictly feasible, so
//! `b . y` is always attained by an actual point of the feasible set.
//!
//! Generators are stored per block either sparse (a handful of entries) or
//! dense; the Schur complement exploits sparsity pairwise.

use nalgebra::{Cholesky, DMatrix, DVector, LU};
use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::tensor_core::{hermitian_part, CMatrix};

#[derive(Debug, Clone)]
pub enum BlockTerm {
    Zero,
    /// `(row, col, value)` triplets; positions are unique.
    Sparse(Vec<(usize, usize, Complex64)>),
    Dense(CMatrix),
}

impl BlockTerm {
    fn add_scaled(&self, target: &mut CMatrix, scale: f64) {
        match self {
            BlockTerm::Zero => {}
            BlockTerm::Sparse(entries) => {
                for &(r, c, v) in entries {
                    target[(r, c)] += v * scale;
                }
            }
            BlockTerm::Dense(m) => {
                *target += m.map(|z| z * scale);
            }
        }
    }

    /// `Re tr(F K)`.
    fn trace_with(&self, k: &CMatrix) -> f64 {
        match self {
            BlockTerm::Zero => 0.0,
            BlockTerm::Sparse(entries) => entries.iter().map(|&(r, c, v)| (v * k[(c, r)]).re).sum(),
            BlockTerm::Dense(m) => {
                let mut acc = 0.0;
                for r in 0..m.nrows() {
                    for c in 0..m.ncols() {
                        acc += (m[(r, c)] * k[(c, r)]).re;
                    }
                }
                acc
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct LmiProblem {
    pub block_sizes: Vec<usize>,
    /// `F_0`, one dense matrix per block.
    pub constant: Vec<CMatrix>,
    /// `generators[i][block]` is block `block` of `F_i`.
    pub generators: Vec<Vec<BlockTerm>>,
    /// `b`, maximized against `y`.
    pub objective: Vec<f64>,
}

impl LmiProblem {
    pub fn num_vars(&self) -> usize {
        self.generators.len()
    }

    pub fn slack(&self, y: &[f64]) -> Vec<CMatrix> {
        let mut s = self.constant.clone();
        for (gen, &yi) in self.generators.iter().zip(y) {
            if yi == 0.0 {
                continue;
            }
            for (blk, term) in gen.iter().enumerate() {
                term.add_scaled(&mut s[blk], yi);
            }
        }
        s
    }

    fn direction_slack(&self, dy: &DVector<f64>) -> Vec<CMatrix> {
        let mut s: Vec<CMatrix> = self
            .block_sizes
            .iter()
            .map(|&n| CMatrix::zeros(n, n))
            .collect();
        for (gen, &yi) in self.generators.iter().zip(dy.iter()) {
            for (blk, term) in gen.iter().enumerate() {
                term.add_scaled(&mut s[blk], yi);
            }
        }
        s
    }

    fn validate(&self) -> Result<()> {
        let nb = self.block_sizes.len();
        if self.constant.len() != nb {
            return Err(Error::Dimension("one constant matrix per block".into()));
        }
        if self.objective.len() != self.generators.len() {
            return Err(Error::Dimension("objective length must match generator count".into()));
        }
        for (blk, &n) in self.block_sizes.iter().enumerate() {
            if self.constant[blk].shape() != (n, n) {
                return Err(Error::Dimension(format!("constant block {blk} is not {n}x{n}")));
            }
        }
        if self.generators.iter().any(|g| g.len() != nb) {
            return Err(Error::Dimension("every generator needs one term per block".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LmiOptions {
    /// Target for the relative duality gap and primal infeasibility.
    pub tol: f64,
    pub max_iterations: usize,
    /// Fraction of the distance to the cone boundary taken per step.
    pub step_fraction: f64,
}

impl Default for LmiOptions {
    fn default() -> Self {
        Self {
            tol: 1e-7,
            max_iterations: 200,
            step_fraction: 0.95,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LmiStatus {
    Converged,
    MaxIterations,
    /// Steps collapsed before reaching the tolerance.
    Stalled,
}

#[derive(Debug, Clone)]
pub struct LmiSolution {
    pub y: Vec<f64>,
    pub slack: Vec<CMatrix>,
    pub dual: Vec<CMatrix>,
    /// `b . y` at the returned (strictly feasible) point.
    pub objective: f64,
    /// `tr(F_0 Z)`; an upper bound on the optimum once `Z` is dual feasible.
    pub dual_objective: f64,
    pub primal_infeasibility: f64,
    pub iterations: usize,
    pub status: LmiStatus,
}

struct BlockFactor {
    chol: Cholesky<Complex64, nalgebra::Dyn>,
}

impl BlockFactor {
    /// `None` unless `m` is Hermitian positive definite. The complex
    /// factorization takes square roots of negative pivots, so the pivots are
    /// checked here.
    fn new(m: &CMatrix) -> Option<Self> {
        let chol = Cholesky::new(hermitian_part(m))?;
        let l = chol.l_dirty();
        let positive = (0..l.nrows()).all(|k| {
            let p = l[(k, k)];
            p.re > 0.0 && p.im.abs() <= 1e-12 * p.re && p.re.is_finite()
        });
        positive.then_some(Self { chol })
    }

    fn inverse(&self) -> CMatrix {
        hermitian_part(&self.chol.inverse())
    }

    /// Largest `alpha` with `X + alpha D >= 0` (infinite when `D >= 0`).
    fn max_step(&self, d: &CMatrix) -> Result<f64> {
        let l = self.chol.l();
        let a1 = l
            .solve_lower_triangular(d)
            .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))?;
        let t = l
            .solve_lower_triangular(&a1.adjoint())
            .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))?
            .adjoint();
        let lo = hermitian_part(&t).symmetric_eigenvalues().min();
        Ok(if lo >= 0.0 { f64::INFINITY } else { -1.0 / lo })
    }
}

fn factor_all(blocks: &[CMatrix]) -> Option<Vec<BlockFactor>> {
    blocks.iter().map(BlockFactor::new).collect()
}

fn inner(a: &[CMatrix], b: &[CMatrix]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let mut acc = 0.0;
            for r in 0..x.nrows() {
                for c in 0..x.ncols() {
                    acc += (x[(r, c)] * y[(c, r)]).re;
                }
            }
            acc
        })
        .sum()
}

/// `M_ij = Re tr(F_i Z F_j W)` summed over blocks.
fn schur_complement(problem: &LmiProblem, z: &[CMatrix], w: &[CMatrix]) -> DMatrix<f64> {
    let m = problem.num_vars();
    let mut out = DMatrix::<f64>::zeros(m, m);
    for blk in 0..problem.block_sizes.len() {
        let zb = &z[blk];
        let wb = &w[blk];
        // W F_i Z for dense generators
        let dense: Vec<Option<CMatrix>> = problem
            .generators
            .iter()
            .map(|g| match &g[blk] {
                BlockTerm::Dense(f) => Some(wb * f * zb),
                _ => None,
            })
            .collect();
        for i in 0..m {
            let fi = &problem.generators[i][blk];
            if matches!(fi, BlockTerm::Zero) {
                continue;
            }
            for j in i..m {
                let fj = &problem.generators[j][blk];
                let value = match (fi, fj) {
                    (_, BlockTerm::Zero) => continue,
                    _ if dense[i].is_some() => fj.trace_with(dense[i].as_ref().unwrap()),
                    _ if dense[j].is_some() => fi.trace_with(dense[j].as_ref().unwrap()),
                    (BlockTerm::Sparse(a), BlockTerm::Sparse(b)) => {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for &(r1, c1, v1) in a {
                            for &(r2, c2, v2) in b {
                                acc += v1 * zb[(c1, r2)] * v2 * wb[(c2, r1)];
                            }
                        }
                        acc.re
                    }
                    _ => unreachable!("dense terms handled above"),
                };
                out[(i, j)] += value;
            }
        }
    }
    for i in 0..m {
        for j in 0..i {
            out[(i, j)] = out[(j, i)];
        }
    }
    out
}

enum SchurSolver {
    Chol(Cholesky<f64, nalgebra::Dyn>),
    Lu(LU<f64, nalgebra::Dyn, nalgebra::Dyn>),
}

impl SchurSolver {
    fn new(m: DMatrix<f64>) -> Self {
        match Cholesky::new(m.clone()) {
            Some(c) => SchurSolver::Chol(c),
            None => SchurSolver::Lu(LU::new(m)),
        }
    }

    fn solve(&self, rhs: &DVector<f64>) -> Result<DVector<f64>> {
        match self {
            SchurSolver::Chol(c) => Ok(c.solve(rhs)),
            SchurSolver::Lu(lu) => lu
                .solve(rhs)
                .ok_or_else(|| Error::Numerical("singular Schur complement".into())),
        }
    }
}

/// Runs the interior-point iteration from a strictly feasible `y0`.
pub fn solve(problem: &LmiProblem, y0: &[f64], opts: &LmiOptions) -> Result<LmiSolution> {
    problem.validate()?;
    let m = problem.num_vars();
    if y0.len() != m {
        return Err(Error::Dimension(format!("starting point has {} entries, need {m}", y0.len())));
    }
    let b = DVector::from_column_slice(&problem.objective);
    let n_total: usize = problem.block_sizes.iter().sum();
    let mut y = y0.to_vec();
    let mut s = problem.slack(&y);
    if factor_all(&s).is_none() {
        return domain("starting point is not strictly feasible");
    }
    let mut z: Vec<CMatrix> = problem
        .block_sizes
        .iter()
        .map(|&n| CMatrix::identity(n, n))
        .collect();

    let primal_residual = |z: &[CMatrix]| -> DVector<f64> {
        DVector::from_fn(m, |i, _| {
            problem.objective[i]
                + problem.generators[i]
                    .iter()
                    .zip(z)
                    .map(|(t, zb)| t.trace_with(zb))
                    .sum::<f64>()
        })
    };

    let mut status = LmiStatus::MaxIterations;
    let mut iterations = 0;
    let mut stalls = 0;
    for it in 0..opts.max_iterations {
        iterations = it;
        let objective = b.dot(&DVector::from_column_slice(&y));
        let dual_objective = inner(&problem.constant, &z);
        let rp = primal_residual(&z);
        let gap = inner(&z, &s);
        let rel_gap = gap / (1.0 + objective.abs() + dual_objective.abs());
        let infeas = rp.norm() / (1.0 + b.norm());
        if rel_gap <= opts.tol && infeas <= opts.tol {
            status = LmiStatus::Converged;
            break;
        }

        let s_fac = factor_all(&s)
            .ok_or_else(|| Error::Numerical("slack left the interior".into()))?;
        let z_fac = factor_all(&z)
            .ok_or_else(|| Error::Numerical("dual iterate left the interior".into()))?;
        let w: Vec<CMatrix> = s_fac.iter().map(|f| f.inverse()).collect();
        let mu = gap / n_total as f64;

        let schur = SchurSolver::new(schur_complement(problem, &z, &w));

        let trace_terms = |k: &[CMatrix]| -> DVector<f64> {
            DVector::from_fn(m, |i, _| {
                problem.generators[i]
                    .iter()
                    .zip(k)
                    .map(|(t, kb)| t.trace_with(kb))
                    .sum::<f64>()
            })
        };
        let dz_for = |ds: &[CMatrix], target: f64, corr: Option<&[CMatrix]>| -> Vec<CMatrix> {
            (0..z.len())
                .map(|blk| {
                    let mut dz = w[blk].map(|x| x * target) - &z[blk] - &z[blk] * &ds[blk] * &w[blk];
                    if let Some(c) = corr {
                        dz -= &c[blk];
                    }
                    hermitian_part(&dz)
                })
                .collect()
        };
        let step = |fac: &[BlockFactor], dir: &[CMatrix]| -> Result<f64> {
            let mut alpha: f64 = 1.0;
            for (f, d) in fac.iter().zip(dir) {
                alpha = alpha.min(opts.step_fraction * f.max_step(d)?);
            }
            Ok(alpha)
        };

        // predictor
        let dy_aff = schur.solve(&b)?;
        let ds_aff = problem.direction_slack(&dy_aff);
        let dz_aff = dz_for(&ds_aff, 0.0, None);
        let ap = step(&z_fac, &dz_aff)?;
        let ad = step(&s_fac, &ds_aff)?;
        let z_aff: Vec<CMatrix> = z.iter().zip(&dz_aff).map(|(a, d)| a + d.map(|x| x * ap)).collect();
        let s_aff: Vec<CMatrix> = s.iter().zip(&ds_aff).map(|(a, d)| a + d.map(|x| x * ad)).collect();
        let mu_aff = inner(&z_aff, &s_aff) / n_total as f64;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        // corrector
        let corr: Vec<CMatrix> = (0..z.len()).map(|k| &dz_aff[k] * &ds_aff[k] * &w[k]).collect();
        let rhs = &b + trace_terms(&w) * (sigma * mu) - trace_terms(&corr);
        let dy = schur.solve(&rhs)?;
        let ds = problem.direction_slack(&dy);
        let dz = dz_for(&ds, sigma * mu, Some(&corr));
        let ap = step(&z_fac, &dz)?;
        let ad = step(&s_fac, &ds)?;

        for (yi, di) in y.iter_mut().zip(dy.iter()) {
            *yi += ad * di;
        }
        s = problem.slack(&y);
        for (zb, d) in z.iter_mut().zip(&dz) {
            *zb += d.map(|x| x * ap);
            *zb = hermitian_part(zb);
        }
        if ap.max(ad) < 1e-10 {
            stalls += 1;
            if stalls >= 3 {
                status = LmiStatus::Stalled;
                break;
            }
        } else {
            stalls = 0;
        }
        iterations = it + 1;
    }

    let objective = b.dot(&DVector::from_column_slice(&y));
    let dual_objective = inner(&problem.constant, &z);
    let primal_infeasibility = primal_residual(&z).norm() / (1.0 + b.norm());
    Ok(LmiSolution {
        y,
        slack: s,
        dual: z,
        objective,
        dual_objective,
        primal_infeasibility,
        iterations,
        status,
    })
}
