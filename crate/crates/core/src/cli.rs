//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 solver did not converge,
//! 3 verification failure. JSON goes to standard output (or `--output`),
//! diagnostics to standard error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::certify::{construct_half_d_state, infer_from_pppt, isotropic_witness, state_digest};
use crate::error::Error;
use crate::exchange::{
    read_json, to_json, MatrixJson, NormalFormJson, PpptResultJson, PureStateJson, StateJson,
};
use crate::ppt_sdp::{
    solve_pppt, verify_pppt_result, PpptProblem, PpptStatus, DEFAULT_MAX_ITERATIONS, DEFAULT_TOLERANCE,
    MAX_LOCAL_DIM,
};
use crate::sampling::{random_antisymmetric_density, random_antisymmetric_state, seeded};
use crate::schmidt::{youla_normal_form, RANK_TOL};
use crate::spectral_analytic::{
    block_matrix, closed_form_spectrum, determinant_closed_form, determinant_direct, determinant_recurrence,
    ppt_threshold_analytic, DeterminantSymbols, Family, DIRECT_MAX_DIM,
};
use crate::states::{isotropic_state, max_entangled, psi_0a, psi_a, sigma_0, PsiACoefficients};
use crate::tensor_core::{hermitian_eig, BipartiteOperator};

pub const TOL_ENV: &str = "SCHMIDT_FORGE_TOL";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

/// Closed-form versus numeric eigenvalue agreement in `verify-appendix`.
pub const SPECTRUM_TOL: f64 = 1e-9;
/// Determinant agreement, relative to the Hadamard bound of the block.
pub const DETERMINANT_TOL: f64 = 1e-8;

const REPRODUCE_DIMS: [usize; 4] = [2, 4, 6, 8];

#[derive(Parser, Debug)]
#[command(name = "schmidt-forge", version, about = "PPT states, the p^PPT program and Schmidt-number certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for randomized constructors.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the main output to this file instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a named state in the exchange format.
    Construct(ConstructArgs),
    /// Normal form of an antisymmetric pure state.
    NormalForm(NormalFormArgs),
    /// Solve for the largest PPT-compatible antisymmetric weight.
    #[command(name = "p-ppt")]
    PPpt(PpptArgs),
    /// Emit a Schmidt-number certificate.
    Certify(CertifyArgs),
    /// Compare the closed-form spectrum and determinants with numerics.
    VerifyAppendix(SpectrumCheckArgs),
    /// Thresholds, solver values and certified bounds for d = 2, 4, 6, 8.
    Reproduce(ReproduceArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateKind {
    Psi0a,
    Psia,
    Sigma0,
    Isotropic,
    MaxEntangled,
    RandomAntisymmetric,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    pub kind: StateKind,
    #[arg(long)]
    pub dim: usize,
    /// Antisymmetric weight for `sigma0`.
    #[arg(long)]
    pub p: Option<f64>,
    /// Entanglement fraction for `isotropic`.
    #[arg(long)]
    pub f: Option<f64>,
    /// Comma-separated coefficients for `psia`, normalized to squared sum 1/2.
    #[arg(long, value_delimiter = ',')]
    pub coeffs: Option<Vec<f64>>,
    /// Number of mixed components for `random-antisymmetric`.
    #[arg(long, default_value_t = 1)]
    pub rank: usize,
    /// Write pure states as projectors.
    #[arg(long)]
    pub matrix: bool,
}

#[derive(Args, Debug)]
pub struct NormalFormArgs {
    #[arg(long)]
    pub state: PathBuf,
    /// Relative singular-value cutoff.
    #[arg(long, default_value_t = RANK_TOL)]
    pub rank_tol: f64,
}

#[derive(Args, Debug)]
pub struct PpptArgs {
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERATIONS)]
    pub max_iter: usize,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("mode").required(true).args(["from_pppt", "isotropic", "construct"])))]
pub struct CertifyArgs {
    /// A result file written by `p-ppt`.
    #[arg(long)]
    pub from_pppt: Option<PathBuf>,
    /// Isotropic-state witness; needs `--dim` and `--f`.
    #[arg(long, requires_all = ["dim", "f"])]
    pub isotropic: bool,
    /// Build and certify the half-dimension PPT state for this even dimension.
    #[arg(long, value_name = "D")]
    pub construct: Option<usize>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub f: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// With `--construct`, also write the state here.
    #[arg(long)]
    pub state_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SpectrumCheckArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub p: f64,
}

#[derive(Args, Debug)]
pub struct ReproduceArgs {
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERATIONS)]
    pub max_iter: usize,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        usage(e.to_string())
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type CmdResult = std::result::Result<Outcome, Failure>;

struct Outcome {
    code: i32,
    text: String,
}

fn ok(text: String) -> CmdResult {
    Ok(Outcome { code: EXIT_OK, text })
}

/// Flag, then the environment value, then the library default.
pub fn resolve_tolerance(flag: Option<f64>, env: Option<&str>) -> std::result::Result<f64, String> {
    let tol = match (flag, env) {
        (Some(t), _) => t,
        (None, Some(raw)) => raw
            .trim()
            .parse::<f64>()
            .map_err(|_| format!("{TOL_ENV} is not a number: {raw:?}"))?,
        (None, None) => DEFAULT_TOLERANCE,
    };
    if !(tol > 0.0 && tol < 1.0) {
        return Err(format!("tolerance must lie in (0, 1), got {tol}"));
    }
    Ok(tol)
}

fn json<T: Serialize>(value: &T) -> std::result::Result<String, Failure> {
    Ok(to_json(value)? + "\n")
}

fn require_dim(d: usize) -> std::result::Result<(), Failure> {
    if !(2..=MAX_LOCAL_DIM).contains(&d) {
        return Err(usage(format!("--dim must lie in 2..={MAX_LOCAL_DIM}, got {d}")));
    }
    Ok(())
}

fn cmd_construct(args: &ConstructArgs, seed: u64) -> CmdResult {
    require_dim(args.dim)?;
    let d = args.dim;
    let need = |v: Option<f64>, flag: &str| v.ok_or_else(|| usage(format!("{:?} needs --{flag}", args.kind)));
    let pure = match args.kind {
        StateKind::Psi0a => Some(psi_0a(d)?),
        StateKind::Psia => {
            let raw = args
                .coeffs
                .clone()
                .ok_or_else(|| usage("psia needs --coeffs"))?;
            Some(psi_a(&PsiACoefficients::normalized(d, raw)?)?)
        }
        StateKind::MaxEntangled => Some(max_entangled(d)?),
        StateKind::RandomAntisymmetric if args.rank <= 1 => Some(random_antisymmetric_state(&mut seeded(seed), d)?),
        _ => None,
    };
    if let Some(psi) = pure {
        return if args.matrix {
            json(&MatrixJson::from(&BipartiteOperator::projector(&psi))).and_then(ok)
        } else {
            json(&PureStateJson::from(&psi)).and_then(ok)
        };
    }
    let op = match args.kind {
        StateKind::Sigma0 => sigma_0(d, need(args.p, "p")?)?,
        StateKind::Isotropic => isotropic_state(d, need(args.f, "f")?)?,
        StateKind::RandomAntisymmetric => random_antisymmetric_density(&mut seeded(seed), d, args.rank)?,
        _ => unreachable!("pure kinds handled above"),
    };
    json(&MatrixJson::from(&op)).and_then(ok)
}

fn cmd_normal_form(args: &NormalFormArgs) -> CmdResult {
    let state = read_json::<StateJson>(&args.state)?.to_pure_state()?;
    let nf = youla_normal_form(&state, args.rank_tol)?;
    json(&NormalFormJson::from(&nf)).and_then(ok)
}

fn cmd_pppt(args: &PpptArgs, env_tol: Option<&str>) -> CmdResult {
    let tol = resolve_tolerance(args.tol, env_tol).map_err(usage)?;
    let rho = read_json::<StateJson>(&args.state)?.to_operator()?;
    let problem = PpptProblem::with_settings(rho, tol, args.max_iter)?;
    let result = solve_pppt(&problem)?;
    let text = json(&PpptResultJson::new(&problem, &result))?;
    let code = match result.status {
        PpptStatus::Optimal => EXIT_OK,
        PpptStatus::MaxIterations => EXIT_NOT_CONVERGED,
        PpptStatus::Infeasible => EXIT_VERIFICATION,
    };
    Ok(Outcome { code, text })
}

fn cmd_certify(args: &CertifyArgs, env_tol: Option<&str>) -> CmdResult {
    if let Some(path) = &args.from_pppt {
        let stored: PpptResultJson = read_json(path)?;
        let (problem, result) = stored.restore()?;
        if result.status != PpptStatus::Optimal {
            return Err(Failure {
                code: EXIT_NOT_CONVERGED,
                message: format!("result status is {:?}; only converged values certify", result.status),
            });
        }
        let report = verify_pppt_result(&result, &problem);
        if !report.passed {
            let failed: Vec<String> = report
                .checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| format!("{} = {:e} (limit {:e})", c.name, c.value, c.limit))
                .collect();
            return Err(Failure {
                code: EXIT_VERIFICATION,
                message: format!("stored result fails verification: {}", failed.join(", ")),
            });
        }
        let tol = match args.tol {
            Some(_) => resolve_tolerance(args.tol, None),
            None if env_tol.is_some() => resolve_tolerance(None, env_tol),
            None => Ok(problem.tolerance),
        }
        .map_err(usage)?;
        // the dual bound, when larger, keeps the certificate on the safe side
        let measured = if result.upper_bound.is_finite() {
            result.p_value.max(result.upper_bound.min(0.5))
        } else {
            result.p_value
        };
        let cert = infer_from_pppt(problem.local_dim(), measured, tol)?.with_digest(state_digest(problem.rho_a()));
        return json(&cert).and_then(ok);
    }
    if args.isotropic {
        let d = args.dim.ok_or_else(|| usage("--isotropic needs --dim"))?;
        let f = args.f.ok_or_else(|| usage("--isotropic needs --f"))?;
        return json(&isotropic_witness(d, f)?).and_then(ok);
    }
    let d = args.construct.ok_or_else(|| usage("choose --from-pppt, --isotropic or --construct"))?;
    let (sigma, cert) = construct_half_d_state(d)?;
    if let Some(path) = &args.state_out {
        std::fs::write(path, json(&MatrixJson::from(&sigma))?)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    }
    json(&cert).and_then(ok)
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumCheckRow {
    pub family: String,
    pub closed_form: f64,
    pub multiplicity: usize,
    pub max_deviation: f64,
    pub agrees: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DeterminantRow {
    pub lambda: f64,
    pub direct: Option<f64>,
    pub recurrence: f64,
    pub closed_form: f64,
    pub scaled_spread: f64,
    pub agrees: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumCheckReport {
    pub dim: usize,
    pub p: f64,
    pub spectrum: Vec<SpectrumCheckRow>,
    pub determinants: Vec<DeterminantRow>,
    pub min_eigenvalue: f64,
    pub agrees: bool,
}

/// Closed-form against numeric spectrum of `sigma_0(d, p)^G`, and the three
/// block-determinant evaluations at each family value plus two generic points.
pub fn spectrum_check_report(d: usize, p: f64) -> crate::error::Result<SpectrumCheckReport> {
    let sigma = sigma_0(d, p)?;
    let numeric = hermitian_eig(&sigma.partial_transpose())?.eigenvalues;
    let spectrum = closed_form_spectrum(d, p)?;

    let expected = spectrum.expanded();
    let mut rows = Vec::new();
    for fam in &spectrum.families {
        // compare each family against the positions it occupies in the sorted list
        let mut worst: f64 = 0.0;
        for (k, &v) in expected.iter().enumerate() {
            if v == fam.value {
                worst = worst.max((numeric[k] - v).abs());
            }
        }
        rows.push(SpectrumCheckRow {
            family: match fam.family {
                Family::Positive => "positive",
                Family::Threshold => "threshold",
                Family::Single => "single",
            }
            .to_string(),
            closed_form: fam.value,
            multiplicity: fam.multiplicity,
            max_deviation: worst,
            agrees: worst <= SPECTRUM_TOL,
        });
    }
    let total_dev = expected
        .iter()
        .zip(&numeric)
        .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));

    let mut probes: Vec<f64> = spectrum.families.iter().map(|f| f.value).collect();
    probes.push(0.0);
    probes.push(1.0 / (d * d) as f64);
    let mut dets = Vec::new();
    for lambda in probes {
        let s = DeterminantSymbols::new(d, p, lambda);
        let rec = determinant_recurrence(d, s.a, s.b, s.c)?;
        let closed = determinant_closed_form(d, s.a, s.b, s.c)?;
        let direct = if d <= DIRECT_MAX_DIM {
            Some(determinant_direct(d, s.a, s.b, s.c)?)
        } else {
            None
        };
        let hadamard: f64 = block_matrix(d, &s.a, &s.b, &s.c)
            .iter()
            .map(|row| row.iter().map(|x| x * x).sum::<f64>().sqrt())
            .product();
        let values: Vec<f64> = [Some(rec), Some(closed), direct].into_iter().flatten().collect();
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let spread = if hadamard > 0.0 { (hi - lo) / hadamard } else { hi - lo };
        dets.push(DeterminantRow {
            lambda,
            direct,
            recurrence: rec,
            closed_form: closed,
            scaled_spread: spread,
            agrees: spread <= DETERMINANT_TOL,
        });
    }
    let agrees = total_dev <= SPECTRUM_TOL && rows.iter().all(|r| r.agrees) && dets.iter().all(|r| r.agrees);
    Ok(SpectrumCheckReport {
        dim: d,
        p,
        spectrum: rows,
        determinants: dets,
        min_eigenvalue: numeric[0],
        agrees,
    })
}

fn cmd_spectrum_check(args: &SpectrumCheckArgs) -> CmdResult {
    require_dim(args.dim)?;
    let report = spectrum_check_report(args.dim, args.p)?;
    let mut t = String::new();
    t += &format!("d = {}, p = {}\n\n", report.dim, report.p);
    t += &format!("{:<10} {:>16} {:>6} {:>12}  ok\n", "family", "closed form", "mult", "deviation");
    for r in &report.spectrum {
        t += &format!(
            "{:<10} {:>16.10e} {:>6} {:>12.3e}  {}\n",
            r.family,
            r.closed_form,
            r.multiplicity,
            r.max_deviation,
            if r.agrees { "yes" } else { "NO" }
        );
    }
    t += &format!("\n{:>14} {:>16} {:>16} {:>16} {:>10}  ok\n", "lambda", "direct", "recurrence", "closed form", "spread");
    for r in &report.determinants {
        let direct = r.direct.map_or("-".to_string(), |x| format!("{x:.8e}"));
        t += &format!(
            "{:>14.6e} {:>16} {:>16.8e} {:>16.8e} {:>10.2e}  {}\n",
            r.lambda,
            direct,
            r.recurrence,
            r.closed_form,
            r.scaled_spread,
            if r.agrees { "yes" } else { "NO" }
        );
    }
    let psd = report.min_eigenvalue >= -crate::tensor_core::PSD_TOL;
    t += &format!(
        "\nsmallest eigenvalue of the partial transpose: {:.6e} ({})\n",
        report.min_eigenvalue,
        if psd { "PPT" } else { "not PPT" }
    );
    t += if report.agrees { "closed form and numerics agree\n" } else { "DISAGREEMENT\n" };
    Ok(Outcome {
        code: if report.agrees { EXIT_OK } else { EXIT_VERIFICATION },
        text: t,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ReproduceRow {
    pub dim: usize,
    pub analytic_threshold: f64,
    pub sdp_value: f64,
    pub sdp_upper_bound: Option<f64>,
    pub gap: f64,
    pub status: PpptStatus,
    pub iterations: usize,
    pub certified_bound: Option<usize>,
}

/// One row per `d` in 2, 4, 6, 8.
pub fn reproduce_rows(tol: f64, max_iter: usize) -> crate::error::Result<Vec<ReproduceRow>> {
    REPRODUCE_DIMS
        .iter()
        .map(|&d| {
            let analytic = ppt_threshold_analytic(d)?;
            let rho = BipartiteOperator::projector(&psi_0a(d)?);
            let problem = PpptProblem::with_settings(rho, tol, max_iter)?;
            let r = solve_pppt(&problem)?;
            let certified_bound = if d >= 4 {
                Some(construct_half_d_state(d)?.1.schmidt_lower_bound)
            } else {
                None
            };
            Ok(ReproduceRow {
                dim: d,
                analytic_threshold: analytic,
                sdp_value: r.p_value,
                sdp_upper_bound: r.upper_bound.is_finite().then_some(r.upper_bound),
                gap: r.p_value - analytic,
                status: r.status,
                iterations: r.iterations,
                certified_bound,
            })
        })
        .collect()
}

fn cmd_reproduce(args: &ReproduceArgs, env_tol: Option<&str>) -> CmdResult {
    let tol = resolve_tolerance(args.tol, env_tol).map_err(usage)?;
    let rows = reproduce_rows(tol, args.max_iter)?;
    let code = if rows.iter().all(|r| r.status == PpptStatus::Optimal) {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    };
    let text = if args.json {
        json(&rows)?
    } else {
        let mut t = format!(
            "{:>3} {:>10} {:>14} {:>11} {:>14} {:>6}\n",
            "d", "analytic", "p_ppt (sdp)", "gap", "status", "bound"
        );
        for r in &rows {
            let status = if r.status == PpptStatus::Optimal { "optimal" } else { "NOT CONVERGED" };
            t += &format!(
                "{:>3} {:>10.6} {:>14.10} {:>11.2e} {:>14} {:>6}\n",
                r.dim,
                r.analytic_threshold,
                r.sdp_value,
                r.gap,
                status,
                r.certified_bound.map_or("n/a".to_string(), |b| b.to_string())
            );
        }
        t
    };
    Ok(Outcome { code, text })
}

/// Parses `args` (program name first) and runs the subcommand. `env_tol` is
/// the raw value of the tolerance environment variable, if set.
pub fn run<I, T>(args: I, env_tol: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let result = match &cli.command {
        Command::Construct(a) => cmd_construct(a, cli.seed),
        Command::NormalForm(a) => cmd_normal_form(a),
        Command::PPpt(a) => cmd_pppt(a, env_tol),
        Command::Certify(a) => cmd_certify(a, env_tol),
        Command::VerifyAppendix(a) => cmd_spectrum_check(a),
        Command::Reproduce(a) => cmd_reproduce(a, env_tol),
    };
    match result {
        Ok(outcome) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &outcome.text),
                None => out.write_all(outcome.text.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: cannot write output: {e}");
                return EXIT_USAGE;
            }
            outcome.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["schmidt-forge"];
        full.extend_from_slice(args);
        let code = run(full, None, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn tolerance_precedence() {
        assert_eq!(resolve_tolerance(None, None).unwrap(), 1e-7);
        assert_eq!(resolve_tolerance(None, Some("1e-6")).unwrap(), 1e-6);
        assert_eq!(resolve_tolerance(Some(1e-5), Some("1e-6")).unwrap(), 1e-5);
        assert!(resolve_tolerance(None, Some("abc")).is_err());
        assert!(resolve_tolerance(Some(-1.0), None).is_err());
    }

    #[test]
    fn construct_and_usage_errors() {
        let (code, out, _) = call(&["construct", "psi0a", "--dim", "4"]);
        assert_eq!(code, 0);
        assert!(out.contains("amplitudes"));
        let (code, _, err) = call(&["construct", "sigma0", "--dim", "6"]);
        assert_eq!(code, 1);
        assert!(err.contains("--p"));
        let (code, _, _) = call(&["construct", "psi0a", "--dim", "5"]);
        assert_eq!(code, 1);
        let (code, _, _) = call(&["bogus"]);
        assert_eq!(code, 1);
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("p-ppt"));
    }

    #[test]
    fn spectrum_check_agreement() {
        for (d, p) in [(4, 0.1666666667), (2, 0.5), (6, 0.2), (8, 0.05)] {
            let r = spectrum_check_report(d, p).unwrap();
            assert!(r.agrees, "d={d} p={p}: {r:?}");
        }
        let (code, out, _) = call(&["verify-appendix", "--dim", "6", "--p", "0.2"]);
        assert_eq!(code, 0);
        assert!(out.contains("not PPT"));
    }

    #[test]
    fn certify_modes() {
        let (code, out, _) = call(&["certify", "--isotropic", "--dim", "6", "--f", "0.5"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"schmidt_lower_bound\": 4"));
        let (code, out, _) = call(&["certify", "--construct", "6"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"schmidt_lower_bound\": 3"));
        let (code, _, _) = call(&["certify"]);
        assert_eq!(code, 1);
        let (code, _, _) = call(&["certify", "--construct", "5"]);
        assert_eq!(code, 1);
    }
}
