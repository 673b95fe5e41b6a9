// Largest antisymmetric weight compatible with a PPT state, for a few
// antisymmetric inputs, with an independent audit of each solution.

use schmidt_forge::ppt_sdp::{solve_pppt, verify_pppt_result, PpptProblem};
use schmidt_forge::sampling::{random_antisymmetric_density, seeded};
use schmidt_forge::states::psi_0a;
use schmidt_forge::tensor_core::{antisymmetric_dim, antisymmetric_projector, BipartiteOperator};

fn report(label: &str, rho: BipartiteOperator) -> Result<(), Box<dyn std::error::Error>> {
    let problem = PpptProblem::new(rho)?;
    let r = solve_pppt(&problem)?;
    let audit = verify_pppt_result(&r, &problem);
    println!(
        "{label:<28} p = {:.9} (dual {:.9}) {:?} in {} iterations, audit {}",
        r.p_value,
        r.upper_bound,
        r.status,
        r.iterations,
        if audit.passed { "passed" } else { "FAILED" }
    );
    Ok(())
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    report("singlet", BipartiteOperator::projector(&psi_0a(2)?))?;
    for d in [4, 6] {
        report(&format!("psi_0A, d = {d}"), BipartiteOperator::projector(&psi_0a(d)?))?;
    }
    let d = 4;
    let mixed = antisymmetric_projector(d)?.scale(1.0 / antisymmetric_dim(d) as f64);
    report("P_A / d_A, d = 4", mixed)?;
    let mut rng = seeded(11);
    report("random rank-2 mixture, d = 4", random_antisymmetric_density(&mut rng, 4, 2)?)?;
    Ok(())
}

fn main() {
    run_example().expect("optimization example failed");
}
