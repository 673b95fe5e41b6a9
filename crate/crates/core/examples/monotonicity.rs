// Mixing two antisymmetric states, or padding one into a larger space,
// never lowers the optimal PPT weight.

use schmidt_forge::ppt_sdp::{embedding_monotonicity, mixing_monotonicity};
use schmidt_forge::sampling::{random_antisymmetric_density, seeded};
use schmidt_forge::states::psi_0a;
use schmidt_forge::tensor_core::BipartiteOperator;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let tol = 1e-4;
    let mut rng = seeded(5);
    let a = random_antisymmetric_density(&mut rng, 4, 1)?;
    let b = random_antisymmetric_density(&mut rng, 4, 2)?;
    for lambda in [0.25, 0.5, 0.75] {
        let r = mixing_monotonicity(&a, &b, lambda, tol)?;
        println!(
            "lambda = {lambda}: p1 = {:.6}, p2 = {:.6}, mixture = {:.6}, holds = {}",
            r.p_first, r.p_second, r.p_mixture, r.holds
        );
    }

    let singlet = BipartiteOperator::projector(&psi_0a(2)?);
    let psi = BipartiteOperator::projector(&psi_0a(4)?);
    for (label, rho, target) in [("singlet", &singlet, 3), ("psi_0A", &psi, 5), ("psi_0A", &psi, 6)] {
        let r = embedding_monotonicity(rho, target, tol)?;
        println!(
            "{label} {} -> {target}: {:.6} -> {:.6}, holds = {}",
            rho.local_dim(),
            r.p_original,
            r.p_embedded,
            r.holds
        );
    }
    Ok(())
}

fn main() {
    run_example().expect("monotonicity example failed");
}
