// Normal form of a random antisymmetric state and its reconstruction,
// first by a local unitary and then by local filtering of the
// equal-coefficient state.

use schmidt_forge::sampling::{random_antisymmetric_state, seeded};
use schmidt_forge::schmidt::{schmidt_decompose, youla_normal_form, RANK_TOL};
use schmidt_forge::states::{psi_0a, psi_a, tau_operator};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = seeded(2024);
    let d = 6;
    let phi = random_antisymmetric_state(&mut rng, d)?;
    let nf = youla_normal_form(&phi, RANK_TOL)?;
    println!("coefficients {:?}", nf.coefficients);
    println!("normal-form residual {:.2e}", nf.residual);

    let svd = schmidt_decompose(&phi, RANK_TOL)?;
    println!("Schmidt coefficients {:?}", svd.coefficients);
    println!("Schmidt rank {}", svd.rank);

    // undo the basis change: (conj U x conj U) psi_A(c) = phi
    let coeffs = nf.as_psi_a_coefficients()?;
    let rebuilt = psi_a(&coeffs)?.local_transform(&nf.unitary.conjugate())?;
    println!("unitary reconstruction error {:.2e}", (rebuilt.amplitudes() - phi.amplitudes()).norm());

    let filtered = tau_operator(&coeffs)?.apply(&psi_0a(d)?)?;
    println!("filtering error {:.2e}", (filtered - psi_a(&coeffs)?.amplitudes()).norm());
    Ok(())
}

fn main() {
    run_example().expect("normal form example failed");
}
