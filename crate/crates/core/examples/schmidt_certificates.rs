// Schmidt-number certificates from a measured weight and from the
// entanglement fraction of isotropic states.

use schmidt_forge::certify::{infer_from_pppt, isotropic_witness, l_threshold};
use schmidt_forge::exchange::to_json;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for d in 2..=10 {
        print!("L({d}) = {:.4}  ", l_threshold(d)?);
    }
    println!();

    for p in [0.5, 0.4, 0.1] {
        let c = infer_from_pppt(4, p, 1e-7)?;
        println!(
            "p = {p}: antisymmetric Schmidt number >= {}, PPT extensions >= {}",
            c.schmidt_lower_bound,
            c.ppt_extension_bound.unwrap_or(1)
        );
    }

    for f in [0.0, 0.3, 0.5, 0.9] {
        let c = isotropic_witness(6, f)?;
        println!("isotropic d = 6, F = {f}: Schmidt number >= {}", c.schmidt_lower_bound);
    }
    println!("{}", to_json(&infer_from_pppt(6, 0.1, 1e-7)?)?);
    Ok(())
}

fn main() {
    run_example().expect("certificate example failed");
}
