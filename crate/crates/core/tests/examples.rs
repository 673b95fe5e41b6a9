#[allow(dead_code)]
mod bound_entangled_construction {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/bound_entangled_construction.rs"));
}

#[test]
fn bound_entangled_construction_runs() {
    bound_entangled_construction::run_example().expect("bound_entangled_construction example should run");
}

#[allow(dead_code)]
mod closed_form_spectrum {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/closed_form_spectrum.rs"));
}

#[test]
fn closed_form_spectrum_runs() {
    closed_form_spectrum::run_example().expect("closed_form_spectrum example should run");
}

#[allow(dead_code)]
mod ppt_optimization {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/ppt_optimization.rs"));
}

#[test]
fn ppt_optimization_runs() {
    ppt_optimization::run_example().expect("ppt_optimization example should run");
}

#[allow(dead_code)]
mod normal_form {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/normal_form.rs"));
}

#[test]
fn normal_form_runs() {
    normal_form::run_example().expect("normal_form example should run");
}

#[allow(dead_code)]
mod schmidt_certificates {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/schmidt_certificates.rs"));
}

#[test]
fn schmidt_certificates_runs() {
    schmidt_certificates::run_example().expect("schmidt_certificates example should run");
}

#[allow(dead_code)]
mod monotonicity {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/monotonicity.rs"));
}

#[test]
fn monotonicity_runs() {
    monotonicity::run_example().expect("monotonicity example should run");
}

#[allow(dead_code)]
mod state_exchange {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/state_exchange.rs"));
}

#[test]
fn state_exchange_runs() {
    state_exchange::run_example().expect("state_exchange example should run");
}
