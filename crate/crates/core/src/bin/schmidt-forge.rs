use std::io;

use schmidt_forge::cli::{run, TOL_ENV};

fn main() {
    let env_tol = std::env::var(TOL_ENV).ok();
    let code = run(std::env::args_os(), env_tol.as_deref(), &mut io::stdout(), &mut io::stderr());
    std::process::exit(code);
}
