// The JSON exchange formats, driven through the command-line entry point.

use schmidt_forge::cli::run;

fn call(args: &[&str]) -> Result<String, Box<dyn std::error::Error>> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("schmidt-forge").chain(args.iter().copied()), None, &mut out, &mut err);
    if code != 0 {
        return Err(format!("{args:?} exited {code}: {}", String::from_utf8_lossy(&err)).into());
    }
    Ok(String::from_utf8(out)?)
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("schmidt-forge-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let state = dir.join("psi0a.json");
    let result = dir.join("result.json");
    let path = |p: &std::path::Path| p.to_string_lossy().into_owned();

    call(&["construct", "psi0a", "--dim", "4", "--output", &path(&state)])?;
    let nf = call(&["normal-form", "--state", &path(&state)])?;
    println!("normal form: {} bytes of JSON", nf.len());
    call(&["p-ppt", "--state", &path(&state), "--output", &path(&result)])?;
    let cert = call(&["certify", "--from-pppt", &path(&result)])?;
    println!("{cert}");
    print!("{}", call(&["verify-appendix", "--dim", "4", "--p", "0.1666666667"])?);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

fn main() {
    run_example().expect("exchange example failed");
}
