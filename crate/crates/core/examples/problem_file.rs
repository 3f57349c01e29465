//! Reading a problem file, or one given on the command line.

use momentcone::fixtures::fixture;
use momentcone::prelude::*;
use momentcone::problem::load_problem;

fn main() -> Result<()> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::Invalid(e.to_string()))?,
        None => fixture("moments_support").unwrap().to_string(),
    };
    let (file, problem) = load_problem(&text)?;
    println!("variables {:?}, basis {:?}", file.variables, file.basis);
    println!("moments {:?}", problem.moments.values);
    let mu = problem.measure()?;
    println!("a representing measure:");
    for (w, x) in mu.atoms() {
        println!("  {w:.6} at {x:?}");
    }
    Ok(())
}
