//! Real roots with multiplicities, and a nonnegativity decision.

use momentcone::prelude::*;

fn main() -> Result<()> {
    let names = vec!["x".to_string()];
    let p = parse_polynomial("x^8 - 10*x^6 + 33*x^4 - 40*x^2 + 16", &names)?;
    let roots = univariate_real_roots(&p, 1e-9)?;
    for (x, m) in roots.locations().iter().zip(roots.multiplicities()) {
        println!("root {x:>8.5} multiplicity {m}");
    }
    println!("nonnegative on R: {}", univariate_is_nonneg(&p)?);
    let q = parse_polynomial("x^4 - x", &names)?;
    println!("x^4 - x nonnegative on R: {}", univariate_is_nonneg(&q)?);
    Ok(())
}
