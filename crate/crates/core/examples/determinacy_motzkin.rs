//! Determinacy on the zeros of the Motzkin polynomial.

use momentcone::fixtures::load_fixture;
use momentcone::prelude::*;

fn main() -> Result<()> {
    let p = load_fixture("motzkin")?;
    let mu = p.measure.clone().expect("fixture has a measure");
    let r = is_determinate(&p.basis, &mu, &p.domain, &SearchConfig::default())?;
    println!("determinate: {}", r.determinate);
    println!("W = {:?}, rank {:?}", r.atoms.points().unwrap(), r.rank);

    let inner = load_fixture("inner")?;
    let r = is_determinate(&inner.basis, inner.measure.as_ref().unwrap(), &inner.domain, &SearchConfig::default())?;
    let (a, b) = r.witnesses.expect("two measures");
    println!("inner point: {} and {} atom measures with equal moments", a.len(), b.len());
    Ok(())
}
