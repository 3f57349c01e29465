//! The chain `V_0 ⊇ V_1 ⊇ ...` on a finite domain, ending at the atom set `W`.

use momentcone::fixtures::load_fixture;
use momentcone::prelude::*;

fn main() -> Result<()> {
    let p = load_fixture("three_points")?;
    let mu = p.measure.clone().expect("fixture has a measure");
    let cv = core_variety(&p.basis, &mu, &p.domain, &SearchConfig::default())?;
    for (k, v) in cv.chain.iter().enumerate() {
        println!("V_{k}: {} points", v.len().unwrap_or(usize::MAX));
    }
    println!("stabilized at k = {}", cv.stabilized_at);
    println!("W = {:?}", cv.atoms.points().unwrap());
    Ok(())
}
