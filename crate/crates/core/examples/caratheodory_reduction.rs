//! 50 atoms reduced to at most `m` with the same moments.

use momentcone::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let basis = Basis::univariate_monomials(&[0, 1, 2, 3, 4, 5, 6])?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mu = AtomicMeasure::new(
        (0..50).map(|_| (rng.gen_range(0.1..1.0), vec![rng.gen_range(-1.0..1.0)])).collect(),
    )?;
    let red = reduce(&basis, &mu)?;
    let s = moments(&basis, &mu)?.values;
    let t = moments(&basis, &red)?.values;
    let err = s.iter().zip(&t).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("{} atoms -> {} atoms, max moment error {err:.2e}", mu.len(), red.len());
    for (w, x) in red.atoms() {
        println!("  {w:.6} at {:.6}", x[0]);
    }
    Ok(())
}
