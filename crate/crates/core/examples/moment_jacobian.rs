//! Moments of an atomic measure and the Jacobian of the moment map.

use momentcone::prelude::*;

fn main() -> Result<()> {
    let names = vec!["x".to_string(), "y".to_string()];
    let basis = Basis::parse(&["1", "x", "y", "x^2", "x*y", "y^2"], &names)?;
    let mu = AtomicMeasure::new(vec![(1.0, vec![-1.0, 0.0]), (2.0, vec![0.5, 1.0])])?;
    println!("moments {:?}", moments(&basis, &mu)?.values);
    let j = jacobian(&basis, &mu)?;
    println!("jacobian {}x{}, rank {}", j.rows(), j.cols(), rank(&j, RANK_RTOL));
    for i in 0..j.rows() {
        let row: Vec<String> = (0..j.cols()).map(|k| format!("{:6.2}", j.get(i, k))).collect();
        println!("  [{}]", row.join(" "));
    }
    Ok(())
}
