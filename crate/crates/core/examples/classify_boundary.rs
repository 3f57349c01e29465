//! Inner versus boundary points of the moment cone.

use momentcone::prelude::*;

fn report(name: &str, basis: &Basis, mu: &AtomicMeasure) -> Result<()> {
    let r = classify(basis, mu, &Domain::RealLine, &SearchConfig::default())?;
    println!("{name}: {:?}, d = {}", r.classification, r.defect);
    for p in &r.annihilators {
        println!("  annihilator {}", p.trimmed(1e-12).rounded(6).to_string_with(&["x".to_string()]));
    }
    if let Some(v) = r.v_plus.points() {
        let v: Vec<String> = v.iter().map(|x| format!("{:.6}", x[0])).collect();
        println!("  V_+ = {{{}}}", v.join(", "));
    }
    Ok(())
}

fn main() -> Result<()> {
    let sparse = Basis::univariate_monomials(&[0, 2, 4, 5, 6, 7, 8])?;
    let three = AtomicMeasure::uniform(vec![vec![-1.0], vec![1.0], vec![2.0]])?;
    report("three atoms, sparse basis", &sparse, &three)?;
    let dense = Basis::univariate_monomials(&[0, 1, 2, 3, 4, 5, 6])?;
    let five = AtomicMeasure::uniform((0..5).map(|k| vec![k as f64 * 0.4 - 0.8]).collect())?;
    report("five atoms, dense basis", &dense, &five)
}
