//! A separating family of squares for the ten zeros of the Robinson form.

use momentcone::fixtures::{robinson_basis, robinson_points};
use momentcone::prelude::*;

fn main() -> Result<()> {
    let basis = robinson_basis()?;
    let pts = robinson_points();
    let family = separating_family(&basis, &pts)?;
    let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
    for (j, p) in family.iter().enumerate() {
        let vals: Vec<String> = pts.iter().map(|x| format!("{:.0}", p.eval(x).unwrap().abs())).collect();
        println!("p_{j}: [{}]  {} terms", vals.join(" "), p.trimmed(1e-12).num_terms());
    }
    println!("p_4 = {}", family[4].trimmed(1e-12).rounded(6).to_string_with(&names));
    Ok(())
}
