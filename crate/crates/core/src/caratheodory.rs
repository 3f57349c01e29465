//! Atom reduction: any finitely atomic representing measure can be replaced
//! by one on at most `m = dim E` of its own atoms.

use crate::error::Result;
use crate::moment_map::{moment_vector, moments, AtomicMeasure, Basis, MIN_WEIGHT};
use crate::numeric::{basic_solution, LpProblem, Matrix};

/// Points closer than this (relative) are merged before pivoting.
const MERGE_TOL: f64 = 1e-12;

pub fn reduce(basis: &Basis, mu: &AtomicMeasure) -> Result<AtomicMeasure> {
    if mu.is_empty() {
        return Ok(AtomicMeasure::empty());
    }
    let merged = mu.merged(MERGE_TOL);
    let cols = merged
        .points()
        .iter()
        .map(|x| moment_vector(basis, x))
        .collect::<Result<Vec<_>>>()?;
    let a = Matrix::from_columns(&cols)?;
    let s = moments(basis, &merged)?.values;
    let w = basic_solution(&LpProblem::new(a, s)?, &merged.weights())?;
    AtomicMeasure::new(
        merged
            .atoms()
            .iter()
            .zip(w)
            .filter(|(_, w)| *w > MIN_WEIGHT)
            .map(|((_, x), w)| (w, x.clone()))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn residual(basis: &Basis, a: &AtomicMeasure, b: &AtomicMeasure) -> f64 {
        let sa = moments(basis, a).unwrap().values;
        let sb = moments(basis, b).unwrap().values;
        sa.iter().zip(&sb).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn independent_atoms_kept() {
        let basis = Basis::univariate_monomials(&[0, 1, 2, 3]).unwrap();
        let mu = AtomicMeasure::new(vec![(0.5, vec![-1.0]), (2.0, vec![0.25]), (1.0, vec![3.0])]).unwrap();
        let out = reduce(&basis, &mu).unwrap();
        assert_eq!(out.points(), mu.points());
        for (a, b) in out.weights().iter().zip(mu.weights()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn duplicates_merge() {
        let basis = Basis::univariate_monomials(&[0, 1]).unwrap();
        let mu = AtomicMeasure::uniform(vec![vec![0.3], vec![0.3]]).unwrap();
        let out = reduce(&basis, &mu).unwrap();
        assert_eq!(out.atoms(), &[(2.0, vec![0.3])]);
    }

    #[test]
    fn fifty_atoms_to_seven() {
        let basis = Basis::univariate_monomials(&[0, 1, 2, 3, 4, 5, 6]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mu = AtomicMeasure::new(
            (0..50)
                .map(|_| (rng.gen_range(0.01..1.0), vec![rng.gen_range(-1.0..1.0)]))
                .collect(),
        )
        .unwrap();
        let out = reduce(&basis, &mu).unwrap();
        assert!(out.len() <= 7);
        assert!(out.weights().iter().all(|&w| w >= MIN_WEIGHT));
        let s = moments(&basis, &mu).unwrap().values;
        let norm = s.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!(residual(&basis, &mu, &out) <= 1e-8 * (1.0 + norm));
        for x in out.points() {
            assert!(mu.points().contains(&x));
        }
    }

    #[test]
    fn empty_stays_empty() {
        let basis = Basis::univariate_monomials(&[0]).unwrap();
        assert!(reduce(&basis, &AtomicMeasure::empty()).unwrap().is_empty());
    }
}
