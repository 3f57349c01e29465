//! The core-variety chain `V_0 = X ⊇ V_1 ⊇ …` and the atom set `W(L) = V(L)`.
//!
//! `V_1` is the zero set of the exposed-face generator. Past that every set
//! is finite and `x ∈ V_{k-1}` survives into `V_k` exactly when no `p ∈ E`
//! has `L(p) = 0`, `p ≥ 0` on `V_{k-1}` and `p(x) ≥ 1`, which is an LP.

use rayon::prelude::*;

use crate::cone_geometry::{classify, ConeReport, SearchConfig};
use crate::domain::{same_point, Domain, PointSet, MATCH_TOL};
use crate::error::{Error, Result};
use crate::moment_map::{moment_vector, moments, AtomicMeasure, Basis, MomentSequence, MIN_WEIGHT};
use crate::numeric::{lp_feasible, lp_solve, max_abs, norm, LpOutcome, LpProblem, Matrix};
use crate::polynomial::Polynomial;

#[derive(Clone, Debug, PartialEq)]
pub struct CoreVarietyResult {
    /// `V_0, V_1, …, V_K, V_{K+1}` with `V_K = V_{K+1}`.
    pub chain: Vec<PointSet>,
    pub stabilized_at: usize,
    /// `W(L) = V(L)`.
    pub atoms: PointSet,
    /// Generator of `N_k` for `k = 1, 2, …` (`None` when `N_k = {0}`).
    pub generators: Vec<Option<Polynomial>>,
    /// A representing measure whose support is exactly `W`, when `W` is finite.
    pub measure: Option<AtomicMeasure>,
    pub report: ConeReport,
}

fn unit(v: Vec<f64>) -> Vec<f64> {
    let n = norm(&v);
    if n == 0.0 {
        v
    } else {
        v.into_iter().map(|x| x / n).collect()
    }
}

/// Coefficient vector of some `p` killing `x`, or `None` when `x` survives.
fn survival(s: &[f64], pool: &[Vec<f64>], x: &[f64]) -> Result<Option<Vec<f64>>> {
    let m = s.len();
    let nz = pool.len();
    let nv = 2 * m + nz + 1;
    let mut rows = Vec::with_capacity(nz + 2);
    let mut b = Vec::with_capacity(nz + 2);
    let mut push = |w: &[f64], extra: Option<usize>, rhs: f64| {
        let mut r = vec![0.0; nv];
        for j in 0..m {
            r[j] = w[j];
            r[m + j] = -w[j];
        }
        if let Some(k) = extra {
            r[k] = -1.0;
        }
        rows.push(r);
        b.push(rhs);
    };
    push(&unit(s.to_vec()), None, 0.0);
    for (k, z) in pool.iter().enumerate() {
        push(z, Some(2 * m + k), 0.0);
    }
    push(&unit(x.to_vec()), Some(nv - 1), 1.0);
    let (ok, w) = lp_feasible(&LpProblem::new(Matrix::from_rows(&rows)?, b)?)?;
    Ok(if ok {
        let w = w.expect("witness");
        Some((0..m).map(|j| w[j] - w[m + j]).collect())
    } else {
        None
    })
}

pub fn core_variety(
    basis: &Basis,
    mu: &AtomicMeasure,
    dom: &Domain,
    cfg: &SearchConfig,
) -> Result<CoreVarietyResult> {
    let s = moments(basis, mu)?;
    if mu.is_empty() || s.is_zero() {
        return Err(Error::ZeroFunctional);
    }
    let report = classify(basis, mu, dom, cfg)?;
    let v0 = match dom.points() {
        Some(p) => PointSet::from_points(p, dom.match_tol()),
        None => PointSet::All,
    };
    let v1 = match (&report.v_plus, &v0) {
        (PointSet::All, PointSet::All) => {
            if report.defect > 0 {
                return Err(Error::InfiniteVariety);
            }
            return Ok(CoreVarietyResult {
                chain: vec![PointSet::All, PointSet::All],
                stabilized_at: 0,
                atoms: PointSet::All,
                generators: vec![None],
                measure: None,
                report,
            });
        }
        (PointSet::All, v0) => v0.clone(),
        (v, _) => v.clone(),
    };
    let mut chain = vec![v0, v1];
    let mut generators = vec![report.generator.clone()];
    let stabilized_at;
    loop {
        let current: Vec<Vec<f64>> = chain.last().unwrap().points().unwrap().to_vec();
        let vectors: Vec<Vec<f64>> = current
            .iter()
            .map(|z| moment_vector(basis, z).map(unit))
            .collect::<Result<_>>()?;
        let verdicts: Vec<Option<Vec<f64>>> = vectors
            .par_iter()
            .map(|x| survival(&s.values, &vectors, x))
            .collect::<Result<_>>()?;
        let survivors: Vec<Vec<f64>> = current
            .iter()
            .zip(&verdicts)
            .filter(|(_, v)| v.is_none())
            .map(|(z, _)| z.clone())
            .collect();
        let mut gen = vec![0.0; basis.len()];
        for v in verdicts.iter().flatten() {
            let m = max_abs(v);
            gen.iter_mut().zip(v).for_each(|(g, x)| *g += x / m);
        }
        let generator = if verdicts.iter().any(|v| v.is_some()) {
            Some(basis.combine(&gen)?)
        } else {
            None
        };
        let stable = survivors.len() == current.len();
        chain.push(PointSet::Points(survivors));
        generators.push(generator);
        if stable {
            stabilized_at = chain.len() - 2;
            break;
        }
        if chain.len() > basis.len() + 3 {
            return Err(Error::Invalid("core variety iteration did not stabilize".into()));
        }
    }
    let atoms = chain.last().unwrap().clone();
    let measure = representing_measure(basis, &s, atoms.points().unwrap()).ok();
    let mut report = report;
    report.set_atoms(&atoms);
    Ok(CoreVarietyResult {
        chain,
        stabilized_at,
        atoms,
        generators,
        measure,
        report,
    })
}

fn support_lp(basis: &Basis, s: &MomentSequence, support: &[Vec<f64>]) -> Result<(Matrix, Vec<f64>)> {
    let cols = support
        .iter()
        .map(|z| moment_vector(basis, z))
        .collect::<Result<Vec<_>>>()?;
    Ok((Matrix::from_columns(&cols)?, s.values.clone()))
}

fn max_weight_at(a: &Matrix, b: &[f64], k: usize) -> Result<Option<(Vec<f64>, bool)>> {
    let mut c = vec![0.0; a.cols()];
    c[k] = 1.0;
    let p = LpProblem::new(a.clone(), b.to_vec())?.maximize(c)?;
    Ok(match lp_solve(&p)? {
        LpOutcome::Infeasible => None,
        LpOutcome::Optimal { x, .. } => Some((x, false)),
        LpOutcome::Unbounded { x } => Some((x, true)),
    })
}

/// Whether some representing measure supported in `support` charges `x`.
pub fn atom_test(basis: &Basis, s: &MomentSequence, x: &[f64], support: &[Vec<f64>]) -> Result<bool> {
    let mut pts = support.to_vec();
    let k = match pts.iter().position(|z| same_point(z, x, MATCH_TOL)) {
        Some(k) => k,
        None => {
            pts.push(x.to_vec());
            pts.len() - 1
        }
    };
    let (a, b) = support_lp(basis, s, &pts)?;
    match max_weight_at(&a, &b, k)? {
        None => Err(Error::SupportInsufficient),
        Some((_, true)) => Ok(true),
        Some((w, false)) => Ok(w[k] > 1e-8 * max_abs(&w).max(f64::MIN_POSITIVE)),
    }
}

/// Averages, over the support points, LP solutions maximizing each weight;
/// the result charges every point that can be charged at all.
pub fn representing_measure(
    basis: &Basis,
    s: &MomentSequence,
    support: &[Vec<f64>],
) -> Result<AtomicMeasure> {
    if support.is_empty() {
        return Err(Error::SupportInsufficient);
    }
    let (a, b) = support_lp(basis, s, support)?;
    let mut avg = vec![0.0; support.len()];
    for k in 0..support.len() {
        let (w, _) = max_weight_at(&a, &b, k)?.ok_or(Error::SupportInsufficient)?;
        avg.iter_mut().zip(&w).for_each(|(x, y)| *x += y / support.len() as f64);
    }
    AtomicMeasure::new(
        support
            .iter()
            .zip(avg)
            .filter(|(_, w)| *w > MIN_WEIGHT)
            .map(|(x, w)| (w, x.clone()))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_one() -> (Basis, AtomicMeasure) {
        (
            Basis::univariate_monomials(&[0, 2, 4, 5, 6, 7, 8]).unwrap(),
            AtomicMeasure::uniform(vec![vec![-1.0], vec![1.0], vec![2.0]]).unwrap(),
        )
    }

    #[test]
    fn example_one_atoms() {
        let (b, mu) = example_one();
        let r = core_variety(&b, &mu, &Domain::RealLine, &SearchConfig::default()).unwrap();
        let want = PointSet::from_points(vec![vec![-1.0], vec![1.0], vec![2.0]], MATCH_TOL);
        assert!(r.atoms.same_as(&want, MATCH_TOL), "{:?}", r.chain);
        assert_eq!(r.chain[1].len(), Some(4));
        assert_eq!(r.report.w_equals_vplus, Some(false));
        let s = moments(&b, &mu).unwrap();
        let support = r.chain[1].points().unwrap();
        assert!(!atom_test(&b, &s, &[-2.0], support).unwrap());
        assert!(atom_test(&b, &s, &[2.0], support).unwrap());
    }

    #[test]
    fn single_atom_keeps_only_its_point() {
        let x = Polynomial::var(1, 0);
        let one = Polynomial::constant(1, 1.0);
        let q = &(&x * &x) * &(&x - &one).pow(2);
        let b = Basis::new(vec![one, x, q]).unwrap();
        let mu = AtomicMeasure::new(vec![(1.0, vec![0.0])]).unwrap();
        let r = core_variety(&b, &mu, &Domain::RealLine, &SearchConfig::default()).unwrap();
        assert_eq!(r.chain[1].len(), Some(2));
        assert_eq!(r.atoms, PointSet::Points(vec![vec![0.0]]));
        assert_eq!(r.report.w_equals_vplus, Some(false));
    }

    #[test]
    fn inner_chain() {
        let b = Basis::univariate_monomials(&[0, 1, 2]).unwrap();
        let mu = AtomicMeasure::uniform(vec![vec![-1.0], vec![0.0], vec![1.0], vec![2.0]]).unwrap();
        let r = core_variety(&b, &mu, &Domain::RealLine, &SearchConfig::default()).unwrap();
        assert_eq!(r.chain, vec![PointSet::All, PointSet::All]);
        assert_eq!(r.stabilized_at, 0);
        assert!(r.atoms.is_all());
    }

    #[test]
    fn insufficient_support() {
        let (b, mu) = example_one();
        let s = moments(&b, &mu).unwrap();
        assert_eq!(
            atom_test(&b, &s, &[5.0], &[vec![5.0]]),
            Err(Error::SupportInsufficient)
        );
    }

    #[test]
    fn zero_functional_rejected() {
        let (b, _) = example_one();
        assert_eq!(
            core_variety(&b, &AtomicMeasure::empty(), &Domain::RealLine, &SearchConfig::default()),
            Err(Error::ZeroFunctional)
        );
    }
}
