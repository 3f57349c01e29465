//! Moment vectors `s_F(x)`, moments of atomic measures, the atomic moment map
//! `S_k(C, X) = Σ c_j s_F(x_j)` and its Jacobian.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::same_point;
use crate::error::{Error, Result};
use crate::numeric::{least_squares, max_abs, rank, Matrix, RANK_RTOL};
use crate::polynomial::{parse_polynomial, Exponent, Polynomial};

/// Relative residual allowed when expressing a polynomial in a basis.
pub const SPAN_TOL: f64 = 1e-8;
/// Smallest admissible atom weight.
pub const MIN_WEIGHT: f64 = 1e-12;

/// An ordered basis `F = {f_1, …, f_m}` of a space `E` of polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct Basis {
    num_vars: usize,
    functions: Vec<Polynomial>,
    gradients: Vec<Vec<Polynomial>>,
}

impl Basis {
    /// Checks independence on `m(n+2)` seeded random points in `[-1.5, 1.5]ⁿ`.
    pub fn new(functions: Vec<Polynomial>) -> Result<Basis> {
        let Some(first) = functions.first() else {
            return Err(Error::Invalid("basis must contain at least one function".into()));
        };
        let n = first.num_vars();
        if let Some(f) = functions.iter().find(|f| f.num_vars() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: f.num_vars(),
            });
        }
        let m = functions.len();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f_ba5e);
        let rows: Vec<Vec<f64>> = (0..m * (n + 2))
            .map(|_| {
                let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.5..1.5)).collect();
                functions.iter().map(|f| f.eval_unchecked(&x)).collect()
            })
            .collect();
        let mut eval = Matrix::from_rows(&rows)?;
        for j in 0..m {
            let c = max_abs(&eval.column(j));
            for i in 0..eval.rows() {
                eval.set(i, j, if c > 0.0 { eval.get(i, j) / c } else { 0.0 });
            }
        }
        let r = rank(&eval, RANK_RTOL);
        if r < m {
            return Err(Error::DependentBasis { rank: r, expected: m });
        }
        let gradients = functions.iter().map(|f| f.gradient()).collect();
        Ok(Basis {
            num_vars: n,
            functions,
            gradients,
        })
    }

    pub fn parse<S: AsRef<str>>(sources: &[S], names: &[String]) -> Result<Basis> {
        let fs = sources
            .iter()
            .map(|s| parse_polynomial(s.as_ref(), names))
            .collect::<Result<Vec<_>>>()?;
        Basis::new(fs)
    }

    /// Monomials `x^k` for the given exponents.
    pub fn univariate_monomials(exponents: &[u32]) -> Result<Basis> {
        Basis::new(
            exponents
                .iter()
                .map(|&k| Polynomial::monomial(1.0, vec![k]))
                .collect(),
        )
    }

    pub fn monomials(exponents: &[Exponent]) -> Result<Basis> {
        Basis::new(
            exponents
                .iter()
                .map(|e| Polynomial::monomial(1.0, e.clone()))
                .collect(),
        )
    }

    /// A basis of `span{b_i b_j}`: products in order `(i ≤ j)`, keeping those
    /// that enlarge the span.
    pub fn products(&self) -> Result<Basis> {
        let mut kept: Vec<Polynomial> = Vec::new();
        for i in 0..self.len() {
            for j in i..self.len() {
                let p = &self.functions[i] * &self.functions[j];
                let mut trial = kept.clone();
                trial.push(p);
                if coefficient_rank(&trial) == trial.len() {
                    kept = trial;
                }
            }
        }
        Basis::new(kept)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// `m = dim E`.
    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn functions(&self) -> &[Polynomial] {
        &self.functions
    }

    /// `Σ v_j f_j`.
    pub fn combine(&self, v: &[f64]) -> Result<Polynomial> {
        if v.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: v.len(),
            });
        }
        let mut out = Polynomial::zero(self.num_vars);
        for (f, &c) in self.functions.iter().zip(v) {
            if c != 0.0 {
                out = &out + &f.scale(c);
            }
        }
        Ok(out)
    }

    /// Coordinates `v` with `p = Σ v_j f_j`, by least squares on coefficients.
    pub fn coordinates(&self, p: &Polynomial) -> Result<Vec<f64>> {
        if p.num_vars() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: p.num_vars(),
            });
        }
        let mut index: BTreeMap<&Exponent, usize> = BTreeMap::new();
        for f in self.functions.iter().chain(std::iter::once(p)) {
            for (e, _) in f.terms() {
                let k = index.len();
                index.entry(e).or_insert(k);
            }
        }
        let mut a = Matrix::zeros(index.len(), self.len());
        for (j, f) in self.functions.iter().enumerate() {
            for (e, c) in f.terms() {
                a.set(index[e], j, c);
            }
        }
        let mut b = vec![0.0; index.len()];
        for (e, c) in p.terms() {
            b[index[e]] = c;
        }
        let v = least_squares(&a, &b);
        let r = a.mul_vec(&v);
        let residual = max_abs(&r.iter().zip(&b).map(|(x, y)| x - y).collect::<Vec<_>>());
        let scale = max_abs(&b).max(f64::MIN_POSITIVE);
        if residual > SPAN_TOL * scale {
            return Err(Error::NotInSpan {
                residual: residual / scale,
            });
        }
        Ok(v)
    }
}

fn coefficient_rank(ps: &[Polynomial]) -> usize {
    let mut index: BTreeMap<&Exponent, usize> = BTreeMap::new();
    for p in ps {
        for (e, _) in p.terms() {
            let k = index.len();
            index.entry(e).or_insert(k);
        }
    }
    let mut a = Matrix::zeros(index.len().max(1), ps.len());
    for (j, p) in ps.iter().enumerate() {
        for (e, c) in p.terms() {
            a.set(index[e], j, c);
        }
    }
    rank(&a, RANK_RTOL)
}

/// `μ = Σ c_j δ_{x_j}` with `c_j > 0`; points may repeat.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct AtomicMeasure {
    atoms: Vec<(f64, Vec<f64>)>,
}

impl AtomicMeasure {
    pub fn new(atoms: Vec<(f64, Vec<f64>)>) -> Result<AtomicMeasure> {
        if let Some(&(w, _)) = atoms
            .iter()
            .find(|(w, _)| !w.is_finite() || *w <= MIN_WEIGHT)
        {
            return Err(Error::InvalidWeight(w));
        }
        if let Some((_, x0)) = atoms.first() {
            let n = x0.len();
            if let Some((_, x)) = atoms.iter().find(|(_, x)| x.len() != n) {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: x.len(),
                });
            }
            if atoms.iter().flat_map(|(_, x)| x).any(|c| !c.is_finite()) {
                return Err(Error::Invalid("non-finite atom coordinate".into()));
            }
        }
        Ok(AtomicMeasure { atoms })
    }

    pub fn empty() -> AtomicMeasure {
        AtomicMeasure::default()
    }

    /// Unit weights at the given points.
    pub fn uniform(points: Vec<Vec<f64>>) -> Result<AtomicMeasure> {
        AtomicMeasure::new(points.into_iter().map(|x| (1.0, x)).collect())
    }

    pub fn atoms(&self) -> &[(f64, Vec<f64>)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.atoms.iter().map(|a| a.0).collect()
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        self.atoms.iter().map(|a| a.1.clone()).collect()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.0).sum()
    }

    pub fn dim(&self) -> Option<usize> {
        self.atoms.first().map(|a| a.1.len())
    }

    /// Concatenation of atom lists.
    pub fn union(&self, other: &AtomicMeasure) -> AtomicMeasure {
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        AtomicMeasure { atoms }
    }

    pub fn scaled(&self, s: f64) -> Result<AtomicMeasure> {
        AtomicMeasure::new(self.atoms.iter().map(|(w, x)| (w * s, x.clone())).collect())
    }

    /// Sums weights of points equal within `tol`, keeping first-seen order.
    pub fn merged(&self, tol: f64) -> AtomicMeasure {
        let mut out: Vec<(f64, Vec<f64>)> = Vec::new();
        for (w, x) in &self.atoms {
            match out.iter_mut().find(|(_, y)| same_point(x, y, tol)) {
                Some(slot) => slot.0 += w,
                None => out.push((*w, x.clone())),
            }
        }
        AtomicMeasure { atoms: out }
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        match self.dim() {
            Some(k) if k != n => Err(Error::DimensionMismatch {
                expected: n,
                found: k,
            }),
            _ => Ok(()),
        }
    }
}

/// A vector `s ∈ ℝᵐ` read against a basis; `L_s(f_v) = ⟨v, s⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSequence {
    pub basis: Basis,
    pub values: Vec<f64>,
}

impl MomentSequence {
    pub fn new(basis: Basis, values: Vec<f64>) -> Result<MomentSequence> {
        if values.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                found: values.len(),
            });
        }
        Ok(MomentSequence { basis, values })
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }
}

/// `s_F(x) = (f_1(x), …, f_m(x))`.
pub fn moment_vector(basis: &Basis, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != basis.num_vars {
        return Err(Error::DimensionMismatch {
            expected: basis.num_vars,
            found: x.len(),
        });
    }
    Ok(basis.functions.iter().map(|f| f.eval_unchecked(x)).collect())
}

pub fn moments(basis: &Basis, mu: &AtomicMeasure) -> Result<MomentSequence> {
    mu.check_dim(basis.num_vars)?;
    let mut s = vec![0.0; basis.len()];
    for (w, x) in &mu.atoms {
        for (sj, f) in s.iter_mut().zip(&basis.functions) {
            *sj += w * f.eval_unchecked(x);
        }
    }
    MomentSequence::new(basis.clone(), s)
}

/// `DS_k(C, X)`: for each atom the column `s_F(x_j)` followed by
/// `c_j ∂_i s_F(x_j)` for `i = 1..n`.
pub fn jacobian(basis: &Basis, mu: &AtomicMeasure) -> Result<Matrix> {
    mu.check_dim(basis.num_vars)?;
    let n = basis.num_vars;
    let m = basis.len();
    let mut d = Matrix::zeros(m, mu.len() * (n + 1));
    for (j, (c, x)) in mu.atoms.iter().enumerate() {
        let base = j * (n + 1);
        for (r, (f, grad)) in basis.functions.iter().zip(&basis.gradients).enumerate() {
            d.set(r, base, f.eval_unchecked(x));
            for (i, g) in grad.iter().enumerate() {
                d.set(r, base + 1 + i, c * g.eval_unchecked(x));
            }
        }
    }
    Ok(d)
}

/// `L_s(p) = ⟨v, s⟩` where `p = f_v`.
pub fn evaluate_functional(s: &MomentSequence, p: &Polynomial) -> Result<f64> {
    let v = s.basis.coordinates(p)?;
    Ok(v.iter().zip(&s.values).map(|(a, b)| a * b).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn quadratic() -> Basis {
        Basis::univariate_monomials(&[0, 1, 2]).unwrap()
    }

    #[test]
    fn moment_vectors() {
        assert_eq!(moment_vector(&quadratic(), &[2.0]).unwrap(), vec![1.0, 2.0, 4.0]);
        let a = Basis::univariate_monomials(&[0, 2, 4, 5, 6, 7, 8]).unwrap();
        assert_eq!(
            moment_vector(&a, &[0.0]).unwrap(),
            vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
        );
        let b = Basis::parse(&["1", "x", "x*y", "x^3", "x*y^2"], &names(&["x", "y"])).unwrap();
        assert_eq!(moment_vector(&b, &[1.0, 1.0]).unwrap(), vec![1.0; 5]);
        assert!(moment_vector(&b, &[1.0]).is_err());
    }

    #[test]
    fn dirac_and_coincident_atoms() {
        let b = quadratic();
        let s = moments(&b, &AtomicMeasure::uniform(vec![vec![0.0]]).unwrap()).unwrap();
        assert_eq!(s.values, vec![1.0, 0.0, 0.0]);
        let two = AtomicMeasure::new(vec![(1.0, vec![0.7]), (2.0, vec![0.7])]).unwrap();
        let one = AtomicMeasure::new(vec![(3.0, vec![0.7])]).unwrap();
        let a = moments(&b, &two).unwrap().values;
        let c = moments(&b, &one).unwrap().values;
        for (x, y) in a.iter().zip(&c) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn invalid_weights_rejected() {
        assert!(matches!(
            AtomicMeasure::new(vec![(0.0, vec![1.0])]),
            Err(Error::InvalidWeight(_))
        ));
        assert!(AtomicMeasure::new(vec![(1e-13, vec![1.0])]).is_err());
    }

    #[test]
    fn dependent_basis_rejected() {
        let n = names(&["x"]);
        assert!(matches!(
            Basis::parse(&["1", "x", "2*x + 1"], &n),
            Err(Error::DependentBasis { rank: 2, expected: 3 })
        ));
    }

    #[test]
    fn section_seven_jacobian() {
        let x = Polynomial::var(1, 0);
        let q = &(&x * &x) * &(&x - &Polynomial::constant(1, 1.0)).pow(2);
        let f = Basis::new(vec![Polynomial::constant(1, 1.0), x, q]).unwrap();
        let d = jacobian(&f, &AtomicMeasure::uniform(vec![vec![0.0]]).unwrap()).unwrap();
        assert_eq!((d.rows(), d.cols()), (3, 2));
        assert_eq!(d.column(0), vec![1.0, 0.0, 0.0]);
        assert_eq!(d.column(1), vec![0.0, 1.0, 0.0]);
        let one = Basis::univariate_monomials(&[0]).unwrap();
        let d = jacobian(&one, &AtomicMeasure::new(vec![(2.5, vec![3.0])]).unwrap()).unwrap();
        assert_eq!(d.data(), &[1.0, 0.0]);
    }

    #[test]
    fn functional_on_axis_points() {
        let n = names(&["x1", "x2"]);
        let b = Basis::parse(&["1", "x1", "x2", "x1^2", "x1*x2", "x2^2"], &n).unwrap();
        let mu = AtomicMeasure::uniform(vec![vec![-1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let s = moments(&b, &mu).unwrap();
        assert_eq!(&s.values[..2], &[2.0, 0.0]);
        assert_eq!(s.values[3], 2.0);
        let p = parse_polynomial("1 - x1^2", &n).unwrap();
        assert!(evaluate_functional(&s, &p).unwrap().abs() < 1e-12);
        let outside = parse_polynomial("x1^3", &n).unwrap();
        assert!(matches!(
            evaluate_functional(&s, &outside),
            Err(Error::NotInSpan { .. })
        ));
    }

    #[test]
    fn products_of_motzkin_half_basis() {
        let n = names(&["x", "y"]);
        let b = Basis::parse(&["1", "x", "x*y", "x^3", "x*y^2"], &n).unwrap();
        assert_eq!(b.products().unwrap().len(), 14);
    }

    proptest! {
        #[test]
        fn linear_in_atom_lists(
            a in proptest::collection::vec((0.1f64..2.0, -2.0f64..2.0), 0..6),
            b in proptest::collection::vec((0.1f64..2.0, -2.0f64..2.0), 0..6),
        ) {
            let basis = Basis::univariate_monomials(&[0, 1, 2, 3, 5]).unwrap();
            let mk = |v: &[(f64, f64)]| AtomicMeasure::new(v.iter().map(|&(w, x)| (w, vec![x])).collect()).unwrap();
            let (ma, mb) = (mk(&a), mk(&b));
            let sum = moments(&basis, &ma.union(&mb)).unwrap().values;
            let sa = moments(&basis, &ma).unwrap().values;
            let sb = moments(&basis, &mb).unwrap().values;
            for k in 0..sum.len() {
                prop_assert!((sum[k] - sa[k] - sb[k]).abs() <= 1e-12 * (1.0 + sum[k].abs()));
            }
        }

        #[test]
        fn functional_matches_integration(
            atoms in proptest::collection::vec((0.1f64..2.0, -2.0f64..2.0), 1..6),
            v in proptest::collection::vec(-3.0f64..3.0, 5),
        ) {
            let basis = Basis::univariate_monomials(&[0, 1, 2, 3, 5]).unwrap();
            let mu = AtomicMeasure::new(atoms.iter().map(|&(w, x)| (w, vec![x])).collect()).unwrap();
            let s = moments(&basis, &mu).unwrap();
            let p = basis.combine(&v).unwrap();
            let direct: f64 = atoms.iter().map(|&(w, x)| w * p.eval(&[x]).unwrap()).sum();
            let scale: f64 = atoms.iter().map(|&(w, x)| w * p.eval_scale(&[x])).sum();
            prop_assert!((evaluate_functional(&s, &p).unwrap() - direct).abs() <= 1e-9 * (1.0 + scale));
        }
    }
}
