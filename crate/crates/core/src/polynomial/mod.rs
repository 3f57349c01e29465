//! Sparse multivariate polynomials with real coefficients.
//!
//! A [`Polynomial`] maps exponent vectors `α ∈ ℕ₀ⁿ` to nonzero coefficients and
//! evaluates as `Σ_α c_α x^α`. Terms are kept in a `BTreeMap`, so iteration
//! order (and therefore every printed form) is canonical.
//!
//! Univariate root isolation and the nonnegativity decision live in
//! [`univariate`]; the text grammar is in [`text`].

mod text;
pub mod univariate;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub use text::parse_polynomial;
pub use univariate::{
    is_nonneg_on, univariate_is_nonneg, univariate_real_roots, Root, RootList,
};

pub type Exponent = Vec<u32>;

#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    num_vars: usize,
    terms: BTreeMap<Exponent, f64>,
}

impl Polynomial {
    pub fn zero(num_vars: usize) -> Self {
        Polynomial {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: f64) -> Self {
        let mut p = Self::zero(num_vars);
        p.add_term(vec![0; num_vars], c);
        p
    }

    /// The coordinate function `x_i` (0-based).
    pub fn var(num_vars: usize, i: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[i] = 1;
        Self::monomial(1.0, e)
    }

    pub fn monomial(coef: f64, exponent: Exponent) -> Self {
        let mut p = Self::zero(exponent.len());
        p.add_term(exponent, coef);
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(num_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, f64)>,
    {
        let mut p = Self::zero(num_vars);
        for (e, c) in terms {
            if e.len() != num_vars {
                return Err(Error::DimensionMismatch {
                    expected: num_vars,
                    found: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Univariate polynomial from ascending coefficients `c_0 + c_1 x + ...`.
    pub fn from_univariate(coeffs: &[f64]) -> Self {
        let mut p = Self::zero(1);
        for (k, &c) in coeffs.iter().enumerate() {
            p.add_term(vec![k as u32], c);
        }
        p
    }

    fn add_term(&mut self, exponent: Exponent, c: f64) {
        if c == 0.0 {
            return;
        }
        match self.terms.entry(exponent) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0.0 {
                    o.remove();
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, f64)> {
        self.terms.iter().map(|(e, c)| (e, *c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exponent: &[u32]) -> f64 {
        self.terms.get(exponent).copied().unwrap_or(0.0)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Sum of absolute coefficient values.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).sum()
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: x.len(),
            });
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c * monomial_value(e, x))
            .sum()
    }

    /// `Σ |c_α| |x^α|`, the magnitude round-off in `eval` is relative to.
    pub(crate) fn eval_scale(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| (c * monomial_value(e, x)).abs())
            .sum()
    }

    /// Formal partial derivative with respect to variable `i` (0-based).
    pub fn partial_derivative(&self, i: usize) -> Result<Polynomial> {
        if i >= self.num_vars {
            return Err(Error::VariableOutOfRange {
                index: i,
                num_vars: self.num_vars,
            });
        }
        let mut out = Polynomial::zero(self.num_vars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            out.add_term(d, c * e[i] as f64);
        }
        Ok(out)
    }

    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.num_vars)
            .map(|i| self.partial_derivative(i).expect("index in range"))
            .collect()
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        let mut out = Polynomial::zero(self.num_vars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    /// Drops terms with `|c| ≤ rtol · max|c|`.
    pub fn trimmed(&self, rtol: f64) -> Polynomial {
        let cut = rtol * self.max_abs_coefficient();
        Polynomial {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.abs() > cut)
                .map(|(e, c)| (e.clone(), *c))
                .collect(),
        }
    }

    /// Coefficients rounded to `digits` significant digits.
    pub fn rounded(&self, digits: usize) -> Polynomial {
        let prec = digits.saturating_sub(1);
        let mut out = Polynomial::zero(self.num_vars);
        for (e, c) in &self.terms {
            let r = format!("{c:.prec$e}").parse::<f64>().unwrap_or(*c);
            out.add_term(e.clone(), r);
        }
        out
    }

    /// Dense ascending coefficients; only valid for `num_vars == 1`.
    pub fn univariate_coefficients(&self) -> Result<Vec<f64>> {
        if self.num_vars != 1 {
            return Err(Error::NotUnivariate {
                num_vars: self.num_vars,
            });
        }
        let deg = self.degree().unwrap_or(0) as usize;
        let mut out = vec![0.0; deg + 1];
        for (e, c) in &self.terms {
            out[e[0] as usize] = *c;
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::constant(self.num_vars, 1.0);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Renders with the given variable names (see [`text`] for the grammar).
    pub fn to_string_with(&self, names: &[String]) -> String {
        text::render(self, names)
    }
}

pub(crate) fn monomial_value(e: &[u32], x: &[f64]) -> f64 {
    e.iter()
        .zip(x)
        .map(|(&k, &xi)| xi.powi(k as i32))
        .product()
}

fn combine(a: &Polynomial, b: &Polynomial, sign: f64) -> Polynomial {
    assert_eq!(a.num_vars, b.num_vars, "polynomials over different spaces");
    let mut out = a.clone();
    for (e, c) in &b.terms {
        out.add_term(e.clone(), sign * c);
    }
    out
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        combine(self, rhs, 1.0)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        combine(self, rhs, -1.0)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.num_vars, rhs.num_vars, "polynomials over different spaces");
        let mut acc: BTreeMap<Exponent, f64> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert(0.0) += ca * cb;
            }
        }
        acc.retain(|_, c| *c != 0.0);
        Polynomial {
            num_vars: self.num_vars,
            terms: acc,
        }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = text::default_names(self.num_vars);
        f.write_str(&text::render(self, &names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy(e: [u32; 2], c: f64) -> Polynomial {
        Polynomial::monomial(c, e.to_vec())
    }

    pub(crate) fn motzkin() -> Polynomial {
        [xy([0, 0], 1.0), xy([2, 2], -3.0), xy([2, 4], 1.0), xy([4, 2], 1.0)]
            .into_iter()
            .reduce(|a, b| a + b)
            .unwrap()
    }

    fn robinson() -> Polynomial {
        let t = |e: [u32; 3], c: f64| Polynomial::monomial(c, e.to_vec());
        [
            t([6, 0, 0], 1.0),
            t([0, 6, 0], 1.0),
            t([0, 0, 6], 1.0),
            t([4, 2, 0], -1.0),
            t([4, 0, 2], -1.0),
            t([2, 4, 0], -1.0),
            t([0, 4, 2], -1.0),
            t([2, 0, 4], -1.0),
            t([0, 2, 4], -1.0),
            t([2, 2, 2], 3.0),
        ]
        .into_iter()
        .reduce(|a, b| a + b)
        .unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(motzkin().eval(&[1.0, 1.0]).unwrap(), 0.0);
        assert_eq!(Polynomial::monomial(1.0, vec![2]).eval(&[2.0]).unwrap(), 4.0);
        assert_eq!(robinson().eval(&[1.0, 1.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn eval_dimension_mismatch() {
        let err = motzkin().eval(&[1.0]).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, found: 1 });
    }

    #[test]
    fn derivative_examples() {
        let p = xy([2, 1], 1.0);
        assert_eq!(p.partial_derivative(0).unwrap(), xy([1, 1], 2.0));
        assert!(Polynomial::constant(2, 5.0)
            .partial_derivative(0)
            .unwrap()
            .is_zero());
        assert!(matches!(
            p.partial_derivative(2),
            Err(Error::VariableOutOfRange { index: 2, num_vars: 2 })
        ));
    }

    #[test]
    fn motzkin_derivative_matches_finite_difference() {
        let m = motzkin();
        let d = m.partial_derivative(0).unwrap().eval(&[1.0, 1.0]).unwrap();
        let h = 1e-4;
        let fd = (m.eval(&[1.0 + h, 1.0]).unwrap() - m.eval(&[1.0 - h, 1.0]).unwrap()) / (2.0 * h);
        assert_eq!(d, 0.0);
        assert!((d - fd).abs() < 1e-6, "fd = {fd}");
    }

    #[test]
    fn cancellation_removes_terms() {
        let p = xy([1, 0], 2.0);
        let q = &p - &p;
        assert!(q.is_zero());
        assert_eq!(q.degree(), None);
    }

    #[test]
    fn product_and_power() {
        let x = Polynomial::var(1, 0);
        let one = Polynomial::constant(1, 1.0);
        let p = (&x - &one).pow(2);
        assert_eq!(p.univariate_coefficients().unwrap(), vec![1.0, -2.0, 1.0]);
    }
}
