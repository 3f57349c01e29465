//! Dense two-phase simplex with Bland's rule.
//!
//! Problems are in standard form `A w = b, w ≥ 0`, optionally maximizing
//! `cᵀw`. Rows are equilibrated before pivoting and basic solutions are
//! re-solved against the original columns afterwards.

use super::{kernel, least_squares, max_abs, norm, Matrix, RANK_RTOL};
use crate::error::{Error, Result};

/// Feasibility tolerance, relative to `1 + ‖b‖∞`.
pub const FEAS_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-10;
const MAX_PIVOTS: usize = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub struct LpProblem {
    pub a: Matrix,
    pub b: Vec<f64>,
    /// Maximized when present.
    pub objective: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    /// Feasible with the objective unbounded above; `x` is the last vertex.
    Unbounded { x: Vec<f64> },
}

impl LpProblem {
    pub fn new(a: Matrix, b: Vec<f64>) -> Result<LpProblem> {
        let p = LpProblem {
            a,
            b,
            objective: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn maximize(mut self, c: Vec<f64>) -> Result<LpProblem> {
        self.objective = Some(c);
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if self.b.len() != self.a.rows() {
            return Err(Error::DimensionMismatch {
                expected: self.a.rows(),
                found: self.b.len(),
            });
        }
        if let Some(c) = &self.objective {
            if c.len() != self.a.cols() {
                return Err(Error::DimensionMismatch {
                    expected: self.a.cols(),
                    found: c.len(),
                });
            }
        }
        if self.b.iter().chain(self.a.data()).any(|v| !v.is_finite()) {
            return Err(Error::Invalid("non-finite LP data".into()));
        }
        Ok(())
    }

    pub fn residual(&self, w: &[f64]) -> f64 {
        let aw = self.a.mul_vec(w);
        max_abs(&aw.iter().zip(&self.b).map(|(x, y)| x - y).collect::<Vec<_>>())
    }

    fn tolerance(&self) -> f64 {
        FEAS_TOL * (1.0 + max_abs(&self.b))
    }
}

struct Tableau {
    /// `rows × (cols + 1)`; last column is the right-hand side.
    t: Vec<Vec<f64>>,
    /// Reduced costs (minimization) with `-objective` in the last entry.
    cost: Vec<f64>,
    basis: Vec<usize>,
    /// Columns allowed to enter.
    enterable: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c];
        self.t[r].iter_mut().for_each(|x| *x /= p);
        let prow = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i != r {
                let f = row[c];
                if f != 0.0 {
                    row.iter_mut().zip(&prow).for_each(|(x, y)| *x -= f * y);
                }
            }
        }
        let f = self.cost[c];
        if f != 0.0 {
            self.cost.iter_mut().zip(&prow).for_each(|(x, y)| *x -= f * y);
        }
        self.basis[r] = c;
    }

    /// Runs Bland's rule to optimality; `Ok(false)` on unboundedness.
    fn optimize(&mut self) -> Result<bool> {
        let width = self.cost.len() - 1;
        for _ in 0..MAX_PIVOTS {
            let Some(enter) = (0..self.enterable).find(|&j| self.cost[j] < -COST_TOL) else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in self.t.iter().enumerate() {
                if row[enter] > PIVOT_TOL {
                    let ratio = row[width] / row[enter];
                    let better = match leave {
                        None => true,
                        Some((l, best)) => {
                            ratio < best - 1e-14 * best.abs().max(1.0)
                                || (ratio <= best + 1e-14 * best.abs().max(1.0)
                                    && self.basis[i] < self.basis[l])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                None => return Ok(false),
                Some((r, _)) => self.pivot(r, enter),
            }
        }
        Err(Error::Invalid("simplex iteration limit reached".into()))
    }

    fn solution(&self, n: usize) -> Vec<f64> {
        let width = self.cost.len() - 1;
        let mut x = vec![0.0; n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < n {
                x[b] = self.t[i][width].max(0.0);
            }
        }
        x
    }
}

/// Phase 1; returns the tableau positioned at a feasible basis over the
/// structural columns, or `None` when infeasible.
fn phase_one(p: &LpProblem) -> Result<Option<Tableau>> {
    let (m, n) = (p.a.rows(), p.a.cols());
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(m);
    let tol = p.tolerance();
    for i in 0..m {
        let mut row: Vec<f64> = p.a.row(i).to_vec();
        let mut rhs = p.b[i];
        let s = max_abs(&row);
        if s == 0.0 {
            if rhs.abs() > tol {
                return Ok(None);
            }
            continue;
        }
        row.iter_mut().for_each(|x| *x /= s);
        rhs /= s;
        if rhs < 0.0 {
            row.iter_mut().for_each(|x| *x = -*x);
            rhs = -rhs;
        }
        rows.push(row.into_iter().chain(std::iter::once(rhs)).collect());
    }
    let mr = rows.len();
    let width = n + mr;
    let scaled_tol = FEAS_TOL * (1.0 + rows.iter().map(|r| r[n]).fold(0.0, f64::max));
    let mut t: Vec<Vec<f64>> = Vec::with_capacity(mr);
    for (i, row) in rows.iter().enumerate() {
        let mut full = vec![0.0; width + 1];
        full[..n].copy_from_slice(&row[..n]);
        full[n + i] = 1.0;
        full[width] = row[n];
        t.push(full);
    }
    let mut cost = vec![0.0; width + 1];
    for row in &t {
        for j in 0..n {
            cost[j] -= row[j];
        }
        cost[width] -= row[width];
    }
    let mut tab = Tableau {
        t,
        cost,
        basis: (n..n + mr).collect(),
        enterable: width,
    };
    tab.optimize()?;
    let infeas: f64 = tab
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &b)| b >= n)
        .map(|(i, _)| tab.t[i][width])
        .sum();
    if infeas > scaled_tol {
        return Ok(None);
    }
    // drive artificials out of the basis, dropping redundant rows
    let mut i = 0;
    while i < tab.basis.len() {
        if tab.basis[i] >= n {
            let j = (0..n)
                .filter(|&j| tab.t[i][j].abs() > 1e-9)
                .max_by(|&a, &b| tab.t[i][a].abs().partial_cmp(&tab.t[i][b].abs()).unwrap());
            match j {
                Some(j) => tab.pivot(i, j),
                None => {
                    tab.t.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    tab.enterable = n;
    Ok(Some(tab))
}

/// Re-solves the basic system on the original columns; keeps the refined
/// vertex when it is nonnegative and no worse.
fn refine(p: &LpProblem, x: Vec<f64>) -> Vec<f64> {
    let support: Vec<usize> = (0..x.len()).filter(|&j| x[j] > 0.0).collect();
    if support.is_empty() {
        return x;
    }
    let cols = p.a.select_columns(&support);
    let sol = least_squares(&cols, &p.b);
    if sol.iter().any(|&v| v < 0.0) {
        return x;
    }
    let mut y = vec![0.0; x.len()];
    for (k, &j) in support.iter().enumerate() {
        y[j] = sol[k];
    }
    if p.residual(&y) <= p.residual(&x) {
        y
    } else {
        x
    }
}

pub fn lp_solve(p: &LpProblem) -> Result<LpOutcome> {
    p.validate()?;
    let n = p.a.cols();
    let Some(mut tab) = phase_one(p)? else {
        return Ok(LpOutcome::Infeasible);
    };
    let Some(c) = &p.objective else {
        let x = refine(p, tab.solution(n));
        return Ok(LpOutcome::Optimal { x, value: 0.0 });
    };
    let width = tab.cost.len() - 1;
    let mut cost = vec![0.0; width + 1];
    for j in 0..n {
        cost[j] = -c[j];
    }
    for (i, &b) in tab.basis.iter().enumerate() {
        let cb = if b < n { -c[b] } else { 0.0 };
        if cb != 0.0 {
            for (k, x) in cost.iter_mut().enumerate() {
                *x -= cb * tab.t[i][k];
            }
        }
    }
    tab.cost = cost;
    let bounded = tab.optimize()?;
    let x = refine(p, tab.solution(n));
    if !bounded {
        return Ok(LpOutcome::Unbounded { x });
    }
    let value = x.iter().zip(c).map(|(a, b)| a * b).sum();
    Ok(LpOutcome::Optimal { x, value })
}

/// Phase-1 feasibility with a nonnegative witness.
pub fn lp_feasible(p: &LpProblem) -> Result<(bool, Option<Vec<f64>>)> {
    let q = LpProblem {
        objective: None,
        ..p.clone()
    };
    Ok(match lp_solve(&q)? {
        LpOutcome::Infeasible => (false, None),
        LpOutcome::Optimal { x, .. } | LpOutcome::Unbounded { x } => (true, Some(x)),
    })
}

/// Carathéodory pivoting from a feasible `start` down to a solution whose
/// support columns are linearly independent.
pub fn basic_solution(p: &LpProblem, start: &[f64]) -> Result<Vec<f64>> {
    p.validate()?;
    if start.len() != p.a.cols() {
        return Err(Error::DimensionMismatch {
            expected: p.a.cols(),
            found: start.len(),
        });
    }
    let residual = p.residual(start);
    let scale = 1.0 + max_abs(&p.b) + p.a.max_abs() * max_abs(start);
    if start.iter().any(|&w| w < 0.0 || !w.is_finite()) || residual > 1e-8 * scale {
        return Err(Error::InfeasibleStart { residual });
    }
    let mut w = start.to_vec();
    let norms: Vec<f64> = (0..p.a.cols()).map(|j| norm(&p.a.column(j))).collect();
    for (j, &nj) in norms.iter().enumerate() {
        if nj == 0.0 {
            w[j] = 0.0;
        }
    }
    loop {
        let active: Vec<usize> = (0..w.len()).filter(|&j| w[j] > 0.0).collect();
        if active.len() <= 1 {
            break;
        }
        let mut cols = p.a.select_columns(&active);
        for (k, &j) in active.iter().enumerate() {
            for i in 0..cols.rows() {
                cols.set(i, k, cols.get(i, k) / norms[j]);
            }
        }
        let ker = kernel(&cols, RANK_RTOL);
        let Some(z) = ker.first() else { break };
        let z: Vec<f64> = z
            .iter()
            .zip(&active)
            .map(|(v, &j)| v / norms[j])
            .collect();
        let mut step: Option<(usize, f64)> = None;
        for (k, &zk) in z.iter().enumerate() {
            if zk > 0.0 {
                let t = w[active[k]] / zk;
                if step.map_or(true, |(_, s)| t < s) {
                    step = Some((k, t));
                }
            }
        }
        let (kmin, t) = step.expect("canonical sign leaves a positive entry");
        for (k, &j) in active.iter().enumerate() {
            w[j] = (w[j] - t * z[k]).max(0.0);
        }
        w[active[kmin]] = 0.0;
    }
    let support: Vec<usize> = (0..w.len()).filter(|&j| w[j] > 0.0).collect();
    if !support.is_empty() {
        let sol = least_squares(&p.a.select_columns(&support), &p.b);
        if sol.iter().all(|&v| v > 0.0) {
            let mut y = vec![0.0; w.len()];
            for (k, &j) in support.iter().enumerate() {
                y[j] = sol[k];
            }
            if p.residual(&y) <= p.residual(&w) {
                w = y;
            }
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trivial_feasible() {
        let p = LpProblem::new(Matrix::new(1, 1, vec![1.0]).unwrap(), vec![1.0]).unwrap();
        let (ok, w) = lp_feasible(&p).unwrap();
        assert!(ok);
        assert_eq!(w.unwrap(), vec![1.0]);
    }

    #[test]
    fn negative_target_outside_cone() {
        let a = Matrix::from_columns(&[vec![1.0, 2.0], vec![1.0, -1.0]]).unwrap();
        let p = LpProblem::new(a, vec![-1.0, 0.0]).unwrap();
        assert!(!lp_feasible(&p).unwrap().0);
    }

    #[test]
    fn maximization_and_unboundedness() {
        // w0 + w1 = 1, maximize w1
        let a = Matrix::from_rows(&[vec![1.0, 1.0]]).unwrap();
        let p = LpProblem::new(a.clone(), vec![1.0])
            .unwrap()
            .maximize(vec![0.0, 1.0])
            .unwrap();
        match lp_solve(&p).unwrap() {
            LpOutcome::Optimal { x, value } => {
                assert!((value - 1.0).abs() < 1e-12);
                assert_eq!(x, vec![0.0, 1.0]);
            }
            o => panic!("{o:?}"),
        }
        // w0 - w1 = 1, maximize w1
        let a = Matrix::from_rows(&[vec![1.0, -1.0]]).unwrap();
        let p = LpProblem::new(a, vec![1.0]).unwrap().maximize(vec![0.0, 1.0]).unwrap();
        assert!(matches!(lp_solve(&p).unwrap(), LpOutcome::Unbounded { .. }));
    }

    #[test]
    fn redundant_rows() {
        let a = Matrix::from_rows(&[vec![1.0, 1.0], vec![2.0, 2.0]]).unwrap();
        let p = LpProblem::new(a, vec![1.0, 2.0]).unwrap();
        let (ok, w) = lp_feasible(&p).unwrap();
        assert!(ok);
        assert!(p.residual(&w.unwrap()) < 1e-12);
    }

    #[test]
    fn identical_columns_collapse() {
        let a = Matrix::from_columns(&[vec![1.0, 0.5], vec![1.0, 0.5]]).unwrap();
        let p = LpProblem::new(a, vec![2.0, 1.0]).unwrap();
        let w = basic_solution(&p, &[1.0, 1.0]).unwrap();
        assert_eq!(w.iter().filter(|&&x| x > 0.0).count(), 1);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn basic_start_unchanged() {
        let a = Matrix::identity(3);
        let p = LpProblem::new(a, vec![1.0, 2.0, 0.0]).unwrap();
        assert_eq!(basic_solution(&p, &[1.0, 2.0, 0.0]).unwrap(), vec![1.0, 2.0, 0.0]);
        assert!(matches!(
            basic_solution(&p, &[1.0, 1.0, 0.0]),
            Err(Error::InfeasibleStart { .. })
        ));
    }

    #[test]
    fn fifty_columns_in_seven_dimensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cols: Vec<Vec<f64>> = (0..50)
            .map(|_| (0..7).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let w: Vec<f64> = (0..50).map(|_| rng.gen_range(0.1..1.0)).collect();
        let a = Matrix::from_columns(&cols).unwrap();
        let b = a.mul_vec(&w);
        let p = LpProblem::new(a, b).unwrap();
        let out = basic_solution(&p, &w).unwrap();
        assert!(out.iter().filter(|&&x| x > 0.0).count() <= 7);
        assert!(p.residual(&out) <= 1e-8);
        let (ok, x) = lp_feasible(&p).unwrap();
        assert!(ok && p.residual(&x.unwrap()) <= 1e-9 * (1.0 + max_abs(&p.b)));
    }

    #[test]
    fn deterministic_witness() {
        let a = Matrix::from_columns(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let p = LpProblem::new(a, vec![1.0, 1.0]).unwrap();
        assert_eq!(lp_feasible(&p).unwrap(), lp_feasible(&p).unwrap());
    }
}
