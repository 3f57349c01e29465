//! Dense linear algebra on top of an SVD, plus a small simplex solver.

mod lp;

pub use lp::{basic_solution, lp_feasible, lp_solve, LpOutcome, LpProblem, FEAS_TOL};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Default relative singular-value cutoff for rank decisions.
pub const RANK_RTOL: f64 = 1e-9;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Stacks equal-length rows; an empty list gives a `0 × 0` matrix.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, |r| r.len());
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: r.len(),
            });
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn from_columns(cols: &[Vec<f64>]) -> Result<Matrix> {
        Ok(Matrix::from_rows(cols)?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Keeps the listed columns, in order.
    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                m.set(i, k, self.get(i, j));
            }
        }
        m
    }

    pub fn without_row(&self, r: usize) -> Matrix {
        let rows: Vec<Vec<f64>> = (0..self.rows)
            .filter(|&i| i != r)
            .map(|i| self.row(i).to_vec())
            .collect();
        let mut m = Matrix::from_rows(&rows).expect("equal rows");
        m.cols = self.cols;
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn to_na(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Full SVD data: singular values (descending), left and right singular
/// vectors as columns of square orthogonal matrices.
struct FullSvd {
    sigma: Vec<f64>,
    u: DMatrix<f64>,
    v: DMatrix<f64>,
}

fn full_svd(m: &Matrix) -> FullSvd {
    let n = m.rows.max(m.cols).max(1);
    // pad to square so both singular bases are complete
    let mut a = DMatrix::<f64>::zeros(n, n);
    a.view_mut((0, 0), (m.rows, m.cols)).copy_from(&m.to_na());
    let svd = a.svd(true, true);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        svd.singular_values[j]
            .partial_cmp(&svd.singular_values[i])
            .unwrap()
            .then(i.cmp(&j))
    });
    let u0 = svd.u.expect("requested u");
    let vt0 = svd.v_t.expect("requested v_t");
    let sigma = order.iter().map(|&k| svd.singular_values[k]).collect();
    let u = DMatrix::from_fn(n, n, |i, j| u0[(i, order[j])]);
    let v = DMatrix::from_fn(n, n, |i, j| vt0[(order[j], i)]);
    FullSvd { sigma, u, v }
}

fn cutoff(sigma: &[f64], rtol: f64) -> f64 {
    rtol * sigma.first().copied().unwrap_or(0.0)
}

pub fn singular_values(m: &Matrix) -> Vec<f64> {
    if m.rows == 0 || m.cols == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.to_na().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Number of singular values above `rtol·σ_max`.
pub fn rank(m: &Matrix, rtol: f64) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    rank_from(&full_svd(m).sigma, rtol, m.rows.min(m.cols))
}

fn rank_from(sigma: &[f64], rtol: f64, limit: usize) -> usize {
    let c = cutoff(sigma, rtol);
    sigma
        .iter()
        .take(limit)
        .filter(|&&x| x > c && x > 0.0)
        .count()
}

/// Orthonormal basis of `{v : M v = 0}`.
pub fn kernel(m: &Matrix, rtol: f64) -> Vec<Vec<f64>> {
    if m.cols == 0 {
        return Vec::new();
    }
    if m.rows == 0 {
        return Matrix::identity(m.cols)
            .data
            .chunks(m.cols)
            .map(|c| c.to_vec())
            .collect();
    }
    let svd = full_svd(m);
    let r = rank_from(&svd.sigma, rtol, m.rows.min(m.cols));
    (r..m.cols)
        .map(|j| {
            let mut v: Vec<f64> = (0..m.cols).map(|i| svd.v[(i, j)]).collect();
            canonical_sign(&mut v);
            v
        })
        .collect()
}

/// Orthonormal basis of the column space of `M`.
pub fn range_basis(m: &Matrix, rtol: f64) -> Vec<Vec<f64>> {
    if m.rows == 0 || m.cols == 0 {
        return Vec::new();
    }
    let svd = full_svd(m);
    let r = rank_from(&svd.sigma, rtol, m.rows.min(m.cols));
    (0..r)
        .map(|j| {
            let mut v: Vec<f64> = (0..m.rows).map(|i| svd.u[(i, j)]).collect();
            canonical_sign(&mut v);
            v
        })
        .collect()
}

/// Orthonormal basis of the orthogonal complement of the column space.
pub fn cokernel(m: &Matrix, rtol: f64) -> Vec<Vec<f64>> {
    kernel(&m.transpose(), rtol)
}

/// Makes the largest-magnitude entry positive (first one on ties).
pub fn canonical_sign(v: &mut [f64]) {
    let mut best = 0.0f64;
    let mut sign = 1.0;
    for &x in v.iter() {
        if x.abs() > best * (1.0 + 1e-12) {
            best = x.abs();
            sign = x.signum();
        }
    }
    if sign < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// `‖v − P v‖ / ‖v‖` for `P` the projection onto `span(basis)`, with the
/// basis assumed orthonormal.
pub fn span_residual(v: &[f64], basis: &[Vec<f64>]) -> f64 {
    let nv = norm(v);
    if nv == 0.0 {
        return 0.0;
    }
    let mut r = v.to_vec();
    for b in basis {
        let c = dot(&r, b);
        r.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
    }
    norm(&r) / nv
}

/// Largest span residual of either basis against the other.
pub fn mutual_span_residual(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let ab = a.iter().map(|v| span_residual(v, b)).fold(0.0, f64::max);
    let ba = b.iter().map(|v| span_residual(v, a)).fold(0.0, f64::max);
    ab.max(ba)
}

/// Gram-Schmidt (twice) on the given vectors, dropping dependent ones.
pub fn orthonormalize(vs: &[Vec<f64>], rtol: f64) -> Vec<Vec<f64>> {
    let scale = vs.iter().map(|v| norm(v)).fold(0.0, f64::max);
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in vs {
        let mut r = v.clone();
        for _ in 0..2 {
            for b in &out {
                let c = dot(&r, b);
                r.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let n = norm(&r);
        if n > rtol * scale && n > 0.0 {
            out.push(r.iter().map(|x| x / n).collect());
        }
    }
    out
}

/// Minimum-norm least-squares solution of `A x ≈ b`.
pub fn least_squares(a: &Matrix, b: &[f64]) -> Vec<f64> {
    assert_eq!(a.rows, b.len(), "least squares dimension mismatch");
    if a.cols == 0 {
        return Vec::new();
    }
    if a.rows == 0 {
        return vec![0.0; a.cols];
    }
    let svd = a.to_na().svd(true, true);
    let eps = RANK_RTOL * svd.singular_values.max();
    let x = svd
        .solve(&nalgebra::DVector::from_column_slice(b), eps.max(f64::MIN_POSITIVE))
        .expect("u and v_t computed");
    x.iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_rank_and_kernel() {
        let i = Matrix::identity(3);
        assert_eq!(rank(&i, RANK_RTOL), 3);
        assert!(kernel(&i, RANK_RTOL).is_empty());
        assert_eq!(rank(&Matrix::zeros(2, 3), RANK_RTOL), 0);
    }

    #[test]
    fn kernel_of_wide_matrix() {
        let m = Matrix::from_rows(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]).unwrap();
        let k = kernel(&m, RANK_RTOL);
        assert_eq!(k.len(), 1);
        assert!(span_residual(&[0.0, 0.0, 1.0], &k) < 1e-14);
        assert_eq!(range_basis(&m, RANK_RTOL).len(), 2);
    }

    #[test]
    fn least_squares_solves_consistent_systems() {
        let a = Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, -1.0], vec![2.0, 0.0]]).unwrap();
        let x = least_squares(&a, &[3.0, 1.0, 4.0]);
        assert!((x[0] - 2.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
    }

    fn matrix() -> impl Strategy<Value = Matrix> {
        (1usize..6, 1usize..6, 0usize..4).prop_flat_map(|(r, c, k)| {
            let k = k.min(r).min(c).max(1);
            (
                proptest::collection::vec(-2.0f64..2.0, r * k),
                proptest::collection::vec(-2.0f64..2.0, k * c),
            )
                .prop_map(move |(a, b)| {
                    let mut m = Matrix::zeros(r, c);
                    for i in 0..r {
                        for j in 0..c {
                            m.set(i, j, (0..k).map(|t| a[i * k + t] * b[t * c + j]).sum());
                        }
                    }
                    m
                })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in matrix()) {
            let r = rank(&m, RANK_RTOL);
            let k = kernel(&m, RANK_RTOL);
            prop_assert_eq!(r + k.len(), m.cols());
            let smax = singular_values(&m).first().copied().unwrap_or(0.0);
            for (i, v) in k.iter().enumerate() {
                prop_assert!(norm(&m.mul_vec(v)) <= 10.0 * RANK_RTOL * smax * norm(v) + 1e-14);
                for w in &k[i + 1..] {
                    prop_assert!(dot(v, w).abs() < 1e-10);
                }
                prop_assert!((norm(v) - 1.0).abs() < 1e-10);
            }
        }
    }
}
