//! Determinacy: `L` has a unique representing measure iff `{s_F(x) : x ∈ W}`
//! is linearly independent (and `W` is finite).

use crate::cone_geometry::{probe_points, SearchConfig};
use crate::core_variety::{core_variety, representing_measure};
use crate::domain::{PointSet, MATCH_TOL};
use crate::error::{Error, Result};
use crate::moment_map::{moment_vector, moments, AtomicMeasure, Basis};
use crate::numeric::{
    canonical_sign, dot, kernel, lp_solve, max_abs, norm, rank, LpOutcome, LpProblem, Matrix,
    RANK_RTOL,
};
use crate::polynomial::Polynomial;
use crate::domain::Domain;

#[derive(Clone, Debug, PartialEq)]
pub struct DeterminacyReport {
    pub determinate: bool,
    pub atoms: PointSet,
    /// Rank of `{s_F(x) : x ∈ W}`, i.e. `dim E|_W`.
    pub rank: Option<usize>,
    /// `Σ c_i s_F(x_i) = 0` over the points of `W`, when dependent.
    pub dependency: Option<Vec<f64>>,
    /// Two distinct representing measures, when not determinate.
    pub witnesses: Option<(AtomicMeasure, AtomicMeasure)>,
    /// The unique representing measure, when determinate.
    pub measure: Option<AtomicMeasure>,
}

fn moment_matrix(basis: &Basis, points: &[Vec<f64>]) -> Result<Matrix> {
    let rows = points
        .iter()
        .map(|x| moment_vector(basis, x))
        .collect::<Result<Vec<_>>>()?;
    let mut m = Matrix::from_rows(&rows)?;
    if m.cols() == 0 {
        m = Matrix::zeros(points.len(), basis.len());
    }
    Ok(m)
}

/// Two different representing measures of an inner point.
fn inner_witnesses(basis: &Basis, mu: &AtomicMeasure) -> Result<(AtomicMeasure, AtomicMeasure)> {
    let s = moments(basis, mu)?.values;
    let mut pts = mu.merged(1e-12).points();
    let probes = probe_points(mu, basis.len() + 1);
    let first_probe = pts.len();
    pts.extend(probes);
    let a = moment_matrix(basis, &pts)?.transpose();
    let mut c = vec![0.0; pts.len()];
    c[first_probe] = 1.0;
    let p = LpProblem::new(a, s)?.maximize(c)?;
    let w = match lp_solve(&p)? {
        LpOutcome::Optimal { x, .. } | LpOutcome::Unbounded { x } => x,
        LpOutcome::Infeasible => return Err(Error::SupportInsufficient),
    };
    let other = AtomicMeasure::new(
        pts.iter()
            .zip(&w)
            .filter(|(_, &w)| w > 1e-12)
            .map(|(x, &w)| (w, x.clone()))
            .collect(),
    )?;
    Ok((mu.merged(1e-12), other))
}

pub fn is_determinate(
    basis: &Basis,
    mu: &AtomicMeasure,
    dom: &Domain,
    cfg: &SearchConfig,
) -> Result<DeterminacyReport> {
    let cv = core_variety(basis, mu, dom, cfg)?;
    let Some(w) = cv.atoms.points() else {
        let witnesses = inner_witnesses(basis, mu)?;
        return Ok(DeterminacyReport {
            determinate: false,
            atoms: PointSet::All,
            rank: None,
            dependency: None,
            witnesses: Some(witnesses),
            measure: None,
        });
    };
    let m = moment_matrix(basis, w)?;
    let r = rank(&m, cfg.rank_rtol);
    let s = moments(basis, mu)?;
    let measure = match &cv.measure {
        Some(mm) => mm.clone(),
        None => representing_measure(basis, &s, w)?,
    };
    if r == w.len() {
        return Ok(DeterminacyReport {
            determinate: true,
            atoms: cv.atoms.clone(),
            rank: Some(r),
            dependency: None,
            witnesses: None,
            measure: Some(measure),
        });
    }
    // columns s_F(x_i): a null vector is a dependency among the points
    let mut c = kernel(&m.transpose(), cfg.rank_rtol)
        .into_iter()
        .next()
        .expect("rank deficiency leaves a null vector");
    canonical_sign(&mut c);
    let witnesses = perturbations(&measure, w, &c)?;
    Ok(DeterminacyReport {
        determinate: false,
        atoms: cv.atoms.clone(),
        rank: Some(r),
        dependency: Some(c),
        witnesses: Some(witnesses),
        measure: Some(measure),
    })
}

/// `μ ± t Σ c_i δ_{x_i}` with `t` half the largest admissible step.
pub fn perturbations(
    mu: &AtomicMeasure,
    points: &[Vec<f64>],
    c: &[f64],
) -> Result<(AtomicMeasure, AtomicMeasure)> {
    let weight_at = |x: &[f64]| -> f64 {
        mu.atoms()
            .iter()
            .filter(|(_, y)| crate::domain::same_point(x, y, MATCH_TOL))
            .map(|(w, _)| *w)
            .sum()
    };
    let base: Vec<f64> = points.iter().map(|x| weight_at(x)).collect();
    let min_w = base.iter().copied().fold(f64::INFINITY, f64::min);
    let t = 0.5 * min_w / max_abs(c);
    let build = |sign: f64| {
        AtomicMeasure::new(
            points
                .iter()
                .zip(&base)
                .zip(c)
                .map(|((x, &b), &ci)| (b + sign * t * ci, x.clone()))
                .collect(),
        )
    };
    Ok((build(1.0)?, build(-1.0)?))
}

/// `p_j = q_j² / q_j(x_j)²` with `q_j ∈ span B` vanishing at every `x_i`, `i ≠ j`.
pub fn separating_family(basis_b: &Basis, points: &[Vec<f64>]) -> Result<Vec<Polynomial>> {
    let m = moment_matrix(basis_b, points)?;
    let r = rank(&m, RANK_RTOL);
    if r < points.len() {
        let mut dep = kernel(&m.transpose(), RANK_RTOL)
            .into_iter()
            .next()
            .expect("rank deficiency leaves a null vector");
        canonical_sign(&mut dep);
        return Err(Error::SeparationFails { dependency: dep });
    }
    (0..points.len())
        .map(|j| {
            let mj = m.without_row(j);
            let ker = kernel(&mj, RANK_RTOL);
            let sj = m.row(j).to_vec();
            // projection of s_B(x_j) onto ker M_j maximizes |q(x_j)| on the unit sphere
            let mut q = vec![0.0; sj.len()];
            for k in &ker {
                let c = dot(&sj, k);
                q.iter_mut().zip(k).for_each(|(a, b)| *a += c * b);
            }
            let n = norm(&q);
            let q: Vec<f64> = q.iter().map(|x| x / n).collect();
            let qp = basis_b.combine(&q)?;
            let qj = qp.eval(&points[j])?;
            Ok((&qp * &qp).scale(1.0 / (qj * qj)))
        })
        .collect()
}

/// Rank of the rows `s_F(x)`, `x` in `points`.
pub fn point_rank(basis: &Basis, points: &[Vec<f64>]) -> Result<usize> {
    Ok(rank(&moment_matrix(basis, points)?, RANK_RTOL))
}
