//! Boundary structure of the moment cone at a moment sequence `s`.
//!
//! `Im(s)` is the range of the Jacobian of the atomic moment map at a
//! representing measure, `d(s)` its codimension, and the kernel polynomials
//! `g_i = ⟨s_F(·), g̃_i⟩` come from an orthonormal basis `g̃_i` of `Im(s)^⊥`.
//! Nonnegative annihilators are searched for inside `span{g_i}`:
//!
//! * `d = 1`: `±g_1`.
//! * `d = 2` on the real line: the feasible directions form an arc of the
//!   circle `θ ↦ cos θ g_1 + sin θ g_2`. A point of the arc is found by cutting
//!   planes (each infeasible direction yields a point `x` with `h(x) < 0`, which
//!   removes a half-circle), and its endpoints by bisection.
//! * `d ≥ 3` on the real line: seeded directions on the sphere, falling back
//!   to cutting planes; this is a heuristic and flagged as such.
//! * finite domains: for each point an LP decides whether some element of the
//!   cone is positive there.
//!
//! `Im(s)` is a union over all representing measures, so a measure with few
//! atoms may see a kernel that is too large. Annihilators are still searched
//! for in that kernel (every one of them lies in it), while the reported
//! defect comes from the given measure averaged with LP measures that charge
//! further candidate points: the points of `V_+` when it is finite, probe
//! points otherwise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::domain::{intersect_zero_set, same_point, vanishes_at, Domain, PointSet, MATCH_TOL};
use crate::error::{Error, Result};
use crate::moment_map::{jacobian, moments, AtomicMeasure, Basis};
use crate::numeric::{
    cokernel, dot, lp_feasible, lp_solve, max_abs, norm, range_basis, LpOutcome, LpProblem, Matrix,
    RANK_RTOL,
};
use crate::polynomial::univariate::{abs_horner, extrema, horner, nonneg_witness_at, ZERO_RTOL};
use crate::polynomial::{univariate_real_roots, Polynomial};

/// Distance (relative) within which a computed zero is replaced by an atom.
const SNAP_TOL: f64 = 1e-6;
/// LP weights below this fraction of the largest atom weight count as zero.
const CHARGE_RTOL: f64 = 1e-8;
/// Feasible arcs narrower than this are reported as a single ray.
const RAY_WIDTH: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    /// Angular bisection tolerance for `d = 2`.
    pub lambda_tol: f64,
    /// Sphere samples for `d ≥ 3`.
    pub sphere_samples: usize,
    /// Relative tolerance for zeros on finite domains and the real line.
    pub zero_tol: f64,
    /// Relative singular-value cutoff.
    pub rank_rtol: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            lambda_tol: 1e-9,
            sphere_samples: 512,
            zero_tol: ZERO_RTOL,
            rank_rtol: RANK_RTOL,
            seed: 0x6d6f_6d65,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Inner,
    Boundary,
    ZeroFunctional,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImageDefect {
    pub image_basis: Vec<Vec<f64>>,
    pub kernel_basis: Vec<Vec<f64>>,
    pub defect: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnnihilatorSearch {
    pub annihilators: Vec<Polynomial>,
    /// Coefficient vectors of the annihilators in the basis.
    pub vectors: Vec<Vec<f64>>,
    /// Set when the search may have missed elements.
    pub heuristic: bool,
    /// On finite domains the points where every cone element vanishes.
    pub v_plus: Option<PointSet>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConeReport {
    pub classification: Classification,
    pub moments: Vec<f64>,
    pub defect: usize,
    pub image_basis: Vec<Vec<f64>>,
    pub kernel_basis: Vec<Vec<f64>>,
    pub kernel_polynomials: Vec<Polynomial>,
    pub annihilators: Vec<Polynomial>,
    pub generator: Option<Polynomial>,
    pub v_plus: PointSet,
    pub i_set: PointSet,
    pub w_equals_vplus: Option<bool>,
    pub heuristic: bool,
}

impl ConeReport {
    /// Records whether the atom set `W` equals `V_+`.
    pub fn set_atoms(&mut self, w: &PointSet) {
        self.w_equals_vplus = Some(w.same_as(&self.v_plus, MATCH_TOL));
    }
}

pub fn image_and_defect(basis: &Basis, mu: &AtomicMeasure) -> Result<ImageDefect> {
    image_and_defect_with(basis, std::slice::from_ref(mu), RANK_RTOL)
}

/// Several representing measures are merged with weights `1/ℓ` first.
pub fn image_and_defect_with(
    basis: &Basis,
    measures: &[AtomicMeasure],
    rtol: f64,
) -> Result<ImageDefect> {
    let l = measures.len().max(1) as f64;
    let mut merged = AtomicMeasure::empty();
    for mu in measures {
        if !mu.is_empty() {
            merged = merged.union(&mu.scaled(1.0 / l)?);
        }
    }
    if merged.is_empty() {
        return Err(Error::EmptyMeasure);
    }
    let d = jacobian(basis, &merged)?;
    let cols: Vec<usize> = (0..d.cols()).filter(|&j| norm(&d.column(j)) > 0.0).collect();
    let mut dn = d.select_columns(&cols);
    for (k, &j) in cols.iter().enumerate() {
        let c = norm(&d.column(j));
        for i in 0..dn.rows() {
            dn.set(i, k, dn.get(i, k) / c);
        }
    }
    let image_basis = range_basis(&dn, rtol);
    let kernel_basis = cokernel(&dn, rtol);
    let defect = basis.len() - image_basis.len();
    debug_assert_eq!(defect, kernel_basis.len());
    Ok(ImageDefect {
        image_basis,
        kernel_basis,
        defect,
    })
}

/// Points spread over a box around the atoms.
pub fn probe_points(mu: &AtomicMeasure, count: usize) -> Vec<Vec<f64>> {
    let pts = mu.points();
    let n = pts[0].len();
    let center: Vec<f64> = (0..n)
        .map(|i| pts.iter().map(|p| p[i]).sum::<f64>() / pts.len() as f64)
        .collect();
    let radius = pts
        .iter()
        .map(|p| p.iter().zip(&center).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
        .fold(0.0, f64::max)
        + 1.0;
    (0..count)
        .map(|k| {
            (0..n)
                .map(|i| {
                    let phase = (k as f64 + 1.0) * (i as f64 + 1.0) * 0.618_033_988_75;
                    center[i] + radius * (2.0 * phase.fract() - 1.0) * 1.1
                })
                .collect()
        })
        .collect()
}

/// `Im(s)` at `μ` averaged with representing measures charging the candidates.
pub fn image_of_sequence(
    basis: &Basis,
    mu: &AtomicMeasure,
    candidates: &[Vec<f64>],
    rtol: f64,
) -> Result<ImageDefect> {
    let mu = mu.merged(1e-12);
    let mut measures = vec![mu.clone()];
    let mut id = image_and_defect_with(basis, &measures, rtol)?;
    if id.defect == 0 {
        return Ok(id);
    }
    let s = moments(basis, &mu)?.values;
    let mut pts = mu.points();
    let first = pts.len();
    for c in candidates {
        if !pts.iter().any(|p| same_point(p, c, MATCH_TOL)) {
            pts.push(c.clone());
        }
    }
    let cols = pts
        .iter()
        .map(|x| crate::moment_map::moment_vector(basis, x))
        .collect::<Result<Vec<_>>>()?;
    let a = Matrix::from_columns(&cols)?;
    let floor = CHARGE_RTOL * max_abs(&mu.weights());
    let mut charged = vec![false; pts.len()];
    for j in first..pts.len() {
        if charged[j] {
            continue;
        }
        let mut c = vec![0.0; pts.len()];
        c[j] = 1.0;
        let w = match lp_solve(&LpProblem::new(a.clone(), s.clone())?.maximize(c)?)? {
            LpOutcome::Optimal { x, .. } | LpOutcome::Unbounded { x } => x,
            LpOutcome::Infeasible => continue,
        };
        if w[j] <= floor {
            continue;
        }
        let atoms: Vec<(f64, Vec<f64>)> = pts
            .iter()
            .zip(&w)
            .enumerate()
            .filter(|(_, (_, &wk))| wk > floor)
            .map(|(k, (x, &wk))| {
                charged[k] = true;
                (wk, x.clone())
            })
            .collect();
        measures.push(AtomicMeasure::new(atoms)?);
        id = image_and_defect_with(basis, &measures, rtol)?;
        if id.defect == 0 {
            break;
        }
    }
    Ok(id)
}

/// `g_i = Σ_j (g̃_i)_j f_j`.
pub fn kernel_polynomials(basis: &Basis, kernel_basis: &[Vec<f64>]) -> Result<Vec<Polynomial>> {
    kernel_basis.iter().map(|v| basis.combine(v)).collect()
}

fn combine_rows(rows: &[Vec<f64>], u: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; rows.first().map_or(0, |r| r.len())];
    for (r, &c) in rows.iter().zip(u) {
        out.iter_mut().zip(r).for_each(|(o, x)| *o += c * x);
    }
    out
}

/// Drops leading coefficients that are negligible next to the largest one.
fn trim_relative(mut c: Vec<f64>) -> Vec<f64> {
    let m = max_abs(&c);
    while c.len() > 1 && c.last().unwrap().abs() <= 1e-12 * m {
        c.pop();
    }
    c
}

/// Line-search nonnegativity threshold `rel·Σ|c_k||x|^k + abs·max|c|`. The
/// small absolute part keeps dips near a high-order zero at the origin visible.
const LINE_REL_TOL: f64 = 1e-9;
const LINE_ABS_TOL: f64 = 1e-14;

/// Search state on the real line: dense coefficients of `g_1, …, g_d`.
struct LineSearch {
    dense: Vec<Vec<f64>>,
}

impl LineSearch {
    fn new(kps: &[Polynomial]) -> Result<LineSearch> {
        let mut dense = kps
            .iter()
            .map(|g| g.univariate_coefficients())
            .collect::<Result<Vec<_>>>()?;
        let len = dense.iter().map(|c| c.len()).max().unwrap_or(1);
        dense.iter_mut().for_each(|c| c.resize(len, 0.0));
        Ok(LineSearch { dense })
    }

    fn poly(&self, u: &[f64]) -> Vec<f64> {
        trim_relative(combine_rows(&self.dense, u))
    }

    /// `None` when `Σ u_i g_i ≥ 0` within tolerance, else a violating point.
    fn witness(&self, u: &[f64]) -> Option<f64> {
        let c = self.poly(u);
        if c.iter().all(|&x| x == 0.0) {
            return None;
        }
        nonneg_witness_at(&c, LINE_REL_TOL, LINE_ABS_TOL)
    }

    /// Moves `u` (unit) so that `Σ u_i g_i` vanishes exactly at its near-zero
    /// extremum of largest `|g(x)|`, skipping common zeros of all `g_i`.
    /// Returns `u` unchanged when no such point exists or the move breaks
    /// feasibility.
    fn polish(&self, u: &[f64]) -> Vec<f64> {
        let f = self.poly(u);
        let mut best: Option<(f64, Vec<f64>)> = None;
        for c in extrema(&f) {
            let v = self.values(c);
            let nv = norm(&v);
            let scale: f64 = self.dense.iter().map(|g| abs_horner(g, c)).sum();
            if nv <= 1e-6 * scale || horner(&f, c).abs() > 1e-5 * abs_horner(&f, c) {
                continue;
            }
            if best.as_ref().map_or(true, |(n, _)| nv > *n) {
                best = Some((nv, v));
            }
        }
        let Some((nv, v)) = best else {
            return u.to_vec();
        };
        let t = dot(u, &v) / (nv * nv);
        let w: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a - t * b).collect();
        let n = norm(&w);
        let w: Vec<f64> = w.iter().map(|x| x / n).collect();
        let moved = u.iter().zip(&w).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if moved <= 1e-4 && self.witness(&w).is_none() {
            w
        } else {
            u.to_vec()
        }
    }

    fn values(&self, x: f64) -> Vec<f64> {
        self.dense
            .iter()
            .map(|c| c.iter().rev().fold(0.0, |acc, &k| acc * x + k))
            .collect()
    }
}

fn angle(theta: f64) -> [f64; 2] {
    [theta.cos(), theta.sin()]
}

/// The feasible arc `[lo, hi]` for `d = 2`, if any.
fn feasible_arc(ls: &LineSearch, tol: f64) -> Option<(f64, f64)> {
    use std::f64::consts::PI;
    let feasible = |t: f64| ls.witness(&angle(t)).is_none();
    let mut found = None;
    match ls.witness(&angle(0.0)) {
        None => found = Some(0.0),
        Some(x0) => {
            let cut = |x: f64, mid: f64| {
                let v = ls.values(x);
                let phi = v[1].atan2(v[0]);
                let phi = phi + 2.0 * PI * ((mid - phi) / (2.0 * PI)).round();
                (phi - PI / 2.0, phi + PI / 2.0)
            };
            let (mut lo, mut hi) = cut(x0, 0.0);
            for _ in 0..200 {
                if hi - lo < 1e-15 {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                match ls.witness(&angle(mid)) {
                    None => {
                        found = Some(mid);
                        break;
                    }
                    Some(x) => {
                        let (a, b) = cut(x, mid);
                        lo = lo.max(a);
                        hi = hi.min(b);
                        if lo > hi {
                            return None;
                        }
                    }
                }
            }
        }
    }
    let tf = found?;
    let bisect = |mut inside: f64, mut outside: f64| {
        for _ in 0..200 {
            if (inside - outside).abs() <= tol {
                break;
            }
            let mid = 0.5 * (inside + outside);
            if feasible(mid) {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        inside
    };
    if feasible(tf + PI) {
        // both h and -h nonnegative: the kernel direction vanishes on the domain
        return Some((tf, tf));
    }
    Some((bisect(tf, tf - PI), bisect(tf, tf + PI)))
}

/// Directions `u` maximizing `t` with `⟨u, w_i⟩ ≥ t` over unit-normalized
/// witness rows and `|u_j| ≤ 1`.
fn central_direction(rows: &[Vec<f64>], d: usize) -> Result<Option<(Vec<f64>, f64)>> {
    // variables: u+ (d), u- (d), t, slack_i (rows), box slacks (2d)
    let nr = rows.len();
    let nv = 2 * d + 1 + nr + 2 * d;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (i, w) in rows.iter().enumerate() {
        let mut row = vec![0.0; nv];
        for j in 0..d {
            row[j] = w[j];
            row[d + j] = -w[j];
        }
        row[2 * d] = -1.0;
        row[2 * d + 1 + i] = -1.0;
        a.push(row);
        b.push(0.0);
    }
    for j in 0..2 * d {
        let mut row = vec![0.0; nv];
        row[j] = 1.0;
        row[2 * d + 1 + nr + j] = 1.0;
        a.push(row);
        b.push(1.0);
    }
    let mut c = vec![0.0; nv];
    c[2 * d] = 1.0;
    let p = LpProblem::new(Matrix::from_rows(&a)?, b)?.maximize(c)?;
    Ok(match lp_solve(&p)? {
        LpOutcome::Optimal { x, value } => {
            let u: Vec<f64> = (0..d).map(|j| x[j] - x[d + j]).collect();
            Some((u, value))
        }
        _ => None,
    })
}

fn sphere_search(ls: &LineSearch, d: usize, cfg: &SearchConfig) -> Result<Option<Vec<f64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let samples: Vec<Vec<f64>> = (0..cfg.sphere_samples)
        .map(|_| unit_sphere(&mut rng, d))
        .collect();
    let verdicts: Vec<Option<f64>> = samples.par_iter().map(|u| ls.witness(u)).collect();
    let feasible: Vec<&Vec<f64>> = samples
        .iter()
        .zip(&verdicts)
        .filter(|(_, w)| w.is_none())
        .map(|(u, _)| u)
        .collect();
    if !feasible.is_empty() {
        let mut mean = vec![0.0; d];
        for u in &feasible {
            mean.iter_mut().zip(u.iter()).for_each(|(m, x)| *m += x);
        }
        let n = norm(&mean);
        if n > 0.0 {
            let mean: Vec<f64> = mean.iter().map(|x| x / n).collect();
            if ls.witness(&mean).is_none() {
                return Ok(Some(mean));
            }
        }
        return Ok(Some(feasible[0].clone()));
    }
    // cutting planes from the collected witnesses
    let unit = |x: f64| {
        let v = ls.values(x);
        let n = norm(&v);
        v.iter().map(|c| c / n.max(f64::MIN_POSITIVE)).collect::<Vec<_>>()
    };
    let mut rows: Vec<Vec<f64>> = verdicts.iter().flatten().map(|&x| unit(x)).collect();
    rows.dedup();
    for _ in 0..200 {
        let Some((u, t)) = central_direction(&rows, d)? else {
            return Ok(None);
        };
        if t <= 1e-12 {
            return Ok(None);
        }
        match ls.witness(&u) {
            None => return Ok(Some(u)),
            Some(x) => rows.push(unit(x)),
        }
    }
    Ok(None)
}

fn normalized(v: &[f64]) -> Vec<f64> {
    let m = max_abs(v);
    v.iter().map(|x| x / m).collect()
}

/// Exact search over finite point sets.
fn finite_search(
    basis: &Basis,
    kernel_basis: &[Vec<f64>],
    kps: &[Polynomial],
    points: &[Vec<f64>],
    cfg: &SearchConfig,
) -> Result<AnnihilatorSearch> {
    let d = kps.len();
    let mut zero = vec![false; points.len()];
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut row_of: Vec<Option<usize>> = vec![None; points.len()];
    for (k, y) in points.iter().enumerate() {
        if kps.iter().all(|g| vanishes_at(g, y, cfg.zero_tol)) {
            zero[k] = true;
            continue;
        }
        let v: Vec<f64> = kps.iter().map(|g| g.eval_unchecked(y)).collect();
        let n = norm(&v);
        row_of[k] = Some(rows.len());
        rows.push(v.iter().map(|c| c / n).collect());
    }
    let nr = rows.len();
    let mut excluded = vec![false; points.len()];
    let mut found: Vec<Vec<f64>> = Vec::new();
    for k in 0..points.len() {
        let Some(r) = row_of[k] else { continue };
        if excluded[k] {
            continue;
        }
        // variables: u+ (d), u- (d), slack per row (nr), t
        let nv = 2 * d + nr + 1;
        let mut a = Vec::with_capacity(nr + 1);
        let mut b = Vec::with_capacity(nr + 1);
        for (i, w) in rows.iter().enumerate() {
            let mut row = vec![0.0; nv];
            for j in 0..d {
                row[j] = w[j];
                row[d + j] = -w[j];
            }
            row[2 * d + i] = -1.0;
            a.push(row);
            b.push(0.0);
        }
        let mut row = vec![0.0; nv];
        for j in 0..d {
            row[j] = rows[r][j];
            row[d + j] = -rows[r][j];
        }
        row[nv - 1] = -1.0;
        a.push(row);
        b.push(1.0);
        let (ok, x) = lp_feasible(&LpProblem::new(Matrix::from_rows(&a)?, b)?)?;
        if !ok {
            continue;
        }
        let x = x.expect("feasible witness");
        let u: Vec<f64> = (0..d).map(|j| x[j] - x[d + j]).collect();
        for (kk, rr) in row_of.iter().enumerate() {
            if let Some(rr) = rr {
                if dot(&rows[*rr], &u) > 1e-7 * norm(&u) {
                    excluded[kk] = true;
                }
            }
        }
        found.push(u);
    }
    let v_plus: Vec<Vec<f64>> = points
        .iter()
        .enumerate()
        .filter(|&(k, _)| zero[k] || !excluded[k])
        .map(|(_, y)| y.clone())
        .collect();
    let vectors: Vec<Vec<f64>> = found
        .iter()
        .map(|u| normalized(&combine_rows(kernel_basis, u)))
        .collect();
    let annihilators = vectors
        .iter()
        .map(|v| basis.combine(v))
        .collect::<Result<Vec<_>>>()?;
    Ok(AnnihilatorSearch {
        annihilators,
        vectors,
        heuristic: false,
        v_plus: Some(PointSet::from_points(v_plus, MATCH_TOL)),
    })
}

/// Nonnegative elements of `span{g_i}` (all of which are annihilated by `L_s`).
pub fn find_nonneg_annihilators(
    basis: &Basis,
    mu: &AtomicMeasure,
    dom: &Domain,
    cfg: &SearchConfig,
) -> Result<AnnihilatorSearch> {
    let id = image_and_defect_with(basis, std::slice::from_ref(mu), cfg.rank_rtol)?;
    search_kernel(basis, &id.kernel_basis, dom, cfg)
}

/// The annihilator search for a given orthonormal basis of `Im(s)^⊥`.
pub fn search_kernel(
    basis: &Basis,
    kernel_basis: &[Vec<f64>],
    dom: &Domain,
    cfg: &SearchConfig,
) -> Result<AnnihilatorSearch> {
    dom.check_dim(basis.num_vars())?;
    let d = kernel_basis.len();
    let none = |heuristic| AnnihilatorSearch {
        annihilators: Vec::new(),
        vectors: Vec::new(),
        heuristic,
        v_plus: None,
    };
    if d == 0 {
        return Ok(none(false));
    }
    let kps = kernel_polynomials(basis, kernel_basis)?;
    let to_result = |us: Vec<Vec<f64>>, heuristic: bool| -> Result<AnnihilatorSearch> {
        let vectors: Vec<Vec<f64>> = us
            .iter()
            .map(|u| normalized(&combine_rows(kernel_basis, u)))
            .collect();
        let annihilators = vectors
            .iter()
            .map(|v| basis.combine(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(AnnihilatorSearch {
            annihilators,
            vectors,
            heuristic,
            v_plus: None,
        })
    };
    match dom {
        Domain::RealSpace { dim } if *dim >= 2 => Err(Error::Undecidable { num_vars: *dim }),
        Domain::FinitePoints { .. } | Domain::Grid { .. } => {
            let pts = dom.points().expect("finite domain");
            finite_search(basis, kernel_basis, &kps, &pts, cfg)
        }
        _ => {
            let ls = LineSearch::new(&kps)?;
            match d {
                1 => {
                    let us: Vec<Vec<f64>> = [vec![1.0], vec![-1.0]]
                        .into_iter()
                        .filter(|u| ls.witness(u).is_none())
                        .take(1)
                        .collect();
                    to_result(us, false)
                }
                2 => match feasible_arc(&ls, cfg.lambda_tol.min(1e-10)) {
                    None => to_result(Vec::new(), false),
                    Some((lo, hi)) if hi - lo <= RAY_WIDTH => {
                        to_result(vec![ls.polish(&angle(0.5 * (lo + hi)))], false)
                    }
                    Some((lo, hi)) => to_result(
                        vec![ls.polish(&angle(lo)), ls.polish(&angle(hi))],
                        false,
                    ),
                },
                _ => {
                    let u = sphere_search(&ls, d, cfg)?;
                    to_result(u.into_iter().collect(), true)
                }
            }
        }
    }
}

/// Sum of a maximal linearly independent subset (coefficient-wise) of the
/// annihilators, each scaled to unit max-coefficient.
pub fn exposed_face_generator(annihilators: &[Polynomial]) -> Result<Polynomial> {
    let Some(first) = annihilators.first() else {
        return Err(Error::Invalid(
            "no annihilators: the sequence is an inner point".into(),
        ));
    };
    let mut kept: Vec<Polynomial> = Vec::new();
    for p in annihilators {
        if p.is_zero() {
            continue;
        }
        let mut trial = kept.clone();
        trial.push(p.scale(1.0 / p.max_abs_coefficient()));
        if coefficient_rank(&trial) == trial.len() {
            kept = trial;
        }
    }
    Ok(kept
        .iter()
        .fold(Polynomial::zero(first.num_vars()), |acc, p| &acc + p))
}

fn coefficient_rank(ps: &[Polynomial]) -> usize {
    let exps: std::collections::BTreeSet<&Vec<u32>> =
        ps.iter().flat_map(|p| p.terms().map(|(e, _)| e)).collect();
    let rows: Vec<Vec<f64>> = ps
        .iter()
        .map(|p| exps.iter().map(|e| p.coefficient(e)).collect())
        .collect();
    match Matrix::from_rows(&rows) {
        Ok(m) => crate::numeric::rank(&m, RANK_RTOL),
        Err(_) => 0,
    }
}

/// `I(s)`: common zeros of the kernel polynomials on the domain.
pub fn compute_i_set(
    basis: &Basis,
    kernel_basis: &[Vec<f64>],
    dom: &Domain,
    tol: f64,
) -> Result<PointSet> {
    if kernel_basis.is_empty() {
        return Ok(PointSet::All);
    }
    let kps = kernel_polynomials(basis, kernel_basis)?;
    intersect_zero_set(&kps, dom, tol)
}

/// Replaces computed zeros lying next to an atom by the atom itself.
fn snap(set: PointSet, atoms: &[Vec<f64>]) -> PointSet {
    match set {
        PointSet::All => PointSet::All,
        PointSet::Points(pts) => PointSet::from_points(
            pts.into_iter()
                .map(|x| {
                    atoms
                        .iter()
                        .find(|a| same_point(a, &x, SNAP_TOL))
                        .cloned()
                        .unwrap_or(x)
                })
                .collect(),
            MATCH_TOL,
        ),
    }
}

/// Inner/boundary classification with the full geometric report.
pub fn classify(
    basis: &Basis,
    mu: &AtomicMeasure,
    dom: &Domain,
    cfg: &SearchConfig,
) -> Result<ConeReport> {
    dom.check_dim(basis.num_vars())?;
    let s = moments(basis, mu)?.values;
    if mu.is_empty() || s.iter().all(|&v| v == 0.0) {
        return Ok(ConeReport {
            classification: Classification::ZeroFunctional,
            moments: s,
            defect: basis.len(),
            image_basis: Vec::new(),
            kernel_basis: Vec::new(),
            kernel_polynomials: Vec::new(),
            annihilators: Vec::new(),
            generator: None,
            v_plus: PointSet::Points(Vec::new()),
            i_set: PointSet::Points(Vec::new()),
            w_equals_vplus: None,
            heuristic: false,
        });
    }
    let local = image_and_defect_with(basis, std::slice::from_ref(mu), cfg.rank_rtol)?;
    let search = search_kernel(basis, &local.kernel_basis, dom, cfg)?;
    let atoms = mu.points();
    let generator = if search.annihilators.is_empty() {
        None
    } else {
        Some(exposed_face_generator(&search.annihilators)?)
    };
    let v_plus = match (&generator, &search.v_plus) {
        (None, _) => PointSet::All,
        (Some(_), Some(v)) => v.clone(),
        (Some(g), None) => intersect_zero_set(std::slice::from_ref(g), dom, cfg.zero_tol)?,
    };
    let candidates = match (v_plus.points(), dom.points()) {
        (Some(v), _) => v.to_vec(),
        (None, Some(d)) => d,
        (None, None) => {
            let mut c = probe_points(mu, 3 * basis.len());
            if matches!(dom, Domain::RealLine) {
                // neighbours keep the candidate cone from having faces through a lone atom
                for x in &atoms {
                    for h in [-1e-2, 1e-2, -1e-3, 1e-3] {
                        c.push(vec![x[0] + h * (1.0 + x[0].abs())]);
                    }
                }
                // other representing measures must charge where some g_i changes sign
                for g in kernel_polynomials(basis, &local.kernel_basis)? {
                    let f = g.univariate_coefficients()?;
                    c.extend(extrema(&f).into_iter().map(|x| vec![x]));
                    let roots = univariate_real_roots(&g, cfg.zero_tol)?.locations();
                    c.extend(roots.into_iter().map(|x| vec![x]));
                }
            }
            c
        }
    };
    let id = image_of_sequence(basis, mu, &candidates, cfg.rank_rtol)?;
    let kps = kernel_polynomials(basis, &id.kernel_basis)?;
    let i_set = compute_i_set(basis, &id.kernel_basis, dom, cfg.zero_tol)?;
    let heuristic = search.heuristic || (dom.num_vars().unwrap_or(1) >= 2 && id.defect > 0);
    Ok(ConeReport {
        classification: if id.defect == 0 {
            Classification::Inner
        } else {
            Classification::Boundary
        },
        moments: s,
        defect: id.defect,
        image_basis: id.image_basis,
        kernel_basis: id.kernel_basis,
        kernel_polynomials: kps,
        annihilators: search.annihilators,
        generator,
        v_plus: snap(v_plus, &atoms),
        i_set: snap(i_set, &atoms),
        w_equals_vplus: None,
        heuristic,
    })
}

/// Uniform direction on `S^{d-1}`.
fn unit_sphere<R: Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let n = norm(&v);
        if n > 1e-12 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}
