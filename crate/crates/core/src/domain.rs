//! The ambient set X and point-set utilities.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polynomial::univariate::{self, ZERO_RTOL};
use crate::polynomial::Polynomial;

/// Tolerance for identifying two points.
pub const MATCH_TOL: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Domain {
    RealLine,
    RealSpace {
        dim: usize,
    },
    FinitePoints {
        points: Vec<Vec<f64>>,
        #[serde(default = "default_tol")]
        tol: f64,
    },
    Grid {
        lo: Vec<f64>,
        hi: Vec<f64>,
        resolution: Vec<usize>,
    },
}

fn default_tol() -> f64 {
    MATCH_TOL
}

impl Domain {
    /// `ℝⁿ`; `n = 1` is the real line.
    pub fn space(n: usize) -> Domain {
        if n == 1 {
            Domain::RealLine
        } else {
            Domain::RealSpace { dim: n }
        }
    }
}

impl Domain {
    pub fn finite(points: Vec<Vec<f64>>) -> Result<Domain> {
        Domain::finite_with_tol(points, MATCH_TOL)
    }

    pub fn finite_with_tol(points: Vec<Vec<f64>>, tol: f64) -> Result<Domain> {
        let d = Domain::FinitePoints { points, tol };
        d.validate()?;
        Ok(d)
    }

    pub fn grid(lo: Vec<f64>, hi: Vec<f64>, resolution: Vec<usize>) -> Result<Domain> {
        let d = Domain::Grid { lo, hi, resolution };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Domain::RealLine => Ok(()),
            Domain::RealSpace { dim } if *dim == 0 => {
                Err(Error::InvalidDomain("dimension must be positive".into()))
            }
            Domain::RealSpace { .. } => Ok(()),
            Domain::FinitePoints { points, tol } => {
                if points.is_empty() {
                    return Err(Error::InvalidDomain("no points".into()));
                }
                let n = points[0].len();
                if n == 0 || points.iter().any(|p| p.len() != n) {
                    return Err(Error::InvalidDomain("points of unequal dimension".into()));
                }
                if points.iter().flatten().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidDomain("non-finite coordinate".into()));
                }
                let mut sorted = points.clone();
                sort_points(&mut sorted);
                if sorted.windows(2).any(|w| same_point(&w[0], &w[1], *tol)) {
                    return Err(Error::InvalidDomain("duplicate points".into()));
                }
                Ok(())
            }
            Domain::Grid { lo, hi, resolution } => {
                if lo.is_empty() || lo.len() != hi.len() || lo.len() != resolution.len() {
                    return Err(Error::InvalidDomain("grid axes disagree".into()));
                }
                if resolution.iter().any(|&r| r < 2) {
                    return Err(Error::InvalidDomain("grid resolution must be ≥ 2".into()));
                }
                if lo.iter().zip(hi).any(|(a, b)| !(a < b) || !a.is_finite() || !b.is_finite()) {
                    return Err(Error::InvalidDomain("grid box must have lo < hi".into()));
                }
                Ok(())
            }
        }
    }

    /// Dimension of the ambient space, when the domain fixes it.
    pub fn num_vars(&self) -> Option<usize> {
        match self {
            Domain::RealLine => Some(1),
            Domain::RealSpace { dim } => Some(*dim),
            Domain::FinitePoints { points, .. } => points.first().map(|p| p.len()),
            Domain::Grid { lo, .. } => Some(lo.len()),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Domain::FinitePoints { .. } | Domain::Grid { .. })
    }

    pub fn match_tol(&self) -> f64 {
        match self {
            Domain::FinitePoints { tol, .. } => *tol,
            _ => MATCH_TOL,
        }
    }

    /// The points of a finite domain in lexicographic order; grids include
    /// the box endpoints.
    pub fn points(&self) -> Option<Vec<Vec<f64>>> {
        match self {
            Domain::FinitePoints { points, .. } => {
                let mut p = points.clone();
                sort_points(&mut p);
                Some(p)
            }
            Domain::Grid { lo, hi, resolution } => {
                let axes: Vec<Vec<f64>> = lo
                    .iter()
                    .zip(hi)
                    .zip(resolution)
                    .map(|((&a, &b), &r)| {
                        (0..r)
                            .map(|i| {
                                if i + 1 == r {
                                    b
                                } else {
                                    a + (b - a) * i as f64 / (r - 1) as f64
                                }
                            })
                            .collect()
                    })
                    .collect();
                let mut out = vec![Vec::new()];
                for axis in &axes {
                    out = out
                        .into_iter()
                        .flat_map(|p: Vec<f64>| {
                            axis.iter().map(move |&c| {
                                let mut q = p.clone();
                                q.push(c);
                                q
                            })
                        })
                        .collect();
                }
                Some(out)
            }
            _ => None,
        }
    }

    pub(crate) fn check_dim(&self, n: usize) -> Result<()> {
        match self.num_vars() {
            Some(k) if k != n => Err(Error::DimensionMismatch {
                expected: n,
                found: k,
            }),
            _ => Ok(()),
        }
    }
}

/// A subset of the domain: either all of it or finitely many points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSet {
    All,
    Points(Vec<Vec<f64>>),
}

impl PointSet {
    /// Sorted, deduplicated at `tol`.
    pub fn from_points(mut points: Vec<Vec<f64>>, tol: f64) -> PointSet {
        sort_points(&mut points);
        let mut out: Vec<Vec<f64>> = Vec::with_capacity(points.len());
        for p in points {
            if !out.iter().any(|q| same_point(q, &p, tol)) {
                out.push(p);
            }
        }
        PointSet::Points(out)
    }

    pub fn is_all(&self) -> bool {
        matches!(self, PointSet::All)
    }

    pub fn points(&self) -> Option<&[Vec<f64>]> {
        match self {
            PointSet::All => None,
            PointSet::Points(p) => Some(p),
        }
    }

    /// `None` for the whole domain.
    pub fn len(&self) -> Option<usize> {
        self.points().map(|p| p.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        match self {
            PointSet::All => true,
            PointSet::Points(p) => p.iter().any(|q| same_point(q, x, tol)),
        }
    }

    pub fn is_subset_of(&self, other: &PointSet, tol: f64) -> bool {
        match (self, other) {
            (_, PointSet::All) => true,
            (PointSet::All, PointSet::Points(_)) => false,
            (PointSet::Points(a), _) => a.iter().all(|x| other.contains(x, tol)),
        }
    }

    pub fn same_as(&self, other: &PointSet, tol: f64) -> bool {
        self.is_subset_of(other, tol) && other.is_subset_of(self, tol)
    }
}

pub(crate) fn same_point(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len()
        && a
            .iter()
            .zip(b)
            .all(|(x, y)| (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs())))
}

pub(crate) fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    a.len().cmp(&b.len())
}

pub(crate) fn sort_points(points: &mut [Vec<f64>]) {
    points.sort_by(|a, b| lex_cmp(a, b));
}

/// `|g(x)| ≤ tol·(max|c| + Σ|c_α x^α|)`.
pub(crate) fn vanishes_at(g: &Polynomial, x: &[f64], tol: f64) -> bool {
    g.eval_unchecked(x).abs() <= tol * (g.max_abs_coefficient() + g.eval_scale(x))
}

/// Common zeros of `g` on `dom`.
///
/// On the real line the zeros of the first polynomial are located (with
/// multiplicity-aware polishing) and filtered by the others. On finite
/// domains a point qualifies when every `g_i` vanishes there relative to its
/// coefficient scale. `tol` is that relative tolerance.
pub fn intersect_zero_set(g: &[Polynomial], dom: &Domain, tol: f64) -> Result<PointSet> {
    if g.is_empty() {
        return Ok(PointSet::All);
    }
    let n = g[0].num_vars();
    if let Some(p) = g.iter().find(|p| p.num_vars() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.num_vars(),
        });
    }
    dom.check_dim(n)?;
    let live: Vec<&Polynomial> = g.iter().filter(|p| !p.is_zero()).collect();
    match dom {
        Domain::RealSpace { dim } => Err(Error::Undecidable { num_vars: *dim }),
        Domain::RealLine => {
            let Some(first) = live.first() else {
                return Ok(PointSet::All);
            };
            let c = first.univariate_coefficients()?;
            let zeros = univariate::near_zeros(&c, tol);
            let pts = zeros
                .into_iter()
                .filter(|&z| live[1..].iter().all(|p| vanishes_at(p, &[z], tol)))
                .map(|z| vec![z])
                .collect();
            Ok(PointSet::from_points(pts, MATCH_TOL))
        }
        _ => {
            let pts = dom
                .points()
                .expect("finite domain")
                .into_iter()
                .filter(|x| live.iter().all(|p| vanishes_at(p, x, tol)))
                .collect();
            Ok(PointSet::from_points(pts, dom.match_tol()))
        }
    }
}

/// [`intersect_zero_set`] at the default relative tolerance.
pub fn zero_set(g: &[Polynomial], dom: &Domain) -> Result<PointSet> {
    intersect_zero_set(g, dom, ZERO_RTOL)
}
