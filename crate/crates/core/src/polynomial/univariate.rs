//! Univariate real-root machinery.
//!
//! Two routes are provided and cross-checked in tests:
//!
//! * [`univariate_real_roots`]: square-free decomposition (Yun's algorithm with
//!   an approximate gcd), Sturm-sequence isolation of each square-free factor
//!   and bisection refinement. Multiplicities come from the decomposition level.
//! * [`near_zeros`]: sign changes found by derivative recursion, grouped into
//!   components of `{|f| ≤ t}` and polished onto the simple root of the
//!   appropriate derivative. This is the route used for zero sets of polynomials
//!   produced numerically (kernel combinations), whose multiple roots are only
//!   approximately multiple.
//!
//! Dense coefficient vectors are ascending: `c[k]` multiplies `x^k`.

use super::Polynomial;
use crate::domain::Domain;
use crate::error::{Error, Result};

/// Relative tolerance on remainders in the approximate gcd.
const GCD_RTOL: f64 = 1e-9;
/// Relative tolerance for "p(x) ≥ 0" on the real line.
pub const NONNEG_RTOL: f64 = 1e-9;
/// Relative tolerance for "p(x) = 0" at a located zero.
pub const ZERO_RTOL: f64 = 1e-8;
/// Grid/finite-point nonnegativity tolerance, relative to `1 + max|p|`.
pub const GRID_NONNEG_RTOL: f64 = 1e-8;
/// Default root clustering tolerance, scaled by `1 + |r|`.
pub const ROOT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub location: f64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootList {
    pub roots: Vec<Root>,
    pub tolerance: f64,
}

impl RootList {
    pub fn locations(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.location).collect()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.roots.iter().map(|r| r.multiplicity).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

// ---------------------------------------------------------------------------
// dense helpers

pub(crate) fn trim(mut v: Vec<f64>) -> Vec<f64> {
    while v.len() > 1 && *v.last().unwrap() == 0.0 {
        v.pop();
    }
    if v.is_empty() {
        v.push(0.0);
    }
    v
}

fn degree(v: &[f64]) -> usize {
    v.len().saturating_sub(1)
}

fn is_zero(v: &[f64]) -> bool {
    v.iter().all(|&c| c == 0.0)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, c| m.max(c.abs()))
}

fn normalized(v: &[f64]) -> Vec<f64> {
    let m = max_abs(v);
    if m == 0.0 {
        return v.to_vec();
    }
    v.iter().map(|c| c / m).collect()
}

fn monic(v: &[f64]) -> Vec<f64> {
    let lc = *v.last().unwrap();
    v.iter().map(|c| c / lc).collect()
}

pub(crate) fn derivative(v: &[f64]) -> Vec<f64> {
    if v.len() <= 1 {
        return vec![0.0];
    }
    v.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect()
}

fn nth_derivative(v: &[f64], n: usize) -> Vec<f64> {
    (0..n).fold(v.to_vec(), |acc, _| derivative(&acc))
}

pub(crate) fn horner(v: &[f64], x: f64) -> f64 {
    v.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// `Σ |c_k| |x|^k`.
pub(crate) fn abs_horner(v: &[f64], x: f64) -> f64 {
    let ax = x.abs();
    v.iter().rev().fold(0.0, |acc, &c| acc * ax + c.abs())
}

/// Quotient and remainder; `b` must have a nonzero leading coefficient.
fn divrem(a: &[f64], b: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let db = degree(b);
    let lb = b[db];
    if a.len() < b.len() {
        return (vec![0.0], a.to_vec());
    }
    let mut r = a.to_vec();
    let mut q = vec![0.0; a.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db] / lb;
        q[k] = c;
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= c * bj;
        }
        r[k + db] = 0.0;
    }
    r.truncate(db.max(1));
    (trim(q), trim(r))
}

/// Drops leading coefficients at or below `cut`.
fn strip_leading(mut v: Vec<f64>, cut: f64) -> Vec<f64> {
    while v.len() > 1 && v.last().unwrap().abs() <= cut {
        v.pop();
    }
    if v.len() == 1 && v[0].abs() <= cut {
        v[0] = 0.0;
    }
    v
}

/// Approximate monic gcd by the Euclidean algorithm on normalized remainders.
fn approx_gcd(a: &[f64], b: &[f64], rtol: f64) -> Vec<f64> {
    let mut a = normalized(&trim(a.to_vec()));
    let mut b = normalized(&trim(b.to_vec()));
    if is_zero(&b) {
        return monic(&a);
    }
    if is_zero(&a) {
        return monic(&b);
    }
    if degree(&a) < degree(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if degree(&b) == 0 {
            return vec![1.0];
        }
        let (_, r) = divrem(&a, &b);
        let r = strip_leading(r, rtol);
        if is_zero(&r) {
            return monic(&b);
        }
        a = b;
        b = normalized(&r);
    }
}

fn exact_quotient(a: &[f64], b: &[f64]) -> Vec<f64> {
    divrem(a, b).0
}

/// `f, gcd(f, f'), gcd(g_1, g_1'), …` down to a constant. A root of `f` has
/// multiplicity `k` exactly when it is a root of `g_0, …, g_{k-1}` only.
fn gcd_chain(f: &[f64]) -> Vec<Vec<f64>> {
    let mut chain = vec![normalized(&trim(f.to_vec()))];
    while chain.len() <= f.len() {
        let g = chain.last().unwrap();
        if degree(g) == 0 {
            chain.pop();
            break;
        }
        let next = approx_gcd(g, &derivative(g), GCD_RTOL);
        chain.push(normalized(&next));
    }
    chain
}

fn vanishes(g: &[f64], x: f64) -> bool {
    let scale = max_abs(g) * x.abs().max(1.0).powi(degree(g) as i32);
    horner(g, x).abs() <= 1e-7 * scale
}

/// Cauchy bound: every complex root satisfies `|z| < bound`.
pub(crate) fn cauchy_bound(v: &[f64]) -> f64 {
    let v = trim(v.to_vec());
    let lc = v[degree(&v)].abs();
    1.0 + v[..degree(&v)]
        .iter()
        .fold(0.0f64, |m, c| m.max(c.abs() / lc))
}

// ---------------------------------------------------------------------------
// Sturm isolation

struct SturmChain {
    chain: Vec<Vec<f64>>,
}

impl SturmChain {
    fn new(f: &[f64]) -> Self {
        let mut chain = vec![normalized(f), normalized(&derivative(f))];
        loop {
            let n = chain.len();
            if degree(&chain[n - 1]) == 0 {
                break;
            }
            let (_, r) = divrem(&chain[n - 2], &chain[n - 1]);
            let r = strip_leading(r, 1e-13);
            if is_zero(&r) {
                break;
            }
            chain.push(normalized(&r).iter().map(|c| -c).collect());
        }
        SturmChain { chain }
    }

    fn variations(&self, x: f64) -> usize {
        let mut count = 0;
        let mut last = 0.0f64;
        for p in &self.chain {
            let v = horner(p, x);
            if v == 0.0 {
                continue;
            }
            if last != 0.0 && (v > 0.0) != (last > 0.0) {
                count += 1;
            }
            last = v;
        }
        count
    }

    /// Distinct roots in `(a, b]`.
    fn count(&self, a: f64, b: f64) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

fn bisect_sign_change(f: &[f64], mut a: f64, mut b: f64) -> f64 {
    let mut fa = horner(f, a);
    if fa == 0.0 {
        return a;
    }
    if horner(f, b) == 0.0 {
        return b;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = horner(f, m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn isolate_square_free(f: &[f64]) -> Vec<f64> {
    if degree(f) == 1 {
        return vec![-f[0] / f[1]];
    }
    let sturm = SturmChain::new(f);
    // slightly irrational endpoints keep bisection points off integer roots
    let bound = cauchy_bound(f) * 1.000_000_123_4;
    let mut stack = vec![(-bound * 1.000_000_456_7, bound)];
    let mut roots = Vec::new();
    while let Some((a, b)) = stack.pop() {
        let n = sturm.count(a, b);
        if n == 0 {
            continue;
        }
        let width = b - a;
        if n == 1 {
            let fa = horner(f, a);
            let fb = horner(f, b);
            if fa * fb <= 0.0 {
                roots.push(bisect_sign_change(f, a, b));
                continue;
            }
        }
        if width <= 1e-14 * (1.0 + a.abs().max(b.abs())) {
            roots.push(0.5 * (a + b));
            continue;
        }
        let m = a + width * 0.499_999_871_3;
        stack.push((a, m));
        stack.push((m, b));
    }
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    roots
}

/// Moves `r` onto the simple root of `p^{(k-1)}` closest to it, if one brackets.
fn polish_on_derivative(p: &[f64], r: f64, k: usize) -> f64 {
    let h = nth_derivative(p, k - 1);
    if degree(&h) == 0 {
        return r;
    }
    let mut w = 1e-12 * (1.0 + r.abs());
    while w <= 1e-5 * (1.0 + r.abs()) {
        let (a, b) = (r - w, r + w);
        if horner(&h, a) * horner(&h, b) <= 0.0 {
            return bisect_sign_change(&h, a, b);
        }
        w *= 10.0;
    }
    r
}

/// Adjusts the gcd-chain level `m` at an approximate root `r`: the root is
/// re-polished as a simple root of `f^{(m-1)}` and `m` kept only while
/// `f, …, f^{(m-1)}` all vanish there. Rounding in the chain can under- or
/// over-count by one level; the derivatives settle it.
fn confirm_multiplicity(f: &[f64], r: f64, level: usize) -> (f64, usize) {
    let derivs: Vec<Vec<f64>> = (0..=degree(f)).map(|k| nth_derivative(f, k)).collect();
    let holds = |m: usize, x: f64| derivs[..m].iter().all(|g| vanishes(g, x));
    let mut m = level.clamp(1, degree(f));
    let mut x = polish_on_derivative(f, r, m);
    while m > 1 && !holds(m, x) {
        m -= 1;
        x = polish_on_derivative(f, r, m);
    }
    while m < degree(f) {
        let y = polish_on_derivative(f, x, m + 1);
        if !holds(m + 1, y) {
            break;
        }
        m += 1;
        x = y;
    }
    (x, m)
}

/// All real roots with multiplicities.
///
/// `tol` is the clustering tolerance (scaled by `1 + |r|`); roots are refined
/// to machine precision regardless.
pub fn univariate_real_roots(p: &Polynomial, tol: f64) -> Result<RootList> {
    let coeffs = p.univariate_coefficients()?;
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let f = normalized(&trim(coeffs));
    let chain = gcd_chain(&f);
    let mut roots: Vec<Root> = Vec::new();
    if degree(&f) > 0 {
        let square_free = match chain.get(1) {
            Some(g) => normalized(&exact_quotient(&f, g)),
            None => f.clone(),
        };
        for r in isolate_square_free(&square_free) {
            let level = 1 + chain[1..].iter().take_while(|g| vanishes(g, r)).count();
            let (location, multiplicity) = confirm_multiplicity(&f, r, level);
            roots.push(Root { location, multiplicity });
        }
    }
    roots.sort_by(|a, b| a.location.partial_cmp(&b.location).unwrap());
    let mut merged: Vec<Root> = Vec::new();
    for r in roots {
        match merged.last_mut() {
            Some(last) if (r.location - last.location).abs() <= tol * (1.0 + r.location.abs()) => {
                last.multiplicity += r.multiplicity;
            }
            _ => merged.push(r),
        }
    }
    Ok(RootList {
        roots: merged,
        tolerance: tol,
    })
}

// ---------------------------------------------------------------------------
// derivative-recursion route

/// Points of `[lo, hi]` where `f` changes sign (odd-multiplicity roots),
/// plus exact zeros met on the way.
pub(crate) fn sign_change_roots(f: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let f = trim(f.to_vec());
    let d = degree(&f);
    if d == 0 {
        return Vec::new();
    }
    if d == 1 {
        let r = -f[0] / f[1];
        return if (lo..=hi).contains(&r) { vec![r] } else { Vec::new() };
    }
    let crit = sign_change_roots(&derivative(&f), lo, hi);
    let mut pts = Vec::with_capacity(crit.len() + 2);
    pts.push(lo);
    pts.extend(crit.into_iter().filter(|&c| c > lo && c < hi));
    pts.push(hi);
    let mut out: Vec<f64> = Vec::new();
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (horner(&f, a), horner(&f, b));
        if fa == 0.0 {
            push_unique(&mut out, a);
        } else if fa * fb < 0.0 {
            push_unique(&mut out, bisect_sign_change(&f, a, b));
        }
    }
    if horner(&f, hi) == 0.0 {
        push_unique(&mut out, hi);
    }
    out
}

fn push_unique(v: &mut Vec<f64>, x: f64) {
    if v.last() != Some(&x) {
        v.push(x);
    }
}

/// Sign changes of `f'`, i.e. the local extrema of `f`, within the root bound.
pub(crate) fn extrema(f: &[f64]) -> Vec<f64> {
    let f = trim(f.to_vec());
    if degree(&f) < 2 {
        return Vec::new();
    }
    let b = cauchy_bound(&f);
    sign_change_roots(&derivative(&f), -b, b)
}

fn zero_threshold(f: &[f64], x: f64, rtol: f64) -> f64 {
    rtol * (max_abs(f) + abs_horner(f, x))
}

/// Approximate real zeros of `f` (any multiplicity).
///
/// Candidates are sign changes and extrema with `|f| ≤ t`; candidates in the
/// same component of `{|f| ≤ t}` are one zero, located on the simple root of
/// the highest derivative at which all lower derivatives also vanish.
pub(crate) fn near_zeros(f: &[f64], rtol: f64) -> Vec<f64> {
    let f = trim(f.to_vec());
    if degree(&f) == 0 {
        return Vec::new();
    }
    let bound = cauchy_bound(&f);
    let mut cands = sign_change_roots(&f, -bound, bound);
    cands.extend(extrema(&f));
    cands.retain(|&c| horner(&f, c).abs() <= zero_threshold(&f, c, rtol));
    cands.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cands.dedup();

    let mut out: Vec<f64> = Vec::new();
    let mut covered: Vec<(f64, f64)> = Vec::new();
    for c in cands {
        if covered.iter().any(|&(a, b)| c >= a && c <= b) {
            continue;
        }
        let t = zero_threshold(&f, c, rtol);
        let (a, b) = component(&f, c, t, bound);
        covered.push((a, b));
        let z = polish_in_component(&f, c, a, b, rtol);
        if !out.iter().any(|&o| (o - z).abs() <= ROOT_TOL * (1.0 + z.abs())) {
            out.push(z);
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

/// Maximal interval around `c` on which `|f| ≤ t`.
fn component(f: &[f64], c: f64, t: f64, bound: f64) -> (f64, f64) {
    let lo = -bound - 1.0;
    let hi = bound + 1.0;
    let mut up = f.to_vec();
    up[0] -= t;
    let mut dn = f.to_vec();
    dn[0] += t;
    let mut edges = sign_change_roots(&up, lo, hi);
    edges.extend(sign_change_roots(&dn, lo, hi));
    let a = edges.iter().copied().filter(|&e| e <= c).fold(lo, f64::max);
    let b = edges.iter().copied().filter(|&e| e >= c).fold(hi, f64::min);
    (a, b)
}

fn polish_in_component(f: &[f64], c: f64, a: f64, b: f64, rtol: f64) -> f64 {
    let d = degree(f);
    let derivs: Vec<Vec<f64>> = (0..d).map(|j| nth_derivative(f, j)).collect();
    for j in (0..d).rev() {
        let h = &derivs[j];
        let roots = sign_change_roots(h, a, b);
        let best = roots
            .into_iter()
            .filter(|&r| {
                derivs[..j]
                    .iter()
                    .all(|g| horner(g, r).abs() <= zero_threshold(g, r, rtol))
            })
            .min_by(|x, y| (x - c).abs().partial_cmp(&(y - c).abs()).unwrap());
        if let Some(r) = best {
            return r;
        }
    }
    c
}

// ---------------------------------------------------------------------------
// nonnegativity

/// Minimum of `f` over its extrema and the offending point, in units of the
/// nonnegativity threshold; `None` when `f ≥ 0` within tolerance.
pub(crate) fn nonneg_witness(f: &[f64]) -> Option<f64> {
    nonneg_witness_at(f, NONNEG_RTOL, NONNEG_RTOL)
}

/// As [`nonneg_witness`] with threshold `rel·Σ|c_k||x|^k + abs·max|c|`.
pub(crate) fn nonneg_witness_at(f: &[f64], rel: f64, abs: f64) -> Option<f64> {
    let f = trim(f.to_vec());
    let d = degree(&f);
    if d == 0 {
        return if f[0] < 0.0 { Some(0.0) } else { None };
    }
    let lc = f[d];
    if d % 2 == 1 {
        let b = cauchy_bound(&f) + 1.0;
        return Some(if lc > 0.0 { -b } else { b });
    }
    if lc < 0.0 {
        return Some(cauchy_bound(&f) + 1.0);
    }
    let mut worst: Option<(f64, f64)> = None;
    for c in extrema(&f) {
        let v = horner(&f, c);
        let t = abs * max_abs(&f) + rel * abs_horner(&f, c);
        if v < -t {
            let score = v / t;
            if worst.map_or(true, |(s, _)| score < s) {
                worst = Some((score, c));
            }
        }
    }
    worst.map(|(_, c)| c)
}

/// Decides `p(x) ≥ 0` for all real `x`.
///
/// Even degree with positive leading coefficient and even multiplicity at
/// every real root accepts directly. Otherwise the minimum over the extrema
/// decides, accepting dips above `-1e-9·(max|c| + Σ|c_k||x|^k)`.
pub fn univariate_is_nonneg(p: &Polynomial) -> Result<bool> {
    let coeffs = p.univariate_coefficients()?;
    if p.is_zero() {
        return Ok(true);
    }
    let f = trim(coeffs);
    let d = degree(&f);
    if d == 0 {
        return Ok(f[0] > 0.0);
    }
    if d % 2 == 1 || f[d] < 0.0 {
        return Ok(false);
    }
    Ok(nonneg_witness(&f).is_none())
}

/// `p ≥ 0` on a domain. Finite domains are checked pointwise with tolerance
/// `1e-8·(1 + max|p|)`; the real line uses [`univariate_is_nonneg`].
pub fn is_nonneg_on(p: &Polynomial, dom: &Domain) -> Result<bool> {
    match dom {
        Domain::RealLine | Domain::RealSpace { dim: 1 } => univariate_is_nonneg(p),
        Domain::RealSpace { dim } => Err(Error::Undecidable { num_vars: *dim }),
        _ => {
            let pts = dom.points().expect("finite domain");
            let vals: Vec<f64> = pts
                .iter()
                .map(|x| p.eval(x))
                .collect::<Result<_>>()?;
            let m = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let t = GRID_NONNEG_RTOL * (1.0 + m);
            Ok(vals.iter().all(|&v| v >= -t))
        }
    }
}
