//! Bundled example problems and quick checks against their known answers.

use crate::caratheodory::reduce;
use crate::cone_geometry::{classify, Classification, SearchConfig};
use crate::core_variety::core_variety;
use crate::determinacy::{is_determinate, point_rank, separating_family};
use crate::domain::{PointSet, MATCH_TOL};
use crate::error::Result;
use crate::moment_map::{moments, Basis};
use crate::numeric::max_abs;
use crate::problem::{load_problem, Problem};

/// `(name, json)` for every bundled problem file.
pub const FIXTURES: &[(&str, &str)] = &[
    ("octic", include_str!("../fixtures/octic.json")),
    ("degree16", include_str!("../fixtures/degree16.json")),
    ("three_points", include_str!("../fixtures/three_points.json")),
    ("motzkin", include_str!("../fixtures/motzkin.json")),
    ("inner", include_str!("../fixtures/inner.json")),
    ("reduce50", include_str!("../fixtures/reduce50.json")),
    ("duplicate", include_str!("../fixtures/duplicate.json")),
    ("minimal", include_str!("../fixtures/minimal.json")),
    ("empty", include_str!("../fixtures/empty.json")),
    ("moments_support", include_str!("../fixtures/moments_support.json")),
];

pub fn fixture(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, j)| *j)
}

pub fn load_fixture(name: &str) -> Result<Problem> {
    let text = fixture(name).unwrap_or_else(|| panic!("no fixture {name}"));
    Ok(load_problem(text)?.1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixtureCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = std::result::Result<(), String>;

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn points_1d(v: &[f64]) -> PointSet {
    PointSet::from_points(v.iter().map(|&x| vec![x]).collect(), MATCH_TOL)
}

fn lib<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn check_octic(cfg: &SearchConfig) -> Check {
    let p = lib(load_fixture("octic"))?;
    let mu = p.measure.clone().unwrap();
    let r = lib(classify(&p.basis, &mu, &p.domain, cfg))?;
    ensure(r.defect == 1, || format!("defect {}", r.defect))?;
    let vp = points_1d(&[-2.0, -1.0, 1.0, 2.0]);
    ensure(r.v_plus.same_as(&vp, MATCH_TOL), || format!("V_+ = {:?}", r.v_plus))?;
    let cv = lib(core_variety(&p.basis, &mu, &p.domain, cfg))?;
    let w = points_1d(&[-1.0, 1.0, 2.0]);
    ensure(cv.atoms.same_as(&w, MATCH_TOL), || format!("W = {:?}", cv.atoms))
}

fn check_degree16(cfg: &SearchConfig) -> Check {
    let p = lib(load_fixture("degree16"))?;
    let mu = p.measure.clone().unwrap();
    let r = lib(classify(&p.basis, &mu, &p.domain, cfg))?;
    ensure(r.defect == 2, || format!("defect {}", r.defect))?;
    let g = r.generator.clone().ok_or("no generator")?;
    let lambda = g.coefficient(&[12]) / g.coefficient(&[16]);
    ensure((lambda + 67.0).abs() <= 67e-6, || format!("lambda {lambda}"))?;
    let vp = points_1d(&[-2.0, -1.0, 0.0, 1.0, 2.0]);
    ensure(r.v_plus.same_as(&vp, MATCH_TOL), || format!("V_+ = {:?}", r.v_plus))?;
    let cv = lib(core_variety(&p.basis, &mu, &p.domain, cfg))?;
    let w = points_1d(&[-1.0, 0.0, 1.0, 2.0]);
    ensure(cv.atoms.same_as(&w, MATCH_TOL), || format!("W = {:?}", cv.atoms))
}

fn check_three_points(cfg: &SearchConfig) -> Check {
    let p = lib(load_fixture("three_points"))?;
    let mu = p.measure.clone().unwrap();
    let cv = lib(core_variety(&p.basis, &mu, &p.domain, cfg))?;
    ensure(cv.chain[1].len() == Some(3), || format!("V_1 = {:?}", cv.chain[1]))?;
    let w = PointSet::from_points(vec![vec![-1.0, 0.0], vec![1.0, 0.0]], MATCH_TOL);
    ensure(cv.atoms.same_as(&w, MATCH_TOL), || format!("W = {:?}", cv.atoms))?;
    let m = cv.measure.clone().ok_or("no measure")?;
    ensure(
        m.weights().iter().all(|w| (w - 1.0).abs() <= 1e-8),
        || format!("weights {:?}", m.weights()),
    )?;
    let d = lib(is_determinate(&p.basis, &mu, &p.domain, cfg))?;
    ensure(d.determinate, || "not determinate".into())
}

fn motzkin_roots() -> Vec<Vec<f64>> {
    vec![vec![1.0, 1.0], vec![1.0, -1.0], vec![-1.0, 1.0], vec![-1.0, -1.0]]
}

fn check_motzkin(cfg: &SearchConfig) -> Check {
    let names = vec!["x".to_string(), "y".to_string()];
    let b = lib(Basis::parse(&["1", "x", "x*y", "x^3", "x*y^2"], &names))?;
    let rb = lib(point_rank(&b, &motzkin_roots()))?;
    ensure(rb == 3, || format!("rank over B {rb}"))?;
    let p = lib(load_fixture("motzkin"))?;
    let ra = lib(point_rank(&p.basis, &motzkin_roots()))?;
    ensure(ra == 4, || format!("rank over A {ra}"))?;
    let d = lib(is_determinate(&p.basis, p.measure.as_ref().unwrap(), &p.domain, cfg))?;
    ensure(d.determinate, || format!("not determinate, W = {:?}", d.atoms))
}

pub fn robinson_points() -> Vec<Vec<f64>> {
    [
        [1.0, 1.0, 1.0],
        [1.0, 1.0, -1.0],
        [1.0, -1.0, 1.0],
        [1.0, -1.0, -1.0],
        [1.0, 1.0, 0.0],
        [1.0, -1.0, 0.0],
        [1.0, 0.0, 1.0],
        [1.0, 0.0, -1.0],
        [0.0, 1.0, 1.0],
        [0.0, 1.0, -1.0],
    ]
    .iter()
    .map(|p| p.to_vec())
    .collect()
}

/// The ten cubic monomials in `x, y, z`.
pub fn robinson_basis() -> Result<Basis> {
    let mut exps = Vec::new();
    for a in (0..=3u32).rev() {
        for b in (0..=3 - a).rev() {
            exps.push(vec![a, b, 3 - a - b]);
        }
    }
    Basis::monomials(&exps)
}

fn check_robinson(_: &SearchConfig) -> Check {
    let b = lib(robinson_basis())?;
    let pts = robinson_points();
    let fam = lib(separating_family(&b, &pts))?;
    for (j, pj) in fam.iter().enumerate() {
        for (i, x) in pts.iter().enumerate() {
            let v = lib(pj.eval(x))?;
            let want = if i == j { 1.0 } else { 0.0 };
            ensure((v - want).abs() <= 1e-8, || format!("p_{j}(r_{i}) = {v}"))?;
        }
    }
    Ok(())
}

fn check_inner(cfg: &SearchConfig) -> Check {
    let p = lib(load_fixture("inner"))?;
    let r = lib(classify(&p.basis, p.measure.as_ref().unwrap(), &p.domain, cfg))?;
    ensure(r.classification == Classification::Inner, || format!("{:?}", r.classification))?;
    let d = lib(is_determinate(&p.basis, p.measure.as_ref().unwrap(), &p.domain, cfg))?;
    ensure(!d.determinate, || "determinate".into())
}

fn check_reduce(_: &SearchConfig) -> Check {
    for name in ["reduce50", "duplicate", "minimal"] {
        let p = lib(load_fixture(name))?;
        let mu = p.measure.clone().unwrap();
        let red = lib(reduce(&p.basis, &mu))?;
        ensure(red.len() <= p.basis.len(), || format!("{name}: {} atoms", red.len()))?;
        let s = lib(moments(&p.basis, &red))?.values;
        let diff: Vec<f64> = s.iter().zip(&p.moments.values).map(|(a, b)| a - b).collect();
        let res = max_abs(&diff) / (1.0 + max_abs(&p.moments.values));
        ensure(res <= 1e-8, || format!("{name}: residual {res:e}"))?;
    }
    Ok(())
}

/// Runs every bundled check.
pub fn check_all(cfg: &SearchConfig) -> Vec<FixtureCheck> {
    let checks: [(&'static str, fn(&SearchConfig) -> Check); 8] = [
        ("octic", check_octic),
        ("degree16", check_degree16),
        ("three_points", check_three_points),
        ("motzkin", check_motzkin),
        ("robinson", check_robinson),
        ("inner", check_inner),
        ("reduce", check_reduce),
        ("round_trip", check_round_trip),
    ];
    checks
        .iter()
        .map(|(name, f)| {
            let r = f(cfg);
            FixtureCheck {
                name,
                passed: r.is_ok(),
                detail: r.err().unwrap_or_default(),
            }
        })
        .collect()
}

fn check_round_trip(_: &SearchConfig) -> Check {
    use crate::problem::ProblemFile;
    for (name, text) in FIXTURES {
        let f = lib(ProblemFile::from_json(text))?;
        let g = lib(ProblemFile::from_json(&f.to_json()))?;
        ensure(f == g, || format!("{name} does not round-trip"))?;
    }
    Ok(())
}
