//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::time::Instant;

use momentcone::cone_geometry::{find_nonneg_annihilators, image_and_defect};
use momentcone::core_variety::representing_measure;
use momentcone::fixtures::{load_fixture, robinson_basis, robinson_points, FIXTURES};
use momentcone::numeric::cokernel;
use momentcone::prelude::*;
use momentcone::problem::load_problem;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Distance from the unit vector along `v` to the span of an orthonormal family.
fn projection_residual(v: &[f64], onb: &[Vec<f64>]) -> f64 {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let u: Vec<f64> = v.iter().map(|x| x / n).collect();
    let mut r = u.clone();
    for k in onb {
        let c: f64 = u.iter().zip(k).map(|(a, b)| a * b).sum();
        r.iter_mut().zip(k).for_each(|(x, y)| *x -= c * y);
    }
    r.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `got` equals the listed univariate points, each within `1e-7`.
fn same_1d(got: &PointSet, want: &[f64]) -> bool {
    match got.points() {
        None => false,
        Some(p) => {
            let mut g: Vec<f64> = p.iter().map(|x| x[0]).collect();
            g.sort_by(|a, b| a.partial_cmp(b).unwrap());
            g.len() == want.len()
                && g.iter().zip(want).all(|(a, b)| (a - b).abs() <= 1e-7 * (1.0 + b.abs()))
        }
    }
}

fn show(p: &PointSet) -> String {
    match p.points() {
        None => "X".into(),
        Some(p) => format!("{p:?}"),
    }
}

fn criterion_1() -> Outcome {
    let p = ok(load_fixture("octic"))?;
    let mu = p.measure.clone().unwrap();
    let cfg = SearchConfig::default();
    let id = ok(image_and_defect(&p.basis, &mu))?;
    ensure(id.defect == 1, || format!("d(s) = {}", id.defect))?;
    let v = [16.0, -40.0, 33.0, 0.0, -10.0, 0.0, 1.0];
    let res = projection_residual(&v, &id.kernel_basis);
    ensure(res <= 1e-8, || format!("kernel residual {res:e}"))?;
    let ann = ok(find_nonneg_annihilators(&p.basis, &mu, &p.domain, &cfg))?.annihilators;
    ensure(ann.len() == 1, || format!("{} annihilators", ann.len()))?;
    // (x²-1)²(x²-4)² expanded, in basis order 1, x², x⁴, x⁵, x⁶, x⁷, x⁸
    let coords = ok(p.basis.coordinates(&ann[0]))?;
    let ray = projection_residual(&v, &[{
        let n = coords.iter().map(|x| x * x).sum::<f64>().sqrt();
        coords.iter().map(|x| x / n).collect()
    }]);
    ensure(ray <= 1e-8 && coords[6] > 0.0, || format!("annihilator off the ray by {ray:e}"))?;
    let r = ok(classify(&p.basis, &mu, &p.domain, &cfg))?;
    let vp = [-2.0, -1.0, 1.0, 2.0];
    ensure(same_1d(&r.v_plus, &vp), || format!("V_+ = {}", show(&r.v_plus)))?;
    ensure(same_1d(&r.i_set, &vp), || format!("I = {}", show(&r.i_set)))?;
    let support: Vec<Vec<f64>> = vp.iter().map(|&x| vec![x]).collect();
    let at_minus_two = ok(atom_test(&p.basis, &p.moments, &[-2.0], &support))?;
    ensure(!at_minus_two, || "atom_test(-2) = true".into())?;
    let cv = ok(core_variety(&p.basis, &mu, &p.domain, &cfg))?;
    ensure(same_1d(&cv.atoms, &[-1.0, 1.0, 2.0]), || format!("W = {}", show(&cv.atoms)))?;
    Ok(format!("d = 1, kernel residual {res:.1e}, W = {{-1, 1, 2}} inside I = V_+"))
}

fn criterion_2() -> Outcome {
    let p = ok(load_fixture("degree16"))?;
    let mu = p.measure.clone().unwrap();
    let cfg = SearchConfig::default();
    let id = ok(image_and_defect(&p.basis, &mu))?;
    ensure(id.defect == 2, || format!("d(s) = {}", id.defect))?;
    let v1 = [0.0, 12864.0, -17152.0, -14580.0, 29163.0, -14584.0, 4288.0, 0.0, 1.0];
    let v2 = [0.0, 192.0, -256.0, -220.0, 441.0, -222.0, 64.0, 1.0, 0.0];
    let r1 = projection_residual(&v1, &id.kernel_basis);
    let r2 = projection_residual(&v2, &id.kernel_basis);
    ensure(r1 <= 1e-8 && r2 <= 1e-8, || format!("kernel residuals {r1:e}, {r2:e}"))?;
    let r = ok(classify(&p.basis, &mu, &p.domain, &cfg))?;
    ensure(r.annihilators.len() == 1, || format!("{} rays", r.annihilators.len()))?;
    // p = c (v1 + λ v2): λ is the x¹² coordinate over the x¹⁶ one
    let c = ok(p.basis.coordinates(&r.annihilators[0]))?;
    let lambda = c[7] / c[8];
    ensure((lambda + 67.0).abs() <= 1e-6 * 67.0, || format!("lambda = {lambda}"))?;
    let fit = projection_residual(
        &v1.iter().zip(&v2).map(|(a, b)| a - 67.0 * b).collect::<Vec<_>>(),
        &[c.iter().map(|x| x / c.iter().map(|y| y * y).sum::<f64>().sqrt()).collect()],
    );
    ensure(fit <= 1e-8, || format!("ray off p1 - 67 p2 by {fit:e}"))?;
    ensure(same_1d(&r.v_plus, &[-2.0, -1.0, 0.0, 1.0, 2.0]), || format!("V_+ = {}", show(&r.v_plus)))?;
    let cv = ok(core_variety(&p.basis, &mu, &p.domain, &cfg))?;
    ensure(same_1d(&cv.atoms, &[-1.0, 0.0, 1.0, 2.0]), || format!("W = {}", show(&cv.atoms)))?;
    Ok(format!("d = 2, lambda = {lambda:.9}, V_+ has 5 points, W = {{-1, 0, 1, 2}}"))
}

fn criterion_3() -> Outcome {
    let p = ok(load_fixture("three_points"))?;
    let mu = p.measure.clone().unwrap();
    let cfg = SearchConfig::default();
    let cv = ok(core_variety(&p.basis, &mu, &p.domain, &cfg))?;
    ensure(cv.chain[1].len() == Some(3), || format!("V_1 = {}", show(&cv.chain[1])))?;
    let w = cv.atoms.points().ok_or("W infinite")?.to_vec();
    ensure(
        w == vec![vec![-1.0, 0.0], vec![1.0, 0.0]] && cv.chain[2].len() == Some(2),
        || format!("V_2 = {}, W = {w:?}", show(&cv.chain[2])),
    )?;
    // an LP over the whole finite domain
    let all = p.domain.points().unwrap();
    let rep = ok(representing_measure(&p.basis, &p.moments, &all))?;
    let mut atoms: Vec<(f64, Vec<f64>)> = rep.atoms().to_vec();
    atoms.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    ensure(atoms.len() == 2, || format!("LP measure {atoms:?}"))?;
    ensure(
        atoms[0].1 == vec![-1.0, 0.0]
            && atoms[1].1 == vec![1.0, 0.0]
            && atoms.iter().all(|(c, _)| (c - 1.0).abs() <= 1e-8),
        || format!("LP measure {atoms:?}"),
    )?;
    let d = ok(is_determinate(&p.basis, &mu, &p.domain, &cfg))?;
    ensure(d.determinate, || "not determinate".into())?;
    Ok("V_1 has 3 points, V_2 = W = {(-1,0), (1,0)}, weights 1, 1, determinate".into())
}

fn motzkin_roots() -> Vec<Vec<f64>> {
    vec![vec![1.0, 1.0], vec![1.0, -1.0], vec![-1.0, 1.0], vec![-1.0, -1.0]]
}

fn rows(basis: &Basis, pts: &[Vec<f64>]) -> std::result::Result<Matrix, String> {
    let r = pts
        .iter()
        .map(|x| moment_vector(basis, x))
        .collect::<Result<Vec<_>>>();
    ok(Matrix::from_rows(&ok(r)?))
}

fn criterion_4() -> Outcome {
    let names = vec!["x".to_string(), "y".to_string()];
    let b = ok(Basis::parse(&["1", "x", "x*y", "x^3", "x*y^2"], &names))?;
    let roots = motzkin_roots();
    let mb = rows(&b, &roots)?;
    let rb = rank(&mb, RANK_RTOL);
    ensure(rb == 3, || format!("rank over B = {rb}"))?;
    let dep = cokernel(&mb, RANK_RTOL);
    ensure(dep.len() == 1, || format!("{} dependencies", dep.len()))?;
    let res = projection_residual(&[1.0, -1.0, 1.0, -1.0], &dep);
    ensure(res <= 1e-8, || format!("dependency {:?}", dep[0]))?;
    let p = ok(load_fixture("motzkin"))?;
    ensure(p.basis.len() == 14, || format!("|A| = {}", p.basis.len()))?;
    let ra = rank(&rows(&p.basis, &roots)?, RANK_RTOL);
    ensure(ra == 4, || format!("rank over A = {ra}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cfg = SearchConfig::default();
    for _ in 0..5 {
        let mu = ok(AtomicMeasure::new(
            roots.iter().map(|r| (rng.gen_range(0.1..3.0), r.clone())).collect(),
        ))?;
        let d = ok(is_determinate(&p.basis, &mu, &p.domain, &cfg))?;
        ensure(d.determinate, || format!("not determinate for {mu:?}"))?;
    }
    Ok("rank 3 over B with dependency (1,-1,1,-1), rank 4 over A, determinate for 5 weightings".into())
}

fn criterion_5() -> Outcome {
    let b = ok(robinson_basis())?;
    let pts = robinson_points();
    // the points are zeros of the Robinson form
    let r = |x: f64, y: f64, z: f64| {
        x.powi(6) + y.powi(6) + z.powi(6)
            - x.powi(4) * (y * y + z * z)
            - y.powi(4) * (x * x + z * z)
            - z.powi(4) * (x * x + y * y)
            + 3.0 * x * x * y * y * z * z
    };
    ensure(pts.iter().all(|p| r(p[0], p[1], p[2]) == 0.0), || "not Robinson zeros".into())?;
    let m = rows(&b, &pts)?;
    ensure(rank(&m, RANK_RTOL) == 10, || "rank M < 10".into())?;
    for i in 0..10 {
        let ri = rank(&m.without_row(i), RANK_RTOL);
        ensure(ri == 9, || format!("rank M_{i} = {ri}"))?;
    }
    let fam = ok(separating_family(&b, &pts))?;
    ensure(fam.len() == 10, || format!("{} polynomials", fam.len()))?;
    let (mut off, mut diag) = (0.0f64, 0.0f64);
    for (j, pj) in fam.iter().enumerate() {
        for (i, x) in pts.iter().enumerate() {
            let v = ok(pj.eval(x))?;
            if i == j {
                diag = diag.max((v - 1.0).abs());
            } else {
                off = off.max(v.abs());
            }
        }
    }
    ensure(off <= 1e-8 && diag <= 1e-8, || format!("off {off:e}, diag {diag:e}"))?;
    Ok(format!("rank 10, all M_i rank 9, max off-diagonal {off:.1e}"))
}

fn monomial_basis(m: usize) -> Basis {
    Basis::univariate_monomials(&(0..m as u32).collect::<Vec<_>>()).unwrap()
}

fn criterion_6() -> Outcome {
    let basis = monomial_basis(7);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let start = Instant::now();
    let mut worst = 0.0f64;
    for k in 0..200 {
        let mu = ok(AtomicMeasure::new(
            (0..50)
                .map(|_| (rng.gen_range(0.01..1.0), vec![rng.gen_range(-1.0..1.0)]))
                .collect(),
        ))?;
        let red = ok(reduce(&basis, &mu))?;
        ensure(red.len() <= 7, || format!("instance {k}: {} atoms", red.len()))?;
        ensure(
            red.weights().iter().all(|&w| w >= 1e-12),
            || format!("instance {k}: nonpositive weight"),
        )?;
        ensure(
            red.points().iter().all(|x| mu.points().contains(x)),
            || format!("instance {k}: new atom"),
        )?;
        let s = ok(moments(&basis, &mu))?.values;
        let t = ok(moments(&basis, &red))?.values;
        let ns = s.iter().map(|x| x * x).sum::<f64>().sqrt();
        let res = s.iter().zip(&t).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / (1.0 + ns);
        worst = worst.max(res);
        ensure(res <= 1e-8, || format!("instance {k}: residual {res:e}"))?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs <= 5.0, || format!("took {secs:.2} s"))?;
    Ok(format!("200 instances, worst residual {worst:.1e}, {secs:.2} s"))
}

fn random_basis(rng: &mut ChaCha8Rng) -> Basis {
    let n = rng.gen_range(1..=2);
    let mut exps: Vec<Vec<u32>> = Vec::new();
    let m = rng.gen_range(3..=if n == 1 { 5 } else { 8 });
    while exps.len() < m {
        let e: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=4)).collect();
        if !exps.contains(&e) {
            exps.push(e);
        }
    }
    Basis::monomials(&exps).unwrap()
}

fn random_measure(rng: &mut ChaCha8Rng, n: usize, k: usize) -> AtomicMeasure {
    AtomicMeasure::new(
        (0..k)
            .map(|_| (rng.gen_range(0.2..2.0), (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()))
            .collect(),
    )
    .unwrap()
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let h = 1e-5;
    let (mut worst_fd, mut worst_span) = (0.0f64, 0.0f64);
    for inst in 0..100 {
        let basis = random_basis(&mut rng);
        let n = basis.num_vars();
        let k = rng.gen_range(1..=4);
        let mu = random_measure(&mut rng, n, k);
        let jac = ok(jacobian(&basis, &mu))?;
        let atoms = mu.atoms().to_vec();
        for j in 0..k {
            for q in 0..=n {
                let shifted = |t: f64| {
                    let mut a = atoms.clone();
                    if q == 0 {
                        a[j].0 += t;
                    } else {
                        a[j].1[q - 1] += t;
                    }
                    moments(&basis, &AtomicMeasure::new(a).unwrap()).unwrap().values
                };
                let (up, down) = (shifted(h), shifted(-h));
                for r in 0..basis.len() {
                    let fd = (up[r] - down[r]) / (2.0 * h);
                    let err = (fd - jac.get(r, j * (n + 1) + q)).abs();
                    worst_fd = worst_fd.max(err);
                    ensure(err <= 1e-6, || format!("instance {inst}: column error {err:e}"))?;
                }
            }
        }
        let scaled = ok(AtomicMeasure::new(
            atoms.iter().map(|(c, x)| (c * rng.gen_range(0.1..10.0), x.clone())).collect(),
        ))?;
        let k1 = cokernel(&jac, RANK_RTOL);
        let k2 = cokernel(&ok(jacobian(&basis, &scaled))?, RANK_RTOL);
        ensure(k1.len() == k2.len(), || format!("instance {inst}: defect changed"))?;
        for (a, b) in [(&k1, &k2), (&k2, &k1)] {
            for v in a.iter() {
                let r = projection_residual(v, b);
                worst_span = worst_span.max(r);
                ensure(r <= 1e-8, || format!("instance {inst}: span residual {r:e}"))?;
            }
        }
    }
    Ok(format!("100 instances, worst column error {worst_fd:.1e}, worst span residual {worst_span:.1e}"))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cfg = SearchConfig::default();
    let (mut inner, mut boundary) = (0, 0);
    for inst in 0..50 {
        let k = rng.gen_range(1..=8);
        let mut basis = monomial_basis(7);
        if inst % 2 == 1 {
            // a random triangular change of basis keeps the space and mixes degrees
            let f = basis.functions().to_vec();
            let mixed: Vec<Polynomial> = (0..f.len())
                .map(|i| {
                    (0..=i).fold(Polynomial::zero(1), |acc, j| {
                        let c = if i == j { rng.gen_range(0.5..2.0) } else { rng.gen_range(-1.0..1.0) };
                        &acc + &f[j].scale(c)
                    })
                })
                .collect();
            basis = ok(Basis::new(mixed))?;
        }
        let mu = random_measure(&mut rng, 1, k);
        // d(s) over all representing measures, not just at mu
        let d_zero = ok(classify(&basis, &mu, &Domain::RealLine, &cfg))?.defect == 0;
        let no_ann = ok(find_nonneg_annihilators(&basis, &mu, &Domain::RealLine, &cfg))?.annihilators.is_empty();
        let cv = ok(core_variety(&basis, &mu, &Domain::RealLine, &cfg))?;
        let v1_all = cv.chain[1].is_all();
        ensure(
            d_zero == no_ann && no_ann == v1_all,
            || format!("instance {inst} (k = {k}): d=0 {d_zero}, N_+ empty {no_ann}, V_1 = X {v1_all}"),
        )?;
        if d_zero {
            inner += 1;
        } else {
            boundary += 1;
        }
    }
    Ok(format!("50 instances agree ({inner} inner, {boundary} boundary)"))
}

fn criterion_9() -> Outcome {
    let cfg = SearchConfig::default();
    let mut checked = Vec::new();
    for (name, text) in FIXTURES {
        let (_, p) = ok(load_problem(text))?;
        let mu = ok(p.measure())?;
        if mu.is_empty() {
            continue;
        }
        let cv = ok(core_variety(&p.basis, &mu, &p.domain, &cfg))?;
        for w in cv.chain.windows(2) {
            ensure(w[1].is_subset_of(&w[0], MATCH_TOL), || format!("{name}: chain not decreasing"))?;
        }
        ensure(
            cv.stabilized_at <= p.basis.len(),
            || format!("{name}: stabilized at {}", cv.stabilized_at),
        )?;
        let r = &cv.report;
        ensure(
            cv.atoms.is_subset_of(&r.i_set, MATCH_TOL) && r.i_set.is_subset_of(&r.v_plus, MATCH_TOL),
            || format!("{name}: W, I, V_+ = {}, {}, {}", show(&cv.atoms), show(&r.i_set), show(&r.v_plus)),
        )?;
        checked.push(*name);
    }
    Ok(format!("{} fixtures: {}", checked.len(), checked.join(", ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 first univariate example", criterion_1),
        ("2 two-dimensional kernel example", criterion_2),
        ("3 finite-domain model", criterion_3),
        ("4 Motzkin determinacy", criterion_4),
        ("5 Robinson separation", criterion_5),
        ("6 atom reduction suite", criterion_6),
        ("7 Jacobian suite", criterion_7),
        ("8 classification equivalence", criterion_8),
        ("9 chain properties", criterion_9),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 9 criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
