//! Command-line frontend and report serialization.
//!
//! Problem files are described in [`crate::problem`]. Polynomials are sums of
//! terms `c * x1^a1 * … * xn^an` with signed decimal coefficients (optional,
//! defaulting to 1), `*` between factors, `^` with a nonnegative integer
//! exponent, and variable names taken from the file's `variables` list.
//! Whitespace is insignificant and there are no parentheses.
//!
//! Exit codes: 0 success, 1 failed fixture checks, 2 parse or validation
//! error, 3 degenerate input.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::caratheodory::reduce;
use crate::cone_geometry::{
    classify, image_and_defect_with, kernel_polynomials, Classification, SearchConfig,
};
use crate::core_variety::core_variety;
use crate::determinacy::is_determinate;
use crate::domain::PointSet;
use crate::error::{Error, Result};
use crate::fixtures::check_all;
use crate::moment_map::{moments, AtomicMeasure};
use crate::polynomial::Polynomial;
use crate::problem::{load_problem, Problem, ProblemFile};

#[derive(Parser, Debug)]
#[command(name = "momentcone", version, about = "Truncated moment problem analyses")]
pub struct Args {
    /// Relative singular-value cutoff for rank decisions.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Worker threads for the parallel searches.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Run the bundled example checks.
    #[arg(long)]
    pub fixtures: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Moment vector of the measure.
    Moments { file: String },
    /// Inner/boundary classification with kernel, annihilators and V_+.
    Classify { file: String },
    /// The core-variety chain and the atom set.
    CoreVariety { file: String },
    /// Atom reduction to at most m atoms.
    Reduce { file: String },
    /// Determinacy test with evidence.
    Determinacy { file: String },
    /// Kernel basis and kernel polynomials.
    Kernel { file: String },
}

impl Command {
    fn file(&self) -> &str {
        match self {
            Command::Moments { file }
            | Command::Classify { file }
            | Command::CoreVariety { file }
            | Command::Reduce { file }
            | Command::Determinacy { file }
            | Command::Kernel { file } => file,
        }
    }
}

/// A finished command: human text and the machine `result` object.
struct Report {
    text: String,
    result: Value,
}

fn num(x: f64) -> String {
    let r = format!("{:.10}", x);
    let r = r.trim_end_matches('0').trim_end_matches('.');
    if r == "-0" {
        "0".into()
    } else {
        r.into()
    }
}

fn point(x: &[f64]) -> String {
    if x.len() == 1 {
        num(x[0])
    } else {
        format!("({})", x.iter().map(|&v| num(v)).collect::<Vec<_>>().join(", "))
    }
}

fn vector(v: &[f64]) -> String {
    format!("[{}]", v.iter().map(|&x| num(x)).collect::<Vec<_>>().join(", "))
}

fn set(s: &PointSet) -> String {
    match s {
        PointSet::All => "X".into(),
        PointSet::Points(p) => format!("{{{}}}", p.iter().map(|x| point(x)).collect::<Vec<_>>().join(", ")),
    }
}

fn set_json(s: &PointSet) -> Value {
    match s {
        PointSet::All => json!("X"),
        PointSet::Points(p) => json!(p),
    }
}

fn measure_json(mu: &AtomicMeasure) -> Value {
    Value::Array(
        mu.atoms()
            .iter()
            .map(|(w, x)| json!({"weight": w, "point": x}))
            .collect(),
    )
}

fn measure_text(mu: &AtomicMeasure) -> String {
    let mut s = String::new();
    for (w, x) in mu.atoms() {
        s.push_str(&format!("  {} at {}\n", num(*w), point(x)));
    }
    s
}

/// Human form: negligible terms dropped, ten significant digits.
fn poly(p: &Polynomial, names: &[String]) -> String {
    p.trimmed(1e-12).rounded(10).to_string_with(names)
}

fn poly_exact(p: &Polynomial, names: &[String]) -> String {
    p.to_string_with(names)
}

fn cmd_moments(p: &Problem) -> Result<Report> {
    let mu = p.measure.as_ref().ok_or_else(|| Error::Invalid("moments needs a measure".into()))?;
    let s = moments(&p.basis, mu)?.values;
    let mut text = String::new();
    for (f, v) in p.basis.functions().iter().zip(&s) {
        text.push_str(&format!("{} : {}\n", poly(f, &p.names), num(*v)));
    }
    Ok(Report { text, result: json!({ "moments": s }) })
}

fn summary(c: Classification, d: usize) -> String {
    match c {
        Classification::Inner => "INNER".into(),
        Classification::Boundary => format!("BOUNDARY d={d}"),
        Classification::ZeroFunctional => "zero functional".into(),
    }
}

fn kernel_text(out: &mut String, kb: &[Vec<f64>], kp: &[Polynomial], names: &[String]) {
    out.push_str("kernel basis:\n");
    for v in kb {
        out.push_str(&format!("  {}\n", vector(v)));
    }
    out.push_str("kernel polynomials:\n");
    for q in kp {
        out.push_str(&format!("  {}\n", poly(q, names)));
    }
}

fn cmd_classify(p: &Problem, cfg: &SearchConfig) -> Result<Report> {
    let mu = p.measure()?;
    let r = classify(&p.basis, &mu, &p.domain, cfg)?;
    if r.classification == Classification::ZeroFunctional {
        return Err(Error::ZeroFunctional);
    }
    let names = &p.names;
    let mut text = format!("moments: {}\ndefect: {}\n", vector(&r.moments), r.defect);
    kernel_text(&mut text, &r.kernel_basis, &r.kernel_polynomials, names);
    text.push_str("nonnegative annihilators:\n");
    for a in &r.annihilators {
        text.push_str(&format!("  {}\n", poly(a, names)));
    }
    if let Some(g) = &r.generator {
        text.push_str(&format!("generator: {}\n", poly(g, names)));
    }
    if r.heuristic {
        text.push_str("annihilator search: heuristic\n");
    }
    text.push_str(&format!("V_+ = {}\nI = {}\n", set(&r.v_plus), set(&r.i_set)));
    let line = summary(r.classification, r.defect);
    text.push_str(&line);
    text.push('\n');
    let result = json!({
        "summary": line,
        "classification": match r.classification {
            Classification::Inner => "inner",
            _ => "boundary",
        },
        "defect": r.defect,
        "moments": r.moments,
        "image_basis": r.image_basis,
        "kernel_basis": r.kernel_basis,
        "kernel_polynomials": r.kernel_polynomials.iter().map(|q| poly_exact(q, names)).collect::<Vec<_>>(),
        "annihilators": r.annihilators.iter().map(|q| poly_exact(q, names)).collect::<Vec<_>>(),
        "generator": r.generator.as_ref().map(|g| poly_exact(g, names)),
        "v_plus": set_json(&r.v_plus),
        "i_set": set_json(&r.i_set),
        "heuristic": r.heuristic,
    });
    Ok(Report { text, result })
}

fn cmd_core_variety(p: &Problem, cfg: &SearchConfig) -> Result<Report> {
    let mu = p.measure()?;
    let cv = core_variety(&p.basis, &mu, &p.domain, cfg)?;
    let mut text = String::new();
    if cv.atoms.is_all() {
        text.push_str("V(L) = X (inner point)\n");
    } else {
        for (k, v) in cv.chain.iter().enumerate() {
            text.push_str(&format!("V_{k} = {}\n", set(v)));
        }
        text.push_str(&format!("stabilized at k = {}\n", cv.stabilized_at));
        text.push_str(&format!("V(L) = W(L) = {}\n", set(&cv.atoms)));
        if let Some(m) = &cv.measure {
            text.push_str("representing measure:\n");
            text.push_str(&measure_text(m));
        }
    }
    let result = json!({
        "chain": cv.chain.iter().map(set_json).collect::<Vec<_>>(),
        "stabilized_at": cv.stabilized_at,
        "atoms": set_json(&cv.atoms),
        "generators": cv.generators.iter().map(|g| g.as_ref().map(|g| poly_exact(g, &p.names))).collect::<Vec<_>>(),
        "measure": cv.measure.as_ref().map(measure_json),
    });
    Ok(Report { text, result })
}

fn cmd_reduce(p: &Problem) -> Result<Report> {
    let mu = p.measure()?;
    let red = reduce(&p.basis, &mu)?;
    let s = moments(&p.basis, &red)?.values;
    let residual = s
        .iter()
        .zip(&p.moments.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let text = format!(
        "{} atoms (from {}):\n{}moment residual: {:e}\n",
        red.len(),
        mu.len(),
        measure_text(&red),
        residual
    );
    let result = json!({ "measure": measure_json(&red), "atoms": red.len(), "residual": residual });
    Ok(Report { text, result })
}

fn cmd_determinacy(p: &Problem, cfg: &SearchConfig) -> Result<Report> {
    let mu = p.measure()?;
    let d = is_determinate(&p.basis, &mu, &p.domain, cfg)?;
    let mut text = format!("W = {}\n", set(&d.atoms));
    if let Some(r) = d.rank {
        text.push_str(&format!("rank = {r}\n"));
    }
    if let Some(c) = &d.dependency {
        text.push_str(&format!("dependency: {}\n", vector(c)));
    }
    if let Some(m) = &d.measure {
        text.push_str("representing measure:\n");
        text.push_str(&measure_text(m));
    }
    if let Some((a, b)) = &d.witnesses {
        text.push_str("two representing measures:\n");
        text.push_str(&measure_text(a));
        text.push_str("  --\n");
        text.push_str(&measure_text(b));
    }
    let line = if d.determinate { "DETERMINATE" } else { "NOT DETERMINATE" };
    text.push_str(line);
    text.push('\n');
    let result = json!({
        "summary": line,
        "determinate": d.determinate,
        "atoms": set_json(&d.atoms),
        "rank": d.rank,
        "dependency": d.dependency,
        "measure": d.measure.as_ref().map(measure_json),
        "witnesses": d.witnesses.as_ref().map(|(a, b)| vec![measure_json(a), measure_json(b)]),
    });
    Ok(Report { text, result })
}

fn cmd_kernel(p: &Problem, cfg: &SearchConfig) -> Result<Report> {
    let mu = p.measure()?;
    if mu.is_empty() {
        return Err(Error::ZeroFunctional);
    }
    let id = image_and_defect_with(&p.basis, std::slice::from_ref(&mu), cfg.rank_rtol)?;
    let kp = kernel_polynomials(&p.basis, &id.kernel_basis)?;
    let mut text = format!("defect: {}\n", id.defect);
    kernel_text(&mut text, &id.kernel_basis, &kp, &p.names);
    let result = json!({
        "defect": id.defect,
        "kernel_basis": id.kernel_basis,
        "kernel_polynomials": kp.iter().map(|q| poly_exact(q, &p.names)).collect::<Vec<_>>(),
    });
    Ok(Report { text, result })
}

fn dispatch(cmd: &Command, file: &ProblemFile, p: &Problem, cfg: &SearchConfig, format: Format) -> Result<String> {
    let report = match cmd {
        Command::Moments { .. } => cmd_moments(p),
        Command::Classify { .. } => cmd_classify(p, cfg),
        Command::CoreVariety { .. } => cmd_core_variety(p, cfg),
        Command::Reduce { .. } => cmd_reduce(p),
        Command::Determinacy { .. } => cmd_determinacy(p, cfg),
        Command::Kernel { .. } => cmd_kernel(p, cfg),
    }?;
    Ok(match format {
        Format::Human => report.text,
        Format::Machine => {
            let mut v = serde_json::to_value(file).expect("problem files serialize");
            v["result"] = report.result;
            serde_json::to_string_pretty(&v).expect("reports serialize") + "\n"
        }
    })
}

fn config(args: &Args) -> SearchConfig {
    let mut cfg = SearchConfig::default();
    if let Some(t) = args.tol {
        cfg.rank_rtol = t;
    }
    cfg
}

fn execute(args: &Args, out: &mut Vec<u8>, err: &mut Vec<u8>) -> i32 {
    let cfg = config(args);
    if args.fixtures {
        let checks = check_all(&cfg);
        for c in &checks {
            if c.passed {
                let _ = writeln!(out, "PASS {}", c.name);
            } else {
                let _ = writeln!(out, "FAIL {}: {}", c.name, c.detail);
            }
        }
        return if checks.iter().all(|c| c.passed) { 0 } else { 1 };
    }
    let Some(cmd) = &args.command else {
        let _ = writeln!(err, "error: no command given (try --help)");
        return 2;
    };
    let text = match std::fs::read_to_string(cmd.file()) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", cmd.file());
            return 2;
        }
    };
    let outcome = load_problem(&text).and_then(|(file, p)| dispatch(cmd, &file, &p, &cfg, args.format));
    match outcome {
        Ok(s) => {
            let _ = out.write_all(s.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Parses `argv` and runs; returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    let (mut o, mut e) = (Vec::new(), Vec::new());
    let code = match args.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&args, &mut o, &mut e)),
            Err(x) => {
                let _ = writeln!(e, "error: {x}");
                2
            }
        },
        None => execute(&args, &mut o, &mut e),
    };
    let _ = out.write_all(&o);
    let _ = err.write_all(&e);
    code
}
