//! Problem files. JSON with the fields
//!
//! ```text
//! {
//!   "variables": ["x", "y"],
//!   "basis": ["1", "x", "x*y^2"],
//!   "domain": {"type": "real_space", "dim": 2},
//!   "measure": [{"weight": 1.0, "point": [1.0, -1.0]}]
//! }
//! ```
//!
//! `measure` may be replaced by `"moments": [..]` together with an optional
//! `"support": [[..], ..]` of candidate atoms. Domains are `real_line`,
//! `real_space` (`dim`), `finite_points` (`points`, optional `tol`) and `grid`
//! (`lo`, `hi`, `resolution`).

use serde::{Deserialize, Serialize};

use crate::core_variety::representing_measure;
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::moment_map::{moments, AtomicMeasure, Basis, MomentSequence};
use crate::polynomial::parse_polynomial;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub weight: f64,
    pub point: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub variables: Vec<String>,
    pub basis: Vec<String>,
    pub domain: Domain,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<Vec<Atom>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moments: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<Vec<f64>>>,
}

/// A validated problem.
#[derive(Clone, Debug)]
pub struct Problem {
    pub names: Vec<String>,
    pub basis: Basis,
    pub domain: Domain,
    pub measure: Option<AtomicMeasure>,
    pub moments: MomentSequence,
    pub support: Option<Vec<Vec<f64>>>,
}

impl Problem {
    /// The given measure, or one recovered from the moments over the support.
    pub fn measure(&self) -> Result<AtomicMeasure> {
        if let Some(mu) = &self.measure {
            return Ok(mu.clone());
        }
        if self.moments.is_zero() {
            return Ok(AtomicMeasure::empty());
        }
        let support = match (&self.support, self.domain.points()) {
            (Some(s), _) => s.clone(),
            (None, Some(p)) => p,
            (None, None) => return Err(Error::SupportInsufficient),
        };
        representing_measure(&self.basis, &self.moments, &support)
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Line and column (1-based) of byte offset `pos` in `text`.
fn position(text: &str, pos: usize) -> (usize, usize) {
    let before = &text[..pos];
    let line = before.matches('\n').count() + 1;
    let col = before.rfind('\n').map_or(pos, |k| pos - k - 1) + 1;
    (line, col)
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<ProblemFile> {
        serde_json::from_str(text).map_err(json_error)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files serialize")
    }

    /// Validates against the original text so that polynomial errors point into it.
    pub fn validate_in(&self, text: Option<&str>) -> Result<Problem> {
        let n = self.variables.len();
        if n == 0 {
            return Err(Error::Invalid("no variables".into()));
        }
        for (i, v) in self.variables.iter().enumerate() {
            if self.variables[..i].contains(v) {
                return Err(Error::Invalid(format!("duplicate variable {v}")));
            }
        }
        let mut functions = Vec::with_capacity(self.basis.len());
        let mut cursor = 0;
        for src in &self.basis {
            let located = text.and_then(|t| {
                let quoted = serde_json::to_string(src).ok()?;
                let k = t[cursor..].find(&quoted)? + cursor;
                cursor = k + quoted.len();
                Some((t, k + 1))
            });
            match parse_polynomial(src, &self.variables) {
                Ok(p) => functions.push(p),
                Err(Error::Parse { column, message, .. }) => {
                    let (line, column) = match located {
                        Some((t, start)) => position(t, start + column - 1),
                        None => (1, column),
                    };
                    return Err(Error::Parse { line, column, message });
                }
                Err(e) => return Err(e),
            }
        }
        if functions.is_empty() {
            return Err(Error::Invalid("empty basis".into()));
        }
        let basis = Basis::new(functions)?;
        self.domain.validate()?;
        self.domain.check_dim(n)?;
        let check = |p: &[f64]| {
            if p.len() != n {
                Err(Error::DimensionMismatch { expected: n, found: p.len() })
            } else {
                Ok(())
            }
        };
        let (measure, moment_seq) = match (&self.measure, &self.moments) {
            (Some(_), Some(_)) => {
                return Err(Error::Invalid("give either measure or moments, not both".into()))
            }
            (None, None) => return Err(Error::Invalid("missing measure or moments".into())),
            (Some(atoms), None) => {
                for a in atoms {
                    check(&a.point)?;
                }
                let mu = AtomicMeasure::new(atoms.iter().map(|a| (a.weight, a.point.clone())).collect())?;
                let s = moments(&basis, &mu)?;
                (Some(mu), s)
            }
            (None, Some(values)) => {
                (None, MomentSequence::new(basis.clone(), values.clone())?)
            }
        };
        if let Some(support) = &self.support {
            if self.measure.is_some() {
                return Err(Error::Invalid("support only accompanies moments".into()));
            }
            for p in support {
                check(p)?;
            }
        }
        Ok(Problem {
            names: self.variables.clone(),
            basis,
            domain: self.domain.clone(),
            measure,
            moments: moment_seq,
            support: self.support.clone(),
        })
    }

    pub fn validate(&self) -> Result<Problem> {
        self.validate_in(None)
    }
}

/// Parses and validates a problem file.
pub fn load_problem(text: &str) -> Result<(ProblemFile, Problem)> {
    let file = ProblemFile::from_json(text)?;
    let problem = file.validate_in(Some(text))?;
    Ok((file, problem))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
  "variables": ["x"],
  "basis": ["1", "x^2", "x^4"],
  "domain": {"type": "real_line"},
  "measure": [{"weight": 1.0, "point": [2.0]}]
}"#;

    #[test]
    fn loads_and_round_trips() {
        let (file, problem) = load_problem(SAMPLE).unwrap();
        assert_eq!(problem.moments.values, vec![1.0, 4.0, 16.0]);
        assert_eq!(ProblemFile::from_json(&file.to_json()).unwrap(), file);
    }

    #[test]
    fn polynomial_error_points_into_file() {
        let bad = SAMPLE.replace("\"x^4\"", "\"x^^4\"");
        match load_problem(&bad) {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!(line, 3);
                let l = bad.lines().nth(2).unwrap();
                assert_eq!(&l[column - 1..column], "^");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn json_error_has_position() {
        match load_problem("{\n  \"variables\": [,]\n}") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn moments_need_matching_length() {
        let f = SAMPLE.replace(
            r#""measure": [{"weight": 1.0, "point": [2.0]}]"#,
            r#""moments": [1.0, 4.0]"#,
        );
        assert!(load_problem(&f).is_err());
    }

    #[test]
    fn moments_with_support_recover_measure() {
        let f = SAMPLE.replace(
            r#""measure": [{"weight": 1.0, "point": [2.0]}]"#,
            r#""moments": [1.0, 4.0, 16.0], "support": [[2.0], [3.0]]"#,
        );
        let (_, p) = load_problem(&f).unwrap();
        let mu = p.measure().unwrap();
        assert_eq!(mu.len(), 1);
        assert!((mu.weights()[0] - 1.0).abs() < 1e-9);
    }
}
