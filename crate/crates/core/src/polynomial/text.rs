//! Text form of polynomials.
//!
//! ```text
//! poly   := [sign] term (sign term)*
//! sign   := '+' | '-'
//! term   := factor ('*' factor)*
//! factor := number | name ['^' digits]
//! number := digits ['.' digits] [('e' | 'E') [sign] digits]
//! ```
//!
//! Whitespace is insignificant. Names are identifiers (`[A-Za-z_][A-Za-z0-9_]*`)
//! that must appear in the variable list; a name's position in that list is its
//! variable index. Example: `1 - 3*x^2*y^2 + x^2*y^4 + x^4*y^2`.

use std::cmp::Reverse;

use super::{Exponent, Polynomial};
use crate::error::{Error, Result};

pub(crate) fn default_names(n: usize) -> Vec<String> {
    match n {
        1 => vec!["x".into()],
        2 => vec!["x".into(), "y".into()],
        3 => vec!["x".into(), "y".into(), "z".into()],
        _ => (1..=n).map(|i| format!("x{i}")).collect(),
    }
}

/// Parses `src` with variables named by `names`.
///
/// Errors carry line 1 and the 1-based column of the offending character.
pub fn parse_polynomial(src: &str, names: &[String]) -> Result<Polynomial> {
    Parser {
        chars: src.chars().collect(),
        pos: 0,
        names,
    }
    .poly()
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            line: 1,
            column: self.pos + 1,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn poly(mut self) -> Result<Polynomial> {
        let n = self.names.len();
        let mut out = Polynomial::zero(n);
        let mut first = true;
        loop {
            let sign = match self.peek() {
                None if first => return self.err("empty polynomial"),
                None => break,
                Some('+') => {
                    self.pos += 1;
                    1.0
                }
                Some('-') => {
                    self.pos += 1;
                    -1.0
                }
                Some(_) if first => 1.0,
                Some(c) => return self.err(format!("expected '+' or '-', found '{c}'")),
            };
            first = false;
            let (coef, exp) = self.term()?;
            out = &out + &Polynomial::monomial(sign * coef, exp);
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(f64, Exponent)> {
        let mut coef = 1.0;
        let mut exp = vec![0u32; self.names.len()];
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() || c == '.' => coef *= self.number()?,
                Some(c) if c.is_alphabetic() || c == '_' => {
                    let (var, power) = self.power()?;
                    exp[var] += power;
                }
                Some(c) => return self.err(format!("unexpected '{c}'")),
                None => return self.err("expected a number or variable"),
            }
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                return Ok((coef, exp));
            }
        }
    }

    fn digits(&mut self) -> usize {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.pos - start
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        let mut count = self.digits();
        if self.chars.get(self.pos) == Some(&'.') {
            self.pos += 1;
            count += self.digits();
        }
        if count == 0 {
            self.pos = start;
            return self.err("malformed number");
        }
        if matches!(self.chars.get(self.pos), Some('e' | 'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.chars.get(self.pos), Some('+' | '-')) {
                self.pos += 1;
            }
            if self.digits() == 0 {
                self.pos = mark;
                return self.err("malformed exponent");
            }
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse::<f64>().or_else(|_| {
            self.pos = start;
            self.err("malformed number")
        })
    }

    fn power(&mut self) -> Result<(usize, u32)> {
        let start = self.pos;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_')
        {
            self.pos += 1;
        }
        let name: String = self.chars[start..self.pos].iter().collect();
        let Some(var) = self.names.iter().position(|n| *n == name) else {
            self.pos = start;
            return self.err(format!("unknown variable '{name}'"));
        };
        if self.peek() != Some('^') {
            return Ok((var, 1));
        }
        self.pos += 1;
        self.skip_ws();
        let ds = self.pos;
        if self.digits() == 0 {
            return self.err("expected a nonnegative integer exponent");
        }
        let text: String = self.chars[ds..self.pos].iter().collect();
        match text.parse::<u32>() {
            Ok(k) => Ok((var, k)),
            Err(_) => {
                self.pos = ds;
                self.err("exponent too large")
            }
        }
    }
}

fn format_coefficient(c: f64) -> String {
    if c.fract() == 0.0 && c.abs() < 1e15 {
        format!("{}", c as i64)
    } else {
        format!("{c:?}")
    }
}

pub(crate) fn render(p: &Polynomial, names: &[String]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut terms: Vec<(&Exponent, f64)> = p.terms().collect();
    terms.sort_by_key(|(e, _)| (Reverse(e.iter().sum::<u32>()), Reverse((*e).clone())));
    let mut out = String::new();
    for (i, (e, c)) in terms.into_iter().enumerate() {
        let negative = c < 0.0;
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let mag = c.abs();
        let mut factors = Vec::new();
        let constant = e.iter().all(|&k| k == 0);
        if constant || mag != 1.0 {
            factors.push(format_coefficient(mag));
        }
        for (name, &k) in names.iter().zip(e) {
            match k {
                0 => {}
                1 => factors.push(name.clone()),
                _ => factors.push(format!("{name}^{k}")),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}
