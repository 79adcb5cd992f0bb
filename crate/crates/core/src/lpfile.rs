//! Reading and writing linear programs in CPLEX LP text format.
//!
//! Coefficients are written as decimals when that is exact. A row with any
//! other rational coefficient is multiplied by the lcm of its denominators and
//! preceded by a `\ scaled_by: L` comment; the reader divides it back out, so
//! a written model parses to an identical model.

use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;
use crate::verify::lp::{LinearProgram, Relation, Sense};
use crate::{CtpError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpConstraint {
    pub name: String,
    pub terms: Vec<(String, Rational)>,
    pub rel: Relation,
    pub rhs: Rational,
}

/// A model whose variables are all nonnegative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpModel {
    pub sense: Sense,
    pub objective: Vec<(String, Rational)>,
    pub constraints: Vec<LpConstraint>,
    pub variables: Vec<String>,
}

const TERMS_PER_LINE: usize = 8;

fn drop_zeros(terms: Vec<(String, Rational)>) -> Vec<(String, Rational)> {
    terms.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

impl LpModel {
    pub fn new(sense: Sense, variables: Vec<String>) -> Self {
        LpModel {
            sense,
            objective: Vec::new(),
            constraints: Vec::new(),
            variables,
        }
    }

    pub fn set_objective(&mut self, terms: Vec<(String, Rational)>) {
        self.objective = drop_zeros(terms);
    }

    pub fn add_constraint(&mut self, name: impl Into<String>, terms: Vec<(String, Rational)>, rel: Relation, rhs: Rational) {
        self.constraints.push(LpConstraint {
            name: name.into(),
            terms: drop_zeros(terms),
            rel,
            rhs,
        });
    }

    pub fn write(&self, header: &[&str]) -> String {
        let mut out = String::new();
        for line in header {
            let _ = writeln!(out, "\\ {line}");
        }
        out.push_str(match self.sense {
            Sense::Min => "Minimize\n",
            Sense::Max => "Maximize\n",
        });
        if self.objective.is_empty() {
            let first = self.variables.first().map_or("x", String::as_str);
            let _ = writeln!(out, " obj: 0 {first}");
        } else {
            write_row(&mut out, "obj", &self.objective, None);
        }
        out.push_str("Subject To\n");
        for c in &self.constraints {
            write_row(&mut out, &c.name, &c.terms, Some((c.rel, &c.rhs)));
        }
        out.push_str("Bounds\n");
        for v in &self.variables {
            let _ = writeln!(out, " {v} >= 0");
        }
        out.push_str("End\n");
        out
    }

    pub fn write_to(&self, path: &Path, header: &[&str]) -> Result<()> {
        std::fs::write(path, self.write(header))?;
        Ok(())
    }

    pub fn parse(text: &str) -> Result<LpModel> {
        Parser::default().run(text)
    }

    /// The model as a [`LinearProgram`] over its variables in declared order.
    pub fn to_linear_program(&self) -> Result<LinearProgram> {
        let index: std::collections::HashMap<&str, usize> =
            self.variables.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| CtpError::Parse(format!("undeclared variable {name}")))
        };
        let mut lp = LinearProgram::new(self.variables.len(), self.sense);
        for (v, c) in &self.objective {
            lp.set_objective(lookup(v)?, c.clone());
        }
        for c in &self.constraints {
            let coeffs = c
                .terms
                .iter()
                .map(|(v, a)| Ok((lookup(v)?, a.clone())))
                .collect::<Result<Vec<_>>>()?;
            lp.add_row(coeffs, c.rel, c.rhs.clone());
        }
        Ok(lp)
    }
}

/// Exact decimal text of `r`, if its denominator has only factors 2 and 5.
pub fn exact_decimal(r: &Rational) -> Option<String> {
    let mut q = r.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut a, mut b) = (0u32, 0u32);
    while q.is_even() {
        q /= &two;
        a += 1;
    }
    while (&q % &five).is_zero() {
        q /= &five;
        b += 1;
    }
    if !q.is_one() {
        return None;
    }
    let k = a.max(b);
    let scaled = r.numer() * (BigInt::from(10).pow(k) / r.denom());
    let neg = scaled.is_negative();
    let digits = scaled.abs().to_string();
    let k = k as usize;
    let body = if k == 0 {
        digits
    } else {
        let padded = format!("{digits:0>width$}", width = k + 1);
        let (int_part, frac) = padded.split_at(padded.len() - k);
        format!("{int_part}.{frac}")
    };
    Some(if neg { format!("-{body}") } else { body })
}

fn parse_number(s: &str) -> Result<Rational> {
    let bad = || CtpError::Parse(format!("invalid number {s:?}"));
    let (neg, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac.is_empty() || !int_part.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let mantissa: BigInt = format!("{int_part}{frac}").parse().map_err(|_| bad())?;
    let r = Rational::new(mantissa, BigInt::from(10).pow(frac.len() as u32));
    Ok(if neg { -r } else { r })
}

fn write_row(out: &mut String, name: &str, terms: &[(String, Rational)], bound: Option<(Relation, &Rational)>) {
    let mut all: Vec<&Rational> = terms.iter().map(|(_, c)| c).collect();
    if let Some((_, rhs)) = bound {
        all.push(rhs);
    }
    let exact = all.iter().all(|c| exact_decimal(c).is_some());
    let scale = if exact {
        BigInt::one()
    } else {
        let l = all.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let _ = writeln!(out, "\\ scaled_by: {l}");
        l
    };
    let fmt = |c: &Rational| -> String {
        if exact {
            exact_decimal(c).unwrap()
        } else {
            (c * Rational::from_integer(scale.clone())).to_integer().to_string()
        }
    };
    let _ = write!(out, " {name}:");
    for (k, (v, c)) in terms.iter().enumerate() {
        if k > 0 && k % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let text = fmt(c);
        match (k, text.strip_prefix('-')) {
            (0, None) => {
                let _ = write!(out, " {text} {v}");
            }
            (0, Some(abs)) => {
                let _ = write!(out, " - {abs} {v}");
            }
            (_, None) => {
                let _ = write!(out, " + {text} {v}");
            }
            (_, Some(abs)) => {
                let _ = write!(out, " - {abs} {v}");
            }
        }
    }
    if terms.is_empty() {
        out.push_str(" 0 x");
    }
    if let Some((rel, rhs)) = bound {
        let op = match rel {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        };
        let _ = write!(out, " {op} {}", fmt(rhs));
    }
    out.push('\n');
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Start,
    Objective,
    Constraints,
    Bounds,
    End,
}

#[derive(Default)]
struct Parser {
    tokens: Vec<String>,
    scale: Option<BigInt>,
    pending_scale: Option<BigInt>,
}

impl Parser {
    fn run(mut self, text: &str) -> Result<LpModel> {
        let mut section = Section::Start;
        let mut sense = Sense::Min;
        let mut objective = Vec::new();
        let mut constraints = Vec::new();
        let mut variables = Vec::new();
        for raw in text.lines() {
            let line = raw.trim();
            if let Some(comment) = line.strip_prefix('\\') {
                if let Some(l) = comment.trim().strip_prefix("scaled_by:") {
                    let l: BigInt = l.trim().parse().map_err(|_| CtpError::Parse(format!("bad scale in {raw:?}")))?;
                    self.pending_scale = Some(l);
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let lower = line.to_ascii_lowercase();
            let header = match lower.as_str() {
                "minimize" | "minimum" | "min" => Some((Section::Objective, Some(Sense::Min))),
                "maximize" | "maximum" | "max" => Some((Section::Objective, Some(Sense::Max))),
                "subject to" | "such that" | "st" | "s.t." => Some((Section::Constraints, None)),
                "bounds" => Some((Section::Bounds, None)),
                "end" => Some((Section::End, None)),
                _ => None,
            };
            if let Some((next, s)) = header {
                if section == Section::Objective {
                    objective = self.finish_objective()?;
                }
                if let Some(s) = s {
                    sense = s;
                }
                section = next;
                continue;
            }
            match section {
                Section::Objective => self.push_tokens(line),
                Section::Constraints => {
                    self.push_tokens(line);
                    while let Some(c) = self.take_constraint()? {
                        constraints.push(c);
                    }
                }
                Section::Bounds => {
                    let parts: Vec<&str> = line.split_whitespace().collect();
                    match parts.as_slice() {
                        [v, ">=", z] if parse_number(z)?.is_zero() => variables.push(v.to_string()),
                        _ => return Err(CtpError::Parse(format!("unsupported bound {line:?}"))),
                    }
                }
                Section::Start | Section::End => {
                    return Err(CtpError::Parse(format!("unexpected line {line:?}")));
                }
            }
        }
        if section != Section::End {
            return Err(CtpError::Parse("missing End".into()));
        }
        if !self.tokens.is_empty() {
            return Err(CtpError::Parse("incomplete constraint".into()));
        }
        Ok(LpModel {
            sense,
            objective,
            constraints,
            variables,
        })
    }

    fn push_tokens(&mut self, line: &str) {
        if self.tokens.is_empty() {
            self.scale = self.pending_scale.take();
        }
        for t in line.split_whitespace() {
            // split a leading name label glued to the next token
            self.tokens.push(t.to_string());
        }
    }

    fn unscale(&self, v: Rational) -> Rational {
        match &self.scale {
            Some(l) => v / Rational::from_integer(l.clone()),
            None => v,
        }
    }

    fn parse_terms(&self, toks: &[String]) -> Result<Vec<(String, Rational)>> {
        let mut terms = Vec::new();
        let mut sign = Rational::one();
        let mut coef: Option<Rational> = None;
        for t in toks {
            match t.as_str() {
                "+" => {}
                "-" => sign = -sign,
                _ => {
                    if let Ok(v) = parse_number(t) {
                        coef = Some(v);
                    } else {
                        let c = coef.take().unwrap_or_else(Rational::one) * &sign;
                        terms.push((t.clone(), self.unscale(c)));
                        sign = Rational::one();
                    }
                }
            }
        }
        if coef.is_some() {
            return Err(CtpError::Parse("dangling coefficient".into()));
        }
        Ok(drop_zeros(terms))
    }

    fn split_name(toks: &[String]) -> (String, &[String]) {
        match toks.first() {
            Some(t) if t.ends_with(':') => (t.trim_end_matches(':').to_string(), &toks[1..]),
            _ => (String::new(), toks),
        }
    }

    fn finish_objective(&mut self) -> Result<Vec<(String, Rational)>> {
        let toks = std::mem::take(&mut self.tokens);
        let (_, body) = Self::split_name(&toks);
        let terms = self.parse_terms(body)?;
        self.scale = None;
        Ok(terms)
    }

    fn take_constraint(&mut self) -> Result<Option<LpConstraint>> {
        let Some(pos) = self.tokens.iter().position(|t| matches!(t.as_str(), "<=" | ">=" | "=" | "=<" | "=>")) else {
            return Ok(None);
        };
        if pos + 1 >= self.tokens.len() {
            return Ok(None);
        }
        let toks: Vec<String> = self.tokens.drain(..pos + 2).collect();
        let rel = match toks[pos].as_str() {
            "<=" | "=<" => Relation::Le,
            ">=" | "=>" => Relation::Ge,
            _ => Relation::Eq,
        };
        let rhs_tok = &toks[pos + 1];
        let (rhs_sign, rhs_text) = match rhs_tok.strip_prefix('-') {
            Some(r) => (-Rational::one(), r),
            None => (Rational::one(), rhs_tok.as_str()),
        };
        let rhs = self.unscale(parse_number(rhs_text)? * rhs_sign);
        let (name, body) = Self::split_name(&toks[..pos]);
        let terms = self.parse_terms(body)?;
        let c = LpConstraint { name, terms, rel, rhs };
        self.scale = None;
        if !self.tokens.is_empty() {
            self.scale = self.pending_scale.take();
        }
        Ok(Some(c))
    }
}
