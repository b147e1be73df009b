//! Problem files: parsing, validation and the normalized echo.

use serde::{Deserialize, Serialize};
use stphase::poly::rational::{format_rational, parse_rational};
use stphase::poly::DEFAULT_DEGREE_CAP;
use stphase::{parse_polynomial_capped, Polynomial, Rational};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Fourier,
    Milnor,
    Tame,
    Bifurcation,
    Betti,
    Vanishing,
    Irr,
    Polygon,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Fourier => "fourier",
            Task::Milnor => "milnor",
            Task::Tame => "tame",
            Task::Bifurcation => "bifurcation",
            Task::Betti => "betti",
            Task::Vanishing => "vanishing",
            Task::Irr => "irr",
            Task::Polygon => "polygon",
        }
    }
}

/// A rational written as text (`"-3/4"`) or as a JSON/TOML integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    fn parse(&self, field: &str) -> Result<Rational, ValidationError> {
        match self {
            Number::Int(n) => Ok(Rational::from_integer((*n).into())),
            Number::Text(t) => parse_rational(t.trim()).ok_or_else(|| ValidationError::BadRational { field: field.into(), text: t.clone() }),
        }
    }
}

fn default_vars() -> Vec<String> {
    vec!["x".into(), "y".into()]
}

fn default_q() -> String {
    "1".into()
}

fn default_seed() -> u64 {
    1
}

/// A problem as written in an input file. Field names follow the file format in
/// `docs/input-format.md`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    #[serde(default = "default_vars")]
    pub vars: Vec<String>,
    #[serde(rename = "P")]
    pub p: String,
    #[serde(rename = "Q", default = "default_q")]
    pub q: String,
    pub task: Task,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<[Number; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w0: Option<[Number; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<[Number; 2]>,
    /// `"infinity"` or a rational line parameter.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c0: Option<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<[Number; 2]>,
    #[serde(rename = "S", default, skip_serializing_if = "Option::is_none")]
    pub s: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_s: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betti_s: Option<[u64; 2]>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_cap: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("cannot read input: {0}")]
    Io(String),
    #[error("malformed problem file: {0}")]
    Format(String),
    #[error("expected exactly two distinct variable names, got {0:?}")]
    Vars(Vec<String>),
    #[error("invalid variable name {0:?}")]
    VarName(String),
    #[error("field {field}: {message}")]
    Expression { field: String, message: String },
    #[error("field {field}: {text:?} is not a rational number")]
    BadRational { field: String, text: String },
    #[error("task {task} requires field {field}")]
    Missing { task: &'static str, field: &'static str },
    #[error("task {task} expects a polynomial (Q = 1)")]
    NotPolynomial { task: &'static str },
    #[error("field {field} must lie in 1..={max}")]
    OutOfRange { field: &'static str, max: usize },
    #[error("field at: expected \"infinity\" or a rational, got {0:?}")]
    BadCenter(String),
}

pub const DEFAULT_SAMPLES: usize = 3;
pub const DEFAULT_PROBES: usize = 4;
pub const MAX_SAMPLES: usize = 64;
pub const MAX_DEGREE_CAP: u32 = 64;

pub type Pair = (Rational, Rational);

/// Line parameter where irregularity is measured.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum At {
    Infinity,
    Finite(Rational),
}

/// A validated problem with parsed expressions and parameters.
#[derive(Clone, Debug)]
pub struct Problem {
    pub task: Task,
    pub p: Polynomial,
    pub q: Polynomial,
    pub s: Option<Polynomial>,
    pub w: Option<Pair>,
    pub w0: Option<Pair>,
    pub base: Option<Pair>,
    pub at: Option<At>,
    pub c0: Option<Rational>,
    pub point: Option<Pair>,
    pub mu_s: Option<u64>,
    pub betti_s: Option<(u64, u64)>,
    pub seed: u64,
    pub samples: usize,
    pub probes: usize,
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_') && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn pair(v: &Option<[Number; 2]>, field: &str) -> Result<Option<Pair>, ValidationError> {
    v.as_ref().map(|[a, b]| Ok((a.parse(field)?, b.parse(field)?))).transpose()
}

fn canonical_pair(v: &Option<[Number; 2]>) -> Option<[Number; 2]> {
    v.as_ref().map(|[a, b]| {
        let f = |n: &Number| match n.parse("") {
            Ok(q) => Number::Text(format_rational(&q)),
            Err(_) => n.clone(),
        };
        [f(a), f(b)]
    })
}

impl ProblemSpec {
    /// Parses a JSON or TOML document; JSON is recognised by a leading `{`.
    pub fn from_text(text: &str) -> Result<ProblemSpec, ValidationError> {
        if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| ValidationError::Format(e.to_string()))
        } else {
            toml::from_str(text).map_err(|e| ValidationError::Format(e.to_string()))
        }
    }

    pub fn from_path(path: &std::path::Path) -> Result<ProblemSpec, ValidationError> {
        let text = std::fs::read_to_string(path).map_err(|e| ValidationError::Io(format!("{}: {e}", path.display())))?;
        ProblemSpec::from_text(&text)
    }

    /// The inline form: `P` over `x, y` with everything else defaulted.
    pub fn new(task: Task, p: &str) -> ProblemSpec {
        ProblemSpec {
            vars: default_vars(),
            p: p.into(),
            q: default_q(),
            task,
            w: None,
            w0: None,
            base: None,
            at: None,
            c0: None,
            point: None,
            s: None,
            mu_s: None,
            betti_s: None,
            seed: default_seed(),
            samples: None,
            probes: None,
            degree_cap: None,
        }
    }

    pub fn validate(&self) -> Result<Problem, ValidationError> {
        let task = self.task.name();
        if self.vars.len() != 2 || self.vars[0] == self.vars[1] {
            return Err(ValidationError::Vars(self.vars.clone()));
        }
        if let Some(bad) = self.vars.iter().find(|v| !is_identifier(v)) {
            return Err(ValidationError::VarName(bad.clone()));
        }
        let cap = self.degree_cap.unwrap_or(DEFAULT_DEGREE_CAP);
        if cap == 0 || cap > MAX_DEGREE_CAP {
            return Err(ValidationError::OutOfRange { field: "degree_cap", max: MAX_DEGREE_CAP as usize });
        }
        let expr = |text: &str, field: &str| {
            parse_polynomial_capped(text, &self.vars, cap).map_err(|e| ValidationError::Expression { field: field.into(), message: e.to_string() })
        };
        let p = expr(&self.p, "P")?;
        let q = expr(&self.q, "Q")?;
        let s = self.s.as_deref().map(|t| expr(t, "S")).transpose()?;
        let samples = self.samples.unwrap_or(DEFAULT_SAMPLES);
        let probes = self.probes.unwrap_or(DEFAULT_PROBES);
        if !(1..=MAX_SAMPLES).contains(&samples) {
            return Err(ValidationError::OutOfRange { field: "samples", max: MAX_SAMPLES });
        }
        if !(1..=MAX_SAMPLES).contains(&probes) {
            return Err(ValidationError::OutOfRange { field: "probes", max: MAX_SAMPLES });
        }
        let at = match self.at.as_deref().map(str::trim) {
            None => None,
            Some("infinity") => Some(At::Infinity),
            Some(t) => Some(At::Finite(parse_rational(t).ok_or_else(|| ValidationError::BadCenter(t.into()))?)),
        };
        let problem = Problem {
            task: self.task,
            p,
            q,
            s,
            w: pair(&self.w, "w")?,
            w0: pair(&self.w0, "w0")?,
            base: pair(&self.base, "base")?,
            at,
            c0: self.c0.as_ref().map(|c| c.parse("c0")).transpose()?,
            point: pair(&self.point, "point")?,
            mu_s: self.mu_s,
            betti_s: self.betti_s.map(|[a, b]| (a, b)),
            seed: self.seed,
            samples,
            probes,
        };
        match self.task {
            Task::Tame | Task::Bifurcation | Task::Betti if !problem.q.is_constant() || problem.q.is_zero() => {
                return Err(ValidationError::NotPolynomial { task });
            }
            Task::Betti if problem.c0.is_none() => return Err(ValidationError::Missing { task, field: "c0" }),
            Task::Irr if problem.w0.is_none() => return Err(ValidationError::Missing { task, field: "w0" }),
            Task::Vanishing if problem.c0.is_some() && problem.point.is_none() => {
                return Err(ValidationError::Missing { task, field: "point" });
            }
            _ => {}
        }
        Ok(problem)
    }

    /// The spec with rationals in canonical form and defaults made explicit.
    pub fn normalized(&self) -> ProblemSpec {
        let mut out = self.clone();
        out.w = canonical_pair(&self.w);
        out.w0 = canonical_pair(&self.w0);
        out.base = canonical_pair(&self.base);
        out.point = canonical_pair(&self.point);
        out.c0 = self.c0.as_ref().map(|c| c.parse("").map(|q| Number::Text(format_rational(&q))).unwrap_or_else(|_| c.clone()));
        out.samples = Some(self.samples.unwrap_or(DEFAULT_SAMPLES));
        out.probes = Some(self.probes.unwrap_or(DEFAULT_PROBES));
        out.degree_cap = Some(self.degree_cap.unwrap_or(DEFAULT_DEGREE_CAP));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_and_toml_agree() {
        let json = r#"{"P": "x - y^3", "Q": "x", "task": "fourier", "w": ["2", 5]}"#;
        let toml = "P = \"x - y^3\"\nQ = \"x\"\ntask = \"fourier\"\nw = [\"2\", 5]\n";
        let a = ProblemSpec::from_text(json).unwrap();
        let b = ProblemSpec::from_text(toml).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.seed, 1);
        assert_eq!(a.validate().unwrap().w, Some((Rational::from_integer(2.into()), Rational::from_integer(5.into()))));
    }

    #[test]
    fn validation_failures() {
        let mut s = ProblemSpec::new(Task::Tame, "x^2 + z");
        assert!(matches!(s.validate(), Err(ValidationError::Expression { .. })));
        s.p = "x^2".into();
        s.q = "x".into();
        assert!(matches!(s.validate(), Err(ValidationError::NotPolynomial { .. })));
        let mut s = ProblemSpec::new(Task::Irr, "y");
        assert!(matches!(s.validate(), Err(ValidationError::Missing { field: "w0", .. })));
        s.vars = vec!["x".into(), "x".into()];
        assert!(matches!(s.validate(), Err(ValidationError::Vars(_))));
        assert!(matches!(ProblemSpec::from_text("{\"P\": 1}"), Err(ValidationError::Format(_))));
        assert!(matches!(ProblemSpec::from_text("{\"P\": \"x\", \"task\": \"tame\", \"extra\": 1}"), Err(ValidationError::Format(_))));
    }

    #[test]
    fn normalization_is_idempotent() {
        let mut s = ProblemSpec::new(Task::Fourier, "y");
        s.w = Some([Number::Text(" 4/2".into()), Number::Int(-3)]);
        let n = s.normalized();
        assert_eq!(n.w, Some([Number::Text("2".into()), Number::Text("-3".into())]));
        assert_eq!(n.normalized(), n);
    }
}
