//! The golden corpus: problems with hand-derived expected values.
//!
//! A case passes when every field of `expect` occurs in the case's report with the same
//! value. Objects are matched key by key, arrays element by element with equal length.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::run::run;
use crate::spec::ProblemSpec;

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenCase {
    pub name: String,
    /// Where the expected values come from, e.g. `closed-form` or `trivial`.
    pub origin: String,
    pub spec: ProblemSpec,
    pub expect: Value,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Corpus {
    #[serde(default)]
    pub cases: Vec<GoldenCase>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Mismatch {
    pub case: String,
    pub path: String,
    pub expected: Value,
    pub actual: Option<Value>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct GoldenSummary {
    pub passed: Vec<String>,
    pub mismatches: Vec<Mismatch>,
    pub warnings: Vec<String>,
}

impl GoldenSummary {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for name in &self.passed {
            out.push_str(&format!("pass {name}\n"));
        }
        for m in &self.mismatches {
            let actual = m.actual.as_ref().map_or("<missing>".to_string(), Value::to_string);
            out.push_str(&format!("FAIL {} at {}\n  expected: {}\n  actual:   {}\n", m.case, m.path, m.expected, actual));
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        let failed: std::collections::BTreeSet<&str> = self.mismatches.iter().map(|m| m.case.as_str()).collect();
        out.push_str(&format!("{} passed, {} failed\n", self.passed.len(), failed.len()));
        out
    }
}

#[derive(Debug, Error)]
pub enum GoldenError {
    #[error("cannot read corpus {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed corpus: {0}")]
    Format(String),
}

pub fn load(path: &std::path::Path) -> Result<Corpus, GoldenError> {
    let text = std::fs::read_to_string(path).map_err(|e| GoldenError::Io { path: path.display().to_string(), message: e.to_string() })?;
    if text.trim().is_empty() {
        return Ok(Corpus::default());
    }
    serde_json::from_str(&text).map_err(|e| GoldenError::Format(e.to_string()))
}

/// Collects the paths where `actual` differs from `expected`.
fn compare(expected: &Value, actual: Option<&Value>, path: &str, case: &str, out: &mut Vec<Mismatch>) {
    let mismatch = |out: &mut Vec<Mismatch>| out.push(Mismatch { case: case.into(), path: path.into(), expected: expected.clone(), actual: actual.cloned() });
    match (expected, actual) {
        (Value::Object(e), Some(Value::Object(a))) => {
            for (k, ev) in e {
                compare(ev, a.get(k), &format!("{path}/{k}"), case, out);
            }
        }
        (Value::Array(e), Some(Value::Array(a))) if e.len() == a.len() => {
            for (i, (ev, av)) in e.iter().zip(a).enumerate() {
                compare(ev, Some(av), &format!("{path}/{i}"), case, out);
            }
        }
        (e, Some(a)) if e == a => {}
        _ => mismatch(out),
    }
}

/// Runs every case (concurrently) and reports in corpus order.
pub fn check(corpus: &Corpus) -> GoldenSummary {
    let mut summary = GoldenSummary::default();
    if corpus.cases.is_empty() {
        summary.warnings.push("corpus is empty".into());
        return summary;
    }
    let reports: Vec<Value> = std::thread::scope(|scope| {
        let handles: Vec<_> = corpus.cases.iter().map(|c| scope.spawn(|| serde_json::to_value(run(&c.spec)).expect("reports serialize"))).collect();
        handles.into_iter().map(|h| h.join().expect("run does not panic")).collect()
    });
    for (case, report) in corpus.cases.iter().zip(&reports) {
        let before = summary.mismatches.len();
        compare(&case.expect, Some(report), "", &case.name, &mut summary.mismatches);
        if summary.mismatches.len() == before {
            summary.passed.push(case.name.clone());
        }
    }
    summary
}

pub fn golden(path: &std::path::Path) -> Result<GoldenSummary, GoldenError> {
    Ok(check(&load(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn subset_matching() {
        let actual = json!({"a": 1, "b": [1, {"c": "x", "d": 2}], "e": null});
        let mut out = Vec::new();
        compare(&json!({"b": [1, {"c": "x"}]}), Some(&actual), "", "t", &mut out);
        assert!(out.is_empty());
        compare(&json!({"b": [1]}), Some(&actual), "", "t", &mut out);
        compare(&json!({"a": 2, "z": 0}), Some(&actual), "", "t", &mut out);
        let paths: Vec<&str> = out.iter().map(|m| m.path.as_str()).collect();
        assert_eq!(paths, ["/b", "/a", "/z"]);
    }

    #[test]
    fn empty_corpus_passes_with_warning() {
        let s = check(&Corpus::default());
        assert!(s.ok());
        assert_eq!(s.warnings, ["corpus is empty"]);
    }
}
