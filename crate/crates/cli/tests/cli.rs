use std::path::PathBuf;
use std::process::Command;

use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use serde_json::{json, Value};
use stphase_cli::golden::{check, load};
use stphase_cli::{run, run_text, ProblemSpec, Task};

fn corpus_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("golden/corpus.json")
}

fn stphase(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_stphase")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn shipped_corpus_passes() {
    let summary = check(&load(&corpus_path()).unwrap());
    assert!(summary.ok(), "{}", summary.render());
    assert!(summary.passed.len() >= 10);
}

#[test]
fn corrupted_case_fails_with_diff() {
    let mut corpus = load(&corpus_path()).unwrap();
    corpus.cases.truncate(1);
    corpus.cases[0].expect["result"]["generic"]["total"] = json!(7);
    let summary = check(&corpus);
    assert!(!summary.ok());
    assert_eq!(summary.mismatches[0].path, "/result/generic/total");
    assert_eq!(summary.mismatches[0].actual, Some(json!(1)));

    let path = std::env::temp_dir().join(format!("stphase-corrupt-{}.json", std::process::id()));
    std::fs::write(&path, serde_json::to_string(&corpus).unwrap()).unwrap();
    let (code, out) = stphase(&["golden", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(code, 3);
    assert!(out.contains("FAIL quotient-y-over-x at /result/generic/total"), "{out}");
    assert!(out.contains("expected: 7"));
}

#[test]
fn exit_codes() {
    assert_eq!(stphase(&["milnor", "--p", "x^2 + y^2", "--point", "0,0"]).0, 0);
    assert_eq!(stphase(&["milnor", "--p", "x + y", "--point", "0,0"]).0, 1);
    assert_eq!(stphase(&["milnor", "--p", "x +* y"]).0, 2);
    assert_eq!(stphase(&["fourier"]).0, 2);
    assert_eq!(stphase(&["vanishing", "--p", "x - y^3", "--q", "x", "--point", "0,0", "--c0", "-1"]).0, 0);
}

#[test]
fn text_output_mirrors_json() {
    let (_, json_out) = stphase(&["tame", "--p", "x^2 + y^2"]);
    let (_, text_out) = stphase(&["tame", "--p", "x^2 + y^2", "--text"]);
    let v: Value = serde_json::from_str(&json_out).unwrap();
    assert_eq!(v["result"]["mu"], json!(1));
    assert!(text_out.contains("result.mu: 1\n"));
    assert!(text_out.contains("result.report.tame: yes\n"));
}

#[test]
fn inline_flags_override_file() {
    let path = std::env::temp_dir().join(format!("stphase-override-{}.toml", std::process::id()));
    std::fs::write(&path, "P = \"x^2 + y^2\"\ntask = \"betti\"\nc0 = 0\n").unwrap();
    let (_, out) = stphase(&["--input", path.to_str().unwrap(), "betti", "--c0", "1"]);
    std::fs::remove_file(&path).unwrap();
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["bouquet_count"], json!(1));
}

#[test]
fn reports_repeat_exactly() {
    let text = r#"{"P": "x - y^3", "Q": "x", "task": "fourier", "seed": 5}"#;
    let first = run_text(text).to_json();
    for _ in 0..2 {
        assert_eq!(run_text(text).to_json(), first);
    }
}

#[test]
fn echoed_spec_reproduces_the_result() {
    for text in
        [r#"{"P": "y", "Q": "x", "task": "fourier"}"#, r#"{"P": "x^3 + y^4", "task": "polygon"}"#, "P = \"x - y^3\"\nQ = \"x\"\ntask = \"irr\"\nw0 = [1, 1]\n"]
    {
        let first = run_text(text);
        let echo = serde_json::to_string(first.spec.as_ref().unwrap()).unwrap();
        let second = run_text(&echo);
        assert_eq!(first.result, second.result, "{text}");
        assert_eq!(first.spec, second.spec);
    }
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, rng_seed: RngSeed::Fixed(0x5eed), failure_persistence: None, ..ProptestConfig::default() }
}

fn expression() -> impl Strategy<Value = String> {
    let atom = prop_oneof![
        Just("x".to_string()),
        Just("y".to_string()),
        (1u32..20).prop_map(|n| n.to_string()),
        (1u32..9, 1u32..9).prop_map(|(a, b)| format!("{a}/{b}"))
    ];
    atom.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a} + {b}")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})*({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a} - {b}")),
            (inner, 0u32..4).prop_map(|(a, k)| format!("({a})^{k}")),
        ]
    })
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn arbitrary_text_never_panics(text in "\\PC{0,80}") {
        let r = run_text(&text);
        prop_assert!(r.result.is_some() || r.error.is_some());
    }

    #[test]
    fn generated_expressions_validate_and_normalize(p in expression(), q in expression()) {
        let mut spec = ProblemSpec::new(Task::Polygon, &p);
        spec.q = q;
        let once = spec.normalized();
        prop_assert_eq!(once.normalized(), once.clone());
        if let Ok(problem) = once.validate() {
            let reparsed = ProblemSpec::new(Task::Polygon, &once.p).normalized();
            prop_assert_eq!(reparsed.validate().map(|r| r.p), Ok(problem.p));
        }
    }
}

#[test]
fn run_accepts_spec_built_in_code() {
    let mut spec = ProblemSpec::new(Task::Milnor, "x^2 - y^3");
    spec.point = Some([stphase_cli::Number::Int(0), stphase_cli::Number::Int(0)]);
    let r = serde_json::to_value(run(&spec)).unwrap();
    assert_eq!(r["result"]["jacobian"]["mu"], json!(2));
}
