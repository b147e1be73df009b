//! One line per acceptance criterion. Exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use stphase::newton::{is_convenient, jacobian_mu, kouchnirenko_mu, local_polygon, nondegeneracy_check};
use stphase::sampling::Sampler;
use stphase::stationary::{exponential_factors, make_rational_function, spectrum, ComponentKind};
use stphase::{parse_polynomial, Polynomial, Rational, UPoly};
use stphase_cli::{run, run_text, ProblemSpec};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn report(doc: Value) -> Value {
    let spec: ProblemSpec = serde_json::from_value(doc).expect("well-formed problem");
    serde_json::to_value(run(&spec)).expect("reports serialize")
}

fn at<'a>(v: &'a Value, path: &str) -> &'a Value {
    v.pointer(path).unwrap_or(&Value::Null)
}

fn expect_eq(v: &Value, path: &str, want: Value) -> Result<(), String> {
    let got = at(v, path);
    ensure(*got == want, || format!("{path} is {got}, expected {want}"))
}

fn within(start: Instant, limit: Duration) -> Result<String, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))?;
    Ok(format!("{t:.2?}"))
}

fn fourier_of_y_over_x() -> Outcome {
    let start = Instant::now();
    let r = report(json!({"P": "y", "Q": "x", "task": "fourier", "w": ["2", "5"]}));
    for (path, want) in [("/result/generic/total", json!(1)), ("/result/generic/smooth", json!(1)), ("/result/generic/jump", json!(0))] {
        expect_eq(&r, path, want)?;
    }
    let factors = at(&r, "/result/factors").as_array().cloned().unwrap_or_default();
    ensure(factors.len() == 1, || format!("{} factors", factors.len()))?;
    expect_eq(&r, "/result/factors/0/roots/0/value", json!("-2/5"))?;
    expect_eq(&r, "/result/omega", json!(true))?;
    let off = report(json!({"P": "y", "Q": "x", "task": "fourier", "w": ["1", "0"]}));
    expect_eq(&off, "/result/omega", json!(false))?;
    let on = report(json!({"P": "y", "Q": "x", "task": "fourier", "w": ["1", "1"]}));
    expect_eq(&on, "/result/omega", json!(true))?;
    within(start, Duration::from_secs(1))
}

fn fourier_of_cusp_quotient() -> Outcome {
    let start = Instant::now();
    let r = report(json!({"P": "x - y^3", "Q": "x", "task": "fourier", "w": ["1", "1"]}));
    for (path, want) in [("/result/generic/total", json!(2)), ("/result/generic/smooth", json!(1)), ("/result/generic/jump", json!(1))] {
        expect_eq(&r, path, want)?;
    }
    let germ = "/result/spectrum/germs/0";
    expect_eq(&r, &format!("{germ}/point"), json!(["0", "0"]))?;
    expect_eq(&r, &format!("{germ}/special/0/c"), json!("-1"))?;
    expect_eq(&r, &format!("{germ}/special/0/g_value"), json!("1"))?;
    expect_eq(&r, &format!("{germ}/special/0/multiplicity"), json!(1))?;
    expect_eq(&r, &format!("{germ}/crosscheck/kouchnirenko"), json!(1))?;
    expect_eq(&r, &format!("{germ}/crosscheck/agrees"), json!(true))?;
    ensure(at(&r, "/result/spectrum/germs").as_array().map_or(0, Vec::len) == 1, || "expected one germ".into())?;

    let f = make_rational_function(&parse_polynomial("x - y^3", &["x", "y"]).unwrap(), &parse_polynomial("x", &["x", "y"]).unwrap()).unwrap();
    let mut sampler = Sampler::new(11);
    let mut ws = vec![(q(1, 1), q(1, 1)), (q(2, 1), q(-3, 1)), (q(-5, 7), q(4, 3))];
    ws.extend((0..4).map(|_| sampler.point()));
    for w in ws {
        let s = spectrum(&f, &w).map_err(|e| e.to_string())?;
        let want = q(1, 1) - &w.1 * &w.1 * &w.1 / (q(27, 1) * &w.0);
        let smooth: Vec<_> = s.components.iter().filter(|c| c.kind == ComponentKind::Smooth).collect();
        ensure(smooth.len() == 1 && smooth[0].factor_value.as_ref() == Some(&want), || format!("smooth factor at {w:?}: {smooth:?}"))?;
    }
    within(start, Duration::from_secs(5))
}

/// `x^a + y^b` plus up to three interior monomials, all coefficients small and nonzero.
fn random_germ(rng: &mut ChaCha8Rng) -> Polynomial {
    let coeff = |rng: &mut ChaCha8Rng| loop {
        let n = rng.gen_range(-9i64..=9);
        if n != 0 {
            return q(n, rng.gen_range(1..=5));
        }
    };
    let (a, b) = (rng.gen_range(2..=6u32), rng.gen_range(2..=6u32));
    let mut terms = vec![(vec![a, 0], coeff(rng)), (vec![0, b], coeff(rng))];
    for _ in 0..rng.gen_range(0..=3) {
        let i = rng.gen_range(1..=5u32);
        let j = rng.gen_range(1..=6 - i);
        terms.push((vec![i, j], coeff(rng)));
    }
    Polynomial::from_terms(&["x", "y"], terms)
}

fn kouchnirenko_against_jacobian() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let zero = q(0, 1);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 60 {
        attempts += 1;
        ensure(attempts < 1000, || "too few nondegenerate germs drawn".into())?;
        let p = random_germ(&mut rng);
        if nondegeneracy_check(&p) != Ok(true) || !is_convenient(&local_polygon(&p).map_err(|e| e.to_string())?) {
            continue;
        }
        let k = kouchnirenko_mu(&p).map_err(|e| format!("{p}: {e}"))?.mu;
        let j = jacobian_mu(&p, (&zero, &zero)).map_err(|e| format!("{p}: {e}"))?.mu;
        ensure(k == j, || format!("{p}: Kouchnirenko {k:?}, Jacobian {j:?}"))?;
        checked += 1;
    }
    let t = within(start, Duration::from_secs(60))?;
    Ok(format!("{checked} germs, {t}"))
}

fn legendre_closed_form() -> Outcome {
    let mut sampler = Sampler::new(4);
    for _ in 0..10 {
        let (a, b) = sampler.point();
        let p = Polynomial::from_terms(&["x", "y"], [(vec![2, 0], a.clone()), (vec![0, 2], b.clone())]);
        let f = make_rational_function(&p, &Polynomial::constant(&["x", "y"], q(1, 1))).unwrap();
        for _ in 0..3 {
            let w = sampler.point();
            let want = -(&w.0 * &w.0) / (q(4, 1) * &a) - (&w.1 * &w.1) / (q(4, 1) * &b);
            let factors = exponential_factors(&f, &w).map_err(|e| e.to_string())?;
            ensure(factors.len() == 1 && factors[0].factor_poly == UPoly::linear_root(&want), || format!("{p} at {w:?}: {factors:?}"))?;
        }
    }
    Ok("10 functions x 3 parameters".into())
}

fn tameness_of_two_polynomials() -> Outcome {
    let start = Instant::now();
    let t = report(json!({"P": "x^2 + y^2", "task": "tame"}));
    expect_eq(&t, "/result/mu", json!(1))?;
    expect_eq(&t, "/result/report/tame", json!("yes"))?;
    let b = report(json!({"P": "x^2 + y^2", "task": "bifurcation"}));
    expect_eq(&b, "/result/B_equals_Sigma", json!(true))?;
    expect_eq(&b, "/result/sigma_poly", json!("c"))?;
    expect_eq(&b, "/result/generic_fiber_betti", json!(1))?;
    for (c0, bouquet) in [("0", 0), ("1", 1)] {
        let r = report(json!({"P": "x^2 + y^2", "task": "betti", "c0": c0}));
        expect_eq(&r, "/result/bouquet_count", json!(bouquet))?;
    }
    let n = report(json!({"P": "x + x^2*y", "task": "tame"}));
    expect_eq(&n, "/result/mu", json!(0))?;
    expect_eq(&n, "/result/report/tame", json!("no"))?;
    expect_eq(&n, "/result/report/witness/mu", json!(2))?;
    within(start, Duration::from_secs(2))
}

fn irregularity_along_diagonal() -> Outcome {
    let r = report(json!({"P": "x - y^3", "Q": "x", "task": "irr", "w0": ["1", "1"]}));
    let mut orders: Vec<(String, u64)> = at(&r, "/result/branches")
        .as_array()
        .ok_or("no branches")?
        .iter()
        .map(|b| (b["pole_order"].to_string(), b["multiplicity"].as_u64().unwrap_or(0)))
        .collect();
    orders.sort();
    ensure(orders == [("\"0\"".to_string(), 1), ("\"2\"".to_string(), 1)], || format!("branches {orders:?}"))?;
    expect_eq(&r, "/result/irregularity", json!("2"))?;
    let stokes: Vec<(&Value, &Value, &Value)> =
        at(&r, "/result/stokes_directions").as_array().ok_or("no Stokes directions")?.iter().map(|s| (&s["order"], &s["kind"], &s["angle_over_pi"])).collect();
    let want: Vec<Value> = ["1/4", "3/4", "5/4", "7/4"].iter().map(|a| json!(a)).collect();
    ensure(stokes.len() == 4 && stokes.iter().zip(&want).all(|(s, a)| *s.0 == json!("2") && *s.1 == json!("exact") && s.2 == a), || {
        format!("Stokes directions {stokes:?}")
    })?;
    Ok("order 2 and 0, four directions".into())
}

fn balance_on_random_functions() -> Outcome {
    let mut source = Sampler::new(2024);
    for i in 0..20u64 {
        let f = source.rational_function();
        let mut sampler = Sampler::new(i + 1);
        let mut seen = Vec::new();
        for _ in 0..3 {
            let w = sampler.point();
            let s = spectrum(&f, &w).map_err(|e| format!("{} / {}: {e}", f.p, f.q))?;
            let germs: u64 = s.germs.iter().map(|g| g.total_m).sum();
            ensure(s.total_rank == s.smooth_rank + germs, || format!("{} / {}: {} != {} + {germs}", f.p, f.q, s.total_rank, s.smooth_rank))?;
            ensure(s.spectral_poly.deg() as u64 == s.total_rank, || format!("{} / {}: spectral degree", f.p, f.q))?;
            seen.push((s.total_rank, s.smooth_rank, s.jump_rank));
        }
        ensure(seen.windows(2).all(|p| p[0] == p[1]), || format!("{} / {}: {seen:?}", f.p, f.q))?;
    }
    Ok("20 functions x 3 parameters".into())
}

const VALID: [&str; 4] = [
    r#"{"P": "x - y^3", "Q": "x", "task": "fourier", "w": ["1", "1"]}"#,
    "P = \"x^2 + y^2\"\ntask = \"betti\"\nc0 = 1\n",
    r#"{"P": "x^3 + y^4", "task": "milnor", "point": [0, 0], "seed": 3}"#,
    "P = \"x - y^3\"\nQ = \"x\"\ntask = \"irr\"\nw0 = [\"1\", \"1\"]\n",
];

const EXPRESSION_NOISE: [&str; 16] = ["^", "^^", "*", "(", ")", "/", "+-", "x^-1", "/0", "y^99999", "z", "\u{3be}", "2^", "..", "x y", "1e5"];
const DOCUMENT_NOISE: &[u8] = b"{}[]\",:=#\\ 0123456789-./^*xyPQ\n";

fn mutate(rng: &mut ChaCha8Rng) -> String {
    let base = VALID[rng.gen_range(0..VALID.len())];
    match rng.gen_range(0..3) {
        0 => {
            let mut expr = String::from(["x - y^3", "x^2 + y^2", "y/x", "3*x*y - 1"][rng.gen_range(0..4)]);
            for _ in 0..rng.gen_range(1..=3) {
                let at = rng.gen_range(0..=expr.len());
                if expr.is_char_boundary(at) {
                    expr.insert_str(at, EXPRESSION_NOISE[rng.gen_range(0..EXPRESSION_NOISE.len())]);
                }
            }
            let key = if rng.gen_bool(0.5) { "P" } else { "Q" };
            let mut doc: Value = serde_json::from_str(VALID[0]).unwrap();
            doc[key] = json!(expr);
            doc.to_string()
        }
        1 => {
            let mut bytes = base.as_bytes().to_vec();
            for _ in 0..rng.gen_range(1..=4) {
                let at = rng.gen_range(0..bytes.len().max(1));
                match rng.gen_range(0..4) {
                    0 if !bytes.is_empty() => {
                        bytes.remove(at.min(bytes.len() - 1));
                    }
                    1 => bytes.insert(at, DOCUMENT_NOISE[rng.gen_range(0..DOCUMENT_NOISE.len())]),
                    2 => bytes.truncate(at),
                    _ => {
                        let b = rng.gen_range(0..=255u8);
                        bytes.insert(at, b);
                    }
                }
            }
            String::from_utf8_lossy(&bytes).into_owned()
        }
        _ => {
            let mut doc: Value = serde_json::from_str(VALID[0]).unwrap();
            let (key, bad) = [
                ("task", json!("laplace")),
                ("w", json!(["1"])),
                ("w", json!("1,1")),
                ("w", json!(["1/0", "2"])),
                ("seed", json!(-4)),
                ("samples", json!(100000)),
                ("vars", json!(["x", "x"])),
                ("vars", json!(["x", "y", "z"])),
                ("Q", json!("0")),
                ("P", json!(7)),
                ("extra", json!(true)),
                ("degree_cap", json!(100000)),
            ][rng.gen_range(0..12)]
            .clone();
            doc[key] = bad;
            doc.to_string()
        }
    }
}

fn is_malformed(text: &str) -> bool {
    ProblemSpec::from_text(text).and_then(|s| s.normalized().validate()).is_err()
}

fn determinism_and_fuzzing() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_stphase");
    let dir = std::env::temp_dir().join(format!("stphase-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    for (i, doc) in VALID.iter().enumerate() {
        let path = dir.join(format!("problem{i}.txt"));
        std::fs::write(&path, doc).map_err(|e| e.to_string())?;
        let outputs: Vec<Vec<u8>> =
            (0..3).map(|_| Command::new(exe).arg("--input").arg(&path).arg("--seed").arg("7").output().map(|o| o.stdout).unwrap_or_default()).collect();
        ensure(!outputs[0].is_empty() && outputs.iter().all(|o| *o == outputs[0]), || format!("problem {i}: reports differ across runs"))?;
    }
    let _ = std::fs::remove_dir_all(&dir);

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut malformed, mut attempts) = (0, 0);
    let quiet = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    let result: Result<(), String> = (|| {
        while malformed < 10_000 {
            attempts += 1;
            ensure(attempts < 200_000, || "mutator produced too few malformed inputs".into())?;
            let text = mutate(&mut rng);
            if !is_malformed(&text) {
                continue;
            }
            malformed += 1;
            let r = catch_unwind(|| run_text(&text)).map_err(|_| format!("panic on {text:?}"))?;
            let structured = r.result.is_none() && r.error.as_ref().is_some_and(|e| e.module == "cli" && e.kind == "ValidationError" && !e.message.is_empty());
            ensure(structured && serde_json::from_str::<Value>(&r.to_json()).is_ok(), || format!("unstructured outcome on {text:?}"))?;
        }
        Ok(())
    })();
    std::panic::set_hook(quiet);
    result?;
    Ok(format!("3 runs x {} problems identical, {malformed} malformed inputs rejected", VALID.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("ranks, factor and open set for y/x", fourier_of_y_over_x),
        ("smooth and indeterminacy parts for (x - y^3)/x", fourier_of_cusp_quotient),
        ("Kouchnirenko number equals Jacobian number", kouchnirenko_against_jacobian),
        ("Legendre transform of quadratic forms", legendre_closed_form),
        ("tameness of x^2 + y^2 and x + x^2*y", tameness_of_two_polynomials),
        ("irregularity and Stokes directions along (1,1)", irregularity_along_diagonal),
        ("rank balance on random rational functions", balance_on_random_functions),
        ("determinism and malformed-input handling", determinism_and_fuzzing),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {}: pass  {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
