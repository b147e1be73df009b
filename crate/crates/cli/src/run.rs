//! Dispatch of validated problems to the engine and report assembly.

use serde::Serialize;
use serde_json::Value;
use stphase::newton::{branches_at, is_convenient, jacobian_mu, kouchnirenko_mu, local_polygon, nondegeneracy_check, pole_orders, polygon_at_point, Center};
use stphase::poly::rational::format_rational;
use stphase::sampling::Sampler;
use stphase::slice::{irregularity_at_infinity, slice_at_point};
use stphase::stationary::{exponential_factors, generic_rank, make_rational_function, omega_probe, spectrum, RationalFunction, Sample};
use stphase::tameness::{bifurcation_set, bouquet_count, default_radius, fiber_betti, is_tame, mu_total};
use stphase::vanishing::{germ_reports, kouchnirenko_crosscheck, local_multiplicity, special_values, transversal_zero};
use stphase::{Error, ErrorRecord, Polynomial, Rational, VERSION};

use crate::spec::{At, Pair, Problem, ProblemSpec, ValidationError};

/// Outcome of one problem. Serialized field order is fixed, so identical inputs give
/// byte-identical JSON.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub task: String,
    pub engine_version: &'static str,
    pub seed: u64,
    pub spec: Option<ProblemSpec>,
    pub result: Option<Value>,
    pub error: Option<ErrorRecord>,
    pub warnings: Vec<String>,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_ENGINE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_GOLDEN: i32 = 3;

impl Report {
    pub fn exit_code(&self) -> i32 {
        match &self.error {
            None => EXIT_OK,
            Some(e) if e.module == "cli" => EXIT_VALIDATION,
            Some(_) => EXIT_ENGINE,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    fn invalid(spec: Option<ProblemSpec>, e: &ValidationError) -> Report {
        Report {
            task: spec.as_ref().map_or("unknown", |s| s.task.name()).to_string(),
            engine_version: VERSION,
            seed: spec.as_ref().map_or(1, |s| s.seed),
            spec,
            result: None,
            error: Some(validation_record(e)),
            warnings: Vec::new(),
        }
    }
}

pub fn validation_record(e: &ValidationError) -> ErrorRecord {
    ErrorRecord { module: "cli", kind: "ValidationError".into(), message: e.to_string() }
}

/// Parses and runs a problem document (JSON or TOML).
pub fn run_text(text: &str) -> Report {
    match ProblemSpec::from_text(text) {
        Ok(spec) => run(&spec),
        Err(e) => Report::invalid(None, &e),
    }
}

/// Validates and runs a problem. Never panics on user input: validation failures and
/// engine errors become structured records.
pub fn run(spec: &ProblemSpec) -> Report {
    let echo = spec.normalized();
    let problem = match echo.validate() {
        Ok(p) => p,
        Err(e) => return Report::invalid(Some(echo), &e),
    };
    let mut warnings = Vec::new();
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| dispatch(&problem, &mut warnings)));
    let (result, error) = match outcome {
        Ok(Ok(v)) => (Some(v), None),
        Ok(Err(e)) => (None, Some(e.record())),
        Err(panic) => {
            let message = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown failure".into());
            (None, Some(ErrorRecord { module: "engine", kind: "InternalError".into(), message }))
        }
    };
    Report { task: echo.task.name().into(), engine_version: VERSION, seed: echo.seed, spec: Some(echo), result, error, warnings }
}

fn json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("engine types serialize")
}

fn q(r: &Rational) -> String {
    format_rational(r)
}

fn dispatch(p: &Problem, warnings: &mut Vec<String>) -> Result<Value, Error> {
    use crate::spec::Task::*;
    match p.task {
        Fourier => fourier(p, warnings),
        Milnor => milnor(p),
        Polygon => polygon(p),
        Tame => tame(p, warnings),
        Bifurcation => bifurcation(p, warnings),
        Betti => betti(p, warnings),
        Vanishing => vanishing(p, warnings),
        Irr => irr(p, warnings),
    }
}

fn function(p: &Problem, warnings: &mut Vec<String>) -> Result<RationalFunction, Error> {
    let f = make_rational_function(&p.p, &p.q)?;
    if f.reduced {
        warnings.push(format!("reduction performed: P/Q = ({})/({})", f.p, f.q));
    }
    Ok(f)
}

fn crosscheck_warnings(germs: &[stphase::GermReport], warnings: &mut Vec<String>) {
    for g in germs {
        if g.crosscheck.agrees == Some(false) {
            warnings.push(format!("crosscheck disagreement: Kouchnirenko {:?} vs local multiplicity {}", g.crosscheck.kouchnirenko, g.total_m));
        }
    }
}

#[derive(Serialize)]
struct FourierResult {
    #[serde(rename = "P")]
    p: String,
    #[serde(rename = "Q")]
    q: String,
    reduced: bool,
    generic: stphase::stationary::GenericRank,
    w_source: &'static str,
    spectrum: stphase::FourierSpectrum,
    factors: Vec<stphase::stationary::ExponentialFactor>,
    omega: bool,
}

fn fourier(p: &Problem, warnings: &mut Vec<String>) -> Result<Value, Error> {
    let f = function(p, warnings)?;
    let generic = generic_rank(&f, p.seed, p.samples)?;
    warnings.push(format!("probabilistic: generic rank agreed on {} of {} sampled parameters", generic.samples.len(), generic.draws));
    let (w, w_source) = match &p.w {
        Some(w) => (w.clone(), "input"),
        None => (generic.samples[0].0.clone(), "sampled"),
    };
    let s = spectrum(&f, &w)?;
    crosscheck_warnings(&s.germs, warnings);
    let factors = exponential_factors(&f, &w)?;
    let omega = omega_probe(&f, &w, &default_radius(), p.probes, p.seed);
    warnings.push(format!("probabilistic: omega membership from {} perturbations", p.probes));
    Ok(json(&FourierResult { p: f.p.to_string(), q: f.q.to_string(), reduced: f.reduced, generic, w_source, spectrum: s, factors, omega }))
}

/// `p(z + a) - p(a)`, the germ of `p` at `a` moved to the origin.
fn germ_at(p: &Polynomial, a: &Pair) -> Polynomial {
    let x = &p.var_like(0) + &p.constant_like(a.0.clone());
    let y = &p.var_like(1) + &p.constant_like(a.1.clone());
    let moved = p.compose(&[x, y]);
    let value = p.eval_all(&[a.0.clone(), a.1.clone()]);
    &moved - &p.constant_like(value)
}

fn origin() -> Pair {
    (Rational::from_integer(0.into()), Rational::from_integer(0.into()))
}

#[derive(Serialize)]
struct MilnorResult {
    point: Sample,
    value: String,
    jacobian: stphase::MilnorReport,
    kouchnirenko: Option<stphase::MilnorReport>,
    kouchnirenko_status: Option<String>,
    agrees: Option<bool>,
}

fn milnor(p: &Problem) -> Result<Value, Error> {
    let point = p.point.clone().unwrap_or_else(origin);
    let jacobian = jacobian_mu(&p.p, (&point.0, &point.1))?;
    let germ = germ_at(&p.p, &point);
    let (kouchnirenko, status) = match kouchnirenko_mu(&germ) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(Error::from(e).kind())),
    };
    let agrees = kouchnirenko.as_ref().map(|k| k.mu == jacobian.mu);
    Ok(json(&MilnorResult {
        value: q(&p.p.eval_all(&[point.0.clone(), point.1.clone()])),
        point: Sample(point),
        jacobian,
        kouchnirenko,
        kouchnirenko_status: status,
        agrees,
    }))
}

#[derive(Serialize)]
struct LocalPolygonResult {
    point: Sample,
    polygon: stphase::NewtonPolygon,
    convenient: bool,
    nondegenerate: bool,
}

#[derive(Serialize)]
struct PuiseuxResult {
    polygon: stphase::newton::PuiseuxPolygon,
    branches: Vec<stphase::newton::BranchGroup>,
    pole_orders: Option<Vec<(String, u32)>>,
}

fn polygon(p: &Problem) -> Result<Value, Error> {
    match &p.at {
        Some(at) => {
            let center = match at {
                At::Infinity => Center::Infinity,
                At::Finite(l) => Center::Finite(l.clone()),
            };
            let polygon = polygon_at_point(&p.p, &center)?;
            let branches = branches_at(&p.p, &center)?;
            let orders = match center {
                Center::Infinity => Some(pole_orders(&p.p)?.into_iter().map(|(o, m)| (q(&o), m)).collect()),
                Center::Finite(_) => None,
            };
            Ok(json(&PuiseuxResult { polygon, branches, pole_orders: orders }))
        }
        None => {
            let point = p.point.clone().unwrap_or_else(origin);
            let germ = germ_at(&p.p, &point);
            let polygon = local_polygon(&germ)?;
            Ok(json(&LocalPolygonResult { point: Sample(point), convenient: is_convenient(&polygon), nondegenerate: nondegeneracy_check(&germ)?, polygon }))
        }
    }
}

#[derive(Serialize)]
struct TameResult {
    mu: stphase::Mu,
    report: stphase::TameReport,
}

fn tame(p: &Problem, warnings: &mut Vec<String>) -> Result<Value, Error> {
    let mu = mu_total(&p.p, p.s.as_ref())?;
    let report = is_tame(&p.p, p.s.as_ref(), p.seed, p.probes)?;
    warnings.push(format!("probabilistic: tameness verdict from {} perturbations", p.probes));
    Ok(json(&TameResult { mu, report }))
}

fn bifurcation(p: &Problem, warnings: &mut Vec<String>) -> Result<Value, Error> {
    let report = bifurcation_set(&p.p, p.s.as_ref(), p.betti_s, p.seed, p.probes)?;
    warnings.push(format!("probabilistic: tameness verdict from {} perturbations", p.probes));
    Ok(json(&report))
}

#[derive(Serialize)]
struct BettiResult {
    fiber: stphase::tameness::FiberBetti,
    bouquet_count: u64,
}

fn betti(p: &Problem, warnings: &mut Vec<String>) -> Result<Value, Error> {
    let c0 = p.c0.as_ref().expect("validated");
    let fiber = fiber_betti(&p.p, c0, p.s.as_ref(), p.betti_s, p.seed, p.probes)?;
    let bouquet = bouquet_count(&p.p, c0, p.s.as_ref(), p.mu_s, p.seed, p.probes)?;
    warnings.push(format!("probabilistic: tameness verdict from {} perturbations", p.probes));
    Ok(json(&BettiResult { fiber, bouquet_count: bouquet }))
}

#[derive(Serialize)]
struct PointQuery {
    c0: String,
    local_multiplicity: Option<u32>,
    local_multiplicity_status: Option<String>,
    transversal_zero: bool,
    kouchnirenko: Option<u64>,
}

#[derive(Serialize)]
struct VanishingResult {
    w: Sample,
    w_source: &'static str,
    germs: Vec<stphase::GermReport>,
    at_point: Option<stphase::GermReport>,
    query: Option<PointQuery>,
}

fn vanishing(p: &Problem, warnings: &mut Vec<String>) -> Result<Value, Error> {
    let f = function(p, warnings)?;
    let (w, w_source) = match &p.w {
        Some(w) => (w.clone(), "input"),
        None => (Sampler::new(p.seed).point(), "sampled"),
    };
    let germs = germ_reports(&f, &w)?;
    crosscheck_warnings(&germs, warnings);
    let at_point = p.point.as_ref().map(|pt| special_values(&f, &w, pt)).transpose()?;
    let query = match (&p.point, &p.c0) {
        (Some(pt), Some(c)) => {
            let (m, status) = match local_multiplicity(&f, &w, pt, c) {
                Ok(m) => (Some(m), None),
                Err(e) => (None, Some(Error::from(e).kind())),
            };
            Some(PointQuery {
                c0: q(c),
                local_multiplicity: m,
                local_multiplicity_status: status,
                transversal_zero: transversal_zero(&f, c, pt)?,
                kouchnirenko: kouchnirenko_crosscheck(&f, &w, pt, c)?,
            })
        }
        _ => None,
    };
    Ok(json(&VanishingResult { w: Sample(w), w_source, germs, at_point, query }))
}

fn irr(p: &Problem, warnings: &mut Vec<String>) -> Result<Value, Error> {
    let f = function(p, warnings)?;
    let w0 = p.w0.as_ref().expect("validated");
    warnings.push("probabilistic: line spectrum reconstructed from sampled parameters".into());
    let report = match &p.at {
        None | Some(At::Infinity) => irregularity_at_infinity(&f, w0, p.seed)?,
        Some(At::Finite(l)) => slice_at_point(&f, &p.base.clone().unwrap_or_else(origin), w0, Some(l), p.seed)?,
    };
    Ok(json(&report))
}
