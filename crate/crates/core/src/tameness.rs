//! Global Milnor numbers, tameness at infinity by perturbation, critical values
//! and the topology counts of fibers, for a polynomial `g` on the plane or on a
//! smooth curve `S = 0`.
//!
//! A tameness verdict is a sampling statement: `g` is declared tame when the
//! total Milnor number does not change under a few small linear perturbations.

use serde::Serialize;
use thiserror::Error;

use crate::newton::Mu;
use crate::poly::rational::{format_rational, serde_opt_q, Rational};
use crate::poly::residue::{gcd_over, split_run, Residue};
use crate::poly::roots::{complex_roots, rational_roots, AlgebraicRecord};
use crate::poly::{Polynomial, UPoly};
use crate::sampling::Sampler;
use crate::stationary::Sample;
use crate::system::{solve, total_multiplicity, Component, SystemError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TamenessError {
    #[error("expected polynomials in exactly two shared variables")]
    WrongArity,
    #[error("the curve S = 0 is singular")]
    SingularS,
    #[error("S must be a nonconstant polynomial")]
    InvalidCurve,
    #[error("critical locus is not finite")]
    NonIsolatedCritical,
    #[error("function is not certified tame (verdict: {0})")]
    NotTame(Verdict),
    #[error("no admissible projection found while eliminating")]
    ShearExhausted,
    #[error("count would be negative ({0})")]
    NegativeCount(i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

fn check_pair(g: &Polynomial, s: Option<&Polynomial>) -> Result<(), TamenessError> {
    if g.nvars() != 2 || s.is_some_and(|s| !s.same_vars(g)) {
        return Err(TamenessError::WrongArity);
    }
    Ok(())
}

fn system_error(e: SystemError) -> TamenessError {
    match e {
        SystemError::NotZeroDimensional { .. } => TamenessError::NonIsolatedCritical,
        SystemError::ShearExhausted => TamenessError::ShearExhausted,
        SystemError::WrongArity => TamenessError::WrongArity,
    }
}

/// Checks that `S`, `∂S/∂x`, `∂S/∂y` have no common zero.
pub fn check_smooth_curve(s: &Polynomial) -> Result<(), TamenessError> {
    if s.is_constant() {
        return Err(TamenessError::InvalidCurve);
    }
    let (sx, sy) = (s.derivative(0), s.derivative(1));
    for (a, b) in [(&sx, &sy), (&sy, &sx)] {
        match solve(s, a) {
            Ok(comps) => {
                return if comps.iter().all(|c| c.split_on(b).0.is_none()) { Ok(()) } else { Err(TamenessError::SingularS) };
            }
            Err(SystemError::NotZeroDimensional { .. }) => continue,
            Err(e) => return Err(system_error(e)),
        }
    }
    Err(TamenessError::SingularS)
}

/// Critical points of `g`, or of `g` restricted to `S = 0`; `None` when they are not isolated.
pub fn critical_components(g: &Polynomial, s: Option<&Polynomial>) -> Result<Option<Vec<Component>>, TamenessError> {
    check_pair(g, s)?;
    let (gx, gy) = (g.derivative(0), g.derivative(1));
    let result = match s {
        None => {
            if gx.is_zero() && gy.is_zero() {
                return Ok(None);
            }
            solve(&gx, &gy)
        }
        Some(s) => {
            check_smooth_curve(s)?;
            let lagrange = &(&gx * &s.derivative(1)) - &(&gy * &s.derivative(0));
            if lagrange.is_zero() {
                return Ok(None);
            }
            solve(s, &lagrange)
        }
    };
    match result {
        Ok(comps) => Ok(Some(comps)),
        Err(SystemError::NotZeroDimensional { .. }) => Ok(None),
        Err(e) => Err(system_error(e)),
    }
}

/// Sum of the Milnor numbers of the critical points.
pub fn mu_total(g: &Polynomial, s: Option<&Polynomial>) -> Result<Mu, TamenessError> {
    Ok(match critical_components(g, s)? {
        Some(c) => Mu::Finite(total_multiplicity(&c)),
        None => Mu::INFINITE,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Probe {
    pub w: Sample,
    pub mu: Option<Mu>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TameReport {
    pub mu_total: Mu,
    pub perturbed_mu: Vec<Probe>,
    pub tame: Verdict,
    pub witness: Option<Probe>,
    pub radius: String,
}

pub fn default_radius() -> Rational {
    Rational::new(1.into(), 100.into())
}

/// Compares `μ(g)` with `μ(g - w₁x - w₂y)` for `probes` seeded `w` of size at most 1/100.
pub fn is_tame(g: &Polynomial, s: Option<&Polynomial>, seed: u64, probes: usize) -> Result<TameReport, TamenessError> {
    let radius = default_radius();
    let base = mu_total(g, s)?;
    let mut sampler = Sampler::new(seed);
    let mut perturbed = Vec::new();
    let mut tame = if base.finite().is_some() { Verdict::Yes } else { Verdict::No };
    let mut witness = None;
    for _ in 0..probes.max(1) {
        let w = sampler.perturbation(&radius);
        let lin = &g.var_like(0).scale(&w.0) + &g.var_like(1).scale(&w.1);
        let gw = g - &lin;
        let mu = mu_total(&gw, s).ok();
        let probe = Probe { w: Sample(w), mu };
        match mu {
            None => {
                if tame == Verdict::Yes {
                    tame = Verdict::Inconclusive;
                }
            }
            Some(m) if m != base && base.finite().is_some() => {
                tame = Verdict::No;
                if witness.is_none() {
                    witness = Some(probe.clone());
                }
            }
            Some(_) => {}
        }
        perturbed.push(probe);
    }
    Ok(TameReport { mu_total: base, perturbed_mu: perturbed, tame, witness, radius: format_rational(&radius) })
}

/// Critical values on one family of critical points.
fn value_poly(comp: &Component, g: &Polynomial) -> UPoly {
    comp.char_poly(&comp.eval(g))
}

/// Number of critical points (with multiplicity) on the fiber over each root of `m`, which is
/// constant over the roots in each returned factor.
fn fiber_counts(comps: &[Component], g: &Polynomial, m: &UPoly) -> Vec<(UPoly, u64)> {
    let values: Vec<UPoly> = comps.iter().map(|c| c.eval(g)).collect();
    split_run(m, |ring: &Residue| {
        let mut total = 0u64;
        for (c, v) in comps.iter().zip(&values) {
            let a: Vec<UPoly> = c.param.coeffs().iter().map(|x| UPoly::constant(x.clone())).collect();
            let mut b: Vec<UPoly> = v.coeffs().iter().map(|x| UPoly::constant(x.clone())).collect();
            if b.is_empty() {
                b.push(UPoly::zero());
            }
            b[0] = ring.sub(&b[0], &UPoly::x());
            let gcd = gcd_over(ring, &a, &b)?;
            total += (gcd.len() as u64 - 1) * c.multiplicity as u64;
        }
        Ok(total)
    })
}

/// `μ_{c0}`: critical points with multiplicity on the fiber `g = c0`.
pub fn mu_at(comps: &[Component], g: &Polynomial, c0: &Rational) -> u64 {
    comps
        .iter()
        .map(|c| {
            let v = &c.eval(g) - &UPoly::constant(c0.clone());
            let common = if v.is_zero() { c.param.clone() } else { c.param.gcd(&v) };
            common.deg() as u64 * c.multiplicity as u64
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberData {
    /// Squarefree polynomial in `c` whose roots share the data below.
    #[serde(serialize_with = "crate::poly::ser::in_c")]
    pub value_poly: UPoly,
    pub values: Vec<AlgebraicRecord>,
    #[serde(serialize_with = "serde_opt_q::serialize")]
    pub c0: Option<Rational>,
    pub mu_c0: u64,
    pub betti: Option<i64>,
    pub bouquet_count: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BifurcationReport {
    pub mu: Mu,
    pub tame: Verdict,
    /// Whether the critical values are known to be the whole bifurcation set.
    #[serde(rename = "B_equals_Sigma")]
    pub b_equals_sigma: bool,
    #[serde(serialize_with = "crate::poly::ser::in_c")]
    pub sigma_poly: UPoly,
    pub critical_values: Vec<AlgebraicRecord>,
    pub generic_fiber_betti: Option<i64>,
    pub special_fibers: Vec<FiberData>,
}

/// Betti numbers `(dim H^1(S), dim H^2(S))` of the curve, supplied by the caller.
pub type CurveBetti = (u64, u64);

fn mu_prime(mu: u64, betti_s: Option<CurveBetti>) -> i64 {
    let (h1, h2) = betti_s.unwrap_or((0, 0));
    mu as i64 + h1 as i64 - h2 as i64
}

/// Critical values of `g` and the fiber counts over them.
pub fn bifurcation_set(
    g: &Polynomial,
    s: Option<&Polynomial>,
    betti_s: Option<CurveBetti>,
    seed: u64,
    probes: usize,
) -> Result<BifurcationReport, TamenessError> {
    let comps = critical_components(g, s)?.ok_or(TamenessError::NonIsolatedCritical)?;
    let tame = is_tame(g, s, seed, probes)?.tame;
    let mu = total_multiplicity(&comps);
    let mut sigma = UPoly::one();
    for c in &comps {
        sigma = &sigma * &value_poly(c, g);
    }
    let sigma = sigma.squarefree_part().monic();
    let critical_values = complex_roots(&sigma).iter().map(|r| r.to_record("c")).collect();
    let certified = tame == Verdict::Yes;
    let mp = mu_prime(mu, betti_s);
    let mut special_fibers = Vec::new();
    let mut rest = sigma.clone();
    for r in rational_roots(&sigma) {
        let lin = UPoly::linear_root(&r);
        rest = rest.div_exact(&lin).expect("root divides");
        let m = mu_at(&comps, g, &r);
        special_fibers.push(fiber(lin, Some(r), m, mp, certified));
    }
    if rest.deg() > 0 {
        for (factor, m) in fiber_counts(&comps, g, &rest) {
            special_fibers.push(fiber(factor, None, m, mp, certified));
        }
    }
    Ok(BifurcationReport {
        mu: Mu::Finite(mu),
        tame,
        b_equals_sigma: certified,
        sigma_poly: sigma,
        critical_values,
        generic_fiber_betti: certified.then_some(mp),
        special_fibers,
    })
}

fn fiber(value_poly: UPoly, c0: Option<Rational>, mu_c0: u64, mp: i64, certified: bool) -> FiberData {
    let values = complex_roots(&value_poly).iter().map(|r| r.to_record("c")).collect();
    let count = mp - mu_c0 as i64;
    FiberData { value_poly, values, c0, mu_c0, betti: certified.then_some(count), bouquet_count: certified.then_some(count) }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberBetti {
    #[serde(with = "crate::poly::rational::serde_q")]
    pub c0: Rational,
    pub mu: u64,
    pub mu_prime: i64,
    pub mu_c0: u64,
    pub critical_value: bool,
    pub betti: i64,
}

fn require_tame(g: &Polynomial, s: Option<&Polynomial>, seed: u64, probes: usize) -> Result<Vec<Component>, TamenessError> {
    let report = is_tame(g, s, seed, probes)?;
    if report.tame != Verdict::Yes {
        return Err(TamenessError::NotTame(report.tame));
    }
    Ok(critical_components(g, s)?.expect("finite when tame"))
}

/// Top Betti number of the fiber `g = c0`: `μ' - μ_{c0}`.
pub fn fiber_betti(
    g: &Polynomial,
    c0: &Rational,
    s: Option<&Polynomial>,
    betti_s: Option<CurveBetti>,
    seed: u64,
    probes: usize,
) -> Result<FiberBetti, TamenessError> {
    let comps = require_tame(g, s, seed, probes)?;
    let mu = total_multiplicity(&comps);
    let mp = mu_prime(mu, betti_s);
    let mu_c0 = mu_at(&comps, g, c0);
    let betti = mp - mu_c0 as i64;
    if betti < 0 {
        return Err(TamenessError::NegativeCount(betti));
    }
    Ok(FiberBetti { c0: c0.clone(), mu, mu_prime: mp, mu_c0, critical_value: mu_c0 > 0, betti })
}

/// Number of spheres in the bouquet of the fiber `g = c0`: `μ - μ_{c0}`, less `μ_S` when given.
pub fn bouquet_count(g: &Polynomial, c0: &Rational, s: Option<&Polynomial>, mu_s: Option<u64>, seed: u64, probes: usize) -> Result<u64, TamenessError> {
    let comps = require_tame(g, s, seed, probes)?;
    let count = total_multiplicity(&comps) as i64 - mu_at(&comps, g, c0) as i64 - mu_s.unwrap_or(0) as i64;
    u64::try_from(count).map_err(|_| TamenessError::NegativeCount(count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::poly::rational::{int, rat};

    fn pp(s: &str) -> Polynomial {
        parse_polynomial(s, &["x", "y"]).unwrap()
    }

    #[test]
    fn milnor_totals() {
        assert_eq!(mu_total(&pp("x^2 + y^2"), None).unwrap(), Mu::Finite(1));
        assert_eq!(mu_total(&pp("x + x^2*y"), None).unwrap(), Mu::Finite(0));
        assert_eq!(mu_total(&pp("x^3 + y^3"), None).unwrap(), Mu::Finite(4));
        assert_eq!(mu_total(&pp("x^2"), None).unwrap(), Mu::INFINITE);
        assert_eq!(mu_total(&pp("x"), Some(&pp("x^2 + y^2 - 1"))).unwrap(), Mu::Finite(2));
        assert_eq!(mu_total(&pp("x"), Some(&pp("x^2 - y^2"))), Err(TamenessError::SingularS));
    }

    #[test]
    fn tameness() {
        let t = is_tame(&pp("x^2 + y^2"), None, 1, 4).unwrap();
        assert_eq!(t.tame, Verdict::Yes);
        let t = is_tame(&pp("x + x^2*y"), None, 1, 4).unwrap();
        assert_eq!(t.tame, Verdict::No);
        assert_eq!(t.witness.unwrap().mu, Some(Mu::Finite(2)));
        assert_eq!(is_tame(&pp("x^3 + y^3"), None, 1, 4).unwrap().tame, Verdict::Yes);
    }

    #[test]
    fn fibers() {
        let g = pp("x^2 + y^2");
        let b = bifurcation_set(&g, None, None, 1, 3).unwrap();
        assert_eq!(b.sigma_poly, UPoly::x());
        assert!(b.b_equals_sigma);
        assert_eq!(fiber_betti(&g, &int(1), None, None, 1, 3).unwrap().betti, 1);
        assert_eq!(fiber_betti(&g, &int(0), None, None, 1, 3).unwrap().betti, 0);
        assert_eq!(bouquet_count(&g, &int(0), None, None, 1, 3).unwrap(), 0);
        assert_eq!(bouquet_count(&g, &int(1), None, None, 1, 3).unwrap(), 1);
        let g = pp("x^3 + y^3");
        assert_eq!(bifurcation_set(&g, None, None, 1, 3).unwrap().sigma_poly, UPoly::x());
        assert_eq!(bouquet_count(&g, &int(1), None, None, 1, 3).unwrap(), 4);
        let r = bouquet_count(&pp("x + x^2*y"), &int(0), None, None, 1, 3);
        assert_eq!(r, Err(TamenessError::NotTame(Verdict::No)));
    }

    #[test]
    fn on_a_line() {
        let b = bifurcation_set(&pp("x^2 + y^2"), Some(&pp("x + y - 1")), None, 1, 3).unwrap();
        assert_eq!(b.sigma_poly, UPoly::linear_root(&rat(1, 2)));
    }

    #[test]
    fn irrational_values() {
        // critical values ±4·sqrt 2 of x^3 - 6x + y^2, one point on each fiber
        let b = bifurcation_set(&pp("x^3 - 6*x + y^2"), None, None, 1, 3).unwrap();
        assert_eq!(b.sigma_poly.deg(), 2);
        assert_eq!(b.special_fibers.len(), 1);
        assert_eq!(b.special_fibers[0].mu_c0, 1);
        assert_eq!(b.special_fibers[0].bouquet_count, Some(1));
    }
}
