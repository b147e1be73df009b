//! Stationary points of `f^w(z) = f(z) - <z, w>` for `f = P/Q` on the plane,
//! and the resulting exponential factors of the Fourier transform.
//!
//! Smooth stationary points solve `Q² w = Q ∇P - P ∇Q` away from `Q = 0`; each
//! contributes the factor value `g = f^w(z)`. Points of indeterminacy contribute
//! their special values `g = -c` with the multiplicities computed in
//! [`crate::vanishing`]. The spectral polynomial is the monic polynomial in `g`
//! with all these values as roots, counted with multiplicity.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::poly::rational::{serde_opt_q, serde_q2};
use crate::poly::residue::rational_of;
use crate::poly::roots::{complex_roots, AlgebraicRecord};
use crate::poly::{gcd, saturate, Polynomial, Rational, UPoly};
use crate::sampling::Sampler;
use crate::system::{solve, Component, PointRecord, SystemError};
use crate::vanishing::{germ_reports, GermReport, VanishingError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StationaryError {
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("expected polynomials in exactly two shared variables")]
    WrongArity,
    #[error("indeterminacy locus is not finite (common curve {common_factor})")]
    NonIsolatedIndeterminacy { common_factor: String },
    #[error("no generic parameter found after {draws} draws")]
    GenericityFailure { draws: usize },
    #[error("stationary locus is not finite (factor {factor})")]
    EliminationCollapse { factor: String },
    #[error("no admissible projection found while eliminating")]
    ShearExhausted,
    #[error(transparent)]
    Vanishing(#[from] VanishingError),
}

impl StationaryError {
    /// Failures that depend on the sampled parameter and justify drawing again.
    fn is_sample_dependent(&self) -> bool {
        matches!(
            self,
            StationaryError::EliminationCollapse { .. }
                | StationaryError::ShearExhausted
                | StationaryError::Vanishing(VanishingError::InfiniteMultiplicity)
                | StationaryError::Vanishing(VanishingError::ShearExhausted)
        )
    }
}

/// `P/Q` in lowest terms over two variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    pub p: Polynomial,
    pub q: Polynomial,
    /// Whether a common factor was divided out on construction.
    pub reduced: bool,
}

impl RationalFunction {
    pub fn vars(&self) -> &[String] {
        self.p.vars()
    }

    pub fn is_polynomial(&self) -> bool {
        self.q.is_constant()
    }

    /// `f(z + a)`, i.e. the function translated by `-a`.
    pub fn compose_shift(&self, a: &(Rational, Rational)) -> RationalFunction {
        let x = &self.p.var_like(0) + &self.p.constant_like(a.0.clone());
        let y = &self.p.var_like(1) + &self.p.constant_like(a.1.clone());
        let sub = [x, y];
        RationalFunction { p: self.p.compose(&sub), q: self.q.compose(&sub), reduced: self.reduced }
    }

    pub fn scale(&self, c: &Rational) -> RationalFunction {
        RationalFunction { p: self.p.scale(c), q: self.q.clone(), reduced: self.reduced }
    }
}

pub fn make_rational_function(p: &Polynomial, q: &Polynomial) -> Result<RationalFunction, StationaryError> {
    if p.nvars() != 2 || !p.same_vars(q) {
        return Err(StationaryError::WrongArity);
    }
    if q.is_zero() {
        return Err(StationaryError::ZeroDenominator);
    }
    let g = gcd(p, q);
    if g.is_constant() {
        return Ok(RationalFunction { p: p.clone(), q: q.clone(), reduced: false });
    }
    let p = p.div_exact(&g).expect("gcd divides");
    let q = q.div_exact(&g).expect("gcd divides");
    Ok(RationalFunction { p, q, reduced: true })
}

/// Equations in `(x, y, τ, ξ, η)` whose solutions with `Q ≠ 0` are `τ = -f(z)`, `(ξ, η) = df(z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceSystem {
    pub vars: Vec<String>,
    pub equations: [Polynomial; 3],
    pub saturant: Polynomial,
}

pub fn build_incidence(f: &RationalFunction) -> IncidenceSystem {
    let mut vars: Vec<String> = f.vars().to_vec();
    for name in ["tau", "xi", "eta"] {
        let mut n = name.to_string();
        while vars.contains(&n) {
            n.push('_');
        }
        vars.push(n);
    }
    let lift = |p: &Polynomial| p.with_vars(&vars).expect("superset of variables");
    let (p, q) = (lift(&f.p), lift(&f.q));
    let (tau, xi, eta) = (p.var_like(2), p.var_like(3), p.var_like(4));
    let e0 = &p + &(&tau * &q);
    let e1 = &(&xi * &q) - &(&p.derivative(0) + &(&tau * &q.derivative(0)));
    let e2 = &(&eta * &q) - &(&p.derivative(1) + &(&tau * &q.derivative(1)));
    IncidenceSystem { vars, equations: [e0, e1, e2], saturant: q }
}

/// Points of indeterminacy `P = Q = 0`.
pub fn indeterminacy_locus(f: &RationalFunction) -> Result<Vec<Component>, StationaryError> {
    if f.q.is_constant() {
        return Ok(Vec::new());
    }
    solve(&f.p, &f.q).map_err(|e| match e {
        SystemError::NotZeroDimensional { common_factor } => StationaryError::NonIsolatedIndeterminacy { common_factor },
        SystemError::ShearExhausted => StationaryError::ShearExhausted,
        SystemError::WrongArity => StationaryError::WrongArity,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    Smooth,
    Indeterminacy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumComponent {
    pub kind: ComponentKind,
    pub base_point: PointRecord,
    /// Number of conjugate points in the family.
    pub points: usize,
    /// Multiplicity of each point.
    pub multiplicity: u32,
    /// Squarefree polynomial whose roots are the factor values on the family.
    #[serde(serialize_with = "crate::poly::ser::in_g")]
    pub factor_poly: UPoly,
    #[serde(serialize_with = "serde_opt_q::serialize")]
    pub factor_value: Option<Rational>,
    /// `Π (g - g_i)` over the points of the family, before raising to the multiplicity.
    #[serde(skip)]
    pub char_poly: UPoly,
}

impl SpectrumComponent {
    pub fn rank(&self) -> u64 {
        self.points as u64 * self.multiplicity as u64
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FourierSpectrum {
    #[serde(with = "serde_q2")]
    pub w: (Rational, Rational),
    pub total_rank: u64,
    pub smooth_rank: u64,
    pub jump_rank: u64,
    #[serde(serialize_with = "crate::poly::ser::in_g")]
    pub spectral_poly: UPoly,
    pub components: Vec<SpectrumComponent>,
    pub germs: Vec<GermReport>,
}

/// Stationary points of `f^w` with `Q ≠ 0`, with the factor value `f^w` on each family.
pub fn smooth_stationary(f: &RationalFunction, w: &(Rational, Rational)) -> Result<Vec<(Component, UPoly)>, StationaryError> {
    let (p, q) = (&f.p, &f.q);
    let q2 = q * q;
    let f1 = &q2.scale(&w.0) - &(&(q * &p.derivative(0)) - &(p * &q.derivative(0)));
    let f2 = &q2.scale(&w.1) - &(&(q * &p.derivative(1)) - &(p * &q.derivative(1)));
    if f1.is_zero() && f2.is_zero() {
        return Err(StationaryError::EliminationCollapse { factor: "0".into() });
    }
    let g0 = gcd(&f1, &f2);
    let (f1, f2) = if g0.is_constant() {
        (f1, f2)
    } else {
        let rest = saturate(&g0, q).expect("nonzero gcd");
        if !rest.is_constant() {
            return Err(StationaryError::EliminationCollapse { factor: rest.to_string() });
        }
        (f1.div_exact(&g0).expect("gcd divides"), f2.div_exact(&g0).expect("gcd divides"))
    };
    let comps = solve(&f1, &f2).map_err(|e| match e {
        SystemError::NotZeroDimensional { common_factor } => StationaryError::EliminationCollapse { factor: common_factor },
        SystemError::ShearExhausted => StationaryError::ShearExhausted,
        SystemError::WrongArity => StationaryError::WrongArity,
    })?;
    let mut out = Vec::new();
    for comp in comps {
        let (_, away) = comp.split_on(q);
        let Some(c) = away else { continue };
        let ring = c.ring();
        let qv = c.eval(q);
        let inv = ring.inv(&qv).expect("Q is a unit off its zero set");
        let fv = ring.mul(&c.eval(p), &inv);
        let lin = ring.add(&c.x.scale(&w.0), &c.y.scale(&w.1));
        let value = ring.sub(&fv, &lin);
        out.push((c, value));
    }
    Ok(out)
}

fn factor_value(char_poly: &UPoly) -> (UPoly, Option<Rational>) {
    let sf = char_poly.squarefree_part().monic();
    let value = (sf.deg() == 1).then(|| -sf.coeff(0));
    (sf, value)
}

/// Full stationary-phase data at one parameter `w`.
pub fn spectrum(f: &RationalFunction, w: &(Rational, Rational)) -> Result<FourierSpectrum, StationaryError> {
    let mut components = Vec::new();
    for (comp, value) in smooth_stationary(f, w)? {
        let char_poly = comp.char_poly(&value);
        let (factor_poly, factor_value) = factor_value(&char_poly);
        components.push(SpectrumComponent {
            kind: ComponentKind::Smooth,
            base_point: comp.record(),
            points: comp.degree(),
            multiplicity: comp.multiplicity,
            factor_poly,
            factor_value,
            char_poly,
        });
    }
    let germs = germ_reports(f, w)?;
    for germ in &germs {
        for sv in &germ.special {
            components.push(SpectrumComponent {
                kind: ComponentKind::Indeterminacy,
                base_point: germ.point.clone(),
                points: germ.points,
                multiplicity: sv.multiplicity,
                factor_poly: sv.g_poly.clone(),
                factor_value: sv.g.clone(),
                char_poly: sv.g_char.clone(),
            });
        }
    }
    let mut spectral_poly = UPoly::one();
    for c in &components {
        spectral_poly = &spectral_poly * &c.char_poly.pow(c.multiplicity);
    }
    let smooth_rank = components.iter().filter(|c| c.kind == ComponentKind::Smooth).map(SpectrumComponent::rank).sum();
    let jump_rank = germs.iter().map(|g| g.total_m).sum();
    let total_rank = spectral_poly.deg() as u64;
    debug_assert_eq!(total_rank, smooth_rank + jump_rank);
    Ok(FourierSpectrum { w: w.clone(), total_rank, smooth_rank, jump_rank, spectral_poly, components, germs })
}

/// Monic polynomial in `g` whose roots are the exponential factor values at `w`.
pub fn spectral_polynomial(f: &RationalFunction, w: &(Rational, Rational)) -> Result<UPoly, StationaryError> {
    spectrum(f, w).map(|s| s.spectral_poly)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sample(#[serde(with = "serde_q2")] pub (Rational, Rational));

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericRank {
    pub total: u64,
    pub smooth: u64,
    pub jump: u64,
    /// The parameters that produced the reported ranks.
    pub samples: Vec<Sample>,
    pub draws: usize,
}

/// Ranks at generic `w`: parameters are drawn until one rank triple has been seen
/// `samples` times, with at most `samples + 8` draws.
pub fn generic_rank(f: &RationalFunction, seed: u64, samples: usize) -> Result<GenericRank, StationaryError> {
    let samples = samples.max(1);
    let mut sampler = Sampler::new(seed);
    let mut seen: BTreeMap<(u64, u64, u64), Vec<Sample>> = BTreeMap::new();
    let limit = samples + 8;
    for draw in 1..=limit {
        let w = sampler.point();
        match spectrum(f, &w) {
            Ok(s) => {
                let hits = seen.entry((s.total_rank, s.smooth_rank, s.jump_rank)).or_default();
                hits.push(Sample(w));
                if hits.len() == samples {
                    return Ok(GenericRank { total: s.total_rank, smooth: s.smooth_rank, jump: s.jump_rank, samples: hits.clone(), draws: draw });
                }
            }
            Err(e) if e.is_sample_dependent() => continue,
            Err(e) => return Err(e),
        }
    }
    Err(StationaryError::GenericityFailure { draws: limit })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentialFactor {
    #[serde(serialize_with = "crate::poly::ser::in_g")]
    pub factor_poly: UPoly,
    pub multiplicity: u32,
    pub kind: ComponentKind,
    pub roots: Vec<AlgebraicRecord>,
}

/// Squarefree factorization of the spectral polynomial, split by origin.
pub fn exponential_factors(f: &RationalFunction, w: &(Rational, Rational)) -> Result<Vec<ExponentialFactor>, StationaryError> {
    let s = spectrum(f, w)?;
    let mut out = Vec::new();
    for kind in [ComponentKind::Smooth, ComponentKind::Indeterminacy] {
        let mut prod = UPoly::one();
        for c in s.components.iter().filter(|c| c.kind == kind) {
            prod = &prod * &c.char_poly.pow(c.multiplicity);
        }
        for (m, factor) in prod.squarefree_decomposition() {
            if factor.deg() == 0 {
                continue;
            }
            let factor = factor.monic();
            let roots = complex_roots(&factor).iter().map(|r| r.to_record("g")).collect();
            out.push(ExponentialFactor { factor_poly: factor, multiplicity: m, kind, roots });
        }
    }
    Ok(out)
}

/// Sampling test for `w` lying in the open set over which the factors form an
/// unramified covering: rank and number of distinct factor values must not
/// change under `probes` perturbations of size at most `radius`.
pub fn omega_probe(f: &RationalFunction, w: &(Rational, Rational), radius: &Rational, probes: usize, seed: u64) -> bool {
    let signature = |w: &(Rational, Rational)| -> Option<(u64, usize)> {
        let s = spectrum(f, w).ok()?;
        Some((s.total_rank, s.spectral_poly.squarefree_part().deg()))
    };
    let Some(base) = signature(w) else { return false };
    let mut sampler = Sampler::new(seed);
    (0..probes).all(|_| {
        let d = sampler.perturbation(radius);
        signature(&(&w.0 + &d.0, &w.1 + &d.1)) == Some(base)
    })
}

/// Rational value of a residue-ring element on a one-point family.
pub(crate) fn rational_value(c: &Component, v: &UPoly) -> Option<Rational> {
    if c.degree() == 1 {
        rational_of(&c.ring().reduce(v))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::poly::rational::{int, rat};

    fn rf(p: &str, q: &str) -> RationalFunction {
        let v = ["x", "y"];
        make_rational_function(&parse_polynomial(p, &v).unwrap(), &parse_polynomial(q, &v).unwrap()).unwrap()
    }

    #[test]
    fn reduction() {
        let f = rf("x*y", "x");
        assert!(f.reduced);
        assert!(f.q.is_constant());
        assert!(!rf("x - y^3", "x").reduced);
        let v = ["x", "y"];
        let p = parse_polynomial("x", &v).unwrap();
        assert_eq!(make_rational_function(&p, &p.zero_like()), Err(StationaryError::ZeroDenominator));
    }

    #[test]
    fn incidence_equations() {
        let s = build_incidence(&rf("y", "x"));
        assert_eq!(s.equations[0].to_string(), "x*tau + y");
        assert_eq!(s.equations[1].to_string(), "x*xi - tau");
        assert_eq!(s.equations[2].to_string(), "x*eta - 1");
    }

    #[test]
    fn hyperbola_factor() {
        let f = rf("y", "x");
        let s = spectrum(&f, &(int(2), int(5))).unwrap();
        assert_eq!((s.total_rank, s.smooth_rank, s.jump_rank), (1, 1, 0));
        assert_eq!(s.spectral_poly, UPoly::linear_root(&rat(-2, 5)));
        let loc = indeterminacy_locus(&f).unwrap();
        assert_eq!(loc.len(), 1);
        assert_eq!(loc[0].rational_point(), Some((int(0), int(0))));
    }

    #[test]
    fn cusp_quotient() {
        let f = rf("x - y^3", "x");
        let (a, b) = (int(1), int(3));
        let s = spectrum(&f, &(a, b)).unwrap();
        assert_eq!((s.total_rank, s.smooth_rank, s.jump_rank), (2, 1, 1));
        // roots 1 - 27/27 = 0 and 1
        assert_eq!(s.spectral_poly, UPoly::from_ints(&[0, -1, 1]));
        let fs = exponential_factors(&f, &(int(1), int(3))).unwrap();
        assert_eq!(fs.len(), 2);
        assert_eq!(fs[0].kind, ComponentKind::Smooth);
        assert_eq!(fs[0].factor_poly, UPoly::x());
        assert_eq!(fs[1].factor_poly, UPoly::linear_root(&int(1)));
    }

    #[test]
    fn quadratic_legendre() {
        let f = rf("x^2 + y^2", "1");
        let s = spectrum(&f, &(int(2), int(4))).unwrap();
        assert_eq!(s.spectral_poly, UPoly::linear_root(&int(-5)));
        let r = generic_rank(&f, 3, 3).unwrap();
        assert_eq!((r.total, r.smooth, r.jump), (1, 1, 0));
        assert_eq!(r.samples.len(), 3);
    }

    #[test]
    fn omega() {
        let f = rf("y", "x");
        let r = rat(1, 100);
        assert!(omega_probe(&f, &(int(1), int(1)), &r, 4, 1));
        assert!(!omega_probe(&f, &(int(1), int(0)), &r, 4, 1));
        assert!(omega_probe(&rf("x - y^3", "x"), &(int(1), int(1)), &r, 4, 1));
    }
}
