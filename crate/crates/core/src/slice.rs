//! The spectral polynomial along a line `w = base + λ·dir` of the dual plane,
//! as a polynomial `p(λ, g)`, and its Puiseux data at `λ = ∞` or at a finite
//! point: pole orders, irregularity and Stokes directions.
//!
//! `p` is recovered by sampling: the coefficients of the monic spectral
//! polynomial at rational `λ` are rational functions of `λ`, reconstructed by
//! interpolation and Padé approximation and then checked at fresh points.

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::newton::{branches_at, BranchGroup, Center, NewtonError};
use crate::poly::modular::difference_resultant;
use crate::poly::rational::{format_rational, serde_q};
use crate::poly::roots::{complex_roots, rational_roots, AlgebraicRecord};
use crate::poly::{gcd, resultant, squarefree_part, Polynomial, Rational, UPoly};
use crate::sampling::Sampler;
use crate::stationary::{generic_rank, spectrum, RationalFunction, Sample, StationaryError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SliceError {
    #[error("direction must be nonzero")]
    ZeroDirection,
    #[error("line lies in the bad locus (rank {line_rank} along the line, {generic_rank} generically)")]
    LineInBadLocus { line_rank: u64, generic_rank: u64 },
    #[error("could not reconstruct the spectrum along the line from {points} samples")]
    ReconstructionFailed { points: usize },
    #[error("the line meets no bad point at a rational parameter")]
    NoFiniteBadPoint,
    #[error("the line is not transverse to the bad locus at λ = {at}")]
    NotTransverse { at: String },
    #[error(transparent)]
    Stationary(#[from] StationaryError),
    #[error(transparent)]
    Newton(#[from] NewtonError),
}

/// Variables of line polynomials.
pub const LINE_VARS: [&str; 2] = ["lambda", "g"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineSpectrum {
    pub base: (Rational, Rational),
    pub direction: (Rational, Rational),
    /// Primitive polynomial in `(λ, g)`, with the multiplicities of the spectral polynomial.
    pub poly: Polynomial,
    pub rank: u32,
}

const MAX_POINTS: usize = 128;
const CHECK_POINTS: usize = 3;

fn point_on(base: &(Rational, Rational), dir: &(Rational, Rational), l: &Rational) -> (Rational, Rational) {
    (&base.0 + &dir.0 * l, &base.1 + &dir.1 * l)
}

/// Newton interpolation through the points.
fn interpolate(xs: &[Rational], ys: &[Rational]) -> UPoly {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut acc = UPoly::constant(dd[n - 1].clone());
    for i in (0..n - 1).rev() {
        acc = &(&acc * &UPoly::linear_root(&xs[i])) + &UPoly::constant(dd[i].clone());
    }
    acc
}

/// `u ≡ r/s mod m` with `deg r < deg m / 2`, from the extended Euclidean sequence.
fn rational_reconstruct(m: &UPoly, u: &UPoly) -> Option<(UPoly, UPoly)> {
    let bound = m.deg() / 2;
    let (mut r0, mut r1) = (m.clone(), u.clone());
    let (mut t0, mut t1) = (UPoly::zero(), UPoly::one());
    while !r1.is_zero() && r1.deg() >= bound.max(1) {
        let (q, r) = r0.div_rem(&r1);
        let t = &t0 - &(&q * &t1);
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, t);
    }
    if r1.is_zero() {
        return Some((UPoly::zero(), UPoly::one()));
    }
    if t1.is_zero() || !m.gcd(&t1).is_constant() {
        return None;
    }
    let lc = t1.lc();
    Some((r1.scale(&lc.recip()), t1.scale(&lc.recip())))
}

fn eval_ratio(r: &(UPoly, UPoly), x: &Rational) -> Option<Rational> {
    let den = r.1.eval(x);
    (!den.is_zero()).then(|| r.0.eval(x) / den)
}

/// Samples of the monic spectral polynomial at rational `λ` on the line.
struct LineSampler<'a> {
    f: &'a RationalFunction,
    base: (Rational, Rational),
    dir: (Rational, Rational),
    sampler: Sampler,
}

impl LineSampler<'_> {
    /// The next parameter where the spectrum has the given degree, with its coefficients.
    fn next(&mut self, rank: usize, used: &[Rational]) -> Option<(Rational, Vec<Rational>)> {
        for _ in 0..64 {
            let l = self.sampler.nonzero();
            if used.contains(&l) {
                continue;
            }
            if let Ok(s) = spectrum(self.f, &point_on(&self.base, &self.dir, &l)) {
                if s.spectral_poly.deg() == rank {
                    return Some((l, s.spectral_poly.coeffs().to_vec()));
                }
            }
        }
        None
    }

    fn degree_at_random(&mut self) -> Option<usize> {
        let l = self.sampler.nonzero();
        spectrum(self.f, &point_on(&self.base, &self.dir, &l)).ok().map(|s| s.spectral_poly.deg())
    }
}

/// The spectral polynomial along `w = base + λ·dir`.
pub fn line_spectrum_through(f: &RationalFunction, base: &(Rational, Rational), dir: &(Rational, Rational), seed: u64) -> Result<LineSpectrum, SliceError> {
    if dir.0.is_zero() && dir.1.is_zero() {
        return Err(SliceError::ZeroDirection);
    }
    let generic = generic_rank(f, seed, 3)?.total;
    let mut ls = LineSampler { f, base: base.clone(), dir: dir.clone(), sampler: Sampler::new(seed ^ 0x5eed_11e5) };
    let rank = (0..3).filter_map(|_| ls.degree_at_random()).max().unwrap_or(0);
    if (rank as u64) < generic {
        return Err(SliceError::LineInBadLocus { line_rank: rank as u64, generic_rank: generic });
    }
    let vars = LINE_VARS;
    if rank == 0 {
        return Ok(LineSpectrum { base: base.clone(), direction: dir.clone(), poly: Polynomial::constant(&vars, Rational::one()), rank: 0 });
    }
    let mut xs: Vec<Rational> = Vec::new();
    let mut ys: Vec<Vec<Rational>> = Vec::new();
    let mut target = 8;
    while target <= MAX_POINTS {
        while xs.len() < target + CHECK_POINTS {
            let (l, c) = ls.next(rank, &xs).ok_or(SliceError::ReconstructionFailed { points: xs.len() })?;
            xs.push(l);
            ys.push(c);
        }
        if let Some(coeffs) = reconstruct(&xs[..target], &ys[..target], rank) {
            let ok = (target..xs.len()).all(|i| coeffs.iter().enumerate().all(|(k, r)| eval_ratio(r, &xs[i]).as_ref() == Some(&ys[i][k])));
            if ok {
                let poly = assemble(&coeffs);
                return Ok(LineSpectrum { base: base.clone(), direction: dir.clone(), poly, rank: rank as u32 });
            }
        }
        target *= 2;
    }
    Err(SliceError::ReconstructionFailed { points: xs.len() })
}

/// Line through the origin in direction `w0`.
pub fn line_spectrum(f: &RationalFunction, w0: &(Rational, Rational), seed: u64) -> Result<LineSpectrum, SliceError> {
    line_spectrum_through(f, &(Rational::zero(), Rational::zero()), w0, seed)
}

fn reconstruct(xs: &[Rational], ys: &[Vec<Rational>], rank: usize) -> Option<Vec<(UPoly, UPoly)>> {
    let m = xs.iter().fold(UPoly::one(), |acc, x| &acc * &UPoly::linear_root(x));
    (0..=rank)
        .map(|k| {
            let vals: Vec<Rational> = ys.iter().map(|c| c[k].clone()).collect();
            rational_reconstruct(&m, &interpolate(xs, &vals))
        })
        .collect()
}

/// `Σ a_k(λ) g^k` with denominators cleared, as a primitive polynomial in `(λ, g)`.
fn assemble(coeffs: &[(UPoly, UPoly)]) -> Polynomial {
    let vars = LINE_VARS;
    let mut den = UPoly::one();
    for (_, s) in coeffs {
        let g = den.gcd(s);
        den = (&den * s).div_exact(&g).expect("gcd divides");
    }
    let mut terms = Vec::new();
    for (k, (r, s)) in coeffs.iter().enumerate() {
        let c = r * &den.div_exact(s).expect("divides the lcm");
        for (i, a) in c.coeffs().iter().enumerate() {
            if !a.is_zero() {
                terms.push((vec![i as u32, k as u32], a.clone()));
            }
        }
    }
    let p = Polynomial::from_terms(&vars, terms);
    let content = p.coefficients_in(1).iter().fold(p.zero_like(), |acc, c| gcd(&acc, c));
    p.div_exact(&content).expect("content divides").normalized()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum StokesDirection {
    /// `θ = angle·π`.
    Exact {
        #[serde(with = "serde_q")]
        order: Rational,
        #[serde(with = "serde_q")]
        angle_over_pi: Rational,
    },
    /// `θ` with `Re(c·e^{i·order·θ}) = 0` for the given leading coefficient `c`.
    Constraint {
        #[serde(with = "serde_q")]
        order: Rational,
        leading_coefficient: AlgebraicRecord,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IrregularityReport {
    pub direction: Sample,
    pub base: Sample,
    pub center: Center,
    pub line_poly: String,
    pub rank: u32,
    pub branches: Vec<BranchGroup>,
    #[serde(with = "serde_q")]
    pub irregularity: Rational,
    /// Present at infinity only.
    pub stokes_directions: Option<Vec<StokesDirection>>,
}

fn branch_data(line: &LineSpectrum, center: &Center) -> Result<(Vec<BranchGroup>, Rational), SliceError> {
    if line.rank == 0 {
        return Ok((Vec::new(), Rational::zero()));
    }
    let branches = branches_at(&line.poly, center)?;
    let irr = branches.iter().fold(Rational::zero(), |acc, b| acc + &b.pole_order * Rational::from_integer(b.multiplicity.into()));
    Ok((branches, irr))
}

fn report(line: &LineSpectrum, center: Center, stokes: Option<Vec<StokesDirection>>) -> Result<IrregularityReport, SliceError> {
    let (branches, irregularity) = branch_data(line, &center)?;
    Ok(IrregularityReport {
        direction: Sample(line.direction.clone()),
        base: Sample(line.base.clone()),
        center,
        line_poly: line.poly.to_string(),
        rank: line.rank,
        branches,
        irregularity,
        stokes_directions: stokes,
    })
}

/// Pole orders at `λ = ∞` along the line through the origin in direction `w0`.
pub fn irregularity_at_infinity(f: &RationalFunction, w0: &(Rational, Rational), seed: u64) -> Result<IrregularityReport, SliceError> {
    let line = line_spectrum(f, w0, seed)?;
    let stokes = stokes_of(&line)?;
    report(&line, Center::Infinity, Some(stokes))
}

/// Parameters where the line meets the bad locus: roots of `lc_g(p)·disc_g(p_sf)`.
fn bad_polynomial(line: &LineSpectrum) -> Result<UPoly, SliceError> {
    let p = &line.poly;
    let lc = p.coefficients_in(1).pop().expect("positive degree");
    let sf = squarefree_part(p, "g").expect("nonzero");
    let disc = if sf.degree_in(1) >= 2 { crate::poly::discriminant(&sf, "g").expect("positive degree") } else { sf.one_like() };
    let prod = &lc * &disc;
    Ok(prod.to_upoly(0).expect("polynomial in lambda"))
}

/// Pole orders at a finite point of the line `w = base + λ·dir`: the given `at`, or the
/// single rational bad point.
pub fn slice_at_point(
    f: &RationalFunction,
    base: &(Rational, Rational),
    dir: &(Rational, Rational),
    at: Option<&Rational>,
    seed: u64,
) -> Result<IrregularityReport, SliceError> {
    let line = line_spectrum_through(f, base, dir, seed)?;
    if line.rank == 0 {
        return Err(SliceError::NoFiniteBadPoint);
    }
    let bad = bad_polynomial(&line)?;
    let l0 = match at {
        Some(l) => l.clone(),
        None => {
            let roots = if bad.is_zero() { Vec::new() } else { rational_roots(&bad) };
            roots.into_iter().next().ok_or(SliceError::NoFiniteBadPoint)?
        }
    };
    if !bad.is_zero() && bad.root_multiplicity(&l0) > 1 {
        return Err(SliceError::NotTransverse { at: format_rational(&l0) });
    }
    report(&line, Center::Finite(l0), None)
}

/// `Res_g(p_sf(λ, g), p_sf(λ, g + d))` without its power of `d`: its roots in `d` are the
/// differences of distinct branches.
fn difference_polynomial(sf: &Polynomial) -> Option<Polynomial> {
    let r = match difference_resultant(sf, &["lambda", "d"]) {
        Some(r) => r,
        None => {
            let vars = ["lambda", "g", "d"];
            let a = sf.with_vars(&vars).expect("subset");
            let shifted = &a.var_like(1) + &a.var_like(2);
            let b = a.compose(&[a.var_like(0), shifted, a.var_like(2)]);
            resultant(&a, &b, "g").ok()?.with_vars(&["lambda", "d"]).expect("g eliminated")
        }
    };
    let low = r.terms().map(|(m, _)| m.exponent(1)).min().unwrap_or(0);
    let terms = r.terms().map(|(m, c)| (vec![m.exponent(0), m.exponent(1) - low], c.clone()));
    let r = Polynomial::from_terms(r.vars(), terms);
    (r.degree_in(1) > 0).then_some(r)
}

/// Polynomial whose roots are the differences `a - b` of distinct roots of the squarefree `e`.
fn root_differences(e: &UPoly) -> UPoly {
    let vars = ["lambda", "g"];
    let lifted = Polynomial::constant(&vars, Rational::zero()).from_upoly(1, e);
    let r = difference_polynomial(&lifted).expect("at least two roots");
    r.to_upoly(1).expect("constant in lambda")
}

/// Pole orders `k > 0` of differences of branches at `λ = ∞`, each with a polynomial whose
/// roots are the leading coefficients of those differences. Read off the branches of `sf`
/// when their leading terms are distinct, and from the branches of the difference
/// polynomial otherwise.
fn difference_leading_terms(sf: &Polynomial) -> Result<Vec<(Rational, UPoly)>, SliceError> {
    let groups = branches_at(sf, &Center::Infinity)?;
    if groups.iter().any(|g| g.pole_order.is_positive() && g.root_multiplicity > 1) {
        let Some(d) = difference_polynomial(sf) else { return Ok(Vec::new()) };
        return Ok(branches_at(&d, &Center::Infinity)?.into_iter().filter(|b| b.pole_order.is_positive()).map(|b| (b.pole_order, b.leading_poly)).collect());
    }
    let mut orders: Vec<Rational> = groups.iter().map(|g| g.pole_order.clone()).filter(|k| k.is_positive()).collect();
    orders.dedup();
    let mut out = Vec::new();
    for k in orders {
        let e = groups.iter().filter(|g| g.pole_order == k).fold(UPoly::one(), |acc, g| &acc * &g.leading_poly);
        if e.deg() >= 2 {
            out.push((k.clone(), root_differences(&e)));
        }
        if groups.iter().any(|g| g.pole_order < k) {
            let negated = e.compose(&UPoly::from_coeffs(vec![Rational::zero(), -Rational::one()]));
            out.push((k, &e * &negated));
        }
    }
    Ok(out)
}

fn stokes_of(line: &LineSpectrum) -> Result<Vec<StokesDirection>, SliceError> {
    let sf = squarefree_part(&line.poly, "g").expect("nonzero");
    if sf.degree_in(1) < 2 {
        return Ok(Vec::new());
    }
    let mut out: Vec<StokesDirection> = Vec::new();
    for (k, leading) in difference_leading_terms(&sf)? {
        for root in complex_roots(&leading) {
            let arg = if root.is_real() {
                Some(if root.re_box().0.is_positive() || root.re_box().1.is_positive() { Rational::zero() } else { Rational::one() })
            } else {
                None
            };
            match arg {
                Some(a) => {
                    for theta in angles(&k, &a) {
                        let dir = StokesDirection::Exact { order: k.clone(), angle_over_pi: theta };
                        if !out.contains(&dir) {
                            out.push(dir);
                        }
                    }
                }
                None => {
                    let dir = StokesDirection::Constraint { order: k.clone(), leading_coefficient: root.to_record("c") };
                    if !out.contains(&dir) {
                        out.push(dir);
                    }
                }
            }
        }
    }
    out.sort_by(stokes_order);
    Ok(out)
}

fn stokes_order(a: &StokesDirection, b: &StokesDirection) -> std::cmp::Ordering {
    use StokesDirection::*;
    match (a, b) {
        (Exact { angle_over_pi: x, order: o }, Exact { angle_over_pi: y, order: p }) => x.cmp(y).then(o.cmp(p)),
        (Exact { .. }, Constraint { .. }) => std::cmp::Ordering::Less,
        (Constraint { .. }, Exact { .. }) => std::cmp::Ordering::Greater,
        (Constraint { order: o, leading_coefficient: x }, Constraint { order: p, leading_coefficient: y }) => {
            o.cmp(p).then_with(|| (&x.re[0], &x.im[0]).cmp(&(&y.re[0], &y.im[0])))
        }
    }
}

/// Angles `θ/π ∈ [0, 2)` with `k·θ + a·π ≡ π/2 (mod π)`.
fn angles(k: &Rational, a: &Rational) -> Vec<Rational> {
    let half = Rational::new(1.into(), 2.into());
    let two = Rational::from_integer(2.into());
    let limit = (k * &two).ceil().to_integer();
    let limit: i64 = limit.try_into().unwrap_or(i64::MAX / 4);
    let mut out = Vec::new();
    for n in -2..=limit + 2 {
        let theta = (&half + Rational::from_integer(n.into()) - a) / k;
        if !theta.is_negative() && theta < two && !out.contains(&theta) {
            out.push(theta);
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::poly::rational::{int, rat};
    use crate::stationary::make_rational_function;

    fn rf(p: &str, q: &str) -> RationalFunction {
        let v = ["x", "y"];
        make_rational_function(&parse_polynomial(p, &v).unwrap(), &parse_polynomial(q, &v).unwrap()).unwrap()
    }

    fn orders(r: &IrregularityReport) -> Vec<(Rational, u32)> {
        r.branches.iter().map(|b| (b.pole_order.clone(), b.multiplicity)).collect()
    }

    #[test]
    fn reconstruction_helpers() {
        let xs: Vec<Rational> = (1..=6).map(int).collect();
        // (l^2 + 1) / (l + 3)
        let ys: Vec<Rational> = xs.iter().map(|x| (x * x + int(1)) / (x + int(3))).collect();
        let m = xs.iter().fold(UPoly::one(), |a, x| &a * &UPoly::linear_root(x));
        let (r, s) = rational_reconstruct(&m, &interpolate(&xs, &ys)).unwrap();
        assert_eq!(r, UPoly::from_ints(&[1, 0, 1]));
        assert_eq!(s, UPoly::from_ints(&[3, 1]));
    }

    #[test]
    fn lines_through_origin() {
        let f = rf("y", "x");
        let r = irregularity_at_infinity(&f, &(int(1), int(1)), 1).unwrap();
        assert_eq!(orders(&r), vec![(int(0), 1)]);
        assert_eq!(r.irregularity, int(0));
        let f = rf("x^2 + y^2", "1");
        let line = line_spectrum(&f, &(int(1), int(0)), 1).unwrap();
        assert_eq!(line.poly.to_string(), "lambda^2 + 4*g");
        let r = irregularity_at_infinity(&f, &(int(1), int(0)), 1).unwrap();
        assert_eq!(orders(&r), vec![(int(2), 1)]);
    }

    #[test]
    fn cusp_quotient_line() {
        let f = rf("x - y^3", "x");
        let r = irregularity_at_infinity(&f, &(int(1), int(1)), 1).unwrap();
        assert_eq!(orders(&r), vec![(int(2), 1), (int(0), 1)]);
        assert_eq!(r.irregularity, int(2));
        let angles: Vec<Rational> = r
            .stokes_directions
            .unwrap()
            .iter()
            .map(|s| match s {
                StokesDirection::Exact { angle_over_pi, .. } => angle_over_pi.clone(),
                _ => panic!("expected exact angles"),
            })
            .collect();
        assert_eq!(angles, vec![rat(1, 4), rat(3, 4), rat(5, 4), rat(7, 4)]);
    }

    #[test]
    fn bad_lines_and_slices() {
        let f = rf("y", "x");
        assert!(matches!(line_spectrum(&f, &(int(1), int(0)), 1), Err(SliceError::LineInBadLocus { .. })));
        let r = slice_at_point(&f, &(int(1), int(0)), &(int(0), int(1)), None, 1).unwrap();
        assert_eq!(r.center, Center::Finite(int(0)));
        assert_eq!(orders(&r), vec![(int(1), 1)]);
        let f = rf("x - y^3", "x");
        let r = slice_at_point(&f, &(int(0), int(1)), &(int(1), int(0)), None, 1).unwrap();
        assert_eq!(orders(&r), vec![(int(1), 1), (int(0), 1)]);
        let f = rf("x^2 + y^2", "1");
        assert_eq!(slice_at_point(&f, &(int(0), int(1)), &(int(1), int(0)), None, 1), Err(SliceError::NoFiniteBadPoint));
    }

    #[test]
    fn angle_sets() {
        assert_eq!(angles(&int(1), &int(0)), vec![rat(1, 2), rat(3, 2)]);
        assert_eq!(angles(&int(3), &int(0)).len(), 6);
    }
}
