//! Special values at points of indeterminacy.
//!
//! At `z0` with `P(z0) = Q(z0) = 0` the incidence equations `∇P + τ∇Q = 0` have a
//! solution exactly when the gradients are dependent. With `∇Q(z0) ≠ 0` the value
//! `τ` is unique and gives the special value `c = τ + <z0, w>` of `f^w`, with
//! factor value `g = -c`. Its multiplicity is the Milnor number at `z0` of the
//! numerator `N_c = Q·<z, w> - P - c·Q` of `f^w - c`, which is critical there.

use serde::Serialize;
use thiserror::Error;

use crate::newton::local_algebra::{from_polynomial, milnor_over, scale, sub};
use crate::newton::{kouchnirenko_mu, Check, Mu};
use crate::poly::rational::{serde_opt_q, serde_q2};
use crate::poly::residue::{split_run, Residue};
use crate::poly::roots::{complex_roots, AlgebraicRecord};
use crate::poly::{Polynomial, Rational, UPoly};
use crate::stationary::{indeterminacy_locus, rational_value, RationalFunction, StationaryError};
use crate::system::{Component, PointRecord};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum VanishingError {
    #[error("point is not a point of indeterminacy")]
    NotIndeterminacyPoint,
    #[error("indeterminacy locus is not finite (common curve {common_factor})")]
    NonIsolatedIndeterminacy { common_factor: String },
    /// Both gradients vanish at the point, so every `τ` solves the incidence equations.
    #[error("incidence solutions over the point are not isolated")]
    NonIsolatedSolution,
    /// The numerator germ has a non-isolated critical point.
    #[error("local multiplicity is infinite")]
    InfiniteMultiplicity,
    #[error("value is not special at the point")]
    NotSpecialValue,
    #[error("no admissible projection found while eliminating")]
    ShearExhausted,
    #[error("expected polynomials in exactly two shared variables")]
    WrongArity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialValue {
    /// Squarefree polynomial whose roots are the special values on the family.
    #[serde(rename = "c_minpoly", serialize_with = "crate::poly::ser::in_c")]
    pub c_poly: UPoly,
    #[serde(rename = "isolating_box")]
    pub c_roots: Vec<AlgebraicRecord>,
    #[serde(serialize_with = "serde_opt_q::serialize")]
    pub c: Option<Rational>,
    #[serde(serialize_with = "serde_opt_q::serialize")]
    pub tau: Option<Rational>,
    #[serde(rename = "g_minpoly", serialize_with = "crate::poly::ser::in_g")]
    pub g_poly: UPoly,
    #[serde(rename = "g_value", serialize_with = "serde_opt_q::serialize")]
    pub g: Option<Rational>,
    /// Multiplicity at each point of the family.
    pub multiplicity: u32,
    /// `Π (g - g_i)` over the points of the family.
    #[serde(skip)]
    pub g_char: UPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub kouchnirenko: Option<u64>,
    pub agrees: Option<bool>,
    pub status: Check,
}

impl CrossCheck {
    fn skipped() -> Self {
        CrossCheck { kouchnirenko: None, agrees: None, status: Check::NotChecked }
    }
}

/// Data at one family of conjugate indeterminacy points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GermReport {
    pub point: PointRecord,
    pub points: usize,
    #[serde(with = "serde_q2")]
    pub w: (Rational, Rational),
    pub special: Vec<SpecialValue>,
    /// Sum of multiplicities over the special values and the points of the family.
    pub total_m: u64,
    pub crosscheck: CrossCheck,
    #[serde(skip)]
    pub component: Component,
}

struct Derivs {
    px: Polynomial,
    py: Polynomial,
    qx: Polynomial,
    qy: Polynomial,
    det: Polynomial,
}

impl Derivs {
    fn of(f: &RationalFunction) -> Self {
        let (px, py, qx, qy) = (f.p.derivative(0), f.p.derivative(1), f.q.derivative(0), f.q.derivative(1));
        let det = &(&px * &qy) - &(&py * &qx);
        Derivs { px, py, qx, qy, det }
    }
}

/// Splits a family into pieces with a unique `τ` (as a ring element) and pieces with none.
fn tau_pieces(d: &Derivs, comp: &Component) -> Result<Vec<(Component, Option<UPoly>)>, VanishingError> {
    let mut out = Vec::new();
    let (dependent, independent) = comp.split_on(&d.det);
    if let Some(c) = independent {
        out.push((c, None));
    }
    let Some(z) = dependent else { return Ok(out) };
    let ratio = |c: &Component, num: &Polynomial, den: &Polynomial| {
        let ring = c.ring();
        let inv = ring.inv(&c.eval(den)).expect("unit by construction");
        ring.reduce(&-&ring.mul(&c.eval(num), &inv))
    };
    let (qx_zero, qx_unit) = z.split_on(&d.qx);
    if let Some(c) = qx_unit {
        let tau = ratio(&c, &d.px, &d.qx);
        out.push((c, Some(tau)));
    }
    let Some(z) = qx_zero else { return Ok(out) };
    let (flat, qy_unit) = z.split_on(&d.qy);
    if let Some(c) = qy_unit {
        let tau = ratio(&c, &d.py, &d.qy);
        out.push((c, Some(tau)));
    }
    let Some(z) = flat else { return Ok(out) };
    // ∇Q = 0: no solution unless ∇P = 0 as well
    let (px_zero, px_unit) = z.split_on(&d.px);
    if let Some(c) = px_unit {
        out.push((c, None));
    }
    if let Some(z) = px_zero {
        let (py_zero, py_unit) = z.split_on(&d.py);
        if py_zero.is_some() {
            return Err(VanishingError::NonIsolatedSolution);
        }
        if let Some(c) = py_unit {
            out.push((c, None));
        }
    }
    Ok(out)
}

fn numerator_base(f: &RationalFunction, w: &(Rational, Rational)) -> Polynomial {
    let lin = &f.q.var_like(0).scale(&w.0) + &f.q.var_like(1).scale(&w.1);
    &(&f.q * &lin) - &f.p
}

/// `N_c = Q·<z, w> - P - c·Q` for a rational `c`.
pub fn numerator_germ(f: &RationalFunction, w: &(Rational, Rational), c: &Rational) -> Polynomial {
    &numerator_base(f, w) - &f.q.scale(c)
}

fn multiplicity_cap(f: &RationalFunction) -> usize {
    let d = f.p.total_degree().unwrap_or(0).max(f.q.total_degree().unwrap_or(0) + 1).max(2) as usize;
    (d - 1) * (d - 1)
}

fn report_piece(f: &RationalFunction, w: &(Rational, Rational), piece: &Component, tau: Option<&UPoly>) -> Result<Vec<GermReport>, VanishingError> {
    let empty = |c: &Component| GermReport {
        point: c.record(),
        points: c.degree(),
        w: w.clone(),
        special: Vec::new(),
        total_m: 0,
        crosscheck: CrossCheck::skipped(),
        component: c.clone(),
    };
    let Some(tau) = tau else { return Ok(vec![empty(piece)]) };
    let base = from_polynomial(&numerator_base(f, w));
    let qr = from_polynomial(&f.q);
    let cap = multiplicity_cap(f);
    let value_c = |ring: &Residue, x: &UPoly, y: &UPoly| ring.reduce(&(&(ring.reduce(tau) + x.scale(&w.0)) + &y.scale(&w.1)));
    let mus = split_run(&piece.param, |ring| {
        let (x, y) = (ring.reduce(&piece.x), ring.reduce(&piece.y));
        let c = value_c(ring, &x, &y);
        let n = sub(ring, &base, &scale(ring, &qr, &c));
        milnor_over(ring, &n, &x, &y, cap)
    });
    let mut out = Vec::new();
    for (factor, mu) in mus {
        let mu = mu.ok_or(VanishingError::InfiniteMultiplicity)? as u32;
        let part = piece.restrict(&factor);
        let ring = part.ring();
        let tau_v = ring.reduce(tau);
        let c = value_c(&ring, &part.x, &part.y);
        let g = ring.reduce(&-&c);
        let c_char = part.char_poly(&c);
        let c_poly = c_char.squarefree_part().monic();
        let g_char = part.char_poly(&g);
        let g_poly = g_char.squarefree_part().monic();
        let c_roots = complex_roots(&c_poly).iter().map(|r| r.to_record("c")).collect();
        let c_rat = rational_value(&part, &c);
        let crosscheck = match (part.rational_point(), &c_rat) {
            (Some(z0), Some(c0)) => kouchnirenko_at(f, w, &z0, c0, mu),
            _ => CrossCheck::skipped(),
        };
        out.push(GermReport {
            point: part.record(),
            points: part.degree(),
            w: w.clone(),
            special: vec![SpecialValue {
                c_poly,
                c_roots,
                c: c_rat,
                tau: rational_value(&part, &tau_v),
                g_poly,
                g: rational_value(&part, &g),
                multiplicity: mu,
                g_char,
            }],
            total_m: mu as u64 * part.degree() as u64,
            crosscheck,
            component: part,
        });
    }
    Ok(out)
}

fn kouchnirenko_at(f: &RationalFunction, w: &(Rational, Rational), z0: &(Rational, Rational), c: &Rational, mu: u32) -> CrossCheck {
    match kouchnirenko_crosscheck_raw(f, w, z0, c) {
        Some(k) => CrossCheck { kouchnirenko: Some(k), agrees: Some(k == mu as u64), status: if k == mu as u64 { Check::Passed } else { Check::Failed } },
        None => CrossCheck::skipped(),
    }
}

fn kouchnirenko_crosscheck_raw(f: &RationalFunction, w: &(Rational, Rational), z0: &(Rational, Rational), c: &Rational) -> Option<u64> {
    let n = numerator_germ(f, w, c);
    let x = &n.var_like(0) + &n.constant_like(z0.0.clone());
    let y = &n.var_like(1) + &n.constant_like(z0.1.clone());
    let local = n.compose(&[x, y]);
    match kouchnirenko_mu(&local) {
        Ok(r) => match r.mu {
            Mu::Finite(m) => Some(m),
            Mu::Infinite(_) => None,
        },
        Err(_) => None,
    }
}

fn locus(f: &RationalFunction) -> Result<Vec<Component>, VanishingError> {
    indeterminacy_locus(f).map_err(|e| match e {
        StationaryError::NonIsolatedIndeterminacy { common_factor } => VanishingError::NonIsolatedIndeterminacy { common_factor },
        StationaryError::ShearExhausted => VanishingError::ShearExhausted,
        _ => VanishingError::WrongArity,
    })
}

/// Reports for every family of indeterminacy points, including those without special values.
pub fn germ_reports(f: &RationalFunction, w: &(Rational, Rational)) -> Result<Vec<GermReport>, VanishingError> {
    let d = Derivs::of(f);
    let mut out = Vec::new();
    for comp in locus(f)? {
        for (piece, tau) in tau_pieces(&d, &comp)? {
            out.extend(report_piece(f, w, &piece, tau.as_ref())?);
        }
    }
    Ok(out)
}

fn point_component(f: &RationalFunction, point: &(Rational, Rational)) -> Result<Component, VanishingError> {
    let at = [point.0.clone(), point.1.clone()];
    if f.q.is_constant() || !f.p.eval_all(&at).eq(&Rational::from_integer(0.into())) || !f.q.eval_all(&at).eq(&Rational::from_integer(0.into())) {
        return Err(VanishingError::NotIndeterminacyPoint);
    }
    locus(f)?.iter().find_map(|c| c.at_point(&point.0, &point.1)).ok_or(VanishingError::NotIndeterminacyPoint)
}

/// Special values of `f^w` at a rational point of indeterminacy.
pub fn special_values(f: &RationalFunction, w: &(Rational, Rational), point: &(Rational, Rational)) -> Result<GermReport, VanishingError> {
    let comp = point_component(f, point)?;
    let d = Derivs::of(f);
    let mut pieces = tau_pieces(&d, &comp)?;
    debug_assert_eq!(pieces.len(), 1);
    let (piece, tau) = pieces.remove(0);
    let mut reports = report_piece(f, w, &piece, tau.as_ref())?;
    Ok(reports.remove(0))
}

/// Multiplicity of the special value `c` at a rational point of indeterminacy.
pub fn local_multiplicity(f: &RationalFunction, w: &(Rational, Rational), point: &(Rational, Rational), c: &Rational) -> Result<u32, VanishingError> {
    let report = special_values(f, w, point)?;
    report.special.iter().find(|s| s.c.as_ref() == Some(c)).map(|s| s.multiplicity).ok_or(VanishingError::NotSpecialValue)
}

/// Whether `P - cQ` and `Q` meet transversally at the point, which rules out `c` as a special value.
pub fn transversal_zero(f: &RationalFunction, c: &Rational, point: &(Rational, Rational)) -> Result<bool, VanishingError> {
    point_component(f, point)?;
    let pc = &f.p - &f.q.scale(c);
    let at = [point.0.clone(), point.1.clone()];
    let det = &(&pc.derivative(0) * &f.q.derivative(1)) - &(&pc.derivative(1) * &f.q.derivative(0));
    Ok(det.eval_all(&at) != Rational::from_integer(0.into()))
}

/// Kouchnirenko number of the numerator germ at a special value, when it applies.
pub fn kouchnirenko_crosscheck(
    f: &RationalFunction,
    w: &(Rational, Rational),
    point: &(Rational, Rational),
    c: &Rational,
) -> Result<Option<u64>, VanishingError> {
    let report = special_values(f, w, point)?;
    if !report.special.iter().any(|s| s.c.as_ref() == Some(c)) {
        return Err(VanishingError::NotSpecialValue);
    }
    Ok(kouchnirenko_crosscheck_raw(f, w, point, c))
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

    fn origin() -> (Rational, Rational) {
        (int(0), int(0))
    }

    #[test]
    fn cusp_quotient_special_value() {
        let f = rf("x - y^3", "x");
        let w = (rat(2, 3), rat(-5, 7));
        let r = special_values(&f, &w, &origin()).unwrap();
        assert_eq!(r.special.len(), 1);
        let s = &r.special[0];
        assert_eq!(s.c, Some(int(-1)));
        assert_eq!(s.tau, Some(int(-1)));
        assert_eq!(s.g, Some(int(1)));
        assert_eq!(s.multiplicity, 1);
        assert_eq!(r.crosscheck.kouchnirenko, Some(1));
        assert_eq!(r.crosscheck.agrees, Some(true));
        assert_eq!(local_multiplicity(&f, &w, &origin(), &int(-1)).unwrap(), 1);
        assert!(!transversal_zero(&f, &int(-1), &origin()).unwrap());
    }

    #[test]
    fn hyperbola_has_none() {
        let f = rf("y", "x");
        let r = special_values(&f, &(int(1), int(1)), &origin()).unwrap();
        assert!(r.special.is_empty());
        assert!(transversal_zero(&f, &int(3), &origin()).unwrap());
    }

    #[test]
    fn not_indeterminate() {
        let f = rf("x^2 + y^2", "1");
        assert_eq!(special_values(&f, &(int(1), int(1)), &origin()), Err(VanishingError::NotIndeterminacyPoint));
        let f = rf("y", "x");
        assert_eq!(transversal_zero(&f, &int(0), &(int(1), int(0))), Err(VanishingError::NotIndeterminacyPoint));
    }

    #[test]
    fn conjugate_points() {
        // tangency of P = 0 and Q = 0 at x = ±sqrt 2: c = x - 1, Morse numerators
        let f = rf("y - (x^2 - 2)^2", "y");
        let reps = germ_reports(&f, &(int(1), int(2))).unwrap();
        assert_eq!(reps.len(), 1);
        assert_eq!(reps[0].points, 2);
        assert_eq!(reps[0].total_m, 2);
        assert_eq!(reps[0].special[0].c_poly, UPoly::from_ints(&[-1, 2, 1]));
        // transverse crossings at the same points contribute nothing
        let f = rf("x*y", "x^2 - 2");
        let reps = germ_reports(&f, &(int(1), int(2))).unwrap();
        assert_eq!(reps.iter().map(|r| r.total_m).sum::<u64>(), 0);
    }
}
