//! Zero-dimensional bivariate systems `{a = 0, b = 0}` solved exactly.
//!
//! The solutions are returned as shape-lemma components: a squarefree
//! `param(t)` together with `x(t)`, `y(t)` modulo `param`, so that the roots of
//! `param` are in bijection with the solution points of the component. Every
//! point in a component has the same local intersection multiplicity.
//!
//! Method: after a shear `x = x' + k·y` that makes both leading coefficients in
//! `y` constant, `R(x') = Res_y(a, b)` vanishes at the projections of the
//! solutions with multiplicity equal to the sum of their intersection
//! multiplicities. For each squarefree layer `r_m` of `R` the gcd of `a` and `b`
//! in `y` is computed over `Q[t]/(r_m)`; a layer is accepted when the gcd is a
//! pure power `(y - Y(t))^j`, i.e. one point per root. Otherwise another shear
//! is tried.

use serde::Serialize;
use thiserror::Error;

use crate::poly::residue::{gcd_over, power_of_linear, split_run, Residue};
use crate::poly::roots::{complex_roots, AlgebraicNumber};
use crate::poly::{gcd, resultant_generic, resultant_with_linear, Polynomial, Rational, UPoly};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SystemError {
    /// The two equations share a curve component.
    #[error("solution set is not zero-dimensional (common factor {common_factor})")]
    NotZeroDimensional { common_factor: String },
    #[error("no admissible projection found for the system")]
    ShearExhausted,
    #[error("system must be in exactly two variables")]
    WrongArity,
}

/// A family of conjugate solution points sharing one multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Monic squarefree polynomial; one point per root.
    pub param: UPoly,
    pub x: UPoly,
    pub y: UPoly,
    pub multiplicity: u32,
}

/// Serializable description of a component: a rational point, or the parametrization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum PointRecord {
    Rational(#[serde(with = "crate::poly::rational::serde_q2")] (Rational, Rational)),
    Algebraic {
        #[serde(serialize_with = "crate::poly::ser::in_t")]
        param: UPoly,
        #[serde(serialize_with = "crate::poly::ser::in_t")]
        x: UPoly,
        #[serde(serialize_with = "crate::poly::ser::in_t")]
        y: UPoly,
    },
}

const SHEARS: [i64; 24] = [0, 1, -1, 2, -2, 3, -3, 5, -5, 7, -7, 11, -11, 13, 17, -17, 19, 23, -29, 31, 37, -41, 43, 53];

/// Solves `a = b = 0` in the two variables of `a` (index 0 is `x`, index 1 is `y`).
pub fn solve(a: &Polynomial, b: &Polynomial) -> Result<Vec<Component>, SystemError> {
    if a.nvars() != 2 || !a.same_vars(b) {
        return Err(SystemError::WrongArity);
    }
    if a.is_zero() || b.is_zero() {
        let other = if a.is_zero() { b } else { a };
        if other.is_constant() && !other.is_zero() {
            return Ok(Vec::new());
        }
        return Err(SystemError::NotZeroDimensional { common_factor: other.normalized().to_string() });
    }
    if a.is_constant() || b.is_constant() {
        return Ok(Vec::new());
    }
    let g = gcd(a, b);
    if !g.is_constant() {
        return Err(SystemError::NotZeroDimensional { common_factor: g.to_string() });
    }
    for &k in SHEARS.iter() {
        if let Some(comps) = try_shear(a, b, k) {
            return Ok(comps);
        }
    }
    Err(SystemError::ShearExhausted)
}

fn sheared(p: &Polynomial, k: i64) -> Polynomial {
    if k == 0 {
        return p.clone();
    }
    let x = p.var_like(0);
    let y = p.var_like(1);
    let img = &x + &y.scale(&Rational::from_integer(k.into()));
    p.compose(&[img, y])
}

/// Coefficients in `y` (lowest first), each as a univariate polynomial in `x`.
fn y_coeffs(p: &Polynomial) -> Vec<UPoly> {
    p.coefficients_in(1).iter().map(|c| c.to_upoly(0).expect("coefficient free of y")).collect()
}

fn try_shear(a: &Polynomial, b: &Polynomial, k: i64) -> Option<Vec<Component>> {
    let a = sheared(a, k);
    let b = sheared(b, k);
    let ac = y_coeffs(&a);
    let bc = y_coeffs(&b);
    if !ac.last()?.is_constant() || !bc.last()?.is_constant() {
        return None;
    }
    let (r, linear) = resultant_with_linear(&ac, &bc);
    if r.is_zero() {
        return None;
    }
    if r.is_constant() {
        return Some(Vec::new());
    }
    let kq = Rational::from_integer(k.into());
    let mut out = Vec::new();
    for (m, layer) in r.squarefree_decomposition() {
        if layer.deg() == 0 {
            continue;
        }
        if m == 1 {
            if let Some(y) = linear.as_ref().and_then(|l| simple_layer(&layer, l)) {
                let ring = Residue::new(&layer);
                let x = ring.reduce(&(&UPoly::x() + &y.scale(&kq)));
                out.push(Component { param: layer.monic(), x, y, multiplicity: 1 });
                continue;
            }
        }
        let pieces = split_run(&layer, |ring| {
            let g = gcd_over(ring, &ac_in(ring, &ac), &ac_in(ring, &bc))?;
            Ok(shape_of(ring, &g))
        });
        for (param, shape) in pieces {
            let y = shape?;
            let ring = Residue::new(&param);
            let x = ring.reduce(&(&UPoly::x() + &y.scale(&kq)));
            out.push(Component { param, x, y, multiplicity: m });
        }
    }
    sort_components(&mut out);
    Some(out)
}

/// Over simple roots of the resultant the gcd in `y` is linear and the degree-one
/// subresultant `l1 y + l0` specializes to a multiple of it, so `y = -l0/l1`
/// wherever `l1` is a unit.
fn simple_layer(layer: &UPoly, linear: &[UPoly; 2]) -> Option<UPoly> {
    let ring = Residue::new(&layer.monic());
    let inv = ring.inv(&ring.reduce(&linear[1])).ok()?;
    Some(ring.mul(&-&ring.reduce(&linear[0]), &inv))
}

fn ac_in(ring: &Residue, coeffs: &[UPoly]) -> Vec<UPoly> {
    coeffs.iter().map(|c| ring.reduce(c)).collect()
}

/// `Some(Y)` when the monic `g` equals `(y - Y)^j` with `j >= 1`.
fn shape_of(ring: &Residue, g: &[UPoly]) -> Option<UPoly> {
    let j = g.len().checked_sub(1)?;
    if j == 0 {
        return None;
    }
    let y0 = ring.mul(&-&g[j - 1], &UPoly::constant(Rational::new(1.into(), (j as i64).into())));
    let expected = power_of_linear(ring, &y0, j);
    let same = expected.iter().zip(g).all(|(e, c)| ring.is_zero(&(e - c)));
    same.then_some(y0)
}

fn sort_components(v: &mut [Component]) {
    use crate::poly::residue::cmp_upoly;
    v.sort_by(|a, b| {
        a.multiplicity.cmp(&b.multiplicity).then_with(|| cmp_upoly(&a.param, &b.param)).then_with(|| cmp_upoly(&a.x, &b.x)).then_with(|| cmp_upoly(&a.y, &b.y))
    });
}

/// Number of solutions counted with multiplicity.
pub fn total_multiplicity(comps: &[Component]) -> u64 {
    comps.iter().map(|c| c.param.deg() as u64 * c.multiplicity as u64).sum()
}

/// Evaluates a bivariate polynomial at `(x, y)` with coordinates in a residue ring.
pub fn eval_in(ring: &Residue, p: &Polynomial, x: &UPoly, y: &UPoly) -> UPoly {
    let dx = p.degree_in(0) as usize;
    let dy = p.degree_in(1) as usize;
    let mut xp = vec![UPoly::one()];
    for i in 0..dx {
        xp.push(ring.mul(&xp[i], x));
    }
    let mut yp = vec![UPoly::one()];
    for j in 0..dy {
        yp.push(ring.mul(&yp[j], y));
    }
    let mut acc = UPoly::zero();
    for (m, c) in p.terms() {
        let e = m.exponents();
        let t = ring.mul(&xp[e[0] as usize], &yp[e[1] as usize]);
        acc = &acc + &t.scale(c);
    }
    ring.reduce(&acc)
}

impl Component {
    pub fn ring(&self) -> Residue {
        Residue::new(&self.param)
    }

    pub fn degree(&self) -> usize {
        self.param.deg()
    }

    /// The point when the component is a single rational point.
    pub fn rational_point(&self) -> Option<(Rational, Rational)> {
        if self.param.deg() == 1 {
            Some((self.x.coeff(0), self.y.coeff(0)))
        } else {
            None
        }
    }

    pub fn record(&self) -> PointRecord {
        match self.rational_point() {
            Some(p) => PointRecord::Rational(p),
            None => PointRecord::Algebraic { param: self.param.clone(), x: self.x.clone(), y: self.y.clone() },
        }
    }

    /// The sub-component at a rational point, if the point belongs to it.
    pub fn at_point(&self, x0: &Rational, y0: &Rational) -> Option<Component> {
        let ring = self.ring();
        let dx = ring.sub(&self.x, &UPoly::constant(x0.clone()));
        let dy = ring.sub(&self.y, &UPoly::constant(y0.clone()));
        let g = self.param.gcd(&dx).gcd(&dy);
        (g.deg() >= 1).then(|| self.restrict(&g))
    }

    /// Value of a polynomial on the component, as an element of `Q[t]/(param)`.
    pub fn eval(&self, p: &Polynomial) -> UPoly {
        eval_in(&self.ring(), p, &self.x, &self.y)
    }

    /// The same points restricted to the roots of a monic factor of `param`.
    pub fn restrict(&self, factor: &UPoly) -> Component {
        let ring = Residue::new(factor);
        Component { param: ring.modulus().clone(), x: ring.reduce(&self.x), y: ring.reduce(&self.y), multiplicity: self.multiplicity }
    }

    /// Splits into the points where `value` (an element of the residue ring) vanishes and the rest.
    pub fn split_by(&self, value: &UPoly) -> (Option<Component>, Option<Component>) {
        let (zero, unit) = self.ring().zero_locus(value);
        (zero.map(|f| self.restrict(&f)), unit.map(|f| self.restrict(&f)))
    }

    /// Splits into the points where `p` vanishes and the rest.
    pub fn split_on(&self, p: &Polynomial) -> (Option<Component>, Option<Component>) {
        self.split_by(&self.eval(p))
    }

    /// `Π (z - value(t_i))` over the roots `t_i` of `param`: monic of degree `deg param`.
    pub fn char_poly(&self, value: &UPoly) -> UPoly {
        char_poly(&self.param, value)
    }

    /// Explicit coordinates of every point, in the order of `complex_roots(param)`.
    pub fn points(&self) -> Vec<(AlgebraicNumber, AlgebraicNumber)> {
        if let Some((x, y)) = self.rational_point() {
            return vec![(AlgebraicNumber::rational(x), AlgebraicNumber::rational(y))];
        }
        let cx = self.char_poly(&self.x);
        let cy = self.char_poly(&self.y);
        let xs = complex_roots(&cx);
        let ys = complex_roots(&cy);
        let ts = complex_roots(&self.param);
        // match coordinates through the parameter: x(t_i) is the root of cx nearest to the image box
        ts.iter().map(|t| (image_root(t, &self.x, &xs), image_root(t, &self.y, &ys))).collect()
    }
}

/// Characteristic polynomial of multiplication by `value` in `Q[t]/(param)`.
pub fn char_poly(param: &UPoly, value: &UPoly) -> UPoly {
    if param.deg() >= 8 {
        if let Some(c) = crate::poly::modular::char_poly_mod(&param.monic(), value) {
            return c;
        }
    }
    let a: Vec<UPoly> = param.monic().coeffs().iter().map(|c| UPoly::constant(c.clone())).collect();
    let mut b: Vec<UPoly> = value.coeffs().iter().map(|c| UPoly::constant(-c)).collect();
    if b.is_empty() {
        b.push(UPoly::zero());
    }
    b[0] = &b[0] + &UPoly::x();
    resultant_generic(&a, &b).monic()
}

/// Chooses, among the candidate roots, the image of the root `t` under `value`.
fn image_root(t: &AlgebraicNumber, value: &UPoly, candidates: &[AlgebraicNumber]) -> AlgebraicNumber {
    if candidates.len() == 1 {
        return candidates[0].clone();
    }
    // interval evaluation of value over t's box, refined until a single candidate overlaps
    let mut t = t.clone();
    let mut eps = Rational::new(1.into(), 16.into());
    loop {
        t.refine(&eps);
        let (re, im) = crate::poly::roots::eval_box(value, t.re_box(), t.im_box());
        let hits: Vec<&AlgebraicNumber> = candidates
            .iter()
            .filter(|c| {
                let mut c = (*c).clone();
                c.refine(&eps);
                overlaps(c.re_box(), &re) && overlaps(c.im_box(), &im)
            })
            .collect();
        if hits.len() == 1 {
            return hits[0].clone();
        }
        eps /= Rational::from_integer(16.into());
    }
}

fn overlaps(a: &(Rational, Rational), b: &(Rational, Rational)) -> bool {
    a.0 <= b.1 && b.0 <= a.1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::poly::rational::int;

    fn pp(s: &str) -> Polynomial {
        parse_polynomial(s, &["x", "y"]).unwrap()
    }

    #[test]
    fn simple_point() {
        let c = solve(&pp("x - y^3"), &pp("x")).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].rational_point(), Some((int(0), int(0))));
        assert_eq!(c[0].multiplicity, 3);
        assert_eq!(total_multiplicity(&c), 3);
    }

    #[test]
    fn conjugate_points() {
        // circle meets line x = y in two irrational points
        let c = solve(&pp("x^2 + y^2 - 1"), &pp("x - y")).unwrap();
        assert_eq!(total_multiplicity(&c), 2);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].degree(), 2);
        let pts = c[0].points();
        assert_eq!(pts.len(), 2);
    }

    #[test]
    fn same_projection_needs_shear() {
        // four points (±1, ±1): x-projection is not injective without a shear
        let c = solve(&pp("x^2 - 1"), &pp("y^2 - 1")).unwrap();
        assert_eq!(total_multiplicity(&c), 4);
        for comp in &c {
            assert_eq!(comp.multiplicity, 1);
        }
    }

    #[test]
    fn tangency_and_mixed_multiplicity() {
        // parabola tangent to the x-axis at the origin plus a transverse point
        let c = solve(&pp("y - x^2"), &pp("y*(y - 1)")).unwrap();
        assert_eq!(total_multiplicity(&c), 4);
        let origin = c.iter().find(|k| k.rational_point() == Some((int(0), int(0)))).unwrap();
        assert_eq!(origin.multiplicity, 2);
    }

    #[test]
    fn common_factor_rejected() {
        assert!(matches!(solve(&pp("x*y"), &pp("x*(y+1)")), Err(SystemError::NotZeroDimensional { .. })));
        assert_eq!(solve(&pp("1 + 2*x*y"), &pp("x^2")).unwrap(), vec![]);
    }

    #[test]
    fn char_poly_of_coordinates() {
        let param = UPoly::from_ints(&[-2, 0, 1]);
        let cp = char_poly(&param, &UPoly::from_ints(&[1, 1]));
        // roots 1 ± sqrt 2
        assert_eq!(cp, UPoly::from_ints(&[-1, -2, 1]));
        let cp = char_poly(&param, &UPoly::from_ints(&[3]));
        assert_eq!(cp, UPoly::from_ints(&[9, -6, 1]));
    }
}
