//! Gcd, resultant, discriminant and saturation.
//!
//! Resultants run the subresultant remainder sequence over any integral domain
//! with exact division ([`Domain`]); multivariate gcds recurse on primitive parts
//! with a primitive remainder sequence in the main variable.

use num_traits::{One, Zero};

use super::polynomial::Polynomial;
use super::rational::Rational;
use super::univariate::UPoly;
use super::PolyError;

/// Integral domain with exact division, enough for subresultant sequences.
pub trait Domain: Clone + PartialEq {
    fn zero_of(&self) -> Self;
    fn one_of(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add_elem(&self, other: &Self) -> Self;
    fn sub_elem(&self, other: &Self) -> Self;
    fn mul_elem(&self, other: &Self) -> Self;
    /// Exact quotient; the caller guarantees divisibility.
    fn div_elem(&self, other: &Self) -> Self;

    fn neg_elem(&self) -> Self {
        self.zero_of().sub_elem(self)
    }

    fn pow_elem(&self, mut e: usize) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_of();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_elem(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_elem(&base);
            }
        }
        acc
    }
}

impl Domain for Rational {
    fn zero_of(&self) -> Self {
        Rational::zero()
    }
    fn one_of(&self) -> Self {
        Rational::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_elem(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_elem(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_elem(&self, o: &Self) -> Self {
        self * o
    }
    fn div_elem(&self, o: &Self) -> Self {
        self / o
    }
}

impl Domain for UPoly {
    fn zero_of(&self) -> Self {
        UPoly::zero()
    }
    fn one_of(&self) -> Self {
        UPoly::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_elem(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_elem(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_elem(&self, o: &Self) -> Self {
        self * o
    }
    fn div_elem(&self, o: &Self) -> Self {
        self.div_exact(o).expect("exact division in Q[x]")
    }
}

impl Domain for Polynomial {
    fn zero_of(&self) -> Self {
        self.zero_like()
    }
    fn one_of(&self) -> Self {
        self.one_like()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_elem(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_elem(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_elem(&self, o: &Self) -> Self {
        self * o
    }
    fn div_elem(&self, o: &Self) -> Self {
        self.div_exact(o).expect("exact multivariate division")
    }
}

fn trim<R: Domain>(v: &mut Vec<R>) {
    while v.last().is_some_and(Domain::is_zero_elem) {
        v.pop();
    }
}

/// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a mod b`, coefficient vectors
/// lowest degree first. `b` must be nonzero.
pub fn pseudo_remainder<R: Domain>(a: &[R], b: &[R]) -> Vec<R> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return r;
    }
    let mut steps = r.len() - db;
    while r.len() > db {
        let lr = r.last().cloned().unwrap();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c = c.mul_elem(lb);
        }
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] = r[shift + j].sub_elem(&lr.mul_elem(bc));
        }
        r.pop();
        steps -= 1;
        trim(&mut r);
    }
    // pad the missing multiplications so the scaling is exactly lc^(δ+1)
    if steps > 0 {
        let f = lb.pow_elem(steps);
        for c in r.iter_mut() {
            *c = c.mul_elem(&f);
        }
    }
    r
}

/// Resultant of two polynomials in a main variable with coefficients in `R`,
/// via the subresultant remainder sequence. Both inputs must be nonzero.
pub fn resultant_generic<R: Domain>(a: &[R], b: &[R]) -> R {
    resultant_with_linear(a, b).0
}

/// Resultant together with the degree-one member of the subresultant sequence,
/// when the sequence has one. Both inputs must be nonzero.
pub fn resultant_with_linear<R: Domain>(a: &[R], b: &[R]) -> (R, Option<[R; 2]>) {
    let mut linear = None;
    let res = subresultant_run(a, b, &mut linear);
    (res, linear)
}

fn subresultant_run<R: Domain>(a: &[R], b: &[R], linear: &mut Option<[R; 2]>) -> R {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    let unit = a.first().or(b.first()).expect("nonzero input").one_of();
    if a.is_empty() || b.is_empty() {
        return unit.zero_of();
    }
    let mut sign_neg = false;
    if a.len() < b.len() {
        if (a.len() - 1) % 2 == 1 && (b.len() - 1) % 2 == 1 {
            sign_neg = true;
        }
        std::mem::swap(&mut a, &mut b);
    }
    if b.len() == 1 {
        let r = b[0].pow_elem(a.len() - 1);
        return if sign_neg { r.neg_elem() } else { r };
    }
    let mut g = unit.clone();
    let mut h = unit.clone();
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign_neg = !sign_neg;
        }
        let r = pseudo_remainder(&a, &b);
        a = b;
        if r.is_empty() {
            return unit.zero_of();
        }
        let divisor = g.mul_elem(&h.pow_elem(delta));
        b = r.iter().map(|c| c.div_elem(&divisor)).collect();
        if b.len() == 2 {
            *linear = Some([b[0].clone(), b[1].clone()]);
        }
        g = a.last().cloned().unwrap();
        h = if delta == 0 { h } else { g.pow_elem(delta).div_elem(&h.pow_elem(delta - 1)) };
        if b.len() == 1 {
            let da = a.len() - 1;
            let lb = b[0].clone();
            let res = if da == 0 { unit.clone() } else { lb.pow_elem(da).div_elem(&h.pow_elem(da - 1)) };
            return if sign_neg { res.neg_elem() } else { res };
        }
    }
}

/// Resultant of univariate rational polynomials.
pub fn resultant_univariate(a: &UPoly, b: &UPoly) -> Rational {
    if a.is_zero() || b.is_zero() {
        return Rational::zero();
    }
    resultant_generic(a.coeffs(), b.coeffs())
}

/// Resultant of `a` and `b` with respect to `var`.
pub fn resultant(a: &Polynomial, b: &Polynomial, var: &str) -> Result<Polynomial, PolyError> {
    if !a.same_vars(b) {
        return Err(PolyError::VariableMismatch);
    }
    let idx = a.var_index(var)?;
    resultant_in(a, b, idx)
}

pub(crate) fn resultant_in(a: &Polynomial, b: &Polynomial, idx: usize) -> Result<Polynomial, PolyError> {
    if a.is_zero() || b.is_zero() {
        return Ok(a.zero_like());
    }
    if a.degree_in(idx) == 0 && b.degree_in(idx) == 0 {
        return Err(PolyError::BothConstantInVar);
    }
    Ok(resultant_generic(&a.coefficients_in(idx), &b.coefficients_in(idx)))
}

/// Discriminant `(-1)^(n(n-1)/2) Res(p, p') / lc(p)` with respect to `var`.
pub fn discriminant(p: &Polynomial, var: &str) -> Result<Polynomial, PolyError> {
    let idx = p.var_index(var)?;
    let n = p.degree_in(idx);
    if p.is_zero() || n == 0 {
        return Err(PolyError::DegreeZero);
    }
    if n == 1 {
        return Ok(p.one_like());
    }
    let d = p.derivative(idx);
    let res = resultant_in(p, &d, idx)?;
    let lc = p.coefficients_in(idx).pop().unwrap();
    let q = res.div_exact(&lc).expect("leading coefficient divides the resultant");
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -q } else { q })
}

/// Discriminant of a univariate polynomial with the same sign convention.
pub fn discriminant_univariate(p: &UPoly) -> Rational {
    let n = p.deg();
    if n <= 1 {
        return Rational::one();
    }
    let r = resultant_univariate(p, &p.derivative()) / p.lc();
    if (n * (n - 1) / 2) % 2 == 1 {
        -r
    } else {
        r
    }
}

/// Greatest common divisor, normalized (integer content 1, positive leading
/// coefficient). `gcd(a, 0)` is the normalized `a`; `gcd(0, 0) = 0`.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    let main = (0..a.nvars()).rev().find(|&i| a.involves(i) || b.involves(i));
    let Some(v) = main else {
        return a.one_like();
    };
    if let (Ok(ua), Ok(ub)) = (a.to_upoly(v), b.to_upoly(v)) {
        return a.from_upoly(v, &ua.gcd(&ub)).normalized();
    }
    if super::modular::certainly_coprime(a, b) {
        return a.one_like();
    }
    let ac = a.coefficients_in(v);
    let bc = b.coefficients_in(v);
    let ca = content(&ac);
    let cb = content(&bc);
    let c = gcd(&ca, &cb);
    let mut u: Vec<Polynomial> = ac.iter().map(|x| x.div_exact(&ca).expect("content divides")).collect();
    let mut w: Vec<Polynomial> = bc.iter().map(|x| x.div_exact(&cb).expect("content divides")).collect();
    if u.len() < w.len() {
        std::mem::swap(&mut u, &mut w);
    }
    let g = if w.len() == 1 {
        // w is a unit in the main variable after removing content
        a.one_like()
    } else {
        loop {
            let r = pseudo_remainder(&u, &w);
            if r.is_empty() {
                break a.from_coefficients_in(v, &w);
            }
            if r.len() == 1 {
                break a.one_like();
            }
            let cr = content(&r);
            u = w;
            let r: Vec<Polynomial> = r.iter().map(|x| x.div_exact(&cr).expect("content divides")).collect();
            // strip the rational content too, or coefficients grow exponentially
            w = a.from_coefficients_in(v, &r).normalized().coefficients_in(v);
        }
    };
    (&c * &g).normalized()
}

fn content(coeffs: &[Polynomial]) -> Polynomial {
    let mut acc = coeffs[0].zero_like();
    for c in coeffs {
        acc = gcd(&acc, c);
        if acc.is_constant() && !acc.is_zero() {
            return acc.one_like();
        }
    }
    acc
}

/// `p / gcd(p, dp/dvar)`, normalized.
pub fn squarefree_part(p: &Polynomial, var: &str) -> Result<Polynomial, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let idx = p.var_index(var)?;
    let g = gcd(p, &p.derivative(idx));
    Ok(p.div_exact(&g).expect("gcd divides").normalized())
}

/// Removes from `p` every factor it shares with `q`.
pub fn saturate(p: &Polynomial, q: &Polynomial) -> Result<Polynomial, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if !p.same_vars(q) {
        return Err(PolyError::VariableMismatch);
    }
    if q.is_zero() {
        return Ok(p.normalized());
    }
    let mut p = p.clone();
    loop {
        let g = gcd(&p, q);
        if g.is_constant() {
            return Ok(p.normalized());
        }
        p = p.div_exact(&g).expect("gcd divides");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse_polynomial;
    use crate::poly::rational::int;

    fn pp(s: &str, vars: &[&str]) -> Polynomial {
        parse_polynomial(s, vars).unwrap()
    }

    #[test]
    fn resultant_examples() {
        let v = ["x", "y", "z"];
        assert_eq!(resultant(&pp("x^2 - 2", &v), &pp("x - 3", &v), "x").unwrap(), pp("7", &v));
        let r = resultant(&pp("x - y", &v), &pp("x - z", &v), "x").unwrap();
        assert!(r == pp("y - z", &v) || r == pp("z - y", &v));
        let u = pp("x^2 + y", &v);
        let w = pp("x*z - 1", &v);
        let common = pp("x - y", &v);
        assert!(resultant(&(&common * &u), &(&common * &w), "x").unwrap().is_zero());
        assert_eq!(resultant(&pp("y", &v), &pp("z", &v), "x"), Err(PolyError::BothConstantInVar));
    }

    #[test]
    fn discriminant_examples() {
        let v = ["x", "b", "c", "p", "q"];
        assert_eq!(discriminant(&pp("x^2 + b*x + c", &v), "x").unwrap(), pp("b^2 - 4*c", &v));
        assert!(discriminant(&pp("(x-1)^2", &v), "x").unwrap().is_zero());
        assert_eq!(discriminant(&pp("x^3 + p*x + q", &v), "x").unwrap(), pp("-4*p^3 - 27*q^2", &v));
        assert_eq!(discriminant(&pp("b", &v), "x"), Err(PolyError::DegreeZero));
    }

    #[test]
    fn univariate_resultant_matches_root_product() {
        // Res(x^2-1, x-a) = (1-a)(-1-a)... evaluated: Res(x^2 - 1, x - 3) = 8
        let a = UPoly::from_ints(&[-1, 0, 1]);
        let b = UPoly::from_ints(&[-3, 1]);
        assert_eq!(resultant_univariate(&a, &b), int(8));
        assert_eq!(discriminant_univariate(&UPoly::from_ints(&[-1, 0, 1])), int(4));
    }

    #[test]
    fn gcd_examples() {
        let v = ["x", "y"];
        assert_eq!(gcd(&pp("x^2 - 1", &v), &pp("x - 1", &v)), pp("x - 1", &v));
        assert_eq!(gcd(&pp("x", &v), &pp("y", &v)), pp("1", &v));
        let a = pp("(x+y)^2*(x-y)", &v);
        let b = pp("(x+y)*(x-y)^2", &v);
        let g = gcd(&a, &b);
        assert!(a.div_exact(&g).is_some() && b.div_exact(&g).is_some());
        assert_eq!(g.total_degree(), Some(2));
        let h = pp("x^2 - y^2", &v);
        assert!(g.div_exact(&h).is_some() && h.div_exact(&g).is_some());
        assert_eq!(gcd(&pp("6*x + 4", &v), &pp("0", &v)), pp("3*x + 2", &v));
    }

    #[test]
    fn squarefree_and_saturation() {
        let v = ["x"];
        assert_eq!(squarefree_part(&pp("(x-1)^2*(x+2)", &v), "x").unwrap(), pp("(x-1)*(x+2)", &v));
        assert_eq!(squarefree_part(&pp("x^4", &v), "x").unwrap(), pp("x", &v));
        assert_eq!(saturate(&pp("x^2*(x-1)", &v), &pp("x", &v)).unwrap(), pp("x - 1", &v));
        assert_eq!(saturate(&pp("x - 1", &v), &pp("1", &v)).unwrap(), pp("x - 1", &v));
        assert_eq!(saturate(&pp("(x-1)^3*(x-2)", &v), &pp("x - 1", &v)).unwrap(), pp("x - 2", &v));
        assert_eq!(saturate(&pp("0", &v), &pp("x", &v)), Err(PolyError::ZeroPolynomial));
    }
}
