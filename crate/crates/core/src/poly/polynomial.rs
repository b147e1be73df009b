use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::monomial::Monomial;
use super::rational::{denominator_lcm, format_rational, parse_rational, Rational};
use super::univariate::UPoly;
use super::PolyError;

/// Sparse multivariate polynomial over the rationals.
///
/// Terms live in a map keyed by graded-lex ordered monomials; zero coefficients are
/// never stored, so the zero polynomial is the empty map.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    vars: Arc<[String]>,
    terms: BTreeMap<Monomial, Rational>,
}

/// One entry of the structured serialization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exponents: Vec<u32>,
    pub coeff: String,
}

impl Polynomial {
    pub fn zero<S: AsRef<str>>(vars: &[S]) -> Self {
        Polynomial { vars: vars.iter().map(|s| s.as_ref().to_string()).collect(), terms: BTreeMap::new() }
    }

    pub fn zero_like(&self) -> Self {
        Polynomial { vars: self.vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant<S: AsRef<str>>(vars: &[S], c: Rational) -> Self {
        Self::zero(vars).constant_like(c)
    }

    pub fn constant_like(&self, c: Rational) -> Self {
        let mut p = self.zero_like();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(self.vars.len()), c);
        }
        p
    }

    pub fn one_like(&self) -> Self {
        self.constant_like(Rational::one())
    }

    pub fn variable<S: AsRef<str>>(vars: &[S], name: &str) -> Result<Self, PolyError> {
        let p = Self::zero(vars);
        let idx = p.var_index(name)?;
        Ok(p.var_like(idx))
    }

    /// The polynomial `vars[idx]` over this polynomial's variable list.
    pub fn var_like(&self, idx: usize) -> Self {
        let mut p = self.zero_like();
        p.terms.insert(Monomial::var(self.vars.len(), idx), Rational::one());
        p
    }

    pub fn from_terms<S: AsRef<str>>(vars: &[S], terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), p.vars.len(), "exponent length must match variable count");
            p.add_term(Monomial::new(e), c);
        }
        p
    }

    /// Builds a polynomial from `(exponents, coeff)` records with rational text coefficients.
    pub fn from_records<S: AsRef<str>>(vars: &[S], records: &[TermRecord]) -> Result<Self, PolyError> {
        let mut p = Self::zero(vars);
        for r in records {
            if r.exponents.len() != p.vars.len() {
                return Err(PolyError::VariableMismatch);
            }
            let c = parse_rational(&r.coeff).ok_or_else(|| PolyError::Syntax { position: 0, message: format!("bad coefficient {:?}", r.coeff) })?;
            p.add_term(Monomial::new(r.exponents.clone()), c);
        }
        Ok(p)
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms.iter().rev().map(|(m, c)| TermRecord { exponents: m.exponents().to_vec(), coeff: format_rational(c) }).collect()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Result<usize, PolyError> {
        self.vars.iter().position(|v| v == name).ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }

    pub fn same_vars(&self, other: &Polynomial) -> bool {
        Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(&Monomial::new(exps.to_vec())).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.constant_term())
        } else {
            None
        }
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::one(self.vars.len())).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, idx: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(idx)).max().unwrap_or(0)
    }

    /// Lowest total degree of a term (order of vanishing at the origin).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn involves(&self, idx: usize) -> bool {
        self.terms.keys().any(|m| m.exponent(idx) > 0)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        if !self.same_vars(other) {
            return Err(PolyError::VariableMismatch);
        }
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        if !self.same_vars(other) {
            return Err(PolyError::VariableMismatch);
        }
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        if !self.same_vars(other) {
            return Err(PolyError::VariableMismatch);
        }
        Ok(self * other)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return self.zero_like();
        }
        Polynomial { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return self.zero_like();
        }
        Polynomial { vars: self.vars.clone(), terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn partial_derivative(&self, var: &str) -> Result<Polynomial, PolyError> {
        Ok(self.derivative(self.var_index(var)?))
    }

    pub fn derivative(&self, idx: usize) -> Polynomial {
        let mut p = self.zero_like();
        for (m, c) in &self.terms {
            let e = m.exponent(idx);
            if e > 0 {
                p.add_term(m.with_exponent(idx, e - 1), c * Rational::from_integer(e.into()));
            }
        }
        p
    }

    /// Substitutes the given variables by rational values. The variable list is kept;
    /// substituted variables simply no longer occur.
    pub fn evaluate(&self, point: &[(&str, Rational)]) -> Result<Polynomial, PolyError> {
        let mut values: Vec<Option<&Rational>> = vec![None; self.vars.len()];
        for (name, v) in point {
            values[self.var_index(name)?] = Some(v);
        }
        Ok(self.evaluate_indexed(&values))
    }

    pub fn evaluate_indexed(&self, values: &[Option<&Rational>]) -> Polynomial {
        let mut p = self.zero_like();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut exps = m.exponents().to_vec();
            for (i, v) in values.iter().enumerate() {
                if let Some(v) = v {
                    if exps[i] > 0 {
                        coeff *= pow_rat(v, exps[i]);
                        exps[i] = 0;
                    }
                }
            }
            p.add_term(Monomial::new(exps), coeff);
        }
        p
    }

    /// Full evaluation at a point given in declared variable order.
    pub fn eval_all(&self, values: &[Rational]) -> Rational {
        assert_eq!(values.len(), self.vars.len());
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= pow_rat(&values[i], e);
                }
            }
            acc += t;
        }
        acc
    }

    /// Replaces variable `i` by `images[i]`; the result lives over the images' variables.
    pub fn compose(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.vars.len());
        let target = images.first().map(|p| p.zero_like()).expect("at least one variable");
        let mut powers: Vec<Vec<Polynomial>> = images.iter().map(|p| vec![p.one_like(), p.clone()]).collect();
        let mut acc = target.clone();
        for (m, c) in &self.terms {
            let mut t = target.constant_like(c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                if e > 0 {
                    t = &t * &powers[i][e];
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Re-expresses the polynomial over a new variable list by name. Every variable that
    /// occurs must exist in `vars`.
    pub fn with_vars<S: AsRef<str>>(&self, vars: &[S]) -> Result<Polynomial, PolyError> {
        let target = Polynomial::zero(vars);
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            let pos = target.vars.iter().position(|t| t == v);
            if pos.is_none() && self.involves(i) {
                return Err(PolyError::UnknownVariable(v.clone()));
            }
            map.push(pos);
        }
        let mut p = target.clone();
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.vars.len()];
            for (i, &k) in m.exponents().iter().enumerate() {
                if let Some(j) = map[i] {
                    e[j] += k;
                }
            }
            p.add_term(Monomial::new(e), c.clone());
        }
        Ok(p)
    }

    /// Coefficients of `vars[idx]^k`, `k = 0..=deg`, as polynomials not involving `vars[idx]`.
    pub fn coefficients_in(&self, idx: usize) -> Vec<Polynomial> {
        let deg = self.degree_in(idx) as usize;
        let mut out = vec![self.zero_like(); if self.is_zero() { 0 } else { deg + 1 }];
        for (m, c) in &self.terms {
            let e = m.exponent(idx) as usize;
            out[e].add_term(m.with_exponent(idx, 0), c.clone());
        }
        out
    }

    pub fn from_coefficients_in(&self, idx: usize, coeffs: &[Polynomial]) -> Polynomial {
        let mut p = self.zero_like();
        for (k, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                p.add_term(m.with_exponent(idx, m.exponent(idx) + k as u32), a.clone());
            }
        }
        p
    }

    /// Univariate view in `vars[idx]`; fails if any other variable occurs.
    pub fn to_upoly(&self, idx: usize) -> Result<UPoly, PolyError> {
        if (0..self.vars.len()).any(|i| i != idx && self.involves(i)) {
            return Err(PolyError::NotUnivariate);
        }
        let deg = self.degree_in(idx) as usize;
        let mut c = vec![Rational::zero(); deg + 1];
        for (m, a) in &self.terms {
            c[m.exponent(idx) as usize] = a.clone();
        }
        Ok(UPoly::from_coeffs(c))
    }

    pub fn from_upoly(&self, idx: usize, u: &UPoly) -> Polynomial {
        let mut p = self.zero_like();
        for (k, c) in u.coeffs().iter().enumerate() {
            p.add_term(Monomial::one(self.vars.len()).with_exponent(idx, k as u32), c.clone());
        }
        p
    }

    /// Multivariate division by a single divisor in graded-lex order.
    pub fn div_rem(&self, d: &Polynomial) -> (Polynomial, Polynomial) {
        let (lm, lc) = d.leading_term().map(|(m, c)| (m.clone(), c.clone())).expect("nonzero divisor");
        let inv = lc.recip();
        let mut p = self.clone();
        let mut q = self.zero_like();
        let mut r = self.zero_like();
        while let Some((m, c)) = p.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            if lm.divides(&m) {
                let tm = lm.quotient_of(&m);
                let tc = &c * &inv;
                p = &p - &d.mul_term(&tm, &tc);
                q.add_term(tm, tc);
            } else {
                p.terms.remove(&m);
                r.add_term(m, c);
            }
        }
        (q, r)
    }

    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Canonical associate: integer coefficients with content 1 and positive leading
    /// coefficient. Zero stays zero.
    pub fn normalized(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let l = denominator_lcm(self.terms.values());
        let g = self.terms.values().fold(BigInt::zero(), |acc, c| acc.gcd(&(c * Rational::from_integer(l.clone())).to_integer()));
        let mut factor = Rational::new(l, g);
        if self.leading_coeff().is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    pub fn monic(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading_coeff().recip())
    }

    pub fn max_coeff_bits(&self) -> u64 {
        self.terms.values().map(super::rational::height_bits).max().unwrap_or(0)
    }
}

fn pow_rat(v: &Rational, e: u32) -> Rational {
    num_traits::pow::pow(v.clone(), e as usize)
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mono: Vec<String> = m
                .exponents()
                .iter()
                .zip(self.vars.iter())
                .filter(|(e, _)| **e > 0)
                .map(|(e, v)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            if mono.is_empty() {
                f.write_str(&format_rational(&mag))?;
            } else if mag.is_one() {
                f.write_str(&mono.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&mag), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({})", self.vars.join(","), self)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        debug_assert!(self.same_vars(rhs), "variable lists differ");
        let mut p = self.clone();
        for (m, c) in &rhs.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        debug_assert!(self.same_vars(rhs), "variable lists differ");
        let mut p = self.clone();
        for (m, c) in &rhs.terms {
            p.add_term(m.clone(), -c);
        }
        p
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        debug_assert!(self.same_vars(rhs), "variable lists differ");
        let mut p = self.zero_like();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                p.add_term(ma.mul(mb), ca * cb);
            }
        }
        p
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
