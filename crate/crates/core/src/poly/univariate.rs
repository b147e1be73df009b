//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are stored lowest degree first with no trailing zeros, so the
//! zero polynomial is the empty vector. Gcds run a primitive remainder sequence
//! over the integers to keep coefficient growth in check.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::rational::{denominator_lcm, format_rational, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    /// `x - r`.
    pub fn linear_root(r: &Rational) -> Self {
        Self::from_coeffs(vec![-r.clone(), Rational::one()])
    }

    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.push(c);
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn from_integers(coeffs: &[BigInt]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|c| Rational::from_integer(c.clone())).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        UPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let inv = self.lc().recip();
        self.scale(&inv)
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * Rational::from_integer(k.into())).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
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

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &UPoly) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Self::constant(c.clone());
        }
        acc
    }

    /// `self(x + c)`.
    pub fn shift(&self, c: &Rational) -> Self {
        self.compose(&Self::from_coeffs(vec![c.clone(), Rational::one()]))
    }

    /// `x^deg * self(1/x)`.
    pub fn reverse(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self::from_coeffs(coeffs)
    }

    /// Multiplicity of `x = 0` as a root (0 for the zero polynomial).
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.deg();
        if self.coeffs.len() < d.coeffs.len() {
            return (Self::zero(), self.clone());
        }
        // pseudo-division on integer numerators; rationals are formed once at the end
        let (mut r, da) = self.scaled();
        let (dv, dden) = d.scaled();
        let ld = &dv[dd];
        let unit = ld.is_one();
        let mut f = BigInt::one();
        let mut quot = vec![Rational::zero(); r.len() - dd];
        while r.len() > dd {
            let s = r.len() - 1 - dd;
            let t = r.pop().unwrap();
            if t.is_zero() {
                continue;
            }
            if !unit {
                for c in r.iter_mut() {
                    *c *= ld;
                }
                f *= ld;
            }
            for (j, c) in dv[..dd].iter().enumerate() {
                r[s + j] -= &t * c;
            }
            quot[s] = Rational::new(t * &dden, &f * &da);
        }
        let rem = Self::from_scaled(r, &(f * da));
        (Self::from_coeffs(quot), rem)
    }

    /// Integer numerators over a common denominator.
    fn scaled(&self) -> (Vec<BigInt>, BigInt) {
        let den = denominator_lcm(&self.coeffs);
        let ints = self.coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        (ints, den)
    }

    fn from_scaled(ints: Vec<BigInt>, den: &BigInt) -> Self {
        Self::from_coeffs(ints.into_iter().map(|c| Rational::new(c, den.clone())).collect())
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        self.div_rem(d).1
    }

    /// Exact quotient, `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &UPoly) -> Option<UPoly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Clears denominators and removes the integer content; the leading coefficient
    /// is made positive. Returns integer coefficients, lowest degree first.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let l = denominator_lcm(&self.coeffs);
        let mut ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().is_some_and(|c| c.is_negative()) { -BigInt::one() } else { BigInt::one() };
        let div = g * sign;
        for c in &mut ints {
            *c = &*c / &div;
        }
        ints
    }

    /// Canonical associate: integer coefficients, content 1, positive leading coefficient.
    pub fn primitive(&self) -> UPoly {
        Self::from_integers(&self.primitive_integer())
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let mut a = self.primitive_integer();
        let mut b = other.primitive_integer();
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let r = int_prem(&a, &b);
            a = b;
            b = int_primitive(r);
        }
        Self::from_integers(&a).monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &UPoly) -> (UPoly, UPoly, UPoly) {
        if self.is_zero() && other.is_zero() {
            return (Self::zero(), Self::zero(), Self::zero());
        }
        let (g, s) = self.half_ext_gcd(other);
        // t = (g - s*self)/other
        let t = if other.is_zero() { Self::zero() } else { (&g - &(&s * self)).div_exact(other).expect("Bezout relation") };
        (g, s, t)
    }

    /// `(g, s)` with `s*self = g (mod other)`, `g` the monic gcd. Remainders are kept
    /// monic so coefficient growth stays linear in the degree.
    pub fn half_ext_gcd(&self, other: &UPoly) -> (UPoly, UPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        if r0.is_zero() {
            return (r1.monic(), Self::zero());
        }
        let l = r0.lc().recip();
        r0 = r0.scale(&l);
        s0 = s0.scale(&l);
        if !r1.is_zero() {
            let l = r1.lc().recip();
            r1 = r1.scale(&l);
        }
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            let (r, s) = if r.is_zero() {
                (r, s)
            } else {
                let l = r.lc().recip();
                (r.scale(&l), s.scale(&l))
            };
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        (r0, s0)
    }

    /// `self / gcd(self, self')`, monic.
    pub fn squarefree_part(&self) -> UPoly {
        if self.is_constant() {
            return if self.is_zero() { Self::zero() } else { Self::one() };
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).expect("gcd divides").monic()
    }

    /// Yun's algorithm: returns `(multiplicity, factor)` pairs with monic squarefree,
    /// pairwise coprime, non-constant factors whose product (with multiplicities)
    /// is the monic associate of `self`.
    pub fn squarefree_decomposition(&self) -> Vec<(u32, UPoly)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let f = self.monic();
        let d = f.derivative();
        let mut a = f.gcd(&d);
        let mut b = f.div_exact(&a).expect("gcd divides");
        let mut c = d.div_exact(&a).expect("gcd divides");
        let mut dd = &c - &b.derivative();
        let mut k = 1u32;
        while !b.is_constant() {
            a = b.gcd(&dd);
            if !a.is_constant() {
                out.push((k, a.clone()));
            }
            b = b.div_exact(&a).expect("gcd divides");
            c = dd.div_exact(&a).expect("gcd divides");
            dd = &c - &b.derivative();
            k += 1;
        }
        out
    }

    /// Removes every factor that `self` shares with `q`.
    pub fn saturate(&self, q: &UPoly) -> UPoly {
        let mut p = self.clone();
        if q.is_zero() {
            return p;
        }
        loop {
            let g = p.gcd(q);
            if g.is_constant() {
                return p;
            }
            p = p.div_exact(&g).expect("gcd divides");
        }
    }

    /// Multiplicity of `r` as a root.
    pub fn root_multiplicity(&self, r: &Rational) -> u32 {
        if self.is_zero() {
            return 0;
        }
        self.shift(r).valuation() as u32
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if mono.is_empty() {
                out.push_str(&format_rational(&mag));
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{}", format_rational(&mag), mono));
            }
        }
        out
    }
}

fn int_prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db {
        let lr = r.last().cloned().unwrap();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] -= &lr * bc;
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

fn int_primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() || g.is_one() {
        return v;
    }
    for c in &mut v {
        *c = &*c / &g;
    }
    v
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly({})", self.display_in("x"))
    }
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            match (self.coeffs.get(k), rhs.coeffs.get(k)) {
                (Some(a), Some(b)) => out.push(a + b),
                (Some(a), None) => out.push(a.clone()),
                (None, Some(b)) => out.push(b.clone()),
                (None, None) => unreachable!(),
            }
        }
        UPoly::from_coeffs(out)
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, rhs: &UPoly) -> UPoly {
        self + &(-rhs)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let (a, da) = self.scaled();
        let (b, db) = rhs.scaled();
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        UPoly::from_scaled(out, &(da * db))
    }
}

impl Add for UPoly {
    type Output = UPoly;
    fn add(self, rhs: UPoly) -> UPoly {
        &self + &rhs
    }
}

impl Sub for UPoly {
    type Output = UPoly;
    fn sub(self, rhs: UPoly) -> UPoly {
        &self - &rhs
    }
}

impl Mul for UPoly {
    type Output = UPoly;
    fn mul(self, rhs: UPoly) -> UPoly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::{int, rat};

    fn p(c: &[i64]) -> UPoly {
        UPoly::from_ints(c)
    }

    #[test]
    fn gcd_and_division() {
        let a = &p(&[-1, 1]) * &p(&[1, 1]);
        let b = &p(&[-1, 1]) * &p(&[2, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        assert_eq!(p(&[1, 1]).gcd(&p(&[2, 1])), UPoly::one());
        let (q, r) = p(&[-2, 0, 1]).div_rem(&p(&[-3, 1]));
        assert_eq!(q, p(&[3, 1]));
        assert_eq!(r, p(&[7]));
    }

    #[test]
    fn ext_gcd_bezout() {
        let a = p(&[1, 0, 1]);
        let b = p(&[-1, 1, 3]);
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(g, UPoly::one());
        assert_eq!(&(&s * &a) + &(&t * &b), UPoly::one());
    }

    #[test]
    fn squarefree_decomposition_recovers_factors() {
        // (x-1)^2 (x+2) x^3
        let f = &(&p(&[-1, 1]).pow(2) * &p(&[2, 1])) * &p(&[0, 1]).pow(3);
        let dec = f.squarefree_decomposition();
        assert_eq!(dec, vec![(1, p(&[2, 1])), (2, p(&[-1, 1])), (3, p(&[0, 1]))]);
        assert_eq!(f.squarefree_part(), &(&p(&[-1, 1]) * &p(&[2, 1])) * &p(&[0, 1]));
        assert_eq!(p(&[0, 0, 0, 0, 1]).squarefree_part(), p(&[0, 1]));
    }

    #[test]
    fn saturation_and_multiplicity() {
        let f = &p(&[-1, 1]).pow(3) * &p(&[-2, 1]);
        assert_eq!(f.saturate(&p(&[-1, 1])).monic(), p(&[-2, 1]));
        assert_eq!(f.root_multiplicity(&int(1)), 3);
        assert_eq!(f.root_multiplicity(&int(2)), 1);
        assert_eq!(f.root_multiplicity(&int(0)), 0);
    }

    #[test]
    fn compose_shift_reverse() {
        let f = p(&[1, 2, 3]);
        assert_eq!(f.shift(&int(1)), p(&[6, 8, 3]));
        assert_eq!(f.reverse(), p(&[3, 2, 1]));
        assert_eq!(f.eval(&rat(1, 2)), rat(11, 4));
        assert_eq!(p(&[0, 0, 5]).valuation(), 2);
        assert_eq!(f.display_in("g"), "3*g^2 + 2*g + 1");
    }
}
