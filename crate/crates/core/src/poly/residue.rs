//! Arithmetic in `Q[t]/(m)` for a squarefree `m` that need not be irreducible.
//!
//! Inverting a zero divisor does not fail silently: it reports the nontrivial
//! factor of `m` it exposed ([`Split`]), and [`split_run`] reruns the computation
//! on both factors. This keeps every computation over algebraic points exact
//! without factoring over Q.

use num_traits::{One, Zero};

use super::rational::Rational;
use super::univariate::UPoly;

/// From this modulus degree on, inverses are lifted from prime images.
const MODULAR_DEGREE: usize = 8;

/// A nontrivial monic factor of the current modulus was found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split(pub UPoly);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residue {
    modulus: UPoly,
}

impl Residue {
    /// `modulus` must be squarefree and of positive degree.
    pub fn new(modulus: &UPoly) -> Self {
        assert!(modulus.deg() >= 1, "modulus must have positive degree");
        Residue { modulus: modulus.monic() }
    }

    pub fn modulus(&self) -> &UPoly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg()
    }

    pub fn reduce(&self, a: &UPoly) -> UPoly {
        if a.degree().is_some_and(|d| d >= self.modulus.deg()) {
            a.rem(&self.modulus)
        } else {
            a.clone()
        }
    }

    pub fn constant(&self, c: Rational) -> UPoly {
        UPoly::constant(c)
    }

    pub fn add(&self, a: &UPoly, b: &UPoly) -> UPoly {
        a + b
    }

    pub fn sub(&self, a: &UPoly, b: &UPoly) -> UPoly {
        a - b
    }

    pub fn mul(&self, a: &UPoly, b: &UPoly) -> UPoly {
        self.reduce(&(a * b))
    }

    pub fn pow(&self, a: &UPoly, mut e: u32) -> UPoly {
        let mut base = a.clone();
        let mut acc = UPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Zero test in the residue ring (elements are kept reduced).
    pub fn is_zero(&self, a: &UPoly) -> bool {
        self.reduce(a).is_zero()
    }

    /// Inverse of `a`. A zero divisor yields the factor of the modulus on which it vanishes.
    pub fn inv(&self, a: &UPoly) -> Result<UPoly, Split> {
        let a = self.reduce(a);
        assert!(!a.is_zero(), "inverse of zero in a residue ring");
        if self.degree() >= MODULAR_DEGREE {
            if let Some(s) = super::modular::inverse_mod(&a, &self.modulus) {
                return Ok(s);
            }
        }
        let (g, s) = a.half_ext_gcd(&self.modulus);
        if g.is_constant() {
            Ok(self.reduce(&s.scale(&g.lc().recip())))
        } else {
            Err(Split(g))
        }
    }

    /// Splits the modulus into the part where `a` vanishes and the part where it is a unit.
    pub fn zero_locus(&self, a: &UPoly) -> (Option<UPoly>, Option<UPoly>) {
        let g = self.reduce(a).gcd(&self.modulus);
        let g = if self.reduce(a).is_zero() { self.modulus.clone() } else { g };
        if g.is_constant() {
            return (None, Some(self.modulus.clone()));
        }
        if g.deg() == self.modulus.deg() {
            return (Some(self.modulus.clone()), None);
        }
        let rest = self.modulus.div_exact(&g).expect("gcd divides modulus").monic();
        (Some(g.monic()), Some(rest))
    }

    /// Evaluates a univariate polynomial at the class of `t`'s image `x`.
    pub fn eval(&self, p: &UPoly, x: &UPoly) -> UPoly {
        let mut acc = UPoly::zero();
        for c in p.coeffs().iter().rev() {
            acc = self.mul(&acc, x);
            acc = &acc + &UPoly::constant(c.clone());
        }
        acc
    }
}

/// Runs `f` over `Q[t]/(m)`, splitting the modulus whenever `f` hits a zero divisor.
/// Returns one result per final factor of `m`, in a deterministic order.
pub fn split_run<T>(m: &UPoly, mut f: impl FnMut(&Residue) -> Result<T, Split>) -> Vec<(UPoly, T)> {
    let mut work = vec![m.monic()];
    let mut done = Vec::new();
    while let Some(cur) = work.pop() {
        let ring = Residue::new(&cur);
        match f(&ring) {
            Ok(v) => done.push((cur, v)),
            Err(Split(g)) => {
                let g = g.monic();
                let rest = cur.div_exact(&g).expect("split factor divides").monic();
                debug_assert!(g.deg() >= 1 && rest.deg() >= 1);
                work.push(rest);
                work.push(g);
            }
        }
    }
    done.sort_by(|a, b| a.0.deg().cmp(&b.0.deg()).then_with(|| cmp_upoly(&a.0, &b.0)));
    done
}

/// Total order on polynomials used to make outputs deterministic.
pub fn cmp_upoly(a: &UPoly, b: &UPoly) -> std::cmp::Ordering {
    a.deg().cmp(&b.deg()).then_with(|| {
        for k in (0..=a.deg()).rev() {
            let o = a.coeff(k).cmp(&b.coeff(k));
            if o != std::cmp::Ordering::Equal {
                return o;
            }
        }
        std::cmp::Ordering::Equal
    })
}

/// Gcd of two polynomials in `y` whose coefficients live in `Q[t]/(m)`, made monic.
/// Coefficient vectors are lowest degree first.
pub fn gcd_over(ring: &Residue, a: &[UPoly], b: &[UPoly]) -> Result<Vec<UPoly>, Split> {
    let mut a: Vec<UPoly> = a.iter().map(|c| ring.reduce(c)).collect();
    let mut b: Vec<UPoly> = b.iter().map(|c| ring.reduce(c)).collect();
    trim(ring, &mut a);
    trim(ring, &mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = rem_over(ring, &a, &b)?;
        a = b;
        b = r;
    }
    monic_over(ring, &a)
}

pub fn monic_over(ring: &Residue, a: &[UPoly]) -> Result<Vec<UPoly>, Split> {
    let Some(lc) = a.last() else { return Ok(Vec::new()) };
    let inv = ring.inv(lc)?;
    Ok(a.iter().map(|c| ring.mul(c, &inv)).collect())
}

fn trim(ring: &Residue, v: &mut Vec<UPoly>) {
    while v.last().is_some_and(|c| ring.is_zero(c)) {
        v.pop();
    }
}

fn rem_over(ring: &Residue, a: &[UPoly], b: &[UPoly]) -> Result<Vec<UPoly>, Split> {
    let inv = ring.inv(b.last().expect("nonzero divisor"))?;
    let db = b.len() - 1;
    let mut r = a.to_vec();
    trim(ring, &mut r);
    while r.len() > db {
        let c = ring.mul(r.last().unwrap(), &inv);
        let shift = r.len() - 1 - db;
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] = ring.sub(&r[shift + j], &ring.mul(&c, bc));
        }
        r.pop();
        trim(ring, &mut r);
    }
    Ok(r)
}

/// Expands `(y - root)^k` with coefficients in the ring.
pub fn power_of_linear(ring: &Residue, root: &UPoly, k: usize) -> Vec<UPoly> {
    let mut acc = vec![UPoly::one()];
    let neg = -root;
    for _ in 0..k {
        let mut next = vec![UPoly::zero(); acc.len() + 1];
        for (i, c) in acc.iter().enumerate() {
            next[i + 1] = &next[i + 1] + c;
            next[i] = ring.add(&next[i], &ring.mul(c, &neg));
        }
        acc = next;
    }
    acc
}

pub fn is_one(ring: &Residue, a: &UPoly) -> bool {
    ring.is_zero(&(a - &UPoly::one()))
}

pub fn rational_of(a: &UPoly) -> Option<Rational> {
    if a.is_constant() {
        Some(a.coeff(0))
    } else {
        None
    }
}

pub fn zero_rational() -> Rational {
    Rational::zero()
}

pub fn one_rational() -> Rational {
    Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_split() {
        // m = t (t^2 - 2): t is a zero divisor
        let m = UPoly::from_ints(&[0, -2, 0, 1]);
        let ring = Residue::new(&m);
        let t = UPoly::x();
        assert_eq!(ring.inv(&t), Err(Split(UPoly::x())));
        let u = UPoly::from_ints(&[1, 1]);
        let inv = ring.inv(&u).unwrap();
        assert!(is_one(&ring, &ring.mul(&u, &inv)));
        let results = split_run(&m, |r| {
            if r.is_zero(&UPoly::x()) {
                return Ok(false);
            }
            let i = r.inv(&UPoly::x())?;
            Ok(is_one(r, &r.mul(&i, &UPoly::x())))
        });
        assert_eq!(results.len(), 2);
        assert_eq!(results[0], (UPoly::x(), false));
        assert_eq!(results[1], (UPoly::from_ints(&[-2, 0, 1]), true));
    }

    #[test]
    fn gcd_over_extension() {
        // over Q[t]/(t^2-2): gcd(y^2 - 2, y - t) = y - t
        let ring = Residue::new(&UPoly::from_ints(&[-2, 0, 1]));
        let a = vec![UPoly::from_ints(&[-2]), UPoly::zero(), UPoly::one()];
        let b = vec![-&UPoly::x(), UPoly::one()];
        let g = gcd_over(&ring, &a, &b).unwrap();
        assert_eq!(g, b);
    }
}
