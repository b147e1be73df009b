//! Multi-modular images, Chinese remaindering and rational reconstruction.
//!
//! A quantity with rational coefficients is computed modulo a fixed sequence of
//! primes just below 2^62, combined by CRT, and reconstructed once the images
//! determine it; a reconstruction is accepted only after it matches the image
//! at a further prime. Callers with a cheap exact check over Q apply it as well.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::polynomial::Polynomial;
use super::rational::Rational;
use super::univariate::UPoly;

/// Gives up after this many primes; callers then fall back to exact arithmetic.
const MAX_PRIMES: usize = 4096;
/// Consecutive unusable primes tolerated before giving up.
const MAX_BAD: usize = 4;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &b in &BASES {
        let mut x = pow_mod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The `i`-th prime below 2^62, counting down.
fn prime(i: usize) -> u64 {
    static PRIMES: OnceLock<Mutex<Vec<u64>>> = OnceLock::new();
    let mut primes = PRIMES.get_or_init(|| Mutex::new(Vec::new())).lock().expect("prime table");
    let mut next = primes.last().map_or(1u64 << 62, |&p| p - 2) | 1;
    while primes.len() <= i {
        while !is_prime(next) {
            next -= 2;
        }
        primes.push(next);
        next -= 2;
    }
    primes[i]
}

fn big_mod(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

/// Image of a rational modulo `p`; `None` when `p` divides the denominator.
pub fn rational_mod(r: &Rational, p: u64) -> Option<u64> {
    let d = big_mod(r.denom(), p);
    (d != 0).then(|| mul_mod(big_mod(r.numer(), p), inv_mod(d, p), p))
}

/// Coefficient images padded to `len`; `None` when `p` divides a denominator.
pub fn upoly_mod(a: &UPoly, p: u64, len: usize) -> Option<Vec<u64>> {
    let mut out = vec![0u64; len.max(a.coeffs().len())];
    for (slot, c) in out.iter_mut().zip(a.coeffs()) {
        *slot = rational_mod(c, p)?;
    }
    Some(out)
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u128; a.len() + b.len() - 1];
    let pp = p as u128;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u128 * y as u128) % pp;
        }
    }
    let mut v: Vec<u64> = out.into_iter().map(|c| c as u64).collect();
    trim(&mut v);
    v
}

/// `a mod m` for `m` with nonzero leading coefficient.
fn fp_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    fp_div_rem(a, m, p).1
}

fn fp_div_rem(a: &[u64], m: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() <= dm {
        return (Vec::new(), r);
    }
    let inv = inv_mod(m[dm], p);
    let mut q = vec![0u64; r.len() - dm];
    while r.len() > dm {
        let s = r.len() - 1 - dm;
        let c = mul_mod(r.pop().unwrap(), inv, p);
        q[s] = c;
        if c != 0 {
            for (j, &mc) in m[..dm].iter().enumerate() {
                r[s + j] = (r[s + j] + p - mul_mod(c, mc, p)) % p;
            }
        }
    }
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

fn fp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = (x + p - y) % p;
    }
    trim(&mut out);
    out
}

/// Inverse of `a` modulo `m` over F_p, `None` when they share a factor.
fn fp_inverse(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    trim(&mut r0);
    trim(&mut r1);
    let (mut s0, mut s1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = fp_div_rem(&r0, &r1, p);
        let s = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if r0.len() != 1 {
        return None;
    }
    let c = inv_mod(r0[0], p);
    Some(s0.iter().map(|&x| mul_mod(x, c, p)).collect())
}

/// Characteristic polynomial of multiplication by `v` in F_p[t]/(m), `m` monic of
/// degree `n < p`, from traces of powers and Newton's identities.
fn fp_char_poly(v: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let n = m.len() - 1;
    // power sums of the roots of m
    let mut ps = vec![0u64; n];
    ps[0] = n as u64 % p;
    for k in 1..n {
        let mut acc = mul_mod(k as u64, m[n - k], p);
        for i in 1..k {
            acc = (acc + mul_mod(m[n - i], ps[k - i], p)) % p;
        }
        ps[k] = (p - acc) % p;
    }
    let trace = |u: &[u64]| u.iter().zip(&ps).fold(0u64, |acc, (&a, &b)| (acc + mul_mod(a, b, p)) % p);
    let v = fp_rem(v, m, p);
    let mut power = vec![1u64];
    let mut s = vec![0u64; n + 1];
    for slot in s.iter_mut().skip(1) {
        power = fp_rem(&fp_mul(&power, &v, p), m, p);
        *slot = trace(&power);
    }
    let mut e = vec![0u64; n + 1];
    e[0] = 1;
    for k in 1..=n {
        let mut acc = 0u64;
        for i in 1..=k {
            let term = mul_mod(e[k - i], s[i], p);
            acc = if i % 2 == 1 { (acc + term) % p } else { (acc + p - term) % p };
        }
        e[k] = mul_mod(acc, inv_mod(k as u64, p), p);
    }
    let mut out = vec![0u64; n + 1];
    for k in 0..=n {
        out[n - k] = if k % 2 == 0 { e[k] } else { (p - e[k]) % p };
    }
    out
}

fn fp_gcd_degree(a: &[u64], b: &[u64], p: u64) -> usize {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    trim(&mut r0);
    trim(&mut r1);
    while !r1.is_empty() {
        let r = fp_div_rem(&r0, &r1, p).1;
        r0 = std::mem::replace(&mut r1, r);
    }
    r0.len().saturating_sub(1)
}

/// Image in F_p[x_v] of `a` with every other variable set to `point`.
fn specialize(a: &Polynomial, v: usize, point: &[u64], p: u64) -> Option<Vec<u64>> {
    let mut out = vec![0u64; a.degree_in(v) as usize + 1];
    for (m, c) in a.terms() {
        let mut term = rational_mod(c, p)?;
        for (i, &e) in m.exponents().iter().enumerate() {
            if i != v {
                term = mul_mod(term, pow_mod(point[i], e as u64, p), p);
            }
        }
        let k = m.exponent(v) as usize;
        out[k] = (out[k] + term) % p;
    }
    Some(out)
}

/// `true` only if `a` and `b` are certainly coprime: for each variable, some
/// specialization of the others mod p keeps both degrees and has coprime images.
pub fn certainly_coprime(a: &Polynomial, b: &Polynomial) -> bool {
    let n = a.nvars();
    (0..n).all(|v| {
        let (da, db) = (a.degree_in(v) as usize, b.degree_in(v) as usize);
        if da == 0 || db == 0 {
            return true;
        }
        (0..3).any(|trial| {
            let p = prime(trial);
            let point: Vec<u64> = (0..n).map(|i| 1_000_003 + 7919 * (i as u64 + 1) * (trial as u64 + 1)).collect();
            let (Some(ia), Some(ib)) = (specialize(a, v, &point, p), specialize(b, v, &point, p)) else {
                return false;
            };
            ia[da] != 0 && ib[db] != 0 && fp_gcd_degree(&ia, &ib, p) == 0
        })
    })
}

/// Wang's rational reconstruction of `u` modulo `m`.
fn reconstruct(u: &BigInt, m: &BigInt, bound: &BigInt) -> Option<Rational> {
    let (mut r0, mut r1) = (m.clone(), u.clone());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > bound {
        let q = &r0 / &r1;
        let r = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r);
        let t = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t);
    }
    if t1.is_zero() || t1.abs() > *bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

/// Accumulated CRT data for a vector of rationals.
struct Lift {
    modulus: BigInt,
    values: Vec<BigInt>,
}

impl Lift {
    fn new(image: &[u64], p: u64) -> Self {
        Lift { modulus: BigInt::from(p), values: image.iter().map(|&r| BigInt::from(r)).collect() }
    }

    fn absorb(&mut self, image: &[u64], p: u64) {
        let minv = inv_mod(big_mod(&self.modulus, p), p);
        let pb = BigInt::from(p);
        for (x, &r) in self.values.iter_mut().zip(image) {
            let t = mul_mod((r + p - big_mod(x, p)) % p, minv, p);
            if t != 0 {
                *x += &self.modulus * BigInt::from(t);
            }
        }
        self.modulus *= pb;
    }

    /// Reconstructs every value, sharing denominators where possible.
    fn rationals(&self) -> Option<Vec<Rational>> {
        let bound = (&self.modulus / BigInt::from(2)).sqrt();
        let half = &self.modulus / BigInt::from(2);
        let mut den = BigInt::one();
        let mut out = Vec::with_capacity(self.values.len());
        for u in &self.values {
            let mut y = (u * &den).mod_floor(&self.modulus);
            if y > half {
                y -= &self.modulus;
            }
            let q = if y.abs() <= bound {
                let q = Rational::new(y, den.clone());
                (q.denom() <= &bound).then_some(q)
            } else {
                None
            };
            let q = match q {
                Some(q) => q,
                None => reconstruct(u, &self.modulus, &bound)?,
            };
            den = den.lcm(q.denom());
            out.push(q);
        }
        Some(out)
    }
}

fn matches(candidate: &[Rational], image: &[u64], p: u64) -> bool {
    candidate.iter().zip(image).all(|(q, &r)| rational_mod(q, p) == Some(r))
}

/// Lifts a vector of rationals of fixed length from its images; `image(p)`
/// returns `None` for primes that must be skipped.
pub fn lift(mut image: impl FnMut(u64) -> Option<Vec<u64>>) -> Option<Vec<Rational>> {
    let mut acc: Option<Lift> = None;
    let mut candidate: Option<Vec<Rational>> = None;
    let mut used = 0usize;
    let mut next_check = 1usize;
    let mut bad = 0usize;
    for i in 0..MAX_PRIMES {
        let p = prime(i);
        let Some(img) = image(p) else {
            bad += 1;
            if bad > MAX_BAD && acc.is_none() {
                return None;
            }
            continue;
        };
        bad = 0;
        if let Some(c) = candidate.take() {
            if c.len() == img.len() && matches(&c, &img, p) {
                return Some(c);
            }
        }
        match acc.as_mut() {
            None => acc = Some(Lift::new(&img, p)),
            Some(l) => {
                if l.values.len() != img.len() {
                    return None;
                }
                l.absorb(&img, p)
            }
        }
        used += 1;
        if used == next_check {
            next_check += next_check.div_ceil(2);
            candidate = acc.as_ref().and_then(Lift::rationals);
        }
    }
    None
}

/// Inverse of `a` modulo the monic `m` over Q, or `None` if it could not be lifted
/// (for instance when `a` is a zero divisor).
pub fn inverse_mod(a: &UPoly, m: &UPoly) -> Option<UPoly> {
    let n = m.deg();
    let coeffs = lift(|p| {
        let mp = upoly_mod(m, p, n + 1)?;
        let ap = upoly_mod(a, p, 0)?;
        let mut s = fp_inverse(&ap, &mp, p)?;
        s.resize(n, 0);
        Some(s)
    })?;
    let s = UPoly::from_coeffs(coeffs);
    // exact check over Q
    (a * &s).rem(m).eq(&UPoly::one()).then_some(s)
}

/// Characteristic polynomial of multiplication by `v` in `Q[t]/(m)`, `m` monic.
pub fn char_poly_mod(m: &UPoly, v: &UPoly) -> Option<UPoly> {
    let n = m.deg();
    lift(|p| {
        let mp = upoly_mod(m, p, n + 1)?;
        let vp = upoly_mod(v, p, 0)?;
        Some(fp_char_poly(&vp, &mp, p))
    })
    .map(UPoly::from_coeffs)
}

/// Resultant of `a` and `b` over F_p, both nonzero, with their actual degrees.
fn fp_resultant(a: &[u64], b: &[u64], p: u64) -> u64 {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    let mut acc = 1u64;
    loop {
        let (n, m) = (a.len() - 1, b.len() - 1);
        if m == 0 {
            return mul_mod(acc, pow_mod(b[0], n as u64, p), p);
        }
        let r = fp_rem(&a, &b, p);
        if r.is_empty() {
            return 0;
        }
        if n % 2 == 1 && m % 2 == 1 {
            acc = (p - acc) % p;
        }
        acc = mul_mod(acc, pow_mod(b[m], (n - (r.len() - 1)) as u64, p), p);
        a = std::mem::replace(&mut b, r);
    }
}

/// `a(g + d)` over F_p.
fn fp_shift(a: &[u64], d: u64, p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len()];
    for &c in a.iter().rev() {
        for i in (1..out.len()).rev() {
            out[i] = (out[i - 1] + mul_mod(out[i], d, p)) % p;
        }
        out[0] = (mul_mod(out[0], d, p) + c) % p;
    }
    out
}

/// Coefficients of the polynomial of degree below `xs.len()` through the points.
fn fp_interpolate(xs: &[u64], ys: &[u64], p: u64) -> Vec<u64> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = (dd[i] + p - dd[i - 1]) % p;
            dd[i] = mul_mod(num, inv_mod((xs[i] + p - xs[i - j]) % p, p), p);
        }
    }
    let mut acc = vec![0u64; n];
    for i in (0..n).rev() {
        // acc = acc·(x - xs[i]) + dd[i]
        for k in (1..n).rev() {
            acc[k] = (acc[k - 1] + p - mul_mod(acc[k], xs[i], p)) % p;
        }
        acc[0] = (p - mul_mod(acc[0], xs[i], p) + dd[i]) % p;
    }
    acc
}

/// Upper bound on the number of evaluation points for [`difference_resultant`].
const MAX_GRID: usize = 1 << 20;

/// `Res_g(a(l, g), a(l, g + d))` up to a nonzero rational factor, for `a` in two
/// variables `(l, g)`, as a polynomial in `out_vars = (l, d)`. Computed by
/// evaluation and interpolation modulo primes.
pub fn difference_resultant(a: &Polynomial, out_vars: &[&str; 2]) -> Option<Polynomial> {
    let n = a.degree_in(1) as usize;
    let e = a.degree_in(0) as usize;
    let (bl, bd) = (2 * n * e, n * n);
    if n == 0 || (bl + 1) * (bd + 1) > MAX_GRID {
        return None;
    }
    let den = a.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let a = a.scale(&Rational::from_integer(den));
    let lc = a.coefficients_in(1).pop()?;
    let values = lift(|p| {
        let mut ls = Vec::with_capacity(bl + 1);
        let mut rows = Vec::with_capacity(bl + 1);
        let mut x = 1u64;
        while ls.len() <= bl {
            if specialize(&lc, 1, &[x, 0], p)?[0] != 0 {
                let ap = specialize(&a, 1, &[x, 0], p)?;
                let row: Vec<u64> = (0..=bd as u64).map(|d| fp_resultant(&ap, &fp_shift(&ap, d, p), p)).collect();
                ls.push(x);
                rows.push(row);
            }
            x += 1;
            if x as usize > bl + e + 2 {
                return None;
            }
        }
        let ds: Vec<u64> = (0..=bd as u64).collect();
        let by_lambda: Vec<Vec<u64>> = (0..=bd).map(|j| fp_interpolate(&ls, &rows.iter().map(|r| r[j]).collect::<Vec<_>>(), p)).collect();
        let mut out = Vec::with_capacity((bl + 1) * (bd + 1));
        for i in 0..=bl {
            out.extend(fp_interpolate(&ds, &by_lambda.iter().map(|c| c[i]).collect::<Vec<_>>(), p));
        }
        Some(out)
    })?;
    let terms = values.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (vec![(k / (bd + 1)) as u32, (k % (bd + 1)) as u32], c));
    Some(Polynomial::from_terms(out_vars, terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::rat;

    #[test]
    fn difference_resultant_matches_elimination() {
        let v = ["l", "g"];
        let a = crate::poly::parse_polynomial("g^3 - l*g + 2/3*l^2 - 1", &v).unwrap();
        let vars = ["l", "g", "d"];
        let a3 = a.with_vars(&vars).unwrap();
        let b3 = a3.compose(&[a3.var_like(0), &a3.var_like(1) + &a3.var_like(2), a3.var_like(2)]);
        let exact = crate::poly::resultant(&a3, &b3, "g").unwrap().with_vars(&["l", "d"]).unwrap();
        let fast = difference_resultant(&a, &["l", "d"]).unwrap();
        assert_eq!(fast.normalized(), exact.normalized());
    }

    #[test]
    fn primes_descend_below_the_bound() {
        assert!(prime(0) < 1 << 62 && is_prime(prime(0)));
        assert!(prime(1) < prime(0) && is_prime(prime(5)));
        assert!(!is_prime(561) && is_prime(1_000_000_007));
    }

    #[test]
    fn reconstructs_fractions() {
        let coeffs = [rat(-3, 7), rat(22, 9), rat(0, 1), rat(123456789, 1000)];
        let got = lift(|p| coeffs.iter().map(|c| rational_mod(c, p)).collect()).unwrap();
        assert_eq!(got, coeffs.to_vec());
    }

    #[test]
    fn inverse_and_char_poly_match_exact_arithmetic() {
        let m = UPoly::from_ints(&[-2, 0, 0, 1]);
        let a = UPoly::from_coeffs(vec![rat(1, 3), rat(-2, 5), rat(7, 1)]);
        let s = inverse_mod(&a, &m).unwrap();
        assert_eq!((&a * &s).rem(&m), UPoly::one());
        // t^2 in Q[t]/(t^3 - 2) has characteristic polynomial z^3 - 4
        let t2 = UPoly::from_ints(&[0, 0, 1]);
        assert_eq!(char_poly_mod(&m, &t2).unwrap(), UPoly::from_ints(&[-4, 0, 0, 1]));
        assert!(inverse_mod(&UPoly::from_ints(&[-1, 1]), &UPoly::from_ints(&[-1, 0, 1])).is_none());
    }

    #[test]
    fn coprimality_certificate() {
        use crate::poly::parse::parse_polynomial;
        let v = ["x", "y"];
        let a = parse_polynomial("x^2*y + 3*y - 1", &v).unwrap();
        let b = parse_polynomial("x*y^2 - x + 5", &v).unwrap();
        assert!(certainly_coprime(&a, &b));
        let c = parse_polynomial("x - y", &v).unwrap();
        assert!(!certainly_coprime(&(&a * &c), &(&b * &c)));
        let d = parse_polynomial("x + 1", &v).unwrap();
        assert!(!certainly_coprime(&(&a * &d), &(&b * &d)));
    }
}
