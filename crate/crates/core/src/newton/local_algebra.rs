//! Dimension of local algebras `O_0 / I` for ideals generated by bivariate
//! polynomials with coefficients in a residue ring `Q[t]/(m)`.
//!
//! `dim O/(I + m^N)` is computed by linear algebra on truncated multiples of the
//! generators; it is nondecreasing in `N`, and once two consecutive values agree
//! Nakayama's lemma gives `m^N ⊂ I`, so the value is final.

use std::collections::BTreeMap;

use crate::poly::residue::{Residue, Split};
use crate::poly::{Polynomial, Rational, UPoly};

/// Bivariate polynomial with coefficients in a residue ring, keyed by exponents.
pub type RPoly = BTreeMap<(u32, u32), UPoly>;

pub fn from_polynomial(p: &Polynomial) -> RPoly {
    p.terms().map(|(m, c)| ((m.exponent(0), m.exponent(1)), UPoly::constant(c.clone()))).collect()
}

fn add_to(ring: &Residue, p: &mut RPoly, key: (u32, u32), c: &UPoly) {
    let entry = p.entry(key).or_insert_with(UPoly::zero);
    *entry = ring.reduce(&(&*entry + c));
    if entry.is_zero() {
        p.remove(&key);
    }
}

pub fn scale(ring: &Residue, p: &RPoly, c: &UPoly) -> RPoly {
    let mut out = RPoly::new();
    for (k, v) in p {
        add_to(ring, &mut out, *k, &ring.mul(v, c));
    }
    out
}

pub fn sub(ring: &Residue, a: &RPoly, b: &RPoly) -> RPoly {
    let mut out = a.clone();
    for (k, v) in b {
        add_to(ring, &mut out, *k, &-v);
    }
    out
}

fn binomial(n: u32, k: u32) -> Rational {
    let mut acc = Rational::from_integer(1.into());
    for i in 0..k {
        acc *= Rational::new((n - i).into(), (i + 1).into());
    }
    acc
}

/// `p(X + x0, Y + y0)`.
pub fn translate(ring: &Residue, p: &RPoly, x0: &UPoly, y0: &UPoly) -> RPoly {
    let dx = p.keys().map(|k| k.0).max().unwrap_or(0);
    let dy = p.keys().map(|k| k.1).max().unwrap_or(0);
    let xp: Vec<UPoly> = (0..=dx).map(|e| ring.pow(x0, e)).collect();
    let yp: Vec<UPoly> = (0..=dy).map(|e| ring.pow(y0, e)).collect();
    let mut out = RPoly::new();
    for (&(i, j), c) in p {
        for k in 0..=i {
            let cx = ring.mul(c, &xp[(i - k) as usize]).scale(&binomial(i, k));
            for l in 0..=j {
                let term = ring.mul(&cx, &yp[(j - l) as usize]).scale(&binomial(j, l));
                add_to(ring, &mut out, (k, l), &term);
            }
        }
    }
    out
}

pub fn derivative(ring: &Residue, p: &RPoly, idx: usize) -> RPoly {
    let mut out = RPoly::new();
    for (&(i, j), c) in p {
        let e = if idx == 0 { i } else { j };
        if e == 0 {
            continue;
        }
        let key = if idx == 0 { (i - 1, j) } else { (i, j - 1) };
        add_to(ring, &mut out, key, &c.scale(&Rational::from_integer(e.into())));
    }
    out
}

fn monomials_below(n: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for d in 0..n {
        for i in (0..=d).rev() {
            out.push((i, d - i));
        }
    }
    out
}

/// Rank of the truncated multiples of `gens` modulo `m^n`, over the ring.
fn truncated_rank(ring: &Residue, gens: &[RPoly], n: u32) -> Result<usize, Split> {
    let monos = monomials_below(n);
    let index: BTreeMap<(u32, u32), usize> = monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let cols = monos.len();
    let mut pivots: Vec<Option<Vec<UPoly>>> = vec![None; cols];
    let mut rank = 0;
    for g in gens {
        for &(a, b) in &monos {
            let mut row = vec![UPoly::zero(); cols];
            let mut any = false;
            for (&(i, j), c) in g {
                if let Some(&col) = index.get(&(i + a, j + b)) {
                    row[col] = c.clone();
                    any = true;
                }
            }
            if !any {
                continue;
            }
            for col in 0..cols {
                if row[col].is_zero() {
                    continue;
                }
                match &pivots[col] {
                    Some(prow) => {
                        let f = row[col].clone();
                        for k in col..cols {
                            if !prow[k].is_zero() {
                                row[k] = ring.reduce(&(&row[k] - &ring.mul(&f, &prow[k])));
                            }
                        }
                    }
                    None => {
                        let inv = ring.inv(&row[col])?;
                        for v in row.iter_mut().skip(col) {
                            if !v.is_zero() {
                                *v = ring.mul(v, &inv);
                            }
                        }
                        pivots[col] = Some(row);
                        rank += 1;
                        break;
                    }
                }
            }
        }
    }
    Ok(rank)
}

/// Dimension of the local algebra at the origin, or `None` once it exceeds `cap`
/// (the point is then treated as non-isolated).
pub fn local_dimension(ring: &Residue, gens: &[RPoly], cap: usize) -> Result<Option<usize>, Split> {
    for g in gens {
        if let Some(c) = g.get(&(0, 0)) {
            if !ring.is_zero(c) {
                ring.inv(c)?;
                return Ok(Some(0));
            }
        }
    }
    let mut prev: Option<usize> = None;
    let mut n = 1u32;
    loop {
        let total = (n * (n + 1) / 2) as usize;
        let d = total - truncated_rank(ring, gens, n)?;
        if prev == Some(d) {
            return Ok(Some(d));
        }
        if d > cap {
            return Ok(None);
        }
        prev = Some(d);
        n += 1;
    }
}

/// Milnor number at `(x0, y0)` of `p` with coefficients in the ring, `None` if above `cap`.
pub fn milnor_over(ring: &Residue, p: &RPoly, x0: &UPoly, y0: &UPoly, cap: usize) -> Result<Option<usize>, Split> {
    let local = translate(ring, p, x0, y0);
    let gx = derivative(ring, &local, 0);
    let gy = derivative(ring, &local, 1);
    if gx.is_empty() || gy.is_empty() {
        let other = if gx.is_empty() { &gy } else { &gx };
        if let Some(c) = other.get(&(0, 0)) {
            ring.inv(c)?;
            return Ok(Some(0));
        }
        return Ok(None);
    }
    local_dimension(ring, &[gx, gy], cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn q_ring() -> Residue {
        Residue::new(&UPoly::x())
    }

    fn rp(s: &str) -> RPoly {
        from_polynomial(&parse_polynomial(s, &["x", "y"]).unwrap())
    }

    #[test]
    fn rational_local_algebras() {
        let r = q_ring();
        let zero = UPoly::zero();
        assert_eq!(milnor_over(&r, &rp("x^2 + y^2"), &zero, &zero, 100).unwrap(), Some(1));
        assert_eq!(milnor_over(&r, &rp("x^3 - y^2"), &zero, &zero, 100).unwrap(), Some(2));
        assert_eq!(milnor_over(&r, &rp("x^5 + y^4"), &zero, &zero, 100).unwrap(), Some(12));
        // shifted point: (x-1)^3 + (y+2)^2 at (1, -2)
        let one = UPoly::constant(Rational::from_integer(1.into()));
        let m2 = UPoly::constant(Rational::from_integer((-2).into()));
        assert_eq!(milnor_over(&r, &rp("(x-1)^3 + (y+2)^2"), &one, &m2, 100).unwrap(), Some(2));
        // non-isolated: x^2 has a line of critical points
        assert_eq!(milnor_over(&r, &rp("x^2"), &zero, &zero, 20).unwrap(), None);
        assert_eq!(milnor_over(&r, &rp("x^2*y^2"), &zero, &zero, 20).unwrap(), None);
    }

    #[test]
    fn algebraic_points() {
        // p = (x^2 - 2)^2 + y^2 has A1 points at x = ±sqrt 2, y = 0
        let ring = Residue::new(&UPoly::from_ints(&[-2, 0, 1]));
        let mu = milnor_over(&ring, &rp("(x^2 - 2)^2 + y^2"), &UPoly::x(), &UPoly::zero(), 50).unwrap();
        assert_eq!(mu, Some(1));
    }
}
