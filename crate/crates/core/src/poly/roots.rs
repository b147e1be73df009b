//! Exact root isolation and algebraic numbers.
//!
//! Real roots are isolated with Sturm sequences. Non-real roots are isolated in
//! rational rectangles by counting the winding number of `p` around the box
//! boundary: along each edge `p = U + iV` with `U, V ∈ Q[s]`, and the winding is
//! recovered from the octant of `(U, V)` sampled between consecutive real roots
//! of `U·V`. Well-separated non-real roots are first tried the cheap way: boxes
//! around floating-point approximations, certified by Rouché's theorem.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, Rational};
use super::univariate::UPoly;

/// Negated-remainder Sturm sequence of `p` (assumed squarefree).
pub fn sturm_sequence(p: &UPoly) -> Vec<UPoly> {
    let mut seq = vec![p.primitive(), p.derivative().primitive()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        if seq[n - 1].is_constant() {
            break;
        }
        let r = seq[n - 2].rem(&seq[n - 1]);
        // positive rescaling keeps sign changes intact
        let r = -&r.primitive_positive();
        seq.push(r);
    }
    seq
}

trait PositivePrimitive {
    fn primitive_positive(&self) -> UPoly;
}

impl PositivePrimitive for UPoly {
    fn primitive_positive(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let prim = self.primitive();
        // `primitive` may flip the sign; undo that so only positive scaling happens
        let k = self.lc() / prim.lc();
        if k.is_negative() {
            -&prim
        } else {
            prim
        }
    }
}

fn sign_changes(seq: &[UPoly], x: &Rational) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for q in seq {
        let v = q.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of distinct real roots in the half-open interval `(a, b]`.
pub fn count_in(seq: &[UPoly], a: &Rational, b: &Rational) -> usize {
    sign_changes(seq, a).saturating_sub(sign_changes(seq, b))
}

/// An isolated real root: either exact, or the unique root in an open interval
/// whose endpoints are not roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealRoot {
    Exact(Rational),
    Open(Rational, Rational),
}

impl RealRoot {
    pub fn lower(&self) -> &Rational {
        match self {
            RealRoot::Exact(r) => r,
            RealRoot::Open(a, _) => a,
        }
    }

    pub fn upper(&self) -> &Rational {
        match self {
            RealRoot::Exact(r) => r,
            RealRoot::Open(_, b) => b,
        }
    }
}

/// Upper bound on the modulus of every complex root (Cauchy), as a power of two.
pub fn root_bound(p: &UPoly) -> Rational {
    let lc = p.lc().abs();
    let mut m = Rational::zero();
    for c in &p.coeffs()[..p.deg()] {
        let q = c.abs() / &lc;
        if q > m {
            m = q;
        }
    }
    let target = m + Rational::one();
    let mut b = Rational::one();
    while b <= target {
        b *= Rational::from_integer(2.into());
    }
    b
}

/// Distinct real roots of `p`, sorted increasingly.
pub fn real_roots(p: &UPoly) -> Vec<RealRoot> {
    if p.deg() == 0 {
        return Vec::new();
    }
    let b = root_bound(p);
    real_roots_in(p, &-&b, &b)
}

/// Distinct real roots of `p` in the open interval `(lo, hi)`, sorted.
pub fn real_roots_in(p: &UPoly, lo: &Rational, hi: &Rational) -> Vec<RealRoot> {
    if p.is_zero() || p.deg() == 0 || lo >= hi {
        return Vec::new();
    }
    let sf = p.squarefree_part();
    let seq = sturm_sequence(&sf);
    let mut out = Vec::new();
    // work on (a, b) with open ends; a root at `hi` itself is excluded
    let mut stack = vec![(lo.clone(), hi.clone())];
    while let Some((a, b)) = stack.pop() {
        let mut n = count_in(&seq, &a, &b);
        if sf.eval(&b).is_zero() {
            n -= 1;
        }
        if n == 0 {
            continue;
        }
        if n == 1 && !sf.eval(&a).is_zero() && !sf.eval(&b).is_zero() {
            out.push(RealRoot::Open(a, b));
            continue;
        }
        let mid = (&a + &b) / Rational::from_integer(2.into());
        if sf.eval(&mid).is_zero() {
            out.push(RealRoot::Exact(mid.clone()));
        }
        stack.push((a, mid.clone()));
        stack.push((mid, b));
    }
    // endpoints that are roots were excluded; tighten open intervals whose endpoints are roots
    let mut fixed = Vec::with_capacity(out.len());
    for r in out {
        match r {
            RealRoot::Open(a, b) if sf.eval(&a).is_zero() || sf.eval(&b).is_zero() => {
                fixed.push(shrink_open(&sf, &seq, a, b));
            }
            other => fixed.push(other),
        }
    }
    fixed.sort_by(|x, y| x.lower().cmp(y.lower()));
    fixed
}

/// Shrinks an interval containing exactly one interior root until its endpoints are not roots.
fn shrink_open(sf: &UPoly, seq: &[UPoly], mut a: Rational, mut b: Rational) -> RealRoot {
    let two = Rational::from_integer(2.into());
    loop {
        let mid = (&a + &b) / &two;
        if sf.eval(&mid).is_zero() {
            return RealRoot::Exact(mid);
        }
        let left = count_in(seq, &a, &mid);
        if left == 1 {
            b = mid;
        } else {
            a = mid;
        }
        if !sf.eval(&a).is_zero() && !sf.eval(&b).is_zero() {
            return RealRoot::Open(a, b);
        }
    }
}

/// Halves an open isolating interval for the squarefree `p`.
pub fn bisect(p: &UPoly, r: &RealRoot) -> RealRoot {
    match r {
        RealRoot::Exact(_) => r.clone(),
        RealRoot::Open(a, b) => {
            let mid = (a + b) / Rational::from_integer(2.into());
            let vm = p.eval(&mid);
            if vm.is_zero() {
                return RealRoot::Exact(mid);
            }
            let va = p.eval(a);
            if va.is_positive() != vm.is_positive() {
                RealRoot::Open(a.clone(), mid)
            } else {
                RealRoot::Open(mid, b.clone())
            }
        }
    }
}

/// Distinct rational roots of `p`, sorted.
pub fn rational_roots(p: &UPoly) -> Vec<Rational> {
    if p.is_zero() || p.deg() == 0 {
        return Vec::new();
    }
    let sf = p.squarefree_part();
    let ints = sf.primitive_integer();
    let lc: BigInt = ints.last().expect("nonzero").abs();
    let lc_q = Rational::from_integer(lc.clone());
    let mut out = Vec::new();
    let mut roots = Vec::new();
    // zero is handled directly so the remaining roots are bounded away from it
    let v = sf.valuation();
    if v > 0 {
        out.push(Rational::zero());
    }
    let reduced = if v > 0 { sf.div_exact(&UPoly::monomial(Rational::one(), v)).expect("divides") } else { sf.clone() };
    if reduced.deg() > 0 {
        roots.extend(real_roots(&reduced));
    }
    for mut r in roots {
        // a rational root p/q has q | lc, so lc·r is an integer
        loop {
            match &r {
                RealRoot::Exact(x) => {
                    out.push(x.clone());
                    break;
                }
                RealRoot::Open(a, b) => {
                    if (b - a) * &lc_q < Rational::one() {
                        let lo = (a * &lc_q).ceil().to_integer();
                        let hi = (b * &lc_q).floor().to_integer();
                        let mut k = lo;
                        while k <= hi {
                            let cand = Rational::new(k.clone(), lc.clone());
                            if reduced.eval(&cand).is_zero() {
                                out.push(cand);
                            }
                            k += 1;
                        }
                        break;
                    }
                    r = bisect(&reduced, &r);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Complex rational point used for isolating boxes.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Gauss {
    re: UPoly,
    im: UPoly,
}

impl Gauss {
    fn mul(&self, o: &Gauss) -> Gauss {
        Gauss { re: &(&self.re * &o.re) - &(&self.im * &o.im), im: &(&self.re * &o.im) + &(&self.im * &o.re) }
    }
}

/// `p(z0 + s·d)` split into real and imaginary parts as polynomials in `s`.
fn along(p: &UPoly, z0: (&Rational, &Rational), d: (&Rational, &Rational)) -> (UPoly, UPoly) {
    let z = Gauss { re: UPoly::from_coeffs(vec![z0.0.clone(), d.0.clone()]), im: UPoly::from_coeffs(vec![z0.1.clone(), d.1.clone()]) };
    let mut acc = Gauss { re: UPoly::zero(), im: UPoly::zero() };
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(&z);
        acc.re = &acc.re + &UPoly::constant(c.clone());
    }
    (acc.re, acc.im)
}

fn sgn(q: &Rational) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

/// Direction class of `(u, v)` in units of π/4.
fn octant(u: i8, v: i8) -> i32 {
    match (u, v) {
        (1, 0) => 0,
        (1, 1) => 1,
        (0, 1) => 2,
        (-1, 1) => 3,
        (-1, 0) => 4,
        (-1, -1) => 5,
        (0, -1) => 6,
        (1, -1) => 7,
        _ => unreachable!("p vanishes on the contour"),
    }
}

/// Accumulated octant change along one edge, `s ∈ [0, 1]`.
fn edge_turn(u: &UPoly, v: &UPoly) -> i32 {
    let w = match (u.is_zero(), v.is_zero()) {
        (false, false) => u * v,
        (true, false) => v.clone(),
        (false, true) => u.clone(),
        (true, true) => unreachable!("p vanishes on the contour"),
    };
    let zero = Rational::zero();
    let one = Rational::one();
    let two = Rational::from_integer(2.into());
    let sf = if w.deg() == 0 { w.clone() } else { w.squarefree_part() };
    let mut roots = if w.deg() == 0 { Vec::new() } else { real_roots_in(&sf, &zero, &one) };
    // make consecutive items strictly separated so a non-root sample fits between them
    for i in 1..roots.len() {
        while roots[i - 1].upper() == roots[i].lower() && (matches!(roots[i - 1], RealRoot::Exact(_)) || matches!(roots[i], RealRoot::Exact(_))) {
            if matches!(roots[i], RealRoot::Open(..)) {
                roots[i] = bisect(&sf, &roots[i]);
            } else {
                roots[i - 1] = bisect(&sf, &roots[i - 1]);
            }
        }
    }
    let mut pts = vec![zero.clone()];
    if let Some(first) = roots.first() {
        pts.push((&zero + first.lower()) / &two);
        for pair in roots.windows(2) {
            pts.push((pair[0].upper() + pair[1].lower()) / &two);
        }
        pts.push((roots.last().unwrap().upper() + &one) / &two);
    }
    pts.push(one.clone());
    let mut total = 0;
    let mut prev: Option<i32> = None;
    for s in &pts {
        let o = octant(sgn(&u.eval(s)), sgn(&v.eval(s)));
        if let Some(p) = prev {
            let mut d = (o - p).rem_euclid(8);
            if d > 4 {
                d -= 8;
            }
            debug_assert!(d != 4, "ambiguous half turn");
            total += d;
        }
        prev = Some(o);
    }
    total
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct BoxQ {
    x0: Rational,
    x1: Rational,
    y0: Rational,
    y1: Rational,
}

/// Number of roots of `p` strictly inside the box, or `None` if a root lies on the boundary.
fn count_in_box(p: &UPoly, b: &BoxQ) -> Option<usize> {
    let w = &b.x1 - &b.x0;
    let h = &b.y1 - &b.y0;
    let zero = Rational::zero();
    let edges = [
        ((&b.x0, &b.y0), (w.clone(), zero.clone())),
        ((&b.x1, &b.y0), (zero.clone(), h.clone())),
        ((&b.x1, &b.y1), (-&w, zero.clone())),
        ((&b.x0, &b.y1), (zero.clone(), -&h)),
    ];
    let mut total = 0;
    for (z0, d) in edges.iter() {
        let (u, v) = along(p, *z0, (&d.0, &d.1));
        if !boundary_clear(&u, &v) {
            return None;
        }
        total += edge_turn(&u, &v);
    }
    debug_assert!(total % 8 == 0);
    Some((total / 8) as usize)
}

/// True when `U` and `V` have no common root for `s ∈ [0, 1]`.
fn boundary_clear(u: &UPoly, v: &UPoly) -> bool {
    if u.is_zero() && v.is_zero() {
        return false;
    }
    let g = if u.is_zero() {
        v.clone()
    } else if v.is_zero() {
        u.clone()
    } else {
        u.gcd(v)
    };
    if g.deg() == 0 {
        return true;
    }
    let zero = Rational::zero();
    let one = Rational::one();
    !g.eval(&zero).is_zero() && !g.eval(&one).is_zero() && real_roots_in(&g, &zero, &one).is_empty()
}

/// An algebraic number given by a squarefree defining polynomial and an isolating box.
///
/// Rational numbers are always stored with the linear polynomial `t - r` and a degenerate box.
#[derive(Clone, Debug)]
pub struct AlgebraicNumber {
    poly: UPoly,
    re: (Rational, Rational),
    im: (Rational, Rational),
}

/// Serializable view of an algebraic number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraicRecord {
    pub minpoly: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub value: Option<String>,
    pub re: [String; 2],
    pub im: [String; 2],
}

impl AlgebraicNumber {
    pub fn rational(r: Rational) -> Self {
        AlgebraicNumber { poly: UPoly::linear_root(&r).primitive_positive(), re: (r.clone(), r), im: (Rational::zero(), Rational::zero()) }
    }

    pub fn poly(&self) -> &UPoly {
        &self.poly
    }

    pub fn re_box(&self) -> &(Rational, Rational) {
        &self.re
    }

    pub fn im_box(&self) -> &(Rational, Rational) {
        &self.im
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.poly.deg() == 1 {
            Some(-self.poly.coeff(0) / self.poly.coeff(1))
        } else {
            None
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.0.is_zero() && self.im.1.is_zero()
    }

    /// Shrinks the isolating box to width and height at most `eps`.
    pub fn refine(&mut self, eps: &Rational) {
        if self.as_rational().is_some() {
            return;
        }
        if self.is_real() {
            let mut r = RealRoot::Open(self.re.0.clone(), self.re.1.clone());
            while let RealRoot::Open(a, b) = &r {
                if &(b - a) <= eps {
                    break;
                }
                r = bisect(&self.poly, &r);
            }
            match r {
                RealRoot::Exact(x) => *self = AlgebraicNumber::rational(x),
                RealRoot::Open(a, b) => self.re = (a, b),
            }
            return;
        }
        let mut b = BoxQ { x0: self.re.0.clone(), x1: self.re.1.clone(), y0: self.im.0.clone(), y1: self.im.1.clone() };
        while &b.x1 - &b.x0 > *eps || &b.y1 - &b.y0 > *eps {
            let horizontal = &b.x1 - &b.x0 >= &b.y1 - &b.y0;
            let mut next = None;
            for (lo, hi) in split_box(&self.poly, &b, horizontal) {
                if count_in_box(&self.poly, &lo) == Some(1) {
                    next = Some(lo);
                } else if count_in_box(&self.poly, &hi) == Some(1) {
                    next = Some(hi);
                }
                if next.is_some() {
                    break;
                }
            }
            b = next.expect("refinement keeps the root");
        }
        self.re = (b.x0, b.x1);
        self.im = (b.y0, b.y1);
    }

    /// Exact equality of two algebraic numbers.
    pub fn same_as(&self, other: &AlgebraicNumber) -> bool {
        if let (Some(a), Some(b)) = (self.as_rational(), other.as_rational()) {
            return a == b;
        }
        let g = self.poly.gcd(&other.poly);
        if g.deg() == 0 {
            return false;
        }
        // a common root r of both polys equals self iff it lies in self's box, likewise for other
        complex_roots(&g).into_iter().any(|r| r.inside_of(self) && r.inside_of(other))
    }

    /// Whether this root (of a polynomial dividing `outer.poly`) is the root isolated by `outer`.
    fn inside_of(&self, outer: &AlgebraicNumber) -> bool {
        let mut me = self.clone();
        loop {
            let inside = outer.re.0 <= me.re.0 && me.re.1 <= outer.re.1 && outer.im.0 <= me.im.0 && me.im.1 <= outer.im.1;
            let disjoint = me.re.1 < outer.re.0 || me.re.0 > outer.re.1 || me.im.1 < outer.im.0 || me.im.0 > outer.im.1;
            if inside {
                return true;
            }
            if disjoint {
                return false;
            }
            let w = std::cmp::max(&me.re.1 - &me.re.0, &me.im.1 - &me.im.0) / Rational::from_integer(2.into());
            if w.is_zero() {
                // exact rational point on the boundary of outer: compare directly
                return outer.poly.eval(&me.re.0).is_zero() && me.is_real();
            }
            me.refine(&w);
        }
    }

    pub fn to_record(&self, var: &str) -> AlgebraicRecord {
        AlgebraicRecord {
            minpoly: self.poly.display_in(var),
            value: self.as_rational().map(|r| format_rational(&r)),
            re: [format_rational(&self.re.0), format_rational(&self.re.1)],
            im: [format_rational(&self.im.0), format_rational(&self.im.1)],
        }
    }

    /// Deterministic total order: real before non-real, then by box corners.
    pub fn canonical_cmp(&self, other: &AlgebraicNumber) -> Ordering {
        other
            .is_real()
            .cmp(&self.is_real())
            .then_with(|| self.re.0.cmp(&other.re.0))
            .then_with(|| self.im.0.cmp(&other.im.0))
            .then_with(|| self.re.1.cmp(&other.re.1))
            .then_with(|| self.im.1.cmp(&other.im.1))
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{}", format_rational(&r));
        }
        if self.is_real() {
            write!(f, "root of {} in ({}, {})", self.poly.display_in("t"), format_rational(&self.re.0), format_rational(&self.re.1))
        } else {
            write!(
                f,
                "root of {} in ({}, {}) + i({}, {})",
                self.poly.display_in("t"),
                format_rational(&self.re.0),
                format_rational(&self.re.1),
                format_rational(&self.im.0),
                format_rational(&self.im.1)
            )
        }
    }
}

/// Candidate split pairs of a box, along x (`horizontal`) or y, near the midpoint.
fn split_box(p: &UPoly, b: &BoxQ, horizontal: bool) -> Vec<(BoxQ, BoxQ)> {
    let mut out = Vec::new();
    let (lo, hi) = if horizontal { (&b.x0, &b.x1) } else { (&b.y0, &b.y1) };
    let width = hi - lo;
    for k in 0..64i64 {
        // offsets 0, +1, -1, +2, ... in units of width/131
        let off = if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 };
        let m = (lo + hi) / Rational::from_integer(2.into()) + &width * Rational::new(off.into(), 131.into());
        if &m <= lo || &m >= hi {
            continue;
        }
        let line_clear = if horizontal {
            let (u, v) = along(p, (&m, &b.y0), (&Rational::zero(), &(&b.y1 - &b.y0)));
            boundary_clear(&u, &v)
        } else {
            let (u, v) = along(p, (&b.x0, &m), (&(&b.x1 - &b.x0), &Rational::zero()));
            boundary_clear(&u, &v)
        };
        if !line_clear {
            continue;
        }
        let (a, c) = if horizontal {
            (BoxQ { x1: m.clone(), ..b.clone() }, BoxQ { x0: m, ..b.clone() })
        } else {
            (BoxQ { y1: m.clone(), ..b.clone() }, BoxQ { y0: m, ..b.clone() })
        };
        out.push((a, c));
        break;
    }
    out
}

/// All distinct complex roots of `p`, real ones first, in a deterministic order.
pub fn complex_roots(p: &UPoly) -> Vec<AlgebraicNumber> {
    if p.is_zero() || p.deg() == 0 {
        return Vec::new();
    }
    let sf = p.squarefree_part().primitive_positive();
    let mut out = Vec::new();
    // rational roots first, then strip them
    let rats = rational_roots(&sf);
    let mut rest = sf.clone();
    for r in &rats {
        out.push(AlgebraicNumber::rational(r.clone()));
        rest = rest.div_exact(&UPoly::linear_root(r)).expect("root divides");
    }
    let rest = rest.primitive_positive();
    if rest.deg() == 0 {
        out.sort_by(|a, b| a.canonical_cmp(b));
        return out;
    }
    let n_real = real_roots(&rest).len();
    for r in real_roots(&rest) {
        match r {
            RealRoot::Exact(x) => out.push(AlgebraicNumber::rational(x)),
            RealRoot::Open(a, b) => out.push(AlgebraicNumber { poly: rest.clone(), re: (a, b), im: (Rational::zero(), Rational::zero()) }),
        }
    }
    let n_complex = rest.deg() - n_real;
    if n_complex > 0 {
        // conjugate pairs: isolate in the upper half plane and mirror
        let upper = match isolate_nonreal_numeric(&rest, n_real, n_complex / 2) {
            Some(boxes) => boxes,
            None => isolate_nonreal(&rest, &root_bound(&rest), n_complex / 2),
        };
        for b in upper {
            out.push(AlgebraicNumber { poly: rest.clone(), re: (b.x0.clone(), b.x1.clone()), im: (b.y0.clone(), b.y1.clone()) });
            out.push(AlgebraicNumber { poly: rest.clone(), re: (b.x0, b.x1), im: (-b.y1, -b.y0) });
        }
    }
    out.sort_by(|a, b| a.canonical_cmp(b));
    out
}

/// Floating-point approximations of all roots by Aberth iteration, `None` on overflow.
fn approximate_roots(p: &UPoly) -> Option<Vec<Complex64>> {
    let n = p.deg();
    // scale coefficients into floating-point range
    let bits = |c: &Rational| c.numer().bits() as i64 - c.denom().bits() as i64;
    let top = p.coeffs().iter().filter(|c| !c.is_zero()).map(bits).max()?;
    let scale = Rational::new(BigInt::one(), BigInt::one() << top.max(0) as usize) * Rational::from_integer(BigInt::one() << (-top).max(0) as usize);
    let c: Vec<f64> = p.coeffs().iter().map(|c| (c * &scale).to_f64().unwrap_or(f64::NAN)).collect();
    if c.iter().any(|x| !x.is_finite()) || c[n] == 0.0 {
        return None;
    }
    let eval = |z: Complex64| {
        let (mut v, mut d) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for &a in c.iter().rev() {
            d = d * z + v;
            v = v * z + a;
        }
        (v, d)
    };
    // Fujiwara's bound
    let radius = (1..=n).map(|k| (c[n - k] / c[n]).abs().powf(1.0 / k as f64)).fold(0.0f64, f64::max) * 2.0;
    let mut z: Vec<Complex64> = (0..n).map(|k| Complex64::from_polar(radius * 0.9, 0.4 + std::f64::consts::TAU * k as f64 / n as f64)).collect();
    for _ in 0..1000 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (v, d) = eval(z[k]);
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = v / d;
            let sum: Complex64 = (0..n).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if !step.is_finite() {
                return None;
            }
            z[k] -= step;
            moved = moved.max(step.norm() / z[k].norm().max(1e-300));
        }
        if moved < 1e-13 {
            break;
        }
    }
    // certification rejects poor approximations
    Some(z)
}

/// `|a_1|·ρ > Σ_{k≠1} |a_k|·ρ^k` for `p(c + t) = Σ a_k t^k`: exactly one root in `|t| < ρ`.
fn single_root_in_disc(taylor: &(UPoly, UPoly), rho: &Rational) -> bool {
    let n = taylor.0.deg().max(taylor.1.deg());
    let coeff = |v: &UPoly, k: usize| v.coeffs().get(k).cloned().unwrap_or_else(Rational::zero).abs();
    let lower = coeff(&taylor.0, 1).max(coeff(&taylor.1, 1)) * rho;
    let mut rest = Rational::zero();
    let mut power = Rational::one();
    for k in 0..=n {
        if k != 1 {
            rest += (coeff(&taylor.0, k) + coeff(&taylor.1, k)) * &power;
        }
        power *= rho;
    }
    lower > rest
}

/// Isolating boxes for the non-real roots in the upper half plane, placed around numerical
/// approximations and certified by a Rouché test on discs inside and around each box.
fn isolate_nonreal_numeric(p: &UPoly, n_real: usize, expected: usize) -> Option<Vec<BoxQ>> {
    let mut z = approximate_roots(p)?;
    z.sort_by(|a, b| a.im.abs().total_cmp(&b.im.abs()));
    let upper: Vec<Complex64> = z[n_real..].iter().copied().filter(|w| w.im > 0.0).collect();
    if upper.len() != expected {
        return None;
    }
    let n = p.deg() as f64;
    let mut out: Vec<BoxQ> = Vec::new();
    for w in &upper {
        let sep = z.iter().filter(|v| *v != w).map(|v| (v - w).norm()).fold(f64::INFINITY, f64::min);
        let cr = Rational::from_float(w.re)?;
        let ci = Rational::from_float(w.im)?;
        let taylor = along(p, (&cr, &ci), (&Rational::one(), &Rational::zero()));
        let mut h = 2f64.powi((sep.min(w.im) / (4.0 * n)).log2().floor() as i32);
        let mut found = None;
        for _ in 0..8 {
            let hq = Rational::from_float(h)?;
            let outer = &hq * Rational::new(3.into(), 2.into());
            if single_root_in_disc(&taylor, &hq) && single_root_in_disc(&taylor, &outer) {
                found = Some(hq);
                break;
            }
            h /= 4.0;
        }
        let h = found?;
        let b = BoxQ { x0: &cr - &h, x1: &cr + &h, y0: &ci - &h, y1: &ci + &h };
        if !b.y0.is_positive() || out.iter().any(|o| o.x0 < b.x1 && b.x0 < o.x1 && o.y0 < b.y1 && b.y0 < o.y1) {
            return None;
        }
        out.push(b);
    }
    Some(out)
}

/// Boxes in the open upper half plane, each isolating one root.
fn isolate_nonreal(p: &UPoly, bound: &Rational, expected: usize) -> Vec<BoxQ> {
    // find a height below every non-real root's imaginary part by shrinking until the strip
    // [−B, B] × (0, δ] is root-free: count roots in the strip box (δ, B] and compare
    let mut delta = Rational::one();
    let strip_top = bound.clone();
    let mut start: Option<BoxQ> = None;
    for _ in 0..4096 {
        let b = BoxQ { x0: -bound, x1: bound.clone(), y0: delta.clone(), y1: strip_top.clone() };
        if let Some(n) = count_in_box(p, &b) {
            if n == expected {
                start = Some(b);
                break;
            }
        }
        delta /= Rational::from_integer(3.into());
    }
    let start = start.expect("non-real roots have positive imaginary part");
    let mut done = Vec::new();
    let mut work = vec![(start, expected)];
    while let Some((b, n)) = work.pop() {
        if n == 0 {
            continue;
        }
        if n == 1 {
            done.push(b);
            continue;
        }
        let horizontal = &b.x1 - &b.x0 >= &b.y1 - &b.y0;
        let mut pushed = false;
        for (lo, hi) in split_box(p, &b, horizontal).into_iter().chain(split_box(p, &b, !horizontal)) {
            if let (Some(a), Some(c)) = (count_in_box(p, &lo), count_in_box(p, &hi)) {
                if a + c == n {
                    work.push((lo, a));
                    work.push((hi, c));
                    pushed = true;
                    break;
                }
            }
        }
        assert!(pushed, "box subdivision failed");
    }
    done
}

/// Argument of a rational complex number in units of π, when it is a rational multiple of π
/// recognisable from exact signs (axes and diagonals).
pub fn simple_argument(re: &Rational, im: &Rational) -> Option<Rational> {
    let r = |n: i64, d: i64| Rational::new(n.into(), d.into());
    match (sgn(re), sgn(im)) {
        (1, 0) => Some(r(0, 1)),
        (0, 1) => Some(r(1, 2)),
        (-1, 0) => Some(r(1, 1)),
        (0, -1) => Some(r(3, 2)),
        (a, b) if re.abs() == im.abs() => Some(match (a, b) {
            (1, 1) => r(1, 4),
            (-1, 1) => r(3, 4),
            (-1, -1) => r(5, 4),
            _ => r(7, 4),
        }),
        _ => None,
    }
}

type Interval = (Rational, Rational);

fn imul(a: &Interval, b: &Interval) -> Interval {
    let c = [&a.0 * &b.0, &a.0 * &b.1, &a.1 * &b.0, &a.1 * &b.1];
    let lo = c.iter().min().unwrap().clone();
    let hi = c.iter().max().unwrap().clone();
    (lo, hi)
}

fn iadd(a: &Interval, b: &Interval) -> Interval {
    (&a.0 + &b.0, &a.1 + &b.1)
}

fn isub(a: &Interval, b: &Interval) -> Interval {
    (&a.0 - &b.1, &a.1 - &b.0)
}

/// Enclosure of `p(z)` for `z` in the box `re × i·im`, by complex interval Horner.
pub fn eval_box(p: &UPoly, re: &Interval, im: &Interval) -> (Interval, Interval) {
    let zero = (Rational::zero(), Rational::zero());
    let mut ar = zero.clone();
    let mut ai = zero;
    for c in p.coeffs().iter().rev() {
        let nr = isub(&imul(&ar, re), &imul(&ai, im));
        let ni = iadd(&imul(&ar, im), &imul(&ai, re));
        ar = iadd(&nr, &(c.clone(), c.clone()));
        ai = ni;
    }
    (ar, ai)
}

/// Lowest-terms integer gcd helper for callers normalising angle fractions.
pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::{int, rat};

    fn p(c: &[i64]) -> UPoly {
        UPoly::from_ints(c)
    }

    #[test]
    fn sturm_counts() {
        // (x-1)(x-2)(x+3)
        let q = &(&p(&[-1, 1]) * &p(&[-2, 1])) * &p(&[3, 1]);
        let seq = sturm_sequence(&q);
        assert_eq!(count_in(&seq, &int(-10), &int(10)), 3);
        assert_eq!(count_in(&seq, &int(0), &int(2)), 2);
        assert_eq!(count_in(&seq, &int(1), &int(2)), 1);
    }

    #[test]
    fn real_isolation() {
        let q = p(&[-2, 0, 1]);
        let r = real_roots(&q);
        assert_eq!(r.len(), 2);
        assert!(r[0].upper() <= &int(0) && r[1].lower() >= &int(0));
        assert_eq!(real_roots(&p(&[1, 0, 1])), vec![]);
    }

    #[test]
    fn rational_root_finding() {
        // (3x - 2)(x + 5)(x^2 - 2) x
        let q = &(&(&p(&[-2, 3]) * &p(&[5, 1])) * &p(&[-2, 0, 1])) * &p(&[0, 1]);
        assert_eq!(rational_roots(&q), vec![int(-5), int(0), rat(2, 3)]);
        assert_eq!(rational_roots(&p(&[1, 0, 1])), vec![]);
    }

    #[test]
    fn complex_isolation() {
        // x^4 + 1: four non-real roots
        let roots = complex_roots(&p(&[1, 0, 0, 0, 1]));
        assert_eq!(roots.len(), 4);
        assert!(roots.iter().all(|r| !r.is_real()));
        // x^3 - 1: one rational, two complex
        let roots = complex_roots(&p(&[-1, 0, 0, 1]));
        assert_eq!(roots.len(), 3);
        assert_eq!(roots[0].as_rational(), Some(int(1)));
        assert!(roots[1].im_box().0 < int(0) || roots[1].im_box().0 > int(0));
        // (x^2+1)(x^2-3)(x - 1/2)
        let q = &(&p(&[1, 0, 1]) * &p(&[-3, 0, 1])) * &UPoly::linear_root(&rat(1, 2));
        let roots = complex_roots(&q);
        assert_eq!(roots.len(), 5);
        assert_eq!(roots.iter().filter(|r| r.is_real()).count(), 3);
    }

    #[test]
    fn refine_and_equality() {
        let roots = complex_roots(&p(&[1, 0, 1]));
        let mut i = roots.into_iter().find(|r| r.im_box().0 > int(0)).unwrap();
        i.refine(&rat(1, 1000));
        assert!(i.re_box().0 < int(0) && i.re_box().1 > int(0));
        assert!(i.im_box().0 < int(1) && i.im_box().1 > int(1));
        let other = complex_roots(&p(&[1, 0, 2, 0, 1]).squarefree_part());
        let same = other.iter().filter(|r| r.same_as(&i)).count();
        assert_eq!(same, 1);
    }
}
