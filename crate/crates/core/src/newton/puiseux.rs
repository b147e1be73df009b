//! Newton polygons of `p(λ, g)` at `λ = ∞` or at a finite `λ₀`, in the local
//! parameter `u` (`λ = 1/u`, resp. `λ = λ₀ + u`), and the resulting branch
//! data: each lower-hull edge of slope `s` (in `Δu-exponent / Δg-exponent`)
//! carries branches `g ~ c·u^(-s)`, `c` running over the nonzero roots of the
//! edge polynomial.

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::polygon::{lower_hull, lowest_per_column};
use super::{Edge, NewtonError, NewtonPolygon};
use crate::poly::rational::serde_q;
use crate::poly::roots::rational_roots;
use crate::poly::{Polynomial, Rational, UPoly};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum Center {
    Infinity,
    Finite(#[serde(with = "serde_q")] Rational),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PuiseuxPolygon {
    pub center: Center,
    /// Vertices are `[u-exponent, g-exponent]`, from the highest power of `g` down.
    pub polygon: NewtonPolygon,
    /// Branches with `g ≡ 0` (the power of `g` dividing the polynomial).
    pub zero_branches: u32,
}

/// Branches sharing a leading exponent and a factor of the edge polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchGroup {
    /// `g ~ c·u^exponent`; `None` for the identically zero branch.
    #[serde(serialize_with = "ser_opt_q")]
    pub exponent: Option<Rational>,
    #[serde(with = "serde_q")]
    pub pole_order: Rational,
    /// Number of branches in the group, counted with multiplicity.
    pub multiplicity: u32,
    /// Multiplicity of each leading coefficient as a root of the edge polynomial.
    pub root_multiplicity: u32,
    /// Monic squarefree polynomial whose roots are the leading coefficients.
    #[serde(serialize_with = "crate::poly::ser::in_c")]
    pub leading_poly: UPoly,
    #[serde(serialize_with = "ser_opt_q")]
    pub leading_value: Option<Rational>,
}

fn ser_opt_q<S: serde::Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_some(&crate::poly::rational::format_rational(q)),
        None => s.serialize_none(),
    }
}

/// `p` rewritten in the local parameter `u` at the center, variables `(u, g)` kept as `(λ, g)`.
fn localize(p: &Polynomial, center: &Center) -> Polynomial {
    match center {
        Center::Infinity => {
            let d = p.degree_in(0);
            let terms = p.terms().map(|(m, c)| (vec![d - m.exponent(0), m.exponent(1)], c.clone()));
            Polynomial::from_terms(p.vars(), terms)
        }
        Center::Finite(l0) => {
            let u = &p.var_like(0) + &p.constant_like(l0.clone());
            p.compose(&[u, p.var_like(1)])
        }
    }
}

/// Newton polygon of `p(λ, g)` (variable 0 is `λ`, variable 1 is `g`) at the center.
pub fn polygon_at_point(p: &Polynomial, center: &Center) -> Result<PuiseuxPolygon, NewtonError> {
    if p.nvars() != 2 {
        return Err(NewtonError::WrongArity);
    }
    if p.is_zero() {
        return Err(NewtonError::ZeroPolynomial);
    }
    let local = localize(p, center);
    // points as [g-exponent, u-exponent] for the hull computation
    let mut pts: Vec<[u32; 2]> = local.terms().map(|(m, _)| [m.exponent(1), m.exponent(0)]).collect();
    pts.sort();
    let columns = lowest_per_column(&pts);
    let zero_branches = columns[0][0];
    let hull = lower_hull(&columns);
    let mut edges = Vec::new();
    for w in hull.windows(2).rev() {
        let (lo, hi) = (w[0], w[1]);
        let dj = (hi[0] - lo[0]) as i64;
        let di = hi[1] as i64 - lo[1] as i64;
        let slope = Rational::new(di.into(), dj.into());
        let coeffs = (0..=dj)
            .map(|k| {
                let num = di * k;
                if num % dj != 0 {
                    return Rational::zero();
                }
                let i = lo[1] as i64 + num / dj;
                local.coeff(&[i as u32, lo[0] + k as u32])
            })
            .collect();
        edges.push(Edge { from: [hi[1], hi[0]], to: [lo[1], lo[0]], slope, edge_poly: UPoly::from_coeffs(coeffs) });
    }
    let mut vertices: Vec<[u32; 2]> = hull.iter().rev().map(|q| [q[1], q[0]]).collect();
    vertices.dedup();
    let support = {
        let mut s: Vec<[u32; 2]> = local.terms().map(|(m, _)| [m.exponent(0), m.exponent(1)]).collect();
        s.sort();
        s
    };
    Ok(PuiseuxPolygon { center: center.clone(), polygon: NewtonPolygon { support, vertices, edges }, zero_branches })
}

/// Branch groups of `p(λ, g) = 0` at the center, ordered by decreasing pole order.
pub fn branches_at(p: &Polynomial, center: &Center) -> Result<Vec<BranchGroup>, NewtonError> {
    if p.nvars() == 2 && !p.is_zero() && p.degree_in(1) == 0 {
        return Err(NewtonError::DegenerateInG);
    }
    let pp = polygon_at_point(p, center)?;
    let mut out = Vec::new();
    for e in &pp.polygon.edges {
        let exponent = -&e.slope;
        let pole_order = if e.slope.is_positive() { e.slope.clone() } else { Rational::zero() };
        for (m, factor) in e.edge_poly.squarefree_decomposition() {
            if factor.deg() == 0 {
                continue;
            }
            let mut rest = factor.monic();
            for r in rational_roots(&rest) {
                rest = rest.div_exact(&UPoly::linear_root(&r)).expect("root divides");
                out.push(BranchGroup {
                    exponent: Some(exponent.clone()),
                    pole_order: pole_order.clone(),
                    multiplicity: m,
                    root_multiplicity: m,
                    leading_poly: UPoly::linear_root(&r),
                    leading_value: Some(r),
                });
            }
            if rest.deg() > 0 {
                out.push(BranchGroup {
                    exponent: Some(exponent.clone()),
                    pole_order: pole_order.clone(),
                    multiplicity: m * rest.deg() as u32,
                    root_multiplicity: m,
                    leading_poly: rest.monic(),
                    leading_value: None,
                });
            }
        }
    }
    if pp.zero_branches > 0 {
        out.push(BranchGroup {
            exponent: None,
            pole_order: Rational::zero(),
            multiplicity: pp.zero_branches,
            root_multiplicity: pp.zero_branches,
            leading_poly: UPoly::x(),
            leading_value: Some(Rational::zero()),
        });
    }
    out.sort_by(|a, b| b.pole_order.cmp(&a.pole_order));
    Ok(out)
}

/// Pole orders of the branches of `p(λ, g) = 0` at `λ = ∞`, with multiplicities.
pub fn pole_orders(p: &Polynomial) -> Result<Vec<(Rational, u32)>, NewtonError> {
    let groups = branches_at(p, &Center::Infinity)?;
    let mut out: Vec<(Rational, u32)> = Vec::new();
    for g in groups {
        match out.iter_mut().find(|(o, _)| *o == g.pole_order) {
            Some(slot) => slot.1 += g.multiplicity,
            None => out.push((g.pole_order, g.multiplicity)),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::poly::rational::{int, rat};

    fn lg(s: &str) -> Polynomial {
        parse_polynomial(s, &["l", "g"]).unwrap()
    }

    #[test]
    fn orders_at_infinity() {
        assert_eq!(pole_orders(&lg("27*l*(g - 1) + l^3")).unwrap(), vec![(int(2), 1)]);
        assert_eq!(pole_orders(&lg("l*g + l")).unwrap(), vec![(int(0), 1)]);
        assert_eq!(pole_orders(&lg("g - l")).unwrap(), vec![(int(1), 1)]);
        assert_eq!(pole_orders(&lg("(g - l)*(g - l^2)")).unwrap(), vec![(int(2), 1), (int(1), 1)]);
        assert_eq!(pole_orders(&lg("g^2 - l^3")).unwrap(), vec![(rat(3, 2), 2)]);
        assert_eq!(pole_orders(&lg("l + 1")), Err(NewtonError::DegenerateInG));
    }

    #[test]
    fn leading_data() {
        let b = branches_at(&lg("27*l*(g - 1) + l^3"), &Center::Infinity).unwrap();
        assert_eq!(b[0].leading_value, Some(rat(-1, 27)));
        assert_eq!(b[0].exponent, Some(int(-2)));
        // product with the constant branch g = 1
        let b = branches_at(&lg("(27*g - 27 + l^2)*(g - 1)"), &Center::Infinity).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!((b[0].pole_order.clone(), b[0].leading_value.clone()), (int(2), Some(rat(-1, 27))));
        assert_eq!((b[1].pole_order.clone(), b[1].leading_value.clone()), (int(0), Some(int(1))));
        // conjugate leading coefficients stay grouped
        let b = branches_at(&lg("g^2 + l^2"), &Center::Infinity).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].multiplicity, 2);
        assert_eq!(b[0].leading_poly, UPoly::from_ints(&[1, 0, 1]));
    }

    #[test]
    fn finite_center() {
        // g = -1/λ at λ = 0
        let b = branches_at(&lg("l*g + 1"), &Center::Finite(int(0))).unwrap();
        assert_eq!(b[0].pole_order, int(1));
        // shifted center
        let b = branches_at(&lg("(l - 2)*g + 1"), &Center::Finite(int(2))).unwrap();
        assert_eq!(b[0].pole_order, int(1));
        let b = branches_at(&lg("g*(g - l)"), &Center::Finite(int(0))).unwrap();
        assert_eq!(b.iter().map(|x| x.multiplicity).sum::<u32>(), 2);
    }
}
