use num_integer::Integer as _;

use super::{Check, Edge, MilnorMethod, MilnorReport, Mu, NewtonError, NewtonPolygon};
use crate::poly::{Polynomial, Rational, UPoly};

fn support_points(p: &Polynomial) -> Vec<[u32; 2]> {
    let mut pts: Vec<[u32; 2]> = p.terms().map(|(m, _)| [m.exponent(0), m.exponent(1)]).collect();
    pts.sort();
    pts
}

fn cross(o: [u32; 2], a: [u32; 2], b: [u32; 2]) -> i64 {
    let (ox, oy) = (o[0] as i64, o[1] as i64);
    (a[0] as i64 - ox) * (b[1] as i64 - oy) - (a[1] as i64 - oy) * (b[0] as i64 - ox)
}

/// Lower convex hull of points sorted by first coordinate (one point per abscissa, the lowest).
pub(crate) fn lower_hull(points: &[[u32; 2]]) -> Vec<[u32; 2]> {
    let mut hull: Vec<[u32; 2]> = Vec::new();
    for &p in points {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

/// Lowest point per abscissa, sorted by abscissa.
pub(crate) fn lowest_per_column(points: &[[u32; 2]]) -> Vec<[u32; 2]> {
    let mut out: Vec<[u32; 2]> = Vec::new();
    for &p in points {
        match out.last_mut() {
            Some(last) if last[0] == p[0] => last[1] = last[1].min(p[1]),
            _ => out.push(p),
        }
    }
    out
}

/// Coefficients of `p` along the lattice segment `from → to`, one per lattice point.
fn edge_polynomial(p: &Polynomial, from: [u32; 2], to: [u32; 2]) -> UPoly {
    let da = to[0] as i64 - from[0] as i64;
    let db = to[1] as i64 - from[1] as i64;
    let g = da.gcd(&db);
    let (sa, sb) = (da / g, db / g);
    let coeffs = (0..=g).map(|k| p.coeff(&[(from[0] as i64 + k * sa) as u32, (from[1] as i64 + k * sb) as u32])).collect();
    UPoly::from_coeffs(coeffs)
}

fn check_bivariate(p: &Polynomial) -> Result<(), NewtonError> {
    if p.nvars() != 2 {
        return Err(NewtonError::WrongArity);
    }
    if p.is_zero() {
        return Err(NewtonError::ZeroPolynomial);
    }
    Ok(())
}

/// Newton boundary at the origin, vertices listed from the one nearest the x-axis.
pub fn local_polygon(p: &Polynomial) -> Result<NewtonPolygon, NewtonError> {
    check_bivariate(p)?;
    if !p.constant_term().is_zero_rational() {
        return Err(NewtonError::NonVanishingGerm);
    }
    let support = support_points(p);
    let columns = lowest_per_column(&support);
    let a = columns[0];
    let b = *columns.iter().min_by_key(|q| (q[1], q[0])).expect("nonempty");
    let chain: Vec<[u32; 2]> = columns.into_iter().filter(|q| q[0] <= b[0]).collect();
    let mut vertices = lower_hull(&chain);
    debug_assert_eq!(vertices.first(), Some(&a));
    vertices.reverse();
    let edges = vertices
        .windows(2)
        .map(|w| Edge {
            from: w[0],
            to: w[1],
            slope: Rational::new((w[1][1] as i64 - w[0][1] as i64).into(), (w[1][0] as i64 - w[0][0] as i64).into()),
            edge_poly: edge_polynomial(p, w[0], w[1]),
        })
        .collect();
    Ok(NewtonPolygon { support, vertices, edges })
}

trait IsZeroRational {
    fn is_zero_rational(&self) -> bool;
}

impl IsZeroRational for Rational {
    fn is_zero_rational(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

pub fn is_convenient(np: &NewtonPolygon) -> bool {
    let first = np.vertices.first();
    let last = np.vertices.last();
    matches!((first, last), (Some(f), Some(l)) if f[1] == 0 && l[0] == 0)
}

/// Every compact edge polynomial is squarefree (its roots are all nonzero, the endpoints being vertices).
pub fn nondegeneracy_check(p: &Polynomial) -> Result<bool, NewtonError> {
    let np = local_polygon(p)?;
    Ok(edges_nondegenerate(&np))
}

fn edges_nondegenerate(np: &NewtonPolygon) -> bool {
    np.edges.iter().all(|e| e.edge_poly.gcd(&e.edge_poly.derivative()).deg() == 0)
}

/// Twice the area between the Newton boundary and the axes.
fn twice_area(np: &NewtonPolygon) -> i64 {
    let mut ring = vec![[0u32, 0u32]];
    ring.extend(np.vertices.iter().copied());
    let mut s = 0i64;
    for i in 0..ring.len() {
        let p = ring[i];
        let q = ring[(i + 1) % ring.len()];
        s += p[0] as i64 * q[1] as i64 - q[0] as i64 * p[1] as i64;
    }
    s
}

/// Milnor number `2S - a - b + 1` of a convenient Newton-nondegenerate germ at the origin.
pub fn kouchnirenko_mu(p: &Polynomial) -> Result<MilnorReport, NewtonError> {
    let np = local_polygon(p)?;
    if !is_convenient(&np) {
        return Err(NewtonError::NotConvenient);
    }
    if !edges_nondegenerate(&np) {
        return Err(NewtonError::Degenerate);
    }
    let a = np.vertices.first().expect("vertex")[0] as i64;
    let b = np.vertices.last().expect("vertex")[1] as i64;
    let mu = twice_area(&np) - a - b + 1;
    debug_assert!(mu >= 0);
    Ok(MilnorReport { mu: Mu::Finite(mu as u64), method: MilnorMethod::Kouchnirenko, nondegenerate: Check::Passed, convenient: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn pp(s: &str) -> Polynomial {
        parse_polynomial(s, &["x", "y"]).unwrap()
    }

    #[test]
    fn polygons() {
        let np = local_polygon(&pp("x^2 + y^3")).unwrap();
        assert_eq!(np.vertices, vec![[2, 0], [0, 3]]);
        assert_eq!(np.edges[0].slope, Rational::new((-3).into(), 2.into()));
        let np = local_polygon(&pp("x^2 + x*y + y^3")).unwrap();
        assert_eq!(np.vertices, vec![[2, 0], [1, 1], [0, 3]]);
        assert!(np.edges[0].slope > np.edges[1].slope);
        let np = local_polygon(&pp("x")).unwrap();
        assert_eq!(np.vertices, vec![[1, 0]]);
        assert!(np.edges.is_empty());
        assert!(!is_convenient(&local_polygon(&pp("x*y")).unwrap()));
        assert_eq!(local_polygon(&pp("1 + x")), Err(NewtonError::NonVanishingGerm));
        // interior and dominated points do not become vertices
        let np = local_polygon(&pp("x^4 + x^2*y^2 + y^4 + x^3*y^3 + x^5")).unwrap();
        assert_eq!(np.vertices, vec![[4, 0], [0, 4]]);
    }

    #[test]
    fn kouchnirenko_examples() {
        assert_eq!(kouchnirenko_mu(&pp("x^2 + x*y + y^3")).unwrap().mu, Mu::Finite(1));
        assert_eq!(kouchnirenko_mu(&pp("x^2 + y^3")).unwrap().mu, Mu::Finite(2));
        assert_eq!(kouchnirenko_mu(&pp("x^2 + y^2")).unwrap().mu, Mu::Finite(1));
        assert_eq!(kouchnirenko_mu(&pp("(x + y)^2 + y^3")), Err(NewtonError::Degenerate));
        assert_eq!(kouchnirenko_mu(&pp("x*y + x^3")), Err(NewtonError::NotConvenient));
        assert!(!nondegeneracy_check(&pp("(x + y)^2 + y^3")).unwrap());
        assert!(nondegeneracy_check(&pp("x^2 + y^3")).unwrap());
    }
}
