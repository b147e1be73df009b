use super::local_algebra::{from_polynomial, milnor_over};
use super::polygon::{is_convenient, local_polygon};
use super::{Check, MilnorMethod, MilnorReport, Mu, NewtonError};
use crate::poly::residue::Residue;
use crate::poly::{Polynomial, Rational, UPoly};
use crate::system::{solve, SystemError};

/// Milnor number of `p` at a rational critical point, as the local intersection
/// multiplicity of the two partial derivatives.
pub fn jacobian_mu(p: &Polynomial, point: (&Rational, &Rational)) -> Result<MilnorReport, NewtonError> {
    if p.nvars() != 2 {
        return Err(NewtonError::WrongArity);
    }
    let mu = milnor_number(p, point)?;
    let shifted = translate(p, point);
    let convenient = local_polygon(&shifted).map(|np| is_convenient(&np)).unwrap_or(false);
    Ok(MilnorReport { mu: Mu::Finite(mu), method: MilnorMethod::JacobianOracle, nondegenerate: Check::NotChecked, convenient })
}

fn translate(p: &Polynomial, point: (&Rational, &Rational)) -> Polynomial {
    let x = &p.var_like(0) + &p.constant_like(point.0.clone());
    let y = &p.var_like(1) + &p.constant_like(point.1.clone());
    p.compose(&[x, y])
}

/// Local intersection multiplicity of `∂p/∂x, ∂p/∂y` at a rational point.
///
/// The global solver is used when the gradient system is zero-dimensional;
/// otherwise the local algebra is computed directly.
pub fn milnor_number(p: &Polynomial, point: (&Rational, &Rational)) -> Result<u64, NewtonError> {
    let px = p.derivative(0);
    let py = p.derivative(1);
    let at = [point.0.clone(), point.1.clone()];
    if !px.eval_all(&at).is_zero_q() || !py.eval_all(&at).is_zero_q() {
        return Err(NewtonError::NotACriticalPoint);
    }
    if px.is_zero() && py.is_zero() {
        return Err(NewtonError::NonIsolated);
    }
    match solve(&px, &py) {
        Ok(comps) => {
            let x0 = UPoly::constant(point.0.clone());
            let y0 = UPoly::constant(point.1.clone());
            for c in &comps {
                let g = c.param.gcd(&(&c.x - &x0)).gcd(&(&c.y - &y0));
                let g = if (&c.x - &x0).is_zero() && (&c.y - &y0).is_zero() { c.param.clone() } else { g };
                if g.deg() >= 1 {
                    return Ok(c.multiplicity as u64);
                }
            }
            unreachable!("critical point missing from the solution set")
        }
        Err(SystemError::NotZeroDimensional { .. }) | Err(SystemError::ShearExhausted) => local_fallback(p, point),
        Err(SystemError::WrongArity) => Err(NewtonError::WrongArity),
    }
}

fn local_fallback(p: &Polynomial, point: (&Rational, &Rational)) -> Result<u64, NewtonError> {
    let ring = Residue::new(&UPoly::x());
    let d = p.total_degree().unwrap_or(0).max(2) as usize;
    let cap = (d - 1) * (d - 1);
    let x0 = UPoly::constant(point.0.clone());
    let y0 = UPoly::constant(point.1.clone());
    match milnor_over(&ring, &from_polynomial(p), &x0, &y0, cap) {
        Ok(Some(m)) => Ok(m as u64),
        Ok(None) => Err(NewtonError::NonIsolated),
        Err(_) => unreachable!("the rationals have no zero divisors"),
    }
}

trait ZeroQ {
    fn is_zero_q(&self) -> bool;
}

impl ZeroQ for Rational {
    fn is_zero_q(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newton::kouchnirenko_mu;
    use crate::poly::parse_polynomial;
    use crate::poly::rational::int;

    fn pp(s: &str) -> Polynomial {
        parse_polynomial(s, &["x", "y"]).unwrap()
    }

    #[test]
    fn oracle_examples() {
        let o = (&int(0), &int(0));
        assert_eq!(jacobian_mu(&pp("x^2 + y^2"), o).unwrap().mu, Mu::Finite(1));
        assert_eq!(jacobian_mu(&pp("x^3 - y^2"), o).unwrap().mu, Mu::Finite(2));
        assert_eq!(jacobian_mu(&pp("x^2 + y^3"), o).unwrap().mu, kouchnirenko_mu(&pp("x^2 + y^3")).unwrap().mu);
        assert_eq!(jacobian_mu(&pp("x + y^2"), o), Err(NewtonError::NotACriticalPoint));
        assert_eq!(jacobian_mu(&pp("x^2*y^2"), o), Err(NewtonError::NonIsolated));
        // other critical points elsewhere do not interfere
        assert_eq!(jacobian_mu(&pp("x^3 - 3*x + y^2"), (&int(1), &int(0))).unwrap().mu, Mu::Finite(1));
        // gradient system with a common factor away from the point: falls back to the local algebra
        assert_eq!(milnor_number(&pp("(x - 5)^2*(x^2 + y^2)"), o).unwrap(), 1);
    }
}
