//! Exact polynomial arithmetic over the rationals and the elimination toolkit.

mod elim;
pub mod modular;
mod monomial;
mod parse;
mod polynomial;
pub mod rational;
pub mod residue;
pub mod roots;
mod univariate;

use thiserror::Error;

#[allow(unused_imports)]
pub(crate) use elim::resultant_in;
pub use elim::{
    discriminant, discriminant_univariate, gcd, pseudo_remainder, resultant, resultant_generic, resultant_univariate, resultant_with_linear, saturate,
    squarefree_part, Domain,
};
pub use monomial::Monomial;
pub use parse::{parse_polynomial, parse_polynomial_capped, DEFAULT_DEGREE_CAP};
pub use polynomial::{Polynomial, TermRecord};
pub use rational::{Integer, Rational};
pub use univariate::UPoly;

/// Serializers writing univariate polynomials as text in a fixed variable name.
pub mod ser {
    use serde::Serializer;

    use super::UPoly;

    macro_rules! in_var {
        ($name:ident, $opt:ident, $var:literal) => {
            pub fn $name<S: Serializer>(p: &UPoly, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(&p.display_in($var))
            }

            pub fn $opt<S: Serializer>(p: &Option<UPoly>, s: S) -> Result<S::Ok, S::Error> {
                match p {
                    Some(p) => s.serialize_some(&p.display_in($var)),
                    None => s.serialize_none(),
                }
            }
        };
    }

    in_var!(in_g, opt_in_g, "g");
    in_var!(in_c, opt_in_c, "c");
    in_var!(in_s, opt_in_s, "s");
    in_var!(in_t, opt_in_t, "t");
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable lists differ")]
    VariableMismatch,
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("both operands are constant in the elimination variable")]
    BothConstantInVar,
    #[error("polynomial has degree zero in the requested variable")]
    DegreeZero,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial involves more than one variable")]
    NotUnivariate,
    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("total degree {degree} exceeds the cap {cap} (at {position})")]
    DegreeCapExceeded { degree: u64, cap: u32, position: usize },
}
