//! Newton polygons of plane germs and of curves in `(λ, g)`, Milnor numbers and
//! Puiseux leading data.

pub mod local_algebra;
mod milnor;
mod polygon;
mod puiseux;

use serde::Serialize;
use thiserror::Error;

use crate::poly::rational::serde_q;
use crate::poly::{Rational, UPoly};

pub use local_algebra::{local_dimension, milnor_over, RPoly};
pub use milnor::{jacobian_mu, milnor_number};
pub use polygon::{is_convenient, kouchnirenko_mu, local_polygon, nondegeneracy_check};
pub use puiseux::{branches_at, pole_orders, polygon_at_point, BranchGroup, Center, PuiseuxPolygon};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NewtonError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("germ does not vanish at the origin")]
    NonVanishingGerm,
    #[error("Newton polygon does not meet both axes")]
    NotConvenient,
    #[error("germ is Newton degenerate")]
    Degenerate,
    #[error("point is not a critical point")]
    NotACriticalPoint,
    #[error("critical point is not isolated (infinite Milnor number)")]
    NonIsolated,
    #[error("polynomial has degree zero in g")]
    DegenerateInG,
    #[error("polynomial must be in exactly two variables")]
    WrongArity,
}

/// One compact edge of a Newton polygon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub from: [u32; 2],
    pub to: [u32; 2],
    #[serde(with = "serde_q")]
    pub slope: Rational,
    /// Restriction of the polynomial to the edge, in the edge parameter.
    #[serde(serialize_with = "crate::poly::ser::in_s")]
    pub edge_poly: UPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    pub support: Vec<[u32; 2]>,
    pub vertices: Vec<[u32; 2]>,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Mu {
    Finite(u64),
    Infinite(InfiniteTag),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InfiniteTag {
    Infinite,
}

impl Mu {
    pub const INFINITE: Mu = Mu::Infinite(InfiniteTag::Infinite);

    pub fn finite(self) -> Option<u64> {
        match self {
            Mu::Finite(m) => Some(m),
            Mu::Infinite(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MilnorMethod {
    Kouchnirenko,
    JacobianOracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Passed,
    Failed,
    NotChecked,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MilnorReport {
    pub mu: Mu,
    pub method: MilnorMethod,
    pub nondegenerate: Check,
    pub convenient: bool,
}
