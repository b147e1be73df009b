//! Exact stationary-phase invariants of `e^{f}` for rational functions `f = P/Q`
//! on the complex plane: exponential factors of the Fourier transform and their
//! ranks, special values at points of indeterminacy, Milnor numbers and Newton
//! polygons, tameness at infinity, and irregularity along lines.
//!
//! All arithmetic is over the rationals; algebraic numbers are reported by a
//! defining polynomial and an isolating box.

pub mod newton;
pub mod poly;
pub mod sampling;
pub mod slice;
pub mod stationary;
pub mod system;
pub mod tameness;
pub mod vanishing;

use serde::Serialize;
use thiserror::Error;

pub use newton::{MilnorReport, Mu, NewtonError, NewtonPolygon};
pub use poly::{parse_polynomial, parse_polynomial_capped, PolyError, Polynomial, Rational, UPoly};
pub use slice::{IrregularityReport, SliceError};
pub use stationary::{make_rational_function, FourierSpectrum, RationalFunction, StationaryError};
pub use system::{Component, SystemError};
pub use tameness::{BifurcationReport, TameReport, TamenessError};
pub use vanishing::{GermReport, VanishingError};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Any engine error, tagged with the module that raised it.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error("poly: {0}")]
    Poly(#[from] PolyError),
    #[error("system: {0}")]
    System(#[from] SystemError),
    #[error("newton: {0}")]
    Newton(#[from] NewtonError),
    #[error("stationary: {0}")]
    Stationary(#[from] StationaryError),
    #[error("vanishing: {0}")]
    Vanishing(#[from] VanishingError),
    #[error("tameness: {0}")]
    Tameness(#[from] TamenessError),
    #[error("slice: {0}")]
    Slice(#[from] SliceError),
}

/// Serializable form of an [`Error`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorRecord {
    pub module: &'static str,
    pub kind: String,
    pub message: String,
}

impl Error {
    pub fn module(&self) -> &'static str {
        match self {
            Error::Poly(_) => "poly",
            Error::System(_) => "system",
            Error::Newton(_) => "newton",
            Error::Stationary(_) => "stationary",
            Error::Vanishing(_) => "vanishing",
            Error::Tameness(_) => "tameness",
            Error::Slice(_) => "slice",
        }
    }

    /// Variant name of the innermost error, e.g. `NotTame`.
    pub fn kind(&self) -> String {
        let debug = match self {
            Error::Poly(e) => format!("{e:?}"),
            Error::System(e) => format!("{e:?}"),
            Error::Newton(e) => format!("{e:?}"),
            Error::Stationary(e) => format!("{e:?}"),
            Error::Vanishing(e) => format!("{e:?}"),
            Error::Tameness(e) => format!("{e:?}"),
            Error::Slice(e) => format!("{e:?}"),
        };
        innermost_variant(&debug)
    }

    pub fn record(&self) -> ErrorRecord {
        ErrorRecord { module: self.module(), kind: self.kind(), message: self.to_string() }
    }
}

const WRAPPERS: [&str; 5] = ["Poly", "System", "Newton", "Stationary", "Vanishing"];

/// Strips wrapper variants like `Vanishing(NotSpecialValue)` down to `NotSpecialValue`.
fn innermost_variant(debug: &str) -> String {
    let mut s = debug;
    loop {
        let end = s.find(|c: char| !(c.is_alphanumeric() || c == '_')).unwrap_or(s.len());
        let head = &s[..end];
        match s[end..].strip_prefix('(') {
            Some(rest) if WRAPPERS.contains(&head) => s = rest,
            _ => return head.to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_provenance() {
        let e = Error::from(StationaryError::Vanishing(VanishingError::NotIndeterminacyPoint));
        assert_eq!(e.module(), "stationary");
        assert_eq!(e.kind(), "NotIndeterminacyPoint");
        let e = Error::from(TamenessError::NotTame(tameness::Verdict::No));
        assert_eq!(e.kind(), "NotTame");
        let e = Error::from(StationaryError::GenericityFailure { draws: 3 });
        assert_eq!(e.kind(), "GenericityFailure");
    }
}
