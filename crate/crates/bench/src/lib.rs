//! Fixed workloads shared by the criterion benches.

use stphase::{make_rational_function, parse_polynomial, Polynomial, Rational, RationalFunction};

pub const VARS: [&str; 2] = ["x", "y"];

pub fn poly(text: &str) -> Polynomial {
    parse_polynomial(text, &VARS).expect("workload parses")
}

pub fn function(p: &str, q: &str) -> RationalFunction {
    make_rational_function(&poly(p), &poly(q)).expect("workload is a valid quotient")
}

pub fn point(a: i64, b: i64) -> (Rational, Rational) {
    (Rational::from_integer(a.into()), Rational::from_integer(b.into()))
}

/// Quotients of increasing incidence degree.
pub const QUOTIENTS: [(&str, &str, &str); 4] = [
    ("y-over-x", "y", "x"),
    ("cusp-over-x", "x - y^3", "x"),
    ("quartic-over-conic", "x^4 - 2*x*y^2 + y", "x^2 + y^2 - 1"),
    ("cubic-over-cubic", "x^3 + y^3 - x*y", "x*y^2 + 2*x - 3"),
];

/// Convenient germs at the origin.
pub const GERMS: [(&str, &str); 4] =
    [("e6", "x^3 + y^4"), ("w-mixed", "x^4 + x^2*y^2 + y^5"), ("deg6", "x^6 + 3*x^3*y^2 + y^6"), ("high", "x^5 + x^2*y^3 - y^7")];
