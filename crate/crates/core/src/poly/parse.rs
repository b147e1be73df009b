//! Expression grammar for polynomials.
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := unary (("*" | "/") unary)*        // "/" only by nonzero constants
//! unary   := ("+" | "-") unary | power
//! power   := atom ("^" integer)?
//! atom    := integer | identifier | "(" expr ")"
//! ```
//!
//! Rational literals are written as a quotient of integers, e.g. `3/2*x*y`.

use num_bigint::BigInt;
use num_traits::Zero;

use super::polynomial::Polynomial;
use super::rational::Rational;
use super::PolyError;

/// Total degree cap applied while parsing unless the caller chooses another.
pub const DEFAULT_DEGREE_CAP: u32 = 24;
const MAX_DEPTH: usize = 256;

pub fn parse_polynomial<S: AsRef<str>>(text: &str, vars: &[S]) -> Result<Polynomial, PolyError> {
    parse_polynomial_capped(text, vars, DEFAULT_DEGREE_CAP)
}

pub fn parse_polynomial_capped<S: AsRef<str>>(text: &str, vars: &[S], cap: u32) -> Result<Polynomial, PolyError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, pos: 0, vars: Polynomial::zero(vars), cap, depth: 0, end: text.len() };
    let p = parser.expr()?;
    if let Some(t) = parser.tokens.get(parser.pos) {
        return Err(syntax(t.pos, format!("unexpected {}", t.kind.describe())));
    }
    Ok(p)
}

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    Int(BigInt),
    Ident(String),
    Op(char),
}

impl Kind {
    fn describe(&self) -> String {
        match self {
            Kind::Int(n) => format!("number {n}"),
            Kind::Ident(s) => format!("identifier {s:?}"),
            Kind::Op(c) => format!("{c:?}"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    kind: Kind,
    pos: usize,
}

fn syntax(position: usize, message: impl Into<String>) -> PolyError {
    PolyError::Syntax { position, message: message.into() }
}

fn tokenize(text: &str) -> Result<Vec<Token>, PolyError> {
    let mut out = Vec::new();
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < bytes.len() {
        let (pos, c) = bytes[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = bytes[start..i].iter().map(|(_, c)| c).collect();
            out.push(Token { kind: Kind::Int(s.parse().expect("digits")), pos });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].1.is_ascii_alphanumeric() || bytes[i].1 == '_') {
                i += 1;
            }
            let s: String = bytes[start..i].iter().map(|(_, c)| c).collect();
            out.push(Token { kind: Kind::Ident(s), pos });
        } else if "+-*/^()".contains(c) {
            out.push(Token { kind: Kind::Op(c), pos });
            i += 1;
        } else {
            return Err(syntax(pos, format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    vars: Polynomial,
    cap: u32,
    depth: usize,
    end: usize,
}

impl Parser {
    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Token { kind: Kind::Op(c), .. }) => Some(*c),
            _ => None,
        }
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map(|t| t.pos).unwrap_or(self.end)
    }

    fn check_cap(&self, p: &Polynomial, pos: usize) -> Result<(), PolyError> {
        let d = p.total_degree().unwrap_or(0);
        if d > self.cap {
            return Err(PolyError::DegreeCapExceeded { degree: d as u64, cap: self.cap, position: pos });
        }
        Ok(())
    }

    fn enter(&mut self) -> Result<(), PolyError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(syntax(self.here(), "expression nested too deeply"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        self.enter()?;
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            let pos = self.here();
            self.pos += 1;
            let rhs = self.unary()?;
            if op == '*' {
                let da = acc.total_degree().unwrap_or(0) as u64;
                let db = rhs.total_degree().unwrap_or(0) as u64;
                if da + db > self.cap as u64 {
                    return Err(PolyError::DegreeCapExceeded { degree: da + db, cap: self.cap, position: pos });
                }
                acc = &acc * &rhs;
            } else {
                match rhs.constant_value() {
                    Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                    Some(_) => return Err(syntax(pos, "division by zero")),
                    None => return Err(syntax(pos, "division is only allowed by nonzero constants")),
                }
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                self.enter()?;
                let p = self.unary()?;
                self.depth -= 1;
                Ok(-&p)
            }
            Some('+') => {
                self.pos += 1;
                self.enter()?;
                let p = self.unary()?;
                self.depth -= 1;
                Ok(p)
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            let pos = self.here();
            self.pos += 1;
            let exp = match self.tokens.get(self.pos) {
                Some(Token { kind: Kind::Int(n), .. }) => n.clone(),
                Some(t) => return Err(syntax(t.pos, "exponent must be a non-negative integer literal")),
                None => return Err(syntax(self.end, "missing exponent")),
            };
            self.pos += 1;
            if self.peek_op() == Some('^') {
                return Err(syntax(self.here(), "chained exponents need parentheses"));
            }
            let d = base.total_degree().unwrap_or(0) as u64;
            let e: u64 = match u64::try_from(&exp) {
                Ok(e) => e,
                Err(_) => {
                    if d == 0
                        && !base.is_zero()
                        && base.constant_value().is_some_and(|c| c == Rational::from_integer(1.into()) || c == Rational::from_integer((-1).into()))
                    {
                        let odd = exp.bit(0);
                        let c = base.constant_value().unwrap();
                        return Ok(if odd { base.constant_like(c) } else { base.one_like() });
                    }
                    return Err(PolyError::DegreeCapExceeded { degree: u64::MAX, cap: self.cap, position: pos });
                }
            };
            if d.saturating_mul(e) > self.cap as u64 {
                return Err(PolyError::DegreeCapExceeded { degree: d.saturating_mul(e), cap: self.cap, position: pos });
            }
            if d == 0 {
                // constant base: guard against huge integer powers
                let c = base.constant_value().unwrap_or_default();
                let bits = super::rational::height_bits(&c);
                if bits > 1 && e.saturating_mul(bits) > 1 << 20 {
                    return Err(syntax(pos, "constant power too large"));
                }
            }
            let p = base.pow(e as u32);
            self.check_cap(&p, pos)?;
            Ok(p)
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        let Some(tok) = self.tokens.get(self.pos).cloned() else {
            return Err(syntax(self.end, "unexpected end of input"));
        };
        self.pos += 1;
        match tok.kind {
            Kind::Int(n) => Ok(self.vars.constant_like(Rational::from_integer(n))),
            Kind::Ident(name) => match self.vars.var_index(&name) {
                Ok(i) => Ok(self.vars.var_like(i)),
                Err(_) => Err(PolyError::UnknownVariable(name)),
            },
            Kind::Op('(') => {
                let p = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(syntax(self.here(), "expected ')'"));
                }
                self.pos += 1;
                Ok(p)
            }
            Kind::Op(c) => Err(syntax(tok.pos, format!("unexpected {c:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::{int, rat};

    #[test]
    fn parses_examples() {
        let p = parse_polynomial("x - y^3", &["x", "y"]).unwrap();
        assert_eq!(p.coeff(&[1, 0]), int(1));
        assert_eq!(p.coeff(&[0, 3]), int(-1));
        assert_eq!(p.num_terms(), 2);
        let q = parse_polynomial("3/2*x*y", &["x", "y"]).unwrap();
        assert_eq!(q.coeff(&[1, 1]), rat(3, 2));
        assert_eq!(q.num_terms(), 1);
        let r = parse_polynomial("-(x+y)^2 + 2*x*y", &["x", "y"]).unwrap();
        assert_eq!(r.to_string(), "-x^2 - y^2");
    }

    #[test]
    fn format_round_trip() {
        for s in ["x^2 + 3/2*x*y - y^3 + 7", "-x", "0", "1/3", "x*y^2 - 5/7*y"] {
            let p = parse_polynomial(s, &["x", "y"]).unwrap();
            let again = parse_polynomial(&p.to_string(), &["x", "y"]).unwrap();
            assert_eq!(p, again, "{s}");
        }
    }

    #[test]
    fn errors_carry_positions() {
        match parse_polynomial("x + * y", &["x", "y"]) {
            Err(PolyError::Syntax { position, .. }) => assert_eq!(position, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_polynomial("x / y", &["x", "y"]), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_polynomial("x / 0", &["x", "y"]), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_polynomial("z", &["x", "y"]), Err(PolyError::UnknownVariable(_))));
        assert!(matches!(parse_polynomial("x^25", &["x", "y"]), Err(PolyError::DegreeCapExceeded { .. })));
        assert!(matches!(parse_polynomial("x^99999999999999999999999", &["x"]), Err(PolyError::DegreeCapExceeded { .. })));
        assert!(matches!(parse_polynomial("(x", &["x"]), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_polynomial("1.5*x", &["x"]), Err(PolyError::Syntax { .. })));
        let deep = "(".repeat(5000) + "x" + &")".repeat(5000);
        assert!(matches!(parse_polynomial(&deep, &["x"]), Err(PolyError::Syntax { .. })));
    }
}
