//! Text syntax for polynomials and truncated series.
//!
//! Grammar (ASCII, whitespace ignored):
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := ("+" | "-") unary | power
//! power  := atom ("^" integer)?
//! atom   := integer | identifier | "(" expr ")"
//! ```
//!
//! Identifiers resolve to ring variables or to the generator of an
//! extension field. Division produces fractions; [`parse_polynomial`]
//! only accepts constant denominators.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use super::field::Coeff;
use super::monomial::Monomial;
use super::polynomial::{PolyRing, Polynomial};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let col = i + 1;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Num(src[start..i].parse().unwrap()), col));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), col));
        } else if "+-*/^(),".contains(c) {
            out.push((Tok::Op(c), col));
            i += 1;
        } else {
            return Err(Error::parse(col, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

/// A quotient `num / den` of polynomials, as produced by the parser.
#[derive(Clone, Debug)]
pub struct Fraction {
    pub num: Polynomial,
    pub den: Polynomial,
}

impl Fraction {
    fn from_poly(p: Polynomial) -> Self {
        let den = Polynomial::one(p.ring());
        Fraction { num: p, den }
    }

    fn normalize(self) -> Self {
        if self.den.is_constant() {
            let inv = self.den.constant_term().inv().expect("nonzero denominator");
            Fraction::from_poly(self.num.scale(&inv))
        } else {
            self
        }
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
    ring: &'a Arc<PolyRing>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_col)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Fraction> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                let t = self.term()?;
                acc = add(&acc, &t, false);
            } else if self.eat('-') {
                let t = self.term()?;
                acc = add(&acc, &t, true);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Fraction> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let t = self.unary()?;
                acc = Fraction {
                    num: &acc.num * &t.num,
                    den: &acc.den * &t.den,
                }
                .normalize();
            } else if self.peek() == Some(&Tok::Op('/')) {
                let col = self.col();
                self.pos += 1;
                let t = self.unary()?;
                if t.num.is_zero() {
                    return Err(Error::parse(col, "division by zero"));
                }
                acc = Fraction {
                    num: &acc.num * &t.den,
                    den: &acc.den * &t.num,
                }
                .normalize();
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Fraction> {
        if self.eat('-') {
            let f = self.unary()?;
            return Ok(Fraction {
                num: f.num.neg(),
                den: f.den,
            });
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Fraction> {
        let base = self.atom()?;
        if self.eat('^') {
            let col = self.col();
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| Error::parse(col, "exponent too large"))?;
                    Ok(Fraction {
                        num: base.num.pow(e),
                        den: base.den.pow(e),
                    })
                }
                _ => Err(Error::parse(col, "expected a non-negative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Fraction> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let field = self.ring.field();
                Ok(Fraction::from_poly(Polynomial::constant(self.ring, field.from_bigint(&n))))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(i) = self.ring.var_index(&name) {
                    return Ok(Fraction::from_poly(Polynomial::var(self.ring, i)));
                }
                if self.ring.field().generator_name() == Some(name.as_str()) {
                    let g = self.ring.field().generator().unwrap();
                    return Ok(Fraction::from_poly(Polynomial::constant(self.ring, g)));
                }
                if name == "O" {
                    return Err(Error::parse(col, "precision marker `O(...)` is only allowed at the end of a series"));
                }
                Err(Error::UndeclaredVariable(name))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::parse(self.col(), "expected `)`"));
                }
                Ok(e)
            }
            Some(Tok::Op(c)) => Err(Error::parse(col, format!("unexpected `{c}`"))),
            None => Err(Error::parse(col, "unexpected end of input")),
        }
    }
}

fn add(a: &Fraction, b: &Fraction, negate: bool) -> Fraction {
    let rhs = &b.num * &a.den;
    let lhs = &a.num * &b.den;
    let num = if negate { &lhs - &rhs } else { &lhs + &rhs };
    Fraction {
        num,
        den: &a.den * &b.den,
    }
    .normalize()
}

/// Parses an expression that may contain polynomial denominators.
pub fn parse_fraction(src: &str, ring: &Arc<PolyRing>) -> Result<Fraction> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(Error::parse(1, "empty expression"));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end_col: src.len() + 1,
        ring,
    };
    let f = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(Error::parse(p.col(), "unexpected trailing input"));
    }
    Ok(f)
}

/// Parses a polynomial; denominators must be nonzero constants.
pub fn parse_polynomial(src: &str, ring: &Arc<PolyRing>) -> Result<Polynomial> {
    let f = parse_fraction(src, ring)?;
    if !f.den.is_constant() {
        return Err(Error::parse(1, format!("`{src}` has a non-constant denominator")));
    }
    Ok(f.num)
}

/// The pieces of a series literal `body + O(vars^N)`.
#[derive(Clone, Debug)]
pub struct SeriesLiteral {
    pub body: Fraction,
    pub precision: u32,
    pub vars: Vec<String>,
}

/// Splits a series literal into its body and precision marker; the body is
/// parsed in `ring`, and every variable named in the marker must belong to it.
pub fn parse_series_literal(src: &str, ring: &Arc<PolyRing>) -> Result<SeriesLiteral> {
    let marker = find_marker(src).ok_or_else(|| Error::parse(src.len() + 1, "missing precision marker `O(...)`"))?;
    let head = src[..marker].trim_end();
    let (vars, precision) = parse_marker(&src[marker..]).map_err(|e| e.at_line(1, marker))?;
    for v in &vars {
        if ring.var_index(v).is_none() {
            return Err(Error::UndeclaredVariable(v.clone()));
        }
    }
    let body = if head.is_empty() {
        Fraction::from_poly(Polynomial::zero(ring))
    } else {
        let Some(body) = head.strip_suffix('+') else {
            return Err(Error::parse(marker + 1, "precision marker must be added with `+`"));
        };
        parse_fraction(body, ring)?
    };
    Ok(SeriesLiteral { body, precision, vars })
}

fn find_marker(src: &str) -> Option<usize> {
    let bytes = src.as_bytes();
    let mut idx = None;
    for (i, w) in bytes.windows(2).enumerate() {
        if w == b"O(" && (i == 0 || !(bytes[i - 1].is_ascii_alphanumeric() || bytes[i - 1] == b'_')) {
            idx = Some(i);
        }
    }
    idx
}

fn parse_marker(src: &str) -> Result<(Vec<String>, u32)> {
    let toks = tokenize(src)?;
    let mut i = 2; // `O` `(`
    let mut vars = Vec::new();
    let grouped = toks.get(i).map(|t| &t.0) == Some(&Tok::Op('('));
    if grouped {
        i += 1;
    }
    loop {
        match toks.get(i) {
            Some((Tok::Ident(v), _)) => vars.push(v.clone()),
            Some((_, c)) => return Err(Error::parse(*c, "expected a variable in the precision marker")),
            None => return Err(Error::parse(src.len() + 1, "unterminated precision marker")),
        }
        i += 1;
        if grouped && toks.get(i).map(|t| &t.0) == Some(&Tok::Op(',')) {
            i += 1;
            continue;
        }
        break;
    }
    if grouped {
        if toks.get(i).map(|t| &t.0) != Some(&Tok::Op(')')) {
            return Err(Error::parse(toks.get(i).map(|t| t.1).unwrap_or(src.len() + 1), "expected `)`"));
        }
        i += 1;
    }
    let mut precision = 1u32;
    if toks.get(i).map(|t| &t.0) == Some(&Tok::Op('^')) {
        i += 1;
        match toks.get(i) {
            Some((Tok::Num(n), c)) => {
                precision = n.try_into().map_err(|_| Error::parse(*c, "precision too large"))?;
                i += 1;
            }
            Some((_, c)) => return Err(Error::parse(*c, "expected an integer precision")),
            None => return Err(Error::parse(src.len() + 1, "expected an integer precision")),
        }
    }
    match toks.get(i) {
        Some((Tok::Op(')'), _)) if i + 1 == toks.len() => {}
        Some((_, c)) => return Err(Error::parse(*c, "malformed precision marker")),
        None => return Err(Error::parse(src.len() + 1, "unterminated precision marker")),
    }
    if precision == 0 {
        return Err(Error::parse(1, "precision must be positive"));
    }
    Ok((vars, precision))
}

fn write_monomial(f: &mut fmt::Formatter<'_>, ring: &PolyRing, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (v, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "{}", ring.vars()[v])?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// Writes terms in the given sequence, e.g. `x^2 - 1/2*y + 3`.
pub(crate) fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    ring: &PolyRing,
    terms: impl Iterator<Item = &'a (Monomial, Coeff)>,
) -> fmt::Result {
    let mut first = true;
    for (m, c) in terms {
        let (neg, abs) = c.sign_split();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, "{}", if neg { " - " } else { " + " })?;
        }
        first = false;
        let paren = abs.needs_parens();
        if m.is_one() {
            if paren {
                write!(f, "({abs})")?;
            } else {
                write!(f, "{abs}")?;
            }
        } else {
            if !abs.is_one() {
                if paren {
                    write!(f, "({abs})*")?;
                } else {
                    write!(f, "{abs}*")?;
                }
            }
            write_monomial(f, ring, m)?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::field::Field;
    use crate::poly::monomial::MonomialOrder;

    fn ring() -> Arc<PolyRing> {
        PolyRing::new(&["x", "Y1", "Y2"], Field::Rational, MonomialOrder::DegRevLex).unwrap()
    }

    #[test]
    fn round_trip_examples() {
        let r = ring();
        for s in ["-x^2 + Y1*Y2", "1/2*x^3", "-x^2 + 3", "0", "-1/3*x*Y1^2 - Y2 + 7"] {
            let p = parse_polynomial(s, &r).unwrap();
            assert_eq!(p.to_string(), s);
        }
    }

    #[test]
    fn precedence() {
        let r = ring();
        let a = parse_polynomial("-x^2", &r).unwrap();
        let b = parse_polynomial("0 - x*x", &r).unwrap();
        assert_eq!(a, b);
        let c = parse_polynomial("2*(x+1)^2/4", &r).unwrap();
        assert_eq!(c.to_string(), "1/2*x^2 + x + 1/2");
    }

    #[test]
    fn errors_carry_positions() {
        let r = ring();
        match parse_polynomial("x + $", &r) {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("{other:?}"),
        }
        assert_eq!(parse_polynomial("Y3 + x", &r), Err(Error::UndeclaredVariable("Y3".into())));
        assert!(matches!(parse_polynomial("(x + 1", &r), Err(Error::Parse { .. })));
        assert!(matches!(parse_polynomial("1/x", &r), Err(Error::Parse { .. })));
    }

    #[test]
    fn series_literals() {
        let r = ring();
        let s = parse_series_literal("x + 1/2*x^2 + O(x^8)", &r).unwrap();
        assert_eq!(s.precision, 8);
        assert_eq!(s.vars, vec!["x".to_string()]);
        let z = parse_series_literal("O(x^3)", &r).unwrap();
        assert!(z.body.num.is_zero());
        let m = parse_series_literal("Y1 + O((x, Y1)^4)", &r).unwrap();
        assert_eq!(m.vars.len(), 2);
        assert!(parse_series_literal("x + x^2", &r).is_err());
        assert!(parse_series_literal("x + O(w^2)", &r).is_err());
    }

    #[test]
    fn extension_coefficients() {
        let q = |n| Field::Rational.from_i64(n);
        let k = Field::extension(Field::Rational, "a", vec![q(-2), q(0), q(1)]).unwrap();
        let r = PolyRing::new(&["x"], k, MonomialOrder::DegRevLex).unwrap();
        let p = parse_polynomial("(a+1)*x - a*x^2 + a^2", &r).unwrap();
        assert_eq!(p.to_string(), "-a*x^2 + (a + 1)*x + 2");
        assert_eq!(parse_polynomial(&p.to_string(), &r).unwrap(), p);
    }
}
