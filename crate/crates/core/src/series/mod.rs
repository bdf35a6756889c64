//! Truncated power series with explicit precision.
//!
//! A [`TruncatedSeries`] stores a polynomial whose terms all have total
//! degree below `precision`; every operation computes the precision of its
//! result from the precisions of its operands.

mod weierstrass;

use std::fmt;
use std::sync::Arc;

pub use weierstrass::{weierstrass_prepare, WeierstrassData};

use crate::error::{Error, Result};
use crate::poly::text::{self, parse_series_literal};
use crate::poly::{Coeff, Field, Monomial, MonomialOrder, PolyRing, Polynomial};

/// Order of a truncated series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Finite(u32),
    /// Every stored coefficient vanishes; the true order is at least this.
    AtLeast(u32),
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }

    /// Lower bound on the true order.
    pub fn lower_bound(self) -> u32 {
        match self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => v,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">= {v}"),
        }
    }
}

/// A power series known modulo all monomials of total degree `>= precision`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    poly: Polynomial,
    precision: u32,
}

/// The univariate ring `field[name]` used for series in one variable.
pub fn series_ring(name: &str, field: Field) -> Result<Arc<PolyRing>> {
    PolyRing::new(&[name], field, MonomialOrder::DegRevLex)
}

fn check_same(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<()> {
    if a.poly.ring().same(b.poly.ring()) {
        Ok(())
    } else {
        Err(Error::Structural("series live in different rings".into()))
    }
}

impl TruncatedSeries {
    /// Truncates `poly` to the given precision.
    pub fn new(poly: Polynomial, precision: u32) -> TruncatedSeries {
        TruncatedSeries {
            poly: poly.truncate(precision),
            precision,
        }
    }

    pub fn zero(ring: &Arc<PolyRing>, precision: u32) -> TruncatedSeries {
        TruncatedSeries::new(Polynomial::zero(ring), precision)
    }

    pub fn one(ring: &Arc<PolyRing>, precision: u32) -> TruncatedSeries {
        TruncatedSeries::new(Polynomial::one(ring), precision)
    }

    /// Expansion of `num / den`; `den` must have a nonzero constant term.
    pub fn from_fraction(num: &Polynomial, den: &Polynomial, precision: u32) -> Result<TruncatedSeries> {
        let d = TruncatedSeries::new(den.clone(), precision).invert()?;
        TruncatedSeries::new(num.clone(), precision).mul(&d)
    }

    /// Parses `body + O(x^N)` (or `O((x1, x2)^N)` for several variables).
    /// The marker must name every variable of the ring.
    pub fn parse(src: &str, ring: &Arc<PolyRing>) -> Result<TruncatedSeries> {
        let lit = parse_series_literal(src, ring)?;
        let mut named = lit.vars.clone();
        named.sort();
        let mut all: Vec<String> = ring.vars().to_vec();
        all.sort();
        if named != all {
            return Err(Error::parse(
                1,
                format!("precision marker must name exactly the variables ({})", ring.vars().join(", ")),
            ));
        }
        if lit.body.den.constant_term().is_zero() {
            return Err(Error::NonUnit(format!("denominator {} is not a unit", lit.body.den)));
        }
        TruncatedSeries::from_fraction(&lit.body.num, &lit.body.den, lit.precision)
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        self.poly.ring()
    }

    pub fn field(&self) -> &Field {
        self.poly.field()
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Coefficient of `x^e` of a univariate series.
    pub fn coefficient(&self, e: u32) -> Coeff {
        self.poly.coefficient(&Monomial::var(self.ring().nvars(), 0, e))
    }

    pub fn constant_term(&self) -> Coeff {
        self.poly.constant_term()
    }

    pub fn order(&self) -> Valuation {
        match self.poly.low_degree() {
            Some(d) => Valuation::Finite(d),
            None => Valuation::AtLeast(self.precision),
        }
    }

    /// The same series known to a lower precision.
    pub fn truncate(&self, precision: u32) -> TruncatedSeries {
        TruncatedSeries::new(self.poly.clone(), precision.min(self.precision))
    }

    /// Claims a different precision (the stored polynomial is kept up to it).
    pub fn with_precision(&self, precision: u32) -> TruncatedSeries {
        TruncatedSeries::new(self.poly.clone(), precision)
    }

    pub fn add(&self, o: &TruncatedSeries) -> Result<TruncatedSeries> {
        check_same(self, o)?;
        Ok(TruncatedSeries::new(&self.poly + &o.poly, self.precision.min(o.precision)))
    }

    pub fn sub(&self, o: &TruncatedSeries) -> Result<TruncatedSeries> {
        check_same(self, o)?;
        Ok(TruncatedSeries::new(&self.poly - &o.poly, self.precision.min(o.precision)))
    }

    pub fn mul(&self, o: &TruncatedSeries) -> Result<TruncatedSeries> {
        check_same(self, o)?;
        let precision = self.precision.min(o.precision);
        Ok(TruncatedSeries {
            poly: self.poly.mul_truncated(&o.poly, precision)?,
            precision,
        })
    }

    pub fn neg(&self) -> TruncatedSeries {
        TruncatedSeries {
            poly: self.poly.neg(),
            precision: self.precision,
        }
    }

    pub fn scale(&self, c: &Coeff) -> TruncatedSeries {
        TruncatedSeries {
            poly: self.poly.scale(c),
            precision: self.precision,
        }
    }

    pub fn pow(&self, e: u32) -> TruncatedSeries {
        TruncatedSeries {
            poly: self.poly.pow_truncated(e, self.precision),
            precision: self.precision,
        }
    }

    /// Multiplicative inverse of a unit, to the same precision.
    pub fn invert(&self) -> Result<TruncatedSeries> {
        let c0 = self.constant_term();
        let inv0 = c0
            .inv()
            .ok_or_else(|| Error::NonUnit(format!("series {self} has zero constant term")))?;
        let ring = self.ring();
        let two = Polynomial::from_i64(ring, 2);
        let mut v = Polynomial::constant(ring, inv0);
        let mut k = 1u32;
        while k < self.precision {
            k = (2 * k).min(self.precision);
            // v <- v (2 - u v)
            let uv = self.poly.mul_truncated(&v, k)?;
            v = v.mul_truncated(&(&two - &uv), k)?;
        }
        Ok(TruncatedSeries::new(v, self.precision))
    }

    /// Quotient `self / b` in one variable. The result is known to
    /// `min(precision) - order(b)`.
    pub fn divide_exact(&self, b: &TruncatedSeries) -> Result<TruncatedSeries> {
        check_same(self, b)?;
        if self.ring().nvars() != 1 {
            return Err(Error::Structural("exact division is only defined for univariate series".into()));
        }
        let vb = b
            .order()
            .finite()
            .ok_or_else(|| Error::Divisibility(format!("divisor {b} vanishes to its precision")))?;
        let va = self.order();
        if va.lower_bound() < vb && matches!(va, Valuation::Finite(_)) {
            return Err(Error::Divisibility(format!(
                "order of {self} is {va}, below the divisor order {vb}"
            )));
        }
        let precision = self.precision.min(b.precision).saturating_sub(vb);
        if precision == 0 {
            return Err(Error::InsufficientPrecision(format!(
                "dividing by a series of order {vb} leaves no known coefficients"
            )));
        }
        let a1 = self.poly.shift(0, -(vb as i64)).unwrap_or_else(|_| Polynomial::zero(self.ring()));
        let b1 = b.poly.shift(0, -(vb as i64))?;
        let inv = TruncatedSeries::new(b1, precision).invert()?;
        TruncatedSeries::new(a1, precision).mul(&inv)
    }

    /// Multiplies by `x^e` in a univariate ring; precision grows by `e`.
    pub fn shift_up(&self, e: u32) -> TruncatedSeries {
        TruncatedSeries {
            poly: self.poly.shift(0, e as i64).unwrap(),
            precision: self.precision + e,
        }
    }

    /// Product with an exactly known polynomial of the univariate ring. The
    /// factor `x^k` of `p` is exact, so the precision grows by `k`.
    pub fn mul_exact(&self, p: &Polynomial) -> Result<TruncatedSeries> {
        let Some(k) = p.low_degree() else {
            return Ok(TruncatedSeries::zero(self.ring(), self.precision));
        };
        let w = TruncatedSeries::new(p.shift(0, -(k as i64))?, self.precision);
        Ok(w.mul(self)?.shift_up(k))
    }

    /// Moves the series into a ring over a larger field.
    pub fn embed(&self, ring: &Arc<PolyRing>) -> Result<TruncatedSeries> {
        Ok(TruncatedSeries {
            poly: self.poly.remap(ring)?,
            precision: self.precision,
        })
    }

    /// Whether `self - other` vanishes to `precision`.
    pub fn agrees_with(&self, other: &TruncatedSeries, precision: u32) -> Result<bool> {
        check_same(self, other)?;
        Ok((&self.poly - &other.poly).truncate(precision).is_zero())
    }
}

/// Evaluates `f` at series images of its variables. The result precision is
/// the minimum of the image precisions.
pub fn evaluate(f: &Polynomial, images: &[TruncatedSeries]) -> Result<TruncatedSeries> {
    let Some(first) = images.first() else {
        return Err(Error::Shape("no images supplied".into()));
    };
    let ring = first.ring().clone();
    let precision = images.iter().map(|s| s.precision).min().unwrap();
    let polys: Vec<Polynomial> = images.iter().map(|s| s.poly.clone()).collect();
    let p = f.compose_truncated(&ring, &polys, precision)?;
    Ok(TruncatedSeries { poly: p, precision })
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = self.ring();
        if !self.poly.is_zero() {
            text::write_terms(f, ring, self.poly.terms().iter().rev())?;
            write!(f, " + ")?;
        }
        if ring.nvars() == 1 {
            write!(f, "O({}^{})", ring.vars()[0], self.precision)
        } else {
            write!(f, "O(({})^{})", ring.vars().join(", "), self.precision)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<PolyRing> {
        series_ring("x", Field::Rational).unwrap()
    }

    fn s(src: &str) -> TruncatedSeries {
        TruncatedSeries::parse(src, &ring()).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(s("x^2 + x^3 + O(x^10)").order(), Valuation::Finite(2));
        assert_eq!(s("O(x^10)").order(), Valuation::AtLeast(10));
        assert_eq!(s("3 + x + O(x^10)").order(), Valuation::Finite(0));
    }

    #[test]
    fn inverses() {
        assert_eq!(s("1 + O(x^5)").invert().unwrap(), s("1 + O(x^5)"));
        assert_eq!(s("1 - x + O(x^4)").invert().unwrap(), s("1 + x + x^2 + x^3 + O(x^4)"));
        assert_eq!(s("2 + x + O(x^3)").invert().unwrap(), s("1/2 - 1/4*x + 1/8*x^2 + O(x^3)"));
        assert!(matches!(s("x + O(x^3)").invert(), Err(Error::NonUnit(_))));
    }

    #[test]
    fn exact_division() {
        let q = s("x^3 + O(x^10)").divide_exact(&s("x^2 + O(x^10)")).unwrap();
        assert_eq!(q, s("x + O(x^8)"));
        let q = s("x^2 + x^3 + O(x^10)").divide_exact(&s("x^2 + O(x^10)")).unwrap();
        assert_eq!(q, s("1 + x + O(x^8)"));
        let q = s("x + x^2 + O(x^4)").divide_exact(&s("x - x^2 + O(x^4)")).unwrap();
        assert_eq!(q, s("1 + 2*x + 2*x^2 + O(x^3)"));
        assert!(matches!(s("x + O(x^5)").divide_exact(&s("x^2 + O(x^5)")), Err(Error::Divisibility(_))));
    }

    #[test]
    fn precision_is_minimum() {
        let a = s("1 + x + O(x^3)");
        let b = s("1 + x + x^5 + O(x^8)");
        assert_eq!(a.mul(&b).unwrap().precision(), 3);
        assert_eq!(a.add(&b).unwrap(), s("2 + 2*x + O(x^3)"));
        // an exact factor x^2 (1 - x) costs nothing
        let p = crate::poly::parse_polynomial("x^2 - x^3", a.ring()).unwrap();
        assert_eq!(a.mul_exact(&p).unwrap(), s("x^2 - x^4 + O(x^5)"));
    }

    #[test]
    fn fractions_expand() {
        assert_eq!(s("x/(1+x) + O(x^4)"), s("x - x^2 + x^3 + O(x^4)"));
        assert!(TruncatedSeries::parse("1/x + O(x^4)", &ring()).is_err());
        assert!(TruncatedSeries::parse("1 + x", &ring()).is_err());
    }

    #[test]
    fn display_round_trip() {
        for src in ["1 + 1/2*x - 1/8*x^2 + O(x^3)", "O(x^7)", "-x^2 + O(x^5)"] {
            assert_eq!(s(src).to_string(), src);
        }
    }

    #[test]
    fn evaluation_at_series() {
        let r = PolyRing::new(&["x", "Y1", "Y2"], Field::Rational, MonomialOrder::DegRevLex).unwrap();
        let f = crate::poly::parse_polynomial("Y1*Y2 - x^2", &r).unwrap();
        let imgs = [s("x + O(x^12)"), s("x + x^2 + O(x^12)"), s("x/(1+x) + O(x^12)")];
        let v = evaluate(&f, &imgs).unwrap();
        assert_eq!(v.order(), Valuation::AtLeast(12));
    }
}
