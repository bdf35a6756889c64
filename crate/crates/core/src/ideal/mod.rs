//! Ideals, Gröbner bases and the ideal operations built on them.

mod engine;
pub mod module;

use std::fmt;
use std::sync::Arc;

use engine::{Engine, MVec, Term};

use crate::error::{Error, Result};
use crate::poly::{MonomialOrder, PolyRing, Polynomial};

/// Default cap on the number of S-pair reductions per basis computation.
pub const DEFAULT_SPAIR_BUDGET: usize = 100_000;

/// A finitely generated ideal; zero generators are dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct Ideal {
    ring: Arc<PolyRing>,
    gens: Vec<Polynomial>,
}

impl Ideal {
    pub fn new(ring: &Arc<PolyRing>, gens: Vec<Polynomial>) -> Result<Ideal> {
        for g in &gens {
            if !g.ring().same(ring) {
                return Err(Error::Structural(format!("generator {g} is not in the ambient ring")));
            }
        }
        Ok(Ideal {
            ring: ring.clone(),
            gens: gens.into_iter().filter(|g| !g.is_zero()).collect(),
        })
    }

    pub fn zero(ring: &Arc<PolyRing>) -> Ideal {
        Ideal {
            ring: ring.clone(),
            gens: Vec::new(),
        }
    }

    pub fn unit(ring: &Arc<PolyRing>) -> Ideal {
        Ideal {
            ring: ring.clone(),
            gens: vec![Polynomial::one(ring)],
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// `I + J`.
    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(&self.ring, gens)
    }

    /// `I * J` (products of generators).
    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.try_mul(b)?);
            }
        }
        Ideal::new(&self.ring, gens)
    }

    /// Moves the ideal into another ring by variable names.
    pub fn remap(&self, ring: &Arc<PolyRing>) -> Result<Ideal> {
        let gens = self.gens.iter().map(|g| g.remap(ring)).collect::<Result<_>>()?;
        Ideal::new(ring, gens)
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        if self.gens.is_empty() {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

/// A reduced Gröbner basis, sorted by increasing leading monomial.
#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerBasis {
    ring: Arc<PolyRing>,
    elements: Vec<Polynomial>,
}

impl GroebnerBasis {
    /// Accepts `elements` as a basis after checking that they form a reduced
    /// Gröbner basis of the ideal they generate.
    pub fn from_elements(ring: &Arc<PolyRing>, elements: Vec<Polynomial>) -> Result<GroebnerBasis> {
        let ideal = Ideal::new(ring, elements.clone())?;
        let gb = groebner(&ideal)?;
        if gb.elements != elements {
            return Err(Error::Domain("the given polynomials are not a reduced Gröbner basis".into()));
        }
        Ok(gb)
    }
}

pub(crate) fn to_mvec(p: &Polynomial) -> MVec {
    MVec {
        terms: p
            .terms()
            .iter()
            .map(|(m, c)| Term {
                pos: 0,
                mono: m.clone(),
                coeff: c.clone(),
            })
            .collect(),
    }
}

pub(crate) fn from_mvec(ring: &Arc<PolyRing>, v: MVec) -> Polynomial {
    Polynomial::from_sorted_terms(ring, v.terms.into_iter().map(|t| (t.mono, t.coeff)).collect())
}

impl GroebnerBasis {
    /// The ring carrying the basis order.
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn order(&self) -> &MonomialOrder {
        self.ring.order()
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn is_reduced(&self) -> bool {
        true
    }

    pub fn is_unit(&self) -> bool {
        self.elements.len() == 1 && self.elements[0].is_constant()
    }

    pub fn is_zero(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn to_ideal(&self) -> Ideal {
        Ideal {
            ring: self.ring.clone(),
            gens: self.elements.clone(),
        }
    }

    /// Remainder of `f` on division by the basis.
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        if !f.ring().same(&self.ring) {
            if f.ring().vars() == self.ring.vars() && f.ring().field() == self.ring.field() {
                return Err(Error::Structural(format!(
                    "polynomial uses order {} but the basis was computed for {}",
                    f.ring().order(),
                    self.ring.order()
                )));
            }
            return Err(Error::Structural("polynomial and basis live in different rings".into()));
        }
        let engine = Engine {
            order: self.ring.order(),
            budget: 0,
        };
        let basis: Vec<MVec> = self.elements.iter().map(to_mvec).collect();
        Ok(from_mvec(&self.ring, engine.reduce(&to_mvec(f), &basis, u32::MAX)))
    }

    /// Membership test; `f` may use any order on the same variables.
    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        let f = if f.ring().same(&self.ring) {
            f.clone()
        } else {
            f.with_ring(&self.ring)?
        };
        Ok(self.normal_form(&f)?.is_zero())
    }
}

impl fmt::Display for GroebnerBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_ideal())
    }
}

/// Reduced Gröbner basis of `ideal` under `order`.
pub fn buchberger(ideal: &Ideal, order: &MonomialOrder) -> Result<GroebnerBasis> {
    buchberger_with_budget(ideal, order, DEFAULT_SPAIR_BUDGET)
}

pub fn buchberger_with_budget(ideal: &Ideal, order: &MonomialOrder, budget: usize) -> Result<GroebnerBasis> {
    let ring = if ideal.ring.order() == order {
        ideal.ring.clone()
    } else {
        ideal.ring.with_order(order.clone())
    };
    let gens: Vec<MVec> = ideal
        .gens
        .iter()
        .map(|g| g.with_ring(&ring).map(|p| to_mvec(&p)))
        .collect::<Result<_>>()?;
    let engine = Engine { order, budget };
    let basis = engine.groebner(gens, true)?;
    Ok(GroebnerBasis {
        elements: basis.into_iter().map(|v| from_mvec(&ring, v)).collect(),
        ring,
    })
}

/// Gröbner basis in the ideal's own ring order.
pub fn groebner(ideal: &Ideal) -> Result<GroebnerBasis> {
    buchberger(ideal, ideal.ring.order())
}

pub fn normal_form(f: &Polynomial, gb: &GroebnerBasis) -> Result<Polynomial> {
    gb.normal_form(f)
}

pub fn ideal_member(f: &Polynomial, ideal: &Ideal) -> Result<bool> {
    if f.is_zero() {
        return Ok(true);
    }
    if !f.ring().same(&ideal.ring) {
        return Err(Error::Structural("polynomial and ideal live in different rings".into()));
    }
    groebner(ideal)?.contains(f)
}

/// Whether two ideals coincide (compared as reduced bases).
pub fn ideal_equal(a: &Ideal, b: &Ideal) -> Result<bool> {
    Ok(groebner(a)?.elements == groebner(b)?.elements)
}

/// Ring with one fresh variable prepended and a block order making it
/// dominant; returns the ring and the variable name.
fn with_eliminated_var(ring: &Arc<PolyRing>, stem: &str) -> Result<(Arc<PolyRing>, String)> {
    let name = ring.fresh_name(stem);
    let order = MonomialOrder::block(1, MonomialOrder::DegRevLex, ring.order().clone());
    Ok((ring.prepend(&[&name], order)?, name))
}

/// Drops variable 0 from polynomials of the extended ring, keeping only
/// those not involving it.
fn contract(ext: &[Polynomial], ring: &Arc<PolyRing>) -> Result<Vec<Polynomial>> {
    ext.iter().filter(|g| !g.involves(0)).map(|g| g.remap(ring)).collect()
}

/// `I ∩ J` via `t I + (1 - t) J` and elimination of `t`.
pub fn ideal_intersection(a: &Ideal, b: &Ideal) -> Result<Ideal> {
    if !a.ring.same(&b.ring) {
        return Err(Error::Structural("ideals live in different rings".into()));
    }
    let ring = &a.ring;
    if a.is_zero() || b.is_zero() {
        return Ok(Ideal::zero(ring));
    }
    let (ext, _) = with_eliminated_var(ring, "t")?;
    let t = Polynomial::var(&ext, 0);
    let one_minus_t = &Polynomial::one(&ext) - &t;
    let mut gens = Vec::new();
    for g in &a.gens {
        gens.push(&t * &g.remap(&ext)?);
    }
    for g in &b.gens {
        gens.push(&one_minus_t * &g.remap(&ext)?);
    }
    let gb = groebner(&Ideal::new(&ext, gens)?)?;
    Ideal::new(ring, contract(gb.elements(), ring)?)
}

/// `(I : J)`; fails when `J` is the zero ideal.
pub fn ideal_quotient(a: &Ideal, b: &Ideal) -> Result<Ideal> {
    if !a.ring.same(&b.ring) {
        return Err(Error::Structural("ideals live in different rings".into()));
    }
    if b.is_zero() {
        return Err(Error::Domain(
            "quotient by the zero ideal (the result would be the unit ideal)".into(),
        ));
    }
    let ring = &a.ring;
    let mut acc: Option<Ideal> = None;
    for h in &b.gens {
        let inter = ideal_intersection(a, &Ideal::new(ring, vec![h.clone()])?)?;
        let gens = inter.gens.iter().map(|g| g.div_exact(h)).collect::<Result<Vec<_>>>()?;
        let q = Ideal::new(ring, gens)?;
        acc = Some(match acc {
            None => q,
            Some(prev) => ideal_intersection(&prev, &q)?,
        });
    }
    let result = acc.unwrap();
    Ok(groebner(&result)?.to_ideal())
}

/// `I ∩ k[remaining variables]`, returned in the original ring.
pub fn eliminate(ideal: &Ideal, drop: &[&str]) -> Result<Ideal> {
    let ring = &ideal.ring;
    let mut idx = Vec::new();
    for v in drop {
        idx.push(
            ring.var_index(v)
                .ok_or_else(|| Error::Structural(format!("`{v}` is not a variable of the ring")))?,
        );
    }
    if idx.is_empty() {
        return Ok(groebner(ideal)?.to_ideal());
    }
    let mut vars: Vec<&str> = drop.to_vec();
    vars.extend(ring.vars().iter().filter(|v| !drop.contains(&v.as_str())).map(String::as_str));
    let inner = match ring.order() {
        MonomialOrder::Lex => MonomialOrder::Lex,
        _ => MonomialOrder::DegRevLex,
    };
    let order = MonomialOrder::block(drop.len(), MonomialOrder::DegRevLex, inner);
    let ext = PolyRing::new(&vars, ring.field().clone(), order)?;
    let gb = groebner(&ideal.remap(&ext)?)?;
    let gens = gb
        .elements()
        .iter()
        .filter(|g| (0..drop.len()).all(|i| !g.involves(i)))
        .map(|g| g.remap(ring))
        .collect::<Result<Vec<_>>>()?;
    Ok(groebner(&Ideal::new(ring, gens)?)?.to_ideal())
}

/// `(I : f^∞)`.
pub fn saturate(ideal: &Ideal, f: &Polynomial) -> Result<Ideal> {
    if f.is_zero() {
        return Err(Error::Domain("saturation by the zero polynomial".into()));
    }
    let ring = &ideal.ring;
    let (ext, _) = with_eliminated_var(ring, "w")?;
    let w = Polynomial::var(&ext, 0);
    let mut gens: Vec<Polynomial> = ideal.gens.iter().map(|g| g.remap(&ext)).collect::<Result<_>>()?;
    gens.push(&Polynomial::one(&ext) - &(&w * &f.remap(&ext)?));
    let gb = groebner(&Ideal::new(&ext, gens)?)?;
    Ok(groebner(&Ideal::new(ring, contract(gb.elements(), ring)?)?)?.to_ideal())
}

/// Whether `f` lies in the radical of `I`.
pub fn radical_member(f: &Polynomial, ideal: &Ideal) -> Result<bool> {
    let ring = &ideal.ring;
    let (ext, _) = with_eliminated_var(ring, "w")?;
    let ext = ext.with_order(MonomialOrder::DegRevLex);
    let w = Polynomial::var(&ext, 0);
    let mut gens: Vec<Polynomial> = ideal.gens.iter().map(|g| g.remap(&ext)).collect::<Result<_>>()?;
    gens.push(&Polynomial::one(&ext) - &(&w * &f.remap(&ext)?));
    Ok(groebner(&Ideal::new(&ext, gens)?)?.is_unit())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, Field};

    fn ring(vars: &[&str], order: MonomialOrder) -> Arc<PolyRing> {
        PolyRing::new(vars, Field::Rational, order).unwrap()
    }

    fn ideal(r: &Arc<PolyRing>, gens: &[&str]) -> Ideal {
        Ideal::new(r, gens.iter().map(|g| parse_polynomial(g, r).unwrap()).collect()).unwrap()
    }

    fn p(r: &Arc<PolyRing>, s: &str) -> Polynomial {
        parse_polynomial(s, r).unwrap()
    }

    #[test]
    fn basis_of_principal_ideal() {
        let r = ring(&["x", "y"], MonomialOrder::Lex);
        let gb = groebner(&ideal(&r, &["x"])).unwrap();
        assert_eq!(gb.elements(), &[p(&r, "x")]);
    }

    #[test]
    fn two_generator_lex_basis() {
        let r = ring(&["x", "y"], MonomialOrder::Lex);
        let gb = groebner(&ideal(&r, &["x^2+y^2", "x*y"])).unwrap();
        let mut got: Vec<String> = gb.elements().iter().map(|g| g.to_string()).collect();
        got.sort();
        assert_eq!(got, vec!["x*y", "x^2 + y^2", "y^3"]);
        assert!(gb.normal_form(&p(&r, "x^3")).unwrap().is_zero());
        assert_eq!(gb.normal_form(&p(&r, "y")).unwrap(), p(&r, "y"));
    }

    #[test]
    fn normal_form_rejects_other_orders() {
        let r = ring(&["x", "y"], MonomialOrder::Lex);
        let gb = groebner(&ideal(&r, &["x"])).unwrap();
        let other = r.with_order(MonomialOrder::DegRevLex);
        assert!(matches!(gb.normal_form(&p(&other, "x")), Err(Error::Structural(_))));
    }

    #[test]
    fn membership() {
        let r = ring(&["x", "y"], MonomialOrder::DegRevLex);
        assert!(ideal_member(&p(&r, "x^2"), &ideal(&r, &["x"])).unwrap());
        assert!(ideal_member(&p(&r, "x^3"), &ideal(&r, &["x^2+y^2", "x*y"])).unwrap());
        assert!(!ideal_member(&p(&r, "1"), &ideal(&r, &["x", "y"])).unwrap());
    }

    #[test]
    fn twisted_cubic() {
        let r = ring(&["x", "y", "z"], MonomialOrder::Lex);
        let i = ideal(&r, &["y - x^2", "z - x^3"]);
        let gb = groebner(&i).unwrap();
        assert!(gb.contains(&p(&r, "y^3 - z^2")).unwrap());
        let e = eliminate(&i, &["x"]).unwrap();
        assert!(ideal_equal(&e, &ideal(&r, &["y^3 - z^2"])).unwrap());
        assert_eq!(eliminate(&i, &[]).unwrap(), gb.to_ideal());
        let lin = ideal(&r, &["x - 1"]);
        assert!(eliminate(&lin, &["x"]).unwrap().is_zero());
    }

    #[test]
    fn intersections() {
        let r = ring(&["x", "y"], MonomialOrder::DegRevLex);
        let i = ideal_intersection(&ideal(&r, &["x"]), &ideal(&r, &["y"])).unwrap();
        assert!(ideal_equal(&i, &ideal(&r, &["x*y"])).unwrap());
        let j = ideal_intersection(&ideal(&r, &["x"]), &ideal(&r, &["x"])).unwrap();
        assert!(ideal_equal(&j, &ideal(&r, &["x"])).unwrap());
        let k = ideal_intersection(&ideal(&r, &["x"]), &Ideal::unit(&r)).unwrap();
        assert!(ideal_equal(&k, &ideal(&r, &["x"])).unwrap());
    }

    #[test]
    fn quotients() {
        let r = ring(&["x", "y", "Y"], MonomialOrder::DegRevLex);
        let q = ideal_quotient(&ideal(&r, &["x*y", "y^2"]), &ideal(&r, &["y"])).unwrap();
        assert!(ideal_equal(&q, &ideal(&r, &["x", "y"])).unwrap());
        let i = ideal(&r, &["x^2 - y", "x*Y"]);
        assert!(ideal_equal(&ideal_quotient(&i, &Ideal::unit(&r)).unwrap(), &i).unwrap());
        let s = ideal_quotient(&ideal(&r, &["Y^2"]), &ideal(&r, &["Y^2"])).unwrap();
        assert!(groebner(&s).unwrap().is_unit());
        assert!(matches!(ideal_quotient(&i, &Ideal::zero(&r)), Err(Error::Domain(_))));
    }

    #[test]
    fn saturations() {
        let r = ring(&["x", "y"], MonomialOrder::DegRevLex);
        let x = p(&r, "x");
        assert!(ideal_equal(&saturate(&ideal(&r, &["x^2*y"]), &x).unwrap(), &ideal(&r, &["y"])).unwrap());
        assert!(groebner(&saturate(&ideal(&r, &["x"]), &x).unwrap()).unwrap().is_unit());
        assert!(ideal_equal(&saturate(&ideal(&r, &["y"]), &x).unwrap(), &ideal(&r, &["y"])).unwrap());
        assert!(saturate(&ideal(&r, &["y"]), &Polynomial::zero(&r)).is_err());
    }

    #[test]
    fn radicals() {
        let r = ring(&["x", "y"], MonomialOrder::DegRevLex);
        let i = ideal(&r, &["x^2"]);
        assert!(radical_member(&p(&r, "x"), &i).unwrap());
        assert!(!radical_member(&p(&r, "y"), &i).unwrap());
    }

    #[test]
    fn spair_budget_is_reported() {
        let r = ring(&["x", "y", "z"], MonomialOrder::Lex);
        let i = ideal(&r, &["x^3 - y*z + 1", "y^3 - x*z^2", "z^3 - x^2*y + 2"]);
        assert!(matches!(
            buchberger_with_budget(&i, &MonomialOrder::Lex, 1),
            Err(Error::Resource(_))
        ));
    }
}
