use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::field::{Coeff, Field};
use super::monomial::{Monomial, MonomialOrder};
use crate::error::{Error, Result};

/// An ordered list of variables over a field, together with the monomial
/// order used for canonical term ordering.
#[derive(Debug, PartialEq, Eq)]
pub struct PolyRing {
    vars: Vec<String>,
    field: Field,
    order: MonomialOrder,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl PolyRing {
    pub fn new<S: AsRef<str>>(vars: &[S], field: Field, order: MonomialOrder) -> Result<Arc<PolyRing>> {
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            if !is_identifier(v) || v == "O" {
                return Err(Error::Structural(format!("`{v}` is not a valid variable name")));
            }
            if vars[..i].contains(v) {
                return Err(Error::Structural(format!("variable `{v}` declared twice")));
            }
            if field.generator_name() == Some(v.as_str()) {
                return Err(Error::Structural(format!("variable `{v}` clashes with the field generator")));
            }
        }
        Ok(Arc::new(PolyRing { vars, field, order }))
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn with_order(&self, order: MonomialOrder) -> Arc<PolyRing> {
        Arc::new(PolyRing {
            vars: self.vars.clone(),
            field: self.field.clone(),
            order,
        })
    }

    pub fn with_field(&self, field: Field) -> Result<Arc<PolyRing>> {
        PolyRing::new(&self.vars, field, self.order.clone())
    }

    /// A new ring with `extra` variables placed before the existing ones.
    pub fn prepend(&self, extra: &[&str], order: MonomialOrder) -> Result<Arc<PolyRing>> {
        let mut vars: Vec<String> = extra.iter().map(|s| s.to_string()).collect();
        vars.extend(self.vars.iter().cloned());
        PolyRing::new(&vars, self.field.clone(), order)
    }

    /// A new ring with `extra` variables placed after the existing ones.
    pub fn append(&self, extra: &[String], order: MonomialOrder) -> Result<Arc<PolyRing>> {
        let mut vars = self.vars.clone();
        vars.extend(extra.iter().cloned());
        PolyRing::new(&vars, self.field.clone(), order)
    }

    /// A variable name not yet used in this ring, derived from `stem`.
    pub fn fresh_name(&self, stem: &str) -> String {
        if self.var_index(stem).is_none() && self.field.generator_name() != Some(stem) {
            return stem.to_string();
        }
        (1..)
            .map(|i| format!("{stem}_{i}"))
            .find(|n| self.var_index(n).is_none() && self.field.generator_name() != Some(n.as_str()))
            .unwrap()
    }

    pub fn same(self: &Arc<Self>, other: &Arc<PolyRing>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }
}

/// Sparse polynomial; terms are kept sorted in descending order under the
/// ring's monomial order, with no zero coefficients.
#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: Arc<PolyRing>,
    terms: Vec<(Monomial, Coeff)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same(&other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

fn ring_mismatch(a: &PolyRing, b: &PolyRing) -> Error {
    if a.field != b.field {
        Error::Structural(format!("coefficient fields differ: {} vs {}", a.field, b.field))
    } else if a.vars != b.vars {
        Error::Structural(format!("variable lists differ: [{}] vs [{}]", a.vars.join(", "), b.vars.join(", ")))
    } else {
        Error::Structural("monomial orders differ".into())
    }
}

impl Polynomial {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, ring.field.one())
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Coeff) -> Self {
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![(Monomial::one(ring.nvars()), c)]
        };
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn from_i64(ring: &Arc<PolyRing>, v: i64) -> Self {
        Self::constant(ring, ring.field.from_i64(v))
    }

    pub fn var(ring: &Arc<PolyRing>, index: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.nvars(), index, 1), ring.field.one())
    }

    pub fn var_named(ring: &Arc<PolyRing>, name: &str) -> Result<Self> {
        let i = ring
            .var_index(name)
            .ok_or_else(|| Error::Structural(format!("`{name}` is not a variable of the ring")))?;
        Ok(Self::var(ring, i))
    }

    pub fn monomial(ring: &Arc<PolyRing>, m: Monomial, c: Coeff) -> Self {
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        Polynomial { ring: ring.clone(), terms }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(ring: &Arc<PolyRing>, terms: impl IntoIterator<Item = (Monomial, Coeff)>) -> Self {
        let mut acc: HashMap<Monomial, Coeff> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), ring.nvars());
            match acc.get_mut(&m) {
                Some(e) => *e = e.add(&c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let order = &ring.order;
        terms.sort_unstable_by(|a, b| order.cmp(b.0.exponents(), a.0.exponents()));
        Polynomial { ring: ring.clone(), terms }
    }

    /// Univariate polynomial in variable `var` from dense coefficients
    /// (lowest degree first).
    pub fn from_dense(ring: &Arc<PolyRing>, var: usize, coeffs: &[Coeff]) -> Self {
        let n = ring.nvars();
        Self::from_terms(
            ring,
            coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (Monomial::var(n, var, e as u32), c.clone())),
        )
    }

    pub(crate) fn from_sorted_terms(ring: &Arc<PolyRing>, terms: Vec<(Monomial, Coeff)>) -> Self {
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        &self.ring.field
    }

    pub fn terms(&self) -> &[(Monomial, Coeff)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Coeff)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The constant coefficient.
    pub fn constant_term(&self) -> Coeff {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => self.ring.field.zero(),
        }
    }

    pub fn leading_term(&self) -> Option<&(Monomial, Coeff)> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<&Coeff> {
        self.terms.first().map(|t| &t.1)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.exponent(var)).max()
    }

    /// Least total degree of a term; `None` for zero.
    pub fn low_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).min()
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exponent(var) > 0)
    }

    pub fn coefficient(&self, m: &Monomial) -> Coeff {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.ring.field.zero())
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if self.ring.same(&other.ring) {
            Ok(())
        } else {
            Err(ring_mismatch(&self.ring, &other.ring))
        }
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let order = &self.ring.order;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match order.cmp(a[i].0.exponents(), b[j].0.exponents()) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { b[j].1.neg() } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { a[i].1.sub(&b[j].1) } else { a[i].1.add(&b[j].1) };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let c = if negate { t.1.neg() } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        Polynomial::from_sorted_terms(&self.ring, out)
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, true))
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.mul_filtered(other, |_| true))
    }

    /// Product keeping only terms of total degree `< bound`.
    pub fn mul_truncated(&self, other: &Polynomial, bound: u32) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.mul_filtered(other, |m| m.degree() < bound))
    }

    fn mul_filtered(&self, other: &Polynomial, keep: impl Fn(&Monomial) -> bool) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_term_filtered(m, c, keep);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_term_filtered(m, c, keep);
        }
        let mut acc: HashMap<Monomial, Coeff> = HashMap::with_capacity(self.terms.len() * 2);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                if !keep(&m) {
                    continue;
                }
                let p = ca.mul(cb);
                match acc.get_mut(&m) {
                    Some(e) => *e = e.add(&p),
                    None => {
                        acc.insert(m, p);
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let order = &self.ring.order;
        terms.sort_unstable_by(|a, b| order.cmp(b.0.exponents(), a.0.exponents()));
        Polynomial::from_sorted_terms(&self.ring, terms)
    }

    fn mul_term_filtered(&self, m: &Monomial, c: &Coeff, keep: impl Fn(&Monomial) -> bool) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let terms = self
            .terms
            .iter()
            .map(|(t, d)| (t.mul(m), d.mul(c)))
            .filter(|(t, d)| keep(t) && !d.is_zero())
            .collect();
        Polynomial::from_sorted_terms(&self.ring, terms)
    }

    /// Multiplication by the term `c * m`; the order is preserved.
    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> Polynomial {
        self.mul_term_filtered(m, c, |_| true)
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(m, d)| (m.clone(), d.mul(c))).collect();
        Polynomial::from_sorted_terms(&self.ring, terms)
    }

    pub fn neg(&self) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect();
        Polynomial::from_sorted_terms(&self.ring, terms)
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn pow_truncated(&self, mut e: u32, bound: u32) -> Polynomial {
        let mut base = self.truncate(bound);
        let mut acc = Polynomial::one(&self.ring).truncate(bound);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_truncated(&base, bound).unwrap();
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_truncated(&base, bound).unwrap();
            }
        }
        acc
    }

    /// Scales so the leading coefficient is 1 (zero stays zero).
    pub fn monic(&self) -> Polynomial {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.inv().unwrap()),
        }
    }

    /// Drops all terms of total degree `>= bound`.
    pub fn truncate(&self, bound: u32) -> Polynomial {
        let terms = self.terms.iter().filter(|(m, _)| m.degree() < bound).cloned().collect();
        Polynomial::from_sorted_terms(&self.ring, terms)
    }

    /// Keeps terms satisfying a predicate.
    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> Polynomial {
        let terms = self.terms.iter().filter(|(m, _)| keep(m)).cloned().collect();
        Polynomial::from_sorted_terms(&self.ring, terms)
    }

    /// Coefficient of `var^power`, as a polynomial not involving `var`.
    pub fn coefficient_of(&self, var: usize, power: u32) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponent(var) == power)
            .map(|(m, c)| {
                let mut m = m.clone();
                m.set(var, 0);
                (m, c.clone())
            })
            .collect();
        Polynomial::from_sorted_terms(&self.ring, terms)
    }

    /// Multiplies by `var^power` (negative powers must divide exactly).
    pub fn shift(&self, var: usize, power: i64) -> Result<Polynomial> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let e = m.exponent(var) as i64 + power;
            if e < 0 {
                return Err(Error::Divisibility(format!(
                    "{} is not divisible by {}^{}",
                    self,
                    self.ring.vars[var],
                    -power
                )));
            }
            let mut m = m.clone();
            m.set(var, e as u32);
            terms.push((m, c.clone()));
        }
        Ok(Polynomial::from_terms(&self.ring, terms))
    }

    pub fn partial_derivative(&self, var: usize) -> Result<Polynomial> {
        if var >= self.ring.nvars() {
            return Err(Error::Structural(format!("variable index {var} out of range")));
        }
        let field = &self.ring.field;
        let terms = self.terms.iter().filter(|(m, _)| m.exponent(var) > 0).filter_map(|(m, c)| {
            let e = m.exponent(var);
            let c = c.mul(&field.from_i64(e as i64));
            if c.is_zero() {
                return None;
            }
            let mut m = m.clone();
            m.set(var, e - 1);
            Some((m, c))
        });
        Ok(Polynomial::from_terms(&self.ring, terms))
    }

    pub fn partial_derivative_named(&self, var: &str) -> Result<Polynomial> {
        let i = self
            .ring
            .var_index(var)
            .ok_or_else(|| Error::Structural(format!("`{var}` is not a variable of the ring")))?;
        self.partial_derivative(i)
    }

    /// Substitutes polynomials (in the same ring) for some variables;
    /// unassigned variables are kept.
    pub fn substitute(&self, assignment: &[(usize, Polynomial)]) -> Result<Polynomial> {
        let n = self.ring.nvars();
        let mut images: Vec<Option<&Polynomial>> = vec![None; n];
        for (v, p) in assignment {
            if *v >= n {
                return Err(Error::Structural(format!("variable index {v} out of range")));
            }
            self.check_ring(p)?;
            images[*v] = Some(p);
        }
        let full: Vec<Polynomial> = (0..n)
            .map(|i| images[i].cloned().unwrap_or_else(|| Polynomial::var(&self.ring, i)))
            .collect();
        self.compose(&self.ring, &full)
    }

    /// Substitutes `images[i]` (living in `target`) for the `i`-th variable.
    /// Coefficients are embedded into the target field when necessary.
    pub fn compose(&self, target: &Arc<PolyRing>, images: &[Polynomial]) -> Result<Polynomial> {
        self.compose_impl(target, images, None)
    }

    /// Like [`Polynomial::compose`] but discards terms of total degree
    /// `>= bound` along the way.
    pub fn compose_truncated(&self, target: &Arc<PolyRing>, images: &[Polynomial], bound: u32) -> Result<Polynomial> {
        self.compose_impl(target, images, Some(bound))
    }

    fn compose_impl(&self, target: &Arc<PolyRing>, images: &[Polynomial], bound: Option<u32>) -> Result<Polynomial> {
        if images.len() != self.ring.nvars() {
            return Err(Error::Shape(format!(
                "expected {} images, got {}",
                self.ring.nvars(),
                images.len()
            )));
        }
        for p in images {
            if !p.ring.same(target) {
                return Err(ring_mismatch(&p.ring, target));
            }
        }
        if !target.field.contains(&self.ring.field) {
            return Err(Error::Structural(format!(
                "cannot map coefficients of {} into {}",
                self.ring.field, target.field
            )));
        }
        let mul = |a: &Polynomial, b: &Polynomial| match bound {
            Some(k) => a.mul_truncated(b, k).unwrap(),
            None => a * b,
        };
        let mut cache: Vec<Vec<Polynomial>> = vec![Vec::new(); images.len()];
        let mut acc: HashMap<Monomial, Coeff> = HashMap::new();
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target, target.field.embed(c)?);
            if let Some(k) = bound {
                term = term.truncate(k);
            }
            for (v, &e) in m.exponents().iter().enumerate() {
                if e == 0 || term.is_zero() {
                    continue;
                }
                let powers = &mut cache[v];
                if powers.is_empty() {
                    powers.push(Polynomial::one(target));
                }
                while powers.len() <= e as usize {
                    let next = mul(powers.last().unwrap(), &images[v]);
                    powers.push(next);
                }
                term = mul(&term, &powers[e as usize]);
            }
            for (tm, tc) in term.terms {
                match acc.get_mut(&tm) {
                    Some(x) => *x = x.add(&tc),
                    None => {
                        acc.insert(tm, tc);
                    }
                }
            }
        }
        Ok(Polynomial::from_terms(target, acc))
    }

    /// Moves the polynomial into `target`, matching variables by name and
    /// embedding coefficients. Fails if a used variable is missing.
    pub fn remap(&self, target: &Arc<PolyRing>) -> Result<Polynomial> {
        if self.ring.same(target) {
            return Ok(self.clone());
        }
        let n = target.nvars();
        let mut map = Vec::with_capacity(self.ring.nvars());
        for (i, v) in self.ring.vars.iter().enumerate() {
            let j = target.var_index(v);
            if j.is_none() && self.involves(i) {
                return Err(Error::Structural(format!("variable `{v}` is not in the target ring")));
            }
            map.push(j);
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut e = vec![0u32; n];
            for (i, &x) in m.exponents().iter().enumerate() {
                if let Some(j) = map[i] {
                    e[j] = x;
                }
            }
            terms.push((Monomial::from_exponents(&e), target.field.embed(c)?));
        }
        Ok(Polynomial::from_terms(target, terms))
    }

    /// Evaluates at a point with coordinates in a field containing the
    /// coefficient field.
    pub fn evaluate(&self, point: &[Coeff]) -> Result<Coeff> {
        if point.len() != self.ring.nvars() {
            return Err(Error::Shape(format!(
                "point has {} coordinates, ring has {} variables",
                point.len(),
                self.ring.nvars()
            )));
        }
        let field = match point.first() {
            Some(c) => c.field_of(),
            None => self.ring.field.clone(),
        };
        if point.iter().any(|c| c.field_of() != field) {
            return Err(Error::Structural("point coordinates lie in different fields".into()));
        }
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut t = field.embed(c)?;
            for (v, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = t.mul(&point[v].pow(e as u64));
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Division with remainder by a single polynomial (multivariate division
    /// algorithm under the ring order).
    pub fn divrem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        self.check_ring(divisor)?;
        let (lm, lc) = divisor
            .leading_term()
            .ok_or_else(|| Error::Domain("division by the zero polynomial".into()))?;
        let lc_inv = lc.inv().unwrap();
        let mut q = Vec::new();
        let mut r = Vec::new();
        let mut p = self.clone();
        while let Some((m, c)) = p.terms.first().cloned() {
            match m.try_div(lm) {
                Some(qm) => {
                    let qc = c.mul(&lc_inv);
                    p = p.merge(&divisor.mul_term(&qm, &qc), true);
                    q.push((qm, qc));
                }
                None => {
                    r.push((m, c));
                    p.terms.remove(0);
                }
            }
        }
        Ok((
            Polynomial::from_sorted_terms(&self.ring, q),
            Polynomial::from_sorted_terms(&self.ring, r),
        ))
    }

    /// Exact quotient; fails with a divisibility error otherwise.
    pub fn div_exact(&self, divisor: &Polynomial) -> Result<Polynomial> {
        let (q, r) = self.divrem(divisor)?;
        if !r.is_zero() {
            return Err(Error::Divisibility(format!("{self} is not divisible by {divisor}")));
        }
        Ok(q)
    }

    /// Re-sorts the terms for a ring differing only in its order.
    pub fn with_ring(&self, ring: &Arc<PolyRing>) -> Result<Polynomial> {
        if ring.vars != self.ring.vars || ring.field != self.ring.field {
            return Err(ring_mismatch(&self.ring, ring));
        }
        Ok(Polynomial::from_terms(ring, self.terms.iter().cloned()))
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        self.try_add(o).expect("polynomial ring mismatch")
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        self.try_sub(o).expect("polynomial ring mismatch")
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        self.try_mul(o).expect("polynomial ring mismatch")
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        super::text::write_terms(f, &self.ring, self.terms.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::text::parse_polynomial;

    fn ring(vars: &[&str], field: Field) -> Arc<PolyRing> {
        PolyRing::new(vars, field, MonomialOrder::DegRevLex).unwrap()
    }

    fn p(r: &Arc<PolyRing>, s: &str) -> Polynomial {
        parse_polynomial(s, r).unwrap()
    }

    #[test]
    fn cancellation_and_difference_of_squares() {
        let r = ring(&["x", "y"], Field::Rational);
        assert_eq!(&p(&r, "x+1") + &p(&r, "x-1"), p(&r, "2*x"));
        assert_eq!(&p(&r, "x+y") * &p(&r, "x-y"), p(&r, "x^2-y^2"));
    }

    #[test]
    fn prime_field_product() {
        let r = ring(&["x"], Field::Prime(5));
        assert_eq!(&p(&r, "x+2") * &p(&r, "x+3"), p(&r, "x^2+1"));
    }

    #[test]
    fn mismatched_rings_rejected() {
        let r1 = ring(&["x", "y"], Field::Rational);
        let r2 = ring(&["y", "x"], Field::Rational);
        let r3 = ring(&["x", "y"], Field::Prime(7));
        assert!(matches!(p(&r1, "x").try_add(&p(&r2, "x")), Err(Error::Structural(_))));
        assert!(matches!(p(&r1, "x").try_mul(&p(&r3, "x")), Err(Error::Structural(_))));
    }

    #[test]
    fn derivatives() {
        let r = ring(&["x", "Y1", "Y2", "Y"], Field::Rational);
        assert_eq!(p(&r, "Y1*Y2 - x^2").partial_derivative_named("Y1").unwrap(), p(&r, "Y2"));
        assert!(p(&r, "7").partial_derivative_named("Y").unwrap().is_zero());
        assert_eq!(p(&r, "Y^3+3*Y").partial_derivative_named("Y").unwrap(), p(&r, "3*Y^2+3"));
        assert!(p(&r, "x").partial_derivative_named("Q").is_err());
    }

    #[test]
    fn substitution() {
        let r = ring(&["x", "Y", "Y1", "Y2"], Field::Rational);
        let f = p(&r, "Y^2 - x");
        assert_eq!(f.substitute(&[(1, p(&r, "x"))]).unwrap(), p(&r, "x^2 - x"));
        assert_eq!(f.substitute(&[]).unwrap(), f);
        let node = p(&r, "Y1*Y2 - x^2");
        let s = node.substitute(&[(2, p(&r, "x + x^2")), (3, p(&r, "x - x^2 + x^3"))]).unwrap();
        assert_eq!(s, p(&r, "x^5"));
        assert!(s.coefficient(&Monomial::from_exponents(&[2, 0, 0, 0])).is_zero());
    }

    #[test]
    fn exact_division() {
        let r = ring(&["x", "y"], Field::Rational);
        assert_eq!(p(&r, "x^2*y - y^3").div_exact(&p(&r, "x - y")).unwrap(), p(&r, "x*y + y^2"));
        assert!(p(&r, "x^2 + 1").div_exact(&p(&r, "x")).is_err());
    }

    #[test]
    fn remap_embeds_between_rings() {
        let small = ring(&["x"], Field::Rational);
        let big = ring(&["t", "x"], Field::Rational);
        let f = p(&small, "x^2 + 1/3");
        assert_eq!(f.remap(&big).unwrap(), p(&big, "x^2 + 1/3"));
        assert!(p(&big, "t").remap(&small).is_err());
    }
}
