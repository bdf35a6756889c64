//! Buchberger's algorithm on sparse vectors of a free module.
//!
//! Terms are ordered position-over-term with the lowest position dominant;
//! ideals are handled as rank-one modules.

use std::cmp::Ordering;
use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::poly::{Coeff, Monomial, MonomialOrder};

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Term {
    pub pos: u32,
    pub mono: Monomial,
    pub coeff: Coeff,
}

/// A module element with terms sorted in descending order.
#[derive(Clone, Debug, PartialEq, Default)]
pub(crate) struct MVec {
    pub terms: Vec<Term>,
}

impl MVec {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> &Term {
        &self.terms[0]
    }
}

pub(crate) struct Engine<'a> {
    pub order: &'a MonomialOrder,
    pub budget: usize,
}

impl Engine<'_> {
    pub fn cmp_terms(&self, a: &Term, b: &Term) -> Ordering {
        b.pos
            .cmp(&a.pos)
            .then_with(|| self.order.cmp(a.mono.exponents(), b.mono.exponents()))
    }

    pub fn sort(&self, v: &mut MVec) {
        v.terms.sort_by(|a, b| self.cmp_terms(b, a));
    }

    /// `f - c * m * g`, merging sorted term lists.
    fn sub_scaled(&self, f: &[Term], c: &Coeff, m: &Monomial, g: &[Term]) -> Vec<Term> {
        let mut out = Vec::with_capacity(f.len() + g.len());
        let (mut i, mut j) = (0, 0);
        let scaled = |t: &Term| Term {
            pos: t.pos,
            mono: t.mono.mul(m),
            coeff: t.coeff.mul(c).neg(),
        };
        while i < f.len() && j < g.len() {
            let gt = scaled(&g[j]);
            match self.cmp_terms(&f[i], &gt) {
                Ordering::Greater => {
                    out.push(f[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(gt);
                    j += 1;
                }
                Ordering::Equal => {
                    let s = f[i].coeff.add(&gt.coeff);
                    if !s.is_zero() {
                        out.push(Term {
                            pos: gt.pos,
                            mono: gt.mono,
                            coeff: s,
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&f[i..]);
        out.extend(g[j..].iter().map(scaled));
        out
    }

    pub fn monic(&self, v: MVec) -> MVec {
        if v.is_zero() || v.lead().coeff.is_one() {
            return v;
        }
        let inv = v.lead().coeff.inv().unwrap();
        MVec {
            terms: v
                .terms
                .into_iter()
                .map(|t| Term {
                    coeff: t.coeff.mul(&inv),
                    ..t
                })
                .collect(),
        }
    }

    fn find_reducer<'b>(&self, t: &Term, basis: &'b [MVec]) -> Option<&'b MVec> {
        basis
            .iter()
            .find(|g| g.lead().pos == t.pos && g.lead().mono.divides(&t.mono))
    }

    /// Full normal form with respect to `basis`. Terms at positions
    /// `>= pos_limit` are never rewritten.
    pub fn reduce(&self, f: &MVec, basis: &[MVec], pos_limit: u32) -> MVec {
        let mut rem = Vec::new();
        let mut p = f.terms.clone();
        let mut i = 0;
        while i < p.len() {
            let t = &p[i];
            if t.pos >= pos_limit {
                rem.extend_from_slice(&p[i..]);
                break;
            }
            match self.find_reducer(t, basis) {
                Some(g) => {
                    let lt = g.lead();
                    let m = lt.mono.quotient_of(&t.mono);
                    let c = t.coeff.checked_div(&lt.coeff).unwrap();
                    p = self.sub_scaled(&p[i..], &c, &m, &g.terms);
                    i = 0;
                }
                None => {
                    rem.push(p[i].clone());
                    i += 1;
                }
            }
        }
        MVec { terms: rem }
    }

    fn spoly(&self, f: &MVec, g: &MVec, lcm: &Monomial) -> MVec {
        let (a, b) = (f.lead(), g.lead());
        let mf = a.mono.quotient_of(lcm);
        let mg = b.mono.quotient_of(lcm);
        let cf = a.coeff.inv().unwrap();
        let cg = b.coeff.inv().unwrap();
        let left: Vec<Term> = f
            .terms
            .iter()
            .map(|t| Term {
                pos: t.pos,
                mono: t.mono.mul(&mf),
                coeff: t.coeff.mul(&cf),
            })
            .collect();
        MVec {
            terms: self.sub_scaled(&left, &cg, &mg, &g.terms),
        }
    }

    /// Reduced Gröbner basis of the submodule generated by `gens`, sorted in
    /// ascending order of leading terms.
    pub fn groebner(&self, gens: Vec<MVec>, rank_one: bool) -> Result<Vec<MVec>> {
        let mut basis: Vec<MVec> = Vec::new();
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        let mut pending: HashSet<(usize, usize)> = HashSet::new();

        let push = |basis: &mut Vec<MVec>, pairs: &mut Vec<(usize, usize)>, pending: &mut HashSet<(usize, usize)>, v: MVec| {
            let k = basis.len();
            for (i, g) in basis.iter().enumerate() {
                if g.lead().pos == v.lead().pos {
                    pairs.push((i, k));
                    pending.insert((i, k));
                }
            }
            basis.push(v);
        };

        for g in gens {
            let g = self.monic(self.reduce(&g, &basis, u32::MAX));
            if !g.is_zero() {
                push(&mut basis, &mut pairs, &mut pending, g);
            }
        }

        let mut processed = 0usize;
        while !pairs.is_empty() {
            // normal strategy: smallest lcm, ties by index
            let mut best = 0;
            let mut best_lcm = basis[pairs[0].0].lead().mono.lcm(&basis[pairs[0].1].lead().mono);
            for (idx, &(i, j)) in pairs.iter().enumerate().skip(1) {
                let l = basis[i].lead().mono.lcm(&basis[j].lead().mono);
                let ord = self.order.cmp(l.exponents(), best_lcm.exponents());
                let pos_ord = basis[i].lead().pos.cmp(&basis[pairs[best].0].lead().pos);
                let better = match pos_ord {
                    Ordering::Greater => true,
                    Ordering::Less => false,
                    Ordering::Equal => ord == Ordering::Less || (ord == Ordering::Equal && (i, j) < pairs[best]),
                };
                if better {
                    best = idx;
                    best_lcm = l;
                }
            }
            let (i, j) = pairs.swap_remove(best);
            pending.remove(&(i, j));
            let (li, lj) = (&basis[i].lead().mono, &basis[j].lead().mono);
            if rank_one && li.is_coprime(lj) {
                continue;
            }
            let lcm = best_lcm;
            let pos = basis[i].lead().pos;
            let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
            let chain = (0..basis.len()).any(|k| {
                k != i
                    && k != j
                    && basis[k].lead().pos == pos
                    && basis[k].lead().mono.divides(&lcm)
                    && !pending.contains(&key(i, k))
                    && !pending.contains(&key(j, k))
            });
            if chain {
                continue;
            }
            processed += 1;
            if processed > self.budget {
                return Err(Error::Resource(format!(
                    "S-pair budget of {} reductions exhausted (basis size {})",
                    self.budget,
                    basis.len()
                )));
            }
            let s = self.spoly(&basis[i], &basis[j], &lcm);
            let r = self.monic(self.reduce(&s, &basis, u32::MAX));
            if !r.is_zero() {
                push(&mut basis, &mut pairs, &mut pending, r);
            }
        }
        Ok(self.interreduce(basis))
    }

    fn interreduce(&self, basis: Vec<MVec>) -> Vec<MVec> {
        let mut keep: Vec<MVec> = Vec::new();
        for (i, g) in basis.iter().enumerate() {
            let redundant = basis.iter().enumerate().any(|(j, h)| {
                j != i
                    && h.lead().pos == g.lead().pos
                    && h.lead().mono.divides(&g.lead().mono)
                    && (h.lead().mono != g.lead().mono || j < i)
            });
            if !redundant {
                keep.push(g.clone());
            }
        }
        keep.sort_by(|a, b| self.cmp_terms(a.lead(), b.lead()));
        let mut out = Vec::with_capacity(keep.len());
        for i in 0..keep.len() {
            let others: Vec<MVec> = keep
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, g)| g.clone())
                .collect();
            let g = &keep[i];
            let tail = MVec {
                terms: g.terms[1..].to_vec(),
            };
            let mut r = self.reduce(&tail, &others, u32::MAX);
            r.terms.insert(0, g.lead().clone());
            out.push(self.monic(r));
        }
        out
    }
}
