//! Jacobian minors, the smoothing ideal and the search for desingularization
//! data along a morphism.

use std::sync::Arc;

use crate::algebra::{AlgebraPresentation, CompletionMorphism};
use crate::error::{Error, Result};
use crate::execution::Execution;
use crate::ideal::{groebner, ideal_quotient, Ideal};
use crate::matrix::{determinant, PolyMatrix};
use crate::poly::{Coeff, PolyRing, Polynomial};
use crate::series::{TruncatedSeries, Valuation};

/// Limits on the generator-subset search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub max_subset_size: usize,
    pub max_subsets: usize,
    pub execution: Execution,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_subset_size: 4,
            max_subsets: 500,
            execution: Execution::default(),
        }
    }
}

/// `(df_i/dY_j)` for the given ring variable indices.
pub fn jacobian(f: &[Polynomial], vars: &[usize]) -> Result<PolyMatrix> {
    f.iter()
        .map(|fi| vars.iter().map(|&v| fi.partial_derivative(v)).collect())
        .collect()
}

/// An `r x r` minor of an `r x n` matrix: the selected columns and the
/// determinant.
#[derive(Clone, Debug, PartialEq)]
pub struct Minor {
    pub columns: Vec<usize>,
    pub det: Polynomial,
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Maximal minors of an `r x n` matrix (`r <= n`), columns in lexicographic
/// order.
pub fn maximal_minors(m: &PolyMatrix, ring: &Arc<PolyRing>) -> Result<Vec<Minor>> {
    let r = m.len();
    let n = m.first().map_or(0, |row| row.len());
    if r > n {
        return Err(Error::Shape(format!("{r} equations but only {n} variables")));
    }
    combinations(n, r)
        .into_iter()
        .map(|cols| {
            let sub: PolyMatrix = m.iter().map(|row| cols.iter().map(|&j| row[j].clone()).collect()).collect();
            Ok(Minor {
                det: determinant(&sub, ring)?,
                columns: cols,
            })
        })
        .collect()
}

/// The ideal `Delta_f` of maximal minors of the Jacobian of `f` with
/// respect to `vars`.
pub fn minor_ideal(f: &[Polynomial], vars: &[usize], ring: &Arc<PolyRing>) -> Result<Ideal> {
    if f.len() > vars.len() {
        return Err(Error::Shape(format!(
            "{} equations but only {} variables",
            f.len(),
            vars.len()
        )));
    }
    let minors = maximal_minors(&jacobian(f, vars)?, ring)?;
    Ideal::new(ring, minors.into_iter().map(|m| m.det).collect())
}

fn algebra_indices(b: &AlgebraPresentation) -> Vec<usize> {
    (0..b.nalg()).map(|j| b.alg_index(j)).collect()
}

/// Generator subsets considered by the searches, size ascending then
/// lexicographic. `complete` is false when the limits cut the enumeration.
fn subsets(b: &AlgebraPresentation, opts: &SearchOptions) -> (Vec<Vec<usize>>, bool) {
    let top = b.gens().len().min(b.nalg());
    let mut out = Vec::new();
    let mut complete = top <= opts.max_subset_size;
    'outer: for k in 1..=top.min(opts.max_subset_size) {
        for s in combinations(b.gens().len(), k) {
            if out.len() == opts.max_subsets {
                complete = false;
                break 'outer;
            }
            out.push(s);
        }
    }
    (out, complete)
}

fn quotient_for(b: &AlgebraPresentation, subset: &[usize]) -> Result<Ideal> {
    let f: Vec<Polynomial> = subset.iter().map(|&i| b.gens()[i].clone()).collect();
    ideal_quotient(&Ideal::new(b.ring(), f)?, b.ideal())
}

/// `sum_f ((f):I) Delta_f + I`, as a reduced Groebner basis. The radical is
/// not taken.
pub fn smoothing_ideal(b: &AlgebraPresentation, opts: &SearchOptions) -> Result<Ideal> {
    let ring = b.ring();
    if b.ideal().is_zero() {
        return Ok(Ideal::unit(ring));
    }
    let (subs, complete) = subsets(b, opts);
    if !complete {
        return Err(Error::Resource(format!(
            "subset budget exhausted after processing {} generator subsets (size limit {}, count limit {})",
            subs.len(),
            opts.max_subset_size,
            opts.max_subsets
        )));
    }
    let vars = algebra_indices(b);
    let parts = opts.execution.try_map(&subs, |s| {
        let f: Vec<Polynomial> = s.iter().map(|&i| b.gens()[i].clone()).collect();
        let q = quotient_for(b, s)?;
        let delta = minor_ideal(&f, &vars, ring)?;
        q.product(&delta)
    })?;
    let mut total = b.ideal().clone();
    for p in &parts {
        total = total.sum(p)?;
    }
    Ok(groebner(&total)?.to_ideal())
}

/// Jacobian criterion at a rational point `(x, Y)`.
pub fn is_smooth_at_point(b: &AlgebraPresentation, point: &[Coeff], opts: &SearchOptions) -> Result<bool> {
    for g in b.gens() {
        if !g.evaluate(point)?.is_zero() {
            return Err(Error::Domain(format!("the point does not satisfy {g}")));
        }
    }
    let h = smoothing_ideal(b, opts)?;
    for g in h.gens() {
        if !g.evaluate(point)?.is_zero() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Desingularization data along a morphism: a subsystem `f`, a maximal
/// minor `M` of its Jacobian, `N` in `((f):I)` and `c = ord v(MN)`, with
/// `x^c = v(MN) z`.
#[derive(Clone, Debug, PartialEq)]
pub struct DesingData {
    /// Indices into the generator list of `I`.
    pub subset: Vec<usize>,
    /// Algebra-variable indices of the minor's columns.
    pub columns: Vec<usize>,
    pub minor: Polynomial,
    pub witness: Polynomial,
    pub c: u32,
    /// `d' = x^c`.
    pub dprime: Polynomial,
    pub z: TruncatedSeries,
}

impl DesingData {
    /// `P' = M N`.
    pub fn pprime(&self) -> Polynomial {
        &self.minor * &self.witness
    }
}

struct Candidate {
    columns: Vec<usize>,
    minor: Polynomial,
    witness: Polynomial,
    c: u32,
}

fn best_for_subset(
    b: &AlgebraPresentation,
    v: &CompletionMorphism,
    subset: &[usize],
    vars: &[usize],
) -> Result<Option<Candidate>> {
    let f: Vec<Polynomial> = subset.iter().map(|&i| b.gens()[i].clone()).collect();
    let quotient = quotient_for(b, subset)?;
    let witnesses: Vec<(Polynomial, u32)> = quotient
        .gens()
        .iter()
        .filter_map(|n| match v.evaluate(b, n).map(|s| s.order()) {
            Ok(Valuation::Finite(o)) => Some(Ok((n.clone(), o))),
            Ok(Valuation::AtLeast(_)) => None,
            Err(e) => Some(Err(e)),
        })
        .collect::<Result<_>>()?;
    if witnesses.is_empty() {
        return Ok(None);
    }
    let mut best: Option<Candidate> = None;
    for minor in maximal_minors(&jacobian(&f, vars)?, b.ring())? {
        let Valuation::Finite(om) = v.evaluate(b, &minor.det)?.order() else {
            continue;
        };
        for (n, on) in &witnesses {
            let c = om + on;
            if c < v.precision() && best.as_ref().is_none_or(|bc| c < bc.c) {
                best = Some(Candidate {
                    columns: minor.columns.clone(),
                    minor: minor.det.clone(),
                    witness: n.clone(),
                    c,
                });
            }
        }
    }
    Ok(best)
}

/// Searches for desingularization data with minimal `c`; ties go to the
/// first candidate in search order (subsets by size then lexicographically,
/// minor columns lexicographically, witnesses in Groebner basis order).
pub fn find_desing_data(
    b: &AlgebraPresentation,
    v: &CompletionMorphism,
    opts: &SearchOptions,
) -> Result<DesingData> {
    v.check_morphism(b)?;
    let (subs, complete) = subsets(b, opts);
    let vars = algebra_indices(b);
    let found = opts
        .execution
        .try_map(&subs, |s| best_for_subset(b, v, s, &vars))?;
    let mut best: Option<(usize, Candidate)> = None;
    for (i, cand) in found.into_iter().enumerate() {
        if let Some(cand) = cand {
            if best.as_ref().is_none_or(|(_, bc)| cand.c < bc.c) {
                best = Some((i, cand));
            }
        }
    }
    let Some((i, cand)) = best else {
        let scope = if complete { "" } else { " (subset search was cut by the budget)" };
        return Err(Error::NonSmoothImage(format!(
            "the image of the smoothing ideal vanishes to precision {}{scope}; \
             try reducing the algebra modulo its smoothing ideal first",
            v.precision()
        )));
    };
    let prec = v.precision();
    if prec < 10 * cand.c {
        return Err(Error::InsufficientPrecision(format!(
            "c = {} needs precision at least {}, the morphism is known to {prec}",
            cand.c,
            10 * cand.c
        )));
    }
    let sring = v.ring();
    let vm = v.evaluate(b, &cand.minor)?;
    let vn = v.evaluate(b, &cand.witness)?;
    let vp = vm.mul(&vn)?;
    let xc = TruncatedSeries::new(Polynomial::var(sring, 0).pow(cand.c), prec);
    let z = xc.divide_exact(&vp)?;
    let dprime = Polynomial::var(b.ring(), 0).pow(cand.c);
    Ok(DesingData {
        subset: subs[i].clone(),
        columns: cand.columns,
        minor: cand.minor,
        witness: cand.witness,
        c: cand.c,
        dprime,
        z,
    })
}

fn vanishes_along(h: &Ideal, b: &AlgebraPresentation, v: &CompletionMorphism) -> Result<bool> {
    for g in h.gens() {
        if !v.evaluate(b, g)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Replaces `B` by `B/H` while the smoothing ideal `H` maps to zero, at most
/// `cap` times.
pub fn reduce_until_nonvanishing(
    b: &AlgebraPresentation,
    v: &CompletionMorphism,
    cap: usize,
    opts: &SearchOptions,
) -> Result<AlgebraPresentation> {
    let mut cur = b.clone();
    let mut steps = 0;
    loop {
        let h = smoothing_ideal(&cur, opts)?;
        if !vanishes_along(&h, &cur, v)? {
            return Ok(cur);
        }
        if steps == cap {
            return Err(Error::Resource(format!(
                "the smoothing ideal still vanishes along the morphism after {cap} reductions"
            )));
        }
        steps += 1;
        let gb = groebner(&h)?;
        if gb.is_unit() {
            return Err(Error::NotApproximable(
                "reduction modulo the smoothing ideal reached the unit ideal".into(),
            ));
        }
        cur = cur.with_gens(gb.elements().to_vec())?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::radical_member;
    use crate::poly::{parse_polynomial, Field};
    use crate::series::series_ring;

    fn algebra(alg: &[&str], gens: &[&str]) -> AlgebraPresentation {
        let ring = AlgebraPresentation::ring_for(&["x"], alg, Field::Rational).unwrap();
        let gens = gens.iter().map(|g| parse_polynomial(g, &ring).unwrap()).collect();
        AlgebraPresentation::new(&ring, 1, gens).unwrap()
    }

    fn morphism(images: &[&str]) -> CompletionMorphism {
        let r = series_ring("x", Field::Rational).unwrap();
        let imgs = images.iter().map(|s| TruncatedSeries::parse(s, &r).unwrap()).collect();
        CompletionMorphism::new(&r, imgs).unwrap()
    }

    fn p(b: &AlgebraPresentation, s: &str) -> Polynomial {
        parse_polynomial(s, b.ring()).unwrap()
    }

    #[test]
    fn jacobians() {
        let b = algebra(&["Y1", "Y2"], &["Y1*Y2 - x^2"]);
        let j = jacobian(b.gens(), &[1, 2]).unwrap();
        assert_eq!(j, vec![vec![p(&b, "Y2"), p(&b, "Y1")]]);
        let ids = [p(&b, "Y1"), p(&b, "Y2")];
        let j = jacobian(&ids, &[1, 2]).unwrap();
        assert_eq!(j, crate::matrix::identity(b.ring(), 2));
    }

    #[test]
    fn minor_ideals() {
        let b = algebra(&["Y"], &["Y^2 - x"]);
        let d = minor_ideal(b.gens(), &[1], b.ring()).unwrap();
        assert_eq!(d.gens(), &[p(&b, "2*Y")]);
        let b2 = algebra(&["Y1", "Y2"], &[]);
        let ids = [p(&b2, "Y1"), p(&b2, "Y2")];
        assert!(groebner(&minor_ideal(&ids, &[1, 2], b2.ring()).unwrap()).unwrap().is_unit());
        assert!(matches!(minor_ideal(&ids, &[1], b2.ring()), Err(Error::Shape(_))));
    }

    #[test]
    fn smoothing_ideal_examples() {
        let opts = SearchOptions::default();
        let free = algebra(&["Y"], &[]);
        assert!(groebner(&smoothing_ideal(&free, &opts).unwrap()).unwrap().is_unit());

        let b = algebra(&["Y"], &["Y^2 - x"]);
        let h = smoothing_ideal(&b, &opts).unwrap();
        assert!(radical_member(&p(&b, "Y"), &h).unwrap());
        assert!(radical_member(&p(&b, "x"), &h).unwrap());
        for g in b.gens() {
            assert!(crate::ideal::ideal_member(g, &h).unwrap());
        }
    }

    #[test]
    fn subset_budget() {
        let b = algebra(&["Y1", "Y2"], &["Y1^2 - x", "Y2^2 - x", "Y1*Y2 - x"]);
        let opts = SearchOptions {
            max_subsets: 2,
            ..SearchOptions::default()
        };
        match smoothing_ideal(&b, &opts) {
            Err(Error::Resource(msg)) => assert!(msg.contains("after processing 2")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn points() {
        let opts = SearchOptions::default();
        let b = algebra(&["Y"], &["Y^2 - x"]);
        let q = |n| Coeff::rational(n, 1);
        assert!(is_smooth_at_point(&b, &[q(1), q(1)], &opts).unwrap());
        assert!(!is_smooth_at_point(&b, &[q(0), q(0)], &opts).unwrap());
        assert!(matches!(is_smooth_at_point(&b, &[q(1), q(0)], &opts), Err(Error::Domain(_))));
        let free = algebra(&["Y"], &[]);
        assert!(is_smooth_at_point(&free, &[q(3), q(-2)], &opts).unwrap());
    }

    #[test]
    fn node_data() {
        let b = algebra(&["Y1", "Y2"], &["Y1*Y2 - x^2"]);
        let v = morphism(&["x + x^2 + O(x^24)", "x/(1 + x) + O(x^24)"]);
        let d = find_desing_data(&b, &v, &SearchOptions::default()).unwrap();
        assert_eq!(d.subset, vec![0]);
        assert_eq!(d.columns, vec![0]);
        assert_eq!(d.minor, p(&b, "Y2"));
        assert!(d.witness.is_one());
        assert_eq!(d.c, 1);
        assert_eq!(d.dprime, p(&b, "x"));
        // x = v(M) z to the known precision
        let vm = v.evaluate(&b, &d.minor).unwrap();
        let prod = vm.mul(&d.z).unwrap();
        assert_eq!(prod.poly(), &Polynomial::var(v.ring(), 0));
        let again = find_desing_data(&b, &v, &SearchOptions::default()).unwrap();
        assert_eq!(d, again);
    }

    #[test]
    fn unit_minor_gives_zero_c() {
        let b = algebra(&["Y"], &["Y - x"]);
        let v = morphism(&["x + O(x^10)"]);
        let d = find_desing_data(&b, &v, &SearchOptions::default()).unwrap();
        assert_eq!(d.c, 0);
        assert!(d.dprime.is_one());
    }

    #[test]
    fn square_root_branch() {
        // Y = x (1 + x)^(1/2)
        let b = algebra(&["Y"], &["Y^2 - x^2 - x^3"]);
        let r = series_ring("x", Field::Rational).unwrap();
        let one_x = TruncatedSeries::parse("1 + x + O(x^12)", &r).unwrap();
        let mut u = TruncatedSeries::parse("1 + O(x^12)", &r).unwrap();
        for _ in 0..5 {
            let num = u.mul(&u).unwrap().sub(&one_x).unwrap();
            let den = u.scale(&Coeff::rational(2, 1)).invert().unwrap();
            u = u.sub(&num.mul(&den).unwrap()).unwrap();
        }
        let y = TruncatedSeries::new(Polynomial::var(&r, 0), 12).mul(&u).unwrap();
        let v = CompletionMorphism::new(&r, vec![y]).unwrap();
        let d = find_desing_data(&b, &v, &SearchOptions::default()).unwrap();
        assert_eq!(d.minor, p(&b, "2*Y"));
        assert_eq!(d.c, 1);
    }

    #[test]
    fn reduction_trick() {
        let opts = SearchOptions::default();
        let b = algebra(&["Y"], &["Y^2"]);
        let v = morphism(&["O(x^10)"]);
        let reduced = reduce_until_nonvanishing(&b, &v, 3, &opts).unwrap();
        assert_eq!(reduced.gens(), &[p(&b, "Y")]);
        assert!(matches!(reduce_until_nonvanishing(&b, &v, 0, &opts), Err(Error::Resource(_))));

        let smooth = algebra(&["Y"], &["Y - x"]);
        let w = morphism(&["x + O(x^10)"]);
        assert_eq!(reduce_until_nonvanishing(&smooth, &w, 0, &opts).unwrap(), smooth);
    }

    #[test]
    fn lexicographic_subsets() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(combinations(2, 0), vec![Vec::<usize>::new()]);
    }
}
