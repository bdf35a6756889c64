//! Factoring a solution of `a y = b` through `c + sum_k Z_k y^(k)`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ideal::module::{kernel_basis, lift};
use crate::matrix::PolyMatrix;
use crate::poly::{Coeff, PolyRing, Polynomial};
use crate::series::TruncatedSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorOptions {
    /// Extra degree allowed for the particular solution beyond the degrees
    /// of `a` and `b`.
    pub slack: u32,
}

impl Default for FactorOptions {
    fn default() -> Self {
        FactorOptions { slack: 10 }
    }
}

/// `y' = c_part + sum_k z_k y^(k)` with `a c_part = b` and `a y^(k) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearFactorization {
    pub a: PolyMatrix,
    pub b: Vec<Polynomial>,
    pub c_part: Vec<Polynomial>,
    pub kernel: Vec<Vec<Polynomial>>,
    pub z: Vec<TruncatedSeries>,
}

impl LinearFactorization {
    /// `c_part + sum_k z_k y^(k)`.
    pub fn reconstruct(&self) -> Result<Vec<TruncatedSeries>> {
        let n = self.c_part.len();
        let prec = self.z.iter().map(|z| z.precision()).min().unwrap_or(u32::MAX);
        (0..n)
            .map(|i| {
                let mut acc: Option<TruncatedSeries> = None;
                for (k, zk) in self.z.iter().enumerate() {
                    let term = zk.mul_exact(&self.kernel[k][i])?;
                    acc = Some(match acc {
                        None => term,
                        Some(a) => a.add(&term)?,
                    });
                }
                let c = &self.c_part[i];
                match acc {
                    Some(a) => a.add(&TruncatedSeries::new(c.clone(), a.precision())),
                    None if prec == u32::MAX => Err(Error::Domain("no kernel and no precision to report".into())),
                    None => Ok(TruncatedSeries::new(c.clone(), prec)),
                }
            })
            .collect()
    }
}

fn max_degree<'a>(ps: impl IntoIterator<Item = &'a Polynomial>) -> u32 {
    ps.into_iter().filter_map(|p| p.total_degree()).max().unwrap_or(0)
}

fn apply(a: &PolyMatrix, y: &[TruncatedSeries], ring: &Arc<PolyRing>, prec: u32) -> Result<Vec<TruncatedSeries>> {
    a.iter()
        .map(|row| {
            let mut acc = TruncatedSeries::zero(ring, prec);
            for (aij, yj) in row.iter().zip(y) {
                acc = acc.add(&yj.mul_exact(aij)?)?;
            }
            Ok(acc)
        })
        .collect()
}

/// Factors the solution `y` of `a y = b` (entries of `a`, `b` in `k[x]`)
/// through the polynomial algebra: a particular solution over `k[x]`, the
/// kernel generators, and series coefficients `z` solved degree by degree.
pub fn linear_factor(
    a: &PolyMatrix,
    b: &[Polynomial],
    y: &[TruncatedSeries],
    opts: &FactorOptions,
) -> Result<LinearFactorization> {
    let Some(y0) = y.first() else {
        return Err(Error::Domain("empty solution vector".into()));
    };
    let ring = y0.ring().clone();
    let n = y.len();
    let r = a.len();
    if b.len() != r || a.iter().any(|row| row.len() != n) {
        return Err(Error::Shape(format!("a is not {r} x {n} or b has the wrong length")));
    }
    let a: PolyMatrix = a.iter().map(|row| row.iter().map(|p| p.remap(&ring)).collect()).collect::<Result<_>>()?;
    let b: Vec<Polynomial> = b.iter().map(|p| p.remap(&ring)).collect::<Result<_>>()?;
    let prec = y.iter().map(|s| s.precision()).min().unwrap();

    let ay = apply(&a, y, &ring, prec)?;
    for (i, (lhs, bi)) in ay.iter().zip(&b).enumerate() {
        if !lhs.agrees_with(&TruncatedSeries::new(bi.clone(), prec), prec)? {
            return Err(Error::Domain(format!("row {} of a y' differs from b below x^{prec}", i + 1)));
        }
    }

    let c_part = lift(&ring, &a, &b)?
        .ok_or_else(|| Error::Unsolvable("b is not in the column module of a".into()))?;
    let bound = max_degree(a.iter().flatten()).max(max_degree(&b)) + opts.slack;
    let dc = max_degree(&c_part);
    if dc > bound {
        return Err(Error::Unsolvable(format!(
            "the particular solution has degree {dc}, above the bound {bound}"
        )));
    }
    let kernel = kernel_basis(&ring, &a, n)?.basis;

    let w: Vec<TruncatedSeries> = y
        .iter()
        .zip(&c_part)
        .map(|(yi, ci)| yi.sub(&TruncatedSeries::new(ci.clone(), prec)))
        .collect::<Result<_>>()?;
    let z = solve_coefficients(&kernel, &w, &ring, prec)?;
    let out = LinearFactorization {
        a,
        b,
        c_part,
        kernel,
        z,
    };
    if !out.kernel.is_empty() {
        for (lhs, yi) in out.reconstruct()?.iter().zip(y) {
            if !lhs.agrees_with(yi, prec)? {
                return Err(Error::Internal("reconstruction identity fails".into()));
            }
        }
    }
    Ok(out)
}

/// Rows in reduced echelon form over the coefficient field; the last entry
/// of each row is the right-hand side.
struct Echelon {
    width: usize,
    rows: Vec<(usize, Vec<Coeff>)>,
}

impl Echelon {
    /// Adds an equation; `false` when it contradicts the earlier ones.
    fn push(&mut self, mut eq: Vec<Coeff>) -> bool {
        for (p, row) in &self.rows {
            if !eq[*p].is_zero() {
                let f = eq[*p].clone();
                for (e, r) in eq.iter_mut().zip(row) {
                    if !r.is_zero() {
                        *e = e.sub(&f.mul(r));
                    }
                }
            }
        }
        let Some(p) = (0..self.width).find(|&i| !eq[i].is_zero()) else {
            return eq[self.width].is_zero();
        };
        let inv = eq[p].inv().expect("nonzero pivot");
        for e in eq.iter_mut() {
            *e = e.mul(&inv);
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (r, e) in row.iter_mut().zip(&eq) {
                    if !e.is_zero() {
                        *r = r.sub(&f.mul(e));
                    }
                }
            }
        }
        self.rows.push((p, eq));
        true
    }

    /// The solution with every free unknown set to zero.
    fn solution(&self, zero: &Coeff) -> Vec<Coeff> {
        let mut out = vec![zero.clone(); self.width];
        for (p, row) in &self.rows {
            out[*p] = row[self.width].clone();
        }
        out
    }
}

/// Finds `z` with `sum_k z_k y^(k) = w` modulo `x^prec`. Equations are added
/// in increasing degree so a contradiction names the first bad degree.
fn solve_coefficients(
    kernel: &[Vec<Polynomial>],
    w: &[TruncatedSeries],
    ring: &Arc<PolyRing>,
    prec: u32,
) -> Result<Vec<TruncatedSeries>> {
    let field = ring.field().clone();
    let zero = field.zero();
    let p = kernel.len();
    // z_k x^j only reaches degrees >= j + shift
    let shift = kernel
        .iter()
        .flatten()
        .filter_map(|e| e.low_degree())
        .min()
        .unwrap_or(0)
        .min(prec);
    let zlen = (prec - shift) as usize;
    let width = p * zlen;
    let coeff = |poly: &Polynomial, d: i64| -> Coeff {
        if d < 0 {
            zero.clone()
        } else {
            TruncatedSeries::new(poly.clone(), prec).coefficient(d as u32)
        }
    };
    let mut ech = Echelon {
        width,
        rows: Vec::new(),
    };
    for m in 0..prec {
        for (i, wi) in w.iter().enumerate() {
            let mut eq = vec![zero.clone(); width + 1];
            for j in 0..zlen {
                for (k, yk) in kernel.iter().enumerate() {
                    eq[j * p + k] = coeff(&yk[i], m as i64 - j as i64);
                }
            }
            eq[width] = wi.coefficient(m);
            if !ech.push(eq) {
                return Err(Error::FlatnessViolation(format!(
                    "the coefficient system has no solution in degree {m} (component {})",
                    i + 1
                )));
            }
        }
    }
    let sol = ech.solution(&zero);
    Ok((0..p)
        .map(|k| {
            let coeffs: Vec<Coeff> = (0..zlen).map(|j| sol[j * p + k].clone()).collect();
            TruncatedSeries::new(Polynomial::from_dense(ring, 0, &coeffs), prec - shift)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, Field};
    use crate::series::series_ring;

    fn ring() -> Arc<PolyRing> {
        series_ring("x", Field::Rational).unwrap()
    }

    #[test]
    fn two_column_shape_with_rhs() {
        let r = ring();
        let p = |s: &str| parse_polynomial(s, &r).unwrap();
        let s = |t: &str| TruncatedSeries::parse(t, &r).unwrap();
        // tau = x + x^2, y' = (x^2 - x tau, tau)
        let y = vec![s("x^2 - x^2 - x^3 + O(x^12)"), s("x + x^2 + O(x^12)")];
        let f = linear_factor(&vec![vec![p("x"), p("x^2")]], &[p("x^3")], &y, &FactorOptions::default()).unwrap();
        assert_eq!(f.kernel, vec![vec![p("-x"), p("1")]]);
        let back = f.reconstruct().unwrap();
        for (a, b) in back.iter().zip(&y) {
            assert!(a.agrees_with(b, 12).unwrap());
        }
    }

    #[test]
    fn zero_data() {
        let r = ring();
        let p = |s: &str| parse_polynomial(s, &r).unwrap();
        let y = vec![TruncatedSeries::zero(&r, 8), TruncatedSeries::zero(&r, 8)];
        let f = linear_factor(&vec![vec![p("x"), p("x^2")]], &[p("0")], &y, &FactorOptions::default()).unwrap();
        assert!(f.c_part.iter().all(|c| c.is_zero()));
        assert!(f.z.iter().all(|z| z.is_zero()));
    }

    #[test]
    fn failures() {
        let r = ring();
        let p = |s: &str| parse_polynomial(s, &r).unwrap();
        let s = |t: &str| TruncatedSeries::parse(t, &r).unwrap();
        let opts = FactorOptions::default();
        // y' does not solve the system
        let err = linear_factor(&vec![vec![p("x")]], &[p("1")], &[s("1 + O(x^5)")], &opts);
        assert!(matches!(err, Err(Error::Domain(_))));
        // (1 - x) y = 1 is solvable over k[[x]] but not over k[x]
        let err = linear_factor(&vec![vec![p("1 - x")]], &[p("1")], &[s("1/(1 - x) + O(x^8)")], &opts);
        assert!(matches!(err, Err(Error::Unsolvable(_))));
        // injective a: the particular solution is everything
        let f = linear_factor(&vec![vec![p("x^2")]], &[p("x^2 + x^3")], &[s("1 + x + O(x^6)")], &opts).unwrap();
        assert_eq!(f.c_part, vec![p("1 + x")]);
        assert!(f.kernel.is_empty());
    }

    #[test]
    fn echelon_detects_contradiction() {
        let f = Field::Rational;
        let c = |v: i64| f.from_i64(v);
        let mut e = Echelon { width: 2, rows: Vec::new() };
        assert!(e.push(vec![c(1), c(1), c(2)]));
        assert!(e.push(vec![c(1), c(-1), c(0)]));
        assert_eq!(e.solution(&c(0)), vec![c(1), c(1)]);
        assert!(!e.push(vec![c(2), c(0), c(3)]));
    }
}
