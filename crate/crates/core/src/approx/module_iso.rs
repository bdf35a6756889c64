//! Equations whose solutions give an isomorphism between the cokernels of
//! two presentation matrices `u` (t x n) and `v` (p x n):
//!
//! * `sum_i u_ki X_ij = sum_r Y_kr v_rj` (image family),
//! * `sum_k Z_rk (sum_i u_ki X_ij) = v_rj` (preimage family),
//! * `det(X) W = 1`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::matrix::determinant;
use crate::poly::{Field, MonomialOrder, PolyRing, Polynomial};
use crate::series::{self, TruncatedSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquationFamily {
    Image,
    Preimage,
    Determinant,
}

/// The system as data. Unknowns are ring variables `1..`: `X` row by row,
/// then `Y`, then `Z`, then `W`; variable 0 is the series variable.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleIsoSystem {
    pub ring: Arc<PolyRing>,
    pub u: Vec<Vec<TruncatedSeries>>,
    pub v: Vec<Vec<TruncatedSeries>>,
    pub equations: Vec<Polynomial>,
    pub families: Vec<EquationFamily>,
    /// The coefficients are known to this precision.
    pub precision: u32,
    pub n: usize,
    pub t: usize,
    pub p: usize,
}

impl ModuleIsoSystem {
    pub fn unknowns(&self) -> usize {
        self.n * self.n + 2 * self.t * self.p + 1
    }

    /// Ring indices of the blocks `X`, `Y`, `Z`, `W`.
    pub fn blocks(&self) -> [std::ops::Range<usize>; 4] {
        let x = 1..1 + self.n * self.n;
        let y = x.end..x.end + self.t * self.p;
        let z = y.end..y.end + self.p * self.t;
        let w = z.end..z.end + 1;
        [x, y, z, w]
    }

    fn x_matrix(&self) -> Vec<Vec<Polynomial>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| Polynomial::var(&self.ring, 1 + i * self.n + j)).collect())
            .collect()
    }
}

fn shape(m: &[Vec<TruncatedSeries>]) -> Result<usize> {
    let cols = m.first().map_or(0, |r| r.len());
    if m.iter().any(|r| r.len() != cols) {
        return Err(Error::Shape("matrix rows have different lengths".into()));
    }
    Ok(cols)
}

/// Builds the system for `u` and `v`, which must have the same number of
/// columns.
pub fn module_iso_system(u: &[Vec<TruncatedSeries>], v: &[Vec<TruncatedSeries>]) -> Result<ModuleIsoSystem> {
    let n = shape(u)?;
    let nv = shape(v)?;
    if n != nv || n == 0 {
        return Err(Error::Shape(format!("u has {n} columns, v has {nv}")));
    }
    let (t, p) = (u.len(), v.len());
    let sring = u[0][0].ring().clone();
    if u.iter().chain(v).flatten().any(|s| !s.ring().same(&sring)) {
        return Err(Error::Structural("u and v live in different series rings".into()));
    }
    let precision = u.iter().chain(v).flatten().map(|s| s.precision()).min().unwrap();

    let xname = sring.vars()[0].clone();
    let mut names = vec![xname.clone()];
    let mut push = |stem: String| {
        let name = if stem == xname { format!("{stem}_") } else { stem };
        names.push(name);
    };
    for i in 1..=n {
        for j in 1..=n {
            push(format!("X{i}_{j}"));
        }
    }
    for k in 1..=t {
        for r in 1..=p {
            push(format!("Y{k}_{r}"));
        }
    }
    for r in 1..=p {
        for k in 1..=t {
            push(format!("Z{r}_{k}"));
        }
    }
    push("W".into());
    let ring = PolyRing::new(&names, sring.field().clone(), MonomialOrder::DegRevLex)?;

    let lift = |s: &TruncatedSeries| s.poly().remap(&ring);
    let var = |i: usize| Polynomial::var(&ring, i);
    let xi = |i: usize, j: usize| var(1 + i * n + j);
    let yi = |k: usize, r: usize| var(1 + n * n + k * p + r);
    let zi = |r: usize, k: usize| var(1 + n * n + t * p + r * t + k);
    let w = var(1 + n * n + 2 * t * p);

    // (u X)_kj
    let mut ux = vec![vec![Polynomial::zero(&ring); n]; t];
    for k in 0..t {
        for j in 0..n {
            for i in 0..n {
                ux[k][j] = &ux[k][j] + &(&lift(&u[k][i])? * &xi(i, j));
            }
        }
    }
    let mut equations = Vec::new();
    let mut families = Vec::new();
    for k in 0..t {
        for j in 0..n {
            let mut e = ux[k][j].clone();
            for r in 0..p {
                e = &e - &(&yi(k, r) * &lift(&v[r][j])?);
            }
            equations.push(e);
            families.push(EquationFamily::Image);
        }
    }
    for r in 0..p {
        for j in 0..n {
            let mut e = -&lift(&v[r][j])?;
            for k in 0..t {
                e = &e + &(&zi(r, k) * &ux[k][j]);
            }
            equations.push(e);
            families.push(EquationFamily::Preimage);
        }
    }
    let sys = ModuleIsoSystem {
        ring: ring.clone(),
        u: u.to_vec(),
        v: v.to_vec(),
        equations: Vec::new(),
        families: Vec::new(),
        precision,
        n,
        t,
        p,
    };
    let det = determinant(&sys.x_matrix(), &ring)?;
    equations.push(&(&det * &w) - &Polynomial::one(&ring));
    families.push(EquationFamily::Determinant);
    Ok(ModuleIsoSystem {
        equations,
        families,
        ..sys
    })
}

fn images(sys: &ModuleIsoSystem, values: &[TruncatedSeries], precision: u32) -> Result<Vec<TruncatedSeries>> {
    if values.len() != sys.unknowns() {
        return Err(Error::Shape(format!(
            "{} candidate values for {} unknowns",
            values.len(),
            sys.unknowns()
        )));
    }
    let sring = values[0].ring();
    let mut out = vec![TruncatedSeries::new(Polynomial::var(sring, 0), precision)];
    out.extend(values.iter().cloned());
    Ok(out)
}

fn vanishes(e: &Polynomial, at: &[TruncatedSeries], precision: u32) -> Result<bool> {
    let val = series::evaluate(e, at)?;
    Ok(val.precision() >= precision && val.truncate(precision).is_zero())
}

/// Whether the candidate solves every equation modulo `x^precision` (capped
/// by the precision of the system) with `det(X)` a unit. Candidate values
/// known to less than that precision are rejected.
pub fn check_candidate(sys: &ModuleIsoSystem, values: &[TruncatedSeries], precision: u32) -> Result<bool> {
    let prec = precision.min(sys.precision);
    let at = images(sys, values, prec)?;
    for e in &sys.equations {
        if !vanishes(e, &at, prec)? {
            return Ok(false);
        }
    }
    let det = determinant(&sys.x_matrix(), &sys.ring)?;
    Ok(!series::evaluate(&det, &at)?.constant_term().is_zero())
}

/// Counts of an exhaustive candidate sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutcome {
    pub total: u128,
    pub accepted: u128,
    pub witness: Option<Vec<TruncatedSeries>>,
}

const SWEEP_BLOCK_LIMIT: u128 = 1 << 20;

/// All assignments of polynomials of degree `<= degree` to the unknowns in
/// `range`, as coefficient vectors over `F_q`.
fn block_assignments(q: u64, degree: u32, size: usize) -> Result<Vec<Vec<u64>>> {
    let digits = (degree as usize + 1) * size;
    let count = (q as u128).checked_pow(digits as u32).filter(|&c| c <= SWEEP_BLOCK_LIMIT);
    let Some(count) = count else {
        return Err(Error::Resource(format!("a block of {size} unknowns has more than {SWEEP_BLOCK_LIMIT} candidates")));
    };
    let mut out = Vec::with_capacity(count as usize);
    let mut cur = vec![0u64; digits];
    for _ in 0..count {
        out.push(cur.clone());
        for d in cur.iter_mut() {
            *d += 1;
            if *d < q {
                break;
            }
            *d = 0;
        }
    }
    Ok(out)
}

fn series_values(
    field: &Field,
    sring: &Arc<PolyRing>,
    digits: &[u64],
    degree: u32,
    precision: u32,
) -> Vec<TruncatedSeries> {
    digits
        .chunks(degree as usize + 1)
        .map(|c| {
            let coeffs: Vec<_> = c.iter().map(|&d| field.from_i64(d as i64)).collect();
            TruncatedSeries::new(Polynomial::from_dense(sring, 0, &coeffs), precision)
        })
        .collect()
}

/// Checks every candidate whose entries are polynomials of degree
/// `<= degree` over a prime field. Each equation family involves `X` and
/// one other block only, so the sweep is the sum over `X` of the product of
/// the per-block acceptance counts; a witness is kept when one exists.
pub fn sweep_candidates(sys: &ModuleIsoSystem, sring: &Arc<PolyRing>, degree: u32, precision: u32) -> Result<SweepOutcome> {
    let Field::Prime(q) = *sys.ring.field() else {
        return Err(Error::UnsupportedField("candidate sweeps need a prime field".into()));
    };
    let prec = precision.min(sys.precision);
    let field = sys.ring.field().clone();
    let [xr, yr, zr, wr] = sys.blocks();
    let zero = TruncatedSeries::zero(sring, prec);
    let family = |f: EquationFamily| -> Vec<&Polynomial> {
        sys.equations.iter().zip(&sys.families).filter(|(_, g)| **g == f).map(|(e, _)| e).collect()
    };
    let det = determinant(&sys.x_matrix(), &sys.ring)?;
    let checks: [(std::ops::Range<usize>, Vec<&Polynomial>); 3] = [
        (yr, family(EquationFamily::Image)),
        (zr, family(EquationFamily::Preimage)),
        (wr, family(EquationFamily::Determinant)),
    ];
    let xs = block_assignments(q, degree, xr.len())?;
    let others: Vec<Vec<Vec<u64>>> = checks
        .iter()
        .map(|(r, _)| block_assignments(q, degree, r.len()))
        .collect::<Result<_>>()?;
    let mut total: u128 = xs.len() as u128;
    for o in &others {
        total *= o.len() as u128;
    }

    let mut accepted: u128 = 0;
    let mut witness = None;
    for xd in &xs {
        let mut values = vec![zero.clone(); sys.unknowns()];
        for (k, s) in series_values(&field, sring, xd, degree, prec).into_iter().enumerate() {
            values[xr.start - 1 + k] = s;
        }
        if series::evaluate(&det, &images(sys, &values, prec)?)?.constant_term().is_zero() {
            continue;
        }
        let mut counts = [0u128; 3];
        let mut firsts: [Option<Vec<TruncatedSeries>>; 3] = [None, None, None];
        for (b, ((range, eqs), assignments)) in checks.iter().zip(&others).enumerate() {
            for d in assignments {
                let mut vals = values.clone();
                let block = series_values(&field, sring, d, degree, prec);
                for (k, s) in block.iter().enumerate() {
                    vals[range.start - 1 + k] = s.clone();
                }
                let at = images(sys, &vals, prec)?;
                let mut ok = true;
                for e in eqs {
                    if !vanishes(e, &at, prec)? {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    counts[b] += 1;
                    firsts[b].get_or_insert(block);
                }
            }
            if counts[b] == 0 {
                break;
            }
        }
        let n = counts.iter().product::<u128>();
        if n > 0 {
            accepted += n;
            if witness.is_none() {
                let mut vals = values.clone();
                for ((range, _), block) in checks.iter().zip(&firsts) {
                    for (k, s) in block.as_ref().unwrap().iter().enumerate() {
                        vals[range.start - 1 + k] = s.clone();
                    }
                }
                witness = Some(vals);
            }
        }
    }
    Ok(SweepOutcome {
        total,
        accepted,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::series_ring;

    fn s(text: &str, r: &Arc<PolyRing>) -> TruncatedSeries {
        TruncatedSeries::parse(text, r).unwrap()
    }

    #[test]
    fn one_by_one_system() {
        let r = series_ring("x", Field::Rational).unwrap();
        let sys = module_iso_system(&[vec![s("x + O(x^8)", &r)]], &[vec![s("x + O(x^8)", &r)]]).unwrap();
        assert_eq!(sys.equations.len(), 3);
        assert_eq!(sys.ring.vars(), ["x", "X1_1", "Y1_1", "Z1_1", "W"]);
        let one = TruncatedSeries::one(&r, 8);
        assert!(check_candidate(&sys, &vec![one.clone(); 4], 8).unwrap());
        let two = one.scale(&Field::Rational.from_i64(2));
        assert!(!check_candidate(&sys, &[one.clone(), two, one.clone(), one], 8).unwrap());
    }

    #[test]
    fn identity_candidate_for_equal_matrices() {
        let r = series_ring("x", Field::Rational).unwrap();
        let u = vec![
            vec![s("x + O(x^6)", &r), s("x^2/(1 - x) + O(x^6)", &r)],
            vec![s("0 + O(x^6)", &r), s("1 + x + O(x^6)", &r)],
        ];
        let sys = module_iso_system(&u, &u).unwrap();
        let (one, zero) = (TruncatedSeries::one(&r, 6), TruncatedSeries::zero(&r, 6));
        let id = |i: usize, j: usize| if i == j { one.clone() } else { zero.clone() };
        // X, Y and Z all the identity, W = 1
        let mut cand: Vec<TruncatedSeries> = (0..3).flat_map(|_| (0..4).map(|k| id(k / 2, k % 2))).collect();
        cand.push(one.clone());
        assert!(check_candidate(&sys, &cand, 6).unwrap());
    }

    #[test]
    fn x_against_x_squared() {
        let r = series_ring("x", Field::Rational).unwrap();
        let sys = module_iso_system(&[vec![s("x + O(x^6)", &r)]], &[vec![s("x^2 + O(x^6)", &r)]]).unwrap();
        let x = s("x + O(x^6)", &r);
        let one = TruncatedSeries::one(&r, 6);
        // X = x, Y = 1, Z = 1 solves the first two families; det X is not a unit
        assert!(!check_candidate(&sys, &[x.clone(), one.clone(), one.clone(), one], 6).unwrap());
    }

    #[test]
    fn shape_mismatch() {
        let r = series_ring("x", Field::Rational).unwrap();
        let a = s("x + O(x^4)", &r);
        assert!(matches!(
            module_iso_system(&[vec![a.clone(), a.clone()]], &[vec![a]]),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn small_sweep() {
        let r = series_ring("x", Field::prime(3).unwrap()).unwrap();
        let sys = module_iso_system(&[vec![s("x + O(x^4)", &r)]], &[vec![s("x + O(x^4)", &r)]]).unwrap();
        let out = sweep_candidates(&sys, &r, 1, 4).unwrap();
        assert_eq!(out.total, 3u128.pow(8));
        assert!(out.accepted > 0);
        assert!(check_candidate(&sys, out.witness.as_ref().unwrap(), 4).unwrap());
    }
}
