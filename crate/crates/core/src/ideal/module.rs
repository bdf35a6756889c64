//! Submodules of free modules: syzygies, module membership and lifting.

use std::sync::Arc;

use super::engine::{Engine, MVec, Term};
use super::DEFAULT_SPAIR_BUDGET;
use crate::error::{Error, Result};
use crate::poly::{PolyRing, Polynomial};

/// A matrix of polynomials stored row by row.
pub type PolyMatrix = Vec<Vec<Polynomial>>;

fn vec_to_mvec(engine: &Engine, offset: u32, entries: &[Polynomial]) -> MVec {
    let mut v = MVec::default();
    for (i, p) in entries.iter().enumerate() {
        for (m, c) in p.terms() {
            v.terms.push(Term {
                pos: offset + i as u32,
                mono: m.clone(),
                coeff: c.clone(),
            });
        }
    }
    engine.sort(&mut v);
    v
}

fn mvec_to_vec(ring: &Arc<PolyRing>, v: &MVec, offset: u32, len: usize) -> Vec<Polynomial> {
    let mut buckets: Vec<Vec<_>> = vec![Vec::new(); len];
    for t in &v.terms {
        if t.pos >= offset {
            buckets[(t.pos - offset) as usize].push((t.mono.clone(), t.coeff.clone()));
        }
    }
    buckets
        .into_iter()
        .map(|terms| Polynomial::from_sorted_terms(ring, terms))
        .collect()
}

/// Generators of the kernel `{v : M v = 0}` of an `r x n` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelBasis {
    pub matrix: PolyMatrix,
    pub basis: Vec<Vec<Polynomial>>,
}

fn matrix_shape(ring: &Arc<PolyRing>, m: &PolyMatrix) -> Result<(usize, usize)> {
    let r = m.len();
    let n = m.first().map_or(0, |row| row.len());
    for row in m {
        if row.len() != n {
            return Err(Error::Shape("matrix rows have different lengths".into()));
        }
        for p in row {
            if !p.ring().same(ring) {
                return Err(Error::Structural("matrix entries live in different rings".into()));
            }
        }
    }
    Ok((r, n))
}

/// Reduced Gröbner basis (position over term) of the module generated by
/// `(column_j | e_j)` in rank `r + n`.
fn tagged_column_basis(ring: &Arc<PolyRing>, m: &PolyMatrix, r: usize, n: usize) -> Result<Vec<MVec>> {
    let engine = Engine {
        order: ring.order(),
        budget: DEFAULT_SPAIR_BUDGET,
    };
    let gens: Vec<MVec> = (0..n)
        .map(|j| {
            let mut col: Vec<Polynomial> = (0..r).map(|i| m[i][j].clone()).collect();
            col.extend((0..n).map(|k| {
                if k == j {
                    Polynomial::one(ring)
                } else {
                    Polynomial::zero(ring)
                }
            }));
            vec_to_mvec(&engine, 0, &col)
        })
        .collect();
    engine.groebner(gens, false)
}

/// Kernel of a polynomial matrix, each generator scaled so that the leading
/// coefficient of its last nonzero entry is 1.
pub fn kernel_basis(ring: &Arc<PolyRing>, m: &PolyMatrix, ncols: usize) -> Result<KernelBasis> {
    let (r, n) = matrix_shape(ring, m)?;
    let n = if r == 0 { ncols } else { n };
    let gb = tagged_column_basis(ring, m, r, n)?;
    let mut basis = Vec::new();
    for g in gb {
        if g.terms.iter().all(|t| t.pos as usize >= r) {
            let v = mvec_to_vec(ring, &g, r as u32, n);
            let last = v.iter().rev().find(|p| !p.is_zero()).unwrap();
            let inv = last.leading_coeff().unwrap().inv().unwrap();
            basis.push(v.iter().map(|p| p.scale(&inv)).collect());
        }
    }
    Ok(KernelBasis {
        matrix: m.clone(),
        basis,
    })
}

/// A solution `c` of `M c = b`, found by reducing `(b | 0)` against the
/// tagged column basis; `None` when `b` is not in the column module.
pub fn lift(ring: &Arc<PolyRing>, m: &PolyMatrix, b: &[Polynomial]) -> Result<Option<Vec<Polynomial>>> {
    let (r, n) = matrix_shape(ring, m)?;
    if b.len() != r {
        return Err(Error::Shape(format!("right-hand side has {} entries, matrix has {r} rows", b.len())));
    }
    let engine = Engine {
        order: ring.order(),
        budget: DEFAULT_SPAIR_BUDGET,
    };
    let gb = tagged_column_basis(ring, m, r, n)?;
    let rem = engine.reduce(&vec_to_mvec(&engine, 0, b), &gb, r as u32);
    if rem.terms.iter().any(|t| (t.pos as usize) < r) {
        return Ok(None);
    }
    Ok(Some(mvec_to_vec(ring, &rem, r as u32, n).iter().map(|p| p.neg()).collect()))
}

/// Gröbner basis of a submodule of `ring^rank`, for membership tests.
#[derive(Clone, Debug)]
pub struct SubmoduleBasis {
    ring: Arc<PolyRing>,
    rank: usize,
    basis: Vec<MVec>,
}

impl SubmoduleBasis {
    pub fn new(ring: &Arc<PolyRing>, rank: usize, gens: &[Vec<Polynomial>]) -> Result<Self> {
        let engine = Engine {
            order: ring.order(),
            budget: DEFAULT_SPAIR_BUDGET,
        };
        let mut mv = Vec::new();
        for g in gens {
            if g.len() != rank {
                return Err(Error::Shape(format!("generator of length {} in rank {rank}", g.len())));
            }
            mv.push(vec_to_mvec(&engine, 0, g));
        }
        Ok(SubmoduleBasis {
            ring: ring.clone(),
            rank,
            basis: engine.groebner(mv, false)?,
        })
    }

    /// Module normal form of `v`.
    pub fn normal_form(&self, v: &[Polynomial]) -> Result<Vec<Polynomial>> {
        if v.len() != self.rank {
            return Err(Error::Shape(format!("vector of length {} in rank {}", v.len(), self.rank)));
        }
        let engine = Engine {
            order: self.ring.order(),
            budget: DEFAULT_SPAIR_BUDGET,
        };
        let r = engine.reduce(&vec_to_mvec(&engine, 0, v), &self.basis, u32::MAX);
        Ok(mvec_to_vec(&self.ring, &r, 0, self.rank))
    }

    pub fn contains(&self, v: &[Polynomial]) -> Result<bool> {
        Ok(self.normal_form(v)?.iter().all(Polynomial::is_zero))
    }
}

/// `M v` for a matrix and a vector.
pub fn mat_vec(m: &PolyMatrix, v: &[Polynomial]) -> Result<Vec<Polynomial>> {
    m.iter()
        .map(|row| {
            if row.len() != v.len() {
                return Err(Error::Shape("matrix/vector size mismatch".into()));
            }
            let mut acc = Polynomial::zero(v[0].ring());
            for (a, b) in row.iter().zip(v) {
                acc = acc.try_add(&a.try_mul(b)?)?;
            }
            Ok(acc)
        })
        .collect()
}
