//! Small dense matrices of polynomials.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{PolyRing, Polynomial};

pub use crate::ideal::module::PolyMatrix;

pub fn identity(ring: &Arc<PolyRing>, n: usize) -> PolyMatrix {
    scalar(&Polynomial::one(ring), n)
}

pub fn scalar(p: &Polynomial, n: usize) -> PolyMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { p.clone() } else { Polynomial::zero(p.ring()) })
                .collect()
        })
        .collect()
}

fn dims(m: &PolyMatrix) -> (usize, usize) {
    (m.len(), m.first().map_or(0, |r| r.len()))
}

pub fn mul(a: &PolyMatrix, b: &PolyMatrix) -> Result<PolyMatrix> {
    let (r, k) = dims(a);
    let (k2, c) = dims(b);
    if k != k2 {
        return Err(Error::Shape(format!("cannot multiply {r}x{k} by {k2}x{c}")));
    }
    let ring = a[0][0].ring().clone();
    let mut out = vec![vec![Polynomial::zero(&ring); c]; r];
    for i in 0..r {
        for j in 0..c {
            let mut acc = Polynomial::zero(&ring);
            for l in 0..k {
                if !a[i][l].is_zero() && !b[l][j].is_zero() {
                    acc = acc.try_add(&a[i][l].try_mul(&b[l][j])?)?;
                }
            }
            out[i][j] = acc;
        }
    }
    Ok(out)
}

/// Determinant of a square matrix by dynamic programming over column
/// subsets (row `i` is expanded against all columns not yet used).
pub fn determinant(m: &PolyMatrix, ring: &Arc<PolyRing>) -> Result<Polynomial> {
    let (r, c) = dims(m);
    if r != c {
        return Err(Error::Shape(format!("determinant of a non-square {r}x{c} matrix")));
    }
    if r == 0 {
        return Ok(Polynomial::one(ring));
    }
    if r > 20 {
        return Err(Error::Resource("determinant of a matrix larger than 20x20".into()));
    }
    let mut dp: Vec<Option<Polynomial>> = vec![None; 1 << r];
    dp[0] = Some(Polynomial::one(ring));
    for mask in 0usize..(1 << r) {
        let Some(val) = dp[mask].take() else { continue };
        let row = mask.count_ones() as usize;
        if row == r {
            dp[mask] = Some(val);
            continue;
        }
        for j in 0..r {
            if mask & (1 << j) != 0 || m[row][j].is_zero() {
                continue;
            }
            // sign: parity of used columns to the right of j
            let inversions = (mask >> (j + 1)).count_ones();
            let mut term = val.try_mul(&m[row][j])?;
            if inversions % 2 == 1 {
                term = term.neg();
            }
            let next = mask | (1 << j);
            dp[next] = Some(match dp[next].take() {
                Some(acc) => acc.try_add(&term)?,
                None => term,
            });
        }
        dp[mask] = Some(val);
    }
    Ok(dp[(1 << r) - 1].take().unwrap_or_else(|| Polynomial::zero(ring)))
}

/// Adjugate (transposed cofactor matrix).
pub fn adjugate(m: &PolyMatrix, ring: &Arc<PolyRing>) -> Result<PolyMatrix> {
    let (r, c) = dims(m);
    if r != c {
        return Err(Error::Shape("adjugate of a non-square matrix".into()));
    }
    if r == 1 {
        return Ok(vec![vec![Polynomial::one(ring)]]);
    }
    let mut out = vec![vec![Polynomial::zero(ring); r]; r];
    for i in 0..r {
        for j in 0..r {
            let minor: PolyMatrix = (0..r)
                .filter(|&a| a != i)
                .map(|a| (0..r).filter(|&b| b != j).map(|b| m[a][b].clone()).collect())
                .collect();
            let d = determinant(&minor, ring)?;
            out[j][i] = if (i + j) % 2 == 1 { d.neg() } else { d };
        }
    }
    Ok(out)
}

/// Applies a substitution to every entry.
pub fn map_entries(m: &PolyMatrix, f: impl Fn(&Polynomial) -> Result<Polynomial>) -> Result<PolyMatrix> {
    m.iter().map(|row| row.iter().map(&f).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, Field, MonomialOrder};

    fn ring() -> Arc<PolyRing> {
        PolyRing::new(&["x", "y", "z"], Field::Rational, MonomialOrder::DegRevLex).unwrap()
    }

    fn mat(r: &Arc<PolyRing>, rows: &[&[&str]]) -> PolyMatrix {
        rows.iter()
            .map(|row| row.iter().map(|e| parse_polynomial(e, r).unwrap()).collect())
            .collect()
    }

    #[test]
    fn determinant_and_adjugate_law() {
        let r = ring();
        let m = mat(&r, &[&["x", "y", "1"], &["z^2", "x*y", "y"], &["1", "0", "x - z"]]);
        let d = determinant(&m, &r).unwrap();
        let adj = adjugate(&m, &r).unwrap();
        assert_eq!(mul(&m, &adj).unwrap(), scalar(&d, 3));
        assert_eq!(mul(&adj, &m).unwrap(), scalar(&d, 3));
        let two = mat(&r, &[&["x", "y"], &["z", "1"]]);
        assert_eq!(determinant(&two, &r).unwrap(), parse_polynomial("x - y*z", &r).unwrap());
    }
}
