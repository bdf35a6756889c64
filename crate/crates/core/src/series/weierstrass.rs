use super::{TruncatedSeries, Valuation};
use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// Output of Weierstrass preparation `f = unit * wpoly` in the last variable.
#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassData {
    pub unit: TruncatedSeries,
    /// `x_m^p + sum_{i<p} z_i x_m^i`.
    pub wpoly: TruncatedSeries,
    /// `z_0, ..., z_{p-1}`, series in the other variables.
    pub z: Vec<TruncatedSeries>,
    pub p: u32,
}

impl WeierstrassData {
    /// Total degree below which the unit depends only on the known part of
    /// `f`. With `x_m` of weight 1 and the other variables of weight `p`, a
    /// change of `f` in degree `>= N` has weight `>= N` and moves the unit in
    /// weight `>= N - p` only.
    pub fn stable_unit_precision(&self) -> u32 {
        match self.p {
            0 => self.unit.precision(),
            p => (self.unit.precision() - 1) / p,
        }
    }

    /// Precision to which `z_i` depends only on the known part of `f`:
    /// `z_i x_m^i` moves in weight `>= N` only.
    pub fn stable_z_precision(&self, i: u32) -> u32 {
        (self.unit.precision() - i).div_ceil(self.p.max(1))
    }
}

fn split_levels(f: &Polynomial, last: usize, levels: usize) -> Vec<Polynomial> {
    (0..levels)
        .map(|k| f.filter_terms(|m| m.degree() - m.exponent(last) == k as u32))
        .collect()
}

/// Weierstrass preparation in the last ring variable.
///
/// The stored truncation of `f` is treated as an exact polynomial: the
/// preparation of that polynomial is computed level by level in the other
/// variables and reported to the precision of `f`. How much of the result is
/// independent of the unknown tail of `f` is given by
/// [`WeierstrassData::stable_unit_precision`] and
/// [`WeierstrassData::stable_z_precision`].
pub fn weierstrass_prepare(f: &TruncatedSeries) -> Result<WeierstrassData> {
    let ring = f.ring().clone();
    let m = ring.nvars();
    let last = m - 1;
    let prec = f.precision();
    let poly = f.poly();
    let f0 = poly.filter_terms(|mono| mono.degree() == mono.exponent(last));
    let p = match TruncatedSeries::new(f0.clone(), prec).order() {
        Valuation::Finite(p) => p,
        Valuation::AtLeast(_) => return Err(Error::NotRegular(ring.vars()[last].clone())),
    };
    // x_m-adic working precision: each level divides by x_m^p once
    let bound = prec + (p.max(1) - 1) * (prec.saturating_sub(1)) + p;
    let cut = |q: Polynomial| q.filter_terms(|mono| mono.exponent(last) < bound);
    let mul = |a: &Polynomial, b: &Polynomial| cut(a * b);

    let u0 = f0.shift(last, -(p as i64))?;
    // inverse of u0 in k[[x_m]] to x_m-precision `bound`
    let c0 = u0.constant_term();
    let two = Polynomial::from_i64(&ring, 2);
    let mut v0 = Polynomial::constant(&ring, c0.inv().unwrap());
    let mut k = 1u32;
    while k < bound {
        k = (2 * k).min(bound);
        let uv = (&u0 * &v0).filter_terms(|mono| mono.exponent(last) < k);
        v0 = (&v0 * &(&two - &uv)).filter_terms(|mono| mono.exponent(last) < k);
    }

    let levels = split_levels(poly, last, prec as usize);
    let mut units = vec![u0.clone()];
    let mut zs: Vec<Polynomial> = vec![Polynomial::zero(&ring)];
    for (level, fk) in levels.iter().enumerate().skip(1) {
        let mut r = fk.clone();
        for j in 1..level {
            r = &r - &mul(&units[j], &zs[level - j]);
        }
        let w = mul(&r, &v0);
        let zk = w.filter_terms(|mono| mono.exponent(last) < p);
        let high = w.filter_terms(|mono| mono.exponent(last) >= p).shift(last, -(p as i64))?;
        units.push(mul(&u0, &high));
        zs.push(zk);
    }

    let mut unit = Polynomial::zero(&ring);
    for u in &units {
        unit = &unit + u;
    }
    let mut tail = Polynomial::zero(&ring);
    for z in &zs {
        tail = &tail + z;
    }
    let xm_p = Polynomial::var(&ring, last).pow(p);
    let wpoly = &xm_p + &tail;
    let z = (0..p).map(|i| TruncatedSeries::new(tail.coefficient_of(last, i), prec)).collect();
    Ok(WeierstrassData {
        unit: TruncatedSeries::new(unit, prec),
        wpoly: TruncatedSeries::new(wpoly, prec),
        z,
        p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Field, MonomialOrder, PolyRing};

    fn series(src: &str) -> TruncatedSeries {
        let r = PolyRing::new(&["x1", "x2"], Field::Rational, MonomialOrder::DegRevLex).unwrap();
        TruncatedSeries::parse(src, &r).unwrap()
    }

    #[test]
    fn already_prepared() {
        let w = weierstrass_prepare(&series("x2 - x1 + O((x1, x2)^6)")).unwrap();
        assert_eq!(w.p, 1);
        assert_eq!(w.unit, series("1 + O((x1, x2)^6)"));
        assert_eq!(w.wpoly, series("x2 - x1 + O((x1, x2)^6)"));
    }

    #[test]
    fn constructed_unit() {
        let w = weierstrass_prepare(&series("(1 + x1)*(x2 - x1) + O((x1, x2)^6)")).unwrap();
        assert_eq!(w.unit, series("1 + x1 + O((x1, x2)^6)"));
        assert_eq!(w.wpoly, series("x2 - x1 + O((x1, x2)^6)"));
    }

    #[test]
    fn recurrence_solution_multiplies_back() {
        let f = series("x2 + x1*x2^2 + O((x1, x2)^6)");
        let w = weierstrass_prepare(&f).unwrap();
        assert_eq!(w.p, 1);
        assert_eq!(w.unit.mul(&w.wpoly).unwrap(), f);
        assert!(w.z.iter().all(|z| z.constant_term().is_zero()));
    }

    #[test]
    fn stable_precisions_are_tight() {
        // t^2 - s + t^8: the tail moves z_0 by s^4
        let r = PolyRing::new(&["s", "t"], Field::Rational, MonomialOrder::DegRevLex).unwrap();
        let a = weierstrass_prepare(&TruncatedSeries::parse("t^2 - s + O((s, t)^8)", &r).unwrap()).unwrap();
        let b = weierstrass_prepare(&TruncatedSeries::parse("t^2 - s + t^8 + O((s, t)^9)", &r).unwrap()).unwrap();
        assert_eq!((a.stable_z_precision(0), a.stable_z_precision(1), a.stable_unit_precision()), (4, 4, 3));
        assert!(a.z[0].agrees_with(&b.z[0], 4).unwrap());
        assert!(!a.z[0].agrees_with(&b.z[0], 5).unwrap());
        assert!(a.unit.agrees_with(&b.unit, 3).unwrap());
    }

    #[test]
    fn not_regular() {
        assert!(matches!(
            weierstrass_prepare(&series("x1*x2 + O((x1, x2)^6)")),
            Err(Error::NotRegular(v)) if v == "x2"
        ));
    }
}
