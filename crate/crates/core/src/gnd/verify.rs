use std::sync::Arc;

use super::{at_lift, divides_x_power, CertificateKind, GndCertificate};
use crate::algebra::{AlgebraPresentation, CompletionMorphism};
use crate::error::{Error, Result};
use crate::ideal::{buchberger, ideal_member, Ideal};
use crate::matrix::{determinant, mul, scalar, PolyMatrix};
use crate::poly::{MonomialOrder, PolyRing, Polynomial};
use crate::series::{self, TruncatedSeries};
use crate::smooth::jacobian;

/// One line of a verification report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Precision the check held to; `None` for exact identities.
    pub precision: Option<u32>,
    pub detail: String,
}

pub const CHECK_NAMES: [&str; 6] = ["adjugate", "membership", "lift", "residuals", "factorization", "smoothness"];

fn outcome(name: &str, precision: Option<u32>, r: Result<Option<String>>, ok: &str) -> CheckResult {
    let (passed, detail) = match r {
        Ok(None) => (true, ok.to_string()),
        Ok(Some(why)) => (false, why),
        Err(e) => (false, e.to_string()),
    };
    CheckResult {
        name: name.to_string(),
        passed,
        precision,
        detail: detail.replace('\n', " "),
    }
}

/// Re-checks a certificate against the algebra and morphism it claims to
/// desingularize.
pub fn verify_certificate(cert: &GndCertificate, b: &AlgebraPresentation, v: &CompletionMorphism) -> Vec<CheckResult> {
    verify_certificate_to(cert, b, v, None)
}

/// Like [`verify_certificate`], with the series checks capped at
/// `precision`.
pub fn verify_certificate_to(
    cert: &GndCertificate,
    b: &AlgebraPresentation,
    v: &CompletionMorphism,
    precision: Option<u32>,
) -> Vec<CheckResult> {
    let cx = Context::new(cert, precision);
    let n = cx.nres;
    vec![
        outcome(CHECK_NAMES[0], None, cx.adjugate(), "GH = HG = P*Id"),
        outcome(
            CHECK_NAMES[1],
            None,
            cx.membership(),
            match cert.kind {
                CertificateKind::Bordered => "s^p f - d^2 g in (h)",
                CertificateKind::Smooth => "N I in (f)",
            },
        ),
        outcome(
            CHECK_NAMES[2],
            None,
            cx.lift(),
            match cert.kind {
                CertificateKind::Bordered => "I(y') in (d^3), P(y') = d s, f(y') = d^2 b",
                CertificateKind::Smooth => "d = 1",
            },
        ),
        outcome(CHECK_NAMES[3], Some(n), cx.residuals(), "h and g vanish at (y-hat, t)"),
        outcome(CHECK_NAMES[4], Some(n), cx.factorization(b, v), "B -> B' -> A' equals v"),
        outcome(CHECK_NAMES[5], Some(n), cx.smoothness(), "Jacobian determinant is a unit"),
    ]
}

struct Context<'a> {
    cert: &'a GndCertificate,
    nres: u32,
}

fn fail(msg: impl Into<String>) -> Result<Option<String>> {
    Ok(Some(msg.into()))
}

impl<'a> Context<'a> {
    fn new(cert: &'a GndCertificate, cap: Option<u32>) -> Self {
        let full = match cert.kind {
            CertificateKind::Bordered => {
                let od = cert.d.low_degree().unwrap_or(0);
                cert.morphism.precision().saturating_sub(2 * od)
            }
            CertificateKind::Smooth => cert.morphism.precision(),
        };
        Context {
            cert,
            nres: cap.map_or(full, |p| p.min(full)),
        }
    }

    fn ring(&self) -> &Arc<PolyRing> {
        &self.cert.ring
    }

    fn nalg(&self) -> usize {
        self.cert.perm.len()
    }

    fn f(&self) -> Result<Vec<Polynomial>> {
        self.cert
            .subsystem
            .iter()
            .map(|&i| {
                self.cert
                    .relations
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::Shape(format!("subsystem index {i} out of range")))
            })
            .collect()
    }

    fn bordered_jacobian(&self) -> Result<PolyMatrix> {
        let n = self.nalg();
        let f = self.f()?;
        let vars: Vec<usize> = self.cert.perm.iter().map(|&j| j + 1).collect();
        let mut h = jacobian(&f, &vars)?;
        for i in f.len()..n {
            h.push(
                (0..n)
                    .map(|j| if i == j { Polynomial::one(self.ring()) } else { Polynomial::zero(self.ring()) })
                    .collect(),
            );
        }
        Ok(h)
    }

    fn adjugate(&self) -> Result<Option<String>> {
        let cert = self.cert;
        if self.bordered_jacobian()? != cert.hmat {
            return fail("H is not the bordered Jacobian of the subsystem");
        }
        let target = scalar(&cert.pbig, self.nalg());
        if mul(&cert.gmat, &cert.hmat)? != target {
            return fail("GH != P*Id");
        }
        if mul(&cert.hmat, &cert.gmat)? != target {
            return fail("HG != P*Id");
        }
        Ok(None)
    }

    fn membership(&self) -> Result<Option<String>> {
        let cert = self.cert;
        let f = self.f()?;
        match cert.kind {
            CertificateKind::Smooth => {
                let fi = Ideal::new(self.ring(), f)?;
                let witness = cert.data.witness.remap(self.ring())?;
                for g in &cert.relations {
                    if !ideal_member(&(&witness * g), &fi)? {
                        return fail(format!("N*({g}) is not in (f)"));
                    }
                }
                Ok(None)
            }
            CertificateKind::Bordered => {
                if cert.g.len() != f.len() || cert.h.len() != self.nalg() {
                    return fail("wrong number of h or g polynomials");
                }
                // (h, w s - 1) in a ring where the algebra variables dominate
                let ring = self.ring();
                let n = self.nalg();
                let w = ring.fresh_name("w");
                let mut names: Vec<String> = ring.vars()[1..=n].to_vec();
                names.push(w);
                names.push(ring.vars()[0].clone());
                names.extend(ring.vars()[n + 1..].iter().cloned());
                let order = MonomialOrder::block(
                    n,
                    MonomialOrder::DegRevLex,
                    MonomialOrder::block(1, MonomialOrder::DegRevLex, MonomialOrder::DegRevLex),
                );
                let ext = PolyRing::new(&names, ring.field().clone(), order.clone())?;
                let wv = Polynomial::var(&ext, n);
                let mut gens: Vec<Polynomial> = cert.h.iter().map(|h| h.remap(&ext)).collect::<Result<_>>()?;
                gens.push(&(&wv * &cert.s.remap(&ext)?) - &Polynomial::one(&ext));
                let gb = buchberger(&Ideal::new(&ext, gens)?, &order)?;
                let sp = cert.s.pow(cert.p);
                let d2 = &cert.d * &cert.d;
                for (i, fi) in f.iter().enumerate() {
                    let e = &(&sp * fi) - &(&d2 * &cert.g[i]);
                    if !gb.contains(&e.remap(&ext)?)? {
                        return fail(format!("s^p f_{} - d^2 g_{} is not in (h)", i + 1, i + 1));
                    }
                }
                Ok(None)
            }
        }
    }

    fn lift(&self) -> Result<Option<String>> {
        let cert = self.cert;
        if cert.kind == CertificateKind::Smooth {
            return Ok(if cert.d.is_one() { None } else { Some("d must be 1".into()) });
        }
        let rel = Ideal::new(self.ring(), cert.relations.clone())?;
        if !ideal_member(&(&cert.d - &cert.pbig), &rel)? {
            return fail("d - P is not in the bordered ideal");
        }
        let e = cert.d.total_degree().unwrap_or(0);
        if cert.yprime.len() != self.nalg() {
            return fail("y' has the wrong length");
        }
        for y in &cert.yprime {
            if (1..self.ring().nvars()).any(|i| y.involves(i)) {
                return fail("y' involves variables other than x");
            }
        }
        for g in &cert.relations {
            if !divides_x_power(&at_lift(g, &cert.yprime)?, 3 * e) {
                return fail(format!("{g} at y' is not in (d^3)"));
            }
        }
        if at_lift(&cert.pbig, &cert.yprime)? != &cert.d * &cert.s {
            return fail("P(y') != d s");
        }
        if !divides_x_power(&(&cert.s - &Polynomial::one(self.ring())), e) {
            return fail("s is not 1 modulo d");
        }
        let d2 = &cert.d * &cert.d;
        for (i, fi) in self.f()?.iter().enumerate() {
            let bi = cert.b.get(i).ok_or_else(|| Error::Shape("b is too short".into()))?;
            if at_lift(fi, &cert.yprime)? != &d2 * bi || !divides_x_power(bi, e) {
                return fail(format!("b_{} is inconsistent", i + 1));
            }
        }
        let n = self.nalg();
        for (i, q) in cert.q.iter().enumerate() {
            let low = q
                .terms()
                .iter()
                .any(|(m, _)| (n + 1..self.ring().nvars()).map(|k| m.exponent(k)).sum::<u32>() < 2);
            if low {
                return fail(format!("Q_{} has terms of T-degree below 2", i + 1));
            }
        }
        Ok(None)
    }

    /// Series images of all ring variables, truncated to `nres`.
    fn images(&self) -> Result<Vec<TruncatedSeries>> {
        let cert = self.cert;
        let v = &cert.morphism;
        let prec = self.nres;
        let mut imgs = vec![TruncatedSeries::new(Polynomial::var(v.ring(), 0), prec)];
        imgs.extend(v.images().iter().map(|s| s.truncate(prec)));
        if cert.kind == CertificateKind::Bordered {
            imgs.push(cert.data.z.truncate(prec));
            if cert.t.len() != self.nalg() {
                return Err(Error::Shape("t has the wrong length".into()));
            }
            imgs.extend(cert.t.iter().map(|s| s.truncate(prec)));
        }
        if imgs.len() != self.ring().nvars() {
            return Err(Error::Shape("images do not match the certificate ring".into()));
        }
        Ok(imgs)
    }

    fn residuals(&self) -> Result<Option<String>> {
        let cert = self.cert;
        let imgs = self.images()?;
        let polys: Vec<&Polynomial> = match cert.kind {
            CertificateKind::Bordered => cert.h.iter().chain(&cert.g).collect(),
            CertificateKind::Smooth => cert.relations.iter().collect(),
        };
        for p in polys {
            let val = series::evaluate(p, &imgs)?;
            if !val.is_zero() {
                return fail(format!("residual {val} is nonzero"));
            }
        }
        Ok(None)
    }

    fn factorization(&self, b: &AlgebraPresentation, v: &CompletionMorphism) -> Result<Option<String>> {
        let cert = self.cert;
        let prec = self.nres;
        if &cert.algebra != b {
            return fail("the certificate was issued for a different algebra");
        }
        if v.images().len() != cert.morphism.images().len() || !v.ring().same(cert.morphism.ring()) {
            return fail("the certificate was issued for a different morphism");
        }
        for (a, c) in v.images().iter().zip(cert.morphism.images()) {
            if !a.agrees_with(c, prec)? {
                return fail("the certificate morphism differs from v");
            }
        }
        let nrel = match cert.kind {
            CertificateKind::Bordered => cert.relations.len().saturating_sub(1),
            CertificateKind::Smooth => cert.relations.len(),
        };
        let working = Ideal::new(self.ring(), cert.relations[..nrel].to_vec())?;
        for g in b.gens() {
            if !ideal_member(&g.remap(self.ring())?, &working)? {
                return fail(format!("{g} is not in the working ideal"));
            }
        }
        if cert.kind == CertificateKind::Smooth {
            return Ok(None);
        }
        let sring = v.ring();
        let c = cert.data.c;
        let vp = v.evaluate(b, &cert.data.pprime())?;
        let xc = Polynomial::var(sring, 0).pow(c);
        if !vp.mul(&cert.data.z)?.agrees_with(&TruncatedSeries::new(xc, prec), prec)? {
            return fail("x^c != v(P') z");
        }
        // Y = y' + d s^{-1} G(y') T
        let sinv = TruncatedSeries::new(cert.s.remap(sring)?, prec).invert()?;
        let d = TruncatedSeries::new(cert.d.remap(sring)?, prec);
        let imgs = self.images()?;
        let n = self.nalg();
        for (j, &col) in cert.perm.iter().enumerate() {
            let mut acc = TruncatedSeries::zero(sring, prec);
            for (k, e) in cert.gmat[j].iter().enumerate() {
                if !e.is_zero() {
                    let ek = TruncatedSeries::new(at_lift(e, &cert.yprime)?.remap(sring)?, prec);
                    acc = acc.add(&ek.mul(&imgs[1 + n + k])?)?;
                }
            }
            let y = TruncatedSeries::new(cert.yprime[col].remap(sring)?, prec)
                .add(&d.mul(&sinv)?.mul(&acc)?)?;
            if !y.agrees_with(&imgs[1 + col], prec)? {
                return fail(format!("Y-image {} is not recovered from t", col + 1));
            }
        }
        Ok(None)
    }

    fn smoothness(&self) -> Result<Option<String>> {
        let cert = self.cert;
        let imgs = self.images()?;
        let det = match cert.kind {
            CertificateKind::Smooth => cert.pbig.clone(),
            CertificateKind::Bordered => {
                let n = self.nalg();
                let tvars: Vec<usize> = (0..cert.g.len()).map(|k| 1 + n + k).collect();
                determinant(&jacobian(&cert.g, &tvars)?, self.ring())?
            }
        };
        let val = series::evaluate(&det, &imgs)?;
        if val.constant_term().is_zero() {
            return fail(format!("determinant image {val} is not a unit"));
        }
        Ok(None)
    }
}
