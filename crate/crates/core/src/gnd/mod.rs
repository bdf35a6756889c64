//! Explicit Néron desingularization over a one-dimensional base.
//!
//! Given `B = k[x][Y]/I` and a morphism `v: B -> k'[[x]]` known to some
//! precision, the pipeline borders `B` so that `d = x^{2c}` becomes
//! congruent to a product of a minor and a quotient witness, lifts the
//! morphism modulo `d^3`, and writes down a standard smooth algebra
//! `B' = (D[Y,T]/(I,h,g))_s` through which `v` factors.

mod text;
mod verify;

use std::sync::Arc;

use crate::algebra::{AlgebraPresentation, CompletionMorphism};
use crate::error::{Error, Result, StageExt};
use crate::ideal::{ideal_member, Ideal};
use crate::matrix::{adjugate, mul, scalar, PolyMatrix};
use crate::poly::{Field, MonomialOrder, PolyRing, Polynomial};
use crate::series::TruncatedSeries;
use crate::smooth::{find_desing_data, jacobian, reduce_until_nonvanishing, DesingData, SearchOptions};

pub use text::{emit_certificate, parse_certificate};
pub use verify::{verify_certificate, verify_certificate_to, CheckResult};

/// Pipeline limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GndConfig {
    pub search: SearchOptions,
    /// Maximal number of reductions modulo the smoothing ideal.
    pub reduction_cap: usize,
}

impl Default for GndConfig {
    fn default() -> Self {
        GndConfig {
            search: SearchOptions::default(),
            reduction_cap: 4,
        }
    }
}

/// Whether the pipeline bordered the algebra or stopped at a unit minor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateKind {
    Bordered,
    /// `c = 0`: `B` localized at `M N` is already standard smooth.
    Smooth,
}

/// The intermediate smooth algebra `D`.
#[derive(Clone, Debug, PartialEq)]
pub enum Frame {
    /// `D = A`.
    Base,
    /// `D = (A[U]/(mu))_{mu'}` for `k' = k[U]/(mu)`.
    SimpleExtension {
        generator: String,
        minpoly: String,
        derivative: String,
    },
}

impl Frame {
    /// Lines of the `[D]` certificate section.
    pub fn describe(&self) -> Vec<String> {
        match self {
            Frame::Base => vec!["ring = A".to_string()],
            Frame::SimpleExtension {
                generator,
                minpoly,
                derivative,
            } => vec![
                format!("ring = A[{generator}]/({minpoly})"),
                format!("localize = {derivative}"),
            ],
        }
    }
}

/// A desingularization certificate. Polynomials of the smooth presentation
/// live in `ring = k'[x, Y, Z, T]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GndCertificate {
    pub kind: CertificateKind,
    /// The algebra as given (over `k`).
    pub algebra: AlgebraPresentation,
    pub morphism: CompletionMorphism,
    /// Data on the working presentation (after any reductions).
    pub data: DesingData,
    pub ring: Arc<PolyRing>,
    pub border_var: Option<String>,
    pub lift_vars: Vec<String>,
    /// Generators of the (bordered) working ideal.
    pub relations: Vec<Polynomial>,
    /// Indices into `relations` of the subsystem `f`.
    pub subsystem: Vec<usize>,
    /// Algebra-variable order placing the minor's columns first.
    pub perm: Vec<usize>,
    pub p: u32,
    pub d: Polynomial,
    pub pbig: Polynomial,
    /// Lift `y'`, one entry per algebra variable (including `Z`).
    pub yprime: Vec<Polynomial>,
    pub s: Polynomial,
    pub b: Vec<Polynomial>,
    pub hmat: PolyMatrix,
    pub gmat: PolyMatrix,
    pub h: Vec<Polynomial>,
    pub g: Vec<Polynomial>,
    pub q: Vec<Polynomial>,
    /// Images of the `T` variables.
    pub t: Vec<TruncatedSeries>,
    pub report: Vec<CheckResult>,
}

impl GndCertificate {
    pub fn frame(&self) -> Frame {
        frame_of(self.morphism.target_field(), self.algebra.field())
    }

    /// Whether every check in the stored report passed.
    pub fn passed(&self) -> bool {
        !self.report.is_empty() && self.report.iter().all(|c| c.passed)
    }

    /// `B'` as an honest ring: the relations `I, h, g` together with
    /// `w s - 1`, in `ring` extended by `w`.
    pub fn bprime(&self) -> Result<Ideal> {
        let name = self.ring.fresh_name("w");
        let ext = self.ring.append(&[name], MonomialOrder::DegRevLex)?;
        let mut gens = Vec::new();
        for p in self.relations.iter().chain(&self.h).chain(&self.g) {
            gens.push(p.remap(&ext)?);
        }
        let w = Polynomial::var(&ext, ext.nvars() - 1);
        gens.push(&(&w * &self.s.remap(&ext)?) - &Polynomial::one(&ext));
        Ideal::new(&ext, gens)
    }
}

fn frame_of(target: &Field, base: &Field) -> Frame {
    match target {
        Field::Extension(e) if target != base => {
            let u = e.generator();
            let ring = PolyRing::new(&[u], e.base().clone(), MonomialOrder::DegRevLex).unwrap();
            let mu = Polynomial::from_dense(&ring, 0, e.minpoly());
            let dmu = mu.partial_derivative(0).unwrap();
            Frame::SimpleExtension {
                generator: u.to_string(),
                minpoly: mu.to_string(),
                derivative: dmu.to_string(),
            }
        }
        _ => Frame::Base,
    }
}

fn check_fields(b: &AlgebraPresentation, v: &CompletionMorphism) -> Result<()> {
    let ok = |f: &Field| match f {
        Field::Rational => true,
        Field::Extension(e) => *e.base() == Field::Rational,
        Field::Prime(_) => false,
    };
    if !ok(b.field()) || !ok(v.target_field()) {
        return Err(Error::UnsupportedField(format!(
            "desingularization needs characteristic 0 and a simple extension of Q, got {} -> {}",
            b.field(),
            v.target_field()
        )));
    }
    if b.field() != &Field::Rational && b.field() != v.target_field() {
        return Err(Error::UnsupportedField(format!(
            "target field {} is not a simple extension of {}",
            v.target_field(),
            b.field()
        )));
    }
    Ok(())
}

/// Output of [`border_step`].
#[derive(Clone, Debug, PartialEq)]
pub struct Bordered {
    pub algebra: AlgebraPresentation,
    pub morphism: CompletionMorphism,
    pub data: DesingData,
    pub border_var: String,
    /// `d = d'^2`.
    pub d: Polynomial,
    /// `P = P'^2 Z^2`, congruent to `d` modulo the bordered ideal.
    pub pbig: Polynomial,
}

/// Adjoins `Z` with `f_{r+1} = -d' + P' Z` and extends the morphism by
/// `Z -> z`.
pub fn border_step(b: &AlgebraPresentation, v: &CompletionMorphism, data: &DesingData) -> Result<Bordered> {
    if data.c == 0 {
        return Err(Error::Domain("bordering needs c >= 1".into()));
    }
    let zname = b.ring().fresh_name("Z");
    let ring1 = b.ring().append(std::slice::from_ref(&zname), MonomialOrder::DegRevLex)?;
    let lift = |p: &Polynomial| p.remap(&ring1);
    let zv = Polynomial::var(&ring1, ring1.nvars() - 1);
    let pprime = lift(&data.pprime())?;
    let dprime = lift(&data.dprime)?;
    let border = &(&pprime * &zv) - &dprime;
    let mut gens: Vec<Polynomial> = b.gens().iter().map(lift).collect::<Result<_>>()?;
    let border_index = gens.len();
    gens.push(border);
    let b1 = AlgebraPresentation::new(&ring1, b.nbase(), gens)?;

    let mut images = v.images().to_vec();
    images.push(data.z.clone());
    let v1 = CompletionMorphism::new(v.ring(), images)?;
    if v1.precision() < 6 * data.c {
        return Err(Error::InsufficientPrecision(format!(
            "z is known to {}, the lift needs {}",
            v1.precision(),
            6 * data.c
        )));
    }

    let d = &dprime * &dprime;
    let pbig = &(&pprime * &pprime) * &(&zv * &zv);
    if !ideal_member(&(&d - &pbig), b1.ideal())? {
        return Err(Error::Internal("d - P is not in the bordered ideal".into()));
    }
    let mut subset = data.subset.clone();
    subset.push(border_index);
    let mut columns = data.columns.clone();
    columns.push(b.nalg());
    let data1 = DesingData {
        subset,
        columns,
        minor: &lift(&data.minor)? * &pprime,
        witness: &lift(&data.witness)? * &(&zv * &zv),
        c: data.c,
        dprime: dprime.clone(),
        z: data.z.clone(),
    };
    Ok(Bordered {
        algebra: b1,
        morphism: v1,
        data: data1,
        border_var: zname,
        d,
        pbig,
    })
}

/// `y'`: the images truncated below degree `3 ord(d)`, as polynomials in
/// `x` of `ring` (whose variable 0 is `x`).
pub fn truncate_lift(v: &CompletionMorphism, d: &Polynomial, ring: &Arc<PolyRing>) -> Result<Vec<Polynomial>> {
    let bound = 3 * d.total_degree().unwrap_or(0);
    if v.precision() < bound {
        return Err(Error::InsufficientPrecision(format!(
            "the lift needs the morphism modulo x^{bound}, it is known to {}",
            v.precision()
        )));
    }
    let x = &ring.vars()[0];
    if x != v.variable() {
        return Err(Error::Structural(format!("base variable `{x}` differs from `{}`", v.variable())));
    }
    v.images().iter().map(|s| s.poly().truncate(bound).remap(ring)).collect()
}

/// Substitutes `Y_j -> y'_j` (variables `1..=n` of the ring).
fn at_lift(p: &Polynomial, yprime: &[Polynomial]) -> Result<Polynomial> {
    let assignment: Vec<(usize, Polynomial)> = yprime.iter().enumerate().map(|(j, y)| (j + 1, y.clone())).collect();
    p.substitute(&assignment)
}

fn divides_x_power(p: &Polynomial, e: u32) -> bool {
    p.terms().iter().all(|(m, _)| m.exponent(0) >= e)
}

/// `s = P(y')/d` and `b = f(y')/d^2`.
pub fn compute_s_b(
    f: &[Polynomial],
    yprime: &[Polynomial],
    d: &Polynomial,
    pbig: &Polynomial,
) -> Result<(Polynomial, Vec<Polynomial>)> {
    let e = d.total_degree().unwrap_or(0);
    let s = at_lift(pbig, yprime)?
        .div_exact(d)
        .map_err(|_| Error::Internal("P(y') is not divisible by d".into()))?;
    if !divides_x_power(&(&s - &Polynomial::one(s.ring())), e) {
        return Err(Error::Internal("s is not congruent to 1 modulo d".into()));
    }
    let d2 = d * d;
    let mut b = Vec::with_capacity(f.len());
    for fi in f {
        let bi = at_lift(fi, yprime)?
            .div_exact(&d2)
            .map_err(|_| Error::Internal(format!("{fi} at y' is not divisible by d^2")))?;
        if !divides_x_power(&bi, e) {
            return Err(Error::Internal("b does not lie in (d)".into()));
        }
        b.push(bi);
    }
    Ok((s, b))
}

/// The bordered Jacobian `H` of `f` (columns in `perm` order, rows below
/// `f` given by `(0 | Id)`) and `G = N adj(H)`; checks `GH = HG = P Id`.
pub fn build_h_g(
    f: &[Polynomial],
    perm: &[usize],
    witness: &Polynomial,
    pbig: &Polynomial,
) -> Result<(PolyMatrix, PolyMatrix)> {
    let ring = witness.ring().clone();
    let n = perm.len();
    let r = f.len();
    let vars: Vec<usize> = perm.iter().map(|&j| j + 1).collect();
    let mut hmat = jacobian(f, &vars)?;
    for i in r..n {
        hmat.push(
            (0..n)
                .map(|j| if j == i { Polynomial::one(&ring) } else { Polynomial::zero(&ring) })
                .collect(),
        );
    }
    let adj = adjugate(&hmat, &ring)?;
    let gmat: PolyMatrix = adj.iter().map(|row| row.iter().map(|e| witness * e).collect()).collect();
    let target = scalar(pbig, n);
    if mul(&gmat, &hmat)? != target || mul(&hmat, &gmat)? != target {
        return Err(Error::Internal("GH = HG = P Id fails".into()));
    }
    Ok((hmat, gmat))
}

/// Lift equations built from the bordered data.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftEquations {
    pub h: Vec<Polynomial>,
    pub g: Vec<Polynomial>,
    pub q: Vec<Polynomial>,
}

/// `h = s(Y - y') - d G(y') T` and `g_i = s^p b_i + s^p T_i + Q_i`, with
/// `Q_i = sum_{j>=2} [l^j] f_i(y' + l G(y')T) s^{p-j} d^{j-2}`.
///
/// `tvars` are the ring indices of `T_1, ..., T_n`.
#[allow(clippy::too_many_arguments)]
pub fn build_lift_equations(
    f: &[Polynomial],
    yprime: &[Polynomial],
    perm: &[usize],
    d: &Polynomial,
    s: &Polynomial,
    b: &[Polynomial],
    gmat: &PolyMatrix,
    tvars: &[usize],
    p: u32,
) -> Result<LiftEquations> {
    let ring = d.ring().clone();
    let n = perm.len();
    // W = G(y') T
    let mut w = Vec::with_capacity(n);
    for row in gmat {
        let mut acc = Polynomial::zero(&ring);
        for (k, e) in row.iter().enumerate() {
            if !e.is_zero() {
                acc = &acc + &(&at_lift(e, yprime)? * &Polynomial::var(&ring, tvars[k]));
            }
        }
        w.push(acc);
    }
    let mut h = Vec::with_capacity(n);
    for (j, &col) in perm.iter().enumerate() {
        let shift = &Polynomial::var(&ring, col + 1) - &yprime[col];
        h.push(&(s * &shift) - &(d * &w[j]));
    }

    let lname = ring.fresh_name("L");
    let lring = ring.append(&[lname], MonomialOrder::DegRevLex)?;
    let l = Polynomial::var(&lring, lring.nvars() - 1);
    let mut images: Vec<Polynomial> = (0..ring.nvars()).map(|i| Polynomial::var(&lring, i)).collect();
    for (j, &col) in perm.iter().enumerate() {
        images[col + 1] = &yprime[col].remap(&lring)? + &(&l * &w[j].remap(&lring)?);
    }
    let li = lring.nvars() - 1;
    let sp = s.pow(p);
    let mut g = Vec::with_capacity(f.len());
    let mut q = Vec::with_capacity(f.len());
    for (i, fi) in f.iter().enumerate() {
        let taylor = fi.compose(&lring, &images)?;
        let top = taylor.degree_in(li).unwrap_or(0);
        if top > p {
            return Err(Error::Internal(format!("degree {top} of {fi} exceeds p = {p}")));
        }
        let mut qi = Polynomial::zero(&ring);
        for j in 2..=top {
            let coeff = taylor.coefficient_of(li, j).remap(&ring)?;
            qi = &qi + &(&(&coeff * &s.pow(p - j)) * &d.pow(j - 2));
        }
        let t = Polynomial::var(&ring, tvars[i]);
        g.push(&(&(&sp * &b[i]) + &(&sp * &t)) + &qi);
        q.push(qi);
    }
    Ok(LiftEquations { h, g, q })
}

/// Images `t = H(y')((Y-hat) - y')/d^2` of the `T` variables.
pub fn lift_images(
    hmat: &PolyMatrix,
    yprime: &[Polynomial],
    perm: &[usize],
    d: &Polynomial,
    v: &CompletionMorphism,
) -> Result<Vec<TruncatedSeries>> {
    let sring = v.ring();
    let prec = v.precision();
    let u: Vec<TruncatedSeries> = perm
        .iter()
        .map(|&col| {
            let img = &v.images()[col];
            img.sub(&TruncatedSeries::new(yprime[col].remap(sring)?, img.precision()))
        })
        .collect::<Result<_>>()?;
    let d2 = (d * d).remap(sring)?;
    hmat.iter()
        .map(|row| {
            let mut acc: Option<TruncatedSeries> = None;
            for (k, e) in row.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                let term = u[k].mul_exact(&at_lift(e, yprime)?.remap(sring)?)?;
                acc = Some(match acc {
                    None => term,
                    Some(a) => a.add(&term)?,
                });
            }
            let acc = acc.unwrap_or_else(|| TruncatedSeries::zero(sring, prec));
            let d2 = TruncatedSeries::new(d2.clone(), acc.precision());
            acc.divide_exact(&d2).map_err(|e| match e {
                Error::Divisibility(m) => Error::InsufficientPrecision(m),
                e => e,
            })
        })
        .collect()
}

fn lift_var_names(ring: &Arc<PolyRing>, n: usize) -> Vec<String> {
    let mut names: Vec<String> = Vec::with_capacity(n);
    for i in 1..=n {
        let stem = format!("T{i}");
        let mut name = ring.fresh_name(&stem);
        let mut k = 1;
        while names.contains(&name) {
            name = format!("{stem}_{k}");
            k += 1;
        }
        names.push(name);
    }
    names
}

fn working_ring(b: &AlgebraPresentation, field: &Field, lift_vars: &[String]) -> Result<Arc<PolyRing>> {
    let mut vars: Vec<String> = b.ring().vars().to_vec();
    vars.extend(lift_vars.iter().cloned());
    PolyRing::new(&vars, field.clone(), MonomialOrder::DegRevLex)
}

pub(crate) fn column_order(columns: &[usize], n: usize) -> Vec<usize> {
    let mut perm = columns.to_vec();
    perm.extend((0..n).filter(|j| !columns.contains(j)));
    perm
}

/// Runs the whole pipeline and verifies the result.
pub fn desingularize(b: &AlgebraPresentation, v: &CompletionMorphism, cfg: &GndConfig) -> Result<GndCertificate> {
    check_fields(b, v).stage("input")?;
    if b.nbase() != 1 {
        return Err(Error::Structural("exactly one base variable is supported".into())).stage("input");
    }
    v.check_morphism(b).stage("input")?;
    let working = reduce_until_nonvanishing(b, v, cfg.reduction_cap, &cfg.search).stage("reduce")?;
    let data = find_desing_data(&working, v, &cfg.search).stage("find_desing_data")?;
    let mut cert = if data.c == 0 {
        smooth_certificate(b, v, &working, data).stage("short_circuit")?
    } else {
        bordered_certificate(b, v, &working, data)?
    };
    cert.report = verify_certificate(&cert, b, v);
    Ok(cert)
}

fn smooth_certificate(
    b: &AlgebraPresentation,
    v: &CompletionMorphism,
    working: &AlgebraPresentation,
    data: DesingData,
) -> Result<GndCertificate> {
    let field = v.target_field().clone();
    let ring = working_ring(working, &field, &[])?;
    let relations: Vec<Polynomial> = working.gens().iter().map(|g| g.remap(&ring)).collect::<Result<_>>()?;
    let f: Vec<Polynomial> = data.subset.iter().map(|&i| relations[i].clone()).collect();
    let perm = column_order(&data.columns, working.nalg());
    let witness = data.witness.remap(&ring)?;
    let pbig = data.pprime().remap(&ring)?;
    let (hmat, gmat) = build_h_g(&f, &perm, &witness, &pbig)?;
    let p = relations.iter().filter_map(|g| g.total_degree()).max().unwrap_or(1);
    Ok(GndCertificate {
        kind: CertificateKind::Smooth,
        algebra: b.clone(),
        morphism: v.clone(),
        subsystem: data.subset.clone(),
        data,
        ring: ring.clone(),
        border_var: None,
        lift_vars: Vec::new(),
        relations,
        perm,
        p,
        d: Polynomial::one(&ring),
        pbig,
        yprime: Vec::new(),
        s: Polynomial::one(&ring),
        b: Vec::new(),
        hmat,
        gmat,
        h: Vec::new(),
        g: Vec::new(),
        q: Vec::new(),
        t: Vec::new(),
        report: Vec::new(),
    })
}

fn bordered_certificate(
    b: &AlgebraPresentation,
    v: &CompletionMorphism,
    working: &AlgebraPresentation,
    data: DesingData,
) -> Result<GndCertificate> {
    let bordered = border_step(working, v, &data).stage("border_step")?;
    let b1 = &bordered.algebra;
    let v1 = &bordered.morphism;
    let n1 = b1.nalg();
    let lift_vars = lift_var_names(b1.ring(), n1);
    let ring = working_ring(b1, v.target_field(), &lift_vars)?;
    let tvars: Vec<usize> = (0..n1).map(|k| 1 + n1 + k).collect();
    let to_w = |p: &Polynomial| p.remap(&ring);
    let relations: Vec<Polynomial> = b1.gens().iter().map(to_w).collect::<Result<_>>()?;
    let subsystem = bordered.data.subset.clone();
    let f: Vec<Polynomial> = subsystem.iter().map(|&i| relations[i].clone()).collect();
    let d = to_w(&bordered.d)?;
    let pbig = to_w(&bordered.pbig)?;
    let perm = column_order(&bordered.data.columns, n1);
    let p = relations.iter().filter_map(|g| g.total_degree()).max().unwrap_or(1);

    let yprime = truncate_lift(v1, &d, &ring).stage("truncate_lift")?;
    let (s, bvec) = compute_s_b(&f, &yprime, &d, &pbig).stage("compute_s_b")?;
    let witness = to_w(&bordered.data.witness)?;
    let (hmat, gmat) = build_h_g(&f, &perm, &witness, &pbig).stage("build_H_G")?;
    let eqs =
        build_lift_equations(&f, &yprime, &perm, &d, &s, &bvec, &gmat, &tvars, p).stage("build_h_g")?;
    let t = lift_images(&hmat, &yprime, &perm, &d, v1).stage("assemble_certificate")?;
    Ok(GndCertificate {
        kind: CertificateKind::Bordered,
        algebra: b.clone(),
        morphism: v.clone(),
        data,
        ring,
        border_var: Some(bordered.border_var),
        lift_vars,
        relations,
        subsystem,
        perm,
        p,
        d,
        pbig,
        yprime,
        s,
        b: bvec,
        hmat,
        gmat,
        h: eqs.h,
        g: eqs.g,
        q: eqs.q,
        t,
        report: Vec::new(),
    })
}
