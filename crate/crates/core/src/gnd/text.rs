//! Section-tagged text form of a certificate.

use std::fmt::Write as _;
use std::sync::Arc;

use super::{CertificateKind, GndCertificate};
use crate::algebra::{AlgebraPresentation, CompletionMorphism};
use crate::error::{Error, Result};
use crate::io::sections::{at, split_list, Document, Line, Section};
use crate::io::{format_check, matrix_lines, parse_check, parse_field_section, parse_morphism, write_field_section};
use crate::matrix::PolyMatrix;
use crate::poly::{parse_polynomial, MonomialOrder, PolyRing, Polynomial};
use crate::series::{series_ring, TruncatedSeries};
use crate::smooth::DesingData;

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", ")
}

fn write_matrix(out: &mut String, name: &str, m: &PolyMatrix) {
    let _ = writeln!(out, "[{name}]");
    for row in m {
        let _ = writeln!(out, "{}", join(row).replace(", ", "; "));
    }
}

fn write_polys(out: &mut String, name: &str, polys: &[Polynomial]) {
    let _ = writeln!(out, "[{name}]");
    for p in polys {
        let _ = writeln!(out, "{p}");
    }
}

/// Serializes a certificate; [`parse_certificate`] inverts this exactly.
pub fn emit_certificate(cert: &GndCertificate) -> String {
    let mut out = String::new();
    let b = &cert.algebra;
    write_field_section(&mut out, b.field(), cert.morphism.target_field());
    let _ = writeln!(out, "[variables]");
    let _ = writeln!(out, "base = {}", b.base_vars().join(", "));
    let _ = writeln!(out, "algebra = {}", b.algebra_vars().join(", "));
    let _ = writeln!(out, "order = {}", b.ring().order());
    if let Some(z) = &cert.border_var {
        let _ = writeln!(out, "border = {z}");
    }
    if !cert.lift_vars.is_empty() {
        let _ = writeln!(out, "lift = {}", cert.lift_vars.join(", "));
    }
    write_polys(&mut out, "ideal", b.gens());
    let _ = writeln!(out, "[morphism]");
    for (n, s) in b.algebra_vars().iter().zip(cert.morphism.images()) {
        let _ = writeln!(out, "{n} = {s}");
    }

    let d = &cert.data;
    let kind = match cert.kind {
        CertificateKind::Bordered => "bordered",
        CertificateKind::Smooth => "smooth",
    };
    let _ = writeln!(out, "[data]");
    let _ = writeln!(out, "kind = {kind}");
    let _ = writeln!(out, "subset = {}", join(&d.subset));
    let _ = writeln!(out, "columns = {}", join(&d.columns));
    let _ = writeln!(out, "minor = {}", d.minor);
    let _ = writeln!(out, "witness = {}", d.witness);
    let _ = writeln!(out, "c = {}", d.c);
    let _ = writeln!(out, "dprime = {}", d.dprime);
    let _ = writeln!(out, "z = {}", d.z);

    let _ = writeln!(out, "[D]");
    for line in cert.frame().describe() {
        let _ = writeln!(out, "{line}");
    }

    write_polys(&mut out, "relations", &cert.relations);
    let _ = writeln!(out, "[lift]");
    let _ = writeln!(out, "subsystem = {}", join(&cert.subsystem));
    let _ = writeln!(out, "perm = {}", join(&cert.perm));
    let _ = writeln!(out, "p = {}", cert.p);
    let _ = writeln!(out, "d = {}", cert.d);
    let _ = writeln!(out, "P = {}", cert.pbig);
    let _ = writeln!(out, "s = {}", cert.s);
    let names = &cert.ring.vars()[1..=cert.yprime.len()];
    for (n, y) in names.iter().zip(&cert.yprime) {
        let _ = writeln!(out, "y'({n}) = {y}");
    }
    for (i, bi) in cert.b.iter().enumerate() {
        let _ = writeln!(out, "b({}) = {bi}", i + 1);
    }
    write_matrix(&mut out, "H", &cert.hmat);
    write_matrix(&mut out, "G", &cert.gmat);
    write_polys(&mut out, "hpolys", &cert.h);
    write_polys(&mut out, "gpolys", &cert.g);
    write_polys(&mut out, "qpolys", &cert.q);
    let _ = writeln!(out, "[bprime]");
    let _ = writeln!(out, "localize = {}", cert.s);
    let _ = writeln!(out, "[t]");
    for (n, t) in cert.lift_vars.iter().zip(&cert.t) {
        let _ = writeln!(out, "{n} = {t}");
    }
    let _ = writeln!(out, "[report]");
    for c in &cert.report {
        let _ = writeln!(out, "{}", format_check(c));
    }
    out
}

fn indices(line: &Line, v: &str) -> Result<Vec<usize>> {
    split_list(v)
        .iter()
        .map(|s| s.parse().map_err(|_| line.error(format!("expected an index, got `{s}`"))))
        .collect()
}

fn value<'a>(sec: &'a Section, key: &str) -> Result<(&'a Line, &'a str, usize)> {
    sec.require(key)
}

fn poly_value(sec: &Section, key: &str, ring: &Arc<PolyRing>) -> Result<Polynomial> {
    let (l, v, off) = value(sec, key)?;
    at(l, off, parse_polynomial(v, ring))
}

fn polys(doc: &Document, name: &str, ring: &Arc<PolyRing>) -> Result<Vec<Polynomial>> {
    match doc.section(name) {
        None => Ok(Vec::new()),
        Some(sec) => sec.lines.iter().map(|l| at(l, 0, parse_polynomial(&l.text, ring))).collect(),
    }
}

const CERT_SECTIONS: [&str; 16] = [
    "field", "variables", "ideal", "morphism", "data", "D", "relations", "lift", "H", "G", "hpolys", "gpolys",
    "qpolys", "bprime", "t", "report",
];

/// Reads a certificate written by [`emit_certificate`].
pub fn parse_certificate(text: &str) -> Result<GndCertificate> {
    let doc = Document::parse(text)?;
    doc.only(&CERT_SECTIONS)?;
    let (field, target) = parse_field_section(doc.require("field")?)?;
    let vars = doc.require("variables")?;
    let base = split_list(value(vars, "base")?.1);
    let algebra = split_list(value(vars, "algebra")?.1);
    let (ol, ov, ooff) = value(vars, "order")?;
    let order: MonomialOrder = at(ol, ooff, ov.parse())?;
    let border = vars.get("border").map(|(_, v, _)| v.trim().to_string());
    let lift_vars = vars.get("lift").map(|(_, v, _)| split_list(v)).unwrap_or_default();
    let [x] = base.as_slice() else {
        return Err(vars.lines[0].error("certificates have exactly one base variable"));
    };

    let mut rvars = base.clone();
    rvars.extend(algebra.iter().cloned());
    let rring = PolyRing::new(&rvars, field.clone(), order)?;
    let algebra_p = AlgebraPresentation::new(&rring, 1, polys(&doc, "ideal", &rring)?)?;
    let sring = series_ring(x, target.clone())?;
    let morphism = CompletionMorphism::new(&sring, parse_morphism(doc.require("morphism")?, &algebra, &sring)?)?;

    let mut wvars = rvars.clone();
    wvars.extend(border.iter().cloned());
    wvars.extend(lift_vars.iter().cloned());
    let ring = PolyRing::new(&wvars, target, MonomialOrder::DegRevLex)?;

    let ds = doc.require("data")?;
    let (kl, kv, _) = value(ds, "kind")?;
    let kind = match kv {
        "bordered" => CertificateKind::Bordered,
        "smooth" => CertificateKind::Smooth,
        other => return Err(kl.error(format!("unknown certificate kind `{other}`"))),
    };
    let (sl, sv, _) = value(ds, "subset")?;
    let (cl, cv, _) = value(ds, "columns")?;
    let (zl, zv, zoff) = value(ds, "z")?;
    let (ccl, ccv, _) = value(ds, "c")?;
    let data = DesingData {
        subset: indices(sl, sv)?,
        columns: indices(cl, cv)?,
        minor: poly_value(ds, "minor", &rring)?,
        witness: poly_value(ds, "witness", &rring)?,
        c: ccv.parse().map_err(|_| ccl.error("expected an integer"))?,
        dprime: poly_value(ds, "dprime", &rring)?,
        z: at(zl, zoff, TruncatedSeries::parse(zv, &sring))?,
    };

    let ls = doc.require("lift")?;
    let (subl, subv, _) = value(ls, "subsystem")?;
    let (pml, pmv, _) = value(ls, "perm")?;
    let (pl, pv, _) = value(ls, "p")?;
    let perm = indices(pml, pmv)?;
    let mut yprime = Vec::new();
    let mut b = Vec::new();
    for l in &ls.lines {
        let Some((k, v, off)) = l.key_value() else {
            return Err(l.error("expected `key = value`"));
        };
        if k.starts_with("y'(") {
            yprime.push(at(l, off, parse_polynomial(v, &ring))?);
        } else if k.starts_with("b(") {
            b.push(at(l, off, parse_polynomial(v, &ring))?);
        }
    }
    let t = match doc.section("t") {
        None => Vec::new(),
        Some(sec) => {
            let mut out = Vec::new();
            for l in &sec.lines {
                let (_, v, off) = l.key_value().ok_or_else(|| l.error("expected `T = series`"))?;
                out.push(at(l, off, TruncatedSeries::parse(v, &sring))?);
            }
            out
        }
    };
    let report = match doc.section("report") {
        None => Vec::new(),
        Some(sec) => sec.lines.iter().map(parse_check).collect::<Result<_>>()?,
    };
    let cert = GndCertificate {
        kind,
        algebra: algebra_p,
        morphism,
        data,
        ring: ring.clone(),
        border_var: border,
        lift_vars,
        relations: polys(&doc, "relations", &ring)?,
        subsystem: indices(subl, subv)?,
        perm,
        p: pv.parse().map_err(|_| pl.error("expected an integer"))?,
        d: poly_value(ls, "d", &ring)?,
        pbig: poly_value(ls, "P", &ring)?,
        yprime,
        s: poly_value(ls, "s", &ring)?,
        b,
        hmat: matrix_lines(doc.section("H"), &ring)?,
        gmat: matrix_lines(doc.section("G"), &ring)?,
        h: polys(&doc, "hpolys", &ring)?,
        g: polys(&doc, "gpolys", &ring)?,
        q: polys(&doc, "qpolys", &ring)?,
        t,
        report,
    };
    if let Some(sec) = doc.section("bprime") {
        let loc = poly_value(sec, "localize", &ring)?;
        if loc != cert.s {
            return Err(sec.lines[0].error("the localizing element differs from s"));
        }
    }
    if cert.frame().describe() != frame_text_of(doc.section("D")) {
        return Err(Error::Parse {
            line: doc.section("D").map_or(1, |s| s.line),
            column: 1,
            message: "[D] does not match the declared fields".into(),
        });
    }
    Ok(cert)
}

fn frame_text_of(sec: Option<&Section>) -> Vec<String> {
    sec.map(|s| s.lines.iter().map(|l| l.text.trim().to_string()).collect())
        .unwrap_or_default()
}
