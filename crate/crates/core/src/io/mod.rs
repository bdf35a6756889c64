//! Problem files, Gröbner basis documents and run reports.

pub mod sections;

use std::fmt::{self, Write as _};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gnd::CheckResult;
use crate::ideal::GroebnerBasis;
use crate::poly::{parse_polynomial, Coeff, Field, MonomialOrder, PolyRing, Polynomial};
use crate::series::{series_ring, TruncatedSeries};
use sections::{at, split_list, Document, Line, Section};

/// Parses `Q`, `F(p)` or `Q[a]/(a^2 - 2)`.
pub fn parse_field(text: &str) -> Result<Field> {
    let t = text.trim();
    if t == "Q" {
        return Ok(Field::Rational);
    }
    if let Some(p) = t.strip_prefix("F(").and_then(|r| r.strip_suffix(')')) {
        let p: u64 = p
            .trim()
            .parse()
            .map_err(|_| Error::parse(3, format!("invalid characteristic `{p}`")))?;
        return Field::prime(p);
    }
    let bad = || Error::parse(1, format!("unknown field `{t}`"));
    let open = t.find('[').ok_or_else(bad)?;
    let close = t.find(']').ok_or_else(bad)?;
    let base = parse_field(&t[..open])?;
    let gen = t[open + 1..close].trim();
    let mu = t[close + 1..]
        .trim()
        .strip_prefix("/(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(bad)?;
    let ring = PolyRing::new(&[gen], base.clone(), MonomialOrder::DegRevLex)?;
    let mu = parse_polynomial(mu, &ring)?;
    let deg = mu.degree_in(0).unwrap_or(0);
    let coeffs: Vec<Coeff> = (0..=deg).map(|i| mu.coefficient_of(0, i).constant_term()).collect();
    Field::extension(base, gen, coeffs)
}

/// Typed `[options]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    pub order: MonomialOrder,
    pub precision: Option<u32>,
    pub subset_budget: Option<usize>,
    pub max_subset_size: Option<usize>,
    pub reduction_cap: Option<usize>,
    pub target: Option<u32>,
    pub c: Option<u32>,
    pub slack: Option<u32>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            order: MonomialOrder::DegRevLex,
            precision: None,
            subset_budget: None,
            max_subset_size: None,
            reduction_cap: None,
            target: None,
            c: None,
            slack: None,
        }
    }
}

/// A problem description shared by all subcommands. Sections a subcommand
/// does not need may be absent.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemFile {
    pub field: Field,
    /// Field of the series coefficients; equal to `field` unless declared.
    pub target_field: Field,
    pub base_vars: Vec<String>,
    pub algebra_vars: Vec<String>,
    pub ideal: Vec<Polynomial>,
    /// Second ideal for quotients.
    pub divisor: Vec<Polynomial>,
    /// Images of the algebra variables, in declaration order.
    pub morphism: Vec<TruncatedSeries>,
    /// Series in the base variables (Weierstrass preparation).
    pub series: Vec<TruncatedSeries>,
    /// Linear systems and module presentations, over `field[base]`.
    pub matrix: Vec<Vec<Polynomial>>,
    pub rhs: Vec<Polynomial>,
    pub solution: Vec<TruncatedSeries>,
    pub u: Vec<Vec<Polynomial>>,
    pub v: Vec<Vec<Polynomial>>,
    pub options: Options,
}

const PROBLEM_SECTIONS: [&str; 11] = [
    "field", "variables", "ideal", "divisor", "morphism", "series", "matrix", "rhs", "solution", "u", "v",
];

impl ProblemFile {
    /// `field[base, algebra]` with the configured order.
    pub fn ring(&self) -> Result<Arc<PolyRing>> {
        let vars: Vec<&String> = self.base_vars.iter().chain(&self.algebra_vars).collect();
        PolyRing::new(&vars, self.field.clone(), self.options.order.clone())
    }

    /// `field[base]`.
    pub fn base_ring(&self) -> Result<Arc<PolyRing>> {
        PolyRing::new(&self.base_vars, self.field.clone(), MonomialOrder::DegRevLex)
    }

    /// `target_field[x]` for the single base variable `x`.
    pub fn series_ring(&self) -> Result<Arc<PolyRing>> {
        match self.base_vars.as_slice() {
            [x] => series_ring(x, self.target_field.clone()),
            _ => Err(Error::Structural(
                "series in one variable need exactly one base variable".into(),
            )),
        }
    }
}

fn parse_u32(line: &Line, v: &str) -> Result<u32> {
    v.parse().map_err(|_| line.error(format!("expected a non-negative integer, got `{v}`")))
}

fn parse_usize(line: &Line, v: &str) -> Result<usize> {
    v.parse().map_err(|_| line.error(format!("expected a non-negative integer, got `{v}`")))
}

fn parse_options(sec: Option<&Section>) -> Result<Options> {
    let mut o = Options::default();
    let Some(sec) = sec else { return Ok(o) };
    for line in &sec.lines {
        let (k, v, off) = line.key_value().ok_or_else(|| line.error("expected `key = value`"))?;
        match k {
            "order" => o.order = at(line, off, v.parse())?,
            "precision" => o.precision = Some(parse_u32(line, v)?),
            "subset_budget" => o.subset_budget = Some(parse_usize(line, v)?),
            "max_subset_size" => o.max_subset_size = Some(parse_usize(line, v)?),
            "reduction_cap" => o.reduction_cap = Some(parse_usize(line, v)?),
            "target" => o.target = Some(parse_u32(line, v)?),
            "c" => o.c = Some(parse_u32(line, v)?),
            "slack" => o.slack = Some(parse_u32(line, v)?),
            other => return Err(line.error(format!("unknown option `{other}`"))),
        }
    }
    Ok(o)
}

fn poly_lines(sec: Option<&Section>, ring: &Arc<PolyRing>) -> Result<Vec<Polynomial>> {
    let Some(sec) = sec else { return Ok(Vec::new()) };
    sec.lines
        .iter()
        .map(|l| at(l, 0, parse_polynomial(&l.text, ring)))
        .collect()
}

fn series_lines(sec: Option<&Section>, ring: &Arc<PolyRing>) -> Result<Vec<TruncatedSeries>> {
    let Some(sec) = sec else { return Ok(Vec::new()) };
    sec.lines
        .iter()
        .map(|l| at(l, 0, TruncatedSeries::parse(&l.text, ring)))
        .collect()
}

/// Rows of `;`-separated polynomials.
pub(crate) fn matrix_lines(sec: Option<&Section>, ring: &Arc<PolyRing>) -> Result<Vec<Vec<Polynomial>>> {
    let Some(sec) = sec else { return Ok(Vec::new()) };
    let mut rows = Vec::new();
    for l in &sec.lines {
        let mut row = Vec::new();
        let mut offset = 0;
        for cell in l.text.split(';') {
            row.push(at(l, offset, parse_polynomial(cell, ring))?);
            offset += cell.len() + 1;
        }
        if let Some(first) = rows.first() {
            let first: &Vec<Polynomial> = first;
            if first.len() != row.len() {
                return Err(l.error("matrix rows have different lengths"));
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

pub(crate) fn parse_field_section(sec: &Section) -> Result<(Field, Field)> {
    let mut base = None;
    let mut target = None;
    for l in &sec.lines {
        match l.key_value() {
            Some(("base", v, off)) => base = Some(at(l, off, parse_field(v))?),
            Some(("target", v, off)) => target = Some(at(l, off, parse_field(v))?),
            Some((k, _, _)) => return Err(l.error(format!("unknown field key `{k}`"))),
            None if base.is_none() => base = Some(at(l, 0, parse_field(&l.text))?),
            None => return Err(l.error("the field is declared twice")),
        }
    }
    let base = base.ok_or_else(|| sec_error(sec, "no field declared"))?;
    let target = target.unwrap_or_else(|| base.clone());
    if !target.contains(&base) {
        return Err(sec_error(sec, format!("target field {target} does not contain {base}")));
    }
    Ok((base, target))
}

fn sec_error(sec: &Section, msg: impl Into<String>) -> Error {
    Error::Parse {
        line: sec.line,
        column: 1,
        message: msg.into(),
    }
}

/// Reads a problem file.
pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    let doc = Document::parse(text)?;
    let mut known = PROBLEM_SECTIONS.to_vec();
    known.push("options");
    doc.only(&known)?;
    let (field, target_field) = parse_field_section(doc.require("field")?)?;
    let vars = doc.require("variables")?;
    let (bl, base, _) = vars.require("base")?;
    let base_vars = split_list(base);
    if base_vars.is_empty() {
        return Err(bl.error("at least one base variable is required"));
    }
    let algebra_vars = vars.get("algebra").map(|(_, v, _)| split_list(v)).unwrap_or_default();
    let options = parse_options(doc.section("options"))?;
    let mut pf = ProblemFile {
        field,
        target_field,
        base_vars,
        algebra_vars,
        ideal: Vec::new(),
        divisor: Vec::new(),
        morphism: Vec::new(),
        series: Vec::new(),
        matrix: Vec::new(),
        rhs: Vec::new(),
        solution: Vec::new(),
        u: Vec::new(),
        v: Vec::new(),
        options,
    };
    let ring = pf.ring().map_err(|e| match e {
        Error::Structural(m) | Error::Domain(m) => vars.lines[0].error(m),
        e => e,
    })?;
    let base_ring = pf.base_ring()?;
    pf.ideal = poly_lines(doc.section("ideal"), &ring)?;
    pf.divisor = poly_lines(doc.section("divisor"), &ring)?;
    pf.series = series_lines(doc.section("series"), &base_ring)?;
    pf.matrix = matrix_lines(doc.section("matrix"), &base_ring)?;
    pf.rhs = poly_lines(doc.section("rhs"), &base_ring)?;
    pf.u = matrix_lines(doc.section("u"), &base_ring)?;
    pf.v = matrix_lines(doc.section("v"), &base_ring)?;
    let needs_series = ["morphism", "solution"].iter().any(|s| doc.section(s).is_some());
    if needs_series {
        let sring = pf.series_ring().map_err(|e| bl.error(e.to_string()))?;
        pf.solution = series_lines(doc.section("solution"), &sring)?;
        if let Some(sec) = doc.section("morphism") {
            pf.morphism = parse_morphism(sec, &pf.algebra_vars, &sring)?;
        }
    }
    Ok(pf)
}

pub(crate) fn parse_morphism(sec: &Section, names: &[String], sring: &Arc<PolyRing>) -> Result<Vec<TruncatedSeries>> {
    let mut images: Vec<Option<TruncatedSeries>> = vec![None; names.len()];
    for l in &sec.lines {
        let (k, v, off) = l.key_value().ok_or_else(|| l.error("expected `Y = series`"))?;
        let idx = names
            .iter()
            .position(|n| n == k)
            .ok_or_else(|| Error::UndeclaredVariable(k.to_string()))?;
        if images[idx].is_some() {
            return Err(l.error(format!("`{k}` has two images")));
        }
        images[idx] = Some(at(l, off, TruncatedSeries::parse(v, sring))?);
    }
    images
        .into_iter()
        .zip(names)
        .map(|(s, n)| s.ok_or_else(|| sec_error(sec, format!("no image for `{n}`"))))
        .collect()
}

fn write_rows(out: &mut String, rows: &[Vec<Polynomial>]) {
    for row in rows {
        let cells: Vec<String> = row.iter().map(|p| p.to_string()).collect();
        let _ = writeln!(out, "{}", cells.join("; "));
    }
}

pub(crate) fn write_field_section(out: &mut String, base: &Field, target: &Field) {
    let _ = writeln!(out, "[field]\nbase = {base}");
    if target != base {
        let _ = writeln!(out, "target = {target}");
    }
}

/// Writes a problem file; [`parse_problem`] reads it back unchanged.
pub fn emit_problem(p: &ProblemFile) -> String {
    let mut out = String::new();
    write_field_section(&mut out, &p.field, &p.target_field);
    let _ = writeln!(out, "[variables]\nbase = {}", p.base_vars.join(", "));
    if !p.algebra_vars.is_empty() {
        let _ = writeln!(out, "algebra = {}", p.algebra_vars.join(", "));
    }
    let poly_section = |out: &mut String, name: &str, polys: &[Polynomial]| {
        if !polys.is_empty() {
            let _ = writeln!(out, "[{name}]");
            for q in polys {
                let _ = writeln!(out, "{q}");
            }
        }
    };
    poly_section(&mut out, "ideal", &p.ideal);
    poly_section(&mut out, "divisor", &p.divisor);
    if !p.morphism.is_empty() {
        let _ = writeln!(out, "[morphism]");
        for (n, s) in p.algebra_vars.iter().zip(&p.morphism) {
            let _ = writeln!(out, "{n} = {s}");
        }
    }
    for (name, list) in [("series", &p.series), ("solution", &p.solution)] {
        if !list.is_empty() {
            let _ = writeln!(out, "[{name}]");
            for s in list {
                let _ = writeln!(out, "{s}");
            }
        }
    }
    for (name, rows) in [("matrix", &p.matrix), ("u", &p.u), ("v", &p.v)] {
        if !rows.is_empty() {
            let _ = writeln!(out, "[{name}]");
            write_rows(&mut out, rows);
        }
    }
    poly_section(&mut out, "rhs", &p.rhs);
    let o = &p.options;
    let _ = writeln!(out, "[options]\norder = {}", o.order);
    let ints: [(&str, Option<u64>); 7] = [
        ("precision", o.precision.map(u64::from)),
        ("subset_budget", o.subset_budget.map(|v| v as u64)),
        ("max_subset_size", o.max_subset_size.map(|v| v as u64)),
        ("reduction_cap", o.reduction_cap.map(|v| v as u64)),
        ("target", o.target.map(u64::from)),
        ("c", o.c.map(u64::from)),
        ("slack", o.slack.map(u64::from)),
    ];
    for (k, v) in ints {
        if let Some(v) = v {
            let _ = writeln!(out, "{k} = {v}");
        }
    }
    out
}

/// Writes a reduced Gröbner basis with its ring.
pub fn emit_groebner(gb: &GroebnerBasis) -> String {
    let ring = gb.ring();
    let mut out = String::new();
    let _ = writeln!(out, "[field]\nbase = {}", ring.field());
    let _ = writeln!(out, "[variables]\nvars = {}", ring.vars().join(", "));
    let _ = writeln!(out, "[order]\n{}", ring.order());
    let _ = writeln!(out, "[basis]");
    for g in gb.elements() {
        let _ = writeln!(out, "{g}");
    }
    out
}

/// Reads a document written by [`emit_groebner`]; the basis is checked.
pub fn parse_groebner(text: &str) -> Result<GroebnerBasis> {
    let doc = Document::parse(text)?;
    doc.only(&["field", "variables", "order", "basis"])?;
    let (field, _) = parse_field_section(doc.require("field")?)?;
    let vars = split_list(doc.require("variables")?.require("vars")?.1);
    let osec = doc.require("order")?;
    let oline = osec.lines.first().ok_or_else(|| sec_error(osec, "no order given"))?;
    let order: MonomialOrder = at(oline, 0, oline.text.parse())?;
    let ring = PolyRing::new(&vars, field, order)?;
    let elements = poly_lines(doc.section("basis"), &ring)?;
    GroebnerBasis::from_elements(&ring, elements)
}

/// Summary of one CLI run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunReport {
    pub subcommand: String,
    /// Hex SHA-256 of the input file.
    pub input_digest: String,
    /// Output path, or `inline`.
    pub output: String,
    pub checks: Vec<CheckResult>,
    pub elapsed_ms: u128,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub(crate) fn format_check(c: &CheckResult) -> String {
    let prec = c.precision.map_or("exact".to_string(), |p| p.to_string());
    let status = if c.passed { "pass" } else { "fail" };
    format!("{} | {status} | {prec} | {}", c.name, c.detail)
}

pub(crate) fn parse_check(line: &Line) -> Result<CheckResult> {
    let parts: Vec<&str> = line.text.splitn(4, " | ").collect();
    if parts.len() != 4 {
        return Err(line.error("expected `name | pass|fail | precision | detail`"));
    }
    let passed = match parts[1] {
        "pass" => true,
        "fail" => false,
        other => return Err(line.error(format!("unknown status `{other}`"))),
    };
    let precision = match parts[2] {
        "exact" => None,
        p => Some(parse_u32(line, p)?),
    };
    Ok(CheckResult {
        name: parts[0].trim().to_string(),
        passed,
        precision,
        detail: parts[3].to_string(),
    })
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[run]")?;
        writeln!(f, "subcommand = {}", self.subcommand)?;
        writeln!(f, "input_sha256 = {}", self.input_digest)?;
        writeln!(f, "output = {}", self.output)?;
        writeln!(f, "status = {}", if self.passed() { "ok" } else { "failed" })?;
        if !self.checks.is_empty() {
            writeln!(f, "[checks]")?;
            for c in &self.checks {
                writeln!(f, "{}", format_check(c))?;
            }
        }
        writeln!(f, "[timing]")?;
        writeln!(f, "elapsed_ms = {}", self.elapsed_ms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::{groebner, Ideal};

    const NODE: &str = "\
[field]
Q
[variables]
base = x
algebra = Y1, Y2
[ideal]
Y1*Y2 - x^2
[morphism]
Y2 = x/(1 + x) + O(x^24)
Y1 = x + x^2 + O(x^24)
[options]
precision = 24
";

    #[test]
    fn fields() {
        assert_eq!(parse_field("Q").unwrap(), Field::Rational);
        assert_eq!(parse_field("F(101)").unwrap(), Field::prime(101).unwrap());
        let e = parse_field("Q[a]/(a^2 - 2)").unwrap();
        assert_eq!(parse_field(&e.to_string()).unwrap(), e);
        assert!(parse_field("R").is_err());
    }

    #[test]
    fn minimal_problem() {
        let p = parse_problem("[field]\nQ\n[variables]\nbase = x\n").unwrap();
        assert!(p.ideal.is_empty() && p.algebra_vars.is_empty());
    }

    #[test]
    fn node_problem_round_trip() {
        let p = parse_problem(NODE).unwrap();
        assert_eq!(p.morphism.len(), 2);
        assert_eq!(p.morphism[0].to_string(), "x + x^2 + O(x^24)");
        assert_eq!(p.options.precision, Some(24));
        let again = parse_problem(&emit_problem(&p)).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn undeclared_variable_is_named() {
        let src = "[field]\nQ\n[variables]\nbase = x\nalgebra = Y1, Y2\n[ideal]\nY1*Y3 - x\n";
        assert_eq!(parse_problem(src), Err(Error::UndeclaredVariable("Y3".into())));
    }

    #[test]
    fn positions_and_markers() {
        let src = "[field]\nQ\n[variables]\nbase = x\nalgebra = Y\n[morphism]\nY = x + x^2\n";
        match parse_problem(src) {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 7);
                assert!(message.contains("precision marker"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let src = "[field]\nQ\n[variables]\nbase = x\n[ideal]\nx +* 1\n";
        assert!(matches!(parse_problem(src), Err(Error::Parse { line: 6, column: 4, .. })));
    }

    #[test]
    fn groebner_round_trip() {
        let ring = PolyRing::new(&["x", "y"], Field::Rational, MonomialOrder::Lex).unwrap();
        let gens = vec![
            parse_polynomial("x^2 - y", &ring).unwrap(),
            parse_polynomial("x*y - 1", &ring).unwrap(),
        ];
        let gb = groebner(&Ideal::new(&ring, gens).unwrap()).unwrap();
        assert_eq!(parse_groebner(&emit_groebner(&gb)).unwrap(), gb);
    }
}
