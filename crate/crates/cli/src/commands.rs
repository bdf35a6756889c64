use std::fmt::Write as _;
use std::sync::Arc;

use gnd_core::algebra::{AlgebraPresentation, CompletionMorphism};
use gnd_core::approx::{
    check_candidate, linear_factor, module_iso_system, newton_lift, strong_approx_check, EquationFamily,
    FactorOptions, LiftRequest,
};
use gnd_core::gnd::{
    desingularize, emit_certificate, parse_certificate, verify_certificate, verify_certificate_to, CheckResult,
    GndConfig,
};
use gnd_core::ideal::{groebner, ideal_quotient, Ideal};
use gnd_core::io::{emit_groebner, parse_problem, ProblemFile};
use gnd_core::series::{weierstrass_prepare, TruncatedSeries};
use gnd_core::smooth::{smoothing_ideal, SearchOptions};
use gnd_core::{Error, MonomialOrder, PolyRing, Polynomial, Result};

use crate::{Cli, Command};

/// Command-line overrides of the problem file.
pub struct Flags {
    pub order: Option<MonomialOrder>,
    pub precision: Option<u32>,
    pub subset_budget: Option<usize>,
    pub verify: bool,
}

impl From<&Cli> for Flags {
    fn from(cli: &Cli) -> Self {
        Flags {
            order: cli.order.map(Into::into),
            precision: cli.precision,
            subset_budget: cli.subset_budget,
            verify: cli.verify,
        }
    }
}

pub struct Output {
    pub artifact: String,
    pub checks: Vec<CheckResult>,
}

fn check(name: &str, passed: bool, precision: Option<u32>, detail: impl Into<String>) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed,
        precision,
        detail: detail.into(),
    }
}

pub fn dispatch(cmd: Command, text: &str, flags: &Flags) -> Result<Output> {
    if cmd == Command::Verify {
        return verify(text, flags);
    }
    let mut pf = parse_problem(text)?;
    if let Some(order) = &flags.order {
        reorder(&mut pf, order.clone())?;
    }
    match cmd {
        Command::Groebner => groebner_cmd(&pf),
        Command::Quotient => quotient(&pf),
        Command::SmoothLocus => smooth_locus(&pf, flags),
        Command::Gnd => gnd(&pf, flags),
        Command::Lift => lift(&pf, flags),
        Command::Weierstrass => weierstrass(&pf, flags),
        Command::LinearFactor => linear(&pf, flags),
        Command::ModuleIso => module_iso(&pf, flags),
        Command::Verify => unreachable!(),
    }
}

fn reorder(pf: &mut ProblemFile, order: MonomialOrder) -> Result<()> {
    pf.options.order = order;
    let ring = pf.ring()?;
    for p in pf.ideal.iter_mut().chain(pf.divisor.iter_mut()) {
        *p = p.remap(&ring)?;
    }
    Ok(())
}

/// Truncates to the requested precision; asking for more than is known is
/// an error.
fn cap(s: &TruncatedSeries, precision: Option<u32>) -> Result<TruncatedSeries> {
    match precision {
        None => Ok(s.clone()),
        Some(n) if n <= s.precision() => Ok(s.truncate(n)),
        Some(n) => Err(Error::InsufficientPrecision(format!(
            "{s} is known to {}, {n} was requested",
            s.precision()
        ))),
    }
}

fn search_options(pf: &ProblemFile, flags: &Flags) -> SearchOptions {
    let d = SearchOptions::default();
    SearchOptions {
        max_subset_size: pf.options.max_subset_size.unwrap_or(d.max_subset_size),
        max_subsets: flags.subset_budget.or(pf.options.subset_budget).unwrap_or(d.max_subsets),
        execution: d.execution,
    }
}

fn presentation(pf: &ProblemFile) -> Result<AlgebraPresentation> {
    AlgebraPresentation::new(&pf.ring()?, pf.base_vars.len(), pf.ideal.clone())
}

fn groebner_cmd(pf: &ProblemFile) -> Result<Output> {
    let gb = groebner(&Ideal::new(&pf.ring()?, pf.ideal.clone())?)?;
    Ok(Output {
        artifact: emit_groebner(&gb),
        checks: Vec::new(),
    })
}

fn quotient(pf: &ProblemFile) -> Result<Output> {
    let ring = pf.ring()?;
    let q = ideal_quotient(&Ideal::new(&ring, pf.ideal.clone())?, &Ideal::new(&ring, pf.divisor.clone())?)?;
    Ok(Output {
        artifact: emit_groebner(&groebner(&q)?),
        checks: Vec::new(),
    })
}

fn smooth_locus(pf: &ProblemFile, flags: &Flags) -> Result<Output> {
    let h = smoothing_ideal(&presentation(pf)?, &search_options(pf, flags))?;
    Ok(Output {
        artifact: emit_groebner(&groebner(&h)?),
        checks: Vec::new(),
    })
}

fn gnd(pf: &ProblemFile, flags: &Flags) -> Result<Output> {
    let b = presentation(pf)?;
    let images = pf
        .morphism
        .iter()
        .map(|s| cap(s, flags.precision))
        .collect::<Result<Vec<_>>>()?;
    let v = CompletionMorphism::new(&pf.series_ring()?, images)?;
    let d = GndConfig::default();
    let cfg = GndConfig {
        search: search_options(pf, flags),
        reduction_cap: pf.options.reduction_cap.unwrap_or(d.reduction_cap),
    };
    let cert = desingularize(&b, &v, &cfg)?;
    let artifact = emit_certificate(&cert);
    let checks = if flags.verify {
        verify_certificate(&parse_certificate(&artifact)?, &b, &v)
    } else {
        cert.report.clone()
    };
    Ok(Output { artifact, checks })
}

fn verify(text: &str, flags: &Flags) -> Result<Output> {
    let cert = parse_certificate(text)?;
    let checks = verify_certificate_to(&cert, &cert.algebra, &cert.morphism, flags.precision);
    Ok(Output {
        artifact: String::new(),
        checks,
    })
}

fn lift(pf: &ProblemFile, flags: &Flags) -> Result<Output> {
    let target = flags
        .precision
        .or(pf.options.target)
        .ok_or_else(|| Error::Domain("lift needs a target precision".into()))?;
    let c = pf.options.c.unwrap_or(0);
    let req = LiftRequest {
        system: pf.ideal.clone(),
        start: pf.morphism.clone(),
        c,
        e: c,
        target,
    };
    let out = newton_lift(&req)?;
    let names = &pf.algebra_vars;
    let mut a = String::new();
    let cols: Vec<&str> = out.columns.iter().map(|&j| names[j].as_str()).collect();
    let trace: Vec<String> = out.trace.iter().map(|v| v.to_string()).collect();
    let _ = writeln!(a, "[lift]");
    let _ = writeln!(a, "columns = {}", cols.join(", "));
    let _ = writeln!(a, "minor_order = {}", out.minor_order);
    let _ = writeln!(a, "iterations = {}", out.iterations());
    let _ = writeln!(a, "trace = {}", trace.join(", "));
    let _ = writeln!(a, "[solution]");
    for (n, s) in names.iter().zip(&out.solution) {
        let _ = writeln!(a, "{n} = {s}");
    }
    let solved = strong_approx_check(&req.system, &out.solution, target)?;
    let checks = vec![
        check("residual", solved, Some(target), "f(y) = 0 mod x^target"),
        check(
            "quadratic",
            out.converges_quadratically(c),
            None,
            "order(f(y_k+1)) >= 2 order(f(y_k)) - 2c",
        ),
    ];
    Ok(Output { artifact: a, checks })
}

fn weierstrass(pf: &ProblemFile, flags: &Flags) -> Result<Output> {
    if pf.series.is_empty() {
        return Err(Error::Domain("no [series] given".into()));
    }
    let mut a = String::new();
    let mut checks = Vec::new();
    for (i, f) in pf.series.iter().enumerate() {
        let f = cap(f, flags.precision)?;
        let w = weierstrass_prepare(&f)?;
        let k = i + 1;
        let _ = writeln!(a, "[series{k}]");
        let _ = writeln!(a, "p = {}", w.p);
        let stable: Vec<String> = (0..w.p).map(|i| w.stable_z_precision(i).to_string()).collect();
        let _ = writeln!(a, "stable_unit = {}", w.stable_unit_precision());
        let _ = writeln!(a, "stable_z = {}", stable.join(", "));
        let _ = writeln!(a, "unit = {}", w.unit);
        let _ = writeln!(a, "wpoly = {}", w.wpoly);
        for (j, z) in w.z.iter().enumerate() {
            let _ = writeln!(a, "z{j} = {z}");
        }
        let prod = w.unit.mul(&w.wpoly)?;
        let prec = prod.precision().min(f.precision());
        checks.push(check(
            &format!("product{k}"),
            prod.agrees_with(&f, prec)?,
            Some(prec),
            "unit * wpoly = f",
        ));
        checks.push(check(
            &format!("distinguished{k}"),
            w.z.iter().all(|z| z.constant_term().is_zero()),
            None,
            "z_i(0) = 0",
        ));
    }
    Ok(Output { artifact: a, checks })
}

fn linear(pf: &ProblemFile, flags: &Flags) -> Result<Output> {
    let y = pf
        .solution
        .iter()
        .map(|s| cap(s, flags.precision))
        .collect::<Result<Vec<_>>>()?;
    let opts = FactorOptions {
        slack: pf.options.slack.unwrap_or(FactorOptions::default().slack),
    };
    let f = linear_factor(&pf.matrix, &pf.rhs, &y, &opts)?;
    let mut a = String::new();
    let _ = writeln!(a, "[particular]");
    for c in &f.c_part {
        let _ = writeln!(a, "{c}");
    }
    let _ = writeln!(a, "[kernel]");
    for k in &f.kernel {
        let cells: Vec<String> = k.iter().map(|p| p.to_string()).collect();
        let _ = writeln!(a, "{}", cells.join("; "));
    }
    let _ = writeln!(a, "[coefficients]");
    for z in &f.z {
        let _ = writeln!(a, "{z}");
    }
    let mut checks = Vec::new();
    if !f.kernel.is_empty() {
        let back = f.reconstruct()?;
        let prec = back.iter().map(|s| s.precision()).min().unwrap_or(0);
        let mut ok = true;
        for (r, yi) in back.iter().zip(&y) {
            ok &= r.agrees_with(yi, prec)?;
        }
        checks.push(check("reconstruction", ok, Some(prec), "c + sum z_k y^(k) = y"));
    }
    Ok(Output { artifact: a, checks })
}

fn to_series(rows: &[Vec<Polynomial>], sring: &Arc<PolyRing>, precision: u32) -> Result<Vec<Vec<TruncatedSeries>>> {
    rows.iter()
        .map(|row| {
            row.iter()
                .map(|p| Ok(TruncatedSeries::new(p.remap(sring)?, precision)))
                .collect()
        })
        .collect()
}

fn module_iso(pf: &ProblemFile, flags: &Flags) -> Result<Output> {
    let precision = flags
        .precision
        .or(pf.options.precision)
        .ok_or_else(|| Error::Domain("module-iso needs a precision".into()))?;
    let sring = pf.series_ring()?;
    let sys = module_iso_system(&to_series(&pf.u, &sring, precision)?, &to_series(&pf.v, &sring, precision)?)?;
    let mut a = String::new();
    let _ = writeln!(a, "[system]");
    let _ = writeln!(a, "unknowns = {}", sys.unknowns());
    let _ = writeln!(a, "precision = {}", sys.precision);
    let _ = writeln!(a, "[variables]");
    let _ = writeln!(a, "{}", sys.ring.vars()[1..].join(", "));
    let _ = writeln!(a, "[equations]");
    for (e, fam) in sys.equations.iter().zip(&sys.families) {
        let fam = match fam {
            EquationFamily::Image => "image",
            EquationFamily::Preimage => "preimage",
            EquationFamily::Determinant => "determinant",
        };
        let _ = writeln!(a, "{fam} | {e}");
    }
    let mut checks = Vec::new();
    if !pf.solution.is_empty() {
        if pf.solution.len() != sys.unknowns() {
            return Err(Error::Shape(format!(
                "{} candidate values for {} unknowns",
                pf.solution.len(),
                sys.unknowns()
            )));
        }
        let ok = check_candidate(&sys, &pf.solution, precision)?;
        checks.push(check("candidate", ok, Some(precision.min(sys.precision)), "all equations vanish, det X a unit"));
    }
    Ok(Output { artifact: a, checks })
}
