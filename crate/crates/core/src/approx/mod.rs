//! Lifting approximate solutions, linear factorization through `A[Z]`, and
//! the equation systems for module isomorphisms.

mod linear;
mod module_iso;

use std::sync::Arc;

pub use linear::{linear_factor, FactorOptions, LinearFactorization};
pub use module_iso::{check_candidate, module_iso_system, sweep_candidates, EquationFamily, ModuleIsoSystem, SweepOutcome};

use crate::error::{Error, Result};
use crate::gnd::{build_h_g, column_order};
use crate::matrix::determinant;
use crate::poly::{PolyRing, Polynomial};
use crate::series::{self, TruncatedSeries, Valuation};
use crate::smooth::{combinations, jacobian};

/// Upper bound on Newton iterations; quadratic convergence needs about
/// `log2(target)` of them.
const MAX_ITERATIONS: usize = 64;

/// A system `f(x, Y) = 0` with an approximate solution `y0`.
///
/// `f` lives in a ring whose variable 0 is `x` and whose variables `1..=n`
/// are the unknowns. `y0` must satisfy `f(y0) = 0 mod x^(2c+1)`, and some
/// maximal minor of the Jacobian must have order at most `min(e, c)` at `y0`.
#[derive(Clone, Debug)]
pub struct LiftRequest {
    pub system: Vec<Polynomial>,
    pub start: Vec<TruncatedSeries>,
    pub c: u32,
    pub e: u32,
    pub target: u32,
}

/// Result of [`newton_lift`].
#[derive(Clone, Debug, PartialEq)]
pub struct LiftOutcome {
    /// Known to the requested target precision.
    pub solution: Vec<TruncatedSeries>,
    /// Jacobian columns of the minor used for the bordered step.
    pub columns: Vec<usize>,
    pub minor_order: u32,
    /// `order(f(y_k))` for `k = 0, 1, ...`; the last entry is `AtLeast(w)`
    /// for the working precision `w`.
    pub trace: Vec<Valuation>,
}

impl LiftOutcome {
    pub fn iterations(&self) -> usize {
        self.trace.len().saturating_sub(1)
    }

    /// Whether `order(f(y_{k+1})) >= 2 order(f(y_k)) - 2c` along the trace.
    /// A residual that vanishes to the working precision counts as meeting
    /// the bound.
    pub fn converges_quadratically(&self, c: u32) -> bool {
        self.trace.windows(2).all(|w| match (w[0], w[1]) {
            (_, Valuation::AtLeast(_)) => true,
            (a, Valuation::Finite(b)) => b >= (2 * a.lower_bound()).saturating_sub(2 * c),
        })
    }
}

fn residual_order(values: &[TruncatedSeries], precision: u32) -> Valuation {
    values
        .iter()
        .filter_map(|v| v.order().finite())
        .min()
        .map_or(Valuation::AtLeast(precision), Valuation::Finite)
}

fn images_at(ring: &Arc<PolyRing>, ys: &[Polynomial], precision: u32) -> Vec<TruncatedSeries> {
    let mut out = vec![TruncatedSeries::new(Polynomial::var(ring, 0), precision)];
    out.extend(ys.iter().map(|y| TruncatedSeries::new(y.clone(), precision)));
    out
}

fn validate(req: &LiftRequest) -> Result<(Arc<PolyRing>, usize)> {
    let n = req.start.len();
    let Some(first) = req.system.first() else {
        return Err(Error::Domain("the system is empty".into()));
    };
    let Some(y0) = req.start.first() else {
        return Err(Error::Domain("no unknowns".into()));
    };
    let ring = first.ring();
    if ring.nvars() != n + 1 {
        return Err(Error::Shape(format!(
            "the system ring has {} variables, expected x and {n} unknowns",
            ring.nvars()
        )));
    }
    if req.system.iter().any(|f| !f.ring().same(ring)) {
        return Err(Error::Structural("system polynomials live in different rings".into()));
    }
    let sring = y0.ring().clone();
    if sring.nvars() != 1 || req.start.iter().any(|y| !y.ring().same(&sring)) {
        return Err(Error::Structural("start values must be univariate series in one ring".into()));
    }
    if !sring.field().contains(ring.field()) {
        return Err(Error::Structural("the start values' field does not contain the system's".into()));
    }
    if req.system.len() > n {
        return Err(Error::Shape(format!("{} equations in {n} unknowns", req.system.len())));
    }
    if req.target == 0 {
        return Err(Error::Domain("target precision must be positive".into()));
    }
    Ok((sring, n))
}

/// Lifts `y0` to a solution of `f` modulo `x^target` by Newton steps on the
/// bordered Jacobian: `Delta = -G(y_k) (f(y_k), 0) / P(y_k)`.
///
/// The returned solution agrees with `y0` modulo `x^(c+1)`, and with the
/// unique such solution modulo `x^target`, so lifting further and truncating
/// gives the same series.
pub fn newton_lift(req: &LiftRequest) -> Result<LiftOutcome> {
    let (sring, n) = validate(req)?;
    let r = req.system.len();
    let c = req.c;
    let p0 = req.start.iter().map(|y| y.precision()).min().unwrap_or(0);
    if p0 < 2 * c + 1 {
        return Err(Error::InsufficientPrecision(format!(
            "start values are known to {p0}, the hypothesis needs {}",
            2 * c + 1
        )));
    }
    let ys0: Vec<Polynomial> = req.start.iter().map(|y| y.poly().clone()).collect();
    let f: Vec<Polynomial> = req.system.iter().map(|p| p.remap(&extended(&sring, p.ring())?)).collect::<Result<_>>()?;
    let ring = f[0].ring().clone();

    let at0 = images_at(&sring, &ys0, p0);
    let f0: Vec<TruncatedSeries> = f.iter().map(|p| series::evaluate(p, &at0)).collect::<Result<_>>()?;
    if let Valuation::Finite(o) = residual_order(&f0, p0) {
        if o < 2 * c + 1 {
            return Err(Error::NoWitness(format!("f(y0) has order {o}, the hypothesis needs {}", 2 * c + 1)));
        }
    }

    let bound = req.e.min(c);
    let vars: Vec<usize> = (1..=n).collect();
    let jac = jacobian(&f, &vars)?;
    let mut best: Option<(u32, Vec<usize>, Polynomial)> = None;
    for cols in combinations(n, r) {
        let sub: Vec<Vec<Polynomial>> = jac.iter().map(|row| cols.iter().map(|&j| row[j].clone()).collect()).collect();
        let minor = determinant(&sub, &ring)?;
        if let Some(o) = series::evaluate(&minor, &at0)?.order().finite() {
            if o <= bound && best.as_ref().is_none_or(|b| o < b.0) {
                best = Some((o, cols, minor));
            }
        }
    }
    let Some((minor_order, columns, minor)) = best else {
        return Err(Error::NoWitness(format!(
            "no maximal Jacobian minor has order <= {bound} at y0"
        )));
    };

    let perm = column_order(&columns, n);
    let (_, gmat) = build_h_g(&f, &perm, &Polynomial::one(&ring), &minor)?;
    let work = req.target + minor_order;
    let ep = minor_order;
    let mut ys = ys0.clone();
    let mut trace = Vec::new();
    // a residual of order o allows a step to 2(o - e'), which needs the
    // residual to that precision plus e' for the division by P
    let mut eval = work;
    for _ in 0..=MAX_ITERATIONS {
        let (fk, ord) = loop {
            let at = images_at(&sring, &ys, eval);
            let fk: Vec<TruncatedSeries> = f.iter().map(|p| series::evaluate(p, &at)).collect::<Result<_>>()?;
            let ord = residual_order(&fk, eval);
            let need = step_target(ord.lower_bound(), ep, work) + ep;
            if eval >= need || ord.lower_bound() >= work {
                break (fk, ord);
            }
            eval = need;
        };
        if ord.lower_bound() >= work {
            trace.push(Valuation::AtLeast(work));
            let solution: Vec<TruncatedSeries> = ys.iter().map(|y| TruncatedSeries::new(y.clone(), req.target)).collect();
            let keep = (c + 1).min(req.target).min(p0);
            for (y, y0) in solution.iter().zip(&req.start) {
                if !y.agrees_with(y0, keep)? {
                    return Err(Error::Internal("the lift moved y0 below x^(c+1)".into()));
                }
            }
            return Ok(LiftOutcome {
                solution,
                columns,
                minor_order,
                trace,
            });
        }
        trace.push(ord);
        let m = step_target(ord.lower_bound(), ep, work);
        let at = images_at(&sring, &ys, eval);
        let pk = series::evaluate(&minor, &at)?;
        for (j, &col) in perm.iter().enumerate() {
            let mut acc = TruncatedSeries::zero(&sring, eval);
            for (i, fi) in fk.iter().enumerate() {
                let gji = &gmat[j][i];
                if !gji.is_zero() {
                    acc = acc.add(&series::evaluate(gji, &at)?.mul(fi)?)?;
                }
            }
            let delta = acc.divide_exact(&pk)?;
            ys[col] = (&ys[col] - delta.poly()).truncate(m);
        }
        eval = step_target(m, ep, work) + ep;
    }
    Err(Error::Resource(format!("no convergence after {MAX_ITERATIONS} Newton steps")))
}

/// Precision the residual reaches after a step from order `o`, capped at
/// `work`.
fn step_target(o: u32, ep: u32, work: u32) -> u32 {
    (2 * o).saturating_sub(2 * ep).clamp(o.min(work), work)
}

/// The ring of `f` with its coefficient field replaced by that of the
/// series ring.
fn extended(sring: &Arc<PolyRing>, ring: &Arc<PolyRing>) -> Result<Arc<PolyRing>> {
    if sring.field() == ring.field() {
        Ok(ring.clone())
    } else {
        ring.with_field(sring.field().clone())
    }
}

/// Whether every component of `f(y)` vanishes modulo `x^c`. A residual known
/// to less than `c` cannot confirm this and yields `false`.
pub fn strong_approx_check(f: &[Polynomial], y: &[TruncatedSeries], c: u32) -> Result<bool> {
    let Some(first) = y.first() else {
        return Err(Error::Domain("no unknowns".into()));
    };
    let top = y.iter().map(|s| s.precision()).max().unwrap_or(0);
    let mut at = vec![TruncatedSeries::new(Polynomial::var(first.ring(), 0), top)];
    at.extend(y.iter().cloned());
    for p in f {
        let v = series::evaluate(&p.remap(&extended(first.ring(), p.ring())?)?, &at)?;
        let ok = match v.order() {
            Valuation::Finite(o) => o >= c,
            Valuation::AtLeast(p) => p >= c,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests;
