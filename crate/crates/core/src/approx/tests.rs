use super::*;
use crate::poly::{parse_polynomial, Field, MonomialOrder};
use crate::series::series_ring;

fn system(vars: &[&str], eqs: &[&str]) -> Vec<Polynomial> {
    let ring = PolyRing::new(vars, Field::Rational, MonomialOrder::DegRevLex).unwrap();
    eqs.iter().map(|e| parse_polynomial(e, &ring).unwrap()).collect()
}

fn series(text: &str) -> TruncatedSeries {
    TruncatedSeries::parse(text, &series_ring("x", Field::Rational).unwrap()).unwrap()
}

fn req(f: Vec<Polynomial>, start: Vec<TruncatedSeries>, c: u32, target: u32) -> LiftRequest {
    LiftRequest {
        system: f,
        start,
        c,
        e: c,
        target,
    }
}

#[test]
fn square_root_of_one_plus_x() {
    let f = system(&["x", "Y"], &["Y^2 - 1 - x"]);
    let out = newton_lift(&req(f, vec![series("1 + O(x^1)")], 0, 5)).unwrap();
    let r = out.solution[0].ring().clone();
    let expected = TruncatedSeries::parse("1 + 1/2*x - 1/8*x^2 + 1/16*x^3 - 5/128*x^4 + O(x^5)", &r).unwrap();
    assert_eq!(out.solution[0], expected);
    assert!(out.converges_quadratically(0));
}

#[test]
fn linear_equation_takes_one_step() {
    let f = system(&["x", "Y"], &["Y - x"]);
    let out = newton_lift(&req(f, vec![series("0 + O(x^1)")], 0, 10)).unwrap();
    assert_eq!(out.iterations(), 1);
    assert_eq!(out.solution[0], series("x + O(x^10)"));
}

#[test]
fn exact_start_is_unchanged() {
    let f = system(&["x", "Y"], &["Y - x"]);
    let out = newton_lift(&req(f, vec![series("x + O(x^10)")], 0, 10)).unwrap();
    assert_eq!(out.iterations(), 0);
    assert_eq!(out.solution[0], series("x + O(x^10)"));
}

#[test]
fn singular_start_with_positive_c() {
    // Y^2 - x^2 (1 + x): minor 2Y has order 1 at y0 = x
    let f = system(&["x", "Y"], &["Y^2 - x^2 - x^3"]);
    let out = newton_lift(&req(f.clone(), vec![series("x + 1/2*x^2 + O(x^4)")], 1, 20)).unwrap();
    assert_eq!(out.minor_order, 1);
    assert!(out.converges_quadratically(1));
    assert!(strong_approx_check(&f, &out.solution, 20).unwrap());
    assert!(out.solution[0].agrees_with(&series("x + O(x^2)"), 2).unwrap());
    let long = newton_lift(&req(f, vec![series("x + 1/2*x^2 + O(x^4)")], 1, 40)).unwrap();
    assert_eq!(long.solution[0].truncate(20), out.solution[0]);
}

#[test]
fn two_unknowns() {
    // node branch: Y1 Y2 = x^2, Y1 - Y2 = 2x^2
    let f = system(&["x", "Y1", "Y2"], &["Y1*Y2 - x^2", "Y1 - Y2 - 2*x^2"]);
    let start = vec![series("x + x^2 + O(x^3)"), series("x - x^2 + O(x^3)")];
    let out = newton_lift(&req(f.clone(), start, 1, 30)).unwrap();
    assert!(strong_approx_check(&f, &out.solution, 30).unwrap());
}

#[test]
fn hypothesis_failures() {
    let f = system(&["x", "Y"], &["Y^2 - x"]);
    let err = newton_lift(&req(f.clone(), vec![series("0 + O(x^5)")], 0, 5)).unwrap_err();
    assert!(matches!(err, Error::NoWitness(_)));
    let err = newton_lift(&req(f, vec![series("0 + O(x^1)")], 1, 5)).unwrap_err();
    assert!(matches!(err, Error::InsufficientPrecision(_)));
}

#[test]
fn strong_approximation_predicate() {
    let f = system(&["x", "Y"], &["Y^2 - x"]);
    let zero = series("0 + O(x^10)");
    assert!(strong_approx_check(&f, std::slice::from_ref(&zero), 1).unwrap());
    assert!(!strong_approx_check(&f, &[zero], 2).unwrap());
    let g = system(&["x", "Y1", "Y2"], &["Y1*Y2 - x^2"]);
    let node = [series("x + x^2 + O(x^12)"), series("x/(1 + x) + O(x^12)")];
    assert!(strong_approx_check(&g, &node, 12).unwrap());
    assert!(!strong_approx_check(&g, &node, 13).unwrap());
    let trunc = [node[0].truncate(6), node[1].truncate(6)];
    assert!(strong_approx_check(&g, &trunc, 6).unwrap());
}
