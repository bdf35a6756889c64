use std::sync::Arc;

use gnd_core::algebra::{AlgebraPresentation, CompletionMorphism};
use gnd_core::approx::{linear_factor, FactorOptions};
use gnd_core::gnd::{desingularize, emit_certificate, parse_certificate, GndConfig};
use gnd_core::ideal::{groebner, Ideal};
use gnd_core::io::{emit_groebner, emit_problem, parse_groebner, parse_problem, Options, ProblemFile};
use gnd_core::poly::parse_polynomial;
use gnd_core::series::{series_ring, TruncatedSeries, Valuation};
use gnd_core::{Coeff, Field, Monomial, MonomialOrder, PolyRing, Polynomial};
use proptest::prelude::*;

fn ring3(field: Field, order: MonomialOrder) -> Arc<PolyRing> {
    PolyRing::new(&["x", "y", "z"], field, order).unwrap()
}

fn build(ring: &Arc<PolyRing>, terms: &[([u32; 3], i64)]) -> Polynomial {
    let field = ring.field().clone();
    Polynomial::from_terms(
        ring,
        terms
            .iter()
            .map(|(e, c)| (Monomial::from_exponents(&e[..ring.nvars()]), field.from_i64(*c))),
    )
}

fn terms(max_terms: usize, max_exp: u32) -> impl Strategy<Value = Vec<([u32; 3], i64)>> {
    prop::collection::vec((prop::array::uniform3(0..=max_exp), -9i64..=9), 0..=max_terms)
}

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(Field::prime(7).unwrap())]
}

fn order() -> impl Strategy<Value = MonomialOrder> {
    prop_oneof![Just(MonomialOrder::Lex), Just(MonomialOrder::DegRevLex)]
}

fn univariate(ring: &Arc<PolyRing>, coeffs: &[i64]) -> Polynomial {
    let cs: Vec<Coeff> = coeffs.iter().map(|&c| ring.field().from_i64(c)).collect();
    Polynomial::from_dense(ring, 0, &cs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(f in field(), o in order(), a in terms(5, 3), b in terms(5, 3), c in terms(5, 3)) {
        let r = ring3(f, o);
        let (a, b, c) = (build(&r, &a), build(&r, &b), build(&r, &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Polynomial::one(&r), a.clone());
    }

    #[test]
    fn substitution_is_a_homomorphism(a in terms(4, 3), b in terms(4, 3), img in terms(3, 2)) {
        let r = ring3(Field::Rational, MonomialOrder::DegRevLex);
        let (a, b, img) = (build(&r, &a), build(&r, &b), build(&r, &img));
        let s = |p: &Polynomial| p.substitute(&[(1, img.clone())]).unwrap();
        prop_assert_eq!(s(&(&a * &b)), &s(&a) * &s(&b));
        prop_assert_eq!(s(&(&a + &b)), &s(&a) + &s(&b));
        prop_assert!(!s(&a).involves(1) || img.involves(1));
    }

    #[test]
    fn leibniz_rule(f in field(), a in terms(5, 4), b in terms(5, 4), var in 0usize..3) {
        let r = ring3(f, MonomialOrder::DegRevLex);
        let (a, b) = (build(&r, &a), build(&r, &b));
        let d = |p: &Polynomial| p.partial_derivative(var).unwrap();
        prop_assert_eq!(d(&(&a * &b)), &(&d(&a) * &b) + &(&a * &d(&b)));
    }

    #[test]
    fn division_with_remainder(a in terms(6, 4), b in terms(3, 3)) {
        let r = ring3(Field::Rational, MonomialOrder::Lex);
        let (a, b) = (build(&r, &a), build(&r, &b));
        prop_assume!(!b.is_zero());
        let (q, rem) = a.divrem(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &rem, a);
    }

    #[test]
    fn polynomial_text_round_trip(f in field(), o in order(), a in terms(6, 4)) {
        let r = ring3(f, o);
        let a = build(&r, &a);
        prop_assert_eq!(parse_polynomial(&a.to_string(), &r).unwrap(), a);
    }

    #[test]
    fn series_orders_add(a in prop::collection::vec(-4i64..=4, 1..8), b in prop::collection::vec(-4i64..=4, 1..8),
                         sa in 0u32..4, sb in 0u32..4) {
        let r = series_ring("x", Field::Rational).unwrap();
        let x = Polynomial::var(&r, 0);
        let prec = 16;
        let sa_ = TruncatedSeries::new(&x.pow(sa) * &univariate(&r, &a), prec);
        let sb_ = TruncatedSeries::new(&x.pow(sb) * &univariate(&r, &b), prec);
        let prod = sa_.mul(&sb_).unwrap();
        match (sa_.order(), sb_.order(), prod.order()) {
            (Valuation::Finite(p), Valuation::Finite(q), o) if p + q < prec => prop_assert_eq!(o, Valuation::Finite(p + q)),
            (_, _, o) => prop_assert!(o.lower_bound() >= sa_.order().lower_bound()),
        }
    }

    #[test]
    fn series_inverse(f in field(), head in 1i64..=6, tail in prop::collection::vec(-5i64..=5, 0..10), prec in 1u32..20) {
        let r = series_ring("x", f).unwrap();
        let mut cs = vec![head];
        cs.extend(tail);
        let u = TruncatedSeries::new(univariate(&r, &cs), prec);
        prop_assume!(!u.constant_term().is_zero());
        let inv = u.invert().unwrap();
        prop_assert_eq!(inv.precision(), prec);
        prop_assert!(u.mul(&inv).unwrap().agrees_with(&TruncatedSeries::one(&r, prec), prec).unwrap());
    }

    #[test]
    fn series_text_round_trip(f in field(), cs in prop::collection::vec(-9i64..=9, 0..10), prec in 1u32..14) {
        let r = series_ring("x", f).unwrap();
        let s = TruncatedSeries::new(univariate(&r, &cs), prec);
        prop_assert_eq!(TruncatedSeries::parse(&s.to_string(), &r).unwrap(), s);
    }

    #[test]
    fn linear_factor_reconstructs(tau in prop::collection::vec(-6i64..=6, 1..10), prec in 4u32..16) {
        // y = (x^2, 0) + tau (-x, 1) solves x y1 + x^2 y2 = x^3
        let r = series_ring("x", Field::Rational).unwrap();
        let p = |s: &str| parse_polynomial(s, &r).unwrap();
        let t = univariate(&r, &tau);
        let y = vec![
            TruncatedSeries::new(&p("x^2") - &(&p("x") * &t), prec),
            TruncatedSeries::new(t, prec),
        ];
        let f = linear_factor(&vec![vec![p("x"), p("x^2")]], &[p("x^3")], &y, &FactorOptions::default()).unwrap();
        for (a, b) in f.reconstruct().unwrap().iter().zip(&y) {
            prop_assert!(a.agrees_with(b, prec).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn groebner_round_trip_and_membership(f in field(), o in order(), gens in prop::collection::vec(terms(3, 2), 1..=3)) {
        let r = ring3(f, o);
        let gens: Vec<Polynomial> = gens.iter().map(|t| build(&r, t)).collect();
        let gb = groebner(&Ideal::new(&r, gens.clone()).unwrap()).unwrap();
        prop_assert!(gb.is_reduced());
        for g in &gens {
            prop_assert!(gb.contains(g).unwrap());
            prop_assert!(gb.normal_form(g).unwrap().is_zero());
        }
        prop_assert_eq!(parse_groebner(&emit_groebner(&gb)).unwrap(), gb);
    }

    #[test]
    fn problem_round_trip(f in field(), o in order(), ideal in prop::collection::vec(terms(3, 2), 0..3),
                          prec in 2u32..12, imgs in prop::collection::vec(prop::collection::vec(-5i64..=5, 0..5), 2)) {
        let vars = ["x".to_string()];
        let alg = ["Y1".to_string(), "Y2".to_string()];
        let r = PolyRing::new(&["x", "Y1", "Y2"], f.clone(), o.clone()).unwrap();
        let s = series_ring("x", f.clone()).unwrap();
        let pf = ProblemFile {
            field: f.clone(),
            target_field: f,
            base_vars: vars.to_vec(),
            algebra_vars: alg.to_vec(),
            ideal: ideal.iter().map(|t| build(&r, t)).filter(|p| !p.is_zero()).collect(),
            divisor: Vec::new(),
            morphism: imgs.iter().map(|c| TruncatedSeries::new(univariate(&s, c), prec)).collect(),
            series: Vec::new(),
            matrix: Vec::new(),
            rhs: Vec::new(),
            solution: Vec::new(),
            u: Vec::new(),
            v: Vec::new(),
            options: Options { order: o, precision: Some(prec), ..Options::default() },
        };
        prop_assert_eq!(parse_problem(&emit_problem(&pf)).unwrap(), pf);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    /// The node `Y1 Y2 = x^2` along `(x u, x / u)` for a unit `u = 1 + a x + b x^2`.
    #[test]
    fn certificate_round_trip(a in -3i64..=3, b in -3i64..=3) {
        let r = AlgebraPresentation::ring_for(&["x"], &["Y1", "Y2"], Field::Rational).unwrap();
        let alg = AlgebraPresentation::new(&r, 1, vec![parse_polynomial("Y1*Y2 - x^2", &r).unwrap()]).unwrap();
        let s = series_ring("x", Field::Rational).unwrap();
        let u = univariate(&s, &[1, a, b]);
        let x = Polynomial::var(&s, 0);
        let y1 = TruncatedSeries::new(&x * &u, 24);
        let y2 = TruncatedSeries::new(x, 24).divide_exact(&TruncatedSeries::new(u, 24)).unwrap();
        let v = CompletionMorphism::new(&s, vec![y1, y2.with_precision(24)]).unwrap();
        let cert = desingularize(&alg, &v, &GndConfig::default()).unwrap();
        prop_assert!(cert.passed());
        let text = emit_certificate(&cert);
        let back = parse_certificate(&text).unwrap();
        prop_assert_eq!(emit_certificate(&back), text);
        prop_assert_eq!(back, cert);
    }
}
