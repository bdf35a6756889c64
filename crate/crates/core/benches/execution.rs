use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gnd_core::algebra::{AlgebraPresentation, CompletionMorphism};
use gnd_core::gnd::{desingularize, GndConfig};
use gnd_core::ideal::{groebner, Ideal};
use gnd_core::poly::parse_polynomial;
use gnd_core::series::{series_ring, TruncatedSeries};
use gnd_core::smooth::{smoothing_ideal, SearchOptions};
use gnd_core::{Execution, Field, MonomialOrder, PolyRing};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn instance() -> (AlgebraPresentation, CompletionMorphism) {
    let r = AlgebraPresentation::ring_for(&["x"], &["Y1", "Y2", "Y3"], Field::Rational).unwrap();
    let gens = ["Y1*Y2 - x^4", "Y3 - x - Y1", "Y1*Y3 - Y1^2 - x*Y1"];
    let b = AlgebraPresentation::new(&r, 1, gens.iter().map(|g| parse_polynomial(g, &r).unwrap()).collect()).unwrap();
    let s = series_ring("x", Field::Rational).unwrap();
    let imgs = ["x^2 + x^3 + O(x^30)", "x^2/(1 + x) + O(x^30)", "x + x^2 + x^3 + O(x^30)"]
        .iter()
        .map(|t| TruncatedSeries::parse(t, &s).unwrap())
        .collect();
    (b, CompletionMorphism::new(&s, imgs).unwrap())
}

fn search(execution: Execution) -> SearchOptions {
    SearchOptions { execution, ..SearchOptions::default() }
}

fn bench_smoothing_ideal(c: &mut Criterion) {
    let (b, _) = instance();
    let mut g = c.benchmark_group("smoothing_ideal");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &mode, |bch, &mode| {
            bch.iter(|| smoothing_ideal(&b, &search(mode)).unwrap())
        });
    }
    g.finish();
}

fn bench_desingularize(c: &mut Criterion) {
    let (b, v) = instance();
    let mut g = c.benchmark_group("desingularize");
    g.sample_size(10);
    for (name, mode) in MODES {
        let cfg = GndConfig { search: search(mode), ..GndConfig::default() };
        g.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |bch, cfg| {
            bch.iter(|| desingularize(&b, &v, cfg).unwrap())
        });
    }
    g.finish();
}

fn bench_groebner_batch(c: &mut Criterion) {
    let r = PolyRing::new(&["x", "y", "z"], Field::prime(101).unwrap(), MonomialOrder::DegRevLex).unwrap();
    let p = |s: &str| parse_polynomial(s, &r).unwrap();
    let ideals: Vec<Ideal> = (1..=8)
        .map(|k| {
            let gens = vec![p(&format!("x^3 - {k}*y*z")), p("y^2 - x*z + 1"), p(&format!("z^2 - x*y - {k}"))];
            Ideal::new(&r, gens).unwrap()
        })
        .collect();
    let mut g = c.benchmark_group("groebner_batch");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &mode, |bch, mode| {
            bch.iter(|| mode.try_map(&ideals, groebner).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bench_smoothing_ideal, bench_desingularize, bench_groebner_batch);
criterion_main!(benches);
