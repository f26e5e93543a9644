use criterion::{black_box, criterion_group, criterion_main, Criterion};

use cestrat::harness::{check_law, generate_strategies, sample_terms, Corpus, CorpusConfig};
use cestrat::{apply_ce, combine_ce, parse_strategy, parse_term, psi, to_canonical, unify_ce, Signature, Strategy};

fn figure(c: &mut Criterion) {
    let t = parse_term("∂(v(x,nil),x(nil))").unwrap();
    let a = parse_strategy("@2.1.{list([],j)}").unwrap();
    let b = parse_strategy("@1.2.{list([],i)}").unwrap();
    let (ca, cb) = (to_canonical(&a).unwrap(), to_canonical(&b).unwrap());
    c.bench_function("figure/apply", |bn| bn.iter(|| apply_ce(black_box(&a), Some(&t))));
    c.bench_function("figure/psi", |bn| bn.iter(|| psi(black_box(&a), &t)));
    c.bench_function("figure/combine", |bn| bn.iter(|| combine_ce(black_box(&ca), &cb).unwrap()));
}

fn fixed_points(c: &mut Criterion) {
    let m1 = parse_strategy("mu X . ((f(Y,a) => {g([])}) <+ @1.X)").unwrap();
    let m2 = parse_strategy("mu V . ((f(b,W) => {h([])}) <+ @1.V)").unwrap();
    let deep = parse_term("g(g(g(g(g(g(f(b,a)))))))").unwrap();
    let u = unify_ce(&m1, &m2).unwrap();
    c.bench_function("mu/unify", |bn| bn.iter(|| unify_ce(black_box(&m1), &m2).unwrap()));
    c.bench_function("mu/apply-deep", |bn| bn.iter(|| apply_ce(black_box(&u), Some(&deep))));
    c.bench_function("mu/psi-deep", |bn| bn.iter(|| psi(black_box(&u), &deep)));
}

fn corpus(c: &mut Criterion) {
    let sig = Signature::abstract_small();
    let strategies: Vec<Strategy> = generate_strategies(&sig, 3, 1, 64);
    let terms = sample_terms(&sig, 3, 1, 30);
    c.bench_function("corpus/canonicalize-64", |bn| {
        bn.iter(|| strategies.iter().filter_map(|s| to_canonical(s).ok()).count())
    });
    c.bench_function("corpus/psi-64x30", |bn| {
        bn.iter(|| strategies.iter().flat_map(|s| terms.iter().map(move |t| psi(s, t))).count())
    });
    let small = Corpus::new(
        &[sig],
        CorpusConfig {
            max_depth: 2,
            terms_per_signature: 10,
            strategies_per_signature: 30,
            pces_per_signature: 30,
            pair_samples: 30,
            triple_samples: 10,
            ..CorpusConfig::default()
        },
    );
    let mut g = c.benchmark_group("laws");
    g.sample_size(10);
    g.bench_function("theorem-1-small", |bn| bn.iter(|| check_law("theorem-1", &small).unwrap()));
    g.finish();
}

criterion_group!(benches, figure, fixed_points, corpus);
criterion_main!(benches);
