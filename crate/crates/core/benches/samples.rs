use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use relkit::exec::{with_strategy, Strategy};
use relkit::formalism::{Limits, Object};
use relkit::oracle::oracle_compare;
use relkit::zoo::zoo_entry;

const STRATEGIES: [(&str, Strategy); 2] = [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)];

fn object(name: &str, label: &str) -> Object {
    zoo_entry(name).unwrap().representation(label).unwrap().object.clone()
}

fn bench_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample");
    group.sample_size(10);
    let cases = [("wp_M_rho", "cfg-two-tape", 6), ("kappa", "lig-unfolded", 6), ("wp_FG2", "pda-unfolded", 4)];
    for (name, label, bound) in cases {
        let obj = object(name, label);
        for (tag, s) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(format!("{name}/{tag}"), bound), &bound, |b, &n| {
                b.iter(|| with_strategy(s, || obj.sample(n, Limits::for_bound(n)).unwrap()))
            });
        }
    }
    group.finish();
}

fn bench_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle_compare");
    group.sample_size(10);
    let entry = zoo_entry("wp_FG2").unwrap();
    let bound = 5;
    let (sample, _) = entry.representations[0].object.sample(bound, Limits::for_bound(bound)).unwrap();
    let decider = entry.decider(bound).unwrap();
    for (tag, s) in STRATEGIES {
        group.bench_function(BenchmarkId::new(format!("wp_FG2/{tag}"), bound), |b| {
            b.iter(|| with_strategy(s, || oracle_compare(&sample, decider.as_ref()).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_enumeration, bench_oracle);
criterion_main!(benches);
