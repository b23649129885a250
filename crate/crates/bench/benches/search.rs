use criterion::{criterion_group, criterion_main, Criterion};
use exmaj_core::{find_exact_majority_term, gallery, SearchOptions};

fn search(c: &mut Criterion) {
    let mut group = c.benchmark_group("find");
    group.sample_size(10);
    for (name, n, m) in [
        ("z_mod:2", 5, 3),
        ("z_mod:3", 5, 2),
        ("z_mod:3", 6, 2),
        ("z_mod:4", 6, 2),
    ] {
        let alg = gallery(name).unwrap();
        group.bench_function(format!("{name}/{n}/{m}"), |b| {
            b.iter(|| find_exact_majority_term(&alg, n, m, SearchOptions::default()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, search);
criterion_main!(benches);
