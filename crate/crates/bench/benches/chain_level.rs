use criterion::{criterion_group, criterion_main, Criterion};
use trilevel::level::tensor_level_witness;
use trilevel::minimize::minimize;
use trilevel::square::{homotopy_pushout, is_homotopy_cartesian};
use trilevel::verdier::{build_pushout_product, verify_verdier};
use trilevel_bench::{span, split_mono_pair, wide_complex, witness_pair};

fn verdier(c: &mut Criterion) {
    for ring in ["F2[x]/(x2)", "F3[x,y]/(x2,y2)"] {
        let (f, f2) = split_mono_pair(ring);
        c.bench_function(&format!("pushout product and checks {ring}"), |b| {
            b.iter(|| verify_verdier(&build_pushout_product(&f, &f2).unwrap()).passed())
        });
    }
}

fn squares(c: &mut Criterion) {
    let (f, g) = span("F3[x]/(x2)");
    c.bench_function("homotopy pushout and cartesian test", |b| {
        b.iter(|| is_homotopy_cartesian(&homotopy_pushout(&f, &g).unwrap().square).cartesian)
    });
}

fn level(c: &mut Criterion) {
    for (m, n) in [(1, 1), (2, 2), (3, 3)] {
        let (a, w) = witness_pair("F3[x]/(x2)", m, n);
        c.bench_function(&format!("product witness {m}x{n}"), |b| b.iter(|| tensor_level_witness(&a, &w).unwrap().layer_count()));
    }
}

fn minimal_models(c: &mut Criterion) {
    let x = wide_complex("F2[x,y]/(x2,y2)");
    c.bench_function("minimal model", |b| b.iter(|| minimize(&x).unwrap().complex.total_dim()));
}

criterion_group!(benches, verdier, squares, level, minimal_models);
criterion_main!(benches);
