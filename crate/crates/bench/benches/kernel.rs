use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use twistforge::verify::golden::{run_golden, GoldenFile};
use twistforge::verify::{check_twist_equation, r_matrix, check_qybe, run_sweep, sweep_specs, RepChoice, SuiteOptions};
use twistforge::{Evaluator, ExactMatrix, Rational, Scalar};
use twistforge_bench::preset_chain;

fn rationals(c: &mut Criterion) {
    let xs: Vec<Rational> = (1..200).map(|k| Rational::new(k * 7 - 3, k + 11)).collect();
    c.bench_function("rational/harmonic_sum", |b| {
        b.iter(|| xs.iter().fold(Rational::ZERO, |acc, x| acc.add(&x.recip().unwrap())))
    });
    let big = Rational::new(i64::MAX / 3, 7);
    c.bench_function("rational/promoted_mul", |b| b.iter(|| black_box(&big).mul(&big).mul(&big)));
}

fn strictly_upper(dim: usize) -> ExactMatrix {
    ExactMatrix::from_entries(
        dim,
        (0..dim).flat_map(|i| (i + 1..dim).map(move |j| (i, j, Scalar::from_int((i + 2 * j) as i64 % 5 - 2)))),
    )
}

fn matrices(c: &mut Criterion) {
    let mut g = c.benchmark_group("matrix");
    for dim in [9, 27] {
        let n = strictly_upper(dim);
        g.bench_with_input(BenchmarkId::new("exp_nilpotent", dim), &n, |b, n| b.iter(|| n.exp_nilpotent().unwrap()));
        g.bench_with_input(BenchmarkId::new("pow_rational", dim), &n, |b, n| {
            let q = Rational::new(-1, 2);
            let one_plus = ExactMatrix::identity(dim).add(n).unwrap();
            b.iter(|| one_plus.pow_rational(&q).unwrap())
        });
    }
    let a = strictly_upper(9);
    g.bench_function("kron/9x9", |b| b.iter(|| a.kron(&a)));
    g.finish();
}

fn so9(c: &mut Criterion) {
    let chain = preset_chain("so9");
    let rep = chain.algebra.rep().clone();
    let mut g = c.benchmark_group("so9");
    g.sample_size(10);
    g.bench_function("twist_equation", |b| {
        b.iter(|| {
            let mut ev = Evaluator::new(&rep);
            check_twist_equation(&chain.twist, &mut ev).unwrap()
        })
    });
    g.bench_function("qybe", |b| {
        let mut ev = Evaluator::new(&rep);
        let r = r_matrix(&chain.twist, &mut ev).unwrap();
        let d = ev.leg_dim();
        b.iter(|| check_qybe(&r, d).unwrap())
    });
    let file = GoldenFile::so9();
    g.bench_function("golden", |b| b.iter(|| run_golden(&chain, &file, None).unwrap()));
    g.finish();
}

fn sweep(c: &mut Criterion) {
    let specs = sweep_specs(3);
    let opts = SuiteOptions { rep: RepChoice::Defining, timing: false, incomplete: true };
    let mut g = c.benchmark_group("sweep");
    g.sample_size(10);
    g.bench_function("rank<=3", |b| b.iter(|| run_sweep(&specs, opts)));
    g.finish();
}

criterion_group!(benches, rationals, matrices, so9, sweep);
criterion_main!(benches);
