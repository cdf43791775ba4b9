use std::hint::black_box;

use asd_screen_core::eval::cross_validate;
use asd_screen_core::featsel::{rank_relief_f, ReliefOptions};
use asd_screen_core::learn::{fit_smo, LearnerKind, SmoConfig};
use asd_screen_core::screening::generate;
use asd_screen_core::tabular::encode;
use asd_screen_core::{AgeGroup, Dataset, LabelScheme, LearnerConfig, SynthConfig};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn adult(n: usize) -> Dataset {
    generate(&SynthConfig::new(AgeGroup::Adult, n, 7)).unwrap()
}

fn smo_fit(c: &mut Criterion) {
    let mut group = c.benchmark_group("smo_fit");
    for n in [250, 500, 1000] {
        let data = adult(n);
        let m = encode(&data, &data.feature_names(), LabelScheme::PlusMinusOne).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| fit_smo(black_box(m), &SmoConfig::default()).unwrap())
        });
    }
    group.finish();
}

fn relief_f(c: &mut Criterion) {
    let mut group = c.benchmark_group("relief_f");
    for n in [250, 500, 1000] {
        let data = adult(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &data, |b, data| {
            b.iter(|| rank_relief_f(black_box(data), &ReliefOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn ten_fold(c: &mut Criterion) {
    let data = adult(500);
    let features = data.feature_names();
    let mut group = c.benchmark_group("cross_validate");
    group.sample_size(10);
    for kind in [LearnerKind::Smo, LearnerKind::Logistic] {
        let config = LearnerConfig::default_for(kind);
        group.bench_function(format!("{kind:?}").to_lowercase(), |b| {
            b.iter(|| cross_validate(black_box(&data), &config, &features, 10, 1).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, smo_fit, relief_f, ten_fold);
criterion_main!(benches);
