use std::hint::black_box;

use ascending_hnn::ball::build_ball;
use ascending_hnn::depth::{depth_scan, DepthSetting};
use ascending_hnn::exec::Execution;
use ascending_hnn::hnn::{canonical_form, HnnPresentation};
use ascending_hnn::word::Word;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const DOUBLING: &str = include_str!("../../../presentations/doubling.json");
const BS23: &str = include_str!("../../../presentations/bs23.json");

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn scan(c: &mut Criterion) {
    let setting = DepthSetting::from_presentation(&HnnPresentation::from_json(BS23).unwrap()).unwrap();
    let mut group = c.benchmark_group("depth_scan");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 7), &exec, |b, &exec| {
            b.iter(|| depth_scan(&setting, black_box(7), 2, exec).unwrap())
        });
    }
    group.finish();
}

fn ball(c: &mut Criterion) {
    let p = HnnPresentation::from_json(DOUBLING).unwrap();
    let mut group = c.benchmark_group("build_ball");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 8), &exec, |b, &exec| b.iter(|| build_ball(&p, black_box(8), exec).unwrap()));
    }
    group.finish();
}

fn forms(c: &mut Criterion) {
    let p = HnnPresentation::from_json(DOUBLING).unwrap();
    let words: Vec<Word> = p.full_alphabet().reduced_words_up_to(7);
    let mut group = c.benchmark_group("canonical_forms");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, words.len()), &exec, |b, &exec| {
            b.iter(|| exec.map(&words, |w| canonical_form(w, &p).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, scan, ball, forms);
criterion_main!(benches);
