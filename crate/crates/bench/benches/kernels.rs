use std::hint::black_box;

use advmatch_bench::{database, released, uniform};
use advmatch_core::adversary::{greedy_cover_pattern, min_pair_pattern};
use advmatch_core::detection::{column_histograms, detect_deletions};
use advmatch_core::generator::for_each_row_chunk;
use advmatch_core::hamming_distance;
use advmatch_core::matching::match_pipeline;
use advmatch_core::neighbors::{near_pairs, vulnerable_rows};
use advmatch_core::probability::{exact_histogram_collision, log2_binom_cdf};
use advmatch_core::rng::{SeedSpec, SymbolSampler};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

fn sampling(c: &mut Criterion) {
    let mut g = c.benchmark_group("sampling");
    for k in [2usize, 5, 64] {
        let sampler = SymbolSampler::new(&uniform(k));
        let mut rng = SeedSpec::new(0, 0).rng();
        let mut row = vec![0u16; 4096];
        g.throughput(Throughput::Elements(row.len() as u64));
        g.bench_with_input(BenchmarkId::new("alias_fill", k), &k, |b, _| {
            b.iter(|| sampler.fill(&mut rng, black_box(&mut row)))
        });
    }
    let dist = uniform(5);
    g.throughput(Throughput::Elements(1 << 20));
    g.bench_function("stream_1M_rows_n24", |b| {
        b.iter(|| {
            let mut sum = 0u64;
            for_each_row_chunk(1 << 20, 24, &dist, SeedSpec::new(0, 1), |_, rows| {
                sum += u64::from(rows[0]);
                std::ops::ControlFlow::Continue(())
            });
            sum
        })
    });
    g.finish();
}

fn distances(c: &mut Criterion) {
    let db = database(2, 24, 5);
    c.bench_function("hamming_n24", |b| {
        b.iter(|| hamming_distance(black_box(db.row(0)), black_box(db.row(1))))
    });
    let mut g = c.benchmark_group("neighbors");
    g.sample_size(10);
    for m in [4096u64, 49_668] {
        let (n, d) = if m == 4096 { (24, 6) } else { (12, 3) };
        let db = database(m, n, 5);
        g.bench_with_input(BenchmarkId::new("vulnerable_rows", m), &db, |b, db| {
            b.iter(|| vulnerable_rows(db, d))
        });
        g.bench_with_input(BenchmarkId::new("near_pairs", m), &db, |b, db| {
            b.iter(|| near_pairs(db, d))
        });
    }
    g.finish();
}

fn scheme(c: &mut Criterion) {
    let mut g = c.benchmark_group("scheme");
    g.sample_size(20);
    let db = database(4096, 24, 5);
    let d2 = released(&db, 6);
    g.bench_function("histograms_and_detection", |b| {
        b.iter(|| {
            let h1 = column_histograms(&db);
            detect_deletions(&h1, &column_histograms(&d2))
        })
    });
    g.bench_function("match_pipeline_4096x24", |b| {
        b.iter(|| match_pipeline(&db, &d2))
    });
    g.bench_function("min_pair_4096x24", |b| b.iter(|| min_pair_pattern(&db, 6)));
    g.bench_function("greedy_cover_4096x24", |b| {
        b.iter(|| greedy_cover_pattern(&db, 6))
    });
    g.finish();
}

fn oracles(c: &mut Criterion) {
    c.bench_function("log2_binom_cdf_n200", |b| {
        b.iter(|| log2_binom_cdf(black_box(200), 0.8, black_box(60)))
    });
    let dist = uniform(3);
    c.bench_function("exact_histogram_collision_m64_k3", |b| {
        b.iter(|| exact_histogram_collision(black_box(64), &dist))
    });
}

criterion_group!(benches, sampling, distances, scheme, oracles);
criterion_main!(benches);
