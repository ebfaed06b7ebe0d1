use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use wreathvar::catalog::{critical_r, heis3_wr_c2, heis3_wr_klein};
use wreathvar::criteria::{decide_pair, parse_descriptor};
use wreathvar::laws::{centre_by_metabelian_law, check_law_with, second_derived_central, LawOptions};
use wreathvar::structure::derived_subgroup;
use wreathvar::varieties::relatively_free;
use wreathvar::Group;

fn arithmetic(c: &mut Criterion) {
    let g = heis3_wr_klein().unwrap();
    let (a, b) = (g.unrank(123_456), g.unrank(1_987_654));
    c.bench_function("wreath mul, order 2125764", |bch| {
        bch.iter(|| g.mul(black_box(&a), black_box(&b)))
    });
    c.bench_function("wreath rank/unrank", |bch| {
        bch.iter(|| g.rank(&g.unrank(black_box(777_777))))
    });
}

fn structure(c: &mut Criterion) {
    let g = heis3_wr_c2().unwrap();
    c.bench_function("derived subgroup of Heis3 Wr C2", |bch| {
        bch.iter(|| derived_subgroup(&g).unwrap())
    });
    let big = heis3_wr_klein().unwrap();
    let mut group = c.benchmark_group("large");
    group.sample_size(10);
    group.bench_function("G'' central in Heis3 Wr (C2 x C2)", |bch| {
        bch.iter(|| second_derived_central(&big).unwrap())
    });
    group.finish();
}

fn laws(c: &mut Criterion) {
    let r = critical_r().unwrap();
    let law = centre_by_metabelian_law();
    let exhaustive = LawOptions {
        seed: 0,
        shortcuts: false,
    };
    c.bench_function("law witness search in R", |bch| {
        bch.iter(|| check_law_with(&r, &law, exhaustive))
    });
    let heis = Group::heisenberg(3).unwrap();
    c.bench_function("F2(var Heis3)", |bch| bch.iter(|| relatively_free(&heis, 2).unwrap()));
}

fn criteria(c: &mut Criterion) {
    let a = parse_descriptor("finite{2^1:1, 3^2:4}").unwrap();
    let b = parse_descriptor("finite{3^1:1, 2^1:2, 2^2:inf, 3^2:inf}").unwrap();
    c.bench_function("decide_pair", |bch| {
        bch.iter(|| decide_pair(black_box(&a), black_box(&b)))
    });
}

criterion_group!(benches, arithmetic, structure, laws, criteria);
criterion_main!(benches);
