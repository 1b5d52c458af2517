use criterion::{black_box, criterion_group, criterion_main, Criterion};

use cspace_core::compose::{par, seq};
use cspace_core::enumerate::{enumerate, member};
use cspace_core::formula::{prove_finite, reduce, AtomicTerm, Formula};
use cspace_core::laws::{check_laws, LawConfig};
use cspace_core::sample::{primitive_pool, random_member, random_space, rng_from_seed};
use cspace_core::space::{order, Space};

fn deep_space() -> Space {
    let mut rng = rng_from_seed(1);
    let pool = primitive_pool(4);
    random_space(&mut rng, &pool, 3)
}

fn bench_construction(c: &mut Criterion) {
    let pool = primitive_pool(4);
    c.bench_function("construct_second_order", |b| {
        b.iter(|| {
            let s6 = seq(&pool[..2]).unwrap();
            let s8 = par(&[pool[2].clone(), s6, pool[3].clone()]).unwrap();
            black_box(s8.canonical_key().len())
        })
    });
    c.bench_function("construct_random_depth3", |b| {
        let mut rng = rng_from_seed(2);
        b.iter(|| black_box(random_space(&mut rng, &pool, 3)))
    });
}

fn bench_membership(c: &mut Criterion) {
    let s = deep_space();
    let mut rng = rng_from_seed(3);
    let probe = random_member(&mut rng, &s);
    c.bench_function("membership_depth3", |b| {
        b.iter(|| {
            if let Some(p) = &probe {
                black_box(member(p, &s));
            }
        })
    });
}

fn bench_enumeration(c: &mut Criterion) {
    let pool = primitive_pool(3);
    let q = par(&pool).unwrap();
    c.bench_function("enumerate_parallel_500", |b| {
        b.iter(|| {
            let n = enumerate(&q, 500).unwrap().count();
            black_box(n)
        })
    });
}

fn bench_reduction(c: &mut Criterion) {
    let pool = primitive_pool(2);
    let q = par(&pool).unwrap();
    let f = Formula::and(
        Formula::atom(AtomicTerm::ParCountEq {
            target: pool[0].clone(),
            count: 1,
        }),
        Formula::atom(AtomicTerm::ParCountEq {
            target: pool[1].clone(),
            count: 1,
        }),
    );
    c.bench_function("prove_finite_pinned", |b| {
        b.iter(|| {
            let r = reduce(&q, &f).unwrap();
            black_box(prove_finite(&r))
        })
    });
    let s = deep_space();
    c.bench_function("order_depth3", |b| b.iter(|| black_box(order(&s))));
}

fn bench_laws(c: &mut Criterion) {
    let cfg = LawConfig {
        budget: 60,
        samples: 30,
        seed: 4,
        triples_per_kind: 2,
        random_spaces: 6,
    };
    c.bench_function("law_suite_small", |b| {
        b.iter(|| black_box(check_laws(&[], &cfg)))
    });
}

criterion_group!(
    benches,
    bench_construction,
    bench_membership,
    bench_enumeration,
    bench_reduction,
    bench_laws
);
criterion_main!(benches);
