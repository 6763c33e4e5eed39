use criterion::{black_box, criterion_group, criterion_main, Criterion};
use minsky::gadgets::{build_ack, build_sim_test, build_trivial_preamplifier};
use minsky::ir::{Configuration, CounterId};
use minsky::semantics::{denotational_relation, reach_set, ExplorationPolicy};
use minsky::Nat;

fn bench_reach(c: &mut Criterion) {
    let (ack, _) = build_ack(1, 0).unwrap();
    c.bench_function("reach/ack_1_0_sum12", |b| {
        let policy = ExplorationPolicy::sum_bounded(12);
        b.iter(|| {
            let r = reach_set(&ack, &Configuration::zero(), &policy).unwrap();
            black_box(r.configs.len())
        })
    });

    let simtest = build_sim_test(
        &CounterId::new("y"),
        &[CounterId::new("c"), CounterId::new("b1"), CounterId::new("b2")],
        &CounterId::new("x"),
    )
    .unwrap();
    let alpha = Configuration::zero()
        .with(&CounterId::new("b1"), 3u32)
        .with(&CounterId::new("b2"), 2u32)
        .with(&CounterId::new("y"), Nat::from(10u32))
        .with(&CounterId::new("x"), 2u32);
    c.bench_function("reach/simtest_b3", |b| {
        let policy = ExplorationPolicy::unbounded();
        b.iter(|| {
            let r = reach_set(&simtest, &alpha, &policy).unwrap();
            black_box(r.configs.len())
        })
    });

    let (trivial, _) = build_trivial_preamplifier(3).unwrap();
    c.bench_function("reach/trivial_preamp_sum40", |b| {
        let policy = ExplorationPolicy::sum_bounded(40);
        b.iter(|| {
            let r = reach_set(&trivial, &Configuration::zero(), &policy).unwrap();
            black_box(r.configs.len())
        })
    });

    c.bench_function("denotational/loop_choice_k3", |b| {
        let p = minsky::ir::parse("loop { choice { inc a; inc b } or { dec a } or { test b } }")
            .unwrap();
        let universe = p.counters();
        b.iter(|| {
            let rel = denotational_relation(&p, 3, &universe, 1_000_000).unwrap();
            black_box(rel.len())
        })
    });
}

criterion_group!(benches, bench_reach);
criterion_main!(benches);
