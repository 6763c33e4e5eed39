//! Acceptance suite: one test per criterion, named and printed in order.
//!
//! Run with `cargo test -p minsky-cli --test acceptance -- --nocapture` to
//! see one line per criterion.

use minsky::fastmath::{eval_f_max, fg_f, fg_f_vec, Budget, EvalFState, FastmathError};
use minsky::gadgets::{build_ack, build_ack_reduced, build_trivial_preamplifier};
use minsky::ir::{enumerate_programs, parse, Classification, Configuration, CounterId, Program};
use minsky::semantics::{denotational_relation, reach_set, ExplorationPolicy};
use minsky::verify::{
    check_preamplifier, default_eval_f_cases, suite_compose, suite_eval_f, suite_loop_at_most,
    suite_sim_test, suite_sim_test_mutated,
};
use minsky::Nat;
use minsky_cli::vass::{export_vass, VassError, VassSystem};
use std::collections::{BTreeSet, HashMap, VecDeque};

fn nat(n: u64) -> Nat {
    Nat::from(n)
}

fn pass(criterion: &str, detail: &str) {
    println!("criterion {criterion}: pass — {detail}");
}

#[test]
fn criterion_01_fast_growing_exactness() {
    let b = Budget::default();
    for n in 0..=20u64 {
        assert_eq!(fg_f(1, &nat(n), &b).unwrap(), nat(2 * n + 1), "F_1({n})");
        let closed = (Nat::from(1u32) << (n + 1)) * nat(n + 1) - 1u32;
        assert_eq!(fg_f(2, &nat(n), &b).unwrap(), closed, "F_2({n})");
    }
    for n in 0..=3u64 {
        let start = EvalFState::from_u64(&[n + 1], n);
        let end = eval_f_max(&start, &b).unwrap();
        let f2 = fg_f(2, &nat(n), &b).unwrap();
        assert_eq!(end, EvalFState::new(vec![nat(0)], f2), "evalFMax_1(({}), {n})", n + 1);
    }
    pass("1", "F_1/F_2 closed forms for n <= 20; evalFMax matches F_2 for n <= 3");
}

#[test]
fn criterion_02_growth_lower_bound() {
    let b = Budget::default();
    let mut checked = 0u32;
    let mut skipped = 0u32;
    for d in 1..=3usize {
        let mut vectors = vec![vec![]];
        for _ in 0..d {
            vectors = vectors
                .into_iter()
                .flat_map(|v: Vec<u64>| {
                    (0..=2u64).map(move |e| {
                        let mut w = v.clone();
                        w.push(e);
                        w
                    })
                })
                .collect();
        }
        for v in vectors {
            for n in 0..=3u64 {
                let vv: Vec<Nat> = v.iter().map(|&e| nat(e)).collect();
                match fg_f_vec(&vv, &nat(n), &b) {
                    Ok(value) => {
                        let norm: u64 = v.iter().sum();
                        let bound = (Nat::from(1u32) << norm) * nat(n) + nat(norm);
                        assert!(value >= bound, "F_{v:?}({n}) = {value} < {bound}");
                        checked += 1;
                    }
                    Err(FastmathError::BudgetExceeded { .. }) => skipped += 1,
                    Err(e) => panic!("unexpected error: {e}"),
                }
            }
        }
    }
    // Most d = 3 vectors with a non-zero top entry bust the budget; the
    // grid still leaves a solid non-vacuous core.
    assert!(checked >= 80, "only {checked} cases fit the budget");
    pass(
        "2",
        &format!("F_v(n) >= 2^|v| n + |v| on {checked} cases ({skipped} beyond budget)"),
    );
}

fn two_counter_enumeration() -> Vec<Program> {
    let counters = vec![CounterId::new("a"), CounterId::new("b")];
    let programs = enumerate_programs(&counters, 6);
    assert_eq!(programs.len(), 6 + 6 + 78 + 222 + 2166 + 9366);
    programs
}

fn bounded_starts(k: u64) -> Vec<Configuration> {
    let a = CounterId::new("a");
    let b = CounterId::new("b");
    let mut out = Vec::new();
    for va in 0..=k {
        for vb in 0..=k - va {
            out.push(Configuration::zero().with(&a, va).with(&b, vb));
        }
    }
    out
}

#[test]
fn criterion_03_semantics_oracle_agreement() {
    let universe: BTreeSet<_> = [CounterId::new("a"), CounterId::new("b")].into();
    let programs = two_counter_enumeration();
    let mut cases = 0u64;
    for k in 0..=3u64 {
        let starts = bounded_starts(k);
        for p in &programs {
            let rel = denotational_relation(p, k, &universe, 1_000_000).unwrap();
            let mut image: HashMap<&Configuration, BTreeSet<Configuration>> = HashMap::new();
            for (a, b) in &rel {
                image.entry(a).or_default().insert(b.clone());
            }
            for alpha in &starts {
                let expected = image.remove(alpha).unwrap_or_default();
                let got = reach_set(p, alpha, &ExplorationPolicy::sum_bounded(k)).unwrap();
                assert!(got.exhausted);
                assert_eq!(got.configs, expected, "p = {p}, k = {k}, alpha = {alpha}");
                cases += 1;
            }
        }
    }
    pass(
        "3",
        &format!("engine = denotational oracle on {cases} (program, K, start) cases"),
    );
}

#[test]
fn criterion_04_sim_test_suite() {
    let report = suite_sim_test(3, 3).unwrap();
    assert!(report.passed(), "{}", report.human_table());
    let mutated = suite_sim_test_mutated(2, 3).unwrap();
    assert!(!mutated.passed(), "seeded mutation must fail the suite");
    pass(
        "4",
        &format!(
            "simtest laws on {} cases, zero failures; seeded mutation fails ({} failures)",
            report.cases_run,
            mutated.failures.len()
        ),
    );
}

#[test]
fn criterion_05_loop_at_most_suites() {
    let mut total = 0;
    for variant in 1..=4u8 {
        let report = suite_loop_at_most(variant, 6).unwrap();
        assert!(report.passed(), "variant {variant}:\n{}", report.human_table());
        total += report.cases_run;
    }
    pass("5", &format!("all four loop-at-most laws, {total} cases"));
}

#[test]
fn criterion_06_eval_f_suites() {
    let policy = ExplorationPolicy::unbounded().with_max_states(10_000_000);
    let mut total = 0;
    for d in 1..=2usize {
        let report = suite_eval_f(d, &default_eval_f_cases(d), &policy).unwrap();
        assert!(report.passed(), "d = {d}:\n{}", report.human_table());
        total += report.cases_run;
    }
    pass(
        "6",
        &format!("conformity, index monotonicity, exact encodings, updateB doubling; {total} cases"),
    );
}

#[test]
fn criterion_07_preamplifier_validation() {
    for k in 1..=4u64 {
        let (a, spec) = build_trivial_preamplifier(k).unwrap();
        let bound = (k + 1) * 3 + k;
        let policy = ExplorationPolicy::sum_bounded(bound);
        let report = check_preamplifier(&a, &spec, 3, &policy).unwrap();
        assert!(report.passed(), "trivial K = {k}:\n{}", report.human_table());
    }
    let policy = ExplorationPolicy::sum_bounded(16);
    let (ack, spec) = build_ack(1, 0).unwrap();
    assert_eq!(spec.k.exact(&Budget::default()).unwrap(), nat(2));
    let report = check_preamplifier(&ack, &spec, 2, &policy).unwrap();
    assert!(report.passed(), "ack(1,0):\n{}", report.human_table());
    let (red, spec) = build_ack_reduced(1, 0).unwrap();
    let report = check_preamplifier(&red, &spec, 2, &policy).unwrap();
    assert!(report.passed(), "ack_reduced(1,0):\n{}", report.human_table());
    pass(
        "7",
        "trivial preamplifiers K <= 4 (l <= 3); Ack(1,0) and reduced Ack(1,0) with K = 2 at sum bound 16",
    );
}

#[test]
fn criterion_08_composition_equivalence() {
    let targets = [
        "loop { inc a }; test a; inc b",
        "loop { inc a }; loop { dec a; inc b; test a }",
        "inc a; inc b; test a",
    ];
    let mut total = 0;
    for text in targets {
        let m = parse(text).unwrap();
        for k in [2u64, 3] {
            let (a, spec) = build_trivial_preamplifier(k).unwrap();
            let policy = ExplorationPolicy::sum_bounded(48);
            let report = suite_compose(&m, k, &a, &spec, &policy).unwrap();
            assert!(
                report.passed(),
                "m = {text}, k = {k}:\n{}",
                report.human_table()
            );
            total += report.cases_run;
        }
    }
    pass(
        "8",
        &format!("K-bounded reach sets coincide with A ▷ M finals for 3 programs x K in {{2,3}} ({total} membership checks)"),
    );
}

#[test]
fn criterion_09_structural_accounting() {
    // C frozen at calibration: the worst observed ratio over the grid is 142
    // (at d = 1, n = 0, where the constant prelude dominates).
    const C: u64 = 150;
    for d in 1..=3usize {
        for n in 0..=2u64 {
            let (ack, _) = build_ack(d, n).unwrap();
            assert_eq!(ack.dimension(), 2 * d + 8, "ack({d},{n})");
            let bound = nat(C) * nat(d as u64) * nat(4u64.pow(n as u32));
            assert!(
                ack.size() <= bound,
                "ack({d},{n}) size {} exceeds {bound}",
                ack.size()
            );
            let (red, _) = build_ack_reduced(d, n).unwrap();
            assert_eq!(red.dimension(), 2 * d + 6, "ack_reduced({d},{n})");
        }
    }
    pass("9", "dimensions 2d+8 / 2d+6 and size <= 150·d·4^n for d <= 3, n <= 2");
}

// --- criterion 10: VASS round trip ---------------------------------------

/// A tiny independent VASS walker: breadth-first over (state, configuration)
/// with the sum bound, accepting at the final state with the zerofinal
/// counters at zero. Written directly against the exported system; shares no
/// code with the main engine.
fn walker_reach(vass: &VassSystem, from: &Configuration, k: u64) -> BTreeSet<Configuration> {
    let mut counters: BTreeSet<CounterId> = vass
        .transitions
        .iter()
        .filter_map(|t| t.effect.as_ref().map(|(c, _)| c.clone()))
        .collect();
    counters.extend(vass.zero_finals.iter().cloned());
    counters.extend(from.counters().cloned());
    let counters: Vec<CounterId> = counters.into_iter().collect();
    let index: HashMap<&CounterId, usize> =
        counters.iter().enumerate().map(|(i, c)| (c, i)).collect();

    type Adjacency<'a> = HashMap<&'a str, Vec<(Option<(usize, i8)>, &'a str)>>;
    let mut adj: Adjacency = HashMap::new();
    for t in &vass.transitions {
        adj.entry(t.from.as_str()).or_default().push((
            t.effect.as_ref().map(|(c, d)| (index[c], *d)),
            t.to.as_str(),
        ));
    }

    let start: Vec<u64> = {
        let mut v = vec![0u64; counters.len()];
        for (c, value) in from.iter() {
            v[index[c]] = u64::try_from(value).unwrap();
        }
        v
    };
    if start.iter().sum::<u64>() > k {
        return BTreeSet::new();
    }

    let mut seen: BTreeSet<(String, Vec<u64>)> = BTreeSet::new();
    let mut queue: VecDeque<(String, Vec<u64>)> = VecDeque::new();
    seen.insert((vass.initial.clone(), start.clone()));
    queue.push_back((vass.initial.clone(), start));
    let mut finals = BTreeSet::new();
    while let Some((state, values)) = queue.pop_front() {
        if state == vass.final_state
            && vass.zero_finals.iter().all(|c| values[index[c]] == 0)
        {
            finals.insert(Configuration::from_entries(
                values
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| v > 0)
                    .map(|(i, &v)| (counters[i].clone(), Nat::from(v))),
            ));
        }
        for (effect, to) in adj.get(state.as_str()).into_iter().flatten() {
            let mut next = values.clone();
            if let Some((ci, delta)) = effect {
                if *delta > 0 {
                    next[*ci] += 1;
                    if next.iter().sum::<u64>() > k {
                        continue;
                    }
                } else {
                    if next[*ci] == 0 {
                        continue;
                    }
                    next[*ci] -= 1;
                }
            }
            let key = (to.to_string(), next);
            if seen.insert(key.clone()) {
                queue.push_back(key);
            }
        }
    }
    finals
}

#[test]
fn criterion_10_vass_round_trip() {
    let programs = two_counter_enumeration();
    let mut exported = 0u64;
    let mut rejected = 0u64;
    for p in &programs {
        match p.classify() {
            Classification::General => {
                assert!(matches!(export_vass(p), Err(VassError::HasInteriorTests)));
                rejected += 1;
            }
            _ => {
                let vass = export_vass(p).unwrap();
                for k in 0..=3u64 {
                    for alpha in bounded_starts(k) {
                        let expected =
                            reach_set(p, &alpha, &ExplorationPolicy::sum_bounded(k)).unwrap();
                        assert!(expected.exhausted);
                        let got = walker_reach(&vass, &alpha, k);
                        assert_eq!(
                            got, expected.configs,
                            "p = {p}, k = {k}, alpha = {alpha}"
                        );
                    }
                }
                exported += 1;
            }
        }
    }
    pass(
        "10",
        &format!("VASS walker = engine on {exported} lowered programs ({rejected} general programs rejected)"),
    );
}
