//! Property tests for the program syntax: round-trips, size accounting,
//! classification stability.

use minsky::ir::{parse, Classification, Configuration, CounterId, Program};
use minsky::Nat;
use proptest::prelude::*;

fn counter_names() -> impl Strategy<Value = CounterId> {
    prop::sample::select(vec!["a", "b", "c", "x'", "y_2"]).prop_map(CounterId::new)
}

fn command() -> impl Strategy<Value = Program> {
    (counter_names(), 0..3u8).prop_map(|(c, kind)| match kind {
        0 => Program::Inc(c),
        1 => Program::Dec(c),
        _ => Program::Test(c),
    })
}

/// Canonical programs: sequences right-associated with no skip glue, as the
/// parser and the gadget builders produce them.
fn canonical_program() -> impl Strategy<Value = Program> {
    let leaf = prop_oneof![4 => command(), 1 => Just(Program::Skip)];
    leaf.prop_recursive(4, 48, 6, |inner| {
        prop_oneof![
            2 => prop::collection::vec(inner.clone(), 1..4).prop_map(Program::seq_of),
            2 => inner.clone().prop_map(Program::loop_),
            1 => prop::collection::vec(inner.clone(), 2..4).prop_map(Program::choice_of),
            1 => (inner, 0..4u64).prop_map(|(b, k)| Program::repeat(b, k)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn parse_render_round_trip(p in canonical_program()) {
        let text = p.render();
        let back = parse(&text).unwrap();
        prop_assert_eq!(back, p, "text was:\n{}", text);
    }

    #[test]
    fn expand_repeats_preserves_size_and_counters(p in canonical_program()) {
        let expanded = p.expand_repeats();
        prop_assert_eq!(expanded.size(), p.size());
        prop_assert_eq!(expanded.counters(), p.counters());
        let debug = format!("{:?}", expanded);
        prop_assert!(!debug.contains("Repeat"));
    }

    #[test]
    fn classification_is_stable_under_reassociation(
        stmts in prop::collection::vec(command(), 2..6),
        seed in any::<u64>(),
    ) {
        // The reported core keeps its association, so compare through the
        // flattening renderer.
        let canonical = Program::seq_of(stmts.clone()).classify();
        let shuffled = associate(&stmts, seed).classify();
        match (canonical, shuffled) {
            (
                Classification::Checking { core: c1, tested: t1 },
                Classification::Checking { core: c2, tested: t2 },
            ) => {
                prop_assert_eq!(t1, t2);
                prop_assert_eq!(c1.render(), c2.render());
            }
            (a, b) => prop_assert_eq!(a, b),
        }
    }

    #[test]
    fn configuration_json_round_trip(
        entries in prop::collection::btree_map(counter_names(), 0..50u64, 0..4)
    ) {
        let cfg = Configuration::from_entries(
            entries.into_iter().map(|(c, v)| (c, Nat::from(v))),
        );
        let back = Configuration::from_json(&cfg.to_json()).unwrap();
        prop_assert_eq!(back, cfg);
    }
}

/// Builds an arbitrary (possibly left-nested) association of the statements.
fn associate(stmts: &[Program], seed: u64) -> Program {
    if stmts.len() == 1 {
        return stmts[0].clone();
    }
    let split = 1 + (seed as usize % (stmts.len() - 1));
    let left = associate(&stmts[..split], seed / 3 + 1);
    let right = associate(&stmts[split..], seed / 7 + 2);
    Program::Seq(Box::new(left), Box::new(right))
}

#[test]
fn checking_classification_sees_through_repeats() {
    let p = parse("inc a; repeat 3 { test a }").unwrap();
    match p.classify() {
        Classification::Checking { core, tested } => {
            assert_eq!(core, parse("inc a").unwrap());
            assert_eq!(tested.len(), 3);
        }
        other => panic!("expected checking, got {other:?}"),
    }
}
