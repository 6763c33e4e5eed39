//! Counter-program syntax.
//!
//! A program acts on counters over the naturals through increment, decrement
//! and zero-test commands, combined by loops, series composition and
//! non-deterministic choice. `repeat k { .. }` is pure sugar for the k-fold
//! series composition of the body; `repeat 0 { .. }` and `skip` both denote
//! the empty program, whose relation is the identity.
//!
//! Programs are immutable after construction and freely shareable across
//! threads.

mod config;
mod parse;
mod render;

pub use config::Configuration;
pub use parse::{parse, ParseError};

use crate::fastmath::Nat;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// An interned counter name. Equality and ordering are by name.
///
/// Names start with a letter or underscore and continue with letters, digits,
/// underscores, primes (`'`) or `:` (used by the composition's renaming
/// scheme, e.g. `A::b`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CounterId(Arc<str>);

impl CounterId {
    pub fn try_new(name: &str) -> Option<Self> {
        let mut chars = name.chars();
        let first = chars.next()?;
        if !(first.is_ascii_alphabetic() || first == '_') {
            return None;
        }
        if chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '\'' | ':')) {
            Some(CounterId(Arc::from(name)))
        } else {
            None
        }
    }

    /// Panics on names outside the identifier charset.
    pub fn new(name: &str) -> Self {
        Self::try_new(name).unwrap_or_else(|| panic!("invalid counter name: {name:?}"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CounterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl serde::Serialize for CounterId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> serde::Deserialize<'de> for CounterId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let name = String::deserialize(deserializer)?;
        CounterId::try_new(&name)
            .ok_or_else(|| serde::de::Error::custom(format!("bad counter name {name:?}")))
    }
}

impl AsRef<str> for CounterId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// A counter program.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Program {
    /// The empty program; its relation is the identity.
    Skip,
    Inc(CounterId),
    Dec(CounterId),
    Test(CounterId),
    Loop(Box<Program>),
    Seq(Box<Program>, Box<Program>),
    Choice(Box<Program>, Box<Program>),
    /// Sugar for the k-fold series composition of the body.
    Repeat(Box<Program>, u64),
}

/// Result of [`Program::classify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    /// No test command occurs anywhere.
    TestFree,
    /// A test-free core followed by a maximal trailing run of test commands.
    Checking {
        core: Program,
        tested: Vec<CounterId>,
    },
    /// Tests occur but not only as a trailing run.
    General,
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::TestFree => "test-free",
            Classification::Checking { .. } => "checking",
            Classification::General => "general",
        }
    }
}

impl Program {
    pub fn inc(c: &CounterId) -> Program {
        Program::Inc(c.clone())
    }

    pub fn dec(c: &CounterId) -> Program {
        Program::Dec(c.clone())
    }

    pub fn test(c: &CounterId) -> Program {
        Program::Test(c.clone())
    }

    pub fn loop_(body: Program) -> Program {
        Program::Loop(Box::new(body))
    }

    pub fn repeat(body: Program, k: u64) -> Program {
        Program::Repeat(Box::new(body), k)
    }

    /// Right-associated series composition, dropping `skip`s and flattening
    /// nested sequences so the result is in canonical form.
    pub fn seq_of<I: IntoIterator<Item = Program>>(items: I) -> Program {
        let mut flat = Vec::new();
        for item in items {
            item.flatten_seq_into(&mut flat);
        }
        flat.into_iter()
            .rev()
            .reduce(|acc, p| Program::Seq(Box::new(p), Box::new(acc)))
            .unwrap_or(Program::Skip)
    }

    /// Right-associated non-deterministic choice. Panics on an empty list.
    pub fn choice_of<I: IntoIterator<Item = Program>>(items: I) -> Program {
        items
            .into_iter()
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .reduce(|acc, p| Program::Choice(Box::new(p), Box::new(acc)))
            .expect("choice of zero branches")
    }

    fn flatten_seq_into(self, out: &mut Vec<Program>) {
        match self {
            Program::Skip => {}
            Program::Seq(a, b) => {
                a.flatten_seq_into(out);
                b.flatten_seq_into(out);
            }
            other => out.push(other),
        }
    }

    /// Program size: 1 per command, 1 + |body| for a loop, 1 + |l| + |r| for
    /// composition and choice. A `repeat k` counts as its expansion,
    /// `k·|body| + max(k-1, 0)`; `skip` has size 0.
    pub fn size(&self) -> Nat {
        match self {
            Program::Skip => Nat::from(0u32),
            Program::Inc(_) | Program::Dec(_) | Program::Test(_) => Nat::from(1u32),
            Program::Loop(b) => b.size() + 1u32,
            Program::Seq(a, b) | Program::Choice(a, b) => a.size() + b.size() + 1u32,
            Program::Repeat(b, k) => {
                if *k == 0 {
                    Nat::from(0u32)
                } else {
                    b.size() * k + (k - 1)
                }
            }
        }
    }

    /// The counters used by the program, in name order. Counters mentioned
    /// only under `repeat 0` do not count (the expansion has no occurrence).
    pub fn counters(&self) -> BTreeSet<CounterId> {
        let mut set = BTreeSet::new();
        self.collect_counters(&mut set);
        set
    }

    fn collect_counters(&self, set: &mut BTreeSet<CounterId>) {
        match self {
            Program::Skip => {}
            Program::Inc(c) | Program::Dec(c) | Program::Test(c) => {
                set.insert(c.clone());
            }
            Program::Loop(b) => b.collect_counters(set),
            Program::Seq(a, b) | Program::Choice(a, b) => {
                a.collect_counters(set);
                b.collect_counters(set);
            }
            Program::Repeat(b, k) => {
                if *k > 0 {
                    b.collect_counters(set);
                }
            }
        }
    }

    /// Number of counters used.
    pub fn dimension(&self) -> usize {
        self.counters().len()
    }

    pub fn is_test_free(&self) -> bool {
        match self {
            Program::Skip | Program::Inc(_) | Program::Dec(_) => true,
            Program::Test(_) => false,
            Program::Loop(b) => b.is_test_free(),
            Program::Seq(a, b) | Program::Choice(a, b) => a.is_test_free() && b.is_test_free(),
            Program::Repeat(b, k) => *k == 0 || b.is_test_free(),
        }
    }

    /// Classifies the program as test-free, checking, or general.
    ///
    /// A checking program is, up to re-association of sequences, a test-free
    /// prefix followed by a run of test commands; the reported run is maximal.
    pub fn classify(&self) -> Classification {
        if self.is_test_free() {
            return Classification::TestFree;
        }
        let (core, tested) = self.clone().split_trailing_tests();
        if !tested.is_empty() && core.is_test_free() {
            Classification::Checking { core, tested }
        } else {
            Classification::General
        }
    }

    /// Splits `self` into `prefix ; test c_1 ; … ; test c_n` with the test
    /// run maximal. The prefix is `Skip` when the whole program is tests.
    fn split_trailing_tests(self) -> (Program, Vec<CounterId>) {
        match self {
            Program::Test(c) => (Program::Skip, vec![c]),
            Program::Seq(a, b) => {
                let (bp, bt) = b.split_trailing_tests();
                if matches!(bp, Program::Skip) {
                    let (ap, mut at) = a.split_trailing_tests();
                    at.extend(bt);
                    (ap, at)
                } else {
                    (Program::Seq(a, Box::new(bp)), bt)
                }
            }
            Program::Repeat(b, k) if k > 0 => {
                let (bp, bt) = b.clone().split_trailing_tests();
                if matches!(bp, Program::Skip) {
                    let mut all = Vec::with_capacity(bt.len() * k as usize);
                    for _ in 0..k {
                        all.extend(bt.iter().cloned());
                    }
                    (Program::Skip, all)
                } else if bt.is_empty() {
                    (Program::Repeat(b, k), vec![])
                } else if k == 1 {
                    (bp, bt)
                } else {
                    (
                        Program::Seq(Box::new(Program::Repeat(b, k - 1)), Box::new(bp)),
                        bt,
                    )
                }
            }
            other => (other, vec![]),
        }
    }

    /// Removes every `Repeat` node by expanding it into the k-fold series
    /// composition (right-associated); `repeat 0` becomes `skip`.
    pub fn expand_repeats(&self) -> Program {
        match self {
            Program::Skip | Program::Inc(_) | Program::Dec(_) | Program::Test(_) => self.clone(),
            Program::Loop(b) => Program::loop_(b.expand_repeats()),
            Program::Seq(a, b) => {
                Program::Seq(Box::new(a.expand_repeats()), Box::new(b.expand_repeats()))
            }
            Program::Choice(a, b) => {
                Program::Choice(Box::new(a.expand_repeats()), Box::new(b.expand_repeats()))
            }
            Program::Repeat(b, k) => {
                let body = b.expand_repeats();
                (0..*k)
                    .map(|_| body.clone())
                    .rev()
                    .reduce(|acc, p| Program::Seq(Box::new(p), Box::new(acc)))
                    .unwrap_or(Program::Skip)
            }
        }
    }

    /// Canonical textual form; see the module-level grammar.
    pub fn render(&self) -> String {
        render::render(self)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// All programs of size at most `max_size` over the given counters, built
/// from commands, loops, series compositions and choices (every tree shape,
/// both associations included). Used for exhaustive desk-scale checks of the
/// semantics engines against each other.
pub fn enumerate_programs(counters: &[CounterId], max_size: usize) -> Vec<Program> {
    let mut by_size: Vec<Vec<Program>> = vec![Vec::new()];
    for size in 1..=max_size {
        let mut cur = Vec::new();
        if size == 1 {
            for c in counters {
                cur.push(Program::inc(c));
                cur.push(Program::dec(c));
                cur.push(Program::test(c));
            }
        } else {
            cur.extend(by_size[size - 1].iter().cloned().map(Program::loop_));
            for left in 1..size - 1 {
                let right = size - 1 - left;
                for a in &by_size[left] {
                    for b in &by_size[right] {
                        cur.push(Program::Seq(Box::new(a.clone()), Box::new(b.clone())));
                        cur.push(Program::Choice(Box::new(a.clone()), Box::new(b.clone())));
                    }
                }
            }
        }
        by_size.push(cur);
    }
    by_size.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(name: &str) -> CounterId {
        CounterId::new(name)
    }

    fn nat(n: u64) -> Nat {
        Nat::from(n)
    }

    #[test]
    fn size_of_commands_and_blocks() {
        assert_eq!(Program::inc(&c("x")).size(), nat(1));
        assert_eq!(Program::loop_(Program::inc(&c("x"))).size(), nat(2));
        assert_eq!(Program::repeat(Program::inc(&c("x")), 3).size(), nat(5));
        assert_eq!(Program::repeat(Program::inc(&c("x")), 0).size(), nat(0));
        assert_eq!(Program::Skip.size(), nat(0));
    }

    #[test]
    fn counters_and_dimension() {
        let p = Program::seq_of([Program::inc(&c("x")), Program::dec(&c("x"))]);
        assert_eq!(p.dimension(), 1);
        let p = Program::Choice(
            Box::new(Program::inc(&c("x"))),
            Box::new(Program::test(&c("y"))),
        );
        assert_eq!(p.dimension(), 2);
        assert_eq!(Program::repeat(Program::inc(&c("z")), 0).dimension(), 0);
    }

    #[test]
    fn classify_examples() {
        let p = Program::seq_of([Program::inc(&c("x")), Program::test(&c("x"))]);
        assert_eq!(
            p.classify(),
            Classification::Checking {
                core: Program::inc(&c("x")),
                tested: vec![c("x")],
            }
        );
        assert_eq!(
            Program::loop_(Program::inc(&c("x"))).classify(),
            Classification::TestFree
        );
        let p = Program::seq_of([Program::test(&c("x")), Program::inc(&c("x"))]);
        assert_eq!(p.classify(), Classification::General);
    }

    #[test]
    fn classify_maximal_trailing_run() {
        let p = Program::seq_of([
            Program::inc(&c("a")),
            Program::test(&c("a")),
            Program::test(&c("b")),
        ]);
        match p.classify() {
            Classification::Checking { core, tested } => {
                assert_eq!(core, Program::inc(&c("a")));
                assert_eq!(tested, vec![c("a"), c("b")]);
            }
            other => panic!("expected checking, got {other:?}"),
        }
    }

    #[test]
    fn classify_is_stable_under_reassociation() {
        let a = Program::inc(&c("a"));
        let t1 = Program::test(&c("a"));
        let t2 = Program::test(&c("b"));
        let left = Program::Seq(
            Box::new(Program::Seq(Box::new(a.clone()), Box::new(t1.clone()))),
            Box::new(t2.clone()),
        );
        let right = Program::Seq(
            Box::new(a),
            Box::new(Program::Seq(Box::new(t1), Box::new(t2))),
        );
        assert_eq!(left.classify(), right.classify());
    }

    #[test]
    fn classify_lone_test_is_checking_with_skip_core() {
        match Program::test(&c("x")).classify() {
            Classification::Checking { core, tested } => {
                assert_eq!(core, Program::Skip);
                assert_eq!(tested, vec![c("x")]);
            }
            other => panic!("expected checking, got {other:?}"),
        }
    }

    #[test]
    fn classify_test_inside_loop_is_general() {
        assert_eq!(
            Program::loop_(Program::test(&c("x"))).classify(),
            Classification::General
        );
    }

    #[test]
    fn expand_repeats_examples() {
        let p = Program::repeat(Program::inc(&c("x")), 2);
        assert_eq!(
            p.expand_repeats(),
            Program::Seq(
                Box::new(Program::inc(&c("x"))),
                Box::new(Program::inc(&c("x")))
            )
        );
        let p = Program::inc(&c("x"));
        assert_eq!(p.expand_repeats(), p);
        assert_eq!(
            Program::repeat(Program::inc(&c("x")), 0).expand_repeats(),
            Program::Skip
        );
    }

    #[test]
    fn expand_preserves_size() {
        let p = Program::repeat(
            Program::seq_of([Program::inc(&c("x")), Program::dec(&c("y"))]),
            4,
        );
        assert_eq!(p.size(), p.expand_repeats().size());
    }
}
