//! Exact relational semantics of counter programs, plus the K-bounded
//! restriction where every visited configuration (endpoints included) must
//! have counter sum at most K.
//!
//! Two independent engines implement the same relations:
//!
//! - [`reach_set`] compiles the program to a control-flow graph and runs an
//!   exact breadth-first search over (location, configuration) pairs. This is
//!   the workhorse.
//! - [`denotational_relation`] computes the relation as an explicit set of
//!   configuration pairs by structural recursion (relational composition,
//!   union, reflexive-transitive closure) over the finite K-bounded space,
//!   without touching the control-flow graph. It exists to cross-validate
//!   the engine and is only usable at small bounds.

mod cfg;
mod denotational;
mod engine;

pub use cfg::{compile_cfg, CmdKind, ControlFlowGraph, Edge, EdgeLabel};
pub use denotational::denotational_relation;

use crate::ir::{Configuration, CounterId, Program};
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// A single executed command, as recorded in witnesses.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Command {
    Inc(CounterId),
    Dec(CounterId),
    Test(CounterId),
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Command::Inc(c) => write!(f, "inc {c}"),
            Command::Dec(c) => write!(f, "dec {c}"),
            Command::Test(c) => write!(f, "test {c}"),
        }
    }
}

impl Serialize for Command {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Applies one command to a configuration; `None` when it is not enabled.
pub fn apply_command(cfg: &Configuration, cmd: &Command) -> Option<Configuration> {
    use num_traits::Zero;
    match cmd {
        Command::Inc(c) => {
            let mut next = cfg.clone();
            next.set(c.clone(), cfg.get(c) + 1u32);
            Some(next)
        }
        Command::Dec(c) => {
            let v = cfg.get(c);
            if v.is_zero() {
                None
            } else {
                let mut next = cfg.clone();
                next.set(c.clone(), v - 1u32);
                Some(next)
            }
        }
        Command::Test(c) => {
            if cfg.get(c).is_zero() {
                Some(cfg.clone())
            } else {
                None
            }
        }
    }
}

/// Replays a command sequence with single-command steps.
pub fn replay(from: &Configuration, commands: &[Command]) -> Option<Configuration> {
    let mut cur = from.clone();
    for cmd in commands {
        cur = apply_command(&cur, cmd)?;
    }
    Some(cur)
}

/// Bounds governing a reachability search. At least `max_states` is always
/// finite (default 10^7).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplorationPolicy {
    /// Prune any configuration whose counter sum exceeds this; realizes the
    /// K-bounded semantics.
    pub sum_bound: Option<u64>,
    /// Prune any configuration with a counter above this cap.
    pub per_counter_cap: Option<u64>,
    /// Truncate (not prune) the search after this many distinct states.
    pub max_states: usize,
    /// Truncate the search beyond this many command steps.
    pub max_depth: Option<usize>,
}

impl Default for ExplorationPolicy {
    fn default() -> Self {
        ExplorationPolicy {
            sum_bound: None,
            per_counter_cap: None,
            max_states: 10_000_000,
            max_depth: None,
        }
    }
}

impl ExplorationPolicy {
    /// The K-bounded semantics with sum bound `k`.
    pub fn sum_bounded(k: u64) -> Self {
        ExplorationPolicy {
            sum_bound: Some(k),
            ..Default::default()
        }
    }

    /// No value bounds; terminates only via frontier exhaustion (or the
    /// state budget, which then reports a truncated result).
    pub fn unbounded() -> Self {
        ExplorationPolicy::default()
    }

    pub fn with_max_states(mut self, n: usize) -> Self {
        self.max_states = n;
        self
    }

    fn admits_dense(&self, values: &[u64]) -> bool {
        if let Some(cap) = self.per_counter_cap {
            if values.iter().any(|&v| v > cap) {
                return false;
            }
        }
        if let Some(bound) = self.sum_bound {
            let mut sum: u64 = 0;
            for &v in values {
                sum = match sum.checked_add(v) {
                    Some(s) => s,
                    None => return false,
                };
                if sum > bound {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    /// The start configuration itself violates the policy bounds.
    #[error("start configuration violates the exploration policy: {0}")]
    PolicyViolation(String),

    /// A counter value does not fit the engine's machine words.
    #[error("counter value too large for the search engine: {0}")]
    ValueTooLarge(String),

    /// The K-bounded configuration space is too large to enumerate.
    #[error("bounded configuration space exceeds {limit} configurations")]
    SpaceExceeded { limit: usize },
}

/// Outcome of an exact reachability search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachResult {
    /// True iff the search completed without hitting `max_states`/`max_depth`.
    /// Policy value bounds (sum bound, per-counter cap) prune rather than
    /// truncate and do not clear this flag.
    pub exhausted: bool,
    /// Canonical sorted set of reachable end configurations.
    pub configs: BTreeSet<Configuration>,
    /// Command-level witnesses, when requested; each replays from the start
    /// configuration to its key.
    pub witnesses: Option<BTreeMap<Configuration, Vec<Command>>>,
}

impl Serialize for ReachResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            exhausted: bool,
            configs: Configs<'a>,
            #[serde(skip_serializing_if = "Option::is_none")]
            witnesses: Option<Witnesses<'a>>,
        }
        struct Configs<'a>(&'a BTreeSet<Configuration>);
        impl Serialize for Configs<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.len()))?;
                for c in self.0 {
                    seq.serialize_element(c)?;
                }
                seq.end()
            }
        }
        struct Witnesses<'a>(&'a BTreeMap<Configuration, Vec<Command>>);
        impl Serialize for Witnesses<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for (cfg, cmds) in self.0 {
                    map.serialize_entry(&cfg.to_json(), cmds)?;
                }
                map.end()
            }
        }
        Repr {
            exhausted: self.exhausted,
            configs: Configs(&self.configs),
            witnesses: self.witnesses.as_ref().map(Witnesses),
        }
        .serialize(serializer)
    }
}

/// Answer of [`check_reach`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReachOutcome {
    /// Reachable; the witness replays from the start to the target.
    Yes(Vec<Command>),
    /// Not reachable — only reported when the search exhausted the frontier.
    No,
    /// The state or depth budget truncated the search before an answer.
    Unknown,
}

/// The set of configurations reachable from `from` through `p` under the
/// policy bounds.
///
/// With only a sum bound, the result is exactly the image of `from` under the
/// K-bounded relation; when the state/depth budget truncates the search the
/// result is a sound under-approximation with `exhausted = false`.
pub fn reach_set(
    p: &Program,
    from: &Configuration,
    policy: &ExplorationPolicy,
) -> Result<ReachResult, SemanticsError> {
    engine::search(p, from, policy, engine::Mode::Collect).map(|s| s.into_result(false))
}

/// Like [`reach_set`], but also reconstructs one witness per configuration.
pub fn reach_set_with_witnesses(
    p: &Program,
    from: &Configuration,
    policy: &ExplorationPolicy,
) -> Result<ReachResult, SemanticsError> {
    engine::search(p, from, policy, engine::Mode::CollectWithParents).map(|s| s.into_result(true))
}

/// Decides whether `from` reaches `to` through `p` under the policy bounds.
pub fn check_reach(
    p: &Program,
    from: &Configuration,
    to: &Configuration,
    policy: &ExplorationPolicy,
) -> Result<ReachOutcome, SemanticsError> {
    engine::check_reach(p, from, to, policy)
}
