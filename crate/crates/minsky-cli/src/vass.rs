//! Lowering of test-free and checking programs to vector addition systems
//! with states.
//!
//! A [`VassSystem`] is a finite control graph whose transitions add ±1 to a
//! single counter (or nothing, for epsilon transitions); runs from the
//! initial to the final state with the `zerofinal` counters at zero
//! correspond exactly to the program's relation. Checking programs lower
//! their trailing tests into the `zerofinal` set; general programs cannot be
//! lowered and are rejected.
//!
//! The textual format is line-oriented:
//!
//! ```text
//! state NAME        # one per state
//! init NAME
//! final NAME
//! zerofinal c1,c2   # only for checking programs
//! trans FROM TO x:+1
//! trans FROM TO     # epsilon
//! ```

use minsky::ir::{Classification, CounterId, Program};
use minsky::semantics::{compile_cfg, EdgeLabel};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VassError {
    /// Only test-free and checking programs lower to a VASS.
    #[error("program has interior test commands")]
    HasInteriorTests,
}

/// One transition: an optional ±1 delta on a single counter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VassTransition {
    pub from: String,
    pub to: String,
    pub effect: Option<(CounterId, i8)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VassSystem {
    pub states: Vec<String>,
    pub initial: String,
    pub final_state: String,
    pub transitions: Vec<VassTransition>,
    /// Counters that must be zero at the final state.
    pub zero_finals: Vec<CounterId>,
}

/// Lowers a test-free or checking program.
pub fn export_vass(p: &Program) -> Result<VassSystem, VassError> {
    let (core, tested) = match p.classify() {
        Classification::TestFree => (p.clone(), vec![]),
        Classification::Checking { core, tested } => (core, tested),
        Classification::General => return Err(VassError::HasInteriorTests),
    };
    let cfg = compile_cfg(&core.expand_repeats());
    let name = |loc: u32| format!("l{loc}");
    let states = (0..cfg.n_locations).map(name).collect();
    let transitions = cfg
        .edges
        .iter()
        .map(|e| VassTransition {
            from: name(e.from),
            to: name(e.to),
            effect: match e.label {
                EdgeLabel::Epsilon => None,
                EdgeLabel::Command(kind, counter) => {
                    let c = cfg.counters[counter as usize].clone();
                    let delta = match kind {
                        minsky::semantics::CmdKind::Inc => 1,
                        minsky::semantics::CmdKind::Dec => -1,
                        minsky::semantics::CmdKind::Test => {
                            unreachable!("core is test-free")
                        }
                    };
                    Some((c, delta))
                }
            },
        })
        .collect();
    let mut zero_finals: Vec<CounterId> = tested;
    zero_finals.sort();
    zero_finals.dedup();
    Ok(VassSystem {
        states,
        initial: name(cfg.entry),
        final_state: name(cfg.exit),
        transitions,
        zero_finals,
    })
}

impl VassSystem {
    /// The line-oriented textual form.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.states {
            let _ = writeln!(out, "state {s}");
        }
        let _ = writeln!(out, "init {}", self.initial);
        let _ = writeln!(out, "final {}", self.final_state);
        if !self.zero_finals.is_empty() {
            let names: Vec<&str> = self.zero_finals.iter().map(|c| c.as_str()).collect();
            let _ = writeln!(out, "zerofinal {}", names.join(","));
        }
        for t in &self.transitions {
            match &t.effect {
                None => {
                    let _ = writeln!(out, "trans {} {}", t.from, t.to);
                }
                Some((c, delta)) => {
                    let sign = if *delta >= 0 { "+" } else { "-" };
                    let _ = writeln!(out, "trans {} {} {c}:{sign}1", t.from, t.to);
                }
            }
        }
        out
    }
}
