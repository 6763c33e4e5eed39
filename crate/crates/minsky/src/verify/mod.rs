//! Mechanical checkers for the behavioural laws of the gadget programs.
//!
//! Each suite enumerates a finite input family exhaustively, runs the exact
//! reachability engine, and compares against an independent characterization
//! (closed-form enumeration for the combinator laws, the fastmath rewrite
//! step for the evalF gadget, the preamplifier definition itself for the
//! amplifiers). Suites report [`VerifyError::Inconclusive`] rather than pass
//! whenever a search was truncated, so budget exhaustion can never
//! masquerade as verification.

mod conform;
mod preamp;
mod suites;

pub use conform::{classify_conform, make_good_config, ConformClass, ConformReport};
pub use preamp::check_preamplifier;
pub use suites::{
    default_eval_f_cases, suite_compose, suite_eval_f, suite_loop_at_most, suite_sim_test,
    suite_sim_test_mutated, EvalFCase,
};

use crate::gadgets::GadgetError;
use crate::semantics::SemanticsError;
use serde::Serialize;
use std::time::Duration;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    /// A configuration assigns a counter outside the layout.
    #[error("layout violation: {0}")]
    LayoutViolation(String),

    /// A search was truncated, so the suite can neither pass nor fail.
    #[error("inconclusive: {0}")]
    Inconclusive(String),

    /// Suite parameters outside the supported (cost-guarded) range.
    #[error("unsupported suite parameters: {0}")]
    BadParameters(String),

    #[error(transparent)]
    Semantics(#[from] SemanticsError),

    #[error(transparent)]
    Gadget(#[from] GadgetError),
}

/// One failed check: the offending input and the expected/got pair.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteFailure {
    pub input: String,
    pub expected: String,
    pub got: String,
}

/// Outcome of a verification suite. Passing means zero failures.
///
/// `elapsed` is measurement metadata and is excluded from serialization so
/// identical runs produce identical bytes.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases_run: u64,
    pub failures: Vec<SuiteFailure>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            cases_run: 0,
            failures: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub(crate) fn case(&mut self) {
        self.cases_run += 1;
    }

    pub(crate) fn fail(
        &mut self,
        input: impl Into<String>,
        expected: impl Into<String>,
        got: impl Into<String>,
    ) {
        self.failures.push(SuiteFailure {
            input: input.into(),
            expected: expected.into(),
            got: got.into(),
        });
    }

    /// Human-readable summary: one header line plus one line per failure
    /// (failures past the first ten are elided).
    pub fn human_table(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "suite {:<14} cases {:>7}  {}",
            self.suite,
            self.cases_run,
            if self.passed() { "pass" } else { "FAIL" }
        );
        for f in self.failures.iter().take(10) {
            let _ = writeln!(
                out,
                "  input {} | expected {} | got {}",
                f.input, f.expected, f.got
            );
        }
        if self.failures.len() > 10 {
            let _ = writeln!(out, "  … and {} more failures", self.failures.len() - 10);
        }
        out
    }
}
