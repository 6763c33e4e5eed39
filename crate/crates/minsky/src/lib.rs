//! A workbench for counter programs in the style of Minsky machines.
//!
//! The crate has four layers:
//!
//! - [`ir`]: the program syntax (increments, decrements, zero tests, loops,
//!   series composition, non-deterministic choice), configurations, a textual
//!   format, and structural accounting (size, dimension, classification into
//!   test-free / checking / general programs).
//! - [`semantics`]: two independent engines for the exact relational
//!   semantics and its K-bounded restriction — a compiled breadth-first
//!   reachability engine and a small denotational reference oracle.
//! - [`fastmath`]: exact big-integer arithmetic for the fast-growing
//!   hierarchy `F_d`, the vector variant `F_v`, and the rewrite step
//!   `evalF_d` whose maximal iteration computes `F_v(n)`.
//! - [`gadgets`] and [`verify`]: constructors for the test-simulation and
//!   amplification gadgets (simtest, loop-at-most, the evalF machinery,
//!   Ackermannian preamplifiers, and the `A ▷ M` composition), together with
//!   exhaustive desk-scale checkers for the behavioural laws each gadget is
//!   supposed to satisfy.

pub mod fastmath;
pub mod gadgets;
pub mod ir;
pub mod semantics;
pub mod verify;

pub use fastmath::{EvalFState, Nat};
pub use ir::{Classification, Configuration, CounterId, Program};
pub use semantics::{ExplorationPolicy, ReachOutcome, ReachResult};
