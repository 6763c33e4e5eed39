//! Constructors for the gadget programs.
//!
//! Each builder emits a plain [`Program`] value:
//!
//! - [`build_sim_test`]: simulates a zero test by a double round-trip
//!   transfer of a counter block, paying 2K from a budget counter and 2 from
//!   a pair counter;
//! - [`build_loop_at_most`]: iterates a body at most `c + c'` times;
//! - [`build_eval_f`] (with [`build_eval_f_branch`] and [`build_update_b`]):
//!   a test-free program implementing the fast-growing rewrite step on
//!   encoded pairs;
//! - [`build_ack`] / [`build_ack_reduced`]: checking programs that are
//!   K-preamplifiers for `K = 2^{F_{d+1}(n)}` on `2d+8` / `2d+6` counters;
//! - [`build_trivial_preamplifier`]: an exact-K preamplifier used as a test
//!   fixture;
//! - [`compose`]: the `A ▷ M` construction reducing the K-bounded
//!   reachability of a general program to plain reachability of a checking
//!   program.

mod ack;
mod compose;

pub use ack::{build_ack, build_ack_reduced};
pub use compose::compose;

use crate::fastmath::{fg_f, Budget, FastmathError, Nat};
use crate::ir::{CounterId, Program};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GadgetError {
    #[error("counter clash: {0}")]
    CounterClash(String),

    #[error("branch index {p} out of range 1..={d}")]
    IndexOutOfRange { p: usize, d: usize },

    #[error("construction too large: {0}")]
    BudgetExceeded(String),

    #[error("not a preamplifier shape: {0}")]
    NotAPreamplifierShape(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// The claimed constant of a preamplifier.
///
/// Kept symbolic for the Ackermannian constructions: `2^{F_{d+1}(n)}` does
/// not fit in memory for most parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClaimedK {
    /// A materialized constant.
    #[serde(rename = "exact", with = "nat_as_decimal")]
    Exact(Nat),
    /// `2^{F_{d+1}(n)}`.
    #[serde(rename = "pow2_fg")]
    TwoPowFg { d: u64, n: u64 },
}

mod nat_as_decimal {
    use super::Nat;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &Nat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Nat, D::Error> {
        let text = String::deserialize(d)?;
        Nat::parse_bytes(text.as_bytes(), 10)
            .ok_or_else(|| de::Error::custom(format!("bad decimal {text:?}")))
    }
}

impl ClaimedK {
    /// Materializes the constant, under a growth budget.
    pub fn exact(&self, budget: &Budget) -> Result<Nat, FastmathError> {
        match self {
            ClaimedK::Exact(k) => Ok(k.clone()),
            ClaimedK::TwoPowFg { d, n } => {
                let e = fg_f(d + 1, &Nat::from(*n), budget)?;
                let e = u64::try_from(&e).map_err(|_| FastmathError::BudgetExceeded {
                    digits: budget.digits,
                })?;
                if e > 4 * budget.digits as u64 {
                    return Err(FastmathError::BudgetExceeded {
                        digits: budget.digits,
                    });
                }
                Ok(Nat::from(1u32) << e)
            }
        }
    }
}

/// The interface a preamplifier exposes to [`compose`]: the distinguished
/// triple, the claimed constant, and which counters the simulated program may
/// reuse (safe) or must stay away from (unsafe).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreamplifierSpec {
    pub x: CounterId,
    pub y: CounterId,
    pub b: CounterId,
    pub k: ClaimedK,
    pub safe: BTreeSet<CounterId>,
    #[serde(rename = "unsafe")]
    pub unsafe_counters: BTreeSet<CounterId>,
}

impl PreamplifierSpec {
    fn validate(&self) -> Result<(), GadgetError> {
        let triple = [&self.x, &self.y, &self.b];
        if self.x == self.y || self.y == self.b || self.x == self.b {
            return Err(GadgetError::CounterClash(
                "x, y, b must be pairwise distinct".into(),
            ));
        }
        if triple.iter().any(|c| !self.unsafe_counters.contains(*c)) {
            return Err(GadgetError::CounterClash(
                "x, y, b must be unsafe counters".into(),
            ));
        }
        if !self.safe.is_disjoint(&self.unsafe_counters) {
            return Err(GadgetError::CounterClash(
                "safe and unsafe counters must be disjoint".into(),
            ));
        }
        Ok(())
    }

    pub fn new(
        x: CounterId,
        y: CounterId,
        b: CounterId,
        k: ClaimedK,
        safe: BTreeSet<CounterId>,
        unsafe_counters: BTreeSet<CounterId>,
    ) -> Result<Self, GadgetError> {
        let spec = PreamplifierSpec {
            x,
            y,
            b,
            k,
            safe,
            unsafe_counters,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// The simtest gadget: simulates `test c` for `c = block[0]` without testing.
///
/// With `b_0, …, b_d` the block, the program runs d forward transfer loops
/// `loop { dec b_i; inc b_{i-1}; dec budget }`, the d backward loops in
/// reverse, then decrements `pair` twice. It is test-free, preserves the
/// block sum K, can drain at most 2K from `budget`, and drains exactly 2K
/// only when the tested counter started at zero and all transfers were total.
pub fn build_sim_test(
    budget: &CounterId,
    block: &[CounterId],
    pair: &CounterId,
) -> Result<Program, GadgetError> {
    if block.is_empty() {
        return Err(GadgetError::CounterClash("empty block".into()));
    }
    let distinct: BTreeSet<_> = block.iter().collect();
    if distinct.len() != block.len() {
        return Err(GadgetError::CounterClash("block counters must be distinct".into()));
    }
    if budget == pair {
        return Err(GadgetError::CounterClash(format!(
            "budget and pair are both {budget}"
        )));
    }
    for c in [budget, pair] {
        if distinct.contains(c) {
            return Err(GadgetError::CounterClash(format!("{c} is in the block")));
        }
    }
    let d = block.len() - 1;
    let mut parts = Vec::new();
    for i in 1..=d {
        parts.push(Program::loop_(Program::seq_of([
            Program::dec(&block[i]),
            Program::inc(&block[i - 1]),
            Program::dec(budget),
        ])));
    }
    for i in (1..=d).rev() {
        parts.push(Program::loop_(Program::seq_of([
            Program::dec(&block[i - 1]),
            Program::inc(&block[i]),
            Program::dec(budget),
        ])));
    }
    parts.push(Program::repeat(Program::dec(pair), 2));
    Ok(Program::seq_of(parts))
}

/// `loop { dec c; inc aux }; loop { dec aux; inc c; body }` — iterates the
/// body at most `c + aux` times.
pub(crate) fn loop_at_most(c: &CounterId, aux: &CounterId, body: Program) -> Program {
    Program::seq_of([
        Program::loop_(Program::seq_of([Program::dec(c), Program::inc(aux)])),
        Program::loop_(Program::seq_of([Program::dec(aux), Program::inc(c), body])),
    ])
}

/// Checked form of the loop-at-most combinator. The iteration-count laws
/// assume the body does not touch `c` or `aux`, so that is enforced here;
/// the evalF construction deliberately embeds those counters in bodies and
/// uses the raw combinator internally.
pub fn build_loop_at_most(
    c: &CounterId,
    aux: &CounterId,
    body: Program,
) -> Result<Program, GadgetError> {
    if c == aux {
        return Err(GadgetError::CounterClash(format!(
            "loop-at-most counters are both {c}"
        )));
    }
    let used = body.counters();
    for clash in [c, aux] {
        if used.contains(clash) {
            return Err(GadgetError::CounterClash(format!(
                "body uses loop-at-most counter {clash}"
            )));
        }
    }
    Ok(loop_at_most(c, aux, body))
}

/// The counter layout shared by the evalF machinery, the conform-configuration
/// classifier, and the Ackermannian preamplifiers: `x, x', x_1…x_{d+1}, y, b,
/// b', c_0, c_0', c_1…c_d`, canonically named `x, xp, x1…, y, b, bp, c0,
/// c0p, c1…` (primes become a `p` suffix).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoodConfigLayout {
    pub d: usize,
    pub x: CounterId,
    pub xp: CounterId,
    /// `x_1 … x_{d+1}`.
    pub xs: Vec<CounterId>,
    pub y: CounterId,
    pub b: CounterId,
    pub bp: CounterId,
    pub c0: CounterId,
    pub c0p: CounterId,
    /// `c_1 … c_d`.
    pub cs: Vec<CounterId>,
}

impl GoodConfigLayout {
    /// The canonical layout for dimension parameter `d >= 1`.
    pub fn canonical(d: usize) -> Self {
        assert!(d >= 1, "layout needs d >= 1");
        GoodConfigLayout {
            d,
            x: CounterId::new("x"),
            xp: CounterId::new("xp"),
            xs: (1..=d + 1)
                .map(|i| CounterId::new(&format!("x{i}")))
                .collect(),
            y: CounterId::new("y"),
            b: CounterId::new("b"),
            bp: CounterId::new("bp"),
            c0: CounterId::new("c0"),
            c0p: CounterId::new("c0p"),
            cs: (1..=d).map(|i| CounterId::new(&format!("c{i}"))).collect(),
        }
    }

    /// `x_i` for `1 <= i <= d+1`.
    pub fn x_i(&self, i: usize) -> &CounterId {
        &self.xs[i - 1]
    }

    /// `c_i` for `0 <= i <= d`.
    pub fn c_i(&self, i: usize) -> &CounterId {
        if i == 0 {
            &self.c0
        } else {
            &self.cs[i - 1]
        }
    }

    /// All `2d + 8` layout counters.
    pub fn all_counters(&self) -> Vec<CounterId> {
        let mut all = vec![
            self.x.clone(),
            self.xp.clone(),
            self.y.clone(),
            self.b.clone(),
            self.bp.clone(),
            self.c0.clone(),
            self.c0p.clone(),
        ];
        all.extend(self.xs.iter().cloned());
        all.extend(self.cs.iter().cloned());
        all
    }
}

/// One branch `evalF_{d,p}` of the rewrite gadget:
///
/// ```text
/// dec c_p
/// loop { dec x_1,…,x_{d+1}; inc y }
/// loop-at-most (x, x') { dec y; inc x_p; inc x_1,…,x_{d+1} }
/// loop-at-most (c_0, c_0') {
///   inc c_{p-1}
///   loop-at-most (x, x') {
///     dec x'
///     loop-at-most (b, b') { dec y; inc x_p; inc x_p,…,x_{d+1} }
///   }
/// }
/// inc c_{p-1}
/// updateB   (only for p = 1)
/// ```
///
/// The lone `inc c_{p-1}` sits after the middle loop, not before it: for
/// `p = 1` that counter is `c_0`, and incrementing it first would let the
/// loop-at-most over `(c_0, c_0')` run one extra iteration, after which
/// partially transferred runs can end outside the good/bad classification
/// (and, downstream, leak a non-zero `x'` past the preamplifier's final
/// tests). For `p > 1` the counter is untouched by that loop and the
/// placement makes no difference to the relation.
pub fn build_eval_f_branch(layout: &GoodConfigLayout, p: usize) -> Result<Program, GadgetError> {
    if p < 1 || p > layout.d {
        return Err(GadgetError::IndexOutOfRange { p, d: layout.d });
    }
    Ok(eval_f_branch_inner(layout, p, false))
}

/// Shared by the plain and the reduced (x_d-eliminated) constructions.
pub(crate) fn eval_f_branch_inner(
    layout: &GoodConfigLayout,
    p: usize,
    drop_xd: bool,
) -> Program {
    let d = layout.d;
    // In the reduced construction the counter x_d does not exist.
    let keep = |i: usize| !(drop_xd && i == d);
    let xs_range = |from: usize, f: &dyn Fn(&CounterId) -> Program| -> Vec<Program> {
        (from..=d + 1)
            .filter(|&i| keep(i))
            .map(|i| f(layout.x_i(i)))
            .collect()
    };

    let mut head = Vec::new();
    if !(drop_xd && p == d) {
        // The reduced construction hard-codes c_d in the control structure,
        // so the p = d branch loses its leading decrement.
        head.push(Program::dec(layout.c_i(p)));
    }

    let transfer = Program::loop_(Program::seq_of(
        xs_range(1, &|c| Program::dec(c))
            .into_iter()
            .chain([Program::inc(&layout.y)]),
    ));

    let mut restore_body = vec![Program::dec(&layout.y)];
    if keep(p) {
        restore_body.push(Program::inc(layout.x_i(p)));
    }
    restore_body.extend(xs_range(1, &|c| Program::inc(c)));
    let restore = loop_at_most(&layout.x, &layout.xp, Program::seq_of(restore_body));

    let mut inner_body = vec![Program::dec(&layout.y)];
    if keep(p) {
        inner_body.push(Program::inc(layout.x_i(p)));
    }
    inner_body.extend(xs_range(p, &|c| Program::inc(c)));
    let inner = loop_at_most(
        &layout.x,
        &layout.xp,
        Program::seq_of(
            [Program::dec(&layout.xp)].into_iter().chain([loop_at_most(
                &layout.b,
                &layout.bp,
                Program::seq_of(inner_body),
            )]),
        ),
    );
    let kloop = loop_at_most(
        &layout.c0,
        &layout.c0p,
        Program::seq_of([Program::inc(layout.c_i(p - 1)), inner]),
    );

    let tail = if p == 1 {
        build_update_b(layout)
    } else {
        Program::Skip
    };

    Program::seq_of(head.into_iter().chain([
        transfer,
        restore,
        kloop,
        Program::inc(layout.c_i(p - 1)),
        tail,
    ]))
}

/// The `updateB_{d,1}` gadget: doubles `b + b'` once per two units of
/// `c_0 + c_0'`, i.e. multiplies B by `2^{(C_0+1)/2}` when run maximally.
pub fn build_update_b(layout: &GoodConfigLayout) -> Program {
    Program::seq_of([
        Program::inc(&layout.c0),
        loop_at_most(
            &layout.c0,
            &layout.c0p,
            Program::seq_of([
                Program::dec(&layout.c0p),
                Program::inc(&layout.c0),
                loop_at_most(&layout.b, &layout.bp, Program::inc(&layout.b)),
            ]),
        ),
        Program::dec(&layout.c0),
    ])
}

/// `evalF_d`: the non-deterministic choice of the branches `evalF_{d,p}`
/// for `p = 1…d`. Test-free.
pub fn build_eval_f(layout: &GoodConfigLayout) -> Program {
    Program::choice_of((1..=layout.d).map(|p| eval_f_branch_inner(layout, p, false)))
}

/// A fixture preamplifier with the constant built in:
/// `repeat K { inc b }; loop { inc x; repeat K { inc y } }`.
///
/// Every reachable configuration is exactly `(x, y, b) = (ℓ, Kℓ, K)`, so the
/// preamplifier laws hold with zero safe counters and no final tests.
pub fn build_trivial_preamplifier(k: u64) -> Result<(Program, PreamplifierSpec), GadgetError> {
    if k == 0 {
        return Err(GadgetError::InvalidParameter("trivial preamplifier needs K >= 1".into()));
    }
    let x = CounterId::new("x");
    let y = CounterId::new("y");
    let b = CounterId::new("b");
    let program = Program::seq_of([
        Program::repeat(Program::inc(&b), k),
        Program::loop_(Program::seq_of([
            Program::inc(&x),
            Program::repeat(Program::inc(&y), k),
        ])),
    ]);
    let spec = PreamplifierSpec::new(
        x.clone(),
        y.clone(),
        b.clone(),
        ClaimedK::Exact(Nat::from(k)),
        BTreeSet::new(),
        [x, y, b].into(),
    )?;
    Ok((program, spec))
}
