//! Ackermannian preamplifiers.
//!
//! `build_ack(d, n)` emits a checking program on the `2d+8` layout counters
//! that is a K-preamplifier for `K = 2^{F_{d+1}(n)}`: it pumps a scalable
//! good configuration encoding `((0,…,0,n+1), n)`, iterates the evalF gadget
//! until the encoded vector is exhausted, drains the tower into `y`, and
//! tests everything that must be zero. `build_ack_reduced` applies the two
//! control-structure optimizations (hard-coding the monotone counter `c_d`
//! by unfolding, and eliminating `x_d`) to reach `2d+6` counters.

use super::{
    eval_f_branch_inner, ClaimedK, GadgetError, GoodConfigLayout, PreamplifierSpec,
};
use crate::ir::{CounterId, Program};
use std::collections::BTreeSet;

/// Largest supported `n`: the construction contains `2^{2n+1}`-fold repeats.
const MAX_N: u64 = 8;

fn check_params(d: usize, n: u64) -> Result<(), GadgetError> {
    if d < 1 {
        return Err(GadgetError::InvalidParameter("ack needs d >= 1".into()));
    }
    if n > MAX_N {
        return Err(GadgetError::BudgetExceeded(format!(
            "ack repeat counts 2^{} do not fit memory (n <= {MAX_N})",
            2 * n + 1
        )));
    }
    Ok(())
}

fn repeat_if(body: Program, k: u64) -> Option<Program> {
    (k > 0).then(|| Program::repeat(body, k))
}

/// The replay-loop body: `inc x; inc{x_1,…,x_d}^(2^n); inc x_{d+1}^(2^{2n+1})`.
/// `keep` filters the braced group for the reduced construction.
fn pump_body(layout: &GoodConfigLayout, n: u64, keep: &dyn Fn(usize) -> bool) -> Program {
    let d = layout.d;
    let group: Vec<Program> = (1..=d)
        .filter(|&i| keep(i))
        .map(|i| Program::inc(layout.x_i(i)))
        .collect();
    let mut parts = vec![Program::inc(&layout.x)];
    if !group.is_empty() {
        parts.push(Program::repeat(Program::seq_of(group), 1 << n));
    }
    parts.push(Program::repeat(
        Program::inc(layout.x_i(d + 1)),
        1 << (2 * n + 1),
    ));
    Program::seq_of(parts)
}

fn drain_loop(layout: &GoodConfigLayout, keep: &dyn Fn(usize) -> bool) -> Program {
    let d = layout.d;
    Program::loop_(Program::seq_of(
        [Program::inc(&layout.y)].into_iter().chain(
            (1..=d + 1)
                .filter(|&i| keep(i))
                .map(|i| Program::dec(layout.x_i(i))),
        ),
    ))
}

/// The `Ack_{d,n}` checking program and its preamplifier interface.
///
/// Uses `2d+8` counters; `K = 2^{F_{d+1}(n)}`; safe counters are
/// `x', x_1…x_d`. The preamble initializes `b` to `2^n` so that the pumped
/// configurations are good (they must satisfy `b = 2^{c_0}` with `c_0 = n`).
pub fn build_ack(d: usize, n: u64) -> Result<(Program, PreamplifierSpec), GadgetError> {
    check_params(d, n)?;
    let layout = GoodConfigLayout::canonical(d);
    let keep_all = |_: usize| true;

    let mut parts = Vec::new();
    parts.extend(repeat_if(Program::inc(&layout.c0), n));
    parts.push(Program::repeat(Program::inc(layout.c_i(d)), n + 1));
    parts.push(Program::repeat(Program::inc(&layout.b), 1 << n));
    let body = pump_body(&layout, n, &keep_all);
    parts.push(body.clone());
    parts.push(Program::loop_(body));
    parts.push(Program::loop_(super::build_eval_f(&layout)));
    parts.push(drain_loop(&layout, &keep_all));
    parts.push(Program::loop_(Program::dec(&layout.c0)));

    let tested: Vec<CounterId> = [
        layout.x_i(d + 1).clone(),
        layout.bp.clone(),
        layout.c0p.clone(),
        layout.c0.clone(),
    ]
    .into_iter()
    .chain(layout.cs.iter().cloned())
    .collect();
    parts.extend(tested.iter().map(Program::test));
    let program = Program::seq_of(parts);

    let safe: BTreeSet<CounterId> = [layout.xp.clone()]
        .into_iter()
        .chain((1..=d).map(|i| layout.x_i(i).clone()))
        .collect();
    let unsafe_counters: BTreeSet<CounterId> = [
        layout.x.clone(),
        layout.y.clone(),
        layout.b.clone(),
    ]
    .into_iter()
    .chain(tested)
    .collect();
    let spec = PreamplifierSpec::new(
        layout.x.clone(),
        layout.y.clone(),
        layout.b.clone(),
        ClaimedK::TwoPowFg { d: d as u64, n },
        safe,
        unsafe_counters,
    )?;
    Ok((program, spec))
}

/// The reduced construction on `2d+6` counters.
///
/// Two optimizations: `c_d` starts at `n+1` and is only ever decremented (by
/// the head of the `p = d` branch), so its value is hard-coded by unfolding
/// the evalF loop into `n+2` phases chained by mandatory `p = d` transitions;
/// and `x_d` is eliminated, its good value being `x_{d+1}·2^{-c_d}`.
///
/// For `d = 1` the eliminated `x_d = x_1` is the counter whose drain-time
/// shortfall kills runs with partially restored transfers, so `x'` joins the
/// final tests to keep the zeros clause of the preamplifier laws; the safe
/// set is then empty. For `d >= 2` the safe counters are `x', x_1…x_{d-1}`.
pub fn build_ack_reduced(d: usize, n: u64) -> Result<(Program, PreamplifierSpec), GadgetError> {
    check_params(d, n)?;
    let layout = GoodConfigLayout::canonical(d);
    let keep = |i: usize| i != d;

    let mut parts = Vec::new();
    parts.extend(repeat_if(Program::inc(&layout.c0), n));
    parts.push(Program::repeat(Program::inc(&layout.b), 1 << n));
    let body = pump_body(&layout, n, &keep);
    parts.push(body.clone());
    parts.push(Program::loop_(body));

    // Phases: c_d = n+1, n, …, 0. Between transitions the other branches may
    // run freely; the transition itself is the p = d branch with its leading
    // `dec c_d` gone. A run reaches the final tests only after all n+2
    // phases, exactly as the original's `test c_d` demanded.
    let other = (1..d)
        .map(|p| eval_f_branch_inner(&layout, p, true))
        .collect::<Vec<_>>();
    let free_loop = if other.is_empty() {
        Program::Skip
    } else {
        Program::loop_(Program::choice_of(other))
    };
    let transition = eval_f_branch_inner(&layout, d, true);
    parts.push(free_loop.clone());
    for _ in 0..=n {
        parts.push(transition.clone());
        parts.push(free_loop.clone());
    }

    parts.push(drain_loop(&layout, &keep));
    parts.push(Program::loop_(Program::dec(&layout.c0)));

    let mut tested: Vec<CounterId> = [
        layout.x_i(d + 1).clone(),
        layout.bp.clone(),
        layout.c0p.clone(),
        layout.c0.clone(),
    ]
    .into_iter()
    .chain((1..d).map(|i| layout.c_i(i).clone()))
    .collect();
    if d == 1 {
        tested.push(layout.xp.clone());
    }
    parts.extend(tested.iter().map(Program::test));
    let program = Program::seq_of(parts);

    let safe: BTreeSet<CounterId> = if d >= 2 {
        [layout.xp.clone()]
            .into_iter()
            .chain((1..d).map(|i| layout.x_i(i).clone()))
            .collect()
    } else {
        BTreeSet::new()
    };
    let unsafe_counters: BTreeSet<CounterId> = [
        layout.x.clone(),
        layout.y.clone(),
        layout.b.clone(),
    ]
    .into_iter()
    .chain(tested)
    .collect();
    let spec = PreamplifierSpec::new(
        layout.x.clone(),
        layout.y.clone(),
        layout.b.clone(),
        ClaimedK::TwoPowFg { d: d as u64, n },
        safe,
        unsafe_counters,
    )?;
    Ok((program, spec))
}
