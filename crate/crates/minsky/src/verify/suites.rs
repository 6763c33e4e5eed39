//! Exhaustive desk-scale suites for the gadget laws.

use super::{classify_conform, make_good_config, ConformClass, SuiteReport, VerifyError};
use crate::fastmath::{eval_f_step, EvalFState, Nat};
use crate::gadgets::{
    build_eval_f, build_sim_test, build_update_b, compose, loop_at_most, GoodConfigLayout,
    PreamplifierSpec,
};
use crate::ir::{Configuration, CounterId, Program};
use crate::semantics::{reach_set, ExplorationPolicy};
use num_traits::Zero;
use std::collections::BTreeSet;
use std::time::Instant;

fn exhaustive(
    p: &Program,
    from: &Configuration,
    policy: &ExplorationPolicy,
    what: &str,
) -> Result<BTreeSet<Configuration>, VerifyError> {
    let r = reach_set(p, from, policy)?;
    if !r.exhausted {
        return Err(VerifyError::Inconclusive(format!(
            "search truncated while checking {what} from {from}"
        )));
    }
    Ok(r.configs)
}

/// Enumerates all assignments of `0..=max_val` to `counters`.
fn enumerate_assignments(counters: &[CounterId], max_val: u64) -> Vec<Configuration> {
    let mut out = vec![Configuration::zero()];
    for c in counters {
        out = out
            .into_iter()
            .flat_map(|cfg| {
                (0..=max_val).map(move |v| {
                    let mut next = cfg.clone();
                    next.set(c.clone(), Nat::from(v));
                    next
                })
            })
            .collect();
    }
    out
}

/// Checks the two transfer laws of the simtest gadget, exhaustively over all
/// start configurations with entries up to `max_val` and block sizes up to
/// `max_b`:
///
/// - universally: the block sum K is preserved; `y >= K·x` is preserved; and
///   an end configuration with `y = K·x` forces the start to satisfy the
///   same equality, the tested counter to start at zero, and the effect to
///   be exactly `y -= 2K, x -= 2`;
/// - existentially: whenever the tested counter is zero, `y >= 2K`, and
///   `x >= 2`, the configuration with `y -= 2K, x -= 2` is reachable.
pub fn suite_sim_test(max_b: usize, max_val: u64) -> Result<SuiteReport, VerifyError> {
    sim_test_suite(max_b, max_val, false)
}

/// Mutation control: same checks against a gadget with its first increment
/// flipped to a decrement. A passing run would mean the suite is vacuous.
pub fn suite_sim_test_mutated(max_b: usize, max_val: u64) -> Result<SuiteReport, VerifyError> {
    if max_b < 2 {
        return Err(VerifyError::BadParameters(
            "the mutated gadget needs a block of at least 2 (no increments otherwise)".into(),
        ));
    }
    sim_test_suite(max_b, max_val, true)
}

fn flip_first_inc(p: &Program, flipped: &mut bool) -> Program {
    match p {
        Program::Inc(c) if !*flipped => {
            *flipped = true;
            Program::Dec(c.clone())
        }
        Program::Skip | Program::Inc(_) | Program::Dec(_) | Program::Test(_) => p.clone(),
        Program::Loop(b) => Program::Loop(Box::new(flip_first_inc(b, flipped))),
        Program::Seq(a, b) => Program::Seq(
            Box::new(flip_first_inc(a, flipped)),
            Box::new(flip_first_inc(b, flipped)),
        ),
        Program::Choice(a, b) => Program::Choice(
            Box::new(flip_first_inc(a, flipped)),
            Box::new(flip_first_inc(b, flipped)),
        ),
        Program::Repeat(b, k) => Program::Repeat(Box::new(flip_first_inc(b, flipped)), *k),
    }
}

fn sim_test_suite(max_b: usize, max_val: u64, mutate: bool) -> Result<SuiteReport, VerifyError> {
    if max_b > 3 || max_val > 4 {
        return Err(VerifyError::BadParameters(format!(
            "simtest suite supports max_b <= 3 and max_val <= 4, got ({max_b}, {max_val})"
        )));
    }
    let start = Instant::now();
    let mut report = SuiteReport::new(if mutate { "simtest-mutated" } else { "simtest" });
    let budget = CounterId::new("y");
    let pair = CounterId::new("x");
    let policy = ExplorationPolicy::unbounded();

    for size in 1..=max_b {
        let block: Vec<CounterId> = (0..size).map(|i| CounterId::new(&format!("b{i}"))).collect();
        let mut gadget = build_sim_test(&budget, &block, &pair)?;
        if mutate {
            let mut flipped = false;
            gadget = flip_first_inc(&gadget, &mut flipped);
            if !flipped {
                continue;
            }
        }
        let mut counters = block.clone();
        counters.push(pair.clone());
        counters.push(budget.clone());

        for alpha in enumerate_assignments(&counters, max_val) {
            let reach = exhaustive(&gadget, &alpha, &policy, "simtest")?;
            let k: Nat = block.iter().map(|c| alpha.get(c)).sum();
            let block_sum =
                |cfg: &Configuration| -> Nat { block.iter().map(|c| cfg.get(c)).collect::<Vec<_>>().into_iter().sum() };
            let alpha_budget_ok = alpha.get(&budget) >= &k * alpha.get(&pair);

            report.case();
            for beta in &reach {
                if block_sum(beta) != k {
                    report.fail(
                        format!("alpha = {alpha}, beta = {beta}"),
                        format!("block sum {k}"),
                        block_sum(beta).to_string(),
                    );
                }
                if alpha_budget_ok {
                    let beta_eq = beta.get(&budget) == &k * beta.get(&pair);
                    if beta.get(&budget) < &k * beta.get(&pair) {
                        report.fail(
                            format!("alpha = {alpha}, beta = {beta}"),
                            "y >= K*x preserved",
                            "violated",
                        );
                    }
                    if beta_eq {
                        // The equality forces an honest simulated test.
                        let honest = alpha.get(&budget) == &k * alpha.get(&pair)
                            && alpha.get(&block[0]).is_zero()
                            && *beta
                                == effect_of_test(&alpha, &budget, &pair, &k)
                                    .unwrap_or_else(Configuration::zero);
                        if !honest {
                            report.fail(
                                format!("alpha = {alpha}, beta = {beta}"),
                                "y = K*x end forces test c; y -= 2K; x -= 2",
                                "other run reached the equality",
                            );
                        }
                    }
                }
            }

            report.case();
            if alpha.get(&block[0]).is_zero()
                && alpha.get(&budget) >= Nat::from(2u32) * &k
                && alpha.get(&pair) >= Nat::from(2u32)
            {
                let expected = effect_of_test(&alpha, &budget, &pair, &k).expect("guarded");
                if !reach.contains(&expected) {
                    report.fail(
                        format!("alpha = {alpha}"),
                        format!("reach {expected}"),
                        "missing",
                    );
                }
            }
        }
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// `alpha` after `test b_0; dec y^(2K); dec x^(2)`, when executable.
fn effect_of_test(
    alpha: &Configuration,
    budget: &CounterId,
    pair: &CounterId,
    k: &Nat,
) -> Option<Configuration> {
    let y = alpha.get(budget);
    let x = alpha.get(pair);
    let two_k = Nat::from(2u32) * k;
    if y < two_k || x < Nat::from(2u32) {
        return None;
    }
    let mut beta = alpha.clone();
    beta.set(budget.clone(), y - two_k);
    beta.set(pair.clone(), x - 2u32);
    Some(beta)
}

/// Checks one of the four loop-at-most laws against its explicit `(n, ℓ)`
/// characterization, for every start with `c + c' <= max_c` and the
/// instrumented body `inc z`:
///
/// 1. plain body: `z = ℓ, c += ℓ - n, c' += n - ℓ` for `n <= c₀`,
///    `ℓ <= n + c'₀`;
/// 2. body `inc c; …`: `c += 2ℓ - n`;
/// 3. body `dec c'; …`: `c' += n - 2ℓ` with `2ℓ <= n + c'₀`;
/// 4. body `dec c'; inc c; …`: `c += 2ℓ - n, c' += n - 2ℓ` with
///    `2ℓ <= n + c'₀`.
pub fn suite_loop_at_most(variant: u8, max_c: u64) -> Result<SuiteReport, VerifyError> {
    if !(1..=4).contains(&variant) || max_c > 8 {
        return Err(VerifyError::BadParameters(format!(
            "loop-at-most suite supports variants 1..=4 and max_c <= 8, got ({variant}, {max_c})"
        )));
    }
    let c = CounterId::new("c");
    let cp = CounterId::new("cp");
    let z = CounterId::new("z");
    let body = match variant {
        1 => Program::inc(&z),
        2 => Program::seq_of([Program::inc(&c), Program::inc(&z)]),
        3 => Program::seq_of([Program::dec(&cp), Program::inc(&z)]),
        _ => Program::seq_of([Program::dec(&cp), Program::inc(&c), Program::inc(&z)]),
    };
    let program = loop_at_most(&c, &cp, body);
    loop_at_most_suite_on(&program, variant, max_c)
}

/// Comparison core of [`suite_loop_at_most`], with the program injectable so
/// mutation tests can drive it against a broken gadget.
pub(crate) fn loop_at_most_suite_on(
    program: &Program,
    variant: u8,
    max_c: u64,
) -> Result<SuiteReport, VerifyError> {
    let start = Instant::now();
    let mut report = SuiteReport::new("loop-at-most");
    let c = CounterId::new("c");
    let cp = CounterId::new("cp");
    let z = CounterId::new("z");
    let policy = ExplorationPolicy::unbounded();

    for a in 0..=max_c {
        for b in 0..=max_c - a {
            let alpha = Configuration::zero().with(&c, a).with(&cp, b);
            let reach = exhaustive(program, &alpha, &policy, "loop-at-most")?;

            let mut oracle: BTreeSet<Configuration> = BTreeSet::new();
            for n in 0..=a {
                let l_top = match variant {
                    1 | 2 => n + b,
                    _ => (n + b) / 2,
                };
                for l in 0..=l_top {
                    let (cv, cpv) = match variant {
                        1 => (a - n + l, b + n - l),
                        2 => (a - n + 2 * l, b + n - l),
                        3 => (a - n + l, b + n - 2 * l),
                        _ => (a - n + 2 * l, b + n - 2 * l),
                    };
                    oracle.insert(
                        Configuration::zero()
                            .with(&c, cv)
                            .with(&cp, cpv)
                            .with(&z, l),
                    );
                }
            }

            report.case();
            if reach != oracle {
                for missing in oracle.difference(&reach) {
                    report.fail(format!("alpha = {alpha}"), format!("reach {missing}"), "missing");
                }
                for extra in reach.difference(&oracle) {
                    report.fail(format!("alpha = {alpha}"), "no more", format!("extra {extra}"));
                }
            }

            // The equality clauses of the laws: a run with the maximal l
            // forces (c, c'). For the halved variants the bound l = (c+c')/2
            // is an equality only when c + c' is even.
            report.case();
            let total = a + b;
            let equality_case = match variant {
                1 | 2 => Some((total, if variant == 1 { total } else { 2 * total })),
                _ if total % 2 == 0 => {
                    Some((total / 2, if variant == 3 { total / 2 } else { total }))
                }
                _ => None,
            };
            if let Some((l_eq, c_forced)) = equality_case {
                for beta in &reach {
                    if beta.get(&z) != Nat::from(l_eq) {
                        continue;
                    }
                    let got = (beta.get(&c), beta.get(&cp));
                    let want = (Nat::from(c_forced), Nat::zero());
                    if got != want {
                        report.fail(
                            format!("alpha = {alpha}, beta = {beta}"),
                            format!("maximal run forces (c, c') = ({}, {})", want.0, want.1),
                            format!("({}, {})", got.0, got.1),
                        );
                    }
                }
            }
        }
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// A good start configuration for the evalF suite: encodes `(v, n)` with
/// scaling counter `x`.
#[derive(Debug, Clone)]
pub struct EvalFCase {
    pub v: Vec<u64>,
    pub n: u64,
    pub x: u64,
}

impl EvalFCase {
    /// `x = x_scale · 2^n`, which makes `b` divide `x`.
    pub fn scaled(v: &[u64], n: u64, x_scale: u64) -> Self {
        EvalFCase {
            v: v.to_vec(),
            n,
            x: x_scale << n,
        }
    }
}

/// The case set exercised by the acceptance run.
pub fn default_eval_f_cases(d: usize) -> Vec<EvalFCase> {
    match d {
        1 => vec![
            EvalFCase::scaled(&[1], 0, 1),
            EvalFCase::scaled(&[1], 0, 2),
            EvalFCase::scaled(&[2], 0, 1),
            EvalFCase::scaled(&[1], 1, 1),
            // Zero vector: the rewrite step is undefined; skipped.
            EvalFCase::scaled(&[0], 2, 1),
            // b = 2 does not divide x = 1: no good successor may appear.
            EvalFCase { v: vec![1], n: 1, x: 1 },
        ],
        2 => vec![
            EvalFCase::scaled(&[0, 1], 0, 1),
            EvalFCase::scaled(&[1, 0], 0, 1),
            EvalFCase::scaled(&[1, 1], 0, 1),
        ],
        _ => vec![],
    }
}

/// Runs the evalF gadget from good configurations and checks the
/// conform-configuration laws: every reachable end configuration is conform;
/// good ones encode exactly the rewrite step of the start pair and preserve
/// `x_{d+1}`; when `b` divides `x` a good successor is reachable, and when
/// it does not none may be. Separately drives `updateB` through all small
/// starts and checks its doubling law exactly.
pub fn suite_eval_f(
    d: usize,
    cases: &[EvalFCase],
    policy: &ExplorationPolicy,
) -> Result<SuiteReport, VerifyError> {
    let layout = GoodConfigLayout::canonical(d);
    eval_f_suite_on(
        &build_eval_f(&layout),
        &build_update_b(&layout),
        &layout,
        cases,
        policy,
    )
}

/// Comparison core of [`suite_eval_f`] with both gadgets injectable.
pub(crate) fn eval_f_suite_on(
    program: &Program,
    update: &Program,
    layout: &GoodConfigLayout,
    cases: &[EvalFCase],
    policy: &ExplorationPolicy,
) -> Result<SuiteReport, VerifyError> {
    let start = Instant::now();
    let mut report = SuiteReport::new("evalf");
    let d = layout.d;

    for case in cases {
        if case.v.iter().all(|&e| e == 0) {
            // evalF is undefined on the zero vector; noted and skipped.
            report.case();
            continue;
        }
        let alpha = make_good_config(layout, &case.v, case.n, case.x);
        let reach = exhaustive(program, &alpha, policy, "evalF")?;
        let expected = eval_f_step(&EvalFState::from_u64(&case.v, case.n)).expect("non-zero v");
        let alpha_top = alpha.get(layout.x_i(d + 1));
        let divisible = case.x % (1u64 << case.n) == 0;
        let mut good_seen = false;

        for beta in &reach {
            report.case();
            let rep = classify_conform(beta, layout)?;
            match rep.class {
                ConformClass::NonConform => {
                    report.fail(
                        format!("alpha = {alpha}, beta = {beta}"),
                        "conform",
                        "non-conform",
                    );
                }
                ConformClass::Good => {
                    if !divisible {
                        report.fail(
                            format!("alpha = {alpha}, beta = {beta}"),
                            "no good successor when b does not divide x",
                            "good successor",
                        );
                        continue;
                    }
                    good_seen = true;
                    let (ev, en) = rep.encoded_pair.expect("good");
                    let want: Vec<Nat> = expected.v.clone();
                    if ev != want || en != expected.n {
                        report.fail(
                            format!("alpha = {alpha}, beta = {beta}"),
                            format!("encodes ({:?}, {})", expected.v, expected.n),
                            format!("encodes ({ev:?}, {en})"),
                        );
                    }
                    if beta.get(layout.x_i(d + 1)) != alpha_top {
                        report.fail(
                            format!("alpha = {alpha}, beta = {beta}"),
                            format!("x_{} preserved at {alpha_top}", d + 1),
                            beta.get(layout.x_i(d + 1)).to_string(),
                        );
                    }
                }
                ConformClass::Bad(_) => {}
            }
        }

        report.case();
        if divisible && !good_seen {
            report.fail(
                format!("alpha = {alpha}"),
                "a good successor is reachable",
                "none",
            );
        }
    }

    // updateB: the doubling law of B = b + b' driven by C_0 = c_0 + c_0'.
    let unbounded = ExplorationPolicy::unbounded();
    for c0 in 0..=3u64 {
        for c0p in 0..=2u64 {
            for b in 0..=2u64 {
                for bp in 0..=1u64 {
                    let alpha = Configuration::zero()
                        .with(&layout.c0, c0)
                        .with(&layout.c0p, c0p)
                        .with(&layout.b, b)
                        .with(&layout.bp, bp);
                    let reach = exhaustive(update, &alpha, &unbounded, "updateB")?;
                    let c_total = c0 + c0p;
                    let b_total = b + bp;
                    let bound = Nat::from(b_total) << c_total.div_ceil(2);

                    report.case();
                    let mut max_seen = Nat::zero();
                    for beta in &reach {
                        let bc = beta.get(&layout.c0) + beta.get(&layout.c0p);
                        if bc != Nat::from(c_total) {
                            report.fail(
                                format!("alpha = {alpha}, beta = {beta}"),
                                format!("C_0 preserved at {c_total}"),
                                bc.to_string(),
                            );
                        }
                        let bb = beta.get(&layout.b) + beta.get(&layout.bp);
                        if bb > bound {
                            report.fail(
                                format!("alpha = {alpha}, beta = {beta}"),
                                format!("B <= {bound}"),
                                bb.to_string(),
                            );
                        }
                        if bb == bound
                            && b_total > 0
                            && c_total % 2 == 1
                            && (!beta.get(&layout.bp).is_zero()
                                || !beta.get(&layout.c0p).is_zero())
                        {
                            report.fail(
                                format!("alpha = {alpha}, beta = {beta}"),
                                "maximal doubling forces b' = c_0' = 0",
                                "aux counters non-zero",
                            );
                        }
                        max_seen = max_seen.max(bb);
                    }
                    if max_seen != bound {
                        report.fail(
                            format!("alpha = {alpha}"),
                            format!("max reachable B = {bound}"),
                            max_seen.to_string(),
                        );
                    }

                    if c_total % 2 == 1 {
                        report.case();
                        let beta = Configuration::zero()
                            .with(&layout.c0, c_total)
                            .with(&layout.b, Nat::from(b_total) << c_total.div_ceil(2));
                        if !reach.contains(&beta) {
                            report.fail(
                                format!("alpha = {alpha}"),
                                format!("reach {beta}"),
                                "missing",
                            );
                        }
                    }
                }
            }
        }
    }

    report.elapsed = start.elapsed();
    Ok(report)
}

/// Compares the K-bounded reach set of `m` from zero with the final
/// configurations of `A ▷ m`: the two must coincide exactly, and every final
/// configuration of the composition must already be zero outside `m`'s
/// counters.
pub fn suite_compose(
    m: &Program,
    k: u64,
    a: &Program,
    spec: &PreamplifierSpec,
    policy: &ExplorationPolicy,
) -> Result<SuiteReport, VerifyError> {
    let start = Instant::now();
    let mut report = SuiteReport::new("compose");
    let left = exhaustive(m, &Configuration::zero(), &ExplorationPolicy::sum_bounded(k), "M")?;
    let composed = compose(a, spec, m)?;
    let right = exhaustive(&composed, &Configuration::zero(), policy, "A ▷ M")?;
    let m_counters = m.counters();

    for beta in &right {
        report.case();
        if !beta.supported_by(m_counters.iter()) {
            report.fail(
                format!("beta = {beta}"),
                "zeros outside M's counters",
                "stray non-zero counter",
            );
        }
    }
    for beta in &left {
        report.case();
        if !right.contains(beta) {
            report.fail(
                format!("beta = {beta}"),
                "reachable through A ▷ M",
                "missing",
            );
        }
    }
    for beta in &right {
        report.case();
        if !left.contains(beta) {
            report.fail(
                format!("beta = {beta}"),
                "K-bounded reachable through M",
                "not reachable",
            );
        }
    }
    report.elapsed = start.elapsed();
    Ok(report)
}
