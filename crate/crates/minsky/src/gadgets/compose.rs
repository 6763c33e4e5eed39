//! The `A ▷ M` composition: reduces the K-bounded reachability of a general
//! program `M` to plain reachability of a checking program, given a
//! K-preamplifier `A`.
//!
//! The preamplifier's test-free core runs first and leaves `(x, y, b) =
//! (ℓ, Kℓ, K)` (on honest runs). `M` is rewritten so that the sum of its
//! counters plus `b` stays at `K` — every `inc` pays a `dec b`, every `dec`
//! refunds an `inc b` — and every test becomes a simtest that burns `2K`
//! from `y` and `2` from `x`. Draining `b` and testing `x, y, b` together
//! with `A`'s postponed tests at the very end forces every simulated test to
//! have been honest, so the final configurations are exactly the K-bounded
//! reach set of `M`.

use super::{build_sim_test, ClaimedK, GadgetError, PreamplifierSpec};
use crate::fastmath::Nat;
use crate::ir::{Classification, CounterId, Program};
use std::collections::{BTreeMap, BTreeSet};

fn substitute(p: &Program, map: &BTreeMap<CounterId, CounterId>) -> Program {
    let s = |c: &CounterId| map.get(c).cloned().unwrap_or_else(|| c.clone());
    match p {
        Program::Skip => Program::Skip,
        Program::Inc(c) => Program::Inc(s(c)),
        Program::Dec(c) => Program::Dec(s(c)),
        Program::Test(c) => Program::Test(s(c)),
        Program::Loop(b) => Program::Loop(Box::new(substitute(b, map))),
        Program::Seq(a, b) => Program::Seq(
            Box::new(substitute(a, map)),
            Box::new(substitute(b, map)),
        ),
        Program::Choice(a, b) => Program::Choice(
            Box::new(substitute(a, map)),
            Box::new(substitute(b, map)),
        ),
        Program::Repeat(b, k) => Program::Repeat(Box::new(substitute(b, map)), *k),
    }
}

/// Rewrites the prefixed `M`: bookkeeping on `b`, simtests for tests.
fn rewrite(
    p: &Program,
    block: &BTreeSet<CounterId>,
    x: &CounterId,
    y: &CounterId,
    b: &CounterId,
) -> Result<Program, GadgetError> {
    Ok(match p {
        Program::Skip => Program::Skip,
        Program::Inc(c) => Program::seq_of([Program::Inc(c.clone()), Program::dec(b)]),
        Program::Dec(c) => Program::seq_of([Program::Dec(c.clone()), Program::inc(b)]),
        Program::Test(c) => {
            // Enumeration of the block: the tested counter first, the rest
            // in name order.
            let mut enumeration = vec![c.clone()];
            enumeration.extend(block.iter().filter(|&e| e != c).cloned());
            build_sim_test(y, &enumeration, x)?
        }
        Program::Loop(body) => Program::loop_(rewrite(body, block, x, y, b)?),
        Program::Seq(l, r) => Program::seq_of([
            rewrite(l, block, x, y, b)?,
            rewrite(r, block, x, y, b)?,
        ]),
        Program::Choice(l, r) => Program::Choice(
            Box::new(rewrite(l, block, x, y, b)?),
            Box::new(rewrite(r, block, x, y, b)?),
        ),
        Program::Repeat(body, k) => Program::repeat(rewrite(body, block, x, y, b)?, *k),
    })
}

/// Picks a fresh name by prefixing `A::` until it avoids `taken`.
fn fresh_name(base: &CounterId, taken: &BTreeSet<CounterId>) -> CounterId {
    let mut name = base.clone();
    while taken.contains(&name) {
        name = CounterId::new(&format!("A::{name}"));
    }
    name
}

/// Builds `A ▷ M`.
///
/// `a` must classify as checking (or test-free, read as an empty test list)
/// and use only counters declared safe or unsafe by `spec`. The unsafe
/// counters of `a` are renamed apart from `M`'s counters; the safe counters
/// are mapped onto `M`'s counters in name order, so the result has dimension
/// `u + max(s, dim M)`. If `M` uses no counters the composition is `M`
/// itself.
pub fn compose(
    a: &Program,
    spec: &PreamplifierSpec,
    m: &Program,
) -> Result<Program, GadgetError> {
    spec.validate()?;
    let m_counters = m.counters();
    if m_counters.is_empty() {
        return Ok(m.clone());
    }

    let (core, tested) = match a.classify() {
        Classification::TestFree => (a.clone(), vec![]),
        Classification::Checking { core, tested } => (core, tested),
        Classification::General => {
            return Err(GadgetError::NotAPreamplifierShape(
                "preamplifier has interior test commands".into(),
            ))
        }
    };

    // A preamplifier that tests its own b forces K = 0; replace it by the
    // 0-preamplifier `loop { inc x }`.
    let (core, tested, spec) = if tested.contains(&spec.b) {
        let zero_spec = PreamplifierSpec::new(
            spec.x.clone(),
            spec.y.clone(),
            spec.b.clone(),
            ClaimedK::Exact(Nat::from(0u32)),
            BTreeSet::new(),
            [spec.x.clone(), spec.y.clone(), spec.b.clone()].into(),
        )?;
        (Program::loop_(Program::inc(&spec.x)), vec![], zero_spec)
    } else {
        (core, tested, spec.clone())
    };

    let declared: BTreeSet<CounterId> = spec
        .safe
        .iter()
        .chain(spec.unsafe_counters.iter())
        .cloned()
        .collect();
    if !core.counters().is_subset(&declared) {
        return Err(GadgetError::NotAPreamplifierShape(
            "preamplifier uses counters not declared safe or unsafe".into(),
        ));
    }
    if !tested.iter().all(|c| spec.unsafe_counters.contains(c)) {
        return Err(GadgetError::NotAPreamplifierShape(
            "tested counters must be declared unsafe".into(),
        ));
    }

    // Rename A's counters: unsafe ones apart from M, safe ones onto M's
    // counters in name order (extras, if any, kept apart from M).
    let mut rename: BTreeMap<CounterId, CounterId> = BTreeMap::new();
    let mut images: BTreeSet<CounterId> = m_counters.clone();
    for u in &spec.unsafe_counters {
        let image = fresh_name(u, &images);
        images.insert(image.clone());
        rename.insert(u.clone(), image);
    }
    let m_sorted: Vec<&CounterId> = m_counters.iter().collect();
    for (i, s) in spec.safe.iter().enumerate() {
        if i < m_sorted.len() {
            rename.insert(s.clone(), m_sorted[i].clone());
        } else {
            let image = fresh_name(s, &images);
            images.insert(image.clone());
            rename.insert(s.clone(), image);
        }
    }

    let core = substitute(&core, &rename);
    let tested: Vec<CounterId> = tested.iter().map(|c| rename[c].clone()).collect();
    let x = rename[&spec.x].clone();
    let y = rename[&spec.y].clone();
    let b = rename[&spec.b].clone();

    let mut block: BTreeSet<CounterId> = m_counters.clone();
    block.insert(b.clone());

    // M must start with a test; its lexicographically least counter serves.
    let least = m_counters.iter().next().expect("m uses counters").clone();
    let prefixed = Program::seq_of([Program::test(&least), m.clone()]);
    let m_rewritten = rewrite(&prefixed, &block, &x, &y, &b)?;

    Ok(Program::seq_of(
        [
            core,
            m_rewritten,
            Program::loop_(Program::dec(&b)),
            Program::test(&x),
            Program::test(&y),
            Program::test(&b),
        ]
        .into_iter()
        .chain(tested.iter().map(Program::test)),
    ))
}
