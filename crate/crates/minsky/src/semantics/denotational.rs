//! Reference semantics: the K-bounded relation as an explicit set of pairs.
//!
//! Computed by structural recursion over the program — relational
//! composition for `;`, union for `choice`, reflexive-transitive closure for
//! `loop` — over the finite space of K-bounded configurations. Completely
//! independent of the control-flow-graph engine; used to cross-validate it.

use super::SemanticsError;
use crate::fastmath::Nat;
use crate::ir::{Configuration, CounterId, Program};
use std::collections::{BTreeSet, HashMap};

/// Adjacency representation of a relation over the enumerated space.
#[derive(Clone)]
struct Rel {
    /// succ[i] = sorted config indices j with (i, j) in the relation.
    succ: Vec<Vec<u32>>,
}

impl Rel {
    fn empty(n: usize) -> Rel {
        Rel {
            succ: vec![Vec::new(); n],
        }
    }

    fn identity(n: usize) -> Rel {
        Rel {
            succ: (0..n as u32).map(|i| vec![i]).collect(),
        }
    }

    fn compose(&self, other: &Rel) -> Rel {
        let mut out = Rel::empty(self.succ.len());
        for (i, mids) in self.succ.iter().enumerate() {
            let mut acc: Vec<u32> = mids
                .iter()
                .flat_map(|&m| other.succ[m as usize].iter().copied())
                .collect();
            acc.sort_unstable();
            acc.dedup();
            out.succ[i] = acc;
        }
        out
    }

    fn union(&self, other: &Rel) -> Rel {
        let mut out = Rel::empty(self.succ.len());
        for i in 0..self.succ.len() {
            let mut acc = self.succ[i].clone();
            acc.extend(other.succ[i].iter().copied());
            acc.sort_unstable();
            acc.dedup();
            out.succ[i] = acc;
        }
        out
    }

    /// Reflexive-transitive closure, by BFS from every source.
    fn star(&self) -> Rel {
        let n = self.succ.len();
        let mut out = Rel::empty(n);
        let mut seen = vec![u32::MAX; n];
        for start in 0..n as u32 {
            let mut stack = vec![start];
            let mut reach = Vec::new();
            while let Some(i) = stack.pop() {
                if seen[i as usize] == start {
                    continue;
                }
                seen[i as usize] = start;
                reach.push(i);
                stack.extend(self.succ[i as usize].iter().copied());
            }
            reach.sort_unstable();
            out.succ[start as usize] = reach;
        }
        out
    }
}

/// Enumerates all configurations over `universe` with counter sum <= k.
fn enumerate_space(universe: &[CounterId], k: u64, limit: usize) -> Result<Vec<Vec<u64>>, SemanticsError> {
    let mut space = Vec::new();
    let mut cur = vec![0u64; universe.len()];
    fn rec(
        pos: usize,
        left: u64,
        cur: &mut Vec<u64>,
        out: &mut Vec<Vec<u64>>,
        limit: usize,
    ) -> Result<(), SemanticsError> {
        if pos == cur.len() {
            if out.len() >= limit {
                return Err(SemanticsError::SpaceExceeded { limit });
            }
            out.push(cur.clone());
            return Ok(());
        }
        for v in 0..=left {
            cur[pos] = v;
            rec(pos + 1, left - v, cur, out, limit)?;
        }
        cur[pos] = 0;
        Ok(())
    }
    rec(0, k, &mut cur, &mut space, limit)?;
    Ok(space)
}

fn build(
    p: &Program,
    space: &[Vec<u64>],
    index: &HashMap<Vec<u64>, u32>,
    counter_idx: &HashMap<CounterId, usize>,
    k: u64,
) -> Rel {
    let n = space.len();
    match p {
        Program::Skip => Rel::identity(n),
        Program::Inc(c) | Program::Dec(c) | Program::Test(c) => {
            let ci = counter_idx[c];
            let mut rel = Rel::empty(n);
            for (i, values) in space.iter().enumerate() {
                let next = match p {
                    Program::Inc(_) => {
                        let mut w = values.clone();
                        w[ci] += 1;
                        if w.iter().sum::<u64>() > k {
                            continue;
                        }
                        w
                    }
                    Program::Dec(_) => {
                        if values[ci] == 0 {
                            continue;
                        }
                        let mut w = values.clone();
                        w[ci] -= 1;
                        w
                    }
                    _ => {
                        if values[ci] != 0 {
                            continue;
                        }
                        values.clone()
                    }
                };
                rel.succ[i].push(index[&next]);
            }
            rel
        }
        Program::Seq(a, b) => build(a, space, index, counter_idx, k)
            .compose(&build(b, space, index, counter_idx, k)),
        Program::Choice(a, b) => build(a, space, index, counter_idx, k)
            .union(&build(b, space, index, counter_idx, k)),
        Program::Loop(body) => build(body, space, index, counter_idx, k).star(),
        Program::Repeat(body, times) => {
            let step = build(body, space, index, counter_idx, k);
            let mut acc = Rel::identity(n);
            for _ in 0..*times {
                acc = acc.compose(&step);
            }
            acc
        }
    }
}

/// The K-bounded relation of `p` over `universe`, as explicit pairs.
///
/// The universe must cover the program's counters; the space of K-bounded
/// configurations over it must stay within `max_space`.
pub fn denotational_relation(
    p: &Program,
    k: u64,
    universe: &BTreeSet<CounterId>,
    max_space: usize,
) -> Result<BTreeSet<(Configuration, Configuration)>, SemanticsError> {
    assert!(
        p.counters().is_subset(universe),
        "universe must cover the program's counters"
    );
    let counters: Vec<CounterId> = universe.iter().cloned().collect();
    let space = enumerate_space(&counters, k, max_space)?;
    let index: HashMap<Vec<u64>, u32> = space
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), i as u32))
        .collect();
    let counter_idx: HashMap<CounterId, usize> = counters
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i))
        .collect();
    let rel = build(p, &space, &index, &counter_idx, k);

    let sparse = |values: &[u64]| {
        Configuration::from_entries(
            values
                .iter()
                .enumerate()
                .filter(|(_, &v)| v > 0)
                .map(|(i, &v)| (counters[i].clone(), Nat::from(v))),
        )
    };
    let mut pairs = BTreeSet::new();
    for (i, succs) in rel.succ.iter().enumerate() {
        let a = sparse(&space[i]);
        for &j in succs {
            pairs.insert((a.clone(), sparse(&space[j as usize])));
        }
    }
    Ok(pairs)
}
