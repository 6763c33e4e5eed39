//! Breadth-first reachability over (location, configuration) pairs.
//!
//! Configurations are interned dense vectors of machine words with checked
//! arithmetic; epsilon edges are closure-compressed, so stored states sit at
//! the entry or at command-edge targets only. The search is deterministic:
//! the frontier is expanded in insertion order and results are canonical
//! sets, so identical inputs give identical results.

use super::cfg::{compile_cfg_with, CmdKind, ControlFlowGraph};
use super::{Command, Configuration, ExplorationPolicy, ReachOutcome, ReachResult, SemanticsError};
use crate::fastmath::Nat;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Mode {
    Collect,
    CollectWithParents,
}

pub(crate) struct Search {
    cfg: ControlFlowGraph,
    exit_in_closure: Vec<bool>,
    configs: Vec<Box<[u64]>>,
    /// (location, config index) per state, in discovery order.
    states: Vec<(u32, u32)>,
    /// (parent state, command) per state; u32::MAX marks the root.
    parents: Option<Vec<(u32, CmdKind, u32)>>,
    exhausted: bool,
}

impl Search {
    fn sparse(&self, cfg_idx: u32) -> Configuration {
        let values = &self.configs[cfg_idx as usize];
        Configuration::from_entries(
            values
                .iter()
                .enumerate()
                .filter(|(_, &v)| v > 0)
                .map(|(i, &v)| (self.cfg.counters[i].clone(), Nat::from(v))),
        )
    }

    fn witness_to(&self, state_idx: u32) -> Vec<Command> {
        let parents = self.parents.as_ref().expect("search ran without parents");
        let mut cmds = Vec::new();
        let mut cur = state_idx;
        while parents[cur as usize].0 != u32::MAX {
            let (prev, kind, counter) = parents[cur as usize];
            let c = self.cfg.counters[counter as usize].clone();
            cmds.push(match kind {
                CmdKind::Inc => Command::Inc(c),
                CmdKind::Dec => Command::Dec(c),
                CmdKind::Test => Command::Test(c),
            });
            cur = prev;
        }
        cmds.reverse();
        cmds
    }

    pub(crate) fn into_result(self, with_witnesses: bool) -> ReachResult {
        let mut configs = BTreeSet::new();
        let mut witnesses = if with_witnesses {
            Some(BTreeMap::new())
        } else {
            None
        };
        for (i, &(loc, cfg_idx)) in self.states.iter().enumerate() {
            if !self.exit_in_closure[loc as usize] {
                continue;
            }
            let sparse = self.sparse(cfg_idx);
            if let Some(w) = witnesses.as_mut() {
                // First discovery wins: BFS order, so a shortest witness.
                if !configs.contains(&sparse) {
                    w.insert(sparse.clone(), self.witness_to(i as u32));
                }
            }
            configs.insert(sparse);
        }
        ReachResult {
            exhausted: self.exhausted,
            configs,
            witnesses,
        }
    }
}

fn dense_start(
    cfg: &ControlFlowGraph,
    from: &Configuration,
) -> Result<Vec<u64>, SemanticsError> {
    let mut values = vec![0u64; cfg.counters.len()];
    let index: HashMap<_, _> = cfg
        .counters
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i))
        .collect();
    for (c, v) in from.iter() {
        let i = index[c];
        values[i] = u64::try_from(v)
            .map_err(|_| SemanticsError::ValueTooLarge(format!("{c} = {v}")))?;
    }
    Ok(values)
}

pub(crate) fn search(
    p: &crate::ir::Program,
    from: &Configuration,
    policy: &ExplorationPolicy,
    mode: Mode,
) -> Result<Search, SemanticsError> {
    run(p, from, policy, mode, None).map(|(s, _)| s)
}

pub(crate) fn check_reach(
    p: &crate::ir::Program,
    from: &Configuration,
    to: &Configuration,
    policy: &ExplorationPolicy,
) -> Result<ReachOutcome, SemanticsError> {
    let universe = {
        let mut u = p.counters();
        u.extend(from.counters().cloned());
        u
    };
    // A target with a non-zero counter outside the universe is unreachable:
    // no command can touch that counter.
    if !to.supported_by(universe.iter()) {
        return Ok(ReachOutcome::No);
    }
    let (search, found) = run(p, from, policy, Mode::CollectWithParents, Some(to))?;
    match found {
        Some(state_idx) => Ok(ReachOutcome::Yes(search.witness_to(state_idx))),
        None if search.exhausted => Ok(ReachOutcome::No),
        None => Ok(ReachOutcome::Unknown),
    }
}

fn run(
    p: &crate::ir::Program,
    from: &Configuration,
    policy: &ExplorationPolicy,
    mode: Mode,
    target: Option<&Configuration>,
) -> Result<(Search, Option<u32>), SemanticsError> {
    let extra: BTreeSet<_> = from.counters().cloned().collect();
    let cfg = compile_cfg_with(p, &extra);
    let start = dense_start(&cfg, from)?;
    if !policy.admits_dense(&start) {
        return Err(SemanticsError::PolicyViolation(from.to_json()));
    }

    let closures = cfg.epsilon_closures();
    let n = cfg.n_locations as usize;
    let mut cmd_out: Vec<Vec<(CmdKind, u32, u32)>> = vec![Vec::new(); n];
    for e in cfg.command_edges() {
        if let super::cfg::EdgeLabel::Command(kind, counter) = e.label {
            cmd_out[e.from as usize].push((kind, counter, e.to));
        }
    }
    let steps: Vec<Vec<(CmdKind, u32, u32)>> = closures
        .iter()
        .map(|closure| {
            closure
                .iter()
                .flat_map(|&l| cmd_out[l as usize].iter().copied())
                .collect()
        })
        .collect();
    let exit_in_closure: Vec<bool> = closures
        .iter()
        .map(|closure| closure.binary_search(&cfg.exit).is_ok())
        .collect();

    let mut configs: Vec<Box<[u64]>> = Vec::new();
    let mut config_ids: HashMap<Box<[u64]>, u32> = HashMap::new();
    let mut intern = |values: Box<[u64]>, configs: &mut Vec<Box<[u64]>>| -> u32 {
        if let Some(&id) = config_ids.get(&values) {
            return id;
        }
        let id = configs.len() as u32;
        configs.push(values.clone());
        config_ids.insert(values, id);
        id
    };

    let track_parents = matches!(mode, Mode::CollectWithParents);
    let mut states: Vec<(u32, u32)> = Vec::new();
    let mut parents: Vec<(u32, CmdKind, u32)> = Vec::new();
    let mut seen: HashSet<u64> = HashSet::new();

    let target_dense = match target {
        Some(t) => Some(dense_start(&cfg, t)?.into_boxed_slice()),
        None => None,
    };
    let is_final = |loc: u32, values: &[u64]| -> bool {
        exit_in_closure[loc as usize]
            && target_dense
                .as_deref()
                .is_some_and(|t| t == values)
    };

    let start_cfg = intern(start.clone().into_boxed_slice(), &mut configs);
    states.push((cfg.entry, start_cfg));
    if track_parents {
        parents.push((u32::MAX, CmdKind::Inc, 0));
    }
    seen.insert(state_key(cfg.entry, start_cfg));

    let mut found: Option<u32> = None;
    if target.is_some() && is_final(cfg.entry, &start) {
        found = Some(0);
    }

    let mut exhausted = true;
    let mut frontier: Vec<u32> = vec![0];
    let mut depth = 0usize;

    'bfs: while !frontier.is_empty() && found.is_none() {
        if let Some(max_depth) = policy.max_depth {
            if depth >= max_depth {
                exhausted = false;
                break;
            }
        }
        let mut next = Vec::new();
        for &state_idx in &frontier {
            let (loc, cfg_idx) = states[state_idx as usize];
            for &(kind, counter, dst) in &steps[loc as usize] {
                let values = &configs[cfg_idx as usize];
                let ci = counter as usize;
                let mut new_values;
                match kind {
                    CmdKind::Inc => {
                        new_values = values.clone();
                        new_values[ci] = new_values[ci].checked_add(1).ok_or_else(|| {
                            SemanticsError::ValueTooLarge(format!(
                                "counter {} overflows",
                                cfg.counters[ci]
                            ))
                        })?;
                    }
                    CmdKind::Dec => {
                        if values[ci] == 0 {
                            continue;
                        }
                        new_values = values.clone();
                        new_values[ci] -= 1;
                    }
                    CmdKind::Test => {
                        if values[ci] != 0 {
                            continue;
                        }
                        new_values = values.clone();
                    }
                }
                if !policy.admits_dense(&new_values) {
                    continue;
                }
                let new_cfg = intern(new_values, &mut configs);
                if !seen.insert(state_key(dst, new_cfg)) {
                    continue;
                }
                if states.len() >= policy.max_states {
                    exhausted = false;
                    break 'bfs;
                }
                let new_idx = states.len() as u32;
                states.push((dst, new_cfg));
                if track_parents {
                    parents.push((state_idx, kind, counter));
                }
                if target.is_some() && is_final(dst, &configs[new_cfg as usize]) {
                    found = Some(new_idx);
                    break 'bfs;
                }
                next.push(new_idx);
            }
        }
        frontier = next;
        depth += 1;
    }

    Ok((
        Search {
            cfg,
            exit_in_closure,
            configs,
            states,
            parents: track_parents.then_some(parents),
            exhausted,
        },
        found,
    ))
}

fn state_key(loc: u32, cfg: u32) -> u64 {
    ((loc as u64) << 32) | cfg as u64
}
