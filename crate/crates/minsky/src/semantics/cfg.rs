//! Compilation of programs to control-flow graphs.
//!
//! Every program compiles to a graph with one entry and one exit; paths from
//! entry to exit spell exactly the command sequences realizable by the
//! program's relation. The shapes are:
//!
//! - a command is a single labelled edge between two fresh locations;
//! - `skip` is a single location (entry = exit);
//! - `a; b` connects a's exit to b's entry with an epsilon edge;
//! - `choice` forks from a fresh location into the branch entries and joins
//!   the branch exits into a fresh exit, all via epsilon edges;
//! - `loop` closes a cycle through a junction that is both entry and exit,
//!   so `loop { inc x }` has two locations and a self-cycle through the
//!   junction. The junction reuses the body's entry location only when that
//!   entry has no in-edges of its own; a body starting with a loop keeps its
//!   inner junction separate, otherwise a path could present a partial body
//!   (up to the inner junction) as a completed outer iteration;
//! - `repeat k` chains k copies of the body.

use crate::ir::{CounterId, Program};
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmdKind {
    Inc,
    Dec,
    Test,
}

/// Edge label: a command on a densely indexed counter, or epsilon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeLabel {
    Command(CmdKind, u32),
    Epsilon,
}

#[derive(Debug, Clone)]
pub struct Edge {
    pub from: u32,
    pub to: u32,
    pub label: EdgeLabel,
}

/// A compiled program: locations 0..n_locations, one entry, one exit.
#[derive(Debug, Clone)]
pub struct ControlFlowGraph {
    /// Counter names in dense-index order (sorted by name).
    pub counters: Vec<CounterId>,
    pub n_locations: u32,
    pub entry: u32,
    pub exit: u32,
    pub edges: Vec<Edge>,
}

impl ControlFlowGraph {
    pub fn command_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges
            .iter()
            .filter(|e| matches!(e.label, EdgeLabel::Command(..)))
    }

    /// Epsilon closure of every location, as sorted location lists.
    pub(crate) fn epsilon_closures(&self) -> Vec<Vec<u32>> {
        let n = self.n_locations as usize;
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            if matches!(e.label, EdgeLabel::Epsilon) {
                adj[e.from as usize].push(e.to);
            }
        }
        let mut closures = Vec::with_capacity(n);
        let mut seen = vec![u32::MAX; n];
        for start in 0..n as u32 {
            let mut stack = vec![start];
            let mut closure = Vec::new();
            while let Some(loc) = stack.pop() {
                if seen[loc as usize] == start {
                    continue;
                }
                seen[loc as usize] = start;
                closure.push(loc);
                stack.extend(adj[loc as usize].iter().copied());
            }
            closure.sort_unstable();
            closures.push(closure);
        }
        closures
    }
}

struct Builder {
    next: u32,
    edges: Vec<Edge>,
    counters: Vec<CounterId>,
    index: std::collections::HashMap<CounterId, u32>,
}

impl Builder {
    fn fresh(&mut self) -> u32 {
        let id = self.next;
        self.next += 1;
        id
    }

    fn eps(&mut self, from: u32, to: u32) {
        self.edges.push(Edge {
            from,
            to,
            label: EdgeLabel::Epsilon,
        });
    }

    fn cmd(&mut self, from: u32, kind: CmdKind, c: &CounterId, to: u32) {
        let idx = self.index[c];
        self.edges.push(Edge {
            from,
            to,
            label: EdgeLabel::Command(kind, idx),
        });
    }

    /// Builds the fragment for `p`, returning (entry, exit, entry_cyclic)
    /// where the flag says the entry location already has in-edges (it is a
    /// loop junction), which forbids reusing it as an enclosing junction.
    fn build(&mut self, p: &Program) -> (u32, u32, bool) {
        match p {
            Program::Skip => {
                let s = self.fresh();
                (s, s, false)
            }
            Program::Inc(c) | Program::Dec(c) | Program::Test(c) => {
                let kind = match p {
                    Program::Inc(_) => CmdKind::Inc,
                    Program::Dec(_) => CmdKind::Dec,
                    _ => CmdKind::Test,
                };
                let s = self.fresh();
                let t = self.fresh();
                self.cmd(s, kind, c, t);
                (s, t, false)
            }
            Program::Seq(a, b) => {
                let (ea, xa, cyclic) = self.build(a);
                let (eb, xb, _) = self.build(b);
                self.eps(xa, eb);
                (ea, xb, cyclic)
            }
            Program::Choice(a, b) => {
                let (ea, xa, _) = self.build(a);
                let (eb, xb, _) = self.build(b);
                let s = self.fresh();
                let t = self.fresh();
                self.eps(s, ea);
                self.eps(s, eb);
                self.eps(xa, t);
                self.eps(xb, t);
                (s, t, false)
            }
            Program::Loop(body) => {
                let (eb, xb, cyclic) = self.build(body);
                let junction = if cyclic {
                    let j = self.fresh();
                    self.eps(j, eb);
                    j
                } else {
                    eb
                };
                self.eps(xb, junction);
                (junction, junction, true)
            }
            Program::Repeat(body, k) => {
                if *k == 0 {
                    let s = self.fresh();
                    return (s, s, false);
                }
                let (entry, mut exit, cyclic) = self.build(body);
                for _ in 1..*k {
                    let (e, x, _) = self.build(body);
                    self.eps(exit, e);
                    exit = x;
                }
                (entry, exit, cyclic)
            }
        }
    }
}

/// Compiles a program; the dense counter universe is `counters(p)` extended
/// by `extra` (counters of the start configuration).
pub(crate) fn compile_cfg_with(p: &Program, extra: &BTreeSet<CounterId>) -> ControlFlowGraph {
    let mut universe = p.counters();
    universe.extend(extra.iter().cloned());
    let counters: Vec<CounterId> = universe.into_iter().collect();
    let index = counters
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i as u32))
        .collect();
    let mut b = Builder {
        next: 0,
        edges: Vec::new(),
        counters,
        index,
    };
    let (entry, exit, _) = b.build(p);
    ControlFlowGraph {
        counters: b.counters,
        n_locations: b.next,
        entry,
        exit,
        edges: b.edges,
    }
}

/// Compiles a program to its control-flow graph.
pub fn compile_cfg(p: &Program) -> ControlFlowGraph {
    compile_cfg_with(p, &BTreeSet::new())
}
