//! Directed Steiner Tree solvers.
//!
//! `dst_exact` runs the Dreyfus–Wagner subset dynamic program adapted to
//! directed graphs, exponential only in the number of terminals.
//! `dst_recursive_greedy` is the polynomial density-greedy whose
//! approximation quality improves with recursion depth.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::error::SolveError;
use crate::graph::DiGraph;
use crate::instance::{DstInstance, Solution};

/// Largest terminal set the exact table will attempt.
pub const DST_TERMINAL_CAP: usize = 12;

const INF: u64 = u64::MAX;

/// Per-source shortest paths with deterministic parent edges.
struct ShortestPaths {
    dist: Vec<Vec<u64>>,
    parent: Vec<Vec<usize>>,
}

impl ShortestPaths {
    fn build(g: &DiGraph) -> ShortestPaths {
        let n = g.vertex_count();
        let mut dist = vec![vec![INF; n]; n];
        let mut parent = vec![vec![usize::MAX; n]; n];
        for s in 0..n {
            // Dijkstra; heap entries ordered by (dist, vertex, edge) so the
            // settled parent of every vertex is reproducible.
            let mut heap = std::collections::BinaryHeap::new();
            heap.push(std::cmp::Reverse((0u64, s, usize::MAX)));
            while let Some(std::cmp::Reverse((d, v, via))) = heap.pop() {
                if dist[s][v] != INF {
                    continue;
                }
                dist[s][v] = d;
                parent[s][v] = via;
                for &ei in g.out_edges(v) {
                    let e = &g.edges()[ei];
                    if dist[s][e.head] == INF {
                        heap.push(std::cmp::Reverse((d + e.weight, e.head, ei)));
                    }
                }
            }
        }
        ShortestPaths { dist, parent }
    }

    fn path_edges(&self, g: &DiGraph, s: usize, t: usize) -> Option<Vec<usize>> {
        if self.dist[s][t] == INF {
            return None;
        }
        let mut edges = Vec::new();
        let mut v = t;
        while v != s {
            let ei = self.parent[s][v];
            edges.push(ei);
            v = g.edges()[ei].tail;
        }
        edges.reverse();
        Some(edges)
    }
}

#[derive(Clone, Copy, Debug)]
enum Step {
    Unset,
    Leaf { terminal: usize },
    Via { node: usize, split: u32 },
}

/// The exact table: minimal arborescence cost per (start vertex, terminal
/// subset), with enough backpointer state to rebuild one witness.
pub struct DstExactTable {
    terminals: Vec<usize>,
    cost: Vec<Vec<u64>>,
    steps: Vec<Vec<Step>>,
}

impl DstExactTable {
    /// Terminal ids in bit order: bit i of a mask refers to `terminals()[i]`.
    pub fn terminals(&self) -> &[usize] {
        &self.terminals
    }

    /// Cheapest cost of reaching every terminal in `mask` from `v`, if any.
    pub fn cost(&self, v: usize, mask: u32) -> Option<u64> {
        let c = self.cost[v][mask as usize];
        (c != INF).then_some(c)
    }

    fn collect(&self, sp: &ShortestPaths, g: &DiGraph, v: usize, mask: u32, out: &mut BTreeSet<usize>) {
        match self.steps[v][mask as usize] {
            Step::Leaf { terminal } => {
                out.extend(sp.path_edges(g, v, terminal).expect("finite cost implies a path"));
            }
            Step::Via { node, split } => {
                out.extend(sp.path_edges(g, v, node).expect("finite cost implies a path"));
                self.collect(sp, g, node, split, out);
                self.collect(sp, g, node, mask ^ split, out);
            }
            Step::Unset => unreachable!("finite costs always carry a step"),
        }
    }
}

/// Exact minimum-cost Directed Steiner Tree, with the full table.
pub fn dst_exact_with_table(inst: &DstInstance) -> Result<(Solution, DstExactTable), SolveError> {
    let g = inst.graph();
    let n = g.vertex_count();
    let root = inst.root();
    let terminals: Vec<usize> = inst
        .terminals()
        .iter()
        .copied()
        .filter(|&t| t != root)
        .collect();
    let k = terminals.len();
    if k > DST_TERMINAL_CAP {
        return Err(SolveError::Refused(format!(
            "{k} terminals exceed the exact-table cap of {DST_TERMINAL_CAP}"
        )));
    }
    let sp = ShortestPaths::build(g);
    if let Some(&t) = terminals.iter().find(|&&t| sp.dist[root][t] == INF) {
        return Err(SolveError::Infeasible(format!(
            "terminal {t} is unreachable from root {root}"
        )));
    }
    let masks = 1usize << k;
    let mut cost = vec![vec![INF; masks]; n];
    let mut steps = vec![vec![Step::Unset; masks]; n];
    for v in 0..n {
        cost[v][0] = 0;
    }
    for (ti, &t) in terminals.iter().enumerate() {
        for v in 0..n {
            cost[v][1 << ti] = sp.dist[v][t];
            steps[v][1 << ti] = Step::Leaf { terminal: t };
        }
    }
    // Masks ascend numerically, so both halves of any split are ready.
    for mask in 1..masks as u32 {
        if mask.count_ones() < 2 {
            continue;
        }
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        let mut split_cost = vec![INF; n];
        let mut split_choice = vec![0u32; n];
        for u in 0..n {
            // The half containing the lowest terminal ranges over all proper
            // submasks; this visits each unordered split once.
            let mut s = rest;
            loop {
                s = s.wrapping_sub(1) & rest;
                let s1 = low | s;
                let s2 = mask ^ s1;
                let (a, b) = (cost[u][s1 as usize], cost[u][s2 as usize]);
                if a != INF && b != INF && a + b < split_cost[u] {
                    split_cost[u] = a + b;
                    split_choice[u] = s1;
                }
                if s == 0 {
                    break;
                }
            }
        }
        for v in 0..n {
            for u in 0..n {
                if sp.dist[v][u] == INF || split_cost[u] == INF {
                    continue;
                }
                let alt = sp.dist[v][u] + split_cost[u];
                if alt < cost[v][mask as usize] {
                    cost[v][mask as usize] = alt;
                    steps[v][mask as usize] = Step::Via { node: u, split: split_choice[u] };
                }
            }
        }
    }
    let table = DstExactTable { terminals, cost, steps };
    let full = (masks - 1) as u32;
    let mut edges = BTreeSet::new();
    if full != 0 {
        table.collect(&sp, g, root, full, &mut edges);
    }
    let solution = Solution::edges(g, edges, "dst-exact");
    // The reconstructed union can only merge shared path edges, and a
    // feasible set can never undercut the exact value, so they coincide.
    debug_assert_eq!(solution.cost(), Some(table.cost[root][full as usize]));
    Ok((solution, table))
}

pub fn dst_exact(inst: &DstInstance) -> Result<Solution, SolveError> {
    dst_exact_with_table(inst).map(|(s, _)| s)
}

/// How density ties are resolved inside the greedy.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[non_exhaustive]
pub enum TieBreak {
    /// Lowest intermediate vertex id, then lexicographically smallest edge set.
    #[default]
    LowestVertexThenLexEdgeSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RecursiveGreedyConfig {
    /// Recursion depth; 1 means plain shortest paths to nearest terminals.
    pub levels: usize,
    pub tie_break: TieBreak,
}

impl Default for RecursiveGreedyConfig {
    fn default() -> Self {
        RecursiveGreedyConfig { levels: 2, tie_break: TieBreak::default() }
    }
}

struct Candidate {
    edges: BTreeSet<usize>,
    covered: BTreeSet<usize>,
    cost: u64,
    via: usize,
}

/// Exact-rational density order: cost/covered compared by cross products.
fn candidate_cmp(a: &Candidate, b: &Candidate) -> Ordering {
    let lhs = a.cost as u128 * b.covered.len() as u128;
    let rhs = b.cost as u128 * a.covered.len() as u128;
    lhs.cmp(&rhs)
        .then_with(|| a.via.cmp(&b.via))
        .then_with(|| a.edges.cmp(&b.edges))
}

struct Greedy<'a> {
    g: &'a DiGraph,
    sp: ShortestPaths,
}

impl<'a> Greedy<'a> {
    /// Cover exactly `want` of the available terminals from `v`, or report
    /// that this start cannot manage it.
    fn cover(
        &self,
        level: usize,
        v: usize,
        want: usize,
        avail: &BTreeSet<usize>,
    ) -> Option<(BTreeSet<usize>, BTreeSet<usize>)> {
        debug_assert!(want >= 1);
        if level == 1 {
            // Nearest `want` terminals by (distance, id), joined by their
            // shortest paths.
            let mut order: Vec<usize> = avail
                .iter()
                .copied()
                .filter(|&t| self.sp.dist[v][t] != INF)
                .collect();
            if order.len() < want {
                return None;
            }
            order.sort_by_key(|&t| (self.sp.dist[v][t], t));
            let mut edges = BTreeSet::new();
            let mut covered = BTreeSet::new();
            for &t in order.iter().take(want) {
                edges.extend(self.sp.path_edges(self.g, v, t).expect("dist finite"));
                covered.insert(t);
            }
            return Some((edges, covered));
        }
        let mut edges = BTreeSet::new();
        let mut covered = BTreeSet::new();
        let mut avail = avail.clone();
        let mut remaining = want;
        while remaining > 0 {
            let mut best: Option<Candidate> = None;
            for u in 0..self.g.vertex_count() {
                if self.sp.dist[v][u] == INF {
                    continue;
                }
                let walk = self.sp.path_edges(self.g, v, u).expect("dist finite");
                for target in 1..=remaining {
                    let Some((sub_edges, sub_cov)) = self.cover(level - 1, u, target, &avail)
                    else {
                        continue;
                    };
                    let mut cand_edges = sub_edges;
                    cand_edges.extend(walk.iter().copied());
                    let cand = Candidate {
                        cost: self.g.edge_set_cost(&cand_edges),
                        edges: cand_edges,
                        covered: sub_cov,
                        via: u,
                    };
                    if best
                        .as_ref()
                        .is_none_or(|b| candidate_cmp(&cand, b) == Ordering::Less)
                    {
                        best = Some(cand);
                    }
                }
            }
            let chosen = best?;
            remaining -= chosen.covered.len();
            for t in &chosen.covered {
                avail.remove(t);
            }
            edges.extend(chosen.edges);
            covered.extend(chosen.covered);
        }
        Some((edges, covered))
    }
}

pub fn dst_recursive_greedy(
    inst: &DstInstance,
    cfg: &RecursiveGreedyConfig,
) -> Result<Solution, SolveError> {
    if cfg.levels < 1 {
        return Err(SolveError::Refused("recursion depth must be at least 1".into()));
    }
    let g = inst.graph();
    let root = inst.root();
    let wanted: BTreeSet<usize> = inst
        .terminals()
        .iter()
        .copied()
        .filter(|&t| t != root)
        .collect();
    if wanted.is_empty() {
        return Ok(Solution::edges(g, BTreeSet::new(), "dst-greedy"));
    }
    let greedy = Greedy { g, sp: ShortestPaths::build(g) };
    if let Some(&t) = wanted.iter().find(|&&t| greedy.sp.dist[root][t] == INF) {
        return Err(SolveError::Infeasible(format!(
            "terminal {t} is unreachable from root {root}"
        )));
    }
    let (edges, covered) = greedy
        .cover(cfg.levels, root, wanted.len(), &wanted)
        .expect("all terminals reachable from the root");
    debug_assert_eq!(covered, wanted);
    Ok(Solution::edges(g, edges, "dst-greedy"))
}
