//! Min-cost edge-disjoint paths via successive shortest augmenting paths.
//!
//! Every original arc gets capacity 1, so a flow of value d IS a set of d
//! edge-disjoint paths and its support is the edge set the caller wants.
//! Costs stay nonnegative, which keeps Dijkstra-with-potentials valid
//! throughout.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, BTreeSet};

use crate::error::SolveError;
use crate::graph::DiGraph;

const INF: u64 = u64::MAX;

/// A minimum-cost way to route `d` edge-disjoint paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowOutcome {
    /// Union of the extracted paths; the edge set handed to callers.
    pub edges: BTreeSet<usize>,
    pub cost: u64,
    /// One entry per path, as edge indices from source to sink.
    pub paths: Vec<Vec<usize>>,
    /// Per-edge saturation of the underlying flow, for conservation checks.
    pub flow: Vec<bool>,
}

pub fn min_cost_disjoint_paths(
    g: &DiGraph,
    s: usize,
    t: usize,
    d: u32,
) -> Result<FlowOutcome, SolveError> {
    let n = g.vertex_count();
    if s >= n || t >= n {
        return Err(SolveError::Refused(format!("endpoint out of range (n = {n})")));
    }
    if s == t {
        return Err(SolveError::Refused("source equals sink".into()));
    }
    if d < 1 {
        return Err(SolveError::Refused("demand must be at least 1".into()));
    }
    let m = g.edge_count();
    let mut flow = vec![false; m];
    let mut potential = vec![0u64; n];
    for round in 0..d {
        // Dijkstra over the residual graph under reduced costs. Heap order
        // (cost, vertex, edge) pins the parent choice on ties.
        let mut dist = vec![INF; n];
        let mut parent: Vec<Option<(usize, bool)>> = vec![None; n]; // (edge, forward?)
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        dist[s] = 0;
        heap.push(Reverse((0u64, s, usize::MAX)));
        while let Some(Reverse((dv, v, _))) = heap.pop() {
            if done[v] {
                continue;
            }
            done[v] = true;
            debug_assert_eq!(dv, dist[v]);
            for (i, e) in g.edges().iter().enumerate() {
                let (from, to, reduced, forward) = if !flow[i] {
                    let rc = e.weight + potential[e.tail] - potential[e.head];
                    (e.tail, e.head, rc, true)
                } else {
                    let rc = (potential[e.head] - potential[e.tail]).saturating_sub(e.weight);
                    debug_assert_eq!(rc + e.weight, potential[e.head] - potential[e.tail]);
                    (e.head, e.tail, rc, false)
                };
                if from != v || done[to] {
                    continue;
                }
                let alt = dv + reduced;
                if alt < dist[to] {
                    dist[to] = alt;
                    parent[to] = Some((i, forward));
                    heap.push(Reverse((alt, to, i)));
                }
            }
        }
        if dist[t] == INF {
            return Err(SolveError::Infeasible(format!(
                "only {round} of {d} disjoint paths exist"
            )));
        }
        let max_finite = dist.iter().copied().filter(|&x| x != INF).max().unwrap();
        for v in 0..n {
            potential[v] += if dist[v] == INF { max_finite } else { dist[v] };
        }
        let mut v = t;
        while v != s {
            let (i, forward) = parent[v].expect("t reachable, path recorded");
            flow[i] = forward;
            v = if forward { g.edges()[i].tail } else { g.edges()[i].head };
        }
    }
    let paths = decompose(g, &mut flow.clone(), s, t, d);
    let edges: BTreeSet<usize> = paths.iter().flatten().copied().collect();
    let cost = g.edge_set_cost(&edges);
    Ok(FlowOutcome { edges, cost, paths, flow })
}

/// Peel `d` paths off a unit-capacity flow, lowest edge index first.
fn decompose(g: &DiGraph, flow: &mut [bool], s: usize, t: usize, d: u32) -> Vec<Vec<usize>> {
    let mut paths = Vec::with_capacity(d as usize);
    for _ in 0..d {
        let mut path = Vec::new();
        let mut v = s;
        let mut steps = 0;
        while v != t {
            let ei = g
                .out_edges(v)
                .iter()
                .copied()
                .filter(|&i| flow[i])
                .min()
                .expect("flow conservation guarantees an unused out-arc");
            flow[ei] = false;
            path.push(ei);
            v = g.edges()[ei].head;
            steps += 1;
            assert!(steps <= g.edge_count(), "flow decomposition cycled");
        }
        paths.push(path);
    }
    paths
}
