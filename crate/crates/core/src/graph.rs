//! Directed graph representation shared by every solver.
//!
//! Vertex ids are dense 0-based integers. Edge weights are nonnegative
//! integers defaulting to 1; the objectives in this crate count edges, so
//! unit weights are the common case. Parallel edges and self-loops are
//! rejected at construction.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub weight: u64,
}

/// An immutable directed graph. All accessors are pure; the out-adjacency
/// index is built once at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiGraph {
    n: usize,
    edges: Vec<Edge>,
    out_adj: Vec<Vec<usize>>,
}

impl DiGraph {
    /// Builds a graph from `(tail, head, weight)` triples, enforcing the
    /// structural invariants: ids in range, no self-loops, no duplicate
    /// `(tail, head)` pairs.
    pub fn new(n: usize, edge_list: Vec<(usize, usize, u64)>) -> Result<Self, GraphError> {
        let mut seen = BTreeSet::new();
        let mut edges = Vec::with_capacity(edge_list.len());
        let mut out_adj = vec![Vec::new(); n];
        for (tail, head, weight) in edge_list {
            if tail >= n {
                return Err(GraphError::VertexOutOfRange { id: tail, n });
            }
            if head >= n {
                return Err(GraphError::VertexOutOfRange { id: head, n });
            }
            if tail == head {
                return Err(GraphError::SelfLoop { v: tail });
            }
            if !seen.insert((tail, head)) {
                return Err(GraphError::DuplicateEdge { tail, head });
            }
            out_adj[tail].push(edges.len());
            edges.push(Edge { tail, head, weight });
        }
        Ok(DiGraph { n, edges, out_adj })
    }

    /// Unit-weight convenience constructor.
    pub fn unit(n: usize, edge_list: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        Self::new(n, edge_list.into_iter().map(|(u, v)| (u, v, 1)).collect())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> Result<&Edge, GraphError> {
        self.edges.get(index).ok_or(GraphError::EdgeIndexOutOfRange {
            index,
            m: self.edges.len(),
        })
    }

    /// Edge indices leaving `v`, in insertion order.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    pub fn has_edge(&self, tail: usize, head: usize) -> bool {
        self.out_adj
            .get(tail)
            .is_some_and(|es| es.iter().any(|&e| self.edges[e].head == head))
    }

    /// Total weight of an edge index set.
    pub fn edge_set_cost(&self, edges: &BTreeSet<usize>) -> u64 {
        edges.iter().map(|&e| self.edges[e].weight).sum()
    }

    /// The graph with every edge orientation reversed. Edge index `i` of the
    /// result is the reversal of edge index `i` of the input, so edge sets map
    /// between the two graphs without translation.
    pub fn reverse(&self) -> DiGraph {
        let reversed = self
            .edges
            .iter()
            .map(|e| (e.head, e.tail, e.weight))
            .collect();
        DiGraph::new(self.n, reversed).expect("reversal preserves invariants")
    }

    /// Forward-reachability set of `src` using only the given edge indices.
    pub fn reachable(
        &self,
        src: usize,
        restricted_to: &BTreeSet<usize>,
    ) -> Result<BTreeSet<usize>, GraphError> {
        if src >= self.n {
            return Err(GraphError::VertexOutOfRange { id: src, n: self.n });
        }
        let mut adj = vec![Vec::new(); self.n];
        for &e in restricted_to {
            let edge = self.edge(e)?;
            adj[edge.tail].push(edge.head);
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![src];
        seen[src] = true;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        Ok((0..self.n).filter(|&v| seen[v]).collect())
    }

    /// Reachability over the full edge set.
    pub fn reachable_all(&self, src: usize) -> Result<BTreeSet<usize>, GraphError> {
        self.reachable(src, &(0..self.edges.len()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_self_loops_and_duplicates() {
        assert_eq!(
            DiGraph::unit(3, vec![(1, 1)]),
            Err(GraphError::SelfLoop { v: 1 })
        );
        assert_eq!(
            DiGraph::unit(3, vec![(0, 1), (0, 1)]),
            Err(GraphError::DuplicateEdge { tail: 0, head: 1 })
        );
        assert_eq!(
            DiGraph::unit(3, vec![(0, 3)]),
            Err(GraphError::VertexOutOfRange { id: 3, n: 3 })
        );
    }

    #[test]
    fn reverse_maps_each_edge() {
        let g = DiGraph::unit(3, vec![(0, 1), (1, 2)]).unwrap();
        let r = g.reverse();
        let endpoints: Vec<_> = r.edges().iter().map(|e| (e.tail, e.head)).collect();
        assert_eq!(endpoints, vec![(1, 0), (2, 1)]);
    }

    #[test]
    fn reverse_of_edgeless_graph_is_edgeless() {
        let g = DiGraph::unit(3, vec![]).unwrap();
        assert_eq!(g.reverse(), g);
    }

    #[test]
    fn reverse_is_an_involution_on_seeded_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let n = rng.random_range(2..9usize);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in 0..n {
                    if u != v && rng.random_bool(0.3) {
                        edges.push((u, v, rng.random_range(1..4u64)));
                    }
                }
            }
            let g = DiGraph::new(n, edges).unwrap();
            assert_eq!(g.reverse().reverse(), g);
        }
    }

    #[test]
    fn reachable_on_path_graph() {
        let g = DiGraph::unit(3, vec![(0, 1), (1, 2)]).unwrap();
        let all: BTreeSet<usize> = (0..2).collect();
        assert_eq!(
            g.reachable(0, &all).unwrap(),
            BTreeSet::from([0, 1, 2])
        );
        assert_eq!(g.reachable(0, &BTreeSet::new()).unwrap(), BTreeSet::from([0]));
    }

    #[test]
    fn reachable_rejects_bad_edge_index() {
        let g = DiGraph::unit(3, vec![(0, 1)]).unwrap();
        assert!(g.reachable(0, &BTreeSet::from([5])).is_err());
    }

    /// Boolean-matrix transitive closure, the independent oracle for
    /// reachability on small graphs.
    fn closure_oracle(g: &DiGraph, src: usize) -> BTreeSet<usize> {
        let n = g.vertex_count();
        let mut reach = vec![vec![false; n]; n];
        for v in 0..n {
            reach[v][v] = true;
        }
        for e in g.edges() {
            reach[e.tail][e.head] = true;
        }
        // n rounds of boolean matrix self-multiplication.
        for _ in 0..n {
            let prev = reach.clone();
            for i in 0..n {
                for j in 0..n {
                    if !reach[i][j] {
                        reach[i][j] = (0..n).any(|k| prev[i][k] && prev[k][j]);
                    }
                }
            }
        }
        (0..n).filter(|&v| reach[src][v]).collect()
    }

    #[test]
    fn reachable_agrees_with_matrix_closure() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..40 {
            let n = rng.random_range(2..9usize);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in 0..n {
                    if u != v && rng.random_bool(0.25) {
                        edges.push((u, v));
                    }
                }
            }
            let g = DiGraph::unit(n, edges).unwrap();
            let all: BTreeSet<usize> = (0..g.edge_count()).collect();
            for src in 0..n {
                assert_eq!(g.reachable(src, &all).unwrap(), closure_oracle(&g, src));
            }
        }
    }
}
