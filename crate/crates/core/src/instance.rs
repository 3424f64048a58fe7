//! Problem instances and the solution type shared by every solver.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::graph::DiGraph;

/// Directed Steiner Tree: a root and a terminal set to reach from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DstInstance {
    graph: DiGraph,
    root: usize,
    terminals: BTreeSet<usize>,
}

impl DstInstance {
    pub fn new(graph: DiGraph, root: usize, terminals: BTreeSet<usize>) -> Result<Self, GraphError> {
        let n = graph.vertex_count();
        if root >= n {
            return Err(GraphError::VertexOutOfRange { id: root, n });
        }
        if terminals.is_empty() {
            return Err(GraphError::invalid("terminals", "must be nonempty"));
        }
        if let Some(&t) = terminals.iter().find(|&&t| t >= n) {
            return Err(GraphError::VertexOutOfRange { id: t, n });
        }
        // root inside terminals is allowed: it is trivially reachable.
        Ok(DstInstance { graph, root, terminals })
    }

    pub fn graph(&self) -> &DiGraph {
        &self.graph
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn terminals(&self) -> &BTreeSet<usize> {
        &self.terminals
    }
}

/// Strongly Connected Steiner Subgraph: an ordered terminal set, every pair
/// of which must be mutually reachable in the solution. The optional
/// parameter `p` drives the FPT variant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScssInstance {
    graph: DiGraph,
    terminals: Vec<usize>,
    p: Option<u64>,
}

impl ScssInstance {
    pub fn new(graph: DiGraph, terminals: Vec<usize>, p: Option<u64>) -> Result<Self, GraphError> {
        let n = graph.vertex_count();
        if terminals.len() < 2 {
            return Err(GraphError::invalid("terminals", "need at least 2 terminals"));
        }
        let mut seen = BTreeSet::new();
        for &t in &terminals {
            if t >= n {
                return Err(GraphError::VertexOutOfRange { id: t, n });
            }
            if !seen.insert(t) {
                return Err(GraphError::invalid("terminals", format!("duplicate terminal {t}")));
            }
        }
        Ok(ScssInstance { graph, terminals, p })
    }

    pub fn graph(&self) -> &DiGraph {
        &self.graph
    }

    /// Terminals in input order; element 0 is the default hub.
    pub fn terminals(&self) -> &[usize] {
        &self.terminals
    }

    pub fn p(&self) -> Option<u64> {
        self.p
    }

    pub fn with_p(&self, p: u64) -> ScssInstance {
        ScssInstance {
            graph: self.graph.clone(),
            terminals: self.terminals.clone(),
            p: Some(p),
        }
    }
}

/// Directed Steiner Forest: connect every (source, sink) pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DsfInstance {
    graph: DiGraph,
    pairs: Vec<(usize, usize)>,
}

impl DsfInstance {
    pub fn new(graph: DiGraph, pairs: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let n = graph.vertex_count();
        if pairs.is_empty() {
            return Err(GraphError::invalid("pairs", "must be nonempty"));
        }
        let mut seen = BTreeSet::new();
        for &(s, t) in &pairs {
            if s >= n {
                return Err(GraphError::VertexOutOfRange { id: s, n });
            }
            if t >= n {
                return Err(GraphError::VertexOutOfRange { id: t, n });
            }
            if s == t {
                return Err(GraphError::invalid("pairs", format!("pair ({s}, {t}) has equal endpoints")));
            }
            if !seen.insert((s, t)) {
                return Err(GraphError::invalid("pairs", format!("duplicate pair ({s}, {t})")));
            }
        }
        Ok(DsfInstance { graph, pairs })
    }

    pub fn graph(&self) -> &DiGraph {
        &self.graph
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DsnDemand {
    pub source: usize,
    pub sink: usize,
    pub demand: u32,
}

/// Directed Steiner Network: per pair, `demand` edge-disjoint paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DsnInstance {
    graph: DiGraph,
    pairs: Vec<DsnDemand>,
}

impl DsnInstance {
    pub fn new(graph: DiGraph, pairs: Vec<DsnDemand>) -> Result<Self, GraphError> {
        let n = graph.vertex_count();
        if pairs.is_empty() {
            return Err(GraphError::invalid("pairs", "must be nonempty"));
        }
        let mut seen = BTreeSet::new();
        for d in &pairs {
            if d.source >= n {
                return Err(GraphError::VertexOutOfRange { id: d.source, n });
            }
            if d.sink >= n {
                return Err(GraphError::VertexOutOfRange { id: d.sink, n });
            }
            if d.source == d.sink {
                return Err(GraphError::invalid(
                    "pairs",
                    format!("pair ({}, {}) has equal endpoints", d.source, d.sink),
                ));
            }
            if d.demand < 1 {
                return Err(GraphError::invalid("demands", "demands must be >= 1"));
            }
            if !seen.insert((d.source, d.sink)) {
                return Err(GraphError::invalid(
                    "pairs",
                    format!("duplicate pair ({}, {})", d.source, d.sink),
                ));
            }
        }
        Ok(DsnInstance { graph, pairs })
    }

    pub fn graph(&self) -> &DiGraph {
        &self.graph
    }

    pub fn pairs(&self) -> &[DsnDemand] {
        &self.pairs
    }
}

/// Minimum Edge Cover (smallest vertex set inducing at least `k` edges).
/// The graph is read symmetrically: each stored arc is an undirected edge,
/// and storing both orientations of the same pair is rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MecInstance {
    graph: DiGraph,
    k: u64,
}

impl MecInstance {
    pub fn new(graph: DiGraph, k: u64) -> Result<Self, GraphError> {
        if k < 1 {
            return Err(GraphError::invalid("k", "must be >= 1"));
        }
        let mut seen = BTreeSet::new();
        for e in graph.edges() {
            let key = (e.tail.min(e.head), e.tail.max(e.head));
            if !seen.insert(key) {
                return Err(GraphError::invalid(
                    "edges",
                    format!("undirected duplicate of ({}, {})", key.0, key.1),
                ));
            }
        }
        Ok(MecInstance { graph, k })
    }

    pub fn graph(&self) -> &DiGraph {
        &self.graph
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// Number of edges with both endpoints in `s`.
    pub fn induced_edge_count(&self, s: &BTreeSet<usize>) -> u64 {
        self.graph
            .edges()
            .iter()
            .filter(|e| s.contains(&e.tail) && s.contains(&e.head))
            .count() as u64
    }
}

/// Set Cover over a universe of dense 0-based element ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCoverInstance {
    universe: usize,
    sets: Vec<BTreeSet<usize>>,
    labels: Option<Vec<String>>,
}

impl SetCoverInstance {
    pub fn new(
        universe: usize,
        sets: Vec<BTreeSet<usize>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, GraphError> {
        for (i, s) in sets.iter().enumerate() {
            if let Some(&e) = s.iter().find(|&&e| e >= universe) {
                return Err(GraphError::invalid(
                    "sets",
                    format!("set {i} contains element {e} outside universe of size {universe}"),
                ));
            }
        }
        if let Some(ref l) = labels {
            if l.len() != sets.len() {
                return Err(GraphError::invalid("labels", "label count must match set count"));
            }
        }
        Ok(SetCoverInstance { universe, sets, labels })
    }

    pub fn universe_size(&self) -> usize {
        self.universe
    }

    pub fn sets(&self) -> &[BTreeSet<usize>] {
        &self.sets
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }
}

/// A projection game: bipartite constraint graph with one projection table
/// per edge. An edge (a, b) is satisfied by a labeling when the table maps
/// the label of a to the label of b.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionGame {
    v1: usize,
    v2: usize,
    sigma: usize,
    edges: Vec<(usize, usize)>,
    tables: Vec<Vec<usize>>,
}

impl ProjectionGame {
    pub fn new(
        v1: usize,
        v2: usize,
        sigma: usize,
        edges: Vec<(usize, usize)>,
        tables: Vec<Vec<usize>>,
    ) -> Result<Self, GraphError> {
        if sigma == 0 {
            return Err(GraphError::invalid("sigma", "alphabet must be nonempty"));
        }
        for &(a, b) in &edges {
            if a >= v1 {
                return Err(GraphError::invalid("edges", format!("left endpoint {a} >= v1 = {v1}")));
            }
            if b >= v2 {
                return Err(GraphError::invalid("edges", format!("right endpoint {b} >= v2 = {v2}")));
            }
        }
        if tables.len() != edges.len() {
            return Err(GraphError::invalid(
                "pi",
                format!("{} tables for {} edges; every edge needs a complete projection", tables.len(), edges.len()),
            ));
        }
        for (i, t) in tables.iter().enumerate() {
            if t.len() != sigma {
                return Err(GraphError::invalid(
                    "pi",
                    format!("table for edge {i} has {} entries, expected {sigma}", t.len()),
                ));
            }
            if let Some(&y) = t.iter().find(|&&y| y >= sigma) {
                return Err(GraphError::invalid(
                    "pi",
                    format!("table for edge {i} maps to symbol {y} >= sigma = {sigma}"),
                ));
            }
        }
        Ok(ProjectionGame { v1, v2, sigma, edges, tables })
    }

    pub fn v1(&self) -> usize {
        self.v1
    }

    pub fn v2(&self) -> usize {
        self.v2
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn table(&self, edge: usize) -> &[usize] {
        &self.tables[edge]
    }

    /// A labeling assigns a symbol to every vertex: first the `v1` left
    /// vertices, then the `v2` right vertices.
    pub fn edge_satisfied(&self, edge: usize, labeling: &[usize]) -> bool {
        let (a, b) = self.edges[edge];
        self.tables[edge][labeling[a]] == labeling[self.v1 + b]
    }

    pub fn satisfied_count(&self, labeling: &[usize]) -> usize {
        (0..self.edges.len())
            .filter(|&e| self.edge_satisfied(e, labeling))
            .count()
    }

    /// Whether every left and every right vertex has the same degree.
    pub fn is_regular(&self) -> bool {
        let mut left = vec![0usize; self.v1];
        let mut right = vec![0usize; self.v2];
        for &(a, b) in &self.edges {
            left[a] += 1;
            right[b] += 1;
        }
        left.windows(2).all(|w| w[0] == w[1]) && right.windows(2).all(|w| w[0] == w[1])
    }
}

/// Multicolored Clique: an undirected graph (symmetric reading, as in
/// [`MecInstance`]), a vertex coloring, and a clique size target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MccInstance {
    graph: DiGraph,
    colors: Vec<usize>,
    p: usize,
}

impl MccInstance {
    pub fn new(graph: DiGraph, colors: Vec<usize>, p: usize) -> Result<Self, GraphError> {
        if colors.len() != graph.vertex_count() {
            return Err(GraphError::invalid(
                "colors",
                format!("{} colors for {} vertices", colors.len(), graph.vertex_count()),
            ));
        }
        if p < 1 {
            return Err(GraphError::invalid("p", "must be >= 1"));
        }
        let mut seen = BTreeSet::new();
        for e in graph.edges() {
            let key = (e.tail.min(e.head), e.tail.max(e.head));
            if !seen.insert(key) {
                return Err(GraphError::invalid(
                    "edges",
                    format!("undirected duplicate of ({}, {})", key.0, key.1),
                ));
            }
        }
        Ok(MccInstance { graph, colors, p })
    }

    pub fn graph(&self) -> &DiGraph {
        &self.graph
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn p(&self) -> usize {
        self.p
    }
}

/// Any instance the file format can hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Dst(DstInstance),
    Scss(ScssInstance),
    Dsf(DsfInstance),
    Dsn(DsnInstance),
    Mec(MecInstance),
    SetCover(SetCoverInstance),
    ProjGame(ProjectionGame),
    Mcc(MccInstance),
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Dst(_) => "dst",
            Instance::Scss(_) => "scss",
            Instance::Dsf(_) => "dsf",
            Instance::Dsn(_) => "dsn",
            Instance::Mec(_) => "mec",
            Instance::SetCover(_) => "setcover",
            Instance::ProjGame(_) => "projgame",
            Instance::Mcc(_) => "mcc",
        }
    }

    pub fn graph(&self) -> Option<&DiGraph> {
        match self {
            Instance::Dst(i) => Some(i.graph()),
            Instance::Scss(i) => Some(i.graph()),
            Instance::Dsf(i) => Some(i.graph()),
            Instance::Dsn(i) => Some(i.graph()),
            Instance::Mec(i) => Some(i.graph()),
            Instance::Mcc(i) => Some(i.graph()),
            Instance::SetCover(_) | Instance::ProjGame(_) => None,
        }
    }
}

/// A solver outcome: an edge set, a vertex set, or the distinguished
/// `reject` value of the normalized-algorithm contract. Reject carries a
/// diagnosis instead of items.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Solution {
    EdgeSet {
        edges: BTreeSet<usize>,
        cost: u64,
        producer: String,
    },
    VertexSet {
        vertices: BTreeSet<usize>,
        cost: u64,
        producer: String,
    },
    Reject {
        producer: String,
        reason: String,
    },
}

impl Solution {
    pub fn edges(graph: &DiGraph, edges: BTreeSet<usize>, producer: &str) -> Solution {
        let cost = graph.edge_set_cost(&edges);
        Solution::EdgeSet {
            edges,
            cost,
            producer: producer.to_string(),
        }
    }

    pub fn vertices(vertices: BTreeSet<usize>, producer: &str) -> Solution {
        let cost = vertices.len() as u64;
        Solution::VertexSet {
            vertices,
            cost,
            producer: producer.to_string(),
        }
    }

    pub fn reject(producer: &str, reason: impl Into<String>) -> Solution {
        Solution::Reject {
            producer: producer.to_string(),
            reason: reason.into(),
        }
    }

    pub fn is_reject(&self) -> bool {
        matches!(self, Solution::Reject { .. })
    }

    pub fn cost(&self) -> Option<u64> {
        match self {
            Solution::EdgeSet { cost, .. } | Solution::VertexSet { cost, .. } => Some(*cost),
            Solution::Reject { .. } => None,
        }
    }

    pub fn producer(&self) -> &str {
        match self {
            Solution::EdgeSet { producer, .. }
            | Solution::VertexSet { producer, .. }
            | Solution::Reject { producer, .. } => producer,
        }
    }

    pub fn edge_items(&self) -> Option<&BTreeSet<usize>> {
        match self {
            Solution::EdgeSet { edges, .. } => Some(edges),
            _ => None,
        }
    }

    pub fn vertex_items(&self) -> Option<&BTreeSet<usize>> {
        match self {
            Solution::VertexSet { vertices, .. } => Some(vertices),
            _ => None,
        }
    }
}
