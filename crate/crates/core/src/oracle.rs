//! Brute-force exact solvers at desk scale.
//!
//! These are the reference answers the approximation modules are measured
//! against, so they share no search code with the production solvers: plain
//! subset enumeration, BFS reachability over bitmasks, and a by-the-book
//! augmenting-path max-flow. Past their budget they refuse loudly; a silent
//! fallback here would quietly corrupt every ratio measured downstream.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use crate::error::OracleError;
use crate::graph::DiGraph;
use crate::instance::{
    DsfInstance, DsnInstance, DstInstance, MecInstance, ScssInstance, SetCoverInstance, Solution,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_edges_for_subset_enum: usize,
    pub max_sets_for_cover_enum: usize,
    pub time_cap_secs: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_edges_for_subset_enum: 20,
            max_sets_for_cover_enum: 20,
            time_cap_secs: 60,
        }
    }
}

impl OracleBudget {
    /// Parse a budget override of the form `edges=24,sets=22,time=120`.
    /// Omitted keys keep their defaults.
    pub fn parse_spec(spec: &str) -> Result<OracleBudget, String> {
        let mut budget = OracleBudget::default();
        for part in spec.split(',').filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got \"{part}\""))?;
            let value: u64 = value
                .trim()
                .parse()
                .map_err(|_| format!("value of \"{key}\" is not a number: \"{value}\""))?;
            if value == 0 && key.trim() != "time" {
                return Err(format!("\"{key}\" must be positive"));
            }
            match key.trim() {
                "edges" => budget.max_edges_for_subset_enum = value as usize,
                "sets" => budget.max_sets_for_cover_enum = value as usize,
                "time" => budget.time_cap_secs = value,
                other => return Err(format!("unknown budget key \"{other}\"")),
            }
        }
        Ok(budget)
    }

    /// Budget from the `PARAMX_ORACLE_BUDGET` environment variable, or the
    /// defaults when it is unset.
    pub fn from_env() -> Result<OracleBudget, String> {
        match std::env::var("PARAMX_ORACLE_BUDGET") {
            Ok(spec) => Self::parse_spec(&spec),
            Err(_) => Ok(OracleBudget::default()),
        }
    }
}

/// Exact answer for a minimization run: the optimum and one witness, or
/// proof-by-exhaustion that nothing feasible exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleResult {
    Optimal { solution: Solution, opt: u64 },
    Infeasible,
}

impl OracleResult {
    pub fn opt(&self) -> Option<u64> {
        match self {
            OracleResult::Optimal { opt, .. } => Some(*opt),
            OracleResult::Infeasible => None,
        }
    }
}

/// The edge-subset problems the oracle understands.
pub enum EdgeProblem<'a> {
    Dst(&'a DstInstance),
    Scss(&'a ScssInstance),
    Dsf(&'a DsfInstance),
    Dsn(&'a DsnInstance),
}

impl<'a> EdgeProblem<'a> {
    fn graph(&self) -> &DiGraph {
        match self {
            EdgeProblem::Dst(i) => i.graph(),
            EdgeProblem::Scss(i) => i.graph(),
            EdgeProblem::Dsf(i) => i.graph(),
            EdgeProblem::Dsn(i) => i.graph(),
        }
    }
}

/// Fixed-cardinality lexicographic subset enumerator over 0..m.
struct Combos {
    m: usize,
    c: usize,
    idx: Vec<usize>,
    fresh: bool,
}

impl Combos {
    fn new(m: usize, c: usize) -> Combos {
        Combos { m, c, idx: (0..c).collect(), fresh: true }
    }

    fn next(&mut self) -> Option<&[usize]> {
        if self.c > self.m {
            return None;
        }
        if self.fresh {
            self.fresh = false;
            return Some(&self.idx);
        }
        let mut i = self.c;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if self.idx[i] != self.m - self.c + i {
                self.idx[i] += 1;
                for j in i + 1..self.c {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                return Some(&self.idx);
            }
        }
    }
}

fn reach_mask(g: &DiGraph, src: usize, selected: &[usize]) -> u64 {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count()];
    for &i in selected {
        let e = &g.edges()[i];
        adj[e.tail].push(e.head);
    }
    let mut reach: u64 = 1 << src;
    let mut stack = vec![src];
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if reach & (1 << w) == 0 {
                reach |= 1 << w;
                stack.push(w);
            }
        }
    }
    reach
}

fn vertex_mask(vs: impl IntoIterator<Item = usize>) -> u64 {
    let mut m = 0u64;
    for v in vs {
        m |= 1 << v;
    }
    m
}

/// Max-flow with unit capacity per arc, by BFS augmentation. Deliberately
/// unrelated to the min-cost flow solver it cross-checks.
pub fn unit_max_flow(n: usize, arcs: &[(usize, usize)], s: usize, t: usize) -> u32 {
    let mut cap = vec![vec![0i32; n]; n];
    for &(u, v) in arcs {
        cap[u][v] += 1;
    }
    let mut flow = 0;
    loop {
        let mut prev = vec![usize::MAX; n];
        prev[s] = s;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for w in 0..n {
                if prev[w] == usize::MAX && cap[v][w] > 0 {
                    prev[w] = v;
                    queue.push_back(w);
                }
            }
        }
        if prev[t] == usize::MAX {
            return flow;
        }
        let mut v = t;
        while v != s {
            let u = prev[v];
            cap[u][v] -= 1;
            cap[v][u] += 1;
            v = u;
        }
        flow += 1;
    }
}

struct Checker<'a> {
    problem: &'a EdgeProblem<'a>,
    reversed: Option<DiGraph>,
}

impl<'a> Checker<'a> {
    fn new(problem: &'a EdgeProblem<'a>) -> Checker<'a> {
        let reversed = match problem {
            // reverse() keeps edge indices, so a selection over the forward
            // graph selects the mirrored arcs directly.
            EdgeProblem::Scss(i) => Some(i.graph().reverse()),
            _ => None,
        };
        Checker { problem, reversed }
    }

    fn feasible(&self, selected: &[usize]) -> bool {
        match self.problem {
            EdgeProblem::Dst(inst) => {
                let want = vertex_mask(inst.terminals().iter().copied());
                reach_mask(inst.graph(), inst.root(), selected) & want == want
            }
            EdgeProblem::Scss(inst) => {
                let hub = inst.terminals()[0];
                let want = vertex_mask(inst.terminals().iter().copied());
                if reach_mask(inst.graph(), hub, selected) & want != want {
                    return false;
                }
                let rev = self.reversed.as_ref().expect("built for scss");
                reach_mask(rev, hub, selected) & want == want
            }
            EdgeProblem::Dsf(inst) => inst.pairs().iter().all(|&(s, t)| {
                reach_mask(inst.graph(), s, selected) & (1 << t) != 0
            }),
            EdgeProblem::Dsn(inst) => {
                let arcs: Vec<(usize, usize)> = selected
                    .iter()
                    .map(|&i| {
                        let e = &inst.graph().edges()[i];
                        (e.tail, e.head)
                    })
                    .collect();
                let n = inst.graph().vertex_count();
                inst.pairs().iter().all(|d| {
                    unit_max_flow(n, &arcs, d.source, d.sink) >= d.demand
                })
            }
        }
    }
}

struct Deadline {
    start: Instant,
    cap: Duration,
    cap_secs: u64,
    ticks: u64,
}

impl Deadline {
    fn new(cap_secs: u64) -> Deadline {
        Deadline {
            start: Instant::now(),
            cap: Duration::from_secs(cap_secs),
            cap_secs,
            ticks: 0,
        }
    }

    fn tick(&mut self) -> Result<(), OracleError> {
        self.ticks += 1;
        if self.ticks % 4096 == 0 && self.start.elapsed() >= self.cap {
            return Err(OracleError::TimeCapExceeded { cap_secs: self.cap_secs });
        }
        Ok(())
    }
}

/// Minimum-cost feasible edge subset by exhaustive enumeration.
///
/// Unit-weight instances stop at the first feasible cardinality (there the
/// cardinality-lexicographic order IS the cost order); weighted instances
/// scan every subset and keep the best, ties resolved by enumeration order.
pub fn opt_edge_subset(
    problem: &EdgeProblem,
    budget: &OracleBudget,
) -> Result<OracleResult, OracleError> {
    let g = problem.graph();
    let m = g.edge_count();
    if m > budget.max_edges_for_subset_enum {
        return Err(OracleError::Refused {
            reason: format!(
                "{m} edges exceed the subset-enumeration budget of {}",
                budget.max_edges_for_subset_enum
            ),
        });
    }
    if g.vertex_count() > 64 {
        return Err(OracleError::Refused {
            reason: "bitmask reachability handles at most 64 vertices".into(),
        });
    }
    let unit = g.edges().iter().all(|e| e.weight == 1);
    let checker = Checker::new(problem);
    let mut deadline = Deadline::new(budget.time_cap_secs);
    let mut best: Option<(u64, BTreeSet<usize>)> = None;
    for c in 0..=m {
        let mut combos = Combos::new(m, c);
        while let Some(sel) = combos.next() {
            deadline.tick()?;
            if !checker.feasible(sel) {
                continue;
            }
            let set: BTreeSet<usize> = sel.iter().copied().collect();
            let cost = g.edge_set_cost(&set);
            if unit {
                return Ok(OracleResult::Optimal {
                    solution: Solution::edges(g, set, "oracle"),
                    opt: cost,
                });
            }
            if best.as_ref().is_none_or(|(b, _)| cost < *b) {
                best = Some((cost, set));
            }
        }
    }
    match best {
        Some((opt, set)) => Ok(OracleResult::Optimal {
            solution: Solution::edges(g, set, "oracle"),
            opt,
        }),
        None => Ok(OracleResult::Infeasible),
    }
}

/// Exhaustively confirm that no feasible subset costs less than `bound`.
/// This is the second, independent pass behind every reported optimum.
pub fn no_cheaper_subset(
    problem: &EdgeProblem,
    bound: u64,
    budget: &OracleBudget,
) -> Result<bool, OracleError> {
    let g = problem.graph();
    let m = g.edge_count();
    if m > budget.max_edges_for_subset_enum {
        return Err(OracleError::Refused {
            reason: format!(
                "{m} edges exceed the subset-enumeration budget of {}",
                budget.max_edges_for_subset_enum
            ),
        });
    }
    let unit = g.edges().iter().all(|e| e.weight == 1);
    let checker = Checker::new(problem);
    let mut deadline = Deadline::new(budget.time_cap_secs);
    for c in 0..=m {
        if unit && c as u64 >= bound {
            break;
        }
        let mut combos = Combos::new(m, c);
        while let Some(sel) = combos.next() {
            deadline.tick()?;
            let set: BTreeSet<usize> = sel.iter().copied().collect();
            if g.edge_set_cost(&set) < bound && checker.feasible(sel) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether an explicit edge selection solves the given problem. Shared with
/// tests that re-verify approximation outputs.
pub fn edge_subset_feasible(problem: &EdgeProblem, edges: &BTreeSet<usize>) -> bool {
    let sel: Vec<usize> = edges.iter().copied().collect();
    Checker::new(problem).feasible(&sel)
}

/// Smallest vertex set inducing at least `k` edges, by subset enumeration.
/// Induced edge count is monotone under vertex insertion, so the first
/// feasible cardinality is the optimum.
pub fn opt_vertex_subset_mec(
    inst: &MecInstance,
    budget: &OracleBudget,
) -> Result<OracleResult, OracleError> {
    let n = inst.graph().vertex_count();
    if n > 25 {
        return Err(OracleError::Refused {
            reason: format!("vertex enumeration over {n} > 25 vertices refused"),
        });
    }
    if (inst.graph().edge_count() as u64) < inst.k() {
        return Ok(OracleResult::Infeasible);
    }
    let mut deadline = Deadline::new(budget.time_cap_secs);
    for c in 0..=n {
        let mut combos = Combos::new(n, c);
        while let Some(sel) = combos.next() {
            deadline.tick()?;
            let set: BTreeSet<usize> = sel.iter().copied().collect();
            if inst.induced_edge_count(&set) >= inst.k() {
                return Ok(OracleResult::Optimal {
                    solution: Solution::vertices(set, "oracle"),
                    opt: c as u64,
                });
            }
        }
    }
    Ok(OracleResult::Infeasible)
}

/// Exact set cover: the chosen set indices and their count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverResult {
    Optimal { chosen: BTreeSet<usize>, opt: usize },
    Infeasible,
}

pub fn opt_set_cover(
    inst: &SetCoverInstance,
    budget: &OracleBudget,
) -> Result<CoverResult, OracleError> {
    let m = inst.sets().len();
    if m > budget.max_sets_for_cover_enum {
        return Err(OracleError::Refused {
            reason: format!(
                "{m} sets exceed the cover-enumeration budget of {}",
                budget.max_sets_for_cover_enum
            ),
        });
    }
    let universe: BTreeSet<usize> = (0..inst.universe_size()).collect();
    let union: BTreeSet<usize> = inst.sets().iter().flatten().copied().collect();
    if union != universe {
        return Ok(CoverResult::Infeasible);
    }
    let mut deadline = Deadline::new(budget.time_cap_secs);
    for c in 0..=m {
        let mut combos = Combos::new(m, c);
        while let Some(sel) = combos.next() {
            deadline.tick()?;
            let covered: BTreeSet<usize> = sel
                .iter()
                .flat_map(|&i| inst.sets()[i].iter().copied())
                .collect();
            if covered == universe {
                return Ok(CoverResult::Optimal {
                    chosen: sel.iter().copied().collect(),
                    opt: c,
                });
            }
        }
    }
    unreachable!("the full collection covers, so some subset does");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DiGraph;

    fn budget() -> OracleBudget {
        OracleBudget::default()
    }

    #[test]
    fn scss_on_bidirected_triangle_needs_three_edges() {
        let g = DiGraph::unit(3, vec![(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)]).unwrap();
        let inst = ScssInstance::new(g, vec![0, 1, 2], None).unwrap();
        let r = opt_edge_subset(&EdgeProblem::Scss(&inst), &budget()).unwrap();
        assert_eq!(r.opt(), Some(3));
        assert!(no_cheaper_subset(&EdgeProblem::Scss(&inst), 3, &budget()).unwrap());
    }

    #[test]
    fn dsf_on_a_path_takes_the_path() {
        let g = DiGraph::unit(3, vec![(0, 1), (1, 2)]).unwrap();
        let inst = DsfInstance::new(g, vec![(0, 2)]).unwrap();
        let r = opt_edge_subset(&EdgeProblem::Dsf(&inst), &budget()).unwrap();
        assert_eq!(r.opt(), Some(2));
    }

    #[test]
    fn dsn_diamond_with_demand_two_needs_all_four_edges() {
        use crate::instance::DsnDemand;
        let g = DiGraph::unit(4, vec![(0, 1), (1, 3), (0, 2), (2, 3)]).unwrap();
        let inst = DsnInstance::new(
            g,
            vec![DsnDemand { source: 0, sink: 3, demand: 2 }],
        )
        .unwrap();
        let r = opt_edge_subset(&EdgeProblem::Dsn(&inst), &budget()).unwrap();
        assert_eq!(r.opt(), Some(4));
    }

    #[test]
    fn weighted_scan_prefers_cheap_two_edge_path() {
        let g = DiGraph::new(3, vec![(0, 1, 1), (1, 2, 1), (0, 2, 3)]).unwrap();
        let inst = DstInstance::new(g, 0, BTreeSet::from([2])).unwrap();
        let r = opt_edge_subset(&EdgeProblem::Dst(&inst), &budget()).unwrap();
        match r {
            OracleResult::Optimal { solution, opt } => {
                assert_eq!(opt, 2);
                assert_eq!(solution.edge_items().unwrap(), &BTreeSet::from([0, 1]));
            }
            OracleResult::Infeasible => panic!("feasible instance"),
        }
    }

    #[test]
    fn unreachable_pair_is_infeasible() {
        let g = DiGraph::unit(2, vec![(1, 0)]).unwrap();
        let inst = DsfInstance::new(g, vec![(0, 1)]).unwrap();
        let r = opt_edge_subset(&EdgeProblem::Dsf(&inst), &budget()).unwrap();
        assert_eq!(r, OracleResult::Infeasible);
    }

    #[test]
    fn budget_refusal_names_the_limit() {
        let arcs: Vec<(usize, usize)> = (0..6)
            .flat_map(|u| (0..6).filter(move |&v| v != u).map(move |v| (u, v)))
            .take(21)
            .collect();
        let g = DiGraph::unit(6, arcs).unwrap();
        let inst = DstInstance::new(g, 0, BTreeSet::from([5])).unwrap();
        let err = opt_edge_subset(&EdgeProblem::Dst(&inst), &budget()).unwrap_err();
        assert!(matches!(err, OracleError::Refused { .. }), "{err}");
    }

    #[test]
    fn zero_time_cap_trips_on_long_scans() {
        let arcs: Vec<(usize, usize)> = (0..5)
            .flat_map(|u| (0..5).filter(move |&v| v != u).map(move |v| (u, v)))
            .take(16)
            .collect();
        let g = DiGraph::unit(5, arcs.clone()).unwrap();
        // Make the scan weighted so it cannot stop early.
        let weighted: Vec<(usize, usize, u64)> =
            arcs.iter().map(|&(u, v)| (u, v, 1 + u as u64)).collect();
        let g2 = DiGraph::new(5, weighted).unwrap();
        drop(g);
        let inst = DstInstance::new(g2, 0, BTreeSet::from([4])).unwrap();
        let tight = OracleBudget { time_cap_secs: 0, ..OracleBudget::default() };
        let err = opt_edge_subset(&EdgeProblem::Dst(&inst), &tight).unwrap_err();
        assert!(matches!(err, OracleError::TimeCapExceeded { .. }), "{err}");
    }

    #[test]
    fn mec_examples_from_small_graphs() {
        let triangle = DiGraph::unit(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let inst = MecInstance::new(triangle, 3).unwrap();
        assert_eq!(opt_vertex_subset_mec(&inst, &budget()).unwrap().opt(), Some(3));

        let star = DiGraph::unit(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap();
        let inst = MecInstance::new(star, 3).unwrap();
        assert_eq!(opt_vertex_subset_mec(&inst, &budget()).unwrap().opt(), Some(4));

        let path = DiGraph::unit(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        let inst = MecInstance::new(path, 1).unwrap();
        assert_eq!(opt_vertex_subset_mec(&inst, &budget()).unwrap().opt(), Some(2));

        let sparse = DiGraph::unit(3, vec![(0, 1)]).unwrap();
        let inst = MecInstance::new(sparse, 2).unwrap();
        assert_eq!(opt_vertex_subset_mec(&inst, &budget()).unwrap(), OracleResult::Infeasible);
    }

    #[test]
    fn set_cover_small_cases() {
        let inst = SetCoverInstance::new(
            2,
            vec![
                BTreeSet::from([0]),
                BTreeSet::from([1]),
                BTreeSet::from([0, 1]),
            ],
            None,
        )
        .unwrap();
        match opt_set_cover(&inst, &budget()).unwrap() {
            CoverResult::Optimal { chosen, opt } => {
                assert_eq!(opt, 1);
                assert_eq!(chosen, BTreeSet::from([2]));
            }
            CoverResult::Infeasible => panic!("coverable"),
        }

        let inst = SetCoverInstance::new(
            3,
            vec![BTreeSet::from([0, 1]), BTreeSet::from([1, 2])],
            None,
        )
        .unwrap();
        match opt_set_cover(&inst, &budget()).unwrap() {
            CoverResult::Optimal { opt, .. } => assert_eq!(opt, 2),
            CoverResult::Infeasible => panic!("coverable"),
        }

        let inst = SetCoverInstance::new(2, vec![BTreeSet::from([0])], None).unwrap();
        assert_eq!(opt_set_cover(&inst, &budget()).unwrap(), CoverResult::Infeasible);
    }

    #[test]
    fn unit_max_flow_matches_hand_counts() {
        let diamond = [(0, 1), (1, 3), (0, 2), (2, 3)];
        assert_eq!(unit_max_flow(4, &diamond, 0, 3), 2);
        let path = [(0, 1), (1, 2)];
        assert_eq!(unit_max_flow(3, &path, 0, 2), 1);
        assert_eq!(unit_max_flow(3, &path, 2, 0), 0);
    }

    #[test]
    fn budget_spec_parsing() {
        let b = OracleBudget::parse_spec("edges=24,sets=22,time=120").unwrap();
        assert_eq!(b.max_edges_for_subset_enum, 24);
        assert_eq!(b.max_sets_for_cover_enum, 22);
        assert_eq!(b.time_cap_secs, 120);
        let b = OracleBudget::parse_spec("edges=8").unwrap();
        assert_eq!(b.max_edges_for_subset_enum, 8);
        assert_eq!(b.max_sets_for_cover_enum, 20);
        assert!(OracleBudget::parse_spec("edges=zero").is_err());
        assert!(OracleBudget::parse_spec("widgets=3").is_err());
        assert!(OracleBudget::parse_spec("edges=0").is_err());
    }

    #[test]
    fn generated_connectivity_instances_are_feasible() {
        use crate::generate::{gen_dsf, gen_dsn, gen_scss, Family};
        for seed in 0..15 {
            let g = gen_scss(Family::RandomGnp, 6, 3, 0.15, seed).unwrap();
            let inst = match &g.instance {
                crate::instance::Instance::Scss(i) => i.clone(),
                _ => unreachable!(),
            };
            let r = opt_edge_subset(&EdgeProblem::Scss(&inst), &budget()).unwrap();
            let opt = r.opt().expect("planted solution exists");
            assert!(opt <= g.planted_cost.unwrap());

            let g = gen_dsf(Family::RandomGnp, 6, 2, 0.15, seed).unwrap();
            let inst = match &g.instance {
                crate::instance::Instance::Dsf(i) => i.clone(),
                _ => unreachable!(),
            };
            let r = opt_edge_subset(&EdgeProblem::Dsf(&inst), &budget()).unwrap();
            assert!(r.opt().expect("planted") <= g.planted_cost.unwrap());

            let g = gen_dsn(Family::BidirectedRing, 5, 2, 2, 0.0, seed).unwrap();
            let inst = match &g.instance {
                crate::instance::Instance::Dsn(i) => i.clone(),
                _ => unreachable!(),
            };
            let r = opt_edge_subset(&EdgeProblem::Dsn(&inst), &budget()).unwrap();
            assert!(r.opt().expect("planted") <= g.planted_cost.unwrap());
        }
    }
}
