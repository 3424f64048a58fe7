//! Approximation algorithms built from the tree, flow, and selection
//! primitives: strong connectivity via paired Steiner trees (greedy and
//! exact flavors), per-source forests, per-pair disjoint-path unions, and
//! the endpoint heuristic for edge-covering vertex sets.

use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dst::{dst_exact, dst_recursive_greedy, RecursiveGreedyConfig};
use crate::error::SolveError;
use crate::flow::min_cost_disjoint_paths;
use crate::fpt::{FptApprox, Goal};
use crate::graph::DiGraph;
use crate::instance::{DsfInstance, DsnInstance, DstInstance, MecInstance, ScssInstance, Solution};
use crate::oracle::unit_max_flow;

/// One inner run contributing edges to a union solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subcall {
    pub label: String,
    pub edges: BTreeSet<usize>,
    pub cost: u64,
}

/// A solution together with the measured bound it certifies and the
/// sub-runs whose edge sets were unioned to produce it.
///
/// The solution's cost is always recomputed from the deduplicated union,
/// never summed over subcalls.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxOutcome {
    pub solution: Solution,
    pub claimed_bound: String,
    pub subcalls: Vec<Subcall>,
}

/// Which terminal anchors the two-tree construction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum HubChoice {
    /// First terminal in input order; deterministic default.
    #[default]
    FirstTerminal,
    /// Try every terminal and keep the cheapest union (first wins ties).
    TryAllHubs,
}

/// Solve DST twice, from `hub` in `g` and in `reverse(g)`, and union the
/// edge sets. `reverse()` preserves edge indices, so the second run's
/// edges refer to the original arcs directly.
fn hub_union<F>(
    g: &DiGraph,
    terminals: &[usize],
    hub: usize,
    solve: F,
    producer: &str,
) -> Result<(Solution, Vec<Subcall>), SolveError>
where
    F: Fn(&DstInstance) -> Result<Solution, SolveError>,
{
    let tset: BTreeSet<usize> = terminals.iter().copied().collect();
    let fwd = DstInstance::new(g.clone(), hub, tset.clone())?;
    let out_tree = solve(&fwd).map_err(|e| match e {
        SolveError::Infeasible(_) => {
            SolveError::Infeasible(format!("hub {hub} does not reach every terminal"))
        }
        other => other,
    })?;
    let bwd = DstInstance::new(g.reverse(), hub, tset)?;
    let in_tree = solve(&bwd).map_err(|e| match e {
        SolveError::Infeasible(_) => {
            SolveError::Infeasible(format!("not every terminal reaches hub {hub}"))
        }
        other => other,
    })?;
    let out_edges = out_tree.edge_items().expect("tree solver returns edge sets").clone();
    let in_edges = in_tree.edge_items().expect("tree solver returns edge sets").clone();
    let mut union = out_edges.clone();
    union.extend(in_edges.iter().copied());
    let subcalls = vec![
        Subcall {
            label: format!("out-tree from hub {hub}"),
            cost: out_tree.cost().unwrap_or(0),
            edges: out_edges,
        },
        Subcall {
            label: format!("in-tree to hub {hub}"),
            cost: in_tree.cost().unwrap_or(0),
            edges: in_edges,
        },
    ];
    Ok((Solution::edges(g, union, producer), subcalls))
}

/// Strong connectivity for the terminal set by greedy trees: an out-tree
/// and an in-tree anchored at a hub terminal, unioned. Every terminal then
/// reaches every other through the hub.
pub fn scss_poly(
    inst: &ScssInstance,
    cfg: &RecursiveGreedyConfig,
    hub: HubChoice,
) -> Result<ApproxOutcome, SolveError> {
    let hubs: &[usize] = match hub {
        HubChoice::FirstTerminal => &inst.terminals()[..1],
        HubChoice::TryAllHubs => inst.terminals(),
    };
    // Feasibility is hub-independent, so any hub's infeasibility verdict
    // stands for all of them.
    let mut best: Option<ApproxOutcome> = None;
    for &t1 in hubs {
        let (solution, subcalls) = hub_union(
            inst.graph(),
            inst.terminals(),
            t1,
            |d| dst_recursive_greedy(d, cfg),
            "scss-poly",
        )?;
        let cost = solution.cost().unwrap_or(0);
        if best.as_ref().is_none_or(|b| cost < b.solution.cost().unwrap_or(0)) {
            let claimed_bound = format!(
                "out-tree {} + in-tree {} at hub {t1}; union cost {cost}; greedy depth {}",
                subcalls[0].cost, subcalls[1].cost, cfg.levels
            );
            best = Some(ApproxOutcome { solution, claimed_bound, subcalls });
        }
    }
    Ok(best.expect("at least one hub was tried"))
}

/// Parameterized strong connectivity: exact trees both ways from the first
/// terminal, accepted only when the union costs at most twice the budget.
///
/// Infeasible inputs come back as a reject with a diagnosis rather than an
/// error, so a parameter sweep can keep probing.
pub fn scss_fpt(inst: &ScssInstance) -> Result<ApproxOutcome, SolveError> {
    let p = inst
        .p()
        .ok_or_else(|| SolveError::Refused("parameter p is required".into()))?;
    let hub = inst.terminals()[0];
    match hub_union(inst.graph(), inst.terminals(), hub, dst_exact, "scss-fpt") {
        Ok((solution, subcalls)) => {
            let cost = solution.cost().unwrap_or(0);
            if cost as u128 <= 2 * p as u128 {
                Ok(ApproxOutcome {
                    solution,
                    claimed_bound: format!("cost {cost} <= 2p = {}", 2 * p as u128),
                    subcalls,
                })
            } else {
                Ok(ApproxOutcome {
                    solution: Solution::reject(
                        "scss-fpt",
                        format!("union cost {cost} exceeds 2p = {}", 2 * p as u128),
                    ),
                    claimed_bound: format!("not certified: {cost} > 2p"),
                    subcalls,
                })
            }
        }
        Err(SolveError::Infeasible(msg)) => Ok(ApproxOutcome {
            solution: Solution::reject("scss-fpt", format!("infeasible: {msg}")),
            claimed_bound: "not certified: infeasible".into(),
            subcalls: Vec::new(),
        }),
        Err(e) => Err(e),
    }
}

/// One greedy tree per distinct source, covering all its sinks; the union
/// connects every requested pair.
pub fn dsf_approx(
    inst: &DsfInstance,
    cfg: &RecursiveGreedyConfig,
) -> Result<ApproxOutcome, SolveError> {
    let g = inst.graph();
    for &(s, t) in inst.pairs() {
        if !g.reachable_all(s)?.contains(&t) {
            return Err(SolveError::Infeasible(format!("no path from {s} to {t}")));
        }
    }
    let mut order: Vec<usize> = Vec::new();
    let mut sinks: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for &(s, t) in inst.pairs() {
        if !sinks.contains_key(&s) {
            order.push(s);
        }
        sinks.entry(s).or_default().insert(t);
    }
    let mut union: BTreeSet<usize> = BTreeSet::new();
    let mut subcalls = Vec::new();
    for s in order {
        let d = DstInstance::new(g.clone(), s, sinks[&s].clone())?;
        let sol = dst_recursive_greedy(&d, cfg)?;
        let edges = sol.edge_items().expect("tree solver returns edge sets").clone();
        union.extend(edges.iter().copied());
        subcalls.push(Subcall {
            label: format!("tree from source {s}"),
            cost: sol.cost().unwrap_or(0),
            edges,
        });
    }
    let solution = Solution::edges(g, union, "dsf");
    let claimed_bound = format!(
        "union of {} per-source trees; cost {} <= tree-cost total {}",
        subcalls.len(),
        solution.cost().unwrap_or(0),
        subcalls.iter().map(|s| s.cost).sum::<u64>()
    );
    Ok(ApproxOutcome { solution, claimed_bound, subcalls })
}

/// Cheapest disjoint-path bundle per pair, unioned. Adding the other
/// pairs' edges cannot shrink a pair's routing capacity, but the union is
/// still re-checked pair by pair.
pub fn dsn_approx(inst: &DsnInstance) -> Result<ApproxOutcome, SolveError> {
    let g = inst.graph();
    let mut union: BTreeSet<usize> = BTreeSet::new();
    let mut subcalls = Vec::new();
    for d in inst.pairs() {
        let out = min_cost_disjoint_paths(g, d.source, d.sink, d.demand).map_err(|e| match e {
            SolveError::Infeasible(msg) => {
                SolveError::Infeasible(format!("pair ({}, {}): {msg}", d.source, d.sink))
            }
            other => other,
        })?;
        union.extend(out.edges.iter().copied());
        subcalls.push(Subcall {
            label: format!("pair ({}, {}) demand {}", d.source, d.sink, d.demand),
            cost: out.cost,
            edges: out.edges,
        });
    }
    let arcs: Vec<(usize, usize)> = union
        .iter()
        .map(|&i| {
            let e = g.edge(i).expect("union indices come from g");
            (e.tail, e.head)
        })
        .collect();
    for d in inst.pairs() {
        let routed = unit_max_flow(g.vertex_count(), &arcs, d.source, d.sink);
        assert!(
            routed >= d.demand,
            "union routes only {routed} of demand {} for pair ({}, {})",
            d.demand,
            d.source,
            d.sink
        );
    }
    let solution = Solution::edges(g, union, "dsn");
    let claimed_bound = format!(
        "union cost {} <= per-pair total {}; each pair routed at minimum cost",
        solution.cost().unwrap_or(0),
        subcalls.iter().map(|s| s.cost).sum::<u64>()
    );
    Ok(ApproxOutcome { solution, claimed_bound, subcalls })
}

fn mec_from_edges(
    inst: &MecInstance,
    chosen: BTreeSet<usize>,
    label: String,
) -> ApproxOutcome {
    let g = inst.graph();
    let k = inst.k();
    let mut vertices = BTreeSet::new();
    for &i in &chosen {
        let e = &g.edges()[i];
        vertices.insert(e.tail);
        vertices.insert(e.head);
    }
    assert!(inst.induced_edge_count(&vertices) >= k, "chosen endpoints must induce the chosen edges");
    let claimed_bound = format!("{} vertices <= 2k = {}", vertices.len(), 2 * k);
    let subcalls = vec![Subcall { label, cost: g.edge_set_cost(&chosen), edges: chosen }];
    ApproxOutcome {
        solution: Solution::vertices(vertices, "mec"),
        claimed_bound,
        subcalls,
    }
}

/// Endpoints of the k first edges in undirected-lexicographic order; at
/// most 2k vertices, and they induce at least those k edges.
pub fn mec_approx(inst: &MecInstance) -> Result<ApproxOutcome, SolveError> {
    let g = inst.graph();
    let k = inst.k();
    let m = g.edge_count() as u64;
    if m < k {
        return Err(SolveError::Infeasible(format!(
            "graph has {m} edges, fewer than k = {k}"
        )));
    }
    let mut idx: Vec<usize> = (0..g.edge_count()).collect();
    idx.sort_by_key(|&i| {
        let e = &g.edges()[i];
        (e.tail.min(e.head), e.tail.max(e.head))
    });
    let chosen: BTreeSet<usize> = idx[..k as usize].iter().copied().collect();
    Ok(mec_from_edges(inst, chosen, format!("first {k} edges")))
}

/// Same guarantee as [`mec_approx`] on a seeded random k-edge sample,
/// for probing how much the bound depends on the choice.
pub fn mec_approx_seeded(inst: &MecInstance, seed: u64) -> Result<ApproxOutcome, SolveError> {
    let g = inst.graph();
    let k = inst.k();
    let m = g.edge_count();
    if (m as u64) < k {
        return Err(SolveError::Infeasible(format!(
            "graph has {m} edges, fewer than k = {k}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chosen: BTreeSet<usize> =
        rand::seq::index::sample(&mut rng, m, k as usize).into_iter().collect();
    Ok(mec_from_edges(inst, chosen, format!("seeded sample of {k} edges (seed {seed})")))
}

/// Sweep adapter: at parameter k the exact-tree algorithm runs with budget
/// p = k, inheriting the cost <= 2k acceptance threshold.
pub struct ScssFptAlgo;

impl FptApprox for ScssFptAlgo {
    type Inst = ScssInstance;

    fn name(&self) -> &'static str {
        "scss-fpt"
    }

    fn goal(&self) -> Goal {
        Goal::Min
    }

    fn rho(&self, _k: u64) -> f64 {
        2.0
    }

    fn run(&self, inst: &ScssInstance, k: u64) -> Solution {
        match scss_fpt(&inst.with_p(k)) {
            Ok(out) => out.solution,
            Err(e) => Solution::reject("scss-fpt", e.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpt::lift_to_optimum_approx;
    use crate::generate::{gen_dsf, gen_dsn, gen_scss, Family};
    use crate::instance::DsnDemand;
    use crate::oracle::{opt_edge_subset, EdgeProblem, OracleBudget, OracleResult};

    fn bidirected_triangle() -> ScssInstance {
        let g = DiGraph::unit(3, vec![(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]).unwrap();
        ScssInstance::new(g, vec![0, 1, 2], None).unwrap()
    }

    fn strongly_connects(inst: &ScssInstance, edges: &BTreeSet<usize>) -> bool {
        let hub = inst.terminals()[0];
        let fwd = inst.graph().reachable(hub, edges).unwrap();
        let rev = inst.graph().reverse().reachable(hub, edges).unwrap();
        inst.terminals().iter().all(|t| fwd.contains(t) && rev.contains(t))
    }

    #[test]
    fn scss_poly_triangle_within_twice_opt() {
        let inst = bidirected_triangle();
        let out = scss_poly(&inst, &RecursiveGreedyConfig::default(), HubChoice::FirstTerminal)
            .unwrap();
        let cost = out.solution.cost().unwrap();
        let opt = opt_edge_subset(&EdgeProblem::Scss(&inst), &OracleBudget::default())
            .unwrap()
            .opt()
            .unwrap();
        assert_eq!(opt, 3);
        assert!(cost <= 4, "two unit trees from the hub cost at most 4, got {cost}");
        assert!(cost >= opt);
        assert!(strongly_connects(&inst, out.solution.edge_items().unwrap()));

        let best = scss_poly(&inst, &RecursiveGreedyConfig::default(), HubChoice::TryAllHubs)
            .unwrap();
        assert!(best.solution.cost().unwrap() <= cost);
    }

    #[test]
    fn scss_poly_two_cycle_is_forced() {
        let g = DiGraph::unit(2, vec![(0, 1), (1, 0)]).unwrap();
        let inst = ScssInstance::new(g, vec![0, 1], None).unwrap();
        let out = scss_poly(&inst, &RecursiveGreedyConfig::default(), HubChoice::FirstTerminal)
            .unwrap();
        assert_eq!(out.solution.cost(), Some(2));
        assert_eq!(out.solution.edge_items().unwrap().len(), 2);
    }

    #[test]
    fn scss_poly_reports_direction_of_infeasibility() {
        let g = DiGraph::unit(3, vec![(0, 1), (0, 2)]).unwrap();
        let inst = ScssInstance::new(g, vec![0, 1], None).unwrap();
        let err = scss_poly(&inst, &RecursiveGreedyConfig::default(), HubChoice::FirstTerminal)
            .unwrap_err();
        assert!(matches!(err, SolveError::Infeasible(ref m) if m.contains("reaches hub")));
    }

    #[test]
    fn scss_fpt_accepts_and_rejects_at_the_threshold() {
        let inst = bidirected_triangle();
        let out = scss_fpt(&inst.with_p(3)).unwrap();
        assert_eq!(out.solution.cost(), Some(4));
        assert_eq!(out.subcalls.len(), 2);
        assert_eq!(out.subcalls[0].cost, 2);
        assert_eq!(out.subcalls[1].cost, 2);
        assert!(strongly_connects(&inst, out.solution.edge_items().unwrap()));

        let rejected = scss_fpt(&inst.with_p(1)).unwrap();
        assert!(rejected.solution.is_reject());

        assert!(matches!(scss_fpt(&inst), Err(SolveError::Refused(_))));
    }

    #[test]
    fn scss_fpt_turns_infeasibility_into_reject() {
        let g = DiGraph::unit(3, vec![(0, 1), (0, 2)]).unwrap();
        let inst = ScssInstance::new(g, vec![0, 1], Some(10)).unwrap();
        let out = scss_fpt(&inst).unwrap();
        assert!(out.solution.is_reject());
        match &out.solution {
            Solution::Reject { reason, .. } => assert!(reason.contains("infeasible")),
            _ => unreachable!(),
        }
    }

    #[test]
    fn dsf_single_pair_takes_the_path() {
        let g = DiGraph::unit(3, vec![(0, 1), (1, 2)]).unwrap();
        let inst = DsfInstance::new(g, vec![(0, 2)]).unwrap();
        let out = dsf_approx(&inst, &RecursiveGreedyConfig::default()).unwrap();
        assert_eq!(out.solution.cost(), Some(2));
        assert_eq!(out.subcalls.len(), 1);
    }

    #[test]
    fn dsf_shared_source_reuses_one_tree() {
        let g = DiGraph::unit(3, vec![(0, 1), (0, 2)]).unwrap();
        let inst = DsfInstance::new(g, vec![(0, 1), (0, 2)]).unwrap();
        let out = dsf_approx(&inst, &RecursiveGreedyConfig::default()).unwrap();
        assert_eq!(out.solution.cost(), Some(2));
        assert_eq!(out.subcalls.len(), 1, "both pairs share one source");
    }

    #[test]
    fn dsf_names_the_disconnected_pair() {
        let g = DiGraph::unit(3, vec![(0, 1)]).unwrap();
        let inst = DsfInstance::new(g, vec![(0, 1), (1, 2)]).unwrap();
        let err = dsf_approx(&inst, &RecursiveGreedyConfig::default()).unwrap_err();
        assert!(matches!(err, SolveError::Infeasible(ref m) if m.contains("from 1 to 2")));
    }

    #[test]
    fn dsf_sweep_connects_every_pair() {
        let cfg = RecursiveGreedyConfig::default();
        for seed in 0..30 {
            let gen = gen_dsf(Family::RandomGnp, 7, 3, 0.35, seed).unwrap();
            let inst = match gen.instance {
                crate::instance::Instance::Dsf(i) => i,
                _ => unreachable!(),
            };
            let out = dsf_approx(&inst, &cfg).unwrap();
            let edges = out.solution.edge_items().unwrap();
            for &(s, t) in inst.pairs() {
                assert!(inst.graph().reachable(s, edges).unwrap().contains(&t));
            }
            let sum: u64 = out.subcalls.iter().map(|s| s.cost).sum();
            assert!(out.solution.cost().unwrap() <= sum);
        }
    }

    #[test]
    fn dsn_single_path_and_diamond() {
        let g = DiGraph::unit(3, vec![(0, 1), (1, 2)]).unwrap();
        let inst =
            DsnInstance::new(g, vec![DsnDemand { source: 0, sink: 2, demand: 1 }]).unwrap();
        let out = dsn_approx(&inst).unwrap();
        assert_eq!(out.solution.cost(), Some(2));

        let g = DiGraph::unit(4, vec![(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let inst =
            DsnInstance::new(g, vec![DsnDemand { source: 0, sink: 3, demand: 2 }]).unwrap();
        let out = dsn_approx(&inst).unwrap();
        assert_eq!(out.solution.cost(), Some(4), "both branches of the diamond are needed");
    }

    #[test]
    fn dsn_sweep_per_pair_cost_below_opt() {
        let budget = OracleBudget::default();
        let mut checked = 0;
        for seed in 0..40 {
            let gen = match gen_dsn(Family::RandomGnp, 6, 2, 2, 0.4, seed) {
                Ok(g) => g,
                Err(_) => continue,
            };
            let inst = match gen.instance {
                crate::instance::Instance::Dsn(i) => i,
                _ => unreachable!(),
            };
            let opt = match opt_edge_subset(&EdgeProblem::Dsn(&inst), &budget) {
                Ok(OracleResult::Optimal { opt, .. }) => opt,
                _ => continue,
            };
            let out = dsn_approx(&inst).unwrap();
            for sub in &out.subcalls {
                assert!(sub.cost <= opt, "a single pair's routing can never beat sharing");
            }
            assert!(out.solution.cost().unwrap() <= inst.pairs().len() as u64 * opt);
            checked += 1;
        }
        assert!(checked >= 10);
    }

    #[test]
    fn mec_small_cases_match_the_oracle() {
        let g = DiGraph::unit(2, vec![(0, 1)]).unwrap();
        let inst = MecInstance::new(g, 1).unwrap();
        let out = mec_approx(&inst).unwrap();
        assert_eq!(out.solution.cost(), Some(2));

        // Star: center 0 with three leaves. All three edges force all four
        // endpoints.
        let g = DiGraph::unit(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap();
        let inst = MecInstance::new(g, 3).unwrap();
        let out = mec_approx(&inst).unwrap();
        assert_eq!(out.solution.cost(), Some(4));
        let opt = crate::oracle::opt_vertex_subset_mec(&inst, &OracleBudget::default())
            .unwrap()
            .opt()
            .unwrap();
        assert_eq!(opt, 4);

        let g = DiGraph::unit(3, vec![(0, 1), (0, 2), (1, 2)]).unwrap();
        let inst = MecInstance::new(g, 3).unwrap();
        let out = mec_approx(&inst).unwrap();
        assert_eq!(out.solution.cost(), Some(3));
        let opt = crate::oracle::opt_vertex_subset_mec(&inst, &OracleBudget::default())
            .unwrap()
            .opt()
            .unwrap();
        assert_eq!(opt, 3);
    }

    #[test]
    fn mec_rejects_short_graphs_and_seeded_variant_holds_bound() {
        let g = DiGraph::unit(3, vec![(0, 1)]).unwrap();
        let inst = MecInstance::new(g, 2).unwrap();
        assert!(matches!(mec_approx(&inst), Err(SolveError::Infeasible(_))));

        let g = DiGraph::unit(
            5,
            vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 4), (2, 3), (3, 4)],
        )
        .unwrap();
        let inst = MecInstance::new(g, 3).unwrap();
        for seed in 0..10 {
            let out = mec_approx_seeded(&inst, seed).unwrap();
            let s = out.solution.vertex_items().unwrap();
            assert!(s.len() as u64 <= 2 * inst.k());
            assert!(inst.induced_edge_count(s) >= inst.k());
            let again = mec_approx_seeded(&inst, seed).unwrap();
            assert_eq!(out.solution, again.solution);
        }
    }

    #[test]
    fn lift_finds_the_smallest_accepting_budget() {
        let inst = bidirected_triangle();
        let out = lift_to_optimum_approx(&ScssFptAlgo, &inst, 16).unwrap();
        assert_eq!(out.first_accepting_k, 2, "cost 4 first fits under 2k at k = 2");
        assert_eq!(out.inner_calls, 2);
        assert_eq!(out.solution.cost(), Some(4));
        // Well under twice the true optimum of 3.
        assert!(out.solution.cost().unwrap() <= 6);
    }

    #[test]
    fn union_cost_counts_shared_edges_once() {
        for seed in 0..20 {
            let gen = gen_scss(Family::RandomGnp, 6, 3, 0.4, seed).unwrap();
            let inst = match gen.instance {
                crate::instance::Instance::Scss(i) => i,
                _ => unreachable!(),
            };
            let out =
                scss_poly(&inst, &RecursiveGreedyConfig::default(), HubChoice::FirstTerminal)
                    .unwrap();
            let mut union = BTreeSet::new();
            for sub in &out.subcalls {
                union.extend(sub.edges.iter().copied());
            }
            assert_eq!(out.solution.edge_items(), Some(&union));
            assert_eq!(out.solution.cost().unwrap(), inst.graph().edge_set_cost(&union));
            assert!(strongly_connects(&inst, &union));
        }
    }
}
