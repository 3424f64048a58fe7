//! Seeded instance generators for the small-instance corpus.
//!
//! Every generator is a pure function of its parameters and seed. Graph
//! kinds that need feasibility (reaching terminals, meeting demands) get a
//! solution planted into the graph; its cost is reported as an upper bound
//! on the optimum so callers can sanity-check oracles against it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GenError;
use crate::graph::DiGraph;
use crate::instance::{
    DsfInstance, DsnDemand, DsnInstance, DstInstance, Instance, MccInstance, MecInstance,
    ProjectionGame, ScssInstance, SetCoverInstance,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    RandomGnp,
    LayeredDag,
    BidirectedRing,
    CliqueLike,
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "random_gnp" => Ok(Family::RandomGnp),
            "layered_dag" => Ok(Family::LayeredDag),
            "bidirected_ring" => Ok(Family::BidirectedRing),
            "clique_like" => Ok(Family::CliqueLike),
            other => Err(format!(
                "unknown family \"{other}\" (expected random_gnp, layered_dag, bidirected_ring, clique_like)"
            )),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::RandomGnp => "random_gnp",
            Family::LayeredDag => "layered_dag",
            Family::BidirectedRing => "bidirected_ring",
            Family::CliqueLike => "clique_like",
        };
        f.write_str(s)
    }
}

/// A generated instance, with the planted solution's cost when the
/// generator guaranteed feasibility by construction.
#[derive(Debug, Clone)]
pub struct Generated {
    pub instance: Instance,
    pub planted_cost: Option<u64>,
}

fn check_density(density: f64) -> Result<(), GenError> {
    if !(0.0..=1.0).contains(&density) || density.is_nan() {
        return Err(GenError::Infeasible(format!("density {density} not in [0, 1]")));
    }
    Ok(())
}

fn check_pair_graph(n: usize) -> Result<(), GenError> {
    if n < 2 {
        return Err(GenError::Infeasible(format!(
            "n = {n}: pair problems need at least 2 vertices"
        )));
    }
    Ok(())
}

fn unsupported(family: Family, kind: &str) -> GenError {
    GenError::Infeasible(format!("family {family} does not generate {kind} instances"))
}

fn gnp_arcs(rng: &mut ChaCha8Rng, n: usize, density: f64) -> BTreeSet<(usize, usize)> {
    let mut arcs = BTreeSet::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.random_bool(density) {
                arcs.insert((u, v));
            }
        }
    }
    arcs
}

fn gnp_undirected(rng: &mut ChaCha8Rng, n: usize, density: f64) -> BTreeSet<(usize, usize)> {
    let mut arcs = BTreeSet::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random_bool(density) {
                arcs.insert((u, v));
            }
        }
    }
    arcs
}

fn ring_arcs(n: usize) -> BTreeSet<(usize, usize)> {
    let mut arcs = BTreeSet::new();
    for i in 0..n {
        let j = (i + 1) % n;
        arcs.insert((i, j));
        arcs.insert((j, i));
    }
    arcs
}

fn build_unit(n: usize, arcs: &BTreeSet<(usize, usize)>) -> Result<DiGraph, GenError> {
    Ok(DiGraph::unit(n, arcs.iter().copied().collect())?)
}

fn planted_cost(graph: &DiGraph, planted: &BTreeSet<(usize, usize)>) -> u64 {
    let index: BTreeMap<(usize, usize), usize> = graph
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| ((e.tail, e.head), i))
        .collect();
    let set: BTreeSet<usize> = planted.iter().map(|a| index[a]).collect();
    graph.edge_set_cost(&set)
}

fn sample_distinct(rng: &mut ChaCha8Rng, range: usize, count: usize) -> Vec<usize> {
    sample(rng, range, count).into_vec()
}

/// A ring path walking clockwise (increasing ids, wrapping) from `s` to `t`.
fn ring_clockwise(n: usize, s: usize, t: usize) -> Vec<(usize, usize)> {
    let mut arcs = Vec::new();
    let mut v = s;
    while v != t {
        let w = (v + 1) % n;
        arcs.push((v, w));
        v = w;
    }
    arcs
}

fn ring_counterclockwise(n: usize, s: usize, t: usize) -> Vec<(usize, usize)> {
    let mut arcs = Vec::new();
    let mut v = s;
    while v != t {
        let w = (v + n - 1) % n;
        arcs.push((v, w));
        v = w;
    }
    arcs
}

pub fn gen_dst(
    family: Family,
    n: usize,
    terminals: usize,
    density: f64,
    seed: u64,
) -> Result<Generated, GenError> {
    check_pair_graph(n)?;
    check_density(density)?;
    if terminals == 0 || terminals > n - 1 {
        return Err(GenError::Infeasible(format!(
            "need 1 <= terminals <= n-1 = {} (root occupies vertex 0), got {terminals}",
            n - 1
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let root = 0usize;
    let (arcs, planted, term_set) = match family {
        Family::RandomGnp => {
            let terms: Vec<usize> = sample_distinct(&mut rng, n - 1, terminals)
                .into_iter()
                .map(|v| v + 1)
                .collect();
            let mut arcs = gnp_arcs(&mut rng, n, density);
            let mut planted = BTreeSet::new();
            for &t in &terms {
                planted.insert((root, t));
            }
            arcs.extend(planted.iter().copied());
            (arcs, planted, terms)
        }
        Family::LayeredDag => {
            // Root alone in layer 0, then a middle and a final layer.
            let mid_count = (n - 1) / 2;
            let middle: Vec<usize> = (1..=mid_count).collect();
            let last: Vec<usize> = (mid_count + 1..n).collect();
            if terminals > last.len() {
                return Err(GenError::Infeasible(format!(
                    "layered_dag with n = {n} has only {} final-layer vertices for {terminals} terminals",
                    last.len()
                )));
            }
            let terms: Vec<usize> = sample_distinct(&mut rng, last.len(), terminals)
                .into_iter()
                .map(|i| last[i])
                .collect();
            let mut arcs = BTreeSet::new();
            for &u in &middle {
                if rng.random_bool(density) {
                    arcs.insert((root, u));
                }
            }
            for &u in &middle {
                for &v in &last {
                    if rng.random_bool(density) {
                        arcs.insert((u, v));
                    }
                }
            }
            let mut planted = BTreeSet::new();
            for &t in &terms {
                if middle.is_empty() {
                    planted.insert((root, t));
                } else {
                    let hop = middle[rng.random_range(0..middle.len())];
                    planted.insert((root, hop));
                    planted.insert((hop, t));
                }
            }
            arcs.extend(planted.iter().copied());
            (arcs, planted, terms)
        }
        Family::BidirectedRing => {
            let terms: Vec<usize> = sample_distinct(&mut rng, n - 1, terminals)
                .into_iter()
                .map(|v| v + 1)
                .collect();
            let arcs = ring_arcs(n);
            let far = *terms.iter().max().expect("terminals nonempty");
            let planted: BTreeSet<(usize, usize)> =
                ring_clockwise(n, root, far).into_iter().collect();
            (arcs, planted, terms)
        }
        Family::CliqueLike => return Err(unsupported(family, "dst")),
    };
    let graph = build_unit(n, &arcs)?;
    let cost = planted_cost(&graph, &planted);
    let inst = DstInstance::new(graph, root, term_set.into_iter().collect())?;
    Ok(Generated { instance: Instance::Dst(inst), planted_cost: Some(cost) })
}

pub fn gen_scss(
    family: Family,
    n: usize,
    terminals: usize,
    density: f64,
    seed: u64,
) -> Result<Generated, GenError> {
    check_pair_graph(n)?;
    check_density(density)?;
    if terminals < 2 || terminals > n {
        return Err(GenError::Infeasible(format!(
            "need 2 <= terminals <= n = {n}, got {terminals}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms = sample_distinct(&mut rng, n, terminals);
    let (arcs, planted) = match family {
        Family::RandomGnp => {
            let mut arcs = gnp_arcs(&mut rng, n, density);
            let mut planted = BTreeSet::new();
            for i in 0..terms.len() {
                let a = terms[i];
                let b = terms[(i + 1) % terms.len()];
                planted.insert((a, b));
            }
            arcs.extend(planted.iter().copied());
            (arcs, planted)
        }
        Family::BidirectedRing => {
            let arcs = ring_arcs(n);
            (arcs.clone(), arcs)
        }
        Family::LayeredDag | Family::CliqueLike => return Err(unsupported(family, "scss")),
    };
    let graph = build_unit(n, &arcs)?;
    let cost = planted_cost(&graph, &planted);
    let inst = ScssInstance::new(graph, terms, None)?;
    Ok(Generated { instance: Instance::Scss(inst), planted_cost: Some(cost) })
}

fn sample_pairs(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Result<Vec<(usize, usize)>, GenError> {
    let total = n * (n - 1);
    if count == 0 || count > total {
        return Err(GenError::Infeasible(format!(
            "need 1 <= pairs <= n(n-1) = {total}, got {count}"
        )));
    }
    let picked = sample_distinct(rng, total, count);
    Ok(picked
        .into_iter()
        .map(|i| {
            let s = i / (n - 1);
            let r = i % (n - 1);
            let t = if r < s { r } else { r + 1 };
            (s, t)
        })
        .collect())
}

pub fn gen_dsf(
    family: Family,
    n: usize,
    pairs: usize,
    density: f64,
    seed: u64,
) -> Result<Generated, GenError> {
    check_pair_graph(n)?;
    check_density(density)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pair_list = sample_pairs(&mut rng, n, pairs)?;
    let (arcs, planted) = match family {
        Family::RandomGnp => {
            let mut arcs = gnp_arcs(&mut rng, n, density);
            let planted: BTreeSet<(usize, usize)> = pair_list.iter().copied().collect();
            arcs.extend(planted.iter().copied());
            (arcs, planted)
        }
        Family::BidirectedRing => {
            let arcs = ring_arcs(n);
            let mut planted = BTreeSet::new();
            for &(s, t) in &pair_list {
                planted.extend(ring_clockwise(n, s, t));
            }
            (arcs, planted)
        }
        Family::LayeredDag | Family::CliqueLike => return Err(unsupported(family, "dsf")),
    };
    let graph = build_unit(n, &arcs)?;
    let cost = planted_cost(&graph, &planted);
    let inst = DsfInstance::new(graph, pair_list)?;
    Ok(Generated { instance: Instance::Dsf(inst), planted_cost: Some(cost) })
}

pub fn gen_dsn(
    family: Family,
    n: usize,
    pairs: usize,
    max_demand: u32,
    density: f64,
    seed: u64,
) -> Result<Generated, GenError> {
    check_pair_graph(n)?;
    check_density(density)?;
    if max_demand < 1 {
        return Err(GenError::Infeasible("max_demand must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pair_list = sample_pairs(&mut rng, n, pairs)?;
    let demands: Vec<u32> = pair_list
        .iter()
        .map(|_| rng.random_range(1..=max_demand))
        .collect();
    let (arcs, planted) = match family {
        Family::RandomGnp => {
            let mut arcs = gnp_arcs(&mut rng, n, density);
            let mut planted = BTreeSet::new();
            for (&(s, t), &d) in pair_list.iter().zip(&demands) {
                // One direct arc plus, per extra unit of demand, a two-hop
                // route through its own intermediate vertex; the routes are
                // pairwise edge-disjoint by construction.
                planted.insert((s, t));
                if d > 1 {
                    let extra = (d - 1) as usize;
                    let others: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
                    if others.len() < extra {
                        return Err(GenError::Infeasible(format!(
                            "demand {d} between ({s}, {t}) needs {extra} intermediates, n = {n} is too small"
                        )));
                    }
                    for i in sample_distinct(&mut rng, others.len(), extra) {
                        let w = others[i];
                        planted.insert((s, w));
                        planted.insert((w, t));
                    }
                }
            }
            arcs.extend(planted.iter().copied());
            (arcs, planted)
        }
        Family::BidirectedRing => {
            let arcs = ring_arcs(n);
            let mut planted = BTreeSet::new();
            for (&(s, t), &d) in pair_list.iter().zip(&demands) {
                match d {
                    1 => planted.extend(ring_clockwise(n, s, t)),
                    2 if n >= 3 => {
                        planted.extend(ring_clockwise(n, s, t));
                        planted.extend(ring_counterclockwise(n, s, t));
                    }
                    _ => {
                        return Err(GenError::Infeasible(format!(
                            "a ring on {n} vertices cannot carry demand {d}"
                        )))
                    }
                }
            }
            (arcs, planted)
        }
        Family::LayeredDag | Family::CliqueLike => return Err(unsupported(family, "dsn")),
    };
    let graph = build_unit(n, &arcs)?;
    let cost = planted_cost(&graph, &planted);
    let pair_demands = pair_list
        .into_iter()
        .zip(demands)
        .map(|((source, sink), demand)| DsnDemand { source, sink, demand })
        .collect();
    let inst = DsnInstance::new(graph, pair_demands)?;
    Ok(Generated { instance: Instance::Dsn(inst), planted_cost: Some(cost) })
}

/// Smallest q with q·(q−1)/2 ≥ k.
fn clique_size_for(k: u64) -> usize {
    let mut q = 1usize;
    while (q as u64) * (q as u64 - 1) / 2 < k {
        q += 1;
    }
    q
}

pub fn gen_mec(
    family: Family,
    n: usize,
    k: Option<u64>,
    density: f64,
    seed: u64,
) -> Result<Generated, GenError> {
    check_pair_graph(n)?;
    check_density(density)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = k.unwrap_or_else(|| {
        let q = n.min(3) as u64;
        q * (q - 1) / 2
    });
    if k < 1 {
        return Err(GenError::Infeasible("k must be >= 1".into()));
    }
    let q = match family {
        Family::RandomGnp => clique_size_for(k),
        Family::CliqueLike => clique_size_for(k).max(n.div_ceil(2)),
        Family::LayeredDag | Family::BidirectedRing => return Err(unsupported(family, "mec")),
    };
    if q > n {
        return Err(GenError::Infeasible(format!(
            "k = {k} needs a planted clique on {q} vertices, n = {n} is too small"
        )));
    }
    let clique = sample_distinct(&mut rng, n, q);
    let mut arcs = gnp_undirected(&mut rng, n, density);
    for i in 0..clique.len() {
        for j in (i + 1)..clique.len() {
            let (a, b) = (clique[i].min(clique[j]), clique[i].max(clique[j]));
            arcs.insert((a, b));
        }
    }
    let graph = build_unit(n, &arcs)?;
    let inst = MecInstance::new(graph, k)?;
    Ok(Generated { instance: Instance::Mec(inst), planted_cost: Some(q as u64) })
}

pub fn gen_mcc(
    family: Family,
    n: usize,
    p: usize,
    density: f64,
    seed: u64,
) -> Result<Generated, GenError> {
    check_pair_graph(n)?;
    check_density(density)?;
    if family != Family::RandomGnp {
        return Err(unsupported(family, "mcc"));
    }
    if p < 1 || p > n {
        return Err(GenError::Infeasible(format!("need 1 <= p <= n = {n}, got {p}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let colors: Vec<usize> = (0..n).map(|v| v % p).collect();
    // Same-color vertices stay non-adjacent so that any p-vertex set inducing
    // p(p-1)/2 edges is exactly a multicolored clique.
    let mut arcs = BTreeSet::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if colors[u] != colors[v] && rng.random_bool(density) {
                arcs.insert((u, v));
            }
        }
    }
    let mut chosen = Vec::with_capacity(p);
    for c in 0..p {
        let class: Vec<usize> = (0..n).filter(|&v| colors[v] == c).collect();
        chosen.push(class[rng.random_range(0..class.len())]);
    }
    for i in 0..chosen.len() {
        for j in (i + 1)..chosen.len() {
            let (a, b) = (chosen[i].min(chosen[j]), chosen[i].max(chosen[j]));
            arcs.insert((a, b));
        }
    }
    let graph = build_unit(n, &arcs)?;
    let inst = MccInstance::new(graph, colors, p)?;
    Ok(Generated { instance: Instance::Mcc(inst), planted_cost: Some(p as u64) })
}

pub fn gen_setcover(
    universe: usize,
    sets: usize,
    density: f64,
    seed: u64,
) -> Result<Generated, GenError> {
    check_density(density)?;
    if universe < 1 || sets < 1 {
        return Err(GenError::Infeasible("need a nonempty universe and at least one set".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut family: Vec<BTreeSet<usize>> = (0..sets)
        .map(|_| (0..universe).filter(|_| rng.random_bool(density)).collect())
        .collect();
    for e in 0..universe {
        if !family.iter().any(|s| s.contains(&e)) {
            let i = rng.random_range(0..sets);
            family[i].insert(e);
        }
    }
    let inst = SetCoverInstance::new(universe, family, None)?;
    Ok(Generated { instance: Instance::SetCover(inst), planted_cost: None })
}

/// Build a projection game that a hidden labeling fully satisfies; the
/// labeling (left vertices first, then right) is returned beside the game.
pub fn satisfiable_projgame(
    v1: usize,
    v2: usize,
    sigma: usize,
    edge_prob: f64,
    seed: u64,
) -> Result<(ProjectionGame, Vec<usize>), GenError> {
    check_density(edge_prob)?;
    if v1 < 1 || v2 < 1 || sigma < 1 {
        return Err(GenError::Infeasible("need v1, v2, sigma all >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labeling: Vec<usize> = (0..v1 + v2).map(|_| rng.random_range(0..sigma)).collect();
    let mut edges = Vec::new();
    for a in 0..v1 {
        for b in 0..v2 {
            if rng.random_bool(edge_prob) {
                edges.push((a, b));
            }
        }
    }
    if edges.is_empty() {
        edges.push((0, 0));
    }
    let tables: Vec<Vec<usize>> = edges
        .iter()
        .map(|&(a, b)| {
            (0..sigma)
                .map(|x| {
                    if x == labeling[a] {
                        labeling[v1 + b]
                    } else {
                        rng.random_range(0..sigma)
                    }
                })
                .collect()
        })
        .collect();
    let game = ProjectionGame::new(v1, v2, sigma, edges, tables)
        .map_err(|e| GenError::Infeasible(e.to_string()))?;
    Ok((game, labeling))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::serialize_instance;

    #[test]
    fn ring_scss_with_all_terminals_plants_both_directions() {
        let g = gen_scss(Family::BidirectedRing, 4, 4, 0.0, 1).unwrap();
        assert_eq!(g.planted_cost, Some(8));
        match g.instance {
            Instance::Scss(i) => assert_eq!(i.graph().edge_count(), 8),
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn tiny_graphs_are_rejected() {
        assert!(gen_scss(Family::RandomGnp, 1, 1, 0.5, 0).is_err());
        assert!(gen_dst(Family::RandomGnp, 1, 1, 0.5, 0).is_err());
    }

    #[test]
    fn same_seed_serializes_identically() {
        for seed in 0..10 {
            let a = gen_dsf(Family::RandomGnp, 7, 3, 0.4, seed).unwrap();
            let b = gen_dsf(Family::RandomGnp, 7, 3, 0.4, seed).unwrap();
            assert_eq!(
                serialize_instance(&a.instance),
                serialize_instance(&b.instance)
            );
            assert_eq!(a.planted_cost, b.planted_cost);
        }
    }

    #[test]
    fn dsn_plants_disjoint_routes() {
        let g = gen_dsn(Family::RandomGnp, 6, 2, 2, 0.2, 7).unwrap();
        match g.instance {
            Instance::Dsn(i) => {
                for d in i.pairs() {
                    assert!(d.demand >= 1 && d.demand <= 2);
                }
            }
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn ring_demand_two_needs_three_vertices() {
        // On 2 vertices both ring arcs form a single s->t path.
        let r = gen_dsn(Family::BidirectedRing, 2, 1, 2, 0.0, 3);
        // Demand is sampled; try seeds until one asks for 2, then expect failure.
        let mut saw_failure = false;
        for seed in 0..32 {
            match gen_dsn(Family::BidirectedRing, 2, 1, 2, 0.0, seed) {
                Err(_) => saw_failure = true,
                Ok(g) => match g.instance {
                    Instance::Dsn(i) => assert!(i.pairs().iter().all(|d| d.demand == 1)),
                    _ => panic!("wrong kind"),
                },
            }
        }
        assert!(saw_failure || r.is_ok());
        assert!(gen_dsn(Family::BidirectedRing, 4, 1, 2, 0.0, 3).is_ok());
    }

    #[test]
    fn mec_plants_a_big_enough_clique() {
        let g = gen_mec(Family::RandomGnp, 6, Some(6), 0.1, 5).unwrap();
        assert_eq!(g.planted_cost, Some(4));
        match g.instance {
            Instance::Mec(i) => {
                assert!(i.graph().edge_count() as u64 >= 6);
                assert_eq!(i.k(), 6);
            }
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn mcc_keeps_color_classes_independent() {
        let g = gen_mcc(Family::RandomGnp, 8, 3, 0.6, 11).unwrap();
        match g.instance {
            Instance::Mcc(i) => {
                for e in i.graph().edges() {
                    assert_ne!(i.colors()[e.tail], i.colors()[e.head]);
                }
            }
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn setcover_generator_always_coverable() {
        for seed in 0..20 {
            let g = gen_setcover(6, 4, 0.3, seed).unwrap();
            match g.instance {
                Instance::SetCover(i) => {
                    let union: BTreeSet<usize> =
                        i.sets().iter().flat_map(|s| s.iter().copied()).collect();
                    assert_eq!(union.len(), i.universe_size());
                }
                _ => panic!("wrong kind"),
            }
        }
    }

    #[test]
    fn projgame_generator_is_satisfiable() {
        for seed in 0..20 {
            let (game, labeling) = satisfiable_projgame(3, 2, 3, 0.5, seed).unwrap();
            assert_eq!(game.satisfied_count(&labeling), game.edges().len());
            assert!(!game.edges().is_empty());
        }
    }

    #[test]
    fn round_trip_identity_on_generated_instances() {
        use crate::format::parse_instance;
        for seed in 0..50 {
            let g = match seed % 5 {
                0 => gen_dst(Family::RandomGnp, 6, 2, 0.3, seed).unwrap(),
                1 => gen_scss(Family::RandomGnp, 6, 3, 0.3, seed).unwrap(),
                2 => gen_dsf(Family::BidirectedRing, 5, 2, 0.0, seed).unwrap(),
                3 => gen_dsn(Family::RandomGnp, 6, 2, 2, 0.3, seed).unwrap(),
                4 => gen_mec(Family::CliqueLike, 6, None, 0.2, seed).unwrap(),
                _ => unreachable!(),
            };
            let text = serialize_instance(&g.instance);
            assert_eq!(parse_instance(&text).unwrap(), g.instance);
        }
    }
}
