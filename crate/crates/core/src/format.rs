//! Reading and writing instance documents.
//!
//! One JSON document per file, discriminated by `"kind"`. Field names are
//! part of the contract: unknown fields are rejected, as are fields that
//! belong to a different kind.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::ParseError;
use crate::graph::DiGraph;
use crate::instance::{
    DsfInstance, DsnDemand, DsnInstance, DstInstance, Instance, MccInstance, MecInstance,
    ProjectionGame, ScssInstance, SetCoverInstance,
};

const KINDS: &[&str] = &[
    "dst", "scss", "dsf", "dsn", "mec", "setcover", "projgame", "mcc",
];

/// An edge entry: `[u, v]` (weight 1) or `[u, v, w]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RawEdge {
    Weighted(usize, usize, u64),
    Unit(usize, usize),
}

impl RawEdge {
    fn weighted(&self) -> (usize, usize, u64) {
        match *self {
            RawEdge::Weighted(u, v, w) => (u, v, w),
            RawEdge::Unit(u, v) => (u, v, 1),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    kind: String,
    n: Option<usize>,
    edges: Option<Vec<RawEdge>>,
    terminals: Option<Vec<usize>>,
    pairs: Option<Vec<(usize, usize)>>,
    demands: Option<Vec<u32>>,
    k: Option<u64>,
    p: Option<u64>,
    root: Option<usize>,
    sets: Option<Vec<Vec<usize>>>,
    labels: Option<Vec<String>>,
    v1: Option<usize>,
    v2: Option<usize>,
    sigma: Option<usize>,
    pi: Option<Vec<(usize, Vec<usize>)>>,
    colors: Option<Vec<usize>>,
}

#[derive(Deserialize)]
struct KindProbe {
    kind: Option<String>,
}

fn syntax_error(e: serde_json::Error) -> ParseError {
    let (line, column) = (e.line(), e.column());
    let mut message = e.to_string();
    // serde_json appends its own position; we carry it structurally.
    if let Some(idx) = message.rfind(" at line ") {
        message.truncate(idx);
    }
    ParseError::Syntax { line, column, message }
}

fn data_error(e: serde_json::Error, kind: &str) -> ParseError {
    let message = e.to_string();
    if let Some(rest) = message.strip_prefix("unknown field `") {
        if let Some(end) = rest.find('`') {
            return ParseError::UnexpectedField {
                field: rest[..end].to_string(),
                kind: kind.to_string(),
            };
        }
    }
    syntax_error(e)
}

fn require<T>(opt: Option<T>, field: &str, kind: &str) -> Result<T, ParseError> {
    opt.ok_or_else(|| ParseError::MissingField {
        field: field.to_string(),
        kind: kind.to_string(),
    })
}

fn forbid<T>(opt: &Option<T>, field: &str, kind: &str) -> Result<(), ParseError> {
    if opt.is_some() {
        return Err(ParseError::UnexpectedField {
            field: field.to_string(),
            kind: kind.to_string(),
        });
    }
    Ok(())
}

fn weighted_edges(raw: Vec<RawEdge>) -> Vec<(usize, usize, u64)> {
    raw.iter().map(RawEdge::weighted).collect()
}

fn unit_edges(raw: Vec<RawEdge>, kind: &str) -> Result<Vec<(usize, usize)>, ParseError> {
    raw.into_iter()
        .map(|e| match e {
            RawEdge::Unit(u, v) => Ok((u, v)),
            RawEdge::Weighted(..) => Err(ParseError::field(
                "edges",
                format!("{kind} edges are unweighted pairs [a, b]"),
            )),
        })
        .collect()
}

/// Parse one instance document.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let probe: KindProbe = serde_json::from_str(text).map_err(syntax_error)?;
    let kind = probe
        .kind
        .ok_or_else(|| ParseError::field("kind", "missing discriminator"))?;
    if !KINDS.contains(&kind.as_str()) {
        return Err(ParseError::UnknownKind { kind });
    }
    let raw: RawInstance = serde_json::from_str(text).map_err(|e| data_error(e, &kind))?;
    debug_assert_eq!(raw.kind, kind);

    // Fields used by some other kind are rejected, not ignored.
    if kind != "scss" && kind != "mcc" {
        forbid(&raw.p, "p", &kind)?;
    }
    if kind != "dst" {
        forbid(&raw.root, "root", &kind)?;
        if kind != "scss" {
            forbid(&raw.terminals, "terminals", &kind)?;
        }
    }
    if kind != "dsf" && kind != "dsn" {
        forbid(&raw.pairs, "pairs", &kind)?;
    }
    if kind != "dsn" {
        forbid(&raw.demands, "demands", &kind)?;
    }
    if kind != "mec" {
        forbid(&raw.k, "k", &kind)?;
    }
    if kind != "setcover" {
        forbid(&raw.sets, "sets", &kind)?;
        forbid(&raw.labels, "labels", &kind)?;
    }
    if kind != "projgame" {
        forbid(&raw.v1, "v1", &kind)?;
        forbid(&raw.v2, "v2", &kind)?;
        forbid(&raw.sigma, "sigma", &kind)?;
        forbid(&raw.pi, "pi", &kind)?;
    }
    if kind != "mcc" {
        forbid(&raw.colors, "colors", &kind)?;
    }
    if kind == "projgame" {
        forbid(&raw.n, "n", &kind)?;
    }

    let instance = match kind.as_str() {
        "dst" => {
            let n = require(raw.n, "n", &kind)?;
            let edges = weighted_edges(require(raw.edges, "edges", &kind)?);
            let root = require(raw.root, "root", &kind)?;
            let terminals: BTreeSet<usize> =
                require(raw.terminals, "terminals", &kind)?.into_iter().collect();
            let g = DiGraph::new(n, edges)?;
            Instance::Dst(DstInstance::new(g, root, terminals)?)
        }
        "scss" => {
            let n = require(raw.n, "n", &kind)?;
            let edges = weighted_edges(require(raw.edges, "edges", &kind)?);
            let terminals = require(raw.terminals, "terminals", &kind)?;
            let g = DiGraph::new(n, edges)?;
            Instance::Scss(ScssInstance::new(g, terminals, raw.p)?)
        }
        "dsf" => {
            let n = require(raw.n, "n", &kind)?;
            let edges = weighted_edges(require(raw.edges, "edges", &kind)?);
            let pairs = require(raw.pairs, "pairs", &kind)?;
            let g = DiGraph::new(n, edges)?;
            Instance::Dsf(DsfInstance::new(g, pairs)?)
        }
        "dsn" => {
            let n = require(raw.n, "n", &kind)?;
            let edges = weighted_edges(require(raw.edges, "edges", &kind)?);
            let pairs = require(raw.pairs, "pairs", &kind)?;
            let demands = require(raw.demands, "demands", &kind)?;
            if demands.len() != pairs.len() {
                return Err(ParseError::field(
                    "demands",
                    format!("{} demands for {} pairs", demands.len(), pairs.len()),
                ));
            }
            let g = DiGraph::new(n, edges)?;
            let pairs = pairs
                .into_iter()
                .zip(demands)
                .map(|((source, sink), demand)| DsnDemand { source, sink, demand })
                .collect();
            Instance::Dsn(DsnInstance::new(g, pairs)?)
        }
        "mec" => {
            let n = require(raw.n, "n", &kind)?;
            let edges = weighted_edges(require(raw.edges, "edges", &kind)?);
            let k = require(raw.k, "k", &kind)?;
            let g = DiGraph::new(n, edges)?;
            Instance::Mec(MecInstance::new(g, k)?)
        }
        "setcover" => {
            let n = require(raw.n, "n", &kind)?;
            forbid(&raw.edges, "edges", &kind)?;
            let sets: Vec<BTreeSet<usize>> = require(raw.sets, "sets", &kind)?
                .into_iter()
                .map(|s| s.into_iter().collect())
                .collect();
            Instance::SetCover(SetCoverInstance::new(n, sets, raw.labels)?)
        }
        "projgame" => {
            let v1 = require(raw.v1, "v1", &kind)?;
            let v2 = require(raw.v2, "v2", &kind)?;
            let sigma = require(raw.sigma, "sigma", &kind)?;
            let edges = unit_edges(require(raw.edges, "edges", &kind)?, &kind)?;
            let pi = require(raw.pi, "pi", &kind)?;
            if pi.len() != edges.len() {
                return Err(ParseError::field(
                    "pi",
                    format!("{} tables for {} edges", pi.len(), edges.len()),
                ));
            }
            let mut tables = vec![None; edges.len()];
            for (idx, table) in pi {
                if idx >= edges.len() {
                    return Err(ParseError::field(
                        "pi",
                        format!("edge index {idx} out of range ({} edges)", edges.len()),
                    ));
                }
                if tables[idx].replace(table).is_some() {
                    return Err(ParseError::field("pi", format!("duplicate table for edge {idx}")));
                }
            }
            let tables = tables.into_iter().map(Option::unwrap).collect();
            Instance::ProjGame(ProjectionGame::new(v1, v2, sigma, edges, tables)?)
        }
        "mcc" => {
            let n = require(raw.n, "n", &kind)?;
            let edges = weighted_edges(require(raw.edges, "edges", &kind)?);
            let colors = require(raw.colors, "colors", &kind)?;
            let p = require(raw.p, "p", &kind)? as usize;
            let g = DiGraph::new(n, edges)?;
            Instance::Mcc(MccInstance::new(g, colors, p)?)
        }
        _ => unreachable!("kind membership checked above"),
    };
    Ok(instance)
}

fn edge_triples(g: &DiGraph) -> Vec<(usize, usize, u64)> {
    g.edges().iter().map(|e| (e.tail, e.head, e.weight)).collect()
}

#[derive(Serialize)]
struct DstDoc {
    kind: &'static str,
    n: usize,
    edges: Vec<(usize, usize, u64)>,
    root: usize,
    terminals: Vec<usize>,
}

#[derive(Serialize)]
struct ScssDoc {
    kind: &'static str,
    n: usize,
    edges: Vec<(usize, usize, u64)>,
    terminals: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<u64>,
}

#[derive(Serialize)]
struct DsfDoc {
    kind: &'static str,
    n: usize,
    edges: Vec<(usize, usize, u64)>,
    pairs: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct DsnDoc {
    kind: &'static str,
    n: usize,
    edges: Vec<(usize, usize, u64)>,
    pairs: Vec<(usize, usize)>,
    demands: Vec<u32>,
}

#[derive(Serialize)]
struct MecDoc {
    kind: &'static str,
    n: usize,
    edges: Vec<(usize, usize, u64)>,
    k: u64,
}

#[derive(Serialize)]
struct SetCoverDoc {
    kind: &'static str,
    n: usize,
    sets: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

#[derive(Serialize)]
struct ProjGameDoc {
    kind: &'static str,
    v1: usize,
    v2: usize,
    sigma: usize,
    edges: Vec<(usize, usize)>,
    pi: Vec<(usize, Vec<usize>)>,
}

#[derive(Serialize)]
struct MccDoc {
    kind: &'static str,
    n: usize,
    edges: Vec<(usize, usize, u64)>,
    colors: Vec<usize>,
    p: u64,
}

/// Serialize an instance to its canonical single-line document.
///
/// Canonical means: fixed field order, explicit weights, sorted set-valued
/// fields, one trailing newline. Equal instances serialize byte-identically.
pub fn serialize_instance(inst: &Instance) -> String {
    let body = match inst {
        Instance::Dst(i) => serde_json::to_string(&DstDoc {
            kind: "dst",
            n: i.graph().vertex_count(),
            edges: edge_triples(i.graph()),
            root: i.root(),
            terminals: i.terminals().iter().copied().collect(),
        }),
        Instance::Scss(i) => serde_json::to_string(&ScssDoc {
            kind: "scss",
            n: i.graph().vertex_count(),
            edges: edge_triples(i.graph()),
            terminals: i.terminals().to_vec(),
            p: i.p(),
        }),
        Instance::Dsf(i) => serde_json::to_string(&DsfDoc {
            kind: "dsf",
            n: i.graph().vertex_count(),
            edges: edge_triples(i.graph()),
            pairs: i.pairs().to_vec(),
        }),
        Instance::Dsn(i) => serde_json::to_string(&DsnDoc {
            kind: "dsn",
            n: i.graph().vertex_count(),
            edges: edge_triples(i.graph()),
            pairs: i.pairs().iter().map(|d| (d.source, d.sink)).collect(),
            demands: i.pairs().iter().map(|d| d.demand).collect(),
        }),
        Instance::Mec(i) => serde_json::to_string(&MecDoc {
            kind: "mec",
            n: i.graph().vertex_count(),
            edges: edge_triples(i.graph()),
            k: i.k(),
        }),
        Instance::SetCover(i) => serde_json::to_string(&SetCoverDoc {
            kind: "setcover",
            n: i.universe_size(),
            sets: i.sets().iter().map(|s| s.iter().copied().collect()).collect(),
            labels: i.labels().map(|l| l.to_vec()),
        }),
        Instance::ProjGame(i) => serde_json::to_string(&ProjGameDoc {
            kind: "projgame",
            v1: i.v1(),
            v2: i.v2(),
            sigma: i.sigma(),
            edges: i.edges().to_vec(),
            pi: (0..i.edges().len()).map(|e| (e, i.table(e).to_vec())).collect(),
        }),
        Instance::Mcc(i) => serde_json::to_string(&MccDoc {
            kind: "mcc",
            n: i.graph().vertex_count(),
            edges: edge_triples(i.graph()),
            colors: i.colors().to_vec(),
            p: i.p() as u64,
        }),
    };
    let mut s = body.expect("instance serialization is infallible");
    s.push('\n');
    s
}
