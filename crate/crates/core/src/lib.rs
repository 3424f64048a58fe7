//! Desk-scale toolkit for parameterized approximation on directed
//! connectivity problems: exact oracles, approximation algorithms with
//! certified ratio bounds, and the reductions connecting them.

pub mod approx;
pub mod dst;
pub mod error;
pub mod flow;
pub mod format;
pub mod fpt;
pub mod generate;
pub mod graph;
pub mod instance;
pub mod oracle;
pub mod reductions;

pub use approx::{
    dsf_approx, dsn_approx, mec_approx, mec_approx_seeded, scss_fpt, scss_poly, ApproxOutcome,
    HubChoice, ScssFptAlgo, Subcall,
};
pub use dst::{dst_exact, dst_recursive_greedy, RecursiveGreedyConfig};
pub use error::{
    GenError, GraphError, LiftError, OracleError, ParseError, ReductionError, SolveError,
};
pub use flow::min_cost_disjoint_paths;
pub use format::{parse_instance, serialize_instance};
pub use fpt::{check_rho_shape, lift_to_optimum_approx, FptApprox, Goal, LiftOutcome, Normalized};
pub use graph::{DiGraph, Edge};
pub use instance::{
    DsfInstance, DsnDemand, DsnInstance, DstInstance, Instance, MccInstance, MecInstance,
    ProjectionGame, ScssInstance, SetCoverInstance, Solution,
};
pub use oracle::OracleBudget;
pub use reductions::{
    build_set_system, greedy_set_cover, labeling_to_cover, mcc_to_mec, projgame_to_setcover,
    scss_to_dsf, SetSystem,
};
