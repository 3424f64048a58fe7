//! Python bindings over the core crate: parse/serialize/generate
//! instances, run the solvers and oracles, lift a certified algorithm to
//! an optimum approximation, and apply the reductions.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use paramx_core::approx::{
    dsf_approx, dsn_approx, mec_approx, mec_approx_seeded, scss_fpt, scss_poly, ApproxOutcome,
    HubChoice, ScssFptAlgo,
};
use paramx_core::dst::{dst_exact, dst_recursive_greedy, RecursiveGreedyConfig};
use paramx_core::error::SolveError;
use paramx_core::fpt::lift_to_optimum_approx;
use paramx_core::generate::{
    gen_dsf, gen_dsn, gen_dst, gen_mcc, gen_mec, gen_scss, gen_setcover, satisfiable_projgame,
    Family,
};
use paramx_core::instance::{Instance, Solution};
use paramx_core::oracle::{
    opt_edge_subset, opt_set_cover, opt_vertex_subset_mec, CoverResult, EdgeProblem, OracleBudget,
    OracleResult,
};
use paramx_core::reductions::{
    build_set_system, greedy_set_cover as core_greedy_set_cover, mcc_to_mec, projgame_to_setcover,
    scss_to_dsf,
};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_err(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

/// A problem instance in any of the supported kinds.
#[pyclass(name = "Instance", frozen)]
struct PyInstance {
    inner: Instance,
}

#[pymethods]
impl PyInstance {
    /// Parse the canonical JSON text form.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<PyInstance> {
        paramx_core::format::parse_instance(text)
            .map(|inner| PyInstance { inner })
            .map_err(value_err)
    }

    /// The canonical JSON text form (round-trips through `parse`).
    fn serialize(&self) -> String {
        paramx_core::format::serialize_instance(&self.inner)
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind()
    }

    fn __repr__(&self) -> String {
        match self.inner.graph() {
            Some(g) => format!(
                "Instance(kind={}, n={}, m={})",
                self.inner.kind(),
                g.vertex_count(),
                g.edge_count()
            ),
            None => format!("Instance(kind={})", self.inner.kind()),
        }
    }
}

/// What a solver produced: `status` is "ok", "reject", or "infeasible".
#[pyclass(name = "SolveResult", frozen, get_all)]
struct PySolveResult {
    status: String,
    producer: String,
    cost: Option<u64>,
    /// Chosen edge indices or vertex ids, depending on `item_kind`.
    items: Vec<usize>,
    item_kind: Option<String>,
    bound: Option<String>,
    subcalls: Vec<(String, u64)>,
    reason: Option<String>,
}

#[pymethods]
impl PySolveResult {
    fn __repr__(&self) -> String {
        match (&self.status[..], self.cost) {
            ("ok", Some(c)) => format!("SolveResult(status=ok, cost={c})"),
            _ => format!(
                "SolveResult(status={}, reason={:?})",
                self.status, self.reason
            ),
        }
    }
}

fn from_solution(sol: &Solution, bound: Option<String>, subcalls: Vec<(String, u64)>) -> PySolveResult {
    match sol {
        Solution::Reject { producer, reason } => PySolveResult {
            status: "reject".into(),
            producer: producer.clone(),
            cost: None,
            items: Vec::new(),
            item_kind: None,
            bound,
            subcalls,
            reason: Some(reason.clone()),
        },
        _ => PySolveResult {
            status: "ok".into(),
            producer: sol.producer().into(),
            cost: sol.cost(),
            items: sol
                .edge_items()
                .or(sol.vertex_items())
                .map(|s| s.iter().copied().collect())
                .unwrap_or_default(),
            item_kind: Some(if sol.edge_items().is_some() { "edges" } else { "vertices" }.into()),
            bound,
            subcalls,
            reason: None,
        },
    }
}

fn from_outcome(out: ApproxOutcome) -> PySolveResult {
    let subcalls = out
        .subcalls
        .iter()
        .map(|s| (s.label.clone(), s.cost))
        .collect();
    from_solution(&out.solution, Some(out.claimed_bound), subcalls)
}

fn infeasible(msg: String) -> PySolveResult {
    PySolveResult {
        status: "infeasible".into(),
        producer: String::new(),
        cost: None,
        items: Vec::new(),
        item_kind: None,
        bound: None,
        subcalls: Vec::new(),
        reason: Some(msg),
    }
}

fn solve_outcome(
    r: Result<ApproxOutcome, SolveError>,
) -> PyResult<PySolveResult> {
    match r {
        Ok(out) => Ok(from_outcome(out)),
        Err(SolveError::Infeasible(msg)) => Ok(infeasible(msg)),
        Err(e) => Err(value_err(e)),
    }
}

/// Run one algorithm on one instance. `algo` is one of scss-poly,
/// scss-fpt, dsf, dsn, mec, dst-exact, dst-greedy, setcover-greedy.
#[pyfunction]
#[pyo3(signature = (algo, inst, levels=None, param=None, seed=None, all_hubs=false))]
fn solve(
    algo: &str,
    inst: &PyInstance,
    levels: Option<usize>,
    param: Option<u64>,
    seed: Option<u64>,
    all_hubs: bool,
) -> PyResult<PySolveResult> {
    let mut cfg = RecursiveGreedyConfig::default();
    if let Some(levels) = levels {
        cfg.levels = levels;
    }
    let hub = if all_hubs {
        HubChoice::TryAllHubs
    } else {
        HubChoice::FirstTerminal
    };
    match (algo, &inst.inner) {
        ("scss-poly", Instance::Scss(i)) => solve_outcome(scss_poly(i, &cfg, hub)),
        ("scss-fpt", Instance::Scss(i)) => {
            let p = param
                .or(i.p())
                .ok_or_else(|| value_err("scss-fpt needs param or a p field in the instance"))?;
            solve_outcome(scss_fpt(&i.with_p(p)))
        }
        ("dsf", Instance::Dsf(i)) => solve_outcome(dsf_approx(i, &cfg)),
        ("dsn", Instance::Dsn(i)) => solve_outcome(dsn_approx(i)),
        ("mec", Instance::Mec(i)) => solve_outcome(match seed {
            Some(s) => mec_approx_seeded(i, s),
            None => mec_approx(i),
        }),
        ("dst-exact", Instance::Dst(i)) => match dst_exact(i) {
            Ok(sol) => Ok(from_solution(&sol, None, Vec::new())),
            Err(SolveError::Infeasible(msg)) => Ok(infeasible(msg)),
            Err(e) => Err(value_err(e)),
        },
        ("dst-greedy", Instance::Dst(i)) => match dst_recursive_greedy(i, &cfg) {
            Ok(sol) => Ok(from_solution(&sol, None, Vec::new())),
            Err(SolveError::Infeasible(msg)) => Ok(infeasible(msg)),
            Err(e) => Err(value_err(e)),
        },
        ("setcover-greedy", Instance::SetCover(i)) => match core_greedy_set_cover(i) {
            Ok(picks) => Ok(PySolveResult {
                status: "ok".into(),
                producer: "setcover-greedy".into(),
                cost: Some(picks.len() as u64),
                items: picks,
                item_kind: Some("sets".into()),
                bound: None,
                subcalls: Vec::new(),
                reason: None,
            }),
            Err(paramx_core::error::ReductionError::Infeasible(msg)) => Ok(infeasible(msg)),
            Err(e) => Err(value_err(e)),
        },
        (algo, other) => Err(value_err(format!(
            "algorithm {algo} does not apply to a {} instance",
            other.kind()
        ))),
    }
}

/// Exact optimum via exhaustive search. Returns None when the instance
/// is infeasible; raises RuntimeError when the instance exceeds the
/// enumeration budget (spec string like "edges=24,sets=22,time=120").
#[pyfunction]
#[pyo3(signature = (inst, budget=None))]
fn oracle_opt(inst: &PyInstance, budget: Option<&str>) -> PyResult<Option<u64>> {
    let budget = match budget {
        Some(spec) => OracleBudget::parse_spec(spec).map_err(value_err)?,
        None => OracleBudget::default(),
    };
    let edge = |p: &EdgeProblem| match opt_edge_subset(p, &budget) {
        Ok(OracleResult::Optimal { opt, .. }) => Ok(Some(opt)),
        Ok(OracleResult::Infeasible) => Ok(None),
        Err(e) => Err(runtime_err(e)),
    };
    match &inst.inner {
        Instance::Dst(i) => edge(&EdgeProblem::Dst(i)),
        Instance::Scss(i) => edge(&EdgeProblem::Scss(i)),
        Instance::Dsf(i) => edge(&EdgeProblem::Dsf(i)),
        Instance::Dsn(i) => edge(&EdgeProblem::Dsn(i)),
        Instance::Mec(i) => match opt_vertex_subset_mec(i, &budget) {
            Ok(OracleResult::Optimal { opt, .. }) => Ok(Some(opt)),
            Ok(OracleResult::Infeasible) => Ok(None),
            Err(e) => Err(runtime_err(e)),
        },
        Instance::SetCover(i) => match opt_set_cover(i, &budget) {
            Ok(CoverResult::Optimal { opt, .. }) => Ok(Some(opt as u64)),
            Ok(CoverResult::Infeasible) => Ok(None),
            Err(e) => Err(runtime_err(e)),
        },
        other => Err(value_err(format!(
            "no oracle for a {} instance",
            other.kind()
        ))),
    }
}

/// Probe k = 1, 2, ... with the certified scss algorithm and return the
/// first acceptance; that k never exceeds the true optimum.
#[pyclass(name = "LiftResult", frozen, get_all)]
struct PyLiftResult {
    first_accepting_k: u64,
    inner_calls: u64,
    cost: Option<u64>,
    items: Vec<usize>,
}

#[pyfunction]
fn lift_scss(inst: &PyInstance, k_cap: u64) -> PyResult<PyLiftResult> {
    let Instance::Scss(i) = &inst.inner else {
        return Err(value_err(format!(
            "lifting is wired to scss here, got a {} instance",
            inst.inner.kind()
        )));
    };
    let out = lift_to_optimum_approx(&ScssFptAlgo, i, k_cap).map_err(runtime_err)?;
    Ok(PyLiftResult {
        first_accepting_k: out.first_accepting_k,
        inner_calls: out.inner_calls,
        cost: out.solution.cost(),
        items: out
            .solution
            .edge_items()
            .map(|s| s.iter().copied().collect())
            .unwrap_or_default(),
    })
}

/// Apply a reduction; returns the image instance plus a provenance dict.
/// `kind` is scss-dsf, mcc-mec, or projgame-setcover; the set-system
/// shape (m defaults to the game alphabet) applies to the last one only.
#[pyfunction]
#[pyo3(signature = (kind, inst, m=None, l=2, seed=0))]
fn reduce<'py>(
    py: Python<'py>,
    kind: &str,
    inst: &PyInstance,
    m: Option<usize>,
    l: usize,
    seed: u64,
) -> PyResult<(PyInstance, Bound<'py, PyDict>)> {
    let prov = PyDict::new(py);
    prov.set_item("reduction", kind)?;
    match (kind, &inst.inner) {
        ("scss-dsf", Instance::Scss(i)) => {
            let (image, map) = scss_to_dsf(i).map_err(value_err)?;
            prov.set_item("l", map.l)?;
            prov.set_item("param_shift", map.param_shift)?;
            prov.set_item("pairs", map.pair_count)?;
            Ok((
                PyInstance {
                    inner: Instance::Dsf(image),
                },
                prov,
            ))
        }
        ("mcc-mec", Instance::Mcc(i)) => {
            let (image, warnings) = mcc_to_mec(i).map_err(value_err)?;
            prov.set_item("p", i.p())?;
            prov.set_item("k", image.k())?;
            prov.set_item("warnings", warnings)?;
            Ok((
                PyInstance {
                    inner: Instance::Mec(image),
                },
                prov,
            ))
        }
        ("projgame-setcover", Instance::ProjGame(g)) => {
            let sys = build_set_system(m.unwrap_or(g.sigma()), l, seed).map_err(runtime_err)?;
            let image = projgame_to_setcover(g, &sys).map_err(value_err)?;
            prov.set_item("sets", image.sets().len())?;
            prov.set_item("universe", image.universe_size())?;
            prov.set_item("set_system_universe", sys.universe_size())?;
            Ok((
                PyInstance {
                    inner: Instance::SetCover(image),
                },
                prov,
            ))
        }
        (kind, other) => Err(value_err(format!(
            "reduction {kind} does not take a {} instance",
            other.kind()
        ))),
    }
}

/// Generate a seeded instance; returns (instance, planted_cost).
#[pyfunction]
#[pyo3(signature = (kind, n=6, seed=0, family="random_gnp", density=0.3, terminals=3, pairs=2, max_demand=2, p=3, k=None, universe=8, sets=6))]
#[allow(clippy::too_many_arguments)]
fn gen_instance(
    kind: &str,
    n: usize,
    seed: u64,
    family: &str,
    density: f64,
    terminals: usize,
    pairs: usize,
    max_demand: u32,
    p: usize,
    k: Option<u64>,
    universe: usize,
    sets: usize,
) -> PyResult<(PyInstance, Option<u64>)> {
    let family: Family = family.parse().map_err(value_err)?;
    let gen = match kind {
        "dst" => gen_dst(family, n, terminals, density, seed),
        "scss" => gen_scss(family, n, terminals, density, seed),
        "dsf" => gen_dsf(family, n, pairs, density, seed),
        "dsn" => gen_dsn(family, n, pairs, max_demand, density, seed),
        "mec" => gen_mec(family, n, k, density, seed),
        "mcc" => gen_mcc(family, n, p, density, seed),
        "setcover" => gen_setcover(universe, sets, density, seed),
        other => return Err(value_err(format!("unknown instance kind {other}"))),
    }
    .map_err(value_err)?;
    Ok((PyInstance { inner: gen.instance }, gen.planted_cost))
}

/// Generate a solvable projection game; returns (instance, labeling).
#[pyfunction]
#[pyo3(signature = (v1=2, v2=2, sigma=2, edge_prob=0.7, seed=0))]
fn gen_projgame(
    v1: usize,
    v2: usize,
    sigma: usize,
    edge_prob: f64,
    seed: u64,
) -> PyResult<(PyInstance, Vec<usize>)> {
    let (game, labeling) =
        satisfiable_projgame(v1, v2, sigma, edge_prob, seed).map_err(value_err)?;
    Ok((
        PyInstance {
            inner: Instance::ProjGame(game),
        },
        labeling,
    ))
}

#[pyfunction]
fn parse_instance(text: &str) -> PyResult<PyInstance> {
    PyInstance::parse(text)
}

#[pymodule]
fn paramx_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_class::<PySolveResult>()?;
    m.add_class::<PyLiftResult>()?;
    m.add_function(wrap_pyfunction!(parse_instance, m)?)?;
    m.add_function(wrap_pyfunction!(gen_instance, m)?)?;
    m.add_function(wrap_pyfunction!(gen_projgame, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_opt, m)?)?;
    m.add_function(wrap_pyfunction!(lift_scss, m)?)?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    Ok(())
}
