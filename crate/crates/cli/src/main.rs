//! Command-line front end: solve single instances, apply reductions,
//! run the bench suites, and generate seeded corpora.
//!
//! Exit codes: 0 solved/accepted, 1 usage or I/O or refusal, 2 reject,
//! 3 infeasible, 4 a verified bound failed.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use paramx_core::approx::{
    dsf_approx, dsn_approx, mec_approx, mec_approx_seeded, scss_fpt, scss_poly, ApproxOutcome,
    HubChoice,
};
use paramx_core::dst::{dst_exact, dst_recursive_greedy, RecursiveGreedyConfig};
use paramx_core::error::SolveError;
use paramx_core::format::{parse_instance, serialize_instance};
use paramx_core::generate::{
    gen_dsf, gen_dsn, gen_dst, gen_mcc, gen_mec, gen_scss, gen_setcover, satisfiable_projgame,
    Family,
};
use paramx_core::instance::{Instance, Solution};
use paramx_core::oracle::OracleBudget;
use paramx_core::reductions::{
    build_set_system, greedy_set_cover, mcc_to_mec, projgame_to_setcover, scss_to_dsf,
};

use report::{
    bench_figure1, bench_reductions, dsf_row, dsn_row, dst_row, mec_row, row_text, scss_fpt_row,
    scss_poly_row, setcover_row, RatioRow,
};

const EXIT_OK: i32 = 0;
const EXIT_USAGE: i32 = 1;
const EXIT_REJECT: i32 = 2;
const EXIT_INFEASIBLE: i32 = 3;
const EXIT_BOUND_FAILED: i32 = 4;

#[derive(Parser)]
#[command(name = "paramx", version, about = "Parameterized approximation toolkit for directed connectivity problems")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one algorithm on one instance file.
    Solve {
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long = "in")]
        input: PathBuf,
        /// Recursion depth for the greedy tree algorithms.
        #[arg(long)]
        levels: Option<usize>,
        /// Parameter p for scss-fpt (overrides any p in the file).
        #[arg(long)]
        param: Option<u64>,
        /// Seeded edge sampling for mec instead of the deterministic rule.
        #[arg(long)]
        seed: Option<u64>,
        /// Try every terminal as the hub (scss-poly only).
        #[arg(long)]
        all_hubs: bool,
        /// Compare against the exact oracle and print a ratio row.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        json: bool,
    },
    /// Apply a reduction and write the image instance plus a provenance sidecar.
    Reduce {
        #[arg(long, value_enum)]
        from: ReduceFrom,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Set-system shape for projgame-setcover as "m,l,seed"
        /// (default: alphabet size, 2, 0).
        #[arg(long, value_parser = parse_setsystem)]
        setsystem: Option<(usize, usize, u64)>,
    },
    /// Run a suite of generated instances through algorithms and oracles.
    Bench {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long, default_value_t = 8)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Generate a seeded instance file.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// random_gnp, layered_dag, bidirected_ring, or clique_like.
        #[arg(long, default_value = "random_gnp")]
        family: String,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long, default_value_t = 3)]
        terminals: usize,
        #[arg(long, default_value_t = 2)]
        pairs: usize,
        #[arg(long, default_value_t = 2)]
        max_demand: u32,
        /// Color count for mcc.
        #[arg(long, default_value_t = 3)]
        p: usize,
        /// Edge target for mec (derived from the graph when omitted).
        #[arg(long)]
        k: Option<u64>,
        #[arg(long, default_value_t = 8)]
        universe: usize,
        #[arg(long, default_value_t = 6)]
        sets: usize,
        #[arg(long, default_value_t = 2)]
        v1: usize,
        #[arg(long, default_value_t = 2)]
        v2: usize,
        #[arg(long, default_value_t = 2)]
        sigma: usize,
        #[arg(long, default_value_t = 0.7)]
        edge_prob: f64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    ScssPoly,
    ScssFpt,
    Dsf,
    Dsn,
    Mec,
    DstExact,
    DstGreedy,
    SetcoverGreedy,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceFrom {
    ScssDsf,
    MccMec,
    ProjgameSetcover,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Figure1,
    Reductions,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Dst,
    Scss,
    Dsf,
    Dsn,
    Mec,
    Mcc,
    Setcover,
    Projgame,
}

fn parse_setsystem(s: &str) -> Result<(usize, usize, u64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() > 3 || parts[0].trim().is_empty() {
        return Err("expected m[,l[,seed]]".into());
    }
    let m = parts[0].trim().parse::<usize>().map_err(|e| format!("m: {e}"))?;
    let l = match parts.get(1) {
        Some(t) => t.trim().parse::<usize>().map_err(|e| format!("l: {e}"))?,
        None => 2,
    };
    let seed = match parts.get(2) {
        Some(t) => t.trim().parse::<u64>().map_err(|e| format!("seed: {e}"))?,
        None => 0,
    };
    Ok((m, l, seed))
}

fn main() {
    // Die quietly when a downstream pipe closes early instead of
    // panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match cli.cmd {
        Cmd::Solve {
            algo,
            input,
            levels,
            param,
            seed,
            all_hubs,
            verify,
            json,
        } => cmd_solve(algo, &input, levels, param, seed, all_hubs, verify, json),
        Cmd::Reduce {
            from,
            input,
            out,
            setsystem,
        } => cmd_reduce(from, &input, &out, setsystem),
        Cmd::Bench {
            suite,
            max_n,
            count,
            seed,
            json,
        } => cmd_bench(suite, max_n, count, seed, json),
        Cmd::Gen {
            kind,
            out,
            n,
            seed,
            family,
            density,
            terminals,
            pairs,
            max_demand,
            p,
            k,
            universe,
            sets,
            v1,
            v2,
            sigma,
            edge_prob,
        } => cmd_gen(
            kind, &out, n, seed, &family, density, terminals, pairs, max_demand, p, k, universe,
            sets, v1, v2, sigma, edge_prob,
        ),
    }
}

fn usage_err(msg: impl std::fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

fn env_budget() -> Result<OracleBudget, i32> {
    OracleBudget::from_env().map_err(|e| usage_err(format_args!("PARAMX_ORACLE_BUDGET: {e}")))
}

fn load_instance(path: &Path) -> Result<Instance, i32> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage_err(format_args!("cannot read {}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| usage_err(format_args!("{}: {e}", path.display())))
}

fn file_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// What solve produced, before formatting.
enum Outcome {
    Certified(ApproxOutcome),
    Plain(Solution),
    Cover(Vec<usize>),
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    algo: Algo,
    input: &Path,
    levels: Option<usize>,
    param: Option<u64>,
    seed: Option<u64>,
    all_hubs: bool,
    verify: bool,
    json: bool,
) -> i32 {
    let inst = match load_instance(input) {
        Ok(i) => i,
        Err(code) => return code,
    };
    let mut cfg = RecursiveGreedyConfig::default();
    if let Some(levels) = levels {
        cfg.levels = levels;
    }
    let hub = if all_hubs {
        HubChoice::TryAllHubs
    } else {
        HubChoice::FirstTerminal
    };
    let budget = match env_budget() {
        Ok(b) => b,
        Err(code) => return code,
    };
    let id = file_id(input);

    // Each arm produces the outcome plus, under --verify, its ratio row.
    let (outcome, row): (Outcome, Option<RatioRow>) = match (algo, &inst) {
        (Algo::ScssPoly, Instance::Scss(i)) => match scss_poly(i, &cfg, hub) {
            Ok(out) => {
                let row = verify.then(|| scss_poly_row(&id, i, &out, &budget));
                (Outcome::Certified(out), row)
            }
            Err(e) => return solve_error(e, json),
        },
        (Algo::ScssFpt, Instance::Scss(i)) => {
            let Some(p) = param.or(i.p()) else {
                return usage_err("scss-fpt needs --param or a p field in the instance");
            };
            match scss_fpt(&i.with_p(p)) {
                Ok(out) => {
                    let row = verify.then(|| scss_fpt_row(&id, i, p, &out, &budget));
                    (Outcome::Certified(out), row)
                }
                Err(e) => return solve_error(e, json),
            }
        }
        (Algo::Dsf, Instance::Dsf(i)) => match dsf_approx(i, &cfg) {
            Ok(out) => {
                let row = verify.then(|| dsf_row(&id, i, &out, &budget));
                (Outcome::Certified(out), row)
            }
            Err(e) => return solve_error(e, json),
        },
        (Algo::Dsn, Instance::Dsn(i)) => match dsn_approx(i) {
            Ok(out) => {
                let row = verify.then(|| dsn_row(&id, i, &out, &budget));
                (Outcome::Certified(out), row)
            }
            Err(e) => return solve_error(e, json),
        },
        (Algo::Mec, Instance::Mec(i)) => {
            let run = match seed {
                Some(s) => mec_approx_seeded(i, s),
                None => mec_approx(i),
            };
            match run {
                Ok(out) => {
                    let row = verify.then(|| mec_row(&id, i, &out, &budget));
                    (Outcome::Certified(out), row)
                }
                Err(e) => return solve_error(e, json),
            }
        }
        (Algo::DstExact, Instance::Dst(i)) => match dst_exact(i) {
            Ok(sol) => {
                let row = verify.then(|| dst_row(&id, "dst-exact", i, &sol, &budget));
                (Outcome::Plain(sol), row)
            }
            Err(e) => return solve_error(e, json),
        },
        (Algo::DstGreedy, Instance::Dst(i)) => match dst_recursive_greedy(i, &cfg) {
            Ok(sol) => {
                let row = verify.then(|| dst_row(&id, "dst-greedy", i, &sol, &budget));
                (Outcome::Plain(sol), row)
            }
            Err(e) => return solve_error(e, json),
        },
        (Algo::SetcoverGreedy, Instance::SetCover(i)) => match greedy_set_cover(i) {
            Ok(picks) => {
                let row = verify.then(|| setcover_row(&id, i, &picks, &budget));
                (Outcome::Cover(picks), row)
            }
            Err(paramx_core::error::ReductionError::Infeasible(msg)) => {
                return report_infeasible(&msg, json)
            }
            Err(e) => return usage_err(e),
        },
        (algo, other) => {
            let name = algo
                .to_possible_value()
                .map(|v| v.get_name().to_string())
                .unwrap_or_default();
            return usage_err(format_args!(
                "algorithm {name} does not apply to a {} instance",
                other.kind()
            ));
        }
    };
    print_outcome(&outcome, row.as_ref(), json)
}

fn solve_error(e: SolveError, json: bool) -> i32 {
    match e {
        SolveError::Infeasible(msg) => report_infeasible(&msg, json),
        other => usage_err(other),
    }
}

fn report_infeasible(msg: &str, json: bool) -> i32 {
    if json {
        println!("{}", json!({"status": "infeasible", "reason": msg}));
    } else {
        println!("infeasible: {msg}");
    }
    EXIT_INFEASIBLE
}

fn print_outcome(outcome: &Outcome, row: Option<&RatioRow>, json: bool) -> i32 {
    let (sol, bound, subcalls) = match outcome {
        Outcome::Certified(out) => (&out.solution, Some(&out.claimed_bound), &out.subcalls[..]),
        Outcome::Plain(sol) => (sol, None, &[][..]),
        Outcome::Cover(picks) => return print_cover(picks, row, json),
    };
    if let Solution::Reject { reason, .. } = sol {
        if json {
            let mut doc = json!({
                "status": "reject",
                "producer": sol.producer(),
                "reason": reason,
            });
            if let Some(row) = row {
                doc["verify"] = serde_json::to_value(row).expect("row serializes");
            }
            println!("{doc}");
        } else {
            println!("reject: {reason}");
            if let Some(row) = row {
                println!("{}", row_text(row, None));
            }
        }
        return if row.is_some_and(|r| !r.pass) {
            EXIT_BOUND_FAILED
        } else {
            EXIT_REJECT
        };
    }
    if json {
        let mut doc = json!({
            "status": "ok",
            "producer": sol.producer(),
            "cost": sol.cost(),
        });
        if let Some(edges) = sol.edge_items() {
            doc["edges"] = json!(edges);
        }
        if let Some(vertices) = sol.vertex_items() {
            doc["vertices"] = json!(vertices);
        }
        if let Some(bound) = bound {
            doc["bound"] = json!(bound);
        }
        if !subcalls.is_empty() {
            doc["subcalls"] = json!(subcalls
                .iter()
                .map(|s| json!({"label": s.label, "cost": s.cost}))
                .collect::<Vec<_>>());
        }
        if let Some(row) = row {
            doc["verify"] = serde_json::to_value(row).expect("row serializes");
        }
        println!("{doc}");
    } else {
        println!("cost {}", sol.cost().expect("non-reject has a cost"));
        if let Some(edges) = sol.edge_items() {
            println!("edges {}", join(edges.iter()));
        }
        if let Some(vertices) = sol.vertex_items() {
            println!("vertices {}", join(vertices.iter()));
        }
        if let Some(bound) = bound {
            println!("bound {bound}");
        }
        for s in subcalls {
            println!("subcall {}: cost {}", s.label, s.cost);
        }
        if let Some(row) = row {
            println!("{}", row_text(row, None));
        }
    }
    if row.is_some_and(|r| !r.pass) {
        EXIT_BOUND_FAILED
    } else {
        EXIT_OK
    }
}

fn print_cover(picks: &[usize], row: Option<&RatioRow>, json: bool) -> i32 {
    if json {
        let mut doc = json!({
            "status": "ok",
            "producer": "setcover-greedy",
            "size": picks.len(),
            "sets": picks,
        });
        if let Some(row) = row {
            doc["verify"] = serde_json::to_value(row).expect("row serializes");
        }
        println!("{doc}");
    } else {
        println!("size {}", picks.len());
        println!("sets {}", join(picks.iter()));
        if let Some(row) = row {
            println!("{}", row_text(row, None));
        }
    }
    if row.is_some_and(|r| !r.pass) {
        EXIT_BOUND_FAILED
    } else {
        EXIT_OK
    }
}

fn join<T: std::fmt::Display>(items: impl Iterator<Item = T>) -> String {
    items
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn write_out(path: &Path, text: &str) -> Result<(), i32> {
    fs::write(path, text)
        .map_err(|e| usage_err(format_args!("cannot write {}: {e}", path.display())))
}

fn cmd_reduce(
    from: ReduceFrom,
    input: &Path,
    out: &Path,
    setsystem: Option<(usize, usize, u64)>,
) -> i32 {
    let inst = match load_instance(input) {
        Ok(i) => i,
        Err(code) => return code,
    };
    let sidecar_path = PathBuf::from(format!("{}.provenance.json", out.display()));
    let (image_text, sidecar, summary) = match (from, &inst) {
        (ReduceFrom::ScssDsf, Instance::Scss(i)) => {
            let (image, map) = match scss_to_dsf(i) {
                Ok(x) => x,
                Err(e) => return usage_err(e),
            };
            let sidecar = json!({
                "schema_version": 1,
                "reduction": "scss-dsf",
                "l": map.l,
                "param_shift": map.param_shift,
                "pairs": map.pair_count,
                "new_vertices": 2 * map.l,
                "new_edges": 2 * map.l,
            });
            let summary = format!(
                "scss-dsf: image has {} vertices, {} edges, {} pairs; parameter shifts by {}",
                image.graph().vertex_count(),
                image.graph().edge_count(),
                map.pair_count,
                map.param_shift,
            );
            (serialize_instance(&Instance::Dsf(image)), sidecar, summary)
        }
        (ReduceFrom::MccMec, Instance::Mcc(i)) => {
            let (image, warnings) = match mcc_to_mec(i) {
                Ok(x) => x,
                Err(e) => return usage_err(e),
            };
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            let k = image.k();
            let sidecar = json!({
                "schema_version": 1,
                "reduction": "mcc-mec",
                "p": i.p(),
                "k": k,
                "warnings": warnings,
            });
            let summary = format!("mcc-mec: p = {} becomes edge target k = {k}", i.p());
            (serialize_instance(&Instance::Mec(image)), sidecar, summary)
        }
        (ReduceFrom::ProjgameSetcover, Instance::ProjGame(g)) => {
            let (m, l, seed) = setsystem.unwrap_or((g.sigma(), 2, 0));
            let sys = match build_set_system(m, l, seed) {
                Ok(s) => s,
                Err(e) => return usage_err(e),
            };
            let image = match projgame_to_setcover(g, &sys) {
                Ok(x) => x,
                Err(e) => return usage_err(e),
            };
            let sidecar = json!({
                "schema_version": 1,
                "reduction": "projgame-setcover",
                "sigma": g.sigma(),
                "sets": image.sets().len(),
                "universe": image.universe_size(),
                "set_system": {
                    "m": m,
                    "l": l,
                    "seed": seed,
                    "universe": sys.universe_size(),
                },
            });
            let summary = format!(
                "projgame-setcover: {} sets over a universe of {}",
                image.sets().len(),
                image.universe_size(),
            );
            (
                serialize_instance(&Instance::SetCover(image)),
                sidecar,
                summary,
            )
        }
        (_, other) => {
            return usage_err(format_args!(
                "this reduction does not take a {} instance",
                other.kind()
            ));
        }
    };
    if let Err(code) = write_out(out, &image_text) {
        return code;
    }
    if let Err(code) = write_out(&sidecar_path, &format!("{sidecar}\n")) {
        return code;
    }
    println!("{summary}");
    println!("wrote {} and {}", out.display(), sidecar_path.display());
    EXIT_OK
}

fn cmd_bench(suite: Suite, max_n: usize, count: usize, seed: u64, json: bool) -> i32 {
    if max_n < 4 || max_n > 10 {
        return usage_err("--max-n must be between 4 and 10 (the oracle is exponential)");
    }
    let budget = match env_budget() {
        Ok(b) => b,
        Err(code) => return code,
    };
    let out = match suite {
        Suite::Figure1 => bench_figure1(max_n, count, seed, &budget),
        Suite::Reductions => bench_reductions(max_n, count, seed, &budget),
    };
    if json {
        println!(
            "{}",
            serde_json::to_string(&out.doc).expect("bench doc serializes")
        );
    } else {
        println!(
            "suite {} (count {count}, seed {seed}, max-n {max_n})",
            out.doc.suite
        );
        for (row, wall) in out.doc.rows.iter().zip(&out.walls_ms) {
            println!("{}", row_text(row, Some(*wall)));
        }
        println!("{} rows, {} failures", out.doc.rows.len(), out.failures);
    }
    if out.failures > 0 {
        EXIT_BOUND_FAILED
    } else {
        EXIT_OK
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    kind: GenKind,
    out: &Path,
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
    v1: usize,
    v2: usize,
    sigma: usize,
    edge_prob: f64,
) -> i32 {
    let family = match Family::from_str(family) {
        Ok(f) => f,
        Err(e) => return usage_err(e),
    };
    let (instance, note) = match kind {
        GenKind::Projgame => match satisfiable_projgame(v1, v2, sigma, edge_prob, seed) {
            Ok((game, labeling)) => (
                Instance::ProjGame(game),
                format!(" (satisfying labeling: {})", join(labeling.iter())),
            ),
            Err(e) => return usage_err(e),
        },
        GenKind::Setcover => match gen_setcover(universe, sets, density, seed) {
            Ok(g) => (g.instance, planted_note(g.planted_cost)),
            Err(e) => return usage_err(e),
        },
        _ => {
            let gen = match kind {
                GenKind::Dst => gen_dst(family, n, terminals, density, seed),
                GenKind::Scss => gen_scss(family, n, terminals, density, seed),
                GenKind::Dsf => gen_dsf(family, n, pairs, density, seed),
                GenKind::Dsn => gen_dsn(family, n, pairs, max_demand, density, seed),
                GenKind::Mec => gen_mec(family, n, k, density, seed),
                GenKind::Mcc => gen_mcc(family, n, p, density, seed),
                GenKind::Setcover | GenKind::Projgame => unreachable!("handled above"),
            };
            match gen {
                Ok(g) => (g.instance, planted_note(g.planted_cost)),
                Err(e) => return usage_err(e),
            }
        }
    };
    if let Err(code) = write_out(out, &serialize_instance(&instance)) {
        return code;
    }
    println!("wrote {} instance to {}{note}", instance.kind(), out.display());
    EXIT_OK
}

fn planted_note(planted: Option<u64>) -> String {
    match planted {
        Some(c) => format!(" (planted cost {c})"),
        None => String::new(),
    }
}
