mod bench;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use sweepcover::graph::{validate_pathset, MetricGraph, PathSet};
use sweepcover::instance::{generate, GenKind, InstanceFile};
use sweepcover::kminwp::{ratio_bound, solve_kminwp};
use sweepcover::mop::{alpha_star, guaranteed_ratio, solve_mop, MopParams, MopSolution};
use sweepcover::oracle::{
    bsc_upper_bound, build_path_cover_table, build_tree_cover_table, opt_kminwp, opt_mop, opt_pcf, opt_pcp,
};
use sweepcover::pc::Penalties;
use sweepcover::sweep::{solve_bsc, verify_schedule, BscParams, Schedule};
use sweepcover::TOL;

use report::{emit, sha256_hex, RunReport};

/// Largest instance for which `--oracle` attaches exact optima to a report.
const REPORT_ORACLE_MAX_N: usize = 10;

#[derive(Parser, Debug)]
#[command(name = "sweepcover", version, about = "Budgeted sweep coverage and disjoint-path orienteering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a random instance file.
    Gen(GenArgs),
    /// Schedule N sensors to sweep-cover as many points as possible.
    SolveBsc(SolveArgs),
    /// Most vertices spanned by m disjoint paths within a total budget.
    SolveMop {
        #[command(flatten)]
        common: SolveArgs,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        budget: f64,
    },
    /// Cheapest m disjoint paths spanning k vertices (bicriteria).
    SolveKminwp {
        #[command(flatten)]
        common: SolveArgs,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
    },
    /// Exact optimum by subset dynamic programming (at most 16 vertices).
    Oracle(OracleArgs),
    /// Check a schedule against an instance.
    Verify(VerifyArgs),
    /// Run a seeded benchmark suite and write CSV and SVG summaries.
    Bench(bench::BenchArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    sensors: Option<usize>,
    #[arg(long)]
    speed: Option<f64>,
    #[arg(long)]
    period: Option<f64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum KindArg {
    Euclidean,
    RandomMetric,
    Line,
    Star,
}

impl From<KindArg> for GenKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Euclidean => GenKind::Euclidean,
            KindArg::RandomMetric => GenKind::RandomMetric,
            KindArg::Line => GenKind::Line,
            KindArg::Star => GenKind::Star,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = default_alpha())]
    alpha: f64,
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Attach exact optima (instances with at most 10 vertices).
    #[arg(long)]
    oracle: bool,
    /// Only the cut-down segments as orienteering candidates.
    #[arg(long)]
    literal: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum OracleWhat {
    Kminwp,
    Pcp,
    Pcf,
    Mop,
    BscUb,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    what: OracleWhat,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    budget: Option<f64>,
    /// Uniform vertex penalty for `pcp` and `pcf`.
    #[arg(long, default_value_t = 1.0)]
    penalty: f64,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    /// A `solve-bsc` report, or an object with `paths` and `schedule`.
    #[arg(long)]
    schedule: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    oracle: bool,
}

fn default_alpha() -> f64 {
    (alpha_star() * 1e12).round() / 1e12
}

fn init_logging() {
    let env = env_logger::Env::new().filter_or("SWEEPCOVER_LOG", "warn");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

struct Loaded {
    file: InstanceFile,
    digest: String,
}

fn load(path: &Path) -> Result<Loaded> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let text = std::str::from_utf8(&bytes).context("instance file is not UTF-8")?;
    let file = InstanceFile::from_json(text)?;
    Ok(Loaded {
        file,
        digest: sha256_hex(&bytes),
    })
}

/// Graph with every distance at most 1, and the factor that was divided out.
fn normalized(g: &MetricGraph) -> (MetricGraph, f64) {
    let w = g.max_distance();
    if w > 1.0 {
        (g.scaled(1.0 / w), w)
    } else {
        (g.clone(), 1.0)
    }
}

fn command_line() -> Vec<String> {
    std::env::args().collect()
}

fn main() -> ExitCode {
    init_logging();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` means the command ran but some certificate failed.
fn run(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Gen(a) => gen(a),
        Command::SolveBsc(a) => run_bsc(&a),
        Command::SolveMop { common, m, budget } => run_mop(&common, m, budget),
        Command::SolveKminwp { common, m, k } => run_kminwp(&common, m, k),
        Command::Oracle(a) => run_oracle(&a),
        Command::Verify(a) => run_verify(&a),
        Command::Bench(a) => bench::run(&a),
    }
}

fn gen(a: GenArgs) -> Result<bool> {
    let mut file = generate(a.kind.into(), a.n, a.seed)?;
    file.sensors = a.sensors;
    file.speed = a.speed;
    file.period = a.period;
    // Reject bad parameters before writing anything.
    file.bsc()?;
    emit(&file.to_json(), a.output.as_deref())?;
    Ok(true)
}

fn check_common(a: &SolveArgs) -> Result<()> {
    if !(a.alpha > 0.0 && a.alpha < 1.0) {
        bail!("--alpha must lie in (0, 1), got {}", a.alpha);
    }
    if !(a.eps > 0.0 && a.eps.is_finite()) {
        bail!("--eps must be positive, got {}", a.eps);
    }
    if a.threads == 0 {
        bail!("--threads must be at least 1");
    }
    Ok(())
}

fn oracle_allowed(n: usize) -> bool {
    if n > REPORT_ORACLE_MAX_N {
        log::warn!("--oracle skipped: {n} vertices exceeds {REPORT_ORACLE_MAX_N}");
        false
    } else {
        true
    }
}

fn mop_diagnostics(mop: &MopSolution, scale: f64) -> serde_json::Value {
    let chosen_k = match mop.choice {
        sweepcover::mop::Choice::Segments(k) | sweepcover::mop::Choice::Windows(k) => Some(k),
        sweepcover::mop::Choice::Trivial => None,
    };
    let chosen = chosen_k.and_then(|k| mop.per_k.iter().find(|d| d.k == k));
    let per_k: Vec<_> = mop
        .per_k
        .iter()
        .map(|d| {
            json!({
                "k": d.k,
                "mode": d.mode,
                "ls": d.ls,
                "candidate_spanned": d.spanned,
                "candidate_cost": d.cost * scale,
                "kminwp_spanned": d.solution_spanned,
                "kminwp_cost": d.solution_cost * scale,
                "trim_rounds": d.trim_rounds,
                "budget_estimate": d.budget_estimate * scale,
            })
        })
        .collect();
    json!({
        "choice": mop.choice,
        "k_star": chosen_k,
        "budget_estimate": chosen.map(|d| d.budget_estimate * scale),
        "trim_rounds": chosen.map(|d| d.trim_rounds),
        "mode": chosen.map(|d| d.mode),
        "ls": chosen.map(|d| d.ls),
        "per_k": per_k,
    })
}

fn run_bsc(a: &SolveArgs) -> Result<bool> {
    check_common(a)?;
    let loaded = load(&a.input)?;
    let mut report = RunReport::new(command_line(), Some(loaded.digest));
    let inst = report.timed("load", || loaded.file.bsc())?;
    let params = BscParams {
        alpha: a.alpha,
        eps: a.eps,
        fit_windows: !a.literal,
        threads: a.threads,
    };
    let sol = report.timed("solve", || solve_bsc(&inst, &params))?;
    let mut cov = sol.report.clone();
    if a.oracle && oracle_allowed(inst.graph.n()) {
        let m_max = inst.sensors.min(inst.graph.n());
        let ub = report.timed("oracle", || -> Result<usize> {
            let table = build_path_cover_table(&inst.graph, m_max)?;
            Ok(bsc_upper_bound(&table, inst.sensors, inst.speed, inst.period)?)
        })?;
        cov = cov.with_upper_bound(ub);
        let floor = guaranteed_ratio(a.alpha) / 3.0;
        report.certify("ratio_guarantee", cov.covered as f64 >= floor * ub as f64 - TOL);
    }

    let mut diagnostics = mop_diagnostics(&sol.mop, sol.scale);
    diagnostics["scale"] = json!(sol.scale);
    diagnostics["allocation"] = json!(sol.allocation);
    diagnostics["allocation_covered"] = json!(sol.allocation_covered);
    diagnostics["blocks_covered"] = json!(sol.blocks_covered);
    diagnostics["total_blocks"] = json!(sol.total_blocks);
    diagnostics["source"] = json!(sol.source);
    report.diagnostics = diagnostics;
    report.result = json!({
        "paths": sol.pathset.vertex_lists(),
        "cost": sol.pathset.cost,
        "spanned": sol.pathset.spanned,
        "schedule": sol.schedule,
        "covered": cov.covered,
        "covered_vertices": cov.covered_vertices,
        "upper_bound": cov.upper_bound,
        "ratio": cov.ratio,
        "violations": cov.violations.iter().map(ToString::to_string).collect::<Vec<_>>(),
    });
    report.certify("schedule_valid", cov.is_valid());
    report.certify("within_budget", sol.pathset.cost <= inst.budget() + TOL * sol.scale);
    report.certify("covers_a_third_of_spanned", 3 * cov.covered >= sol.pathset.spanned);
    emit(&report.to_json(), a.output.as_deref())?;
    Ok(report.ok)
}

fn run_mop(a: &SolveArgs, m: usize, budget: f64) -> Result<bool> {
    check_common(a)?;
    let loaded = load(&a.input)?;
    let mut report = RunReport::new(command_line(), Some(loaded.digest));
    let g = report.timed("load", || loaded.file.graph())?;
    let (ng, scale) = normalized(&g);
    let params = MopParams {
        alpha: a.alpha,
        eps: a.eps,
        fit_windows: !a.literal,
        threads: a.threads,
        ..MopParams::new(m, budget / scale)
    };
    let sol = report.timed("solve", || solve_mop(&ng, &params))?;
    let pathset = PathSet::from_vertex_lists(&g, sol.pathset.vertex_lists())?;

    let mut result = json!({
        "paths": pathset.vertex_lists(),
        "spanned": pathset.spanned,
        "cost": pathset.cost,
    });
    if a.oracle && oracle_allowed(g.n()) {
        let opt = report.timed("oracle", || -> Result<usize> {
            Ok(opt_mop(&build_path_cover_table(&g, m)?, m, budget)?)
        })?;
        result["opt"] = json!(opt);
        result["ratio"] = json!(if opt == 0 { 1.0 } else { pathset.spanned as f64 / opt as f64 });
        report.certify(
            "ratio_guarantee",
            pathset.spanned as f64 >= guaranteed_ratio(a.alpha) * opt as f64 - TOL,
        );
        report.certify("at_most_opt", pathset.spanned <= opt);
    }
    let mut diagnostics = mop_diagnostics(&sol, scale);
    diagnostics["scale"] = json!(scale);
    report.diagnostics = diagnostics;
    report.result = result;
    report.certify("pathset_valid", validate_pathset(&g, &pathset).is_ok() && pathset.m() == m);
    report.certify("within_budget", pathset.cost <= budget + TOL * scale);
    emit(&report.to_json(), a.output.as_deref())?;
    Ok(report.ok)
}

fn run_kminwp(a: &SolveArgs, m: usize, k: usize) -> Result<bool> {
    check_common(a)?;
    let loaded = load(&a.input)?;
    let mut report = RunReport::new(command_line(), Some(loaded.digest));
    let g = report.timed("load", || loaded.file.graph())?;
    let (ng, scale) = normalized(&g);
    let sol = report.timed("solve", || solve_kminwp(&ng, m, k, a.alpha, a.eps))?;
    let pathset = PathSet::from_vertex_lists(&g, sol.pathset.vertex_lists())?;

    let mut result = json!({
        "paths": pathset.vertex_lists(),
        "spanned": pathset.spanned,
        "cost": pathset.cost,
        "mode": sol.mode,
    });
    if a.oracle && oracle_allowed(g.n()) {
        let opt = report.timed("oracle", || -> Result<f64> {
            Ok(opt_kminwp(&build_path_cover_table(&g, m)?, m, k)?)
        })?;
        result["opt"] = json!(opt);
        let factor = ratio_bound(sol.mode, true, a.alpha) + a.eps;
        report.certify("cost_bound", pathset.cost <= factor * opt + TOL * scale);
    }
    report.diagnostics = json!({
        "scale": scale,
        "budget_estimate": sol.budget_estimate * scale,
        "bisection_iterations": sol.iterations,
        "trim_rounds": sol.rounds,
        "untrimmed_spanned": sol.untrimmed_spanned,
        "mode": sol.mode,
    });
    report.result = result;
    let spanned = pathset.spanned;
    let mode_ok = match sol.mode {
        sweepcover::kminwp::Mode::Feasible => spanned >= k,
        sweepcover::kminwp::Mode::Bicriteria => spanned < k && spanned as f64 > a.alpha * k as f64,
    };
    report.certify("pathset_valid", validate_pathset(&g, &pathset).is_ok() && pathset.m() == m);
    report.certify("mode_consistent", mode_ok);
    report.certify("at_most_2k", spanned <= 2 * k);
    emit(&report.to_json(), a.output.as_deref())?;
    Ok(report.ok)
}

fn run_oracle(a: &OracleArgs) -> Result<bool> {
    let loaded = load(&a.input)?;
    let mut report = RunReport::new(command_line(), Some(loaded.digest));
    let g = loaded.file.graph()?;
    let n = g.n();
    let value = report.timed("oracle", || -> Result<serde_json::Value> {
        Ok(match a.what {
            OracleWhat::Kminwp => {
                let k = a.k.context("--what kminwp needs --k")?;
                json!(opt_kminwp(&build_path_cover_table(&g, a.m)?, a.m, k)?)
            }
            OracleWhat::Pcp => {
                let pi = Penalties::uniform(n, a.penalty)?;
                json!(opt_pcp(&build_path_cover_table(&g, a.m)?, &pi, a.m)?)
            }
            OracleWhat::Pcf => {
                let pi = Penalties::uniform(n, a.penalty)?;
                json!(opt_pcf(&build_tree_cover_table(&g, a.m)?, &pi, a.m)?)
            }
            OracleWhat::Mop => {
                let budget = a.budget.context("--what mop needs --budget")?;
                json!(opt_mop(&build_path_cover_table(&g, a.m)?, a.m, budget)?)
            }
            OracleWhat::BscUb => {
                let inst = loaded.file.bsc()?;
                let table = build_path_cover_table(&g, inst.sensors.min(n))?;
                json!(bsc_upper_bound(&table, inst.sensors, inst.speed, inst.period)?)
            }
        })
    })?;
    report.result = json!({ "value": value });
    emit(&report.to_json(), a.output.as_deref())?;
    Ok(true)
}

#[derive(Deserialize)]
struct ScheduleFile {
    paths: Vec<Vec<usize>>,
    schedule: Schedule,
}

fn read_schedule(path: &Path) -> Result<ScheduleFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut value: serde_json::Value = serde_json::from_str(&text).context("schedule file is not JSON")?;
    if let Some(inner) = value.get_mut("result") {
        value = inner.take();
    }
    serde_json::from_value(value).context("schedule file needs \"paths\" and \"schedule\"")
}

fn run_verify(a: &VerifyArgs) -> Result<bool> {
    let loaded = load(&a.input)?;
    let mut report = RunReport::new(command_line(), Some(loaded.digest));
    let inst = loaded.file.bsc()?;
    let sf = read_schedule(&a.schedule)?;
    let g = &inst.graph;
    // Weights are recomputed here; an unusable vertex list is itself a violation.
    let pathset = match PathSet::from_vertex_lists(g, sf.paths.clone()) {
        Ok(ps) => ps,
        Err(e) => {
            report.result = json!({ "violations": [format!("invalid path set: {e}")] });
            report.certify("schedule_valid", false);
            emit(&report.to_json(), a.output.as_deref())?;
            return Ok(false);
        }
    };
    let mut cov = report.timed("verify", || verify_schedule(&inst, &pathset, &sf.schedule));
    if a.oracle && oracle_allowed(g.n()) {
        let table = build_path_cover_table(g, inst.sensors.min(g.n()))?;
        cov = cov.with_upper_bound(bsc_upper_bound(&table, inst.sensors, inst.speed, inst.period)?);
    }
    let violations: Vec<String> = cov.violations.iter().map(ToString::to_string).collect();
    for v in &violations {
        eprintln!("violation: {v}");
    }
    report.result = json!({
        "covered": cov.covered,
        "covered_vertices": cov.covered_vertices,
        "upper_bound": cov.upper_bound,
        "ratio": cov.ratio,
        "violations": violations,
    });
    report.certify("schedule_valid", cov.is_valid());
    report.certify("speed_matches", (sf.schedule.speed - inst.speed).abs() <= TOL * inst.speed.max(1.0));
    report.certify("period_matches", (sf.schedule.period - inst.period).abs() <= TOL * inst.period.max(1.0));
    emit(&report.to_json(), a.output.as_deref())?;
    Ok(report.ok)
}
