use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use leadsel_core::centrality::centrality_report;
use leadsel_core::graph::{complete, cycle, erdos_renyi, path};
use leadsel_core::selection::{
    closed_form_cycle, closed_form_cycle_two, closed_form_path_two, exhaustive_select,
    greedy_select, oracle_select, pairwise_sweep, pairwise_sweep_restricted, Method, SelectOptions,
    SelectionResult, SweepOptions, DEFAULT_BUDGET, TIE_TOL,
};
use leadsel_core::simulator::{simulate_replicas, SimConfig};
use leadsel_core::spectral::{compute_kernels, oracle_error_gain, oracle_error_noise_free};
use leadsel_core::suite::{enumerated_suite, random_suite, SuiteGraph};
use leadsel_core::verify::{verify_graph, verify_suite, VerifyOptions, VerifyReport, IDENTITY_TOL};
use leadsel_core::{Error, Graph, LeaderMode};
use serde::Serialize;
use serde_json::{json, Value};

use crate::report::{join_ids, num, Format, GraphSummary, Output, Report, Table, SCHEMA_VERSION};

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;
pub const EXIT_IDENTITY: u8 = 4;
pub const EXIT_STABILITY: u8 = 5;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            Error::Unstable { .. } | Error::Diverged { .. } => EXIT_STABILITY,
            _ => EXIT_INPUT,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Self::input(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "leadsel",
    version,
    about = "Joint centrality and optimal leader selection"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Base of node ids on the command line and in output (graph files are always 0-based).
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1), global = true)]
    pub index_base: u8,

    /// CSV table to emit instead of the command's main one.
    #[arg(long, global = true)]
    pub table: Option<String>,

    /// Write to a file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Information centrality, L+ diagonal and Kirchhoff index.
    Centrality(CentralityArgs),
    /// Optimal leader set of a given size.
    Select(SelectArgs),
    /// Two-node joint centrality for every pair, with a histogram.
    Pairs(PairsArgs),
    /// Check joint-centrality identities against dense trace computations.
    Verify(VerifyArgs),
    /// Integrate the noisy tracking dynamics and compare with the analytic error.
    Simulate(SimulateArgs),
    /// Write a canonical graph as an edge list.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    NoiseFree,
    Gain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    /// Every m-subset ranked by joint centrality.
    Exhaustive,
    /// Every m-subset ranked by the dense trace.
    Oracle,
    Greedy,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Topology {
    Cycle,
    Path,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteArg {
    /// All connected graphs on 4 and 5 nodes.
    Small,
    /// Seeded random graphs with 4 to 12 nodes.
    Random,
    /// All connected graphs on 4 to 6 nodes plus the random suite.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphKind {
    Cycle,
    Path,
    Complete,
    Er,
}

#[derive(Debug, Args, Serialize)]
pub struct CentralityArgs {
    /// Edge-list file.
    pub graph: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Include the resistance and biharmonic matrices.
    #[arg(long)]
    pub matrices: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct SelectArgs {
    pub graph: PathBuf,
    #[arg(long)]
    pub m: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::NoiseFree)]
    pub mode: ModeArg,
    /// Leader gain; required with `--mode gain`.
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long, value_enum, default_value_t = MethodArg::Exhaustive)]
    pub method: MethodArg,
    /// Topology asserted for `--method closed-form`; the graph is checked against it.
    #[arg(long, value_enum)]
    pub topology: Option<Topology>,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Maximum number of candidate sets an exhaustive search may evaluate.
    #[arg(long, default_value_t = DEFAULT_BUDGET as u64)]
    pub budget: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct PairsArgs {
    pub graph: PathBuf,
    /// File of `a b` lines restricting the sweep to those pairs.
    #[arg(long)]
    pub pairs: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    pub bins: usize,
    /// Maximum number of pairs.
    #[arg(long, default_value_t = DEFAULT_BUDGET as u64)]
    pub budget: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// Edge-list file; omit when using `--suite`.
    #[arg(required_unless_present = "suite")]
    pub graph: Option<PathBuf>,
    #[arg(long, value_enum, conflicts_with = "graph")]
    pub suite: Option<SuiteArg>,
    /// Seed of the random suite.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of graphs in the random suite.
    #[arg(long, default_value_t = 50)]
    pub count: usize,
    /// Largest noise-free leader set checked.
    #[arg(long, default_value_t = 3)]
    pub max_m: usize,
    #[arg(long, default_value_t = IDENTITY_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    pub graph: PathBuf,
    /// Comma-separated leader ids.
    #[arg(long, value_delimiter = ',', required = true)]
    pub leaders: Vec<usize>,
    #[arg(long, value_enum, default_value_t = ModeArg::NoiseFree)]
    pub mode: ModeArg,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    #[arg(long, default_value_t = 2_000_000)]
    pub steps: u64,
    /// Discarded steps; defaults to 10% of `--steps`.
    #[arg(long)]
    pub burn_in: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// External signal value.
    #[arg(long, default_value_t = 0.0)]
    pub mu: f64,
    /// Independent trajectories pooled into one estimate.
    #[arg(long, default_value_t = 1)]
    pub replicas: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub kind: GraphKind,
    #[arg(long)]
    pub n: usize,
    /// Edge probability for `er`.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// Seed for `er`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Node id translation between the 0-based core and the user-facing base.
#[derive(Debug, Clone, Copy)]
struct Ids(usize);

impl Ids {
    fn show(self, i: usize) -> usize {
        i + self.0
    }

    fn show_set(self, set: &[usize]) -> Vec<usize> {
        set.iter().map(|&i| self.show(i)).collect()
    }

    fn read(self, i: usize) -> Result<usize, CliError> {
        i.checked_sub(self.0)
            .ok_or_else(|| CliError::input(format!("node id {i} is below index base {}", self.0)))
    }
}

pub fn run(cli: Cli) -> Result<u8, CliError> {
    let ids = Ids(cli.index_base as usize);
    let start = Instant::now();
    let (mut output, code) = match &cli.command {
        Command::Generate(args) => {
            let text = generate(args)?.to_edge_list();
            write_to(cli.output.as_deref(), |w| Ok(w.write_all(text.as_bytes())?))?;
            return Ok(0);
        }
        Command::Centrality(args) => (centrality(args, ids)?, 0),
        Command::Select(args) => (select(args, ids)?, 0),
        Command::Pairs(args) => (pairs(args, ids)?, 0),
        Command::Verify(args) => verify(args, ids)?,
        Command::Simulate(args) => (simulate(args, ids)?, 0),
    };
    output.report.params["index_base"] = json!(cli.index_base);
    output.report.timing_ms = start.elapsed().as_secs_f64() * 1e3;
    write_to(cli.output.as_deref(), |w| {
        output.write(cli.format, cli.table.as_deref(), w)
    })?;
    Ok(code)
}

fn write_to(
    path: Option<&Path>,
    emit: impl FnOnce(&mut dyn Write) -> Result<(), CliError>,
) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let file =
                File::create(p).map_err(|e| CliError::input(format!("{}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            emit(&mut w)?;
            w.flush()?;
        }
        None => {
            let mut w = io::stdout().lock();
            emit(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    Graph::parse_edge_list(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn report(
    command: &'static str,
    params: &impl Serialize,
    graph: Option<&Graph>,
    payload: Value,
) -> Report {
    Report {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        command,
        params: serde_json::to_value(params).expect("arguments serialize"),
        graph: graph.map(|g| GraphSummary {
            n: g.n(),
            edge_count: g.edge_count(),
        }),
        payload,
        timing_ms: 0.0,
    }
}

fn leader_mode(mode: ModeArg, k: Option<f64>) -> Result<LeaderMode, CliError> {
    match (mode, k) {
        (ModeArg::NoiseFree, None) => Ok(LeaderMode::NoiseFree),
        (ModeArg::NoiseFree, Some(_)) => Err(CliError::input("--k only applies to --mode gain")),
        (ModeArg::Gain, Some(k)) => Ok(LeaderMode::Gain(k).validate()?),
        (ModeArg::Gain, None) => Err(CliError::input("--mode gain needs --k")),
    }
}

fn mode_fields(mode: LeaderMode) -> (&'static str, Option<f64>) {
    match mode {
        LeaderMode::NoiseFree => ("noise-free", None),
        LeaderMode::Gain(k) => ("gain", Some(k)),
    }
}

fn check_sigma(sigma: f64) -> Result<(), CliError> {
    if sigma.is_finite() && sigma >= 0.0 {
        Ok(())
    } else {
        Err(CliError::input(format!(
            "--sigma must be finite and nonnegative, got {sigma}"
        )))
    }
}

fn centrality(args: &CentralityArgs, ids: Ids) -> Result<Output, CliError> {
    check_sigma(args.sigma)?;
    let g = load_graph(&args.graph)?;
    let kernels = compute_kernels(&g)?;
    let rep = centrality_report(&kernels, args.sigma);
    let n = g.n();
    let c = &rep.info_centrality;
    let c_max = c.max();
    let top: Vec<usize> = (0..n)
        .filter(|&i| c_max - c[i] <= TIE_TOL * c_max)
        .map(|i| ids.show(i))
        .collect();

    let mut nodes_table = Table::new(
        "nodes",
        vec!["node", "info_centrality", "lplus_diag", "certainty_inverse"],
    );
    let mut nodes = Vec::with_capacity(n);
    for i in 0..n {
        let lplus = kernels.lplus()[(i, i)];
        nodes.push(json!({
            "node": ids.show(i),
            "info_centrality": c[i],
            "lplus_diag": lplus,
            "certainty_inverse": rep.certainty_inverse[i],
        }));
        nodes_table.push(vec![
            ids.show(i).to_string(),
            num(c[i]),
            num(lplus),
            num(rep.certainty_inverse[i]),
        ]);
    }
    let mut payload = json!({
        "sigma": args.sigma,
        "kirchhoff": kernels.kirchhoff(),
        "max_centrality_nodes": top,
        "nodes": nodes,
    });
    let summary = Table::summary(vec![
        ("n", n.to_string()),
        ("edge_count", g.edge_count().to_string()),
        ("kirchhoff", num(kernels.kirchhoff())),
        ("sigma", num(args.sigma)),
        ("max_centrality_nodes", join_ids(&top)),
    ]);
    let mut tables = vec![nodes_table, summary];
    if args.matrices {
        let to_rows = |f: &dyn Fn(usize, usize) -> f64| -> Vec<Vec<f64>> {
            (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect()
        };
        payload["resistance"] = json!(to_rows(&|i, j| rep.resistance[(i, j)]));
        payload["biharmonic"] = json!(to_rows(&|i, j| rep.biharmonic[(i, j)]));
        let mut t = Table::new("matrices", vec!["i", "j", "resistance", "biharmonic"]);
        for i in 0..n {
            for j in i + 1..n {
                t.push(vec![
                    ids.show(i).to_string(),
                    ids.show(j).to_string(),
                    num(rep.resistance[(i, j)]),
                    num(rep.biharmonic[(i, j)]),
                ]);
            }
        }
        tables.push(t);
    }
    Ok(Output {
        report: report("centrality", args, Some(&g), payload),
        tables,
    })
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Exhaustive => "exhaustive",
        Method::Oracle => "oracle",
        Method::Greedy => "greedy",
        Method::ClosedFormCycle => "closed-form-cycle",
        Method::ClosedFormCycleTwo => "closed-form-cycle-two",
        Method::ClosedFormPathTwo => "closed-form-path-two",
    }
}

fn closed_form(
    g: &Graph,
    m: usize,
    mode: LeaderMode,
    topology: Option<Topology>,
    opts: &SelectOptions,
) -> Result<SelectionResult, CliError> {
    let n = g.n();
    match topology {
        None => Err(CliError::input(
            "--method closed-form needs --topology cycle|path",
        )),
        Some(Topology::Cycle) => {
            if !g.is_cycle() {
                return Err(Error::TopologyMismatch {
                    expected: format!("cycle 0-1-...-{}-0 with unit weights", n - 1),
                }
                .into());
            }
            match (m, mode) {
                (2, _) if n.is_multiple_of(2) => Ok(closed_form_cycle_two(n, mode, opts)?),
                (_, LeaderMode::NoiseFree) => Ok(closed_form_cycle(n, m, opts)?),
                _ => Err(CliError::input(
                    "cycle closed form with finite gain covers only m = 2 on even n",
                )),
            }
        }
        Some(Topology::Path) => {
            if !g.is_path() {
                return Err(Error::TopologyMismatch {
                    expected: format!("path 0-1-...-{} with unit weights", n - 1),
                }
                .into());
            }
            if m != 2 || mode != LeaderMode::NoiseFree {
                return Err(CliError::input(
                    "path closed form covers only m = 2 noise-free leaders",
                ));
            }
            Ok(closed_form_path_two(n, opts)?)
        }
    }
}

fn select(args: &SelectArgs, ids: Ids) -> Result<Output, CliError> {
    check_sigma(args.sigma)?;
    let mode = leader_mode(args.mode, args.k)?;
    let g = load_graph(&args.graph)?;
    let opts = SelectOptions {
        sigma: args.sigma,
        budget: args.budget as u128,
    };
    let res = match args.method {
        MethodArg::Exhaustive => exhaustive_select(&g, args.m, mode, &opts)?,
        MethodArg::Oracle => oracle_select(&g, args.m, mode, &opts)?,
        MethodArg::Greedy => greedy_select(&g, args.m, mode, &opts)?,
        MethodArg::ClosedForm => closed_form(&g, args.m, mode, args.topology, &opts)?,
    };
    let (mode_name, k) = mode_fields(res.mode);
    let sets: Vec<Vec<usize>> = res.optimal_sets.iter().map(|s| ids.show_set(s)).collect();
    let payload = json!({
        "optimal_sets": sets,
        "rho": res.objective.rho,
        "total_error": res.objective.total_error,
        "evaluated_count": res.evaluated_count,
        "method": method_name(res.method),
        "m": res.m,
        "mode": mode_name,
        "k": k,
        "sigma": args.sigma,
    });
    let mut sets_table = Table::new("sets", vec!["rank", "members", "rho", "total_error"]);
    for (i, s) in sets.iter().enumerate() {
        sets_table.push(vec![
            i.to_string(),
            join_ids(s),
            num(res.objective.rho),
            num(res.objective.total_error),
        ]);
    }
    let summary = Table::summary(vec![
        ("method", method_name(res.method).to_string()),
        ("m", res.m.to_string()),
        ("mode", mode_name.to_string()),
        ("k", k.map(num).unwrap_or_default()),
        ("rho", num(res.objective.rho)),
        ("total_error", num(res.objective.total_error)),
        ("evaluated_count", res.evaluated_count.to_string()),
        ("optimal_set_count", sets.len().to_string()),
    ]);
    Ok(Output {
        report: report("select", args, Some(&g), payload),
        tables: vec![sets_table, summary],
    })
}

fn read_pair_list(path: &Path, n: usize, ids: Ids) -> Result<Vec<(usize, usize)>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fail = |msg: String| {
            CliError::input(format!("{}: line {}: {msg}", path.display(), lineno + 1))
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(fail(format!("expected two node ids, got {:?}", line)));
        }
        let mut pair = [0usize; 2];
        for (slot, f) in pair.iter_mut().zip(&fields) {
            let raw: usize = f.parse().map_err(|_| fail(format!("bad node id {f:?}")))?;
            let id = ids.read(raw).map_err(|e| fail(e.message))?;
            if id >= n {
                return Err(fail(format!("node {raw} out of range for n={n}")));
            }
            *slot = id;
        }
        if pair[0] == pair[1] {
            return Err(fail(format!("pair repeats node {}", fields[0])));
        }
        pairs.push((pair[0], pair[1]));
    }
    Ok(pairs)
}

fn pairs(args: &PairsArgs, ids: Ids) -> Result<Output, CliError> {
    let g = load_graph(&args.graph)?;
    let kernels = compute_kernels(&g)?;
    let opts = SweepOptions {
        bins: args.bins,
        budget: args.budget as u128,
    };
    let sweep = match &args.pairs {
        Some(path) => {
            let list = read_pair_list(path, g.n(), ids)?;
            pairwise_sweep_restricted(&kernels, &list, &opts)?
        }
        None => pairwise_sweep(&kernels, &opts)?,
    };
    let mut pairs_table = Table::new("pairs", vec!["s1", "s2", "rho"]);
    let mut rows = Vec::with_capacity(sweep.rows.len());
    for r in &sweep.rows {
        let (s1, s2) = (ids.show(r.s1), ids.show(r.s2));
        rows.push(json!({ "s1": s1, "s2": s2, "rho": r.rho }));
        pairs_table.push(vec![s1.to_string(), s2.to_string(), num(r.rho)]);
    }
    let h = &sweep.histogram;
    let mut hist_table = Table::new("histogram", vec!["bin", "lower", "upper", "count"]);
    for (b, count) in h.counts.iter().enumerate() {
        hist_table.push(vec![
            b.to_string(),
            num(h.edges[b]),
            num(h.edges[b + 1]),
            count.to_string(),
        ]);
    }
    let payload = json!({
        "restricted": args.pairs.is_some(),
        "rows": rows,
        "histogram": { "edges": h.edges, "counts": h.counts, "occupied_bins": h.occupied_bins() },
    });
    Ok(Output {
        report: report("pairs", args, Some(&g), payload),
        tables: vec![pairs_table, hist_table],
    })
}

fn build_suite(args: &VerifyArgs) -> Result<(Vec<SuiteGraph>, Option<Graph>), CliError> {
    if let Some(path) = &args.graph {
        let g = load_graph(path)?;
        let label = path.display().to_string();
        return Ok((
            vec![SuiteGraph {
                label,
                graph: g.clone(),
            }],
            Some(g),
        ));
    }
    let suite = match args.suite.expect("clap requires graph or suite") {
        SuiteArg::Small => enumerated_suite(4..=5)?,
        SuiteArg::Random => random_suite(args.count, 4, 12, args.seed)?,
        SuiteArg::Full => {
            let mut s = enumerated_suite(4..=6)?;
            s.extend(random_suite(args.count, 4, 12, args.seed)?);
            s
        }
    };
    Ok((suite, None))
}

fn verify(args: &VerifyArgs, ids: Ids) -> Result<(Output, u8), CliError> {
    if !(args.tol.is_finite() && args.tol >= 0.0) {
        return Err(CliError::input(format!(
            "--tol must be finite and nonnegative, got {}",
            args.tol
        )));
    }
    let opts = VerifyOptions {
        max_m: args.max_m,
        tol: args.tol,
        ..VerifyOptions::default()
    };
    let (suite, single) = build_suite(args)?;
    let rep: VerifyReport = match &single {
        Some(g) => verify_graph(&suite[0].label, g, &opts)?,
        None => verify_suite(&suite, &opts)?,
    };
    let mut violations = Vec::new();
    let mut table = Table::new(
        "violations",
        vec![
            "graph",
            "members",
            "mode",
            "k",
            "implied_error",
            "oracle_error",
            "rel_deviation",
        ],
    );
    for v in &rep.violations {
        let (mode, k) = mode_fields(v.mode);
        let members = ids.show_set(&v.members);
        violations.push(json!({
            "graph": v.graph,
            "members": members,
            "mode": mode,
            "k": k,
            "implied_error": v.implied_error,
            "oracle_error": v.oracle_error,
            "rel_deviation": v.rel_deviation,
        }));
        table.push(vec![
            v.graph.clone(),
            join_ids(&members),
            mode.to_string(),
            k.map(num).unwrap_or_default(),
            num(v.implied_error),
            num(v.oracle_error),
            num(v.rel_deviation),
        ]);
        eprintln!(
            "identity violation: graph {} S={{{}}} {mode}{}: relative deviation {:e}",
            v.graph,
            join_ids(&members),
            k.map(|k| format!(" k={k}")).unwrap_or_default(),
            v.rel_deviation
        );
    }
    let labels: Vec<&str> = suite.iter().map(|s| s.label.as_str()).collect();
    let payload = json!({
        "graphs": rep.graphs,
        "graph_labels": labels,
        "noise_free_checks": rep.noise_free_checks,
        "gain_checks": rep.gain_checks,
        "gains": opts.gains,
        "tolerance": opts.tol,
        "max_rel_deviation": rep.max_rel_deviation(),
        "max_rel_deviation_noise_free": rep.max_rel_deviation_noise_free,
        "max_rel_deviation_gain": rep.max_rel_deviation_gain,
        "passed": rep.passed(),
        "violations": violations,
    });
    let summary = Table::summary(vec![
        ("graphs", rep.graphs.to_string()),
        ("noise_free_checks", rep.noise_free_checks.to_string()),
        ("gain_checks", rep.gain_checks.to_string()),
        ("tolerance", num(opts.tol)),
        ("max_rel_deviation", num(rep.max_rel_deviation())),
        (
            "max_rel_deviation_noise_free",
            num(rep.max_rel_deviation_noise_free),
        ),
        ("max_rel_deviation_gain", num(rep.max_rel_deviation_gain)),
        ("passed", rep.passed().to_string()),
    ]);
    let code = if rep.passed() { 0 } else { EXIT_IDENTITY };
    Ok((
        Output {
            report: report("verify", args, single.as_ref(), payload),
            tables: vec![summary, table],
        },
        code,
    ))
}

fn simulate(args: &SimulateArgs, ids: Ids) -> Result<Output, CliError> {
    let mode = leader_mode(args.mode, args.k)?;
    let g = load_graph(&args.graph)?;
    let leaders = args
        .leaders
        .iter()
        .map(|&i| ids.read(i))
        .collect::<Result<Vec<_>, _>>()?;
    let cfg = SimConfig {
        dt: args.dt,
        burn_in: args.burn_in.unwrap_or(args.steps / 10),
        sigma: args.sigma,
        seed: args.seed,
        mu: args.mu,
        ..SimConfig::new(mode).with_steps(args.steps)
    };
    let res = simulate_replicas(&g, &leaders, &cfg, args.replicas)?;
    let analytic = match mode {
        LeaderMode::NoiseFree => oracle_error_noise_free(&g, &leaders, args.sigma)?,
        LeaderMode::Gain(k) => oracle_error_gain(&g, &leaders, k, args.sigma)?,
    };
    let mut table = Table::new(
        "nodes",
        vec!["node", "leader", "empirical_variance", "analytic_variance"],
    );
    let mut nodes = Vec::with_capacity(g.n());
    for i in 0..g.n() {
        let leader = leaders.contains(&i);
        let (emp, ana) = (res.empirical_variance[i], analytic.per_node_variance[i]);
        nodes.push(json!({
            "node": ids.show(i),
            "leader": leader,
            "empirical_variance": emp,
            "analytic_variance": ana,
        }));
        table.push(vec![
            ids.show(i).to_string(),
            leader.to_string(),
            num(emp),
            num(ana),
        ]);
    }
    let payload = json!({
        "empirical_total_error": res.empirical_total_error,
        "analytic_total_error": res.analytic_total_error,
        "relative_gap": res.relative_gap(),
        "sample_count": res.sample_count,
        "seed_used": res.seed_used,
        "replicas": res.replicas,
        "nodes": nodes,
    });
    let summary = Table::summary(vec![
        ("empirical_total_error", num(res.empirical_total_error)),
        ("analytic_total_error", num(res.analytic_total_error)),
        ("relative_gap", num(res.relative_gap())),
        ("sample_count", res.sample_count.to_string()),
        ("seed_used", res.seed_used.to_string()),
        ("replicas", res.replicas.to_string()),
    ]);
    Ok(Output {
        report: report("simulate", args, Some(&g), payload),
        tables: vec![table, summary],
    })
}

fn generate(args: &GenerateArgs) -> Result<Graph, CliError> {
    Ok(match args.kind {
        GraphKind::Cycle => cycle(args.n)?,
        GraphKind::Path => path(args.n)?,
        GraphKind::Complete => complete(args.n)?,
        GraphKind::Er => erdos_renyi(args.n, args.p, args.seed)?,
    })
}
