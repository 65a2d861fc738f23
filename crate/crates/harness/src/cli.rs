//! `graphseed` command line. Exit status: 0 on success, 1 when the requested design is
//! infeasible (a feasibility condition fails or the spectrum is unusable), 2 on usage
//! errors such as bad flags or unreadable files.
//!
//! Seeding values are indexed by `(node, time)`; in stacked form the value of node `i`
//! at time `t` of a `τ`-step seeding phase sits at `i·τ + (τ−1−t)`, so each node's values
//! run from the last instant back to the first.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use graphseed_core::{
    build_shift, constant_snr_objective, decompose, degree_reduced_design, exact_plan, for_each_subset, gft,
    reconstruct_from, select_constant_snr, select_fixed_noise, sparse_location_design, spectrum_census, Basis64,
    Complex64, Error, Graph, Plan64, ReconstructionOperator, Scheme, SelectionMethod, SelectionPattern, Shift64,
    ShiftChoice, Signal64, Tolerances,
};
use serde::Serialize;

use crate::config::{ExperimentConfig, ExperimentKind, FilterChoice, GraphSpec};
use crate::experiment::{format_pattern, lowpass_filter, run_experiment, write_outputs};
use crate::generators::{gen_cycle, gen_er, karate};
use crate::io::{emit_csv, emit_json, load_graph, load_signal, read_text};
use crate::signals::{random_bandlimited, SpectrumLaw};
use crate::substream;

#[derive(Parser, Debug)]
#[command(name = "graphseed", version, about = "Seeding-based reconstruction of bandlimited graph signals")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Master seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub tol_distinct: Option<f64>,
    #[arg(long, global = true)]
    pub tol_zero: Option<f64>,
    #[arg(long, global = true)]
    pub tol_rank: Option<f64>,
    #[arg(long, global = true)]
    pub tol_annihilate: Option<f64>,
    #[arg(long, global = true)]
    pub tol_recovery: Option<f64>,
    #[arg(long, global = true)]
    pub tol_cond_max: Option<f64>,
    #[arg(long, global = true)]
    pub tol_tie: Option<f64>,
    #[arg(long, global = true)]
    pub tol_reconstruction: Option<f64>,
}

impl Global {
    pub fn tolerances(&self) -> Tolerances {
        let mut t = Tolerances::default();
        let set = |dst: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *dst = v;
            }
        };
        set(&mut t.distinct, self.tol_distinct);
        set(&mut t.zero, self.tol_zero);
        set(&mut t.rank, self.tol_rank);
        set(&mut t.annihilate, self.tol_annihilate);
        set(&mut t.recovery, self.tol_recovery);
        set(&mut t.cond_max, self.tol_cond_max);
        set(&mut t.tie, self.tol_tie);
        set(&mut t.reconstruction, self.tol_reconstruction);
        t
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftArg {
    Adjacency,
    Laplacian,
    /// `I − αL` with `α = 1/λ_max(L)` unless `--alpha` is given.
    Normalized,
}

impl From<ShiftArg> for ShiftChoice {
    fn from(s: ShiftArg) -> Self {
        match s {
            ShiftArg::Adjacency => ShiftChoice::Adjacency,
            ShiftArg::Laplacian => ShiftChoice::Laplacian,
            ShiftArg::Normalized => ShiftChoice::NormalizedLaplacianShift,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorArg {
    Er,
    Cycle,
    Karate,
}

/// Where the graph comes from: a file, or a generator.
#[derive(Args, Debug, Clone)]
pub struct GraphArgs {
    /// Graph file (JSON, or CSV edge list).
    #[arg(long, conflicts_with = "generator")]
    pub graph: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub generator: Option<GeneratorArg>,
    /// Node count for generated graphs and CSV input.
    #[arg(long)]
    pub n: Option<usize>,
    /// Edge probability for `er`.
    #[arg(long, default_value_t = 0.3)]
    pub p_edge: f64,
    /// Treat a CSV edge list as directed.
    #[arg(long)]
    pub directed: bool,
    #[arg(long, value_enum, default_value_t = ShiftArg::Adjacency)]
    pub shift: ShiftArg,
    #[arg(long)]
    pub alpha: Option<f64>,
}

impl GraphArgs {
    pub fn graph(&self, seed: u64) -> Result<Graph> {
        match (&self.graph, self.generator) {
            (Some(path), _) => load_graph(path, self.n, self.directed),
            (None, Some(GeneratorArg::Er)) => {
                let n = self.n.ok_or_else(|| usage("--generator er needs --n"))?;
                Ok(gen_er(n, self.p_edge, &mut substream(seed, 0))?)
            }
            (None, Some(GeneratorArg::Cycle)) => {
                Ok(gen_cycle(self.n.ok_or_else(|| usage("--generator cycle needs --n"))?)?)
            }
            (None, Some(GeneratorArg::Karate)) => Ok(karate()),
            (None, None) => Err(usage("give --graph FILE or --generator")),
        }
    }

    pub fn shift_and_basis(&self, g: &Global) -> Result<(Shift64, Basis64)> {
        let graph = self.graph(g.seed)?;
        let shift: Shift64 = build_shift(&graph, self.shift.into(), self.alpha)?;
        let basis = decompose(&shift, &g.tolerances())?;
        Ok((shift, basis))
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeArg {
    MnSt,
    SnMt,
    MnMt,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::MnSt => Scheme::MnSt,
            SchemeArg::SnMt => Scheme::SnMt,
            SchemeArg::MnMt => Scheme::MnMt,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// `trace(M⁻¹)·trace(M)` for noise proportional to the seeding energy.
    ConstantSnr,
    /// `trace(M)` for noise of fixed power.
    FixedPower,
    /// Fewest seeds for a target signal, each costing `--gamma`.
    Sparse,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Exhaustive,
    Greedy,
    L1,
}

impl From<Strategy> for SelectionMethod {
    fn from(s: Strategy) -> Self {
        match s {
            Strategy::Exhaustive => SelectionMethod::Exhaustive,
            Strategy::Greedy => SelectionMethod::GreedyForward,
            Strategy::L1 => SelectionMethod::L1Relaxed,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Demo {
    Karate,
    Cycle,
    Er,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Eigendecomposition of the shift in frequency order.
    Decompose {
        #[command(flatten)]
        graph: GraphArgs,
        /// Also report the spectrum census for this bandwidth.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Seeding values and filter that reconstruct a target signal.
    Design {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        #[arg(long)]
        k: usize,
        /// Seeding nodes (MN-ST) or the single seeding node (SN-MT).
        #[arg(long, value_delimiter = ',')]
        nodes: Vec<usize>,
        /// Injections per node: SN-MT budget, or per-node count of an MN-MT grid.
        #[arg(long)]
        values: Option<usize>,
        /// Explicit MN-MT pairs `node@time`, comma separated.
        #[arg(long, value_delimiter = ',')]
        pairs: Vec<String>,
        /// Seeding duration for `--pairs`.
        #[arg(long)]
        tau: Option<usize>,
        /// Target signal file.
        #[arg(long)]
        target: PathBuf,
        /// Zero inactive frequencies by seeding where the budget allows, shortening the filter.
        #[arg(long)]
        degree_reduced: bool,
    },
    /// Runs a plan: seeding trace, filter stages and errors.
    Reconstruct {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        plan: PathBuf,
        #[arg(long)]
        target: PathBuf,
        /// Signal already present when seeding starts.
        #[arg(long)]
        initial: Option<PathBuf>,
    },
    /// Chooses seeding locations.
    Select {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        k: usize,
        /// Seeding budget.
        #[arg(long)]
        p: Option<usize>,
        #[arg(long, default_value_t = 1)]
        tau: usize,
        #[arg(long, value_enum, default_value_t = Objective::ConstantSnr)]
        objective: Objective,
        #[arg(long, value_enum, default_value_t = Strategy::Exhaustive)]
        strategy: Strategy,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        /// Target signal for `--objective sparse`.
        #[arg(long)]
        target: Option<PathBuf>,
    },
    /// Runs an experiment described by a JSON config.
    Experiment {
        config: PathBuf,
        /// Directory for summary.json, trials.csv and curves.csv (overrides the config).
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Small self-contained demonstrations.
    Demo {
        #[arg(value_enum)]
        which: Demo,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        k: usize,
        /// Signal draws for `karate`.
        #[arg(long, default_value_t = 20)]
        signals: usize,
    },
}

#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(Usage(msg.into()))
}

/// Exit status for an error chain.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if cause.is::<Usage>() || cause.is::<std::io::Error>() || cause.is::<serde_json::Error>() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::ConditionViolation { .. }
                | Error::KernelDimension { .. }
                | Error::RankDeficient { .. }
                | Error::NodeCannotExpress { .. }
                | Error::DegenerateSpectrum { .. }
                | Error::Infeasible { .. }
                | Error::BudgetTooSmall { .. }
                | Error::NonDiagonalizable { .. }
                | Error::Eigen(_) => 1,
                _ => 2,
            };
        }
    }
    2
}

/// Parses `argv` and runs; returns the exit status. Diagnostics go to standard error.
pub fn main_with_args<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}

#[derive(Serialize)]
struct EigenRow {
    index: usize,
    re: f64,
    im: f64,
    abs: f64,
}

#[derive(Serialize)]
struct DecomposeOut<'a> {
    n: usize,
    eigenvalues: &'a [Complex64],
    cond_v: f64,
    residual: f64,
    unitary: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    census: Option<graphseed_core::SpectrumCensus>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bandwidth_tie: Option<bool>,
}

#[derive(Serialize)]
struct StageRow {
    phase: &'static str,
    step: usize,
    node: usize,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct ReportOut<'a> {
    relative_error: f64,
    imag_residue: f64,
    cond: f64,
    feasibility: &'a graphseed_core::Feasibility,
    per_frequency_residual: &'a [f64],
    z: &'a [Complex64],
    seeding_trace: Vec<&'a [Complex64]>,
    filter_trace: Vec<&'a [Complex64]>,
}

fn parse_pair(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s.split_once('@').ok_or_else(|| usage(format!("pair {s:?} is not node@time")))?;
    let node = a.trim().parse().map_err(|_| usage(format!("bad node in {s:?}")))?;
    let time = b.trim().parse().map_err(|_| usage(format!("bad time in {s:?}")))?;
    Ok((node, time))
}

fn design_pattern(
    scheme: SchemeArg,
    nodes: &[usize],
    values: Option<usize>,
    pairs: &[String],
    tau: Option<usize>,
) -> Result<SelectionPattern> {
    Ok(match scheme {
        SchemeArg::MnSt => {
            if nodes.is_empty() {
                bail!(usage("MN-ST needs --nodes"));
            }
            SelectionPattern::mnst(nodes)
        }
        SchemeArg::SnMt => {
            let [node] = nodes else { bail!(usage("SN-MT needs exactly one --nodes entry")) };
            let p = values.ok_or_else(|| usage("SN-MT needs --values"))?;
            SelectionPattern::snmt(*node, p)
        }
        SchemeArg::MnMt if !pairs.is_empty() => {
            let pairs: Vec<(usize, usize)> = pairs.iter().map(|s| parse_pair(s)).collect::<Result<_>>()?;
            let tau = tau.unwrap_or_else(|| pairs.iter().map(|p| p.1 + 1).max().unwrap_or(1));
            SelectionPattern::new(tau, pairs).map_err(|e| usage(e.to_string()))?
        }
        SchemeArg::MnMt => {
            let v = values.ok_or_else(|| usage("MN-MT needs --pairs, or --nodes with --values"))?;
            if nodes.is_empty() {
                bail!(usage("MN-MT needs --nodes with --values"));
            }
            SelectionPattern::grid(v, nodes, &(0..v).collect::<Vec<_>>())
        }
    })
}

fn emit<T: Serialize, R: Serialize>(g: &Global, json: &T, rows: impl FnOnce() -> Vec<R>) -> Result<()> {
    match g.format {
        Format::Json => emit_json(json, g.out.as_deref()),
        Format::Csv => emit_csv(&rows(), g.out.as_deref()),
    }
}

fn load_existing(path: &Path) -> Result<Signal64> {
    if !path.exists() {
        bail!(usage(format!("{} does not exist", path.display())));
    }
    load_signal(path)
}

pub fn run(cli: &Cli) -> Result<()> {
    let g = &cli.global;
    match &cli.command {
        Command::Decompose { graph, k } => {
            let (_, basis) = graph.shift_and_basis(g)?;
            let census = match k {
                Some(k) => Some(spectrum_census(&basis, *k, None, basis.tol.distinct)?),
                None => None,
            };
            let out = DecomposeOut {
                n: basis.n(),
                eigenvalues: &basis.eigenvalues,
                cond_v: basis.cond_v,
                residual: basis.residual,
                unitary: basis.unitary,
                census,
                bandwidth_tie: k.map(|k| basis.bandwidth_tie(k)),
            };
            emit(g, &out, || {
                basis
                    .eigenvalues
                    .iter()
                    .enumerate()
                    .map(|(index, l)| EigenRow { index, re: l.re, im: l.im, abs: l.norm() })
                    .collect()
            })
        }
        Command::Design { graph, scheme, k, nodes, values, pairs, tau, target, degree_reduced } => {
            let (_, basis) = graph.shift_and_basis(g)?;
            let y = load_existing(target)?;
            if y.len() != basis.n() {
                bail!(usage(format!("target has {} entries, graph has {} nodes", y.len(), basis.n())));
            }
            let pattern = design_pattern(*scheme, nodes, *values, pairs, *tau)?;
            let yk = gft(&basis, &y)?.coeffs[..*k].to_vec();
            let plan = if *degree_reduced {
                degree_reduced_design(&basis, *k, &pattern, &yk)?
            } else {
                exact_plan(&basis, *k, (*scheme).into(), &pattern, &yk)?
            };
            emit(g, &plan, || {
                plan.schedule
                    .pattern
                    .pairs
                    .iter()
                    .zip(&plan.schedule.values)
                    .map(|(&(node, step), v)| StageRow { phase: "injection", step, node, re: v.re, im: v.im })
                    .collect()
            })
        }
        Command::Reconstruct { graph, plan, target, initial } => {
            let (shift, basis) = graph.shift_and_basis(g)?;
            let plan: Plan64 = serde_json::from_str(&read_text(plan)?).context("plan file")?;
            let y = load_existing(target)?;
            let init = initial.as_deref().map(load_existing).transpose()?;
            let rep = reconstruct_from(&shift, &basis, &plan, &y, init.as_ref())?;
            let out = ReportOut {
                relative_error: rep.relative_error,
                imag_residue: rep.imag_residue,
                cond: rep.cond,
                feasibility: &rep.feasibility,
                per_frequency_residual: &rep.per_frequency_residual,
                z: &rep.z.values,
                seeding_trace: rep.seeding_trace.iter().map(|s| s.values.as_slice()).collect(),
                filter_trace: rep.filter_trace.iter().map(|s| s.values.as_slice()).collect(),
            };
            emit(g, &out, || {
                let mut rows = Vec::new();
                for (phase, trace) in [("seeding", &rep.seeding_trace), ("filter", &rep.filter_trace)] {
                    for (step, x) in trace.iter().enumerate() {
                        for (node, v) in x.values.iter().enumerate() {
                            rows.push(StageRow { phase, step, node, re: v.re, im: v.im });
                        }
                    }
                }
                rows
            })
        }
        Command::Select { graph, k, p, tau, objective, strategy, gamma, target } => {
            let (_, basis) = graph.shift_and_basis(g)?;
            let filter = lowpass_filter(&basis, *k, FilterChoice::Auto)?;
            let op = ReconstructionOperator::new(&basis, &filter, *k, *tau)?;
            let sel = match objective {
                Objective::ConstantSnr => {
                    select_constant_snr(&op, p.ok_or_else(|| usage("--p is required"))?, (*strategy).into(), None)?
                }
                Objective::FixedPower => {
                    select_fixed_noise(&op, p.ok_or_else(|| usage("--p is required"))?, (*strategy).into(), None)?
                }
                Objective::Sparse => {
                    let t = target.as_deref().ok_or_else(|| usage("--objective sparse needs --target"))?;
                    let y = load_existing(t)?;
                    if y.len() != basis.n() {
                        bail!(usage(format!("target has {} entries, graph has {} nodes", y.len(), basis.n())));
                    }
                    sparse_location_design(&op, &y, *gamma, (*strategy).into(), *p)?.selection
                }
            };
            emit(g, &sel, || {
                sel.pattern
                    .pairs
                    .iter()
                    .map(|&(node, step)| StageRow { phase: "selected", step, node, re: sel.objective_value, im: 0.0 })
                    .collect()
            })
        }
        Command::Experiment { config, output_dir } => {
            if !config.exists() {
                bail!(usage(format!("{} does not exist", config.display())));
            }
            let mut cfg: ExperimentConfig = serde_json::from_str(&read_text(config)?)
                .with_context(|| format!("{} is not a valid experiment config", config.display()))?;
            cfg.seed = if g.seed != 0 { g.seed } else { cfg.seed };
            cfg.validate().map_err(|e| usage(e.to_string()))?;
            let summary = run_experiment(&cfg)?;
            if let Some(dir) = output_dir.as_ref().or(cfg.output.as_ref()) {
                write_outputs(&summary, dir)?;
            }
            match g.format {
                Format::Json => emit_json(&summary, g.out.as_deref()),
                Format::Csv if summary.curves.is_empty() => emit_csv(&summary.schemes, g.out.as_deref()),
                Format::Csv => emit_csv(&summary.curves, g.out.as_deref()),
            }
        }
        Command::Demo { which, n, k, signals } => demo(g, *which, *n, *k, *signals),
    }
}

#[derive(Serialize)]
struct CycleRow {
    nodes: String,
    objective: f64,
    uniform: bool,
    argmin: bool,
}

#[derive(Serialize)]
struct ErRow {
    scheme: Scheme,
    locations: String,
    relative_error: f64,
    cond: f64,
}

fn demo(g: &Global, which: Demo, n: usize, k: usize, signals: usize) -> Result<()> {
    let tol = g.tolerances();
    match which {
        Demo::Cycle => {
            if k == 0 || k > n || n % k != 0 {
                bail!(usage("cycle demo needs K dividing N"));
            }
            let shift: Shift64 = build_shift(&gen_cycle(n)?, ShiftChoice::Adjacency, None)?;
            let basis = decompose(&shift, &tol)?;
            let ideal: Vec<Complex64> = (0..n).map(|j| Complex64::new(if j < k { 1.0 } else { 0.0 }, 0.0)).collect();
            let filter = graphseed_core::design_from_response(&basis, &ideal)?;
            let op = ReconstructionOperator::new(&basis, &filter, k, 1)?;
            let mut rows = Vec::new();
            let step = n / k;
            for_each_subset(&(0..n).collect::<Vec<_>>(), k, |s| {
                let uniform = s.windows(2).all(|w| w[1] - w[0] == step);
                rows.push(CycleRow {
                    nodes: s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(";"),
                    objective: constant_snr_objective(&op, s),
                    uniform,
                    argmin: false,
                });
            });
            let best = rows.iter().map(|r| r.objective).fold(f64::INFINITY, f64::min);
            for r in &mut rows {
                r.argmin = r.objective <= best * (1.0 + 1e-9);
            }
            emit_table(g, &rows)
        }
        Demo::Er => {
            let mut rng = substream(g.seed, 0);
            let graph = gen_er(n.max(k), 0.3, &mut rng)?;
            let shift: Shift64 = build_shift(&graph, ShiftChoice::Adjacency, None)?;
            let basis = decompose(&shift, &tol)?;
            let (y, yk) = random_bandlimited(&basis, k, &mut rng, SpectrumLaw::UnitGaussian)?;
            let nodes: Vec<usize> = (0..k).collect();
            let half = k.div_ceil(2);
            let patterns = [
                (Scheme::MnSt, SelectionPattern::mnst(&nodes)),
                (Scheme::SnMt, SelectionPattern::snmt(0, k)),
                (Scheme::MnMt, SelectionPattern::grid(2, &nodes[..half], &[0, 1])),
            ];
            let mut rows = Vec::new();
            for (scheme, pat) in patterns {
                let (err, cond) = match exact_plan(&basis, k, scheme, &pat, &yk) {
                    Ok(plan) => (graphseed_core::reconstruct(&shift, &basis, &plan, &y)?.relative_error, plan.cond),
                    Err(e) => {
                        eprintln!("{}: {e}", scheme.label());
                        (f64::NAN, f64::NAN)
                    }
                };
                rows.push(ErRow { scheme, locations: format_pattern(&pat), relative_error: err, cond });
            }
            emit_table(g, &rows)
        }
        Demo::Karate => {
            let cfg = ExperimentConfig {
                name: "karate".into(),
                experiment: ExperimentKind::InsufficientSeeding,
                graph: GraphSpec::Karate,
                shift: ShiftChoice::NormalizedLaplacianShift,
                k: 5,
                schemes: Scheme::ALL.to_vec(),
                budget: None,
                budgets: None,
                mnmt: Default::default(),
                filter: FilterChoice::Product,
                noise: None,
                trials: signals.max(1),
                seed: g.seed,
                output: None,
                tolerances: tol,
                recovery_threshold: 1e-6,
            };
            let summary = run_experiment(&cfg)?;
            emit_table(g, &summary.curves)
        }
    }
}

fn emit_table<R: Serialize>(g: &Global, rows: &[R]) -> Result<()> {
    match g.format {
        Format::Json => emit_json(rows, g.out.as_deref()),
        Format::Csv => emit_csv(rows, g.out.as_deref()),
    }
}
