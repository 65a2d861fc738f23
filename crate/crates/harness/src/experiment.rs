//! Monte-Carlo experiments: the three-scheme recovery comparison on random graphs and
//! the insufficient-seeding curves on a fixed graph.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use graphseed_core::{
    binomial, build_shift, decompose, design_annihilating_product, design_lowpass_kernel, feasibility, for_each_subset,
    plan_with_filter, reconstruct, Basis64, Complex64, Error, Feasibility, Filter64, NoiseModel, Plan64,
    ReconstructionOperator, Scheme, SelectionPattern, Shift64, Signal64, EXHAUSTIVE_LIMIT,
};
use log::{debug, info};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, ExperimentKind, FilterChoice, GraphSpec, NoiseKind, NoiseSpec};
use crate::generators::{gen_cycle, gen_er, is_connected, karate};
use crate::io::load_graph;
use crate::signals::{random_bandlimited, SpectrumLaw};
use crate::substream;

const MAX_REDRAWS: u64 = 10_000;

/// One row of `trials.csv`: a graph (or signal draw), a scheme and a location choice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub scheme: Scheme,
    pub budget: usize,
    /// `node@time` pairs separated by `;`.
    pub locations: String,
    pub edge_probability: Option<f64>,
    /// A seeding design exists for this choice.
    pub feasible: bool,
    pub perfect: bool,
    pub noiseless_error: Option<f64>,
    pub noisy_error: Option<f64>,
    pub cond: Option<f64>,
    pub distinct_bands: bool,
    pub full_rank: bool,
    pub node_expresses_band: Option<bool>,
    pub distinct_active: Option<bool>,
    pub bandwidth_tie: bool,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeSummary {
    pub scheme: Scheme,
    /// Location choices per graph.
    pub location_choices: usize,
    /// Mean over graphs of the per-graph percentage of perfect noiseless recoveries.
    pub recovery_pct: f64,
    /// Median over graphs of the per-graph minimum noisy error.
    pub min_error: Option<f64>,
    /// Median over graphs of the per-graph median noisy error.
    pub median_error: Option<f64>,
    /// Graphs with at least one feasible choice, i.e. entering the error medians.
    pub graphs_with_feasible_choice: usize,
}

/// One point of `curves.csv`: best achievable error for budget `p`, over signal draws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub p: usize,
    pub scheme: Scheme,
    pub mean_error: f64,
    pub median_error: f64,
    pub max_error: f64,
    /// `exhaustive`, or `local_search` when the enumeration would exceed the limit.
    pub search: String,
    pub patterns_evaluated: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub name: String,
    pub experiment: ExperimentKind,
    pub seed: u64,
    pub trials: usize,
    pub k: usize,
    /// Random graphs discarded because they were not diagonalizable or an active and an
    /// inactive frequency shared an eigenvalue.
    pub redraws: u64,
    pub schemes: Vec<SchemeSummary>,
    pub curves: Vec<CurvePoint>,
    pub config: ExperimentConfig,
    #[serde(skip)]
    pub records: Vec<TrialRecord>,
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    cfg.validate()?;
    match cfg.experiment {
        ExperimentKind::RecoveryComparison => run_recovery_comparison(cfg),
        ExperimentKind::InsufficientSeeding => run_insufficient_seeding(cfg),
    }
}

/// Writes `summary.json`, `trials.csv` and `curves.csv` into `dir`.
pub fn write_outputs(summary: &ExperimentSummary, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    crate::io::emit_json(summary, Some(&dir.join("summary.json")))?;
    crate::io::emit_csv(&summary.records, Some(&dir.join("trials.csv")))?;
    crate::io::emit_csv(&summary.curves, Some(&dir.join("curves.csv")))?;
    Ok(())
}

pub fn format_pattern(p: &SelectionPattern) -> String {
    p.pairs.iter().map(|(i, t)| format!("{i}@{t}")).collect::<Vec<_>>().join(";")
}

fn fixed_graph(spec: &GraphSpec) -> Result<Option<graphseed_core::Graph>> {
    Ok(match spec {
        GraphSpec::Er { .. } => None,
        GraphSpec::Cycle { n } => Some(gen_cycle(*n)?),
        GraphSpec::Karate => Some(karate()),
        GraphSpec::File { path, directed } => Some(load_graph(path, None, *directed)?),
    })
}

struct Instance {
    shift: Shift64,
    basis: Basis64,
    filter: Filter64,
    edge_probability: Option<f64>,
    redraws: u64,
}

/// Annihilating low-pass filter of bandwidth `k` of the requested kind.
pub fn lowpass_filter(basis: &Basis64, k: usize, choice: FilterChoice) -> Result<Filter64, Error> {
    let product = || {
        if let Some((active, inactive)) = basis.active_inactive_collision(k) {
            return Err(Error::ConditionViolation { active, inactive });
        }
        let kill: Vec<usize> = (k..basis.n()).collect();
        design_annihilating_product(basis, &kill, Complex64::new(1.0, 0.0))
    };
    match choice {
        FilterChoice::Kernel => design_lowpass_kernel(basis, k),
        FilterChoice::Product => product(),
        FilterChoice::Auto => match design_lowpass_kernel(basis, k) {
            Err(Error::KernelDimension { .. }) => product(),
            other => other,
        },
    }
}

fn prepare(cfg: &ExperimentConfig, g: &graphseed_core::Graph) -> Result<(Shift64, Basis64, Filter64), Error> {
    let shift: Shift64 = build_shift(g, cfg.shift, None)?;
    let basis = decompose(&shift, &cfg.tolerances)?;
    if cfg.k > basis.n() {
        return Err(Error::InvalidArgument(format!("bandwidth {} exceeds {} nodes", cfg.k, basis.n())));
    }
    let filter = lowpass_filter(&basis, cfg.k, cfg.filter)?;
    Ok((shift, basis, filter))
}

/// Draws the trial's graph; random graphs that cannot be decomposed or violate the
/// distinct-band condition are redrawn.
fn draw_instance(
    cfg: &ExperimentConfig,
    fixed: Option<&graphseed_core::Graph>,
    rng: &mut impl Rng,
) -> Result<Instance> {
    if let Some(g) = fixed {
        let (shift, basis, filter) = prepare(cfg, g)?;
        return Ok(Instance { shift, basis, filter, edge_probability: None, redraws: 0 });
    }
    let GraphSpec::Er { n, p, p_range, connected } = &cfg.graph else { unreachable!("fixed graphs handled above") };
    let mut redraws = 0;
    loop {
        let prob = match (p, p_range) {
            (Some(p), _) => *p,
            (None, Some([lo, hi])) => lo + (hi - lo) * rng.random::<f64>(),
            (None, None) => bail!("er graph without p"),
        };
        let g = gen_er(*n, prob, rng)?;
        if *connected && !is_connected(&g) {
            redraws += 1;
            if redraws >= MAX_REDRAWS {
                bail!("no usable graph after {redraws} draws");
            }
            continue;
        }
        match prepare(cfg, &g) {
            Ok((shift, basis, filter)) => {
                return Ok(Instance { shift, basis, filter, edge_probability: Some(prob), redraws })
            }
            Err(e @ Error::InvalidArgument(_)) => return Err(e.into()),
            Err(e) => {
                debug!("redrawing graph: {e}");
                redraws += 1;
                if redraws >= MAX_REDRAWS {
                    bail!("no usable graph after {redraws} draws");
                }
            }
        }
    }
}

fn noise_model(spec: &NoiseSpec) -> NoiseModel<f64> {
    match spec.model {
        NoiseKind::ConstantSnr => NoiseModel::ConstantSnr(spec.sigma),
        NoiseKind::FixedPower => NoiseModel::FixedPower(spec.sigma),
        NoiseKind::PerValueSnr => NoiseModel::PerValueSnr(spec.sigma),
    }
}

/// Adds zero-mean noise with the variances of `noise`; real when the seeding values are
/// real, circular complex otherwise.
pub fn perturb(values: &mut [Complex64], noise: NoiseModel<f64>, rng: &mut impl Rng) {
    let vars = noise.variances(values);
    let real = values.iter().all(|z| z.im == 0.0);
    for (v, var) in values.iter_mut().zip(vars) {
        let w = if real {
            Complex64::new(var.sqrt() * rng.sample::<f64, _>(StandardNormal), 0.0)
        } else {
            let sd = (var / 2.0).sqrt();
            Complex64::new(sd * rng.sample::<f64, _>(StandardNormal), sd * rng.sample::<f64, _>(StandardNormal))
        };
        *v += w;
    }
}

fn location_choices(cfg: &ExperimentConfig, scheme: Scheme, n: usize) -> Vec<SelectionPattern> {
    let p = cfg.budget.unwrap_or(cfg.k);
    let nodes: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    match scheme {
        Scheme::MnSt => for_each_subset(&nodes, p, |s| out.push(SelectionPattern::mnst(s))),
        Scheme::SnMt => out.extend((0..n).map(|i| SelectionPattern::snmt(i, p))),
        Scheme::MnMt => {
            let tau = cfg.mnmt.values;
            let times: Vec<usize> = (0..tau).collect();
            for_each_subset(&nodes, cfg.mnmt.nodes, |s| out.push(SelectionPattern::grid(tau, s, &times)));
        }
    }
    out
}

fn failure_name(e: &Error) -> String {
    let s = format!("{e:?}");
    s.split([' ', '(', '{']).next().unwrap_or("Error").to_string()
}

fn evaluate_choice(
    cfg: &ExperimentConfig,
    inst: &Instance,
    scheme: Scheme,
    pattern: &SelectionPattern,
    y: &Signal64,
    yk: &[Complex64],
    trial: usize,
    rng: &mut impl Rng,
) -> Result<TrialRecord> {
    let k = cfg.k;
    let base = |feas: Feasibility| TrialRecord {
        trial,
        scheme,
        budget: pattern.len(),
        locations: format_pattern(pattern),
        edge_probability: inst.edge_probability,
        feasible: false,
        perfect: false,
        noiseless_error: None,
        noisy_error: None,
        cond: None,
        distinct_bands: feas.distinct_bands,
        full_rank: feas.full_rank,
        node_expresses_band: feas.node_expresses_band,
        distinct_active: feas.distinct_active,
        bandwidth_tie: feas.bandwidth_tie,
        failure: None,
    };
    let plan: Plan64 = match plan_with_filter(&inst.basis, k, scheme, pattern, inst.filter.clone(), yk) {
        Ok(p) => p,
        Err(e) => {
            let mut r = base(feasibility(&inst.basis, k, scheme, pattern));
            r.failure = Some(failure_name(&e));
            return Ok(r);
        }
    };
    let mut rec = base(plan.feasibility.clone());
    let err = reconstruct(&inst.shift, &inst.basis, &plan, y)?.relative_error;
    rec.feasible = true;
    rec.cond = Some(plan.cond);
    rec.noiseless_error = Some(err);
    rec.perfect = err <= cfg.recovery_threshold && plan.cond <= cfg.tolerances.cond_max;
    if let Some(spec) = &cfg.noise {
        let mut noisy = plan;
        perturb(&mut noisy.schedule.values, noise_model(spec), rng);
        rec.noisy_error = Some(reconstruct(&inst.shift, &inst.basis, &noisy, y)?.relative_error);
    }
    Ok(rec)
}

fn recovery_trial(
    cfg: &ExperimentConfig,
    fixed: Option<&graphseed_core::Graph>,
    trial: usize,
) -> Result<(Vec<TrialRecord>, u64)> {
    let mut rng = substream(cfg.seed, trial as u64);
    let inst = draw_instance(cfg, fixed, &mut rng)?;
    let (y, yk) = random_bandlimited(&inst.basis, cfg.k, &mut rng, SpectrumLaw::UnitGaussian)?;
    let mut records = Vec::new();
    for &scheme in &cfg.schemes {
        for pattern in location_choices(cfg, scheme, inst.basis.n()) {
            records.push(evaluate_choice(cfg, &inst, scheme, &pattern, &y, &yk, trial, &mut rng)?);
        }
    }
    Ok((records, inst.redraws))
}

fn median(v: &mut [f64]) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
}

fn summarize_schemes(cfg: &ExperimentConfig, records: &[TrialRecord]) -> Vec<SchemeSummary> {
    cfg.schemes
        .iter()
        .map(|&scheme| {
            let mut pct = Vec::new();
            let mut mins = Vec::new();
            let mut meds = Vec::new();
            let mut choices = 0;
            for t in 0..cfg.trials {
                let rows: Vec<&TrialRecord> = records.iter().filter(|r| r.trial == t && r.scheme == scheme).collect();
                if rows.is_empty() {
                    continue;
                }
                choices = rows.len();
                pct.push(100.0 * rows.iter().filter(|r| r.perfect).count() as f64 / rows.len() as f64);
                let mut errs: Vec<f64> = rows.iter().filter_map(|r| r.noisy_error).collect();
                if let Some(m) = median(&mut errs) {
                    mins.push(errs[0]);
                    meds.push(m);
                }
            }
            SchemeSummary {
                scheme,
                location_choices: choices,
                recovery_pct: pct.iter().sum::<f64>() / pct.len().max(1) as f64,
                graphs_with_feasible_choice: mins.len(),
                min_error: median(&mut mins),
                median_error: median(&mut meds),
            }
        })
        .collect()
}

/// For each trial graph and random `K`-bandlimited signal, tries every location choice
/// of every scheme: perfect-recovery percentages without noise, and minimum and median
/// errors with noisy seeding values.
pub fn run_recovery_comparison(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    cfg.validate()?;
    let fixed = fixed_graph(&cfg.graph)?;
    let per_trial: Vec<(Vec<TrialRecord>, u64)> =
        (0..cfg.trials).into_par_iter().map(|t| recovery_trial(cfg, fixed.as_ref(), t)).collect::<Result<_>>()?;
    let redraws = per_trial.iter().map(|x| x.1).sum();
    let records: Vec<TrialRecord> = per_trial.into_iter().flat_map(|x| x.0).collect();
    let schemes = summarize_schemes(cfg, &records);
    for s in &schemes {
        info!(
            "{}: recovery {:.1}%, min error {:?}, median error {:?}",
            s.scheme.label(),
            s.recovery_pct,
            s.min_error,
            s.median_error
        );
    }
    Ok(ExperimentSummary {
        name: cfg.name.clone(),
        experiment: ExperimentKind::RecoveryComparison,
        seed: cfg.seed,
        trials: cfg.trials,
        k: cfg.k,
        redraws,
        schemes,
        curves: Vec::new(),
        config: cfg.clone(),
        records,
    })
}

/// Least-squares residuals of several targets against the span of chosen columns.
/// Relative norm below which a re-orthogonalized column counts as dependent. Close
/// active eigenvalues make lag columns nearly parallel, so this sits near rounding level.
const DEPENDENT: f64 = 1e-13;

struct Projector {
    a: Vec<Vec<Complex64>>,
    targets: Vec<Vec<Complex64>>,
    energy: Vec<f64>,
}

impl Projector {
    fn new(a: &graphseed_core::Mat64, targets: Vec<Vec<Complex64>>) -> Self {
        let a = (0..a.ncols()).map(|j| a.column(j)).collect();
        let energy = targets.iter().map(|t| t.iter().map(|z| z.norm_sqr()).sum()).collect();
        Self { a, targets, energy }
    }

    /// Orthonormal basis of the span of `cols` (Gram–Schmidt, twice).
    fn basis(&self, cols: &[usize]) -> Vec<Vec<Complex64>> {
        let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(cols.len());
        for &c in cols {
            let mut v = self.a[c].clone();
            let n0 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for _ in 0..2 {
                for u in &q {
                    let d: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    v.iter_mut().zip(u).for_each(|(x, y)| *x -= d * y);
                }
            }
            let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if nv > DEPENDENT * n0 && nv > 0.0 {
                v.iter_mut().for_each(|x| *x /= nv);
                q.push(v);
            }
        }
        q
    }

    fn residual(&self, q: &[Vec<Complex64>], s: usize) -> f64 {
        let mut r = self.targets[s].clone();
        for _ in 0..2 {
            for u in q {
                let d: Complex64 = u.iter().zip(&r).map(|(a, b)| a.conj() * b).sum();
                r.iter_mut().zip(u).for_each(|(x, y)| *x -= d * y);
            }
        }
        r.iter().map(|z| z.norm_sqr()).sum()
    }

    fn rel_error(&self, q: &[Vec<Complex64>], s: usize) -> f64 {
        (self.residual(q, s) / self.energy[s]).sqrt()
    }

    fn signals(&self) -> usize {
        self.targets.len()
    }
}

/// Best pattern per signal: `(error, pattern index)`, ties to the lower index.
fn best_over(proj: &Projector, patterns: &[Vec<usize>]) -> Vec<(f64, usize)> {
    let ns = proj.signals();
    let pick = |a: (f64, usize), b: (f64, usize)| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a };
    patterns
        .par_iter()
        .enumerate()
        .fold(
            || vec![(f64::INFINITY, usize::MAX); ns],
            |mut acc, (idx, cols)| {
                let q = proj.basis(cols);
                for (s, a) in acc.iter_mut().enumerate() {
                    *a = pick(*a, (proj.rel_error(&q, s), idx));
                }
                acc
            },
        )
        .reduce(
            || vec![(f64::INFINITY, usize::MAX); ns],
            |a, b| a.into_iter().zip(b).map(|(x, y)| pick(x, y)).collect(),
        )
}

/// Greedy growth to `p` columns followed by single-swap descent, from each start.
fn local_search(proj: &Projector, s: usize, p: usize, starts: Vec<Vec<usize>>) -> (f64, Vec<usize>, u64) {
    let m = proj.a.len();
    let mut evals = 0u64;
    let mut score = |cols: &[usize]| {
        evals += 1;
        proj.rel_error(&proj.basis(cols), s)
    };
    let mut best = (f64::INFINITY, Vec::new());
    let mut starts = starts;
    starts.push(Vec::new());
    for mut cols in starts {
        cols.sort_unstable();
        cols.dedup();
        cols.truncate(p);
        while cols.len() < p {
            let mut pick = (f64::INFINITY, usize::MAX);
            for j in (0..m).filter(|j| !cols.contains(j)) {
                let mut trial = cols.clone();
                trial.push(j);
                let e = score(&trial);
                if e < pick.0 {
                    pick = (e, j);
                }
            }
            cols.push(pick.1);
        }
        let mut cur = score(&cols);
        loop {
            let mut improved = None;
            for pos in 0..p {
                for j in (0..m).filter(|j| !cols.contains(j)) {
                    let mut trial = cols.clone();
                    trial[pos] = j;
                    let e = score(&trial);
                    if e < improved.map_or(cur, |x: (f64, usize, usize)| x.0) {
                        improved = Some((e, pos, j));
                    }
                }
            }
            match improved {
                Some((e, pos, j)) if e < cur * (1.0 - 1e-12) => {
                    cols[pos] = j;
                    cur = e;
                }
                _ => break,
            }
        }
        cols.sort_unstable();
        if cur < best.0 {
            best = (cur, cols);
        }
    }
    (best.0, best.1, evals)
}

fn projector_for(
    basis: &Basis64,
    op: &ReconstructionOperator<f64>,
    signals: &[(Signal64, Vec<Complex64>)],
) -> Projector {
    // With orthonormal eigenvectors the residual can be measured on the active band.
    if basis.unitary {
        Projector::new(&op.phi, signals.iter().map(|s| s.1.clone()).collect())
    } else {
        Projector::new(&op.v_k.matmul(&op.phi), signals.iter().map(|s| s.0.values.clone()).collect())
    }
}

fn pattern_from_cols(tau: usize, cols: &[usize]) -> SelectionPattern {
    SelectionPattern { tau, pairs: cols.iter().map(|&c| SelectionPattern::pair_of(tau, c)).collect() }
}

fn curve_point(p: usize, scheme: Scheme, errs: &[f64], search: &str, evaluated: u64) -> CurvePoint {
    let mut v = errs.to_vec();
    CurvePoint {
        p,
        scheme,
        mean_error: v.iter().sum::<f64>() / v.len() as f64,
        max_error: v.iter().cloned().fold(0.0, f64::max),
        median_error: median(&mut v).unwrap_or(f64::NAN),
        search: search.into(),
        patterns_evaluated: evaluated,
    }
}

/// Per budget `P`, the smallest least-squares error (fixed filter `h*`) any choice of
/// seeding locations achieves, for each scheme and signal draw. MN-MT may use any
/// `(node, time)` pairs within `τ = P`; when that search exceeds the enumeration limit it
/// falls back to greedy growth plus single-swap descent started from the best MN-ST,
/// SN-MT and smaller-budget MN-MT choices.
pub fn run_insufficient_seeding(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    cfg.validate()?;
    let Some(g) = fixed_graph(&cfg.graph)? else {
        bail!("insufficient_seeding needs a fixed graph (cycle, karate or file)");
    };
    let (_, basis, filter) = prepare(cfg, &g)?;
    let n = basis.n();
    let k = cfg.k;
    let budgets = cfg.budgets.clone().unwrap_or_else(|| (1..=k).collect());
    let signals: Vec<(Signal64, Vec<Complex64>)> = (0..cfg.trials)
        .map(|t| random_bandlimited(&basis, k, &mut substream(cfg.seed, t as u64), SpectrumLaw::UnitGaussian))
        .collect::<Result<_, _>>()?;
    let ns = signals.len();
    let mut curves = Vec::new();
    let mut records = Vec::new();
    let mut prev_mnmt: Vec<Vec<(usize, usize)>> = vec![Vec::new(); ns];
    let nodes: Vec<usize> = (0..n).collect();

    let record = |trial: usize, scheme: Scheme, pattern: &SelectionPattern, err: f64| TrialRecord {
        trial,
        scheme,
        budget: pattern.len(),
        locations: format_pattern(pattern),
        edge_probability: None,
        feasible: true,
        perfect: err <= cfg.recovery_threshold,
        noiseless_error: Some(err),
        noisy_error: None,
        cond: None,
        distinct_bands: basis.active_inactive_collision(k).is_none(),
        full_rank: false,
        node_expresses_band: None,
        distinct_active: None,
        bandwidth_tie: basis.bandwidth_tie(k),
        failure: None,
    };

    for &p in &budgets {
        if p == 0 {
            bail!("budget {p} is not usable on {n} nodes");
        }
        let op1 = ReconstructionOperator::new(&basis, &filter, k, 1)?;
        let opp = ReconstructionOperator::new(&basis, &filter, k, p)?;
        let proj1 = projector_for(&basis, &op1, &signals);
        let projp = projector_for(&basis, &opp, &signals);

        let mut mnst_best: Vec<Vec<usize>> = vec![Vec::new(); ns];
        let mut snmt_best: Vec<Vec<usize>> = vec![Vec::new(); ns];
        for &scheme in &cfg.schemes {
            let (errs, pats, search, evaluated): (Vec<f64>, Vec<SelectionPattern>, &str, u64) = match scheme {
                Scheme::MnSt => {
                    let count = binomial(n, p);
                    if count > EXHAUSTIVE_LIMIT {
                        bail!("MN-ST search over {count} subsets exceeds the limit");
                    }
                    let mut subsets = Vec::with_capacity(count as usize);
                    for_each_subset(&nodes, p, |s| subsets.push(s.to_vec()));
                    let best = best_over(&proj1, &subsets);
                    for (s, b) in best.iter().enumerate() {
                        mnst_best[s] = subsets[b.1].iter().map(|&i| i * p).collect();
                    }
                    let pats = best.iter().map(|b| SelectionPattern::mnst(&subsets[b.1])).collect();
                    (best.iter().map(|b| b.0).collect(), pats, "exhaustive", count as u64)
                }
                Scheme::SnMt => {
                    let runs: Vec<Vec<usize>> = (0..n).map(|i| (0..p).map(|l| i * p + l).collect()).collect();
                    let best = best_over(&projp, &runs);
                    for (s, b) in best.iter().enumerate() {
                        snmt_best[s] = runs[b.1].clone();
                    }
                    let pats = best.iter().map(|b| SelectionPattern::snmt(b.1, p)).collect();
                    (best.iter().map(|b| b.0).collect(), pats, "exhaustive", n as u64)
                }
                Scheme::MnMt => {
                    let count = binomial(n * p, p);
                    if count <= EXHAUSTIVE_LIMIT {
                        let cand: Vec<usize> = (0..n * p).collect();
                        let mut subsets = Vec::with_capacity(count as usize);
                        for_each_subset(&cand, p, |s| subsets.push(s.to_vec()));
                        let best = best_over(&projp, &subsets);
                        let pats = best.iter().map(|b| pattern_from_cols(p, &subsets[b.1])).collect();
                        (best.iter().map(|b| b.0).collect(), pats, "exhaustive", count as u64)
                    } else {
                        let results: Vec<(f64, Vec<usize>, u64)> = (0..ns)
                            .into_par_iter()
                            .map(|s| {
                                let prev: Vec<usize> = prev_mnmt[s].iter().map(|&(i, lag)| i * p + lag).collect();
                                let starts = vec![mnst_best[s].clone(), snmt_best[s].clone(), prev];
                                local_search(&projp, s, p, starts)
                            })
                            .collect();
                        let evaluated = results.iter().map(|r| r.2).sum();
                        let pats = results.iter().map(|r| pattern_from_cols(p, &r.1)).collect();
                        (results.iter().map(|r| r.0).collect(), pats, "local_search", evaluated)
                    }
                }
            };
            if scheme == Scheme::MnMt {
                for (s, pat) in pats.iter().enumerate() {
                    prev_mnmt[s] = pat.pairs.iter().map(|&(i, t)| (i, pat.tau - 1 - t)).collect();
                }
            }
            for (s, (e, pat)) in errs.iter().zip(&pats).enumerate() {
                records.push(record(s, scheme, pat, *e));
            }
            let point = curve_point(p, scheme, &errs, search, evaluated);
            info!("P = {p}, {}: mean error {:.4e} ({search})", scheme.label(), point.mean_error);
            curves.push(point);
        }
    }
    Ok(ExperimentSummary {
        name: cfg.name.clone(),
        experiment: ExperimentKind::InsufficientSeeding,
        seed: cfg.seed,
        trials: cfg.trials,
        k,
        redraws: 0,
        schemes: Vec::new(),
        curves,
        config: cfg.clone(),
        records,
    })
}
