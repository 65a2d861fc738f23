//! Seeding phase: percolation of sparse injections, the exact designers and the
//! end-to-end reconstruction pipeline.
//!
//! The stacked seeding vector `s̲` of duration `τ` is node-major with times in
//! descending order: entry `i·τ + l` holds the value injected at node `i` at time
//! `τ − 1 − l`. Its column in the frequency-domain operator is `ê_i ⊙ λ^l`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filters::{
    apply_filter_polynomial, apply_product_stages, design_annihilating_product, design_lowpass_kernel, FilterDesign,
};
use crate::linalg::{lstsq, Lu, Mat, Svd};
use crate::scalar::{cre, norm2, Real, C};
use crate::spectral::{check_len, distinct_groups, spectrum_census, GraphSignal, ShiftOperator, SpectralBasis};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionPattern {
    pub tau: usize,
    /// `(node, time)` pairs; the order fixes the order of the seeding values.
    pub pairs: Vec<(usize, usize)>,
}

impl SelectionPattern {
    pub fn new(tau: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let p = Self { tau, pairs };
        p.validate(None)?;
        Ok(p)
    }

    /// MN-ST: every node injects once, `τ = 1`.
    pub fn mnst(nodes: &[usize]) -> Self {
        Self { tau: 1, pairs: nodes.iter().map(|&i| (i, 0)).collect() }
    }

    /// SN-MT: `node` injects at times `p−1, …, 0` (in that value order), `τ = p`.
    pub fn snmt(node: usize, p: usize) -> Self {
        Self { tau: p, pairs: (0..p).map(|l| (node, p - 1 - l)).collect() }
    }

    /// Every listed node injects at every listed time; node-major, times descending.
    pub fn grid(tau: usize, nodes: &[usize], times: &[usize]) -> Self {
        let mut ts = times.to_vec();
        ts.sort_unstable_by(|a, b| b.cmp(a));
        Self { tau, pairs: nodes.iter().flat_map(|&i| ts.iter().map(move |&t| (i, t))).collect() }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn validate(&self, n: Option<usize>) -> Result<()> {
        if self.tau == 0 {
            return Err(Error::InvalidArgument("seeding duration must be at least 1".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for &(i, t) in &self.pairs {
            if t >= self.tau {
                return Err(Error::InvalidArgument(format!("time {t} outside 0..{}", self.tau)));
            }
            if let Some(n) = n {
                if i >= n {
                    return Err(Error::InvalidArgument(format!("node {i} outside 0..{n}")));
                }
            }
            if !seen.insert((i, t)) {
                return Err(Error::InvalidArgument(format!("duplicate injection ({i}, {t})")));
            }
        }
        Ok(())
    }

    /// Column of `s̲` addressed by `(node, time)`.
    pub fn stacked_index(&self, node: usize, time: usize) -> usize {
        node * self.tau + (self.tau - 1 - time)
    }

    /// Inverse of [`Self::stacked_index`].
    pub fn pair_of(tau: usize, index: usize) -> (usize, usize) {
        (index / tau, tau - 1 - index % tau)
    }

    /// The binary `P × nτ` selection matrix `C`.
    pub fn selection_matrix<T: Real>(&self, n: usize) -> Mat<T> {
        let mut c = Mat::zeros(self.len(), n * self.tau);
        for (r, &(i, t)) in self.pairs.iter().enumerate() {
            c[(r, self.stacked_index(i, t))] = cre(T::one());
        }
        c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "ScheduleJson<T>", try_from = "ScheduleJson<T>")]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct SeedingSchedule<T: Real> {
    pub pattern: SelectionPattern,
    pub values: Vec<C<T>>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
struct ScheduleJson<T: Real> {
    tau: usize,
    injections: Vec<Injection<T>>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
struct Injection<T: Real> {
    node: usize,
    time: usize,
    value: C<T>,
}

impl<T: Real> From<SeedingSchedule<T>> for ScheduleJson<T> {
    fn from(s: SeedingSchedule<T>) -> Self {
        let injections = s
            .pattern
            .pairs
            .iter()
            .zip(&s.values)
            .map(|(&(node, time), &value)| Injection { node, time, value })
            .collect();
        Self { tau: s.pattern.tau, injections }
    }
}

impl<T: Real> TryFrom<ScheduleJson<T>> for SeedingSchedule<T> {
    type Error = Error;

    fn try_from(j: ScheduleJson<T>) -> Result<Self> {
        let pairs = j.injections.iter().map(|x| (x.node, x.time)).collect();
        let values = j.injections.iter().map(|x| x.value).collect();
        Ok(Self { pattern: SelectionPattern::new(j.tau, pairs)?, values })
    }
}

impl<T: Real> SeedingSchedule<T> {
    pub fn new(pattern: SelectionPattern, values: Vec<C<T>>) -> Result<Self> {
        check_len(pattern.len(), values.len())?;
        Ok(Self { pattern, values })
    }

    /// The injection `s^{(t)}` as a node-domain vector.
    pub fn injection_at(&self, n: usize, t: usize) -> Vec<C<T>> {
        let mut s = vec![cre(T::zero()); n];
        for (&(i, ti), &v) in self.pattern.pairs.iter().zip(&self.values) {
            if ti == t {
                s[i] += v;
            }
        }
        s
    }
}

/// Runs `x^{(t)} = S x^{(t−1)} + s^{(t)}` for `t = 0..τ−1` with `x^{(0)} = initial + s^{(0)}`.
/// Returns every `x^{(t)}`.
pub fn simulate_seeding_trace<T: Real>(
    shift: &ShiftOperator<T>,
    schedule: &SeedingSchedule<T>,
    initial: Option<&GraphSignal<T>>,
) -> Result<Vec<GraphSignal<T>>> {
    let n = shift.n();
    schedule.pattern.validate(Some(n))?;
    check_len(schedule.pattern.len(), schedule.values.len())?;
    let mut x = match initial {
        Some(y) => {
            check_len(n, y.len())?;
            y.values.clone()
        }
        None => vec![cre(T::zero()); n],
    };
    let mut trace = Vec::with_capacity(schedule.pattern.tau);
    for t in 0..schedule.pattern.tau {
        if t > 0 {
            x = shift.apply(&x);
        }
        for (xi, si) in x.iter_mut().zip(schedule.injection_at(n, t)) {
            *xi += si;
        }
        trace.push(GraphSignal::new(x.clone()));
    }
    Ok(trace)
}

/// `x^{(τ−1)}` of the seeding dynamics from a zero state.
pub fn simulate_seeding<T: Real>(shift: &ShiftOperator<T>, schedule: &SeedingSchedule<T>) -> Result<GraphSignal<T>> {
    Ok(simulate_seeding_trace(shift, schedule, None)?.pop().expect("tau >= 1"))
}

/// Column of the frequency-domain seeding operator for an injection at `node`, `lag`
/// steps before the end of the seeding phase: `ê_node ⊙ λ^lag`.
pub fn seeding_column<T: Real>(basis: &SpectralBasis<T>, node: usize, lag: usize) -> Vec<C<T>> {
    basis.eigenvalues.iter().enumerate().map(|(k, lam)| basis.vinv[(k, node)] * lam.powu(lag as u32)).collect()
}

/// `Θ(I⊗Ψ)Cᵀ`: maps the pattern's seeding values to the GFT of `x^{(τ−1)}` (`n × P`).
pub fn seeding_operator<T: Real>(basis: &SpectralBasis<T>, pattern: &SelectionPattern) -> Mat<T> {
    let cols: Vec<Vec<C<T>>> =
        pattern.pairs.iter().map(|&(i, t)| seeding_column(basis, i, pattern.tau - 1 - t)).collect();
    Mat::from_columns(basis.n(), &cols)
}

/// The full `n × nτ` operator `Θ(I⊗Ψ) = [diag(ê_1)Ψ, …, diag(ê_n)Ψ]`, assembled block by block.
pub fn full_seeding_operator<T: Real>(basis: &SpectralBasis<T>, tau: usize) -> Mat<T> {
    let n = basis.n();
    let psi = basis.psi(tau);
    let mut out = Mat::zeros(n, n * tau);
    for i in 0..n {
        for k in 0..n {
            let e = basis.vinv[(k, i)];
            for l in 0..tau {
                out[(k, i * tau + l)] = e * psi[(k, l)];
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    #[serde(rename = "MN-ST")]
    MnSt,
    #[serde(rename = "SN-MT")]
    SnMt,
    #[serde(rename = "MN-MT")]
    MnMt,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::MnSt, Scheme::SnMt, Scheme::MnMt];

    pub fn label(self) -> &'static str {
        match self {
            Scheme::MnSt => "MN-ST",
            Scheme::SnMt => "SN-MT",
            Scheme::MnMt => "MN-MT",
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().replace('_', "-").as_str() {
            "MN-ST" | "MNST" => Ok(Scheme::MnSt),
            "SN-MT" | "SNMT" => Ok(Scheme::SnMt),
            "MN-MT" | "MNMT" => Ok(Scheme::MnMt),
            other => Err(Error::InvalidArgument(format!("unknown scheme {other}"))),
        }
    }
}

/// Which recoverability conditions held when a plan was designed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Feasibility {
    /// No active eigenvalue equals an inactive one.
    pub distinct_bands: bool,
    /// The seeding system reaches rank `K`.
    pub full_rank: bool,
    /// SN-MT only: the node expresses every active frequency.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub node_expresses_band: Option<bool>,
    /// SN-MT only: the active eigenvalues are distinct.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distinct_active: Option<bool>,
    /// `|λ_K| = |λ_{K+1}|`: the bandwidth cut splits a magnitude tie.
    pub bandwidth_tie: bool,
}

/// Seeding values plus the conditioning of the system that produced them.
#[derive(Debug, Clone)]
pub struct SeedingDesign<T: Real> {
    pub schedule: SeedingSchedule<T>,
    pub rank: usize,
    pub singular_values: Vec<T>,
    pub cond: T,
}

fn check_budget(p: usize, k: usize) -> Result<()> {
    if p < k {
        Err(Error::BudgetTooSmall { p, k })
    } else {
        Ok(())
    }
}

/// Solves `E_Kᵀ Θ(I⊗Ψ) Cᵀ s = ŷ_K ./ ĥ_K`. Square systems use LU, wider ones the
/// minimum-norm solution; either way the rank must equal `K`.
fn solve_active<T: Real>(
    basis: &SpectralBasis<T>,
    k: usize,
    filter: &FilterDesign<T>,
    pattern: &SelectionPattern,
    y_hat_k: &[C<T>],
) -> Result<SeedingDesign<T>> {
    check_len(k, y_hat_k.len())?;
    check_len(basis.n(), filter.response.len())?;
    pattern.validate(Some(basis.n()))?;
    check_budget(pattern.len(), k)?;
    let hmax = crate::scalar::max_abs(&filter.response);
    let weak: Vec<usize> = (0..k).filter(|&j| filter.response[j].norm() <= T::lit(basis.tol.zero) * hmax).collect();
    if !weak.is_empty() || hmax == T::zero() {
        return Err(Error::InvalidArgument(format!("filter response vanishes on active frequencies {weak:?}")));
    }
    let rows: Vec<usize> = (0..k).collect();
    let a = seeding_operator(basis, pattern).select_rows(&rows);
    let rhs: Vec<C<T>> = y_hat_k.iter().zip(&filter.response).map(|(y, h)| y / h).collect();
    let svd = Svd::new(&a);
    let rank = svd.rank(T::lit(basis.tol.rank));
    let singular_values = svd.s[..k.min(a.ncols())].to_vec();
    if rank < k {
        return Err(Error::RankDeficient {
            rank,
            required: k,
            singular_values: singular_values.iter().map(|x| x.to_f64_lossy()).collect(),
        });
    }
    let values = if a.ncols() == k {
        Lu::new(&a).solve(&rhs).unwrap_or_else(|| svd.solve(&rhs, T::lit(basis.tol.rank)))
    } else {
        svd.solve(&rhs, T::lit(basis.tol.rank))
    };
    let cond = singular_values[0] / singular_values[k - 1];
    Ok(SeedingDesign { schedule: SeedingSchedule { pattern: pattern.clone(), values }, rank, singular_values, cond })
}

fn check_bands<T: Real>(basis: &SpectralBasis<T>, k: usize) -> Result<()> {
    if k == 0 || k > basis.n() {
        return Err(Error::InvalidArgument(format!("bandwidth {k} outside 1..={}", basis.n())));
    }
    match basis.active_inactive_collision(k) {
        Some((active, inactive)) => Err(Error::ConditionViolation { active, inactive }),
        None => Ok(()),
    }
}

/// MN-ST: one injection per seed node, then the filter.
pub fn mnst_design<T: Real>(
    basis: &SpectralBasis<T>,
    k: usize,
    filter: &FilterDesign<T>,
    seed_nodes: &[usize],
    y_hat_k: &[C<T>],
) -> Result<SeedingDesign<T>> {
    check_bands(basis, k)?;
    solve_active(basis, k, filter, &SelectionPattern::mnst(seed_nodes), y_hat_k)
}

/// SN-MT: `p` successive injections at a single node.
pub fn snmt_design<T: Real>(
    basis: &SpectralBasis<T>,
    k: usize,
    filter: &FilterDesign<T>,
    node: usize,
    p: usize,
    y_hat_k: &[C<T>],
) -> Result<SeedingDesign<T>> {
    check_bands(basis, k)?;
    check_budget(p, k)?;
    if node >= basis.n() {
        return Err(Error::InvalidArgument(format!("node {node} outside 0..{}", basis.n())));
    }
    let census = spectrum_census(basis, k, Some(node), T::lit(basis.tol.zero))?;
    let nc = census.node.expect("node census requested");
    if nc.u1 > 0 {
        return Err(Error::NodeCannotExpress { node, frequencies: nc.zero_active });
    }
    if census.d1 > 0 {
        return Err(Error::DegenerateSpectrum { repeats: census.d1 });
    }
    solve_active(basis, k, filter, &SelectionPattern::snmt(node, p), y_hat_k)
}

/// MN-MT: an arbitrary `(node, time)` pattern.
pub fn mnmt_design<T: Real>(
    basis: &SpectralBasis<T>,
    k: usize,
    filter: &FilterDesign<T>,
    pattern: &SelectionPattern,
    y_hat_k: &[C<T>],
) -> Result<SeedingDesign<T>> {
    check_bands(basis, k)?;
    solve_active(basis, k, filter, pattern, y_hat_k)
}

/// Recoverability conditions of `scheme` for `pattern`, without solving.
pub fn feasibility<T: Real>(
    basis: &SpectralBasis<T>,
    k: usize,
    scheme: Scheme,
    pattern: &SelectionPattern,
) -> Feasibility {
    let rows: Vec<usize> = (0..k).collect();
    let a = seeding_operator(basis, pattern).select_rows(&rows);
    let rank = Svd::new(&a).rank(T::lit(basis.tol.rank));
    let mut f = Feasibility {
        distinct_bands: basis.active_inactive_collision(k).is_none(),
        full_rank: rank == k,
        bandwidth_tie: basis.bandwidth_tie(k),
        ..Default::default()
    };
    if scheme == Scheme::SnMt {
        if let Some(&(node, _)) = pattern.pairs.first() {
            if let Ok(c) = spectrum_census(basis, k, Some(node), T::lit(basis.tol.zero)) {
                f.node_expresses_band = c.node.map(|nc| nc.u1 == 0);
                f.distinct_active = Some(c.d1 == 0);
            }
        }
    }
    f
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct ReconstructionPlan<T: Real> {
    pub k: usize,
    #[serde(flatten)]
    pub schedule: SeedingSchedule<T>,
    pub filter: FilterDesign<T>,
    #[serde(default)]
    pub feasibility: Feasibility,
    /// Condition number of the seeding system.
    #[serde(default)]
    pub cond: f64,
}

/// Exact plan: `h*` from the kernel design and seeding values from the matching designer.
pub fn exact_plan<T: Real>(
    basis: &SpectralBasis<T>,
    k: usize,
    scheme: Scheme,
    pattern: &SelectionPattern,
    y_hat_k: &[C<T>],
) -> Result<ReconstructionPlan<T>> {
    let filter = design_lowpass_kernel(basis, k)?;
    plan_with_filter(basis, k, scheme, pattern, filter, y_hat_k)
}

pub fn plan_with_filter<T: Real>(
    basis: &SpectralBasis<T>,
    k: usize,
    scheme: Scheme,
    pattern: &SelectionPattern,
    filter: FilterDesign<T>,
    y_hat_k: &[C<T>],
) -> Result<ReconstructionPlan<T>> {
    let design = match scheme {
        Scheme::MnSt if pattern.tau == 1 => {
            let nodes: Vec<usize> = pattern.pairs.iter().map(|p| p.0).collect();
            mnst_design(basis, k, &filter, &nodes, y_hat_k)?
        }
        Scheme::SnMt if is_single_node_run(pattern) => {
            snmt_design(basis, k, &filter, pattern.pairs[0].0, pattern.len(), y_hat_k)?
        }
        Scheme::MnSt | Scheme::SnMt => {
            return Err(Error::InvalidArgument(format!("pattern does not fit {}", scheme.label())))
        }
        Scheme::MnMt => mnmt_design(basis, k, &filter, pattern, y_hat_k)?,
    };
    Ok(ReconstructionPlan {
        k,
        feasibility: feasibility(basis, k, scheme, pattern),
        cond: design.cond.to_f64_lossy(),
        schedule: design.schedule,
        filter,
    })
}

fn is_single_node_run(p: &SelectionPattern) -> bool {
    !p.is_empty() && *p == SelectionPattern::snmt(p.pairs[0].0, p.len())
}

/// Trades filter degree for seeding values: inactive frequencies are zeroed by the
/// seeding phase while the budget allows and the remaining ones are annihilated by a
/// product filter, in ascending frequency order.
///
/// Frequencies the pattern cannot excite need no treatment. The other inactive
/// frequencies are grouped by eigenvalue; a group sharing its eigenvalue with an active
/// frequency must be zeroed by seeding, otherwise groups are retained in ascending order
/// as long as the active rows stay independent of the retained ones.
pub fn degree_reduced_design<T: Real>(
    basis: &SpectralBasis<T>,
    k: usize,
    pattern: &SelectionPattern,
    y_hat_k: &[C<T>],
) -> Result<ReconstructionPlan<T>> {
    let n = basis.n();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("bandwidth {k} outside 1..={n}")));
    }
    check_len(k, y_hat_k.len())?;
    pattern.validate(Some(n))?;
    check_budget(pattern.len(), k)?;
    let rtol = T::lit(basis.tol.rank);
    let g = seeding_operator(basis, pattern);
    let active: Vec<usize> = (0..k).collect();

    let row_scale = g.max_abs();
    let excited: Vec<usize> =
        (k..n).filter(|&j| crate::scalar::max_abs(g.row(j)) > T::lit(basis.tol.zero) * row_scale).collect();
    let lam: Vec<C<T>> = excited.iter().map(|&j| basis.eigenvalues[j]).collect();
    let eps = basis.distinct_eps();
    let clusters: Vec<Vec<usize>> =
        distinct_groups(&lam, eps).into_iter().map(|grp| grp.into_iter().map(|i| excited[i]).collect()).collect();
    let collides = |c: &Vec<usize>| active.iter().any(|&a| basis.same_eigenvalue(a, c[0]));

    let rank_of = |rows: &[usize]| -> usize {
        if rows.is_empty() {
            0
        } else {
            Svd::new(&g.select_rows(rows)).rank(rtol)
        }
    };
    let mut retained: Vec<usize> = Vec::new();
    let mut killed_clusters: Vec<Vec<usize>> = Vec::new();
    let mut infeasible: Vec<usize> = Vec::new();
    let forced: Vec<&Vec<usize>> = clusters.iter().filter(|c| collides(c)).collect();
    let optional: Vec<&Vec<usize>> = clusters.iter().filter(|c| !collides(c)).collect();
    for (is_forced, cluster) in forced.iter().map(|c| (true, *c)).chain(optional.iter().map(|c| (false, *c))) {
        let mut trial = retained.clone();
        trial.extend(cluster);
        let mut all = active.clone();
        all.extend(&trial);
        if rank_of(&all) == k + rank_of(&trial) {
            retained = trial;
        } else if is_forced {
            infeasible.extend(cluster);
        } else {
            killed_clusters.push(cluster.clone());
        }
    }
    if !infeasible.is_empty() {
        return Err(Error::Infeasible { frequencies: infeasible });
    }
    killed_clusters.sort_by_key(|c| c[0]);
    let kill: Vec<usize> = killed_clusters.iter().map(|c| c[0]).collect();
    let filter = design_annihilating_product(basis, &kill, cre(T::one()))?;

    let mut rows = active.clone();
    rows.extend(&retained);
    let a = g.select_rows(&rows);
    let mut rhs = vec![cre(T::zero()); rows.len()];
    for j in 0..k {
        rhs[j] = y_hat_k[j] / filter.response[j];
    }
    let ls = lstsq(&a, &rhs, rtol);
    let scale = norm2(&rhs).max(T::min_positive_value());
    if ls.rank < k || ls.residual_norm > T::lit(1e-8) * scale {
        let bad: Vec<usize> = retained.clone();
        return Err(Error::Infeasible { frequencies: bad });
    }
    let cond = ls.cond().to_f64_lossy();
    let schedule = SeedingSchedule { pattern: pattern.clone(), values: ls.x };
    let feas = Feasibility {
        distinct_bands: basis.active_inactive_collision(k).is_none(),
        full_rank: true,
        bandwidth_tie: basis.bandwidth_tie(k),
        ..Default::default()
    };
    Ok(ReconstructionPlan { k, schedule, filter, feasibility: feas, cond })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct ReconstructionReport<T: Real> {
    pub z: GraphSignal<T>,
    pub relative_error: T,
    /// `|ẑ_k − ŷ_k|` per frequency.
    pub per_frequency_residual: Vec<T>,
    pub feasibility: Feasibility,
    pub cond: f64,
    /// Imaginary part of `z` relative to its norm; flagged when real output is expected.
    pub imag_residue: T,
    /// `x^{(0)}, …, x^{(τ−1)}`
    pub seeding_trace: Vec<GraphSignal<T>>,
    /// Signal after each filter stage (gain first for product filters).
    pub filter_trace: Vec<GraphSignal<T>>,
}

/// Seeds, percolates and filters; compares the result to `target`.
pub fn reconstruct<T: Real>(
    shift: &ShiftOperator<T>,
    basis: &SpectralBasis<T>,
    plan: &ReconstructionPlan<T>,
    target: &GraphSignal<T>,
) -> Result<ReconstructionReport<T>> {
    reconstruct_from(shift, basis, plan, target, None)
}

/// As [`reconstruct`], with a signal already present when the seeding phase starts.
pub fn reconstruct_from<T: Real>(
    shift: &ShiftOperator<T>,
    basis: &SpectralBasis<T>,
    plan: &ReconstructionPlan<T>,
    target: &GraphSignal<T>,
    initial: Option<&GraphSignal<T>>,
) -> Result<ReconstructionReport<T>> {
    check_len(shift.n(), target.len())?;
    let seeding_trace = simulate_seeding_trace(shift, &plan.schedule, initial)?;
    let x = seeding_trace.last().expect("tau >= 1").clone();
    let filter_trace = match (&plan.filter.gain, plan.filter.roots.is_empty()) {
        (Some(a0), false) => apply_product_stages(shift, &plan.filter.roots, *a0, &x)?,
        _ => vec![apply_filter_polynomial(shift, &plan.filter.coeffs, &x)?],
    };
    let z = filter_trace.last().expect("at least one stage").clone();
    let zh = basis.vinv.matvec(&z.values);
    let yh = basis.vinv.matvec(&target.values);
    let per_frequency_residual = zh.iter().zip(&yh).map(|(a, b)| (a - b).norm()).collect();
    Ok(ReconstructionReport {
        relative_error: z.relative_error(target),
        imag_residue: z.imag_residue(),
        z,
        per_frequency_residual,
        feasibility: plan.feasibility.clone(),
        cond: plan.cond,
        seeding_trace,
        filter_trace,
    })
}

/// Target to seed for when `y_init` is present at the start of a `τ`-step seeding
/// phase with no filtering afterwards: `y_target − S^{τ−1} y_init`.
pub fn adjust_for_initial_state<T: Real>(
    shift: &ShiftOperator<T>,
    y_init: &GraphSignal<T>,
    y_target: &GraphSignal<T>,
    tau: usize,
) -> Result<GraphSignal<T>> {
    if tau == 0 {
        return Err(Error::InvalidArgument("seeding duration must be at least 1".into()));
    }
    check_len(shift.n(), y_init.len())?;
    check_len(shift.n(), y_target.len())?;
    let mut p = y_init.values.clone();
    for _ in 1..tau {
        p = shift.apply(&p);
    }
    Ok(GraphSignal::new(crate::scalar::sub(&y_target.values, &p)))
}

#[derive(Debug, Clone)]
pub struct IdentitySeedingCheck<T: Real> {
    pub is_diagonal: bool,
    pub offdiag_norm: T,
    pub diag_values: Vec<C<T>>,
    pub matrix: Mat<T>,
}

/// `M = (E_Kᵀ V⁻¹ E_P)(E_Pᵀ V E_K)`. Seeding with the target's own values works with a
/// scalar filter only if `M` is diagonal.
pub fn identity_seeding_check<T: Real>(
    basis: &SpectralBasis<T>,
    k: usize,
    seed_nodes: &[usize],
) -> Result<IdentitySeedingCheck<T>> {
    if seed_nodes.len() != k {
        return Err(Error::DimensionMismatch { expected: k, got: seed_nodes.len() });
    }
    let act: Vec<usize> = (0..k).collect();
    let m = basis.vinv.select(&act, seed_nodes).matmul(&basis.v.select(seed_nodes, &act));
    let mut off = T::zero();
    for i in 0..k {
        for j in 0..k {
            if i != j {
                off += m[(i, j)].norm_sqr();
            }
        }
    }
    let offdiag_norm = off.sqrt();
    Ok(IdentitySeedingCheck {
        is_diagonal: offdiag_norm <= T::lit(1e-10) * m.frobenius().max(T::one()),
        offdiag_norm,
        diag_values: m.diagonal(),
        matrix: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{build_shift, decompose, Graph, ShiftChoice};
    use crate::Tolerances;

    fn cycle_shift(n: usize) -> ShiftOperator<f64> {
        let g = Graph::new(n, (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect(), true).unwrap();
        build_shift(&g, ShiftChoice::Adjacency, None).unwrap()
    }

    #[test]
    fn single_injection_is_the_seed() {
        let s = cycle_shift(4);
        let sched = SeedingSchedule::new(SelectionPattern::mnst(&[2]), vec![cre(3.0)]).unwrap();
        let x = simulate_seeding(&s, &sched).unwrap();
        assert_eq!(x, GraphSignal::from_real(&[0.0, 0.0, 3.0, 0.0]));
    }

    #[test]
    fn early_injection_is_shifted() {
        let s = cycle_shift(4);
        let sched = SeedingSchedule::new(SelectionPattern::new(2, vec![(0, 0)]).unwrap(), vec![cre(1.0)]).unwrap();
        let x = simulate_seeding(&s, &sched).unwrap();
        assert_eq!(x, GraphSignal::from_real(&[0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn stacked_index_roundtrip() {
        let p = SelectionPattern::grid(3, &[0, 4], &[0, 2]);
        for &(i, t) in &p.pairs {
            assert_eq!(SelectionPattern::pair_of(3, p.stacked_index(i, t)), (i, t));
        }
        assert_eq!(p.stacked_index(4, 2), 12);
    }

    #[test]
    fn invalid_patterns_rejected() {
        assert!(SelectionPattern::new(2, vec![(0, 2)]).is_err());
        assert!(SelectionPattern::new(2, vec![(0, 1), (0, 1)]).is_err());
        assert!(SelectionPattern::new(0, vec![]).is_err());
    }

    #[test]
    fn schedule_json_shape() {
        let sched = SeedingSchedule::<f64>::new(SelectionPattern::snmt(1, 2), vec![cre(1.0), cre(-0.5)]).unwrap();
        let js = serde_json::to_value(&sched).unwrap();
        assert_eq!(js["tau"], 2);
        assert_eq!(js["injections"][0]["node"], 1);
        assert_eq!(js["injections"][0]["time"], 1);
        assert_eq!(js["injections"][1]["value"][0], -0.5);
        let back: SeedingSchedule<f64> = serde_json::from_value(js).unwrap();
        assert_eq!(back, sched);
    }

    #[test]
    fn identity_check_on_uniform_cycle_seeds() {
        let b = decompose(&cycle_shift(8), &Tolerances::default()).unwrap();
        let c = identity_seeding_check(&b, 4, &[0, 2, 4, 6]).unwrap();
        assert!(c.is_diagonal);
        for d in &c.diag_values {
            assert!((d - cre(0.5)).norm() < 1e-10);
        }
        let full = identity_seeding_check(&b, 8, &(0..8).collect::<Vec<_>>()).unwrap();
        assert!(full.is_diagonal);
    }

    #[test]
    fn initial_state_adjustment_edges() {
        let s = cycle_shift(3);
        let y = GraphSignal::from_real(&[1.0, 2.0, 3.0]);
        let z = GraphSignal::zeros(3);
        assert_eq!(adjust_for_initial_state(&s, &z, &y, 4).unwrap(), y);
        let yi = GraphSignal::from_real(&[0.5, 0.5, 0.5]);
        assert_eq!(adjust_for_initial_state(&s, &yi, &y, 1).unwrap(), GraphSignal::from_real(&[0.5, 1.5, 2.5]));
    }
}
