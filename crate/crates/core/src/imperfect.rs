//! Reconstruction with too few or noisy seeding values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filters::{design_lowpass_kernel, FilterDesign};
use crate::linalg::{lstsq, Mat, Svd};
use crate::scalar::{cre, norm2, norm2_sqr, Real, C};
use crate::seeding::{full_seeding_operator, SelectionPattern};
use crate::spectral::{check_len, distinct_groups, GraphSignal, SpectralBasis};

/// `Φ_K = diag(ĥ_K) E_Kᵀ Θ(I⊗Ψ)` for a fixed filter and seeding duration, with `V_K`.
#[derive(Debug, Clone)]
pub struct ReconstructionOperator<T: Real> {
    pub k: usize,
    pub tau: usize,
    /// `K × nτ`, columns in stacked order.
    pub phi: Mat<T>,
    pub v_k: Mat<T>,
    pub h_k: Vec<C<T>>,
}

impl<T: Real> ReconstructionOperator<T> {
    pub fn new(basis: &SpectralBasis<T>, filter: &FilterDesign<T>, k: usize, tau: usize) -> Result<Self> {
        let n = basis.n();
        if k == 0 || k > n {
            return Err(Error::InvalidArgument(format!("bandwidth {k} outside 1..={n}")));
        }
        if tau == 0 {
            return Err(Error::InvalidArgument("seeding duration must be at least 1".into()));
        }
        check_len(n, filter.response.len())?;
        let rows: Vec<usize> = (0..k).collect();
        let h_k = filter.response[..k].to_vec();
        let phi = full_seeding_operator(basis, tau).select_rows(&rows).scale_rows(&h_k);
        Ok(Self { k, tau, phi, v_k: basis.v_active(k), h_k })
    }

    pub fn n(&self) -> usize {
        self.v_k.nrows()
    }

    /// Number of `(node, time)` candidates, `nτ`.
    pub fn candidates(&self) -> usize {
        self.phi.ncols()
    }

    pub fn columns_of(&self, pattern: &SelectionPattern) -> Vec<usize> {
        pattern.pairs.iter().map(|&(i, t)| pattern.stacked_index(i, t)).collect()
    }

    /// `Φ_K Cᵀ`
    pub fn phi_c(&self, pattern: &SelectionPattern) -> Mat<T> {
        self.phi.select_cols(&self.columns_of(pattern))
    }

    /// `V_K Φ_K Cᵀ`: seeding values to reconstructed signal.
    pub fn node_operator(&self, pattern: &SelectionPattern) -> Mat<T> {
        self.v_k.matmul(&self.phi_c(pattern))
    }

    fn pattern_of(&self, cols: &[usize]) -> SelectionPattern {
        SelectionPattern {
            tau: self.tau,
            pairs: cols.iter().map(|&c| SelectionPattern::pair_of(self.tau, c)).collect(),
        }
    }

    fn check_pattern(&self, pattern: &SelectionPattern) -> Result<()> {
        if pattern.tau != self.tau {
            return Err(Error::DimensionMismatch { expected: self.tau, got: pattern.tau });
        }
        pattern.validate(Some(self.n()))
    }
}

#[derive(Debug, Clone)]
pub struct LsSolution<T: Real> {
    pub values: Vec<C<T>>,
    /// `‖y‖² − bᴴ G⁻¹ b`
    pub error_energy: T,
    pub rank: usize,
    pub cond: T,
}

/// Least-squares seeding values for a fixed filter:
/// `s = G⁻¹ b` with `G = CΦᴴ V_Kᴴ V_K ΦCᵀ` and `b = CΦᴴ V_Kᴴ y`.
/// With orthonormal eigenvectors `G` reduces to `CΦᴴΦCᵀ`.
pub fn ls_seed_values<T: Real>(
    op: &ReconstructionOperator<T>,
    pattern: &SelectionPattern,
    y: &GraphSignal<T>,
) -> Result<LsSolution<T>> {
    let sol = min_norm_seed_values(op, pattern, y)?;
    if sol.rank < pattern.len() {
        let a = op.node_operator(pattern);
        return Err(Error::RankDeficient {
            rank: sol.rank,
            required: pattern.len(),
            singular_values: Svd::new(&a).s.iter().map(|x| x.to_f64_lossy()).collect(),
        });
    }
    Ok(sol)
}

/// As [`ls_seed_values`] but accepts rank-deficient patterns, returning the
/// minimum-norm minimizer.
pub fn min_norm_seed_values<T: Real>(
    op: &ReconstructionOperator<T>,
    pattern: &SelectionPattern,
    y: &GraphSignal<T>,
) -> Result<LsSolution<T>> {
    op.check_pattern(pattern)?;
    check_len(op.n(), y.len())?;
    let a = op.node_operator(pattern);
    let ls = lstsq(&a, &y.values, T::lit(1e-12));
    let b = a.adjoint_matvec(&y.values);
    let fit = crate::scalar::dotc(&b, &ls.x).re;
    let error_energy = (norm2_sqr(&y.values) - fit).max(T::zero());
    Ok(LsSolution { cond: ls.cond(), rank: ls.rank, values: ls.x, error_energy })
}

#[derive(Debug, Clone)]
pub struct JointSolution<T: Real> {
    pub values: Vec<C<T>>,
    pub h: Vec<C<T>>,
    /// Final `‖y − z‖²`.
    pub error: T,
    /// Objective after every half step, starting with the fixed-filter solve.
    pub history: Vec<T>,
    pub converged: bool,
}

/// Alternating least squares for `min_{s,h} ‖y − V diag(Ψh) Θ(I⊗Ψ)Cᵀ s‖²`, starting
/// from `h*` of bandwidth `k` and keeping its length.
pub fn joint_seed_filter<T: Real>(
    basis: &SpectralBasis<T>,
    k: usize,
    pattern: &SelectionPattern,
    y: &GraphSignal<T>,
    max_iters: usize,
    tol: T,
) -> Result<JointSolution<T>> {
    if pattern.is_empty() {
        return Err(Error::InvalidArgument("pattern is empty".into()));
    }
    pattern.validate(Some(basis.n()))?;
    check_len(basis.n(), y.len())?;
    let filter = design_lowpass_kernel(basis, k)?;
    let mut h = filter.coeffs;
    let psi = basis.psi(h.len());
    let g = crate::seeding::seeding_operator(basis, pattern);
    let rtol = T::lit(1e-12);
    let objective = |h: &[C<T>], s: &[C<T>]| {
        let xh = g.matvec(s);
        let hh = psi.matvec(h);
        let zh: Vec<C<T>> = xh.iter().zip(&hh).map(|(a, b)| a * b).collect();
        norm2_sqr(&crate::scalar::sub(&y.values, &basis.v.matvec(&zh)))
    };

    let solve_s = |h: &[C<T>]| lstsq(&basis.v.matmul(&g.scale_rows(&psi.matvec(h))), &y.values, rtol).x;
    let mut s = solve_s(&h);
    let mut best = objective(&h, &s);
    let mut history = vec![best];
    let mut converged = false;
    let (mut best_h, mut best_s) = (h.clone(), s.clone());
    let floor = T::epsilon() * norm2_sqr(&y.values);
    for _ in 0..max_iters {
        let prev = best;
        // filter step
        let xh = g.matvec(&s);
        let h_new = lstsq(&basis.v.matmul(&psi.scale_rows(&xh)), &y.values, rtol).x;
        let e = objective(&h_new, &s);
        if e <= best {
            h = h_new;
            best = e;
            let nh = norm2(&h);
            if nh > T::zero() {
                h.iter_mut().for_each(|z| *z = *z / nh);
                s.iter_mut().for_each(|z| *z = *z * nh);
            }
            best_h.clone_from(&h);
            best_s.clone_from(&s);
        }
        history.push(best);
        // seed step
        let s_new = solve_s(&h);
        let e = objective(&h, &s_new);
        if e <= best {
            s = s_new;
            best = e;
            best_h.clone_from(&h);
            best_s.clone_from(&s);
        }
        history.push(best);
        if prev - best <= tol * prev || best <= floor {
            converged = true;
            break;
        }
    }
    Ok(JointSolution { values: best_s, h: best_h, error: best, history, converged })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SelectionMethod {
    Exhaustive,
    GreedyForward,
    L1Relaxed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    pub pattern: SelectionPattern,
    #[serde(rename = "objective")]
    pub objective_value: f64,
    pub method: SelectionMethod,
    pub candidates_evaluated: u64,
}

#[derive(Debug, Clone)]
pub struct SparseDesign<T: Real> {
    pub selection: SelectionResult,
    pub values: Vec<C<T>>,
    /// `‖y − V_K Φ_K Cᵀ s‖²`
    pub residual: T,
}

/// `min_d ‖y − V_K Φ_K d‖² + γ‖d‖₀`. Greedy adds the best column while the residual
/// drops by at least `γ`; the relaxed variant runs iterative soft thresholding with
/// weight `√γ` on `½‖·‖²` and refits on the support.
pub fn sparse_location_design<T: Real>(
    op: &ReconstructionOperator<T>,
    y: &GraphSignal<T>,
    gamma: T,
    method: SelectionMethod,
    max_columns: Option<usize>,
) -> Result<SparseDesign<T>> {
    check_len(op.n(), y.len())?;
    if gamma < T::zero() {
        return Err(Error::InvalidArgument("gamma must be non-negative".into()));
    }
    let a = op.v_k.matmul(&op.phi);
    let m = a.ncols();
    let cap = max_columns.unwrap_or(m).min(m);
    let y2 = norm2_sqr(&y.values);
    let fit = |cols: &[usize]| -> (Vec<C<T>>, T) {
        if cols.is_empty() {
            return (vec![], y2);
        }
        let ls = lstsq(&a.select_cols(cols), &y.values, T::lit(1e-12));
        (ls.x, ls.residual_norm * ls.residual_norm)
    };
    let (support, evaluated) = match method {
        SelectionMethod::GreedyForward | SelectionMethod::Exhaustive => {
            let mut support: Vec<usize> = Vec::new();
            let mut res = y2;
            let mut evaluated = 0u64;
            while support.len() < cap {
                let mut best: Option<(usize, T)> = None;
                for j in (0..m).filter(|j| !support.contains(j)) {
                    let mut cols = support.clone();
                    cols.push(j);
                    let r = fit(&cols).1;
                    evaluated += 1;
                    if best.is_none_or(|(_, br)| r < br) {
                        best = Some((j, r));
                    }
                }
                let Some((j, r)) = best else { break };
                let gain = res - r;
                if gain < gamma || gain <= T::lit(1e-12) * y2 {
                    break;
                }
                support.push(j);
                res = r;
            }
            (support, evaluated)
        }
        SelectionMethod::L1Relaxed => {
            let lam = gamma.sqrt();
            let lip = Svd::new(&a).sigma_max().powi(2);
            let mut d = vec![cre(T::zero()); m];
            let mut iters = 0u64;
            if lip > T::zero() {
                let step = T::one() / lip;
                for _ in 0..10_000 {
                    iters += 1;
                    let r = crate::scalar::sub(&a.matvec(&d), &y.values);
                    let grad = a.adjoint_matvec(&r);
                    let mut delta = T::zero();
                    for (di, gi) in d.iter_mut().zip(grad) {
                        let u = *di - gi * step;
                        let mag = u.norm();
                        let shrunk = if mag > lam * step { u * ((mag - lam * step) / mag) } else { cre(T::zero()) };
                        delta = delta.max((shrunk - *di).norm());
                        *di = shrunk;
                    }
                    if delta <= T::lit(1e-13) * (T::one() + crate::scalar::max_abs(&d)) {
                        break;
                    }
                }
            }
            let mut support: Vec<usize> = (0..m).filter(|&j| d[j].norm() > T::zero()).collect();
            support.sort_by(|&i, &j| d[j].norm().partial_cmp(&d[i].norm()).unwrap_or(std::cmp::Ordering::Equal));
            support.truncate(cap);
            (support, iters)
        }
    };
    let mut support = support;
    if method != SelectionMethod::GreedyForward && method != SelectionMethod::Exhaustive {
        support.sort_unstable();
    }
    let (values, residual) = fit(&support);
    let objective = residual + gamma * T::lit(support.len() as f64);
    let method = if method == SelectionMethod::Exhaustive { SelectionMethod::GreedyForward } else { method };
    Ok(SparseDesign {
        selection: SelectionResult {
            pattern: op.pattern_of(&support),
            objective_value: objective.to_f64_lossy(),
            method,
            candidates_evaluated: evaluated,
        },
        values,
        residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NoiseModel<T> {
    /// `R_w = σ² ‖s_P‖² I`
    ConstantSnr(T),
    /// `R_w = σ² I`
    FixedPower(T),
    /// `R_w = σ² diag(|s_P|²)`: every injection has its own SNR `1/σ²`.
    PerValueSnr(T),
}

impl<T: Real> NoiseModel<T> {
    pub fn sigma(&self) -> T {
        match *self {
            NoiseModel::ConstantSnr(s) | NoiseModel::FixedPower(s) | NoiseModel::PerValueSnr(s) => s,
        }
    }

    /// Noise variance of each seeding value.
    pub fn variances(&self, values: &[C<T>]) -> Vec<T> {
        match *self {
            NoiseModel::ConstantSnr(s) => vec![s * s * norm2_sqr(values); values.len()],
            NoiseModel::FixedPower(s) => vec![s * s; values.len()],
            NoiseModel::PerValueSnr(s) => values.iter().map(|v| s * s * v.norm_sqr()).collect(),
        }
    }
}

/// `R_ε = V_K Φ_K Cᵀ R_w C Φ_Kᴴ V_Kᴴ` and its trace.
pub fn error_covariance<T: Real>(
    op: &ReconstructionOperator<T>,
    pattern: &SelectionPattern,
    noise: NoiseModel<T>,
    values: &[C<T>],
) -> Result<(Mat<T>, T)> {
    op.check_pattern(pattern)?;
    check_len(pattern.len(), values.len())?;
    let sd: Vec<C<T>> = noise.variances(values).into_iter().map(|v| cre(v.sqrt())).collect();
    let a = op.node_operator(pattern).scale_cols(&sd);
    let r = a.matmul(&a.adjoint());
    let mse = r.trace().re;
    Ok((r, mse))
}

/// `trace(M⁻¹)·trace(M)` with `M = Φ_K diag(c) Φ_Kᴴ`; `+∞` when `M` is singular.
pub fn constant_snr_objective<T: Real>(op: &ReconstructionOperator<T>, columns: &[usize]) -> T {
    let phi = op.phi.select_cols(columns);
    let m = phi.matmul(&phi.adjoint());
    gram_objective(&m, T::zero())
}

fn gram_objective<T: Real>(m: &Mat<T>, delta: T) -> T {
    let k = m.nrows();
    let mut m = m.clone();
    for i in 0..k {
        m[(i, i)] += cre(delta);
    }
    let svd = Svd::new(&m);
    let smax = svd.sigma_max();
    if smax == T::zero() || svd.rank(T::lit(1e-12)) < k {
        return T::infinity();
    }
    let inv_tr: T = svd.s.iter().map(|&x| T::one() / x).sum();
    inv_tr * m.trace().re
}

/// Number of `p`-subsets of `m` items, saturating.
pub fn binomial(m: usize, p: usize) -> u128 {
    if p > m {
        return 0;
    }
    let p = p.min(m - p);
    let mut acc: u128 = 1;
    for i in 0..p {
        acc = acc.saturating_mul((m - i) as u128) / (i as u128 + 1);
    }
    acc
}

pub const EXHAUSTIVE_LIMIT: u128 = 1_000_000;

/// Calls `f` on every `p`-subset of `items` in lexicographic order.
pub fn for_each_subset(items: &[usize], p: usize, mut f: impl FnMut(&[usize])) {
    let m = items.len();
    if p > m {
        return;
    }
    let mut idx: Vec<usize> = (0..p).collect();
    let mut cur: Vec<usize> = idx.iter().map(|&i| items[i]).collect();
    loop {
        f(&cur);
        let mut i = p;
        while i > 0 && idx[i - 1] == i - 1 + m - p {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        i -= 1;
        idx[i] += 1;
        for j in i + 1..p {
            idx[j] = idx[j - 1] + 1;
        }
        for j in i..p {
            cur[j] = items[idx[j]];
        }
    }
}

fn exhaustive_min<T: Real>(
    candidates: &[usize],
    p: usize,
    mut score: impl FnMut(&[usize]) -> T,
) -> Result<(Vec<usize>, T, u64)> {
    let count = binomial(candidates.len(), p);
    if count > EXHAUSTIVE_LIMIT {
        return Err(Error::SearchTooLarge { candidates: count, limit: EXHAUSTIVE_LIMIT });
    }
    let mut best: Option<(Vec<usize>, T)> = None;
    let mut evaluated = 0u64;
    for_each_subset(candidates, p, |s| {
        evaluated += 1;
        let v = score(s);
        if best.as_ref().is_none_or(|(_, b)| v < *b) {
            best = Some((s.to_vec(), v));
        }
    });
    let (cols, v) = best.unwrap_or((vec![], T::infinity()));
    Ok((cols, v, evaluated))
}

/// Chooses `p` seeding columns minimising the constant-SNR objective. `candidates`
/// restricts the stacked columns searched (all `nτ` when `None`).
pub fn select_constant_snr<T: Real>(
    op: &ReconstructionOperator<T>,
    p: usize,
    method: SelectionMethod,
    candidates: Option<&[usize]>,
) -> Result<SelectionResult> {
    if p < op.k {
        return Err(Error::BudgetTooSmall { p, k: op.k });
    }
    let all: Vec<usize> = (0..op.candidates()).collect();
    let cand = candidates.unwrap_or(&all);
    let (cols, value, evaluated) = match method {
        SelectionMethod::Exhaustive => exhaustive_min(cand, p, |s| constant_snr_objective(op, s))?,
        _ => {
            let scale = op.phi.frobenius().powi(2) / T::lit(op.candidates().max(1) as f64);
            let delta = T::lit(1e-9) * scale.max(T::min_positive_value());
            let mut chosen: Vec<usize> = Vec::new();
            let mut evaluated = 0u64;
            while chosen.len() < p {
                let d = if chosen.len() + 1 < op.k { delta } else { T::zero() };
                let mut best: Option<(usize, T)> = None;
                for &j in cand.iter().filter(|j| !chosen.contains(j)) {
                    let mut cols = chosen.clone();
                    cols.push(j);
                    let phi = op.phi.select_cols(&cols);
                    let v = gram_objective(&phi.matmul(&phi.adjoint()), d);
                    evaluated += 1;
                    if best.is_none_or(|(_, b)| v < b) {
                        best = Some((j, v));
                    }
                }
                match best {
                    Some((j, _)) => chosen.push(j),
                    None => break,
                }
            }
            chosen.sort_unstable();
            let v = constant_snr_objective(op, &chosen);
            (chosen, v, evaluated)
        }
    };
    Ok(SelectionResult {
        pattern: op.pattern_of(&cols),
        objective_value: value.to_f64_lossy(),
        method: if method == SelectionMethod::L1Relaxed { SelectionMethod::GreedyForward } else { method },
        candidates_evaluated: evaluated,
    })
}

/// Chooses `p` seeding columns minimising `trace(Φ_K diag(c) Φ_Kᴴ)`, the sum of the
/// selected squared column norms. The objective is separable, so the smallest `p`
/// columns solve both the binary problem and its linear relaxation; `Exhaustive`
/// enumerates anyway.
pub fn select_fixed_noise<T: Real>(
    op: &ReconstructionOperator<T>,
    p: usize,
    method: SelectionMethod,
    candidates: Option<&[usize]>,
) -> Result<SelectionResult> {
    if p == 0 {
        return Err(Error::InvalidArgument("budget must be at least 1".into()));
    }
    let all: Vec<usize> = (0..op.candidates()).collect();
    let cand = candidates.unwrap_or(&all);
    if p > cand.len() {
        return Err(Error::InvalidArgument(format!("budget {p} exceeds {} candidates", cand.len())));
    }
    let norms: Vec<T> = (0..op.candidates()).map(|j| norm2_sqr(&op.phi.column(j))).collect();
    let score = |s: &[usize]| s.iter().map(|&j| norms[j]).sum::<T>();
    let (cols, value, evaluated) = match method {
        SelectionMethod::Exhaustive => exhaustive_min(cand, p, score)?,
        _ => {
            let mut order = cand.to_vec();
            order
                .sort_by(|&a, &b| norms[a].partial_cmp(&norms[b]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b)));
            order.truncate(p);
            order.sort_unstable();
            let v = score(&order);
            (order, v, cand.len() as u64)
        }
    };
    Ok(SelectionResult {
        pattern: op.pattern_of(&cols),
        objective_value: value.to_f64_lossy(),
        method,
        candidates_evaluated: evaluated,
    })
}

/// Number of distinct active eigenvalues, used to size filters in reports.
pub fn distinct_active<T: Real>(basis: &SpectralBasis<T>, k: usize) -> usize {
    distinct_groups(&basis.eigenvalues[..k], basis.distinct_eps()).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(8, 4), 70);
        assert_eq!(binomial(10, 4), 210);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(34, 0), 1);
    }

    #[test]
    fn subsets_are_lexicographic() {
        let mut out = Vec::new();
        for_each_subset(&[1, 3, 5, 7], 2, |s| out.push(s.to_vec()));
        assert_eq!(out, vec![vec![1, 3], vec![1, 5], vec![1, 7], vec![3, 5], vec![3, 7], vec![5, 7]]);
        let mut count = 0;
        for_each_subset(&(0..8).collect::<Vec<_>>(), 4, |_| count += 1);
        assert_eq!(count, 70);
        let mut empty = 0;
        for_each_subset(&[0, 1], 0, |s| {
            assert!(s.is_empty());
            empty += 1
        });
        assert_eq!(empty, 1);
    }
}
