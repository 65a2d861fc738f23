//! Graph filter design and application.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Lu, Mat, Svd};
use crate::scalar::{cre, Real, C};
use crate::spectral::{check_len, distinct_groups, GraphSignal, ShiftOperator, SpectralBasis};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DesignMode {
    KernelLowpass,
    ProductAnnihilating,
    Explicit,
}

/// Polynomial filter `H = Σ_l h_l S^l` together with its response `ĥ = Ψh`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterDesign<T> {
    pub coeffs: Vec<C<T>>,
    pub response: Vec<C<T>>,
    pub mode: DesignMode,
    /// Factor roots for product designs, in application order; `coeffs = a0 ∏(z − r)`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub roots: Vec<C<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gain: Option<C<T>>,
    /// Singular values of the annihilation system, for kernel designs.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub singular_values: Vec<f64>,
}

impl<T: Real> FilterDesign<T> {
    /// Wraps raw coefficients, computing the response on `basis`.
    pub fn from_coeffs(basis: &SpectralBasis<T>, coeffs: Vec<C<T>>) -> Self {
        let response = basis.psi(coeffs.len().max(1)).matvec(&pad(&coeffs));
        Self { coeffs, response, mode: DesignMode::Explicit, roots: vec![], gain: None, singular_values: vec![] }
    }

    /// The trivial filter `h = [1]`.
    pub fn identity(n: usize) -> Self {
        Self {
            coeffs: vec![cre(T::one())],
            response: vec![cre(T::one()); n],
            mode: DesignMode::Explicit,
            roots: vec![],
            gain: None,
            singular_values: vec![],
        }
    }

    /// `L − 1`
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Largest stopband response relative to the largest response, for frequencies `k ≥ K`.
    pub fn leakage(&self, k: usize) -> T {
        let m = crate::scalar::max_abs(&self.response);
        if m == T::zero() {
            return T::zero();
        }
        crate::scalar::max_abs(&self.response[k.min(self.response.len())..]) / m
    }

    /// Smallest passband response relative to the largest response.
    pub fn passband_min(&self, k: usize) -> T {
        let m = crate::scalar::max_abs(&self.response);
        if m == T::zero() {
            return T::zero();
        }
        self.response[..k].iter().fold(T::infinity(), |a, z| a.min(z.norm())) / m
    }
}

fn pad<T: Real>(coeffs: &[C<T>]) -> Vec<C<T>> {
    if coeffs.is_empty() {
        vec![cre(T::zero())]
    } else {
        coeffs.to_vec()
    }
}

fn check_bandwidth<T: Real>(basis: &SpectralBasis<T>, k: usize) -> Result<()> {
    if k == 0 || k > basis.n() {
        return Err(Error::InvalidArgument(format!("bandwidth {k} outside 1..={}", basis.n())));
    }
    Ok(())
}

fn rotate_largest_positive<T: Real>(v: &mut [C<T>]) {
    let m = crate::scalar::max_abs(v);
    if m == T::zero() {
        return;
    }
    let thr = m * (T::one() - T::lit(1e-8));
    if let Some(p) = v.iter().find(|z| z.norm() >= thr).copied() {
        let rot = p.conj() / p.norm();
        v.iter_mut().for_each(|z| *z = *z * rot);
    }
}

/// Orthonormal basis of `{h ∈ ℂ^L : Ψ_{k>K} h = 0}`, with the singular values of the
/// `(N−K) × L` system.
pub fn kernel_basis<T: Real>(basis: &SpectralBasis<T>, k: usize, l: usize) -> Result<(Vec<Vec<C<T>>>, Vec<T>)> {
    check_bandwidth(basis, k)?;
    if l == 0 {
        return Err(Error::InvalidArgument("filter length must be positive".into()));
    }
    let n = basis.n();
    if k == n {
        let ident = Mat::<T>::identity(l);
        return Ok(((0..l).map(|j| ident.column(j)).collect(), vec![]));
    }
    let inactive: Vec<usize> = (k..n).collect();
    let m = basis.psi(l).select_rows(&inactive);
    let svd = Svd::new(&m);
    let ker = svd.null_space(T::lit(basis.tol.rank));
    Ok((ker, svd.s.clone()))
}

/// Minimal-length annihilating low-pass filter: `L = D + 1` and `h*` spans the kernel
/// of the stopband rows of `Ψ`.
pub fn design_lowpass_kernel<T: Real>(basis: &SpectralBasis<T>, k: usize) -> Result<FilterDesign<T>> {
    check_bandwidth(basis, k)?;
    if let Some((active, inactive)) = basis.active_inactive_collision(k) {
        return Err(Error::ConditionViolation { active, inactive });
    }
    let n = basis.n();
    let d = distinct_groups(&basis.eigenvalues[k..], basis.distinct_eps()).len();
    let l = d + 1;
    let (ker, sv) = kernel_basis(basis, k, l)?;
    let singular_values: Vec<f64> = sv.iter().map(|x| x.to_f64_lossy()).collect();
    if ker.len() != l - d {
        return Err(Error::KernelDimension { expected: l - d, found: ker.len(), singular_values });
    }
    let mut h = ker.into_iter().next().expect("kernel has one vector");
    if k == n {
        h = vec![cre(T::one())];
    }
    rotate_largest_positive(&mut h);
    let response = basis.psi(l).matvec(&h);
    Ok(FilterDesign {
        coeffs: h,
        response,
        mode: DesignMode::KernelLowpass,
        roots: vec![],
        gain: None,
        singular_values,
    })
}

/// `a0 ∏(z − λ_k)` over the distinct eigenvalues of `kill_set`, in the given order.
pub fn design_annihilating_product<T: Real>(
    basis: &SpectralBasis<T>,
    kill_set: &[usize],
    a0: C<T>,
) -> Result<FilterDesign<T>> {
    let n = basis.n();
    if let Some(&bad) = kill_set.iter().find(|&&i| i >= n) {
        return Err(Error::InvalidArgument(format!("frequency index {bad} outside 0..{n}")));
    }
    let lams: Vec<C<T>> = kill_set.iter().map(|&i| basis.eigenvalues[i]).collect();
    let roots: Vec<C<T>> = distinct_groups(&lams, basis.distinct_eps()).iter().map(|g| lams[g[0]]).collect();
    let coeffs = expand_roots(&roots, a0);
    // factored evaluation; the expanded coefficients lose accuracy for many roots
    let response = basis.eigenvalues.iter().map(|&z| roots.iter().fold(a0, |acc, &r| acc * (z - r))).collect();
    Ok(FilterDesign {
        coeffs,
        response,
        mode: DesignMode::ProductAnnihilating,
        roots,
        gain: Some(a0),
        singular_values: vec![],
    })
}

/// Coefficients (ascending powers) of `a0 ∏(z − r)`.
pub fn expand_roots<T: Real>(roots: &[C<T>], a0: C<T>) -> Vec<C<T>> {
    let mut h = vec![a0];
    for &r in roots {
        let mut next = vec![cre(T::zero()); h.len() + 1];
        for (i, &c) in h.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= r * c;
        }
        h = next;
    }
    let big = crate::scalar::max_abs(&h);
    if big > T::lit(1e12) {
        log::warn!("product filter coefficients reach {:.3e}; polynomial form is ill-conditioned", big.to_f64_lossy());
    }
    h
}

/// Lowest-degree filter whose response equals `target` on every frequency.
/// Frequencies sharing an eigenvalue must share the target value.
pub fn design_from_response<T: Real>(basis: &SpectralBasis<T>, target: &[C<T>]) -> Result<FilterDesign<T>> {
    check_len(basis.n(), target.len())?;
    let groups = distinct_groups(&basis.eigenvalues, basis.distinct_eps());
    let scale = crate::scalar::max_abs(target).max(T::min_positive_value());
    for g in &groups {
        for &i in &g[1..] {
            if (target[i] - target[g[0]]).norm() > T::lit(1e-10) * scale {
                return Err(Error::InvalidArgument(format!(
                    "frequencies {} and {i} share an eigenvalue but not a target response",
                    g[0]
                )));
            }
        }
    }
    let reps: Vec<usize> = groups.iter().map(|g| g[0]).collect();
    let lam: Vec<C<T>> = reps.iter().map(|&i| basis.eigenvalues[i]).collect();
    let psi = crate::spectral::vandermonde(&lam, reps.len());
    let rhs: Vec<C<T>> = reps.iter().map(|&i| target[i]).collect();
    let h = Lu::new(&psi).solve(&rhs).ok_or_else(|| Error::InvalidArgument("singular Vandermonde system".into()))?;
    let response = basis.psi(h.len()).matvec(&h);
    Ok(FilterDesign {
        coeffs: h,
        response,
        mode: DesignMode::Explicit,
        roots: vec![],
        gain: None,
        singular_values: vec![],
    })
}

/// `Σ_l h_l S^l x` by Horner's rule: `L − 1` applications of `S`.
pub fn apply_filter_polynomial<T: Real>(
    shift: &ShiftOperator<T>,
    h: &[C<T>],
    x: &GraphSignal<T>,
) -> Result<GraphSignal<T>> {
    check_len(shift.n(), x.len())?;
    let Some((&last, rest)) = h.split_last() else {
        return Ok(GraphSignal::zeros(x.len()));
    };
    let mut z: Vec<C<T>> = x.values.iter().map(|&v| v * last).collect();
    for &hl in rest.iter().rev() {
        z = shift.apply(&z);
        for (zi, &xi) in z.iter_mut().zip(&x.values) {
            *zi += hl * xi;
        }
    }
    Ok(GraphSignal::new(z))
}

/// Applies `a0 ∏(S − r I)` one factor at a time; returns the signal after the gain and
/// after every factor.
pub fn apply_product_stages<T: Real>(
    shift: &ShiftOperator<T>,
    roots: &[C<T>],
    a0: C<T>,
    x: &GraphSignal<T>,
) -> Result<Vec<GraphSignal<T>>> {
    check_len(shift.n(), x.len())?;
    let mut z: Vec<C<T>> = x.values.iter().map(|&v| v * a0).collect();
    let mut out = vec![GraphSignal::new(z.clone())];
    for &r in roots {
        let sz = shift.apply(&z);
        z = sz.iter().zip(&z).map(|(&a, &b)| a - r * b).collect();
        out.push(GraphSignal::new(z.clone()));
    }
    Ok(out)
}

/// `∏_l (I − α_l L) x`, applied in the order given.
pub fn apply_diffusion_rate_filter<T: Real>(
    laplacian: &Mat<T>,
    rates: &[T],
    x: &GraphSignal<T>,
) -> Result<GraphSignal<T>> {
    if !laplacian.is_square() {
        return Err(Error::DimensionMismatch { expected: laplacian.nrows(), got: laplacian.ncols() });
    }
    check_len(laplacian.nrows(), x.len())?;
    let mut z = x.values.clone();
    for &a in rates {
        let lz = laplacian.matvec(&z);
        for (zi, li) in z.iter_mut().zip(lz) {
            *zi -= li * a;
        }
    }
    Ok(GraphSignal::new(z))
}

/// Rewrites the factors `(S − rI)` of a product filter on `S = I − αL` as diffusion
/// steps: `S − rI = (1 − r)(I − α/(1 − r) L)`. Returns the rates and the overall gain
/// `a0 ∏(1 − r)`. Roots must be real and different from 1.
pub fn diffusion_rates_from_roots<T: Real>(alpha: T, roots: &[C<T>], a0: C<T>) -> Result<(Vec<T>, C<T>)> {
    let mut gain = a0;
    let mut rates = Vec::with_capacity(roots.len());
    for r in roots {
        let one_minus = T::one() - r.re;
        if r.im.abs() > T::lit(1e-12) || one_minus.abs() <= T::epsilon() {
            return Err(Error::InvalidArgument(format!("root {r} has no diffusion-rate form")));
        }
        rates.push(alpha / one_minus);
        gain = gain * one_minus;
    }
    Ok((rates, gain))
}
