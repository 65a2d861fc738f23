//! Graphs, shift operators and their eigendecomposition.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eig_general, eig_hermitian, inverse, Mat, Svd};
use crate::scalar::{clockwise_arg, cre, norm2, Real, C};
use crate::tolerances::Tolerances;

/// Weighted graph on nodes `0..n`. An edge `(src, dst, w)` lets node `src` feed node `dst`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Graph {
    pub n: usize,
    pub directed: bool,
    pub edges: Vec<(usize, usize, f64)>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>, directed: bool) -> Result<Self> {
        let g = Self { n, directed, edges };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for &(s, d, w) in &self.edges {
            if s >= self.n || d >= self.n {
                return Err(Error::InvalidGraph(format!("edge ({s}, {d}) outside 0..{}", self.n)));
            }
            if !w.is_finite() {
                return Err(Error::NonFinite("edge weight"));
            }
            let key = if self.directed { (s, d) } else { (s.min(d), s.max(d)) };
            if !seen.insert(key) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({s}, {d})")));
            }
        }
        Ok(())
    }

    /// `A[dst][src] = w`; undirected edges fill both entries.
    pub fn adjacency<T: Real>(&self) -> Mat<T> {
        let mut a = Mat::zeros(self.n, self.n);
        for &(s, d, w) in &self.edges {
            a[(d, s)] = cre(T::lit(w));
            if !self.directed {
                a[(s, d)] = cre(T::lit(w));
            }
        }
        a
    }

    /// `L = D − A` of an undirected graph. Self-loops do not contribute.
    pub fn laplacian<T: Real>(&self) -> Result<Mat<T>> {
        if self.directed {
            return Err(Error::LaplacianOnDirected);
        }
        let mut l = Mat::zeros(self.n, self.n);
        for &(s, d, w) in &self.edges {
            if s == d {
                continue;
            }
            let w = cre(T::lit(w));
            l[(s, d)] -= w;
            l[(d, s)] -= w;
            l[(s, s)] += w;
            l[(d, d)] += w;
        }
        Ok(l)
    }

    pub fn has_edge(&self, src: usize, dst: usize) -> bool {
        self.edges.iter().any(|&(s, d, _)| (s == src && d == dst) || (!self.directed && s == dst && d == src))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShiftChoice {
    Adjacency,
    Laplacian,
    NormalizedLaplacianShift,
}

/// Resolved kind of a shift operator. `Custom` wraps a user-supplied matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ShiftKind<T> {
    Adjacency,
    Laplacian,
    /// `S = I − αL`
    NormalizedLaplacianShift(T),
    Custom,
}

#[derive(Debug, Clone)]
pub struct ShiftOperator<T: Real> {
    pub matrix: Mat<T>,
    pub kind: ShiftKind<T>,
    pub graph: Graph,
}

impl<T: Real> ShiftOperator<T> {
    /// Wraps an arbitrary square matrix; the graph is read off its off-diagonal support.
    pub fn from_matrix(matrix: Mat<T>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), got: matrix.ncols() });
        }
        if !matrix.is_finite() {
            return Err(Error::NonFinite("shift matrix"));
        }
        let n = matrix.nrows();
        let mut edges = Vec::new();
        for d in 0..n {
            for s in 0..n {
                let z = matrix[(d, s)];
                if s != d && z.norm() != T::zero() {
                    edges.push((s, d, z.norm().to_f64_lossy()));
                }
            }
        }
        Ok(Self { matrix, kind: ShiftKind::Custom, graph: Graph { n, directed: true, edges } })
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    /// True when every nonzero off-diagonal entry `(j, i)` corresponds to an edge `i → j`.
    pub fn respects_sparsity(&self) -> bool {
        let n = self.n();
        let mut allowed = vec![false; n * n];
        for &(s, d, _) in &self.graph.edges {
            allowed[d * n + s] = true;
            if !self.graph.directed {
                allowed[s * n + d] = true;
            }
        }
        (0..n).all(|j| (0..n).all(|i| i == j || allowed[j * n + i] || self.matrix[(j, i)].norm() == T::zero()))
    }

    /// Applies `S` once.
    pub fn apply(&self, x: &[C<T>]) -> Vec<C<T>> {
        self.matrix.matvec(x)
    }
}

/// Builds the shift operator of `graph`. For `NormalizedLaplacianShift`, `alpha`
/// defaults to `1/λ_max(L)`.
pub fn build_shift<T: Real>(graph: &Graph, choice: ShiftChoice, alpha: Option<T>) -> Result<ShiftOperator<T>> {
    graph.validate()?;
    let (matrix, kind) = match choice {
        ShiftChoice::Adjacency => (graph.adjacency(), ShiftKind::Adjacency),
        ShiftChoice::Laplacian => (graph.laplacian()?, ShiftKind::Laplacian),
        ShiftChoice::NormalizedLaplacianShift => {
            let l = graph.laplacian::<T>()?;
            let a = match alpha {
                Some(a) => a,
                None => {
                    let lmax = laplacian_lambda_max(&l)?;
                    if lmax <= T::zero() {
                        return Err(Error::InvalidGraph("Laplacian has no positive eigenvalue".into()));
                    }
                    T::one() / lmax
                }
            };
            if !a.is_finite() {
                return Err(Error::NonFinite("alpha"));
            }
            (Mat::identity(graph.n).sub(&l.scale(cre(a))), ShiftKind::NormalizedLaplacianShift(a))
        }
    };
    if !matrix.is_finite() {
        return Err(Error::NonFinite("shift matrix"));
    }
    Ok(ShiftOperator { matrix, kind, graph: graph.clone() })
}

pub fn laplacian_lambda_max<T: Real>(l: &Mat<T>) -> Result<T> {
    let e = eig_hermitian(l)?;
    Ok(e.values.iter().fold(T::zero(), |m, z| m.max(z.re)))
}

/// Eigendecomposition `S = V diag(λ) V⁻¹` with a deterministic frequency order.
#[derive(Debug, Clone)]
pub struct SpectralBasis<T: Real> {
    pub v: Mat<T>,
    pub eigenvalues: Vec<C<T>>,
    pub vinv: Mat<T>,
    pub cond_v: T,
    /// `‖S − VΛV⁻¹‖_F / ‖S‖_F`
    pub residual: T,
    /// Eigenvectors are orthonormal (symmetric or Hermitian shift).
    pub unitary: bool,
    pub tol: Tolerances,
}

impl<T: Real> SpectralBasis<T> {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max_abs_eigenvalue(&self) -> T {
        crate::scalar::max_abs(&self.eigenvalues)
    }

    /// Absolute threshold under which two eigenvalues are the same.
    pub fn distinct_eps(&self) -> T {
        T::lit(self.tol.distinct) * self.max_abs_eigenvalue()
    }

    pub fn same_eigenvalue(&self, a: usize, b: usize) -> bool {
        (self.eigenvalues[a] - self.eigenvalues[b]).norm() <= self.distinct_eps()
    }

    /// `Ψ` with `m` columns.
    pub fn psi(&self, m: usize) -> Mat<T> {
        vandermonde(&self.eigenvalues, m)
    }

    /// `ê_i = V⁻¹ e_i`, the `i`-th column of `V⁻¹`.
    pub fn e_hat(&self, node: usize) -> Vec<C<T>> {
        self.vinv.column(node)
    }

    /// `V_K`, the first `k` eigenvectors.
    pub fn v_active(&self, k: usize) -> Mat<T> {
        self.v.select_cols(&(0..k).collect::<Vec<_>>())
    }

    /// First pair `(k1 ≤ K, k2 > K)` of equal active/inactive eigenvalues, if any.
    pub fn active_inactive_collision(&self, k: usize) -> Option<(usize, usize)> {
        for a in 0..k {
            for b in k..self.n() {
                if self.same_eigenvalue(a, b) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// `|λ_K| = |λ_{K+1}|` (1-based): the bandwidth cut splits a magnitude tie.
    pub fn bandwidth_tie(&self, k: usize) -> bool {
        if k == 0 || k >= self.n() {
            return false;
        }
        let tie = T::lit(self.tol.tie).max(T::epsilon() * T::lit(64.0)) * self.max_abs_eigenvalue();
        (self.eigenvalues[k - 1].norm() - self.eigenvalues[k].norm()).abs() <= tie
    }
}

/// Diagonalizes `shift` and orders frequencies by descending `|λ|`, ties by descending
/// argument in `(−2π, 0]`, then by eigensolver index.
pub fn decompose<T: Real>(shift: &ShiftOperator<T>, tol: &Tolerances) -> Result<SpectralBasis<T>> {
    decompose_matrix(&shift.matrix, tol)
}

pub fn decompose_matrix<T: Real>(s: &Mat<T>, tol: &Tolerances) -> Result<SpectralBasis<T>> {
    if !s.is_finite() {
        return Err(Error::NonFinite("shift matrix"));
    }
    let n = s.nrows();
    let unitary = s.is_hermitian(T::epsilon() * T::lit(64.0));
    let eig = if unitary { eig_hermitian(s)? } else { eig_general(s)? };

    let mut values = eig.values;
    let maxabs = crate::scalar::max_abs(&values);
    // thresholds never drop below a few ulps of the scalar type
    let ulps = T::epsilon() * T::lit(64.0);
    let snap = T::lit(1e-12).max(ulps) * maxabs;
    for z in values.iter_mut() {
        if z.im.abs() <= snap {
            z.im = T::zero();
        }
        if z.re.abs() <= snap {
            z.re = T::zero();
        }
    }
    let order = frequency_order(&values, T::lit(tol.tie).max(ulps) * maxabs);

    let eigenvalues: Vec<C<T>> = order.iter().map(|&i| values[i]).collect();
    let mut v = Mat::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        let col = normalize_eigenvector(eig.vectors.column(i));
        v.set_column(k, &col);
    }

    let svd = Svd::new(&v);
    let smax = svd.sigma_max();
    let smin = svd.sigma_min();
    let inv_cond = if smax > T::zero() { smin / smax } else { T::zero() };
    if inv_cond < T::lit(1e-12) {
        return Err(Error::NonDiagonalizable { inv_cond: inv_cond.to_f64_lossy(), residual: f64::NAN });
    }
    let vinv = if unitary {
        v.adjoint()
    } else {
        inverse(&v).ok_or(Error::NonDiagonalizable { inv_cond: inv_cond.to_f64_lossy(), residual: f64::NAN })?
    };
    let rec = v.scale_cols(&eigenvalues).matmul(&vinv);
    let snorm = s.frobenius();
    let residual = if snorm > T::zero() { rec.sub(s).frobenius() / snorm } else { rec.frobenius() };
    if !(residual <= T::lit(tol.reconstruction)) {
        return Err(Error::NonDiagonalizable { inv_cond: inv_cond.to_f64_lossy(), residual: residual.to_f64_lossy() });
    }
    Ok(SpectralBasis { v, eigenvalues, vinv, cond_v: T::one() / inv_cond, residual, unitary, tol: *tol })
}

/// Permutation putting `values` in frequency order. Magnitudes within `tie` of a
/// group's leading magnitude form one group, ordered by argument.
pub fn frequency_order<T: Real>(values: &[C<T>], tie: T) -> Vec<usize> {
    let mags: Vec<T> = values.iter().map(|z| z.norm()).collect();
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| mags[b].partial_cmp(&mags[a]).unwrap_or(Ordering::Equal).then(a.cmp(&b)));
    let mut out = Vec::with_capacity(idx.len());
    let mut start = 0;
    while start < idx.len() {
        let lead = mags[idx[start]];
        let mut end = start + 1;
        while end < idx.len() && lead - mags[idx[end]] <= tie {
            end += 1;
        }
        let mut group = idx[start..end].to_vec();
        group.sort_by(|&a, &b| {
            clockwise_arg(values[b]).partial_cmp(&clockwise_arg(values[a])).unwrap_or(Ordering::Equal).then(a.cmp(&b))
        });
        out.extend(group);
        start = end;
    }
    out
}

/// Unit norm, with the first entry of (near-)maximal magnitude made real positive.
fn normalize_eigenvector<T: Real>(mut v: Vec<C<T>>) -> Vec<C<T>> {
    let nv = norm2(&v);
    if nv == T::zero() {
        return v;
    }
    v.iter_mut().for_each(|z| *z = *z / nv);
    let m = crate::scalar::max_abs(&v);
    let thr = m * (T::one() - T::lit(1e-8));
    if let Some(p) = v.iter().find(|z| z.norm() >= thr).copied() {
        let rot = p.conj() / p.norm();
        v.iter_mut().for_each(|z| *z = *z * rot);
    }
    v
}

/// `n × m` matrix with entry `(i, l) = λ_i^l`.
pub fn vandermonde<T: Real>(eigenvalues: &[C<T>], m: usize) -> Mat<T> {
    let mut psi = Mat::zeros(eigenvalues.len(), m);
    for (i, &lam) in eigenvalues.iter().enumerate() {
        let mut p = cre(T::one());
        for l in 0..m {
            psi[(i, l)] = p;
            p *= lam;
        }
    }
    psi
}

/// Groups indices into clusters of equal values: a value joins the first cluster
/// whose leading member is within `eps`.
pub fn distinct_groups<T: Real>(values: &[C<T>], eps: T) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &z) in values.iter().enumerate() {
        match groups.iter_mut().find(|g| (values[g[0]] - z).norm() <= eps) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    groups
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSignal<T> {
    pub values: Vec<C<T>>,
}

impl<T: Real> GraphSignal<T> {
    pub fn new(values: Vec<C<T>>) -> Self {
        Self { values }
    }

    pub fn from_real(values: &[T]) -> Self {
        Self { values: crate::scalar::complexify(values) }
    }

    pub fn zeros(n: usize) -> Self {
        Self { values: vec![cre(T::zero()); n] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn norm(&self) -> T {
        norm2(&self.values)
    }

    /// Largest imaginary part relative to the signal norm.
    pub fn imag_residue(&self) -> T {
        crate::scalar::imag_residue(&self.values)
    }

    /// `‖self − target‖ / ‖target‖`, or the absolute error for a zero target.
    pub fn relative_error(&self, target: &Self) -> T {
        let e = norm2(&crate::scalar::sub(&self.values, &target.values));
        let t = target.norm();
        if t > T::zero() {
            e / t
        } else {
            e
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencySignal<T> {
    pub coeffs: Vec<C<T>>,
    pub bandwidth: Option<usize>,
}

impl<T: Real> FrequencySignal<T> {
    /// `|x̂_k| ≤ eps · ‖x̂‖` for every `k ≥ K` (0-based).
    pub fn is_bandlimited(&self, k: usize, eps: T) -> bool {
        let thr = eps * norm2(&self.coeffs);
        self.coeffs.iter().skip(k).all(|z| z.norm() <= thr)
    }
}

pub fn gft<T: Real>(basis: &SpectralBasis<T>, x: &GraphSignal<T>) -> Result<FrequencySignal<T>> {
    check_len(basis.n(), x.len())?;
    Ok(FrequencySignal { coeffs: basis.vinv.matvec(&x.values), bandwidth: None })
}

pub fn igft<T: Real>(basis: &SpectralBasis<T>, x: &FrequencySignal<T>) -> Result<GraphSignal<T>> {
    check_len(basis.n(), x.coeffs.len())?;
    Ok(GraphSignal { values: basis.v.matvec(&x.coeffs) })
}

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

/// Node-specific part of the census.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeCensus {
    pub node: usize,
    /// Active frequencies (0-based) the node cannot express.
    pub zero_active: Vec<usize>,
    pub u1: usize,
    pub u2: usize,
    /// Inactive frequencies the node expresses.
    pub k_u: Vec<usize>,
    pub d2: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumCensus {
    pub k: usize,
    /// Distinct eigenvalues among the inactive frequencies.
    pub d: usize,
    /// Repeats among the active eigenvalues.
    pub d1: usize,
    pub node: Option<NodeCensus>,
}

/// Counts repeated eigenvalues and inexpressible frequencies. `eps` scales both the
/// eigenvalue equality threshold (relative to `max|λ|`) and the zero test on `ê_node`.
pub fn spectrum_census<T: Real>(
    basis: &SpectralBasis<T>,
    k: usize,
    node: Option<usize>,
    eps: T,
) -> Result<SpectrumCensus> {
    let n = basis.n();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("bandwidth {k} outside 1..={n}")));
    }
    let lam_eps = eps * basis.max_abs_eigenvalue();
    let lam = &basis.eigenvalues;
    let d = distinct_groups(&lam[k..], lam_eps).len();
    let d1 = k - distinct_groups(&lam[..k], lam_eps).len();
    let node = match node {
        None => None,
        Some(i) => {
            if i >= n {
                return Err(Error::InvalidArgument(format!("node {i} outside 0..{n}")));
            }
            let e = basis.e_hat(i);
            let thr = eps * norm2(&e);
            let zero_active: Vec<usize> = (0..k).filter(|&j| e[j].norm() <= thr).collect();
            let u2 = (k..n).filter(|&j| e[j].norm() <= thr).count();
            let k_u: Vec<usize> = (k..n).filter(|&j| e[j].norm() > thr).collect();
            let vals: Vec<C<T>> = k_u.iter().map(|&j| lam[j]).collect();
            let d2 = k_u.len() - distinct_groups(&vals, lam_eps).len();
            Some(NodeCensus { node: i, u1: zero_active.len(), zero_active, u2, k_u, d2 })
        }
    };
    Ok(SpectrumCensus { k, d, d1, node })
}
