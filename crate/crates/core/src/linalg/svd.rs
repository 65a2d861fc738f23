use super::Mat;
use crate::scalar::{cre, norm2, norm2_sqr, Real, C};

/// Singular value decomposition `A = U diag(s) Vᴴ` by one-sided (Hestenes) Jacobi.
///
/// `u` is `m×n` (columns for zero singular values are zero), `s` has length `n`
/// sorted descending, and `v` is the full unitary `n×n` factor, so the trailing
/// columns of `v` span the numerical kernel even when `m < n`.
#[derive(Debug, Clone)]
pub struct Svd<T: Real> {
    pub u: Mat<T>,
    pub s: Vec<T>,
    pub v: Mat<T>,
}

const MAX_SWEEPS: usize = 80;

impl<T: Real> Svd<T> {
    pub fn new(a: &Mat<T>) -> Self {
        let m = a.nrows();
        let n = a.ncols();
        // column-major working copies
        let mut cols: Vec<Vec<C<T>>> = (0..n).map(|j| a.column(j)).collect();
        let mut vcols: Vec<Vec<C<T>>> = (0..n)
            .map(|j| {
                let mut e = vec![cre(T::zero()); n];
                e[j] = cre(T::one());
                e
            })
            .collect();
        let eps = T::epsilon();

        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..n {
                for q in p + 1..n {
                    let alpha = norm2_sqr(&cols[p]);
                    let beta = norm2_sqr(&cols[q]);
                    if alpha == T::zero() || beta == T::zero() {
                        continue;
                    }
                    let gamma = crate::scalar::dotc(&cols[p], &cols[q]);
                    let g = gamma.norm();
                    if g <= eps * (alpha * beta).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let phase = gamma / g;
                    let zeta = (beta - alpha) / (g + g);
                    let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                    let cs = T::one() / (T::one() + t * t).sqrt();
                    let sn = cs * t;
                    rotate(&mut cols, p, q, cs, sn, phase);
                    rotate(&mut vcols, p, q, cs, sn, phase);
                }
            }
            if !rotated {
                break;
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        let norms: Vec<T> = cols.iter().map(|c| norm2(c)).collect();
        order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(std::cmp::Ordering::Equal));

        let mut u = Mat::zeros(m, n);
        let mut v = Mat::zeros(n, n);
        let mut s = Vec::with_capacity(n);
        for (k, &j) in order.iter().enumerate() {
            let sigma = norms[j];
            s.push(sigma);
            if sigma > T::zero() {
                let inv = T::one() / sigma;
                let col: Vec<C<T>> = cols[j].iter().map(|z| z * inv).collect();
                u.set_column(k, &col);
            }
            v.set_column(k, &vcols[j]);
        }
        Self { u, s, v }
    }

    pub fn sigma_max(&self) -> T {
        self.s.first().copied().unwrap_or_else(T::zero)
    }

    /// Smallest of the `min(m, n)` leading singular values.
    pub fn sigma_min(&self) -> T {
        let k = self.u.nrows().min(self.s.len());
        if k == 0 {
            return T::zero();
        }
        self.s[k - 1]
    }

    /// Count of singular values above `rtol · σ_max`.
    pub fn rank(&self, rtol: T) -> usize {
        let thr = rtol * self.sigma_max();
        let k = self.u.nrows().min(self.s.len());
        self.s[..k].iter().filter(|&&x| x > thr).count()
    }

    /// `σ_max / σ_min` over the leading `min(m, n)` values; infinite when singular.
    pub fn cond(&self) -> T {
        let lo = self.sigma_min();
        if lo == T::zero() {
            T::infinity()
        } else {
            self.sigma_max() / lo
        }
    }

    /// Orthonormal basis (as columns) of the numerical kernel.
    pub fn null_space(&self, rtol: T) -> Vec<Vec<C<T>>> {
        let r = self.rank(rtol);
        (r..self.v.ncols()).map(|j| self.v.column(j)).collect()
    }

    /// Minimum-norm least-squares solution using singular values above `rtol · σ_max`.
    pub fn solve(&self, b: &[C<T>], rtol: T) -> Vec<C<T>> {
        let r = self.rank(rtol);
        let n = self.v.nrows();
        let mut x = vec![cre(T::zero()); n];
        for k in 0..r {
            let coef = crate::scalar::dotc(&self.u.column(k), b) / self.s[k];
            for (i, xi) in x.iter_mut().enumerate() {
                *xi += self.v[(i, k)] * coef;
            }
        }
        x
    }
}

fn rotate<T: Real>(cols: &mut [Vec<C<T>>], p: usize, q: usize, cs: T, sn: T, phase: C<T>) {
    // [a_p a_q] <- [a_p a_q] [[c, s e^{iφ}], [-s e^{-iφ}, c]]
    let (left, right) = cols.split_at_mut(q);
    let ap = &mut left[p];
    let aq = &mut right[0];
    let pc = phase.conj();
    for (x, y) in ap.iter_mut().zip(aq.iter_mut()) {
        let xp = *x;
        let yq = *y;
        *x = xp * cs - yq * pc * sn;
        *y = xp * phase * sn + yq * cs;
    }
}

/// Result of a least-squares solve.
#[derive(Debug, Clone)]
pub struct LeastSquares<T: Real> {
    pub x: Vec<C<T>>,
    pub rank: usize,
    pub singular_values: Vec<T>,
    pub residual_norm: T,
}

impl<T: Real> LeastSquares<T> {
    pub fn cond(&self) -> T {
        let lo = self.singular_values.get(self.rank.max(1) - 1).copied().unwrap_or_else(T::zero);
        match self.singular_values.first() {
            Some(&hi) if lo > T::zero() => hi / lo,
            _ => T::infinity(),
        }
    }
}

/// Minimum-norm least-squares solve of `A x ≈ b` with relative rank threshold `rtol`.
pub fn lstsq<T: Real>(a: &Mat<T>, b: &[C<T>], rtol: T) -> LeastSquares<T> {
    let svd = Svd::new(a);
    let x = svd.solve(b, rtol);
    let r = crate::scalar::sub(b, &a.matvec(&x));
    let k = a.nrows().min(a.ncols());
    LeastSquares { rank: svd.rank(rtol), singular_values: svd.s[..k].to_vec(), residual_norm: norm2(&r), x }
}
