use super::Mat;
use crate::scalar::{c, cre, Real, C};

/// Unsorted eigenpairs: `vectors` holds one eigenvector per column.
#[derive(Debug, Clone)]
pub struct Eigen<T: Real> {
    pub values: Vec<C<T>>,
    pub vectors: Mat<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum EigenError {
    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix. Eigenvectors are orthonormal.
pub fn eig_hermitian<T: Real>(a: &Mat<T>) -> Result<Eigen<T>, EigenError> {
    assert!(a.is_square());
    let n = a.nrows();
    let mut m = a.clone();
    // symmetrize exactly
    for i in 0..n {
        m[(i, i)] = cre(m[(i, i)].re);
        for j in i + 1..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * T::lit(0.5);
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
    let mut v = Mat::identity(n);
    let scale = m.frobenius();
    let eps = T::epsilon();
    let mut converged = n <= 1 || scale == T::zero();
    for _ in 0..100 {
        if converged {
            break;
        }
        let mut off = T::zero();
        for i in 0..n {
            for j in i + 1..n {
                off += m[(i, j)].norm_sqr();
            }
        }
        if off.sqrt() <= eps * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let b = m[(p, q)];
                let g = b.norm();
                if g <= eps * T::lit(1e-3) * scale {
                    continue;
                }
                let phase = b / g;
                let zeta = (m[(q, q)].re - m[(p, p)].re) / (g + g);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = cs * t;
                let pc = phase.conj();
                // A <- A G
                for i in 0..n {
                    let x = m[(i, p)];
                    let y = m[(i, q)];
                    m[(i, p)] = x * cs - y * pc * sn;
                    m[(i, q)] = x * phase * sn + y * cs;
                }
                // A <- Gᴴ A
                for j in 0..n {
                    let x = m[(p, j)];
                    let y = m[(q, j)];
                    m[(p, j)] = x * cs - y * phase * sn;
                    m[(q, j)] = x * pc * sn + y * cs;
                }
                m[(p, q)] = cre(T::zero());
                m[(q, p)] = cre(T::zero());
                m[(p, p)] = cre(m[(p, p)].re);
                m[(q, q)] = cre(m[(q, q)].re);
                for i in 0..n {
                    let x = v[(i, p)];
                    let y = v[(i, q)];
                    v[(i, p)] = x * cs - y * pc * sn;
                    v[(i, q)] = x * phase * sn + y * cs;
                }
            }
        }
    }
    if !converged {
        return Err(EigenError::NoConvergence);
    }
    Ok(Eigen { values: m.diagonal(), vectors: v })
}

/// Eigenpairs of a general complex matrix via Hessenberg reduction, shifted QR
/// to complex Schur form, and back substitution for the eigenvectors.
///
/// Defective matrices come back with (numerically) dependent eigenvector columns;
/// callers detect that through the conditioning of the eigenvector matrix.
pub fn eig_general<T: Real>(a: &Mat<T>) -> Result<Eigen<T>, EigenError> {
    assert!(a.is_square());
    let n = a.nrows();
    if n == 0 {
        return Ok(Eigen { values: vec![], vectors: Mat::zeros(0, 0) });
    }
    let (mut h, mut z) = hessenberg(a);
    schur_qr(&mut h, &mut z)?;
    let y = triangular_eigenvectors(&h);
    Ok(Eigen { values: h.diagonal(), vectors: z.matmul(&y) })
}

fn hessenberg<T: Real>(a: &Mat<T>) -> (Mat<T>, Mat<T>) {
    let n = a.nrows();
    let mut h = a.clone();
    let mut z = Mat::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C<T>> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let alpha = crate::scalar::norm2(&x);
        if alpha == T::zero() {
            continue;
        }
        let x0 = x[0];
        let phase = if x0.norm() == T::zero() { cre(T::one()) } else { x0 / x0.norm() };
        let mut v = x;
        v[0] += phase * alpha;
        let vn2 = crate::scalar::norm2_sqr(&v);
        if vn2 == T::zero() {
            continue;
        }
        let two = T::lit(2.0) / vn2;
        // H <- P H
        for j in 0..n {
            let mut w = cre(T::zero());
            for (r, vi) in v.iter().enumerate() {
                w += vi.conj() * h[(k + 1 + r, j)];
            }
            if w.norm() == T::zero() {
                continue;
            }
            for (r, vi) in v.iter().enumerate() {
                h[(k + 1 + r, j)] -= vi * w * two;
            }
        }
        // H <- H P, Z <- Z P
        for mat in [&mut h, &mut z] {
            for i in 0..n {
                let mut w = cre(T::zero());
                for (r, vi) in v.iter().enumerate() {
                    w += mat[(i, k + 1 + r)] * vi;
                }
                if w.norm() == T::zero() {
                    continue;
                }
                for (r, vi) in v.iter().enumerate() {
                    mat[(i, k + 1 + r)] -= w * vi.conj() * two;
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = cre(T::zero());
        }
    }
    (h, z)
}

/// Unitary rotation `M = [[c, s̄], [-s, c]]` with `M [a; b] = [r; 0]`.
fn givens<T: Real>(a: C<T>, b: C<T>) -> (T, C<T>) {
    let an = a.norm();
    let r = an.hypot(b.norm());
    if r == T::zero() {
        return (T::one(), cre(T::zero()));
    }
    if an == T::zero() {
        return (T::zero(), cre(T::one()));
    }
    let ph = a / an;
    (an / r, ph.conj() * b / r)
}

fn schur_qr<T: Real>(h: &mut Mat<T>, z: &mut Mat<T>) -> Result<(), EigenError> {
    let n = h.nrows();
    let eps = T::epsilon();
    let hnorm = h.frobenius().max(T::min_positive_value());
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let mut s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if s == T::zero() {
                s = hnorm;
            }
            if h[(l, l - 1)].norm() <= eps * s {
                h[(l, l - 1)] = cre(T::zero());
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > 100 * n.max(10) {
            return Err(EigenError::NoConvergence);
        }

        let mu = if iter % 11 == 0 {
            let extra = if hi >= 2 { h[(hi - 1, hi - 2)].norm() } else { T::zero() };
            h[(hi, hi)] + c(T::lit(0.75), T::lit(0.5)) * (h[(hi, hi - 1)].norm() + extra)
        } else {
            wilkinson(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };

        for k in l..=hi {
            h[(k, k)] -= mu;
        }
        let mut rots = Vec::with_capacity(hi - l);
        for k in l..hi {
            let (cs, sn) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..n {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = x * cs + sn.conj() * y;
                h[(k + 1, j)] = -sn * x + y * cs;
            }
            h[(k + 1, k)] = cre(T::zero());
            rots.push((cs, sn));
        }
        for (idx, &(cs, sn)) in rots.iter().enumerate() {
            let k = l + idx;
            for i in 0..=(k + 1).min(hi) {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * cs + y * sn;
                h[(i, k + 1)] = -x * sn.conj() + y * cs;
            }
            for i in 0..n {
                let x = z[(i, k)];
                let y = z[(i, k + 1)];
                z[(i, k)] = x * cs + y * sn;
                z[(i, k + 1)] = -x * sn.conj() + y * cs;
            }
        }
        for k in l..=hi {
            h[(k, k)] += mu;
        }
    }
    Ok(())
}

fn wilkinson<T: Real>(a: C<T>, b: C<T>, cc: C<T>, d: C<T>) -> C<T> {
    let p = (a - d) * T::lit(0.5);
    let bc = b * cc;
    let disc = (p * p + bc).sqrt();
    let d1 = p + disc;
    let d2 = p - disc;
    let den = if d1.norm() >= d2.norm() { d1 } else { d2 };
    if den.norm() == T::zero() {
        d
    } else {
        d - bc / den
    }
}

/// Columns are eigenvectors of the upper triangular `t`.
fn triangular_eigenvectors<T: Real>(t: &Mat<T>) -> Mat<T> {
    let n = t.nrows();
    let smin = (T::epsilon() * t.frobenius()).max(T::min_positive_value());
    let big = T::max_value().sqrt();
    let mut y = Mat::zeros(n, n);
    for k in 0..n {
        let mut col = vec![cre(T::zero()); n];
        col[k] = cre(T::one());
        let lam = t[(k, k)];
        for i in (0..k).rev() {
            let mut s = cre(T::zero());
            for j in i + 1..=k {
                s += t[(i, j)] * col[j];
            }
            let mut den = t[(i, i)] - lam;
            if den.norm() < smin {
                den = cre(smin);
            }
            col[i] = -s / den;
            let mag = col[i].norm();
            if mag > big {
                let inv = T::one() / mag;
                col[..=k].iter_mut().for_each(|x| *x = *x * inv);
            }
        }
        y.set_column(k, &col);
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_pairs(a: &Mat<f64>, e: &Eigen<f64>, tol: f64) {
        for k in 0..a.nrows() {
            let v = e.vectors.column(k);
            let av = a.matvec(&v);
            let r: Vec<_> = av.iter().zip(&v).map(|(x, y)| x - y * e.values[k]).collect();
            let nv = crate::scalar::norm2(&v);
            assert!(crate::scalar::norm2(&r) <= tol * nv * a.frobenius().max(1.0), "pair {k}");
        }
    }

    #[test]
    fn general_nonsymmetric_real_matrix() {
        let a = Mat::<f64>::from_real_rows(
            4,
            4,
            &[4.0, 1.0, -2.0, 2.0, 1.0, 2.0, 0.0, 1.0, -2.0, 0.0, 3.0, -2.0, 2.0, 1.0, -2.0, -1.0],
        );
        let mut b = a.clone();
        b[(0, 3)] = cre(5.0);
        b[(3, 0)] = cre(-3.0);
        let e = eig_general(&b).unwrap();
        check_pairs(&b, &e, 1e-12);
        // trace is preserved
        let tr: C<f64> = e.values.iter().sum();
        assert!((tr - b.trace()).norm() < 1e-12);
    }

    #[test]
    fn rotation_has_conjugate_pair() {
        let a = Mat::<f64>::from_real_rows(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let e = eig_general(&a).unwrap();
        let mut ims: Vec<f64> = e.values.iter().map(|z| z.im).collect();
        ims.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ims[0] + 1.0).abs() < 1e-14 && (ims[1] - 1.0).abs() < 1e-14);
        check_pairs(&a, &e, 1e-13);
    }

    #[test]
    fn hermitian_with_repeated_eigenvalues() {
        // star graph K_{1,3}: eigenvalues ±√3 and 0 (twice)
        let mut a = Mat::<f64>::zeros(4, 4);
        for j in 1..4 {
            a[(0, j)] = cre(1.0);
            a[(j, 0)] = cre(1.0);
        }
        let e = eig_hermitian(&a).unwrap();
        check_pairs(&a, &e, 1e-13);
        let vv = e.vectors.adjoint().matmul(&e.vectors);
        assert!(vv.sub(&Mat::identity(4)).frobenius() < 1e-13);
    }

    #[test]
    fn complex_hermitian() {
        let a = Mat::<f64>::from_rows(
            3,
            3,
            vec![
                c(2.0, 0.0),
                c(1.0, 1.0),
                c(0.0, -0.5),
                c(1.0, -1.0),
                c(3.0, 0.0),
                c(0.25, 0.0),
                c(0.0, 0.5),
                c(0.25, 0.0),
                c(-1.0, 0.0),
            ],
        );
        let e = eig_hermitian(&a).unwrap();
        check_pairs(&a, &e, 1e-13);
        assert!(e.values.iter().all(|z| z.im == 0.0));
    }
}
