use super::Mat;
use crate::scalar::{cre, Real, C};

/// LU factorization with partial pivoting of a square matrix.
#[derive(Debug, Clone)]
pub struct Lu<T: Real> {
    lu: Mat<T>,
    perm: Vec<usize>,
    singular: bool,
}

impl<T: Real> Lu<T> {
    pub fn new(a: &Mat<T>) -> Self {
        assert!(a.is_square(), "LU needs a square matrix");
        let n = a.nrows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut singular = false;
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].norm();
            for i in k + 1..n {
                let v = lu[(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == T::zero() {
                singular = true;
                continue;
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f.re == T::zero() && f.im == T::zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Self { lu, perm, singular }
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    /// Solves `A x = b`; `None` when a zero pivot was met.
    pub fn solve(&self, b: &[C<T>]) -> Option<Vec<C<T>>> {
        if self.singular {
            return None;
        }
        let n = self.lu.nrows();
        assert_eq!(b.len(), n);
        let mut x: Vec<C<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        Some(x)
    }
}

pub fn inverse<T: Real>(a: &Mat<T>) -> Option<Mat<T>> {
    let n = a.nrows();
    let lu = Lu::new(a);
    if lu.is_singular() {
        return None;
    }
    let mut inv = Mat::zeros(n, n);
    let mut e = vec![cre(T::zero()); n];
    for j in 0..n {
        e.iter_mut().for_each(|z| *z = cre(T::zero()));
        e[j] = cre(T::one());
        let col = lu.solve(&e)?;
        inv.set_column(j, &col);
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    #[test]
    fn inverse_times_matrix_is_identity() {
        let a = Mat::<f64>::from_fn(4, 4, |i, j| {
            c(((i * 7 + j * 3) % 5) as f64 - 1.5, if i == j { 2.0 } else { 0.25 * j as f64 })
        });
        let inv = inverse(&a).unwrap();
        let err = a.matmul(&inv).sub(&Mat::identity(4)).frobenius();
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = Mat::<f64>::from_real_rows(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(Lu::new(&a).solve(&[cre(1.0), cre(1.0)]).is_none());
    }
}
