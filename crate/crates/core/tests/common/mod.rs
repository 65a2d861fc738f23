#![allow(dead_code)]

use graphseed_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn er(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                edges.push((i, j, 1.0));
            }
        }
    }
    Graph::new(n, edges, false).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect(), true).unwrap()
}

pub fn cycle_shift(n: usize) -> Shift64 {
    build_shift(&cycle(n), ShiftChoice::Adjacency, None).unwrap()
}

/// ER adjacency shift whose spectrum is simple and whose decomposition succeeds.
pub fn er_instance(n: usize, p: f64, rng: &mut impl Rng) -> (Shift64, Basis64) {
    loop {
        let g = er(n, p, rng);
        let s: Shift64 = build_shift(&g, ShiftChoice::Adjacency, None).unwrap();
        let Ok(b) = decompose(&s, &Tolerances::default()) else { continue };
        let simple = distinct_groups(&b.eigenvalues, 1e-6 * b.max_abs_eigenvalue().max(1.0)).len() == n;
        if simple {
            return (s, b);
        }
    }
}

pub fn cnormal(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn rnormal(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), 0.0)
}

pub fn random_vec(n: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    (0..n).map(|_| cnormal(rng)).collect()
}

/// `V_K ŷ_K` for random real `ŷ_K`; returns both.
pub fn bandlimited(b: &Basis64, k: usize, rng: &mut impl Rng) -> (Signal64, Vec<Complex64>) {
    let yk: Vec<Complex64> = (0..k).map(|_| rnormal(rng)).collect();
    let mut full = yk.clone();
    full.resize(b.n(), Complex64::new(0.0, 0.0));
    (Signal64::new(b.v.matvec(&full)), yk)
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn diff_norm(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

pub fn choose(n: usize, p: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    for i in 0..p {
        let j = rng.random_range(i..n);
        all.swap(i, j);
    }
    let mut out = all[..p].to_vec();
    out.sort_unstable();
    out
}

/// Dense `A ⊗ B`.
pub fn kron(a: &Mat64, b: &Mat64) -> Mat64 {
    Mat64::from_fn(a.nrows() * b.nrows(), a.ncols() * b.ncols(), |i, j| {
        a[(i / b.nrows(), j / b.ncols())] * b[(i % b.nrows(), j % b.ncols())]
    })
}

/// `Θ = [diag(ê_1), …, diag(ê_n)]`, `n × n²`.
pub fn theta(b: &Basis64) -> Mat64 {
    let n = b.n();
    let mut t = Mat64::zeros(n, n * n);
    for i in 0..n {
        for k in 0..n {
            t[(k, i * n + k)] = b.vinv[(k, i)];
        }
    }
    t
}

/// Gaussian elimination with partial pivoting on a square system.
pub fn gauss_solve(a: &Mat64, b: &[Complex64]) -> Vec<Complex64> {
    let n = a.nrows();
    let mut m: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(b[i]);
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].norm().partial_cmp(&m[j][col].norm()).unwrap()).unwrap();
        m.swap(col, piv);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..=n {
                let v = m[col][c];
                m[r][c] -= f * v;
            }
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let mut acc = m[i][n];
        for j in i + 1..n {
            acc -= m[i][j] * x[j];
        }
        x[i] = acc / m[i][i];
    }
    x
}

/// `S^p x` by repeated application.
pub fn shift_pow(s: &Shift64, x: &[Complex64], p: usize) -> Vec<Complex64> {
    let mut v = x.to_vec();
    for _ in 0..p {
        v = s.apply(&v);
    }
    v
}
