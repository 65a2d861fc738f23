mod common;

use common::*;
use graphseed_core::*;
use proptest::prelude::*;
use std::f64::consts::TAU;

fn dft(n: usize) -> Mat64 {
    Mat64::from_fn(n, n, |i, j| Complex64::from_polar(1.0 / (n as f64).sqrt(), TAU * (i * j) as f64 / n as f64))
}

#[test]
fn cycle_basis_is_the_fourier_matrix() {
    for n in [4, 5, 8, 12] {
        let b = decompose(&cycle_shift(n), &Tolerances::default()).unwrap();
        for (i, lam) in b.eigenvalues.iter().enumerate() {
            let want = Complex64::from_polar(1.0, -TAU * i as f64 / n as f64);
            assert!((lam - want).norm() < 1e-10, "n={n} i={i}");
        }
        let f = dft(n);
        assert!(b.v.sub(&f).max_abs() < 1e-10, "V = F for n={n}");
        let psi = vandermonde(&b.eigenvalues, n);
        let want = f.adjoint().scale(Complex64::new((n as f64).sqrt(), 0.0));
        assert!(psi.sub(&want).max_abs() < 1e-10, "Ψ = √N Fᴴ for n={n}");
    }
}

#[test]
fn cycle_census_has_no_degeneracy() {
    let b = decompose(&cycle_shift(8), &Tolerances::default()).unwrap();
    for node in 0..8 {
        let c = spectrum_census(&b, 4, Some(node), 1e-8).unwrap();
        let nc = c.node.unwrap();
        assert_eq!((nc.u1, nc.u2, c.d1, nc.d2), (0, 0, 0, 0));
        assert_eq!(c.d, 4);
    }
}

#[test]
fn gft_roundtrip_on_random_er() {
    let mut r = rng(11);
    for _ in 0..20 {
        let g = er(10, 0.3, &mut r);
        let s = build_shift::<f64>(&g, ShiftChoice::Adjacency, None).unwrap();
        let b = decompose(&s, &Tolerances::default()).unwrap();
        for _ in 0..100 {
            let x = Signal64::new(random_vec(10, &mut r));
            let back = igft(&b, &gft(&b, &x).unwrap()).unwrap();
            assert!(diff_norm(&back.values, &x.values) <= 1e-10 * x.norm() * b.cond_v);
            // direct-solve oracle for the forward transform
            let xh = gft(&b, &x).unwrap();
            let via_solve = graphseed_core::linalg::Lu::new(&b.v).solve(&x.values).unwrap();
            assert!(diff_norm(&xh.coeffs, &via_solve) <= 1e-10 * x.norm() * b.cond_v);
        }
    }
}

#[test]
fn bandlimited_synthesis_is_detected() {
    let mut r = rng(3);
    let (_, b) = er_instance(10, 0.3, &mut r);
    let (y, _) = bandlimited(&b, 4, &mut r);
    let yh = gft(&b, &y).unwrap();
    assert!(yh.is_bandlimited(4, 1e-10));
    assert!(!yh.is_bandlimited(3, 1e-10));
}

#[test]
fn normalized_laplacian_shift_uses_lambda_max() {
    let g = Graph::new(5, vec![(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0), (4, 0, 1.0), (0, 2, 1.0)], false)
        .unwrap();
    let s = build_shift::<f64>(&g, ShiftChoice::NormalizedLaplacianShift, None).unwrap();
    let l = g.laplacian::<f64>().unwrap();
    let ShiftKind::NormalizedLaplacianShift(alpha) = s.kind else { panic!("wrong kind") };
    let lb = decompose_matrix(&l, &Tolerances::default()).unwrap();
    assert!((alpha - 1.0 / lb.eigenvalues[0].re).abs() < 1e-12);
    let want = Mat64::identity(5).sub(&l.scale(Complex64::new(alpha, 0.0)));
    assert!(s.matrix.sub(&want).max_abs() < 1e-15);
    assert!(s.respects_sparsity());
    let b = decompose(&s, &Tolerances::default()).unwrap();
    assert!(b.eigenvalues.iter().all(|z| z.re > -1e-12 && z.re <= 1.0 + 1e-12));
}

#[test]
fn single_precision_decomposition() {
    let s32: Shift32 = build_shift(&cycle(6), ShiftChoice::Adjacency, None).unwrap();
    let tol = Tolerances { reconstruction: 1e-4, ..Tolerances::default() };
    let b = decompose(&s32, &tol).unwrap();
    assert!(b.residual < 1e-5);
    assert!((b.eigenvalues[1] - Complex32::from_polar(1.0, -TAU as f32 / 6.0)).norm() < 1e-5);
}

fn arb_graph(directed: bool) -> impl Strategy<Value = Graph> {
    (3usize..12, any::<u64>(), 0.15f64..0.6).prop_map(move |(n, seed, p)| {
        let mut r = rng(seed);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j || (!directed && j < i) {
                    continue;
                }
                if rand::Rng::random::<f64>(&mut r) < p {
                    edges.push((i, j, 0.5 + rand::Rng::random::<f64>(&mut r)));
                }
            }
        }
        Graph::new(n, edges, directed).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_reconstructs_and_is_ordered(g in arb_graph(false)) {
        let s = build_shift::<f64>(&g, ShiftChoice::Adjacency, None).unwrap();
        let b = decompose(&s, &Tolerances::default()).unwrap();
        let rec = b.v.scale_cols(&b.eigenvalues).matmul(&b.vinv);
        prop_assert!(rec.sub(&s.matrix).frobenius() <= 1e-8 * s.matrix.frobenius().max(1.0));
        let m: Vec<f64> = b.eigenvalues.iter().map(|z| z.norm()).collect();
        let tie = 1e-10 * b.max_abs_eigenvalue();
        prop_assert!(m.windows(2).all(|w| w[0] >= w[1] - tie));
        let again = decompose(&s, &Tolerances::default()).unwrap();
        prop_assert_eq!(again.eigenvalues, b.eigenvalues);
        prop_assert!(again.v == b.v);
    }

    #[test]
    fn directed_graphs_decompose_or_report(g in arb_graph(true)) {
        let s = build_shift::<f64>(&g, ShiftChoice::Adjacency, None).unwrap();
        match decompose(&s, &Tolerances::default()) {
            Ok(b) => {
                prop_assert!(b.residual <= 1e-8);
                let vv = b.v.matmul(&b.vinv).sub(&Mat64::identity(g.n)).frobenius();
                prop_assert!(vv <= 1e-8 * b.cond_v);
                for k in 0..g.n {
                    let nv = norm(&b.v.column(k));
                    prop_assert!((nv - 1.0).abs() < 1e-12);
                }
            }
            Err(Error::NonDiagonalizable { .. }) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn general_eigensolver_on_complex_matrices(seed in any::<u64>(), n in 1usize..9) {
        let mut r = rng(seed);
        let a = Mat64::from_fn(n, n, |_, _| cnormal(&mut r));
        let e = graphseed_core::linalg::eig_general(&a).unwrap();
        for k in 0..n {
            let v = e.vectors.column(k);
            let res = diff_norm(&a.matvec(&v), &v.iter().map(|x| x * e.values[k]).collect::<Vec<_>>());
            prop_assert!(res <= 1e-10 * a.frobenius() * norm(&v));
        }
    }

    #[test]
    fn frequency_order_is_a_permutation(vals in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..20)) {
        let z: Vec<Complex64> = vals.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        let mut order = frequency_order(&z, 1e-10);
        order.sort_unstable();
        prop_assert_eq!(order, (0..z.len()).collect::<Vec<_>>());
    }
}
