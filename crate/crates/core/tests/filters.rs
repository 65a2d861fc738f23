mod common;

use common::*;
use graphseed_core::*;
use proptest::prelude::*;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Normalized responses agree up to one complex factor.
fn same_up_to_scale(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    let (i, _) =
        a.iter().enumerate().fold((0, 0.0), |(bi, bm), (i, z)| if z.norm() > bm { (i, z.norm()) } else { (bi, bm) });
    let s = b[i] / a[i];
    let scaled: Vec<Complex64> = a.iter().map(|z| z * s).collect();
    diff_norm(&scaled, b) <= tol * norm(b)
}

#[test]
fn kernel_design_on_er_annihilates_the_stopband() {
    let mut r = rng(21);
    for _ in 0..30 {
        let (_, b) = er_instance(10, 0.3, &mut r);
        let f = design_lowpass_kernel(&b, 4).unwrap();
        assert_eq!(f.coeffs.len(), 7);
        let hmax = f.response.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for k in 4..10 {
            assert!(f.response[k].norm() <= 1e-8 * hmax, "leak at {k}");
        }
        for k in 0..4 {
            assert!(f.response[k].norm() > 1e-8 * hmax);
        }
        // ĥ = Ψh
        let psi = vandermonde(&b.eigenvalues, 7);
        assert!(diff_norm(&psi.matvec(&f.coeffs), &f.response) <= 1e-10 * norm(&f.coeffs) * psi.frobenius());
        // oracle: the monic polynomial with the stopband eigenvalues as roots, expanded by hand
        let mut poly = vec![c(1.0)];
        for k in 4..10 {
            let lam = b.eigenvalues[k];
            let mut next = vec![c(0.0); poly.len() + 1];
            for (i, &p) in poly.iter().enumerate() {
                next[i + 1] += p;
                next[i] -= lam * p;
            }
            poly = next;
        }
        assert!(same_up_to_scale(&poly, &f.coeffs, 1e-7));
        let prod = design_annihilating_product(&b, &(4..10).collect::<Vec<_>>(), c(1.0)).unwrap();
        assert!(same_up_to_scale(&prod.response, &f.response, 1e-7));
    }
}

#[test]
fn kernel_basis_grows_with_length() {
    let mut r = rng(5);
    let (_, b) = er_instance(10, 0.3, &mut r);
    let (ker, _) = kernel_basis(&b, 4, 9).unwrap();
    assert_eq!(ker.len(), 3);
    let psi = vandermonde(&b.eigenvalues[4..], 9);
    for h in &ker {
        assert!(norm(&psi.matvec(h)) < 1e-8 * psi.frobenius());
    }
}

#[test]
fn polynomial_matches_spectral_application() {
    let mut r = rng(8);
    for trial in 0..200 {
        let (s, b) = er_instance(8 + trial % 5, 0.35, &mut r);
        let n = b.n();
        let l = 1 + trial % 6;
        let h = random_vec(l, &mut r);
        let x = Signal64::new(random_vec(n, &mut r));
        let poly = apply_filter_polynomial(&s, &h, &x).unwrap();
        let resp = vandermonde(&b.eigenvalues, l).matvec(&h);
        let spec = b.v.matvec(&b.vinv.matvec(&x.values).iter().zip(&resp).map(|(a, r)| a * r).collect::<Vec<_>>());
        assert!(diff_norm(&poly.values, &spec) <= 1e-9 * x.norm() * b.cond_v * norm(&h).max(1.0));
    }
}

#[test]
fn product_stages_annihilate_in_order() {
    let mut r = rng(13);
    let (s, b) = er_instance(10, 0.3, &mut r);
    let kill: Vec<usize> = (4..10).collect();
    let f = design_annihilating_product(&b, &kill, c(1.0)).unwrap();
    let x = Signal64::new(random_vec(10, &mut r));
    let stages = apply_product_stages(&s, &f.roots, c(1.0), &x).unwrap();
    for (l, k) in kill.iter().enumerate() {
        let xh = b.vinv.matvec(&stages[l + 1].values);
        assert!(xh[*k].norm() <= 1e-8 * norm(&xh), "stage {l}");
    }
    let last = stages.last().unwrap();
    let direct = apply_filter_polynomial(&s, &f.coeffs, &x).unwrap();
    assert!(diff_norm(&last.values, &direct.values) <= 1e-9 * norm(&direct.values));
}

#[test]
fn explicit_ideal_lowpass_on_cycle() {
    let b = decompose(&cycle_shift(8), &Tolerances::default()).unwrap();
    let target: Vec<Complex64> = (0..8).map(|k| c(if k < 4 { 1.0 } else { 0.0 })).collect();
    let f = design_from_response(&b, &target).unwrap();
    assert!(diff_norm(&f.response, &target) < 1e-12);
    assert_eq!(f.coeffs.len(), 8);
}

#[test]
fn filter_json_shape() {
    let mut r = rng(2);
    let (_, b) = er_instance(6, 0.5, &mut r);
    let f = design_lowpass_kernel(&b, 2).unwrap();
    let js = serde_json::to_value(&f).unwrap();
    assert_eq!(js["mode"], "KernelLowpass");
    assert_eq!(js["coeffs"].as_array().unwrap().len(), f.coeffs.len());
    assert_eq!(js["coeffs"][0].as_array().unwrap().len(), 2);
    assert_eq!(js["response"].as_array().unwrap().len(), 6);
    let back: Filter64 = serde_json::from_value(js).unwrap();
    assert_eq!(back.coeffs, f.coeffs);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_kernel_design_is_lowpass(seed in any::<u64>(), n in 5usize..12, k in 1usize..5) {
        let mut r = rng(seed);
        let (_, b) = er_instance(n, 0.4, &mut r);
        let k = k.min(n);
        if let Ok(f) = design_lowpass_kernel(&b, k) {
            prop_assert!(f.leakage(k) <= 1e-8);
            prop_assert!(f.passband_min(k) > 1e-8);
        }
    }

    #[test]
    fn product_filter_kills_its_roots(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (s, b) = er_instance(8, 0.4, &mut r);
        let kill = choose(8, 3, &mut r);
        let f = design_annihilating_product(&b, &kill, cnormal(&mut r)).unwrap();
        for &k in &kill {
            let v = Signal64::new(b.v.column(k));
            let out = apply_filter_polynomial(&s, &f.coeffs, &v).unwrap();
            prop_assert!(out.norm() <= 1e-9 * norm(&f.coeffs));
        }
    }
}
