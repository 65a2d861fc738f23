mod common;

use common::*;
use graphseed_core::*;
use proptest::prelude::*;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn ideal_lowpass(b: &Basis64, k: usize) -> Filter64 {
    let target: Vec<Complex64> = (0..b.n()).map(|j| c(if j < k { 1.0 } else { 0.0 })).collect();
    design_from_response(b, &target).unwrap()
}

/// Brute-force seeding dynamics straight from the recursion, without the library simulator.
fn brute_force(s: &Shift64, pattern: &SelectionPattern, values: &[Complex64]) -> Vec<Complex64> {
    let n = s.n();
    let mut x = vec![c(0.0); n];
    for t in 0..pattern.tau {
        x = if t == 0 { x } else { s.matrix.matvec(&x) };
        for (r, &(i, tt)) in pattern.pairs.iter().enumerate() {
            if tt == t {
                x[i] += values[r];
            }
        }
    }
    x
}

fn random_pattern(n: usize, tau: usize, p: usize, r: &mut impl rand::Rng) -> SelectionPattern {
    let cols = choose(n * tau, p, r);
    SelectionPattern::new(tau, cols.into_iter().map(|j| SelectionPattern::pair_of(tau, j)).collect()).unwrap()
}

#[test]
fn frequency_seeding_matches_simulation() {
    let mut r = rng(31);
    for trial in 0..100 {
        let (s, b) = er_instance(6 + trial % 5, 0.4, &mut r);
        let n = b.n();
        let tau = 1 + trial % 4;
        let p = 1 + trial % (n * tau).min(7);
        let pattern = random_pattern(n, tau, p, &mut r);
        let values = random_vec(p, &mut r);

        let psi = b.psi(tau);
        let big =
            theta(&b).matmul(&kron(&Mat64::identity(n), &psi)).matmul(&pattern.selection_matrix::<f64>(n).transpose());
        let xh = big.matvec(&values);
        let x_sim = brute_force(&s, &pattern, &values);
        let lib = simulate_seeding(&s, &SeedingSchedule::new(pattern.clone(), values.clone()).unwrap()).unwrap();
        assert!(diff_norm(&x_sim, &lib.values) <= 1e-12 * norm(&x_sim));
        let scale = norm(&values) * b.cond_v * b.max_abs_eigenvalue().max(1.0).powi(tau as i32);
        assert!(diff_norm(&b.v.matvec(&xh), &x_sim) <= 1e-10 * scale, "trial {trial}");
        assert!(diff_norm(&seeding_operator(&b, &pattern).matvec(&values), &xh) <= 1e-10 * scale);

        // seeding followed by filtering: V diag(ĥ) Θ(I⊗Ψ)Cᵀ s
        let h = random_vec(3, &mut r);
        let hh = b.psi(3).matvec(&h);
        let zh: Vec<Complex64> = xh.iter().zip(&hh).map(|(a, b)| a * b).collect();
        let z_sim = apply_filter_polynomial(&s, &h, &Signal64::new(x_sim.clone())).unwrap();
        assert!(
            diff_norm(&b.v.matvec(&zh), &z_sim.values)
                <= 1e-10 * scale * norm(&h) * b.max_abs_eigenvalue().max(1.0).powi(2)
        );
    }
}

#[test]
fn full_operator_matches_kronecker_form() {
    let mut r = rng(4);
    let (_, b) = er_instance(7, 0.4, &mut r);
    for tau in 1..4 {
        let want = theta(&b).matmul(&kron(&Mat64::identity(7), &b.psi(tau)));
        let got = full_seeding_operator(&b, tau);
        assert!(got.sub(&want).frobenius() <= 1e-13 * want.frobenius());
    }
}

#[test]
fn special_cases_reduce_to_simple_operators() {
    let mut r = rng(9);
    let mut solved = 0;
    for _ in 0..20 {
        let (_, b) = er_instance(10, 0.3, &mut r);
        let nodes = choose(10, 4, &mut r);
        // single time: columns of V⁻¹
        let g = seeding_operator(&b, &SelectionPattern::mnst(&nodes));
        let want = b.vinv.select_cols(&nodes);
        assert!(g.sub(&want).frobenius() <= 1e-10 * want.frobenius());
        // single node: diag(ê_i) Ψ_P
        let g = seeding_operator(&b, &SelectionPattern::snmt(nodes[0], 4));
        let e = b.e_hat(nodes[0]);
        let want = Mat64::from_fn(10, 4, |k, l| e[k] * b.eigenvalues[k].powu(l as u32));
        assert!(g.sub(&want).frobenius() <= 1e-10 * want.frobenius());

        // designers against a direct solve of the reduced systems
        let (_, yk) = bandlimited(&b, 4, &mut r);
        let f = design_lowpass_kernel(&b, 4).unwrap();
        let rhs: Vec<Complex64> = (0..4).map(|j| yk[j] / f.response[j]).collect();
        let a = Mat64::from_fn(4, 4, |k, j| b.vinv[(k, nodes[j])]);
        if let Ok(got) = mnst_design(&b, 4, &f, &nodes, &yk) {
            let want = gauss_solve(&a, &rhs);
            assert!(diff_norm(&got.schedule.values, &want) <= 1e-10 * norm(&want) * got.cond);
            solved += 1;
        }
        let a = Mat64::from_fn(4, 4, |k, l| e[k] * b.eigenvalues[k].powu(l as u32));
        if let Ok(got) = snmt_design(&b, 4, &f, nodes[0], 4, &yk) {
            let want = gauss_solve(&a, &rhs);
            assert!(diff_norm(&got.schedule.values, &want) <= 1e-10 * norm(&want) * got.cond);
            solved += 1;
        }
    }
    assert!(solved >= 30, "{solved}");
}

#[test]
fn exact_recovery_all_schemes_on_er() {
    let mut r = rng(77);
    let mut done = [0usize; 3];
    for _ in 0..40 {
        let (s, b) = er_instance(10, 0.3, &mut r);
        let (y, yk) = bandlimited(&b, 4, &mut r);
        let nodes = choose(10, 4, &mut r);
        let patterns = [
            (Scheme::MnSt, SelectionPattern::mnst(&nodes)),
            (Scheme::SnMt, SelectionPattern::snmt(nodes[0], 4)),
            (Scheme::MnMt, SelectionPattern::grid(2, &nodes[..2], &[0, 1])),
        ];
        for (i, (scheme, pat)) in patterns.iter().enumerate() {
            let Ok(plan) = exact_plan(&b, 4, *scheme, pat, &yk) else { continue };
            if plan.cond > 1e8 {
                continue;
            }
            let rep = reconstruct(&s, &b, &plan, &y).unwrap();
            assert!(rep.relative_error <= 1e-6, "{} error {}", scheme.label(), rep.relative_error);
            assert!(rep.imag_residue <= 1e-6);
            done[i] += 1;
        }
    }
    assert!(done.iter().all(|&d| d >= 30), "{done:?}");
}

#[test]
fn uniform_cycle_seeding_is_sinc_interpolation() {
    let s = cycle_shift(8);
    let b = decompose(&s, &Tolerances::default()).unwrap();
    let f = ideal_lowpass(&b, 4);
    let mut r = rng(1);
    let nodes = [0, 2, 4, 6];
    let chk = identity_seeding_check(&b, 4, &nodes).unwrap();
    assert!(chk.is_diagonal);
    for d in &chk.diag_values {
        assert!((d - c(0.5)).norm() < 1e-10);
    }
    for _ in 0..10 {
        let (y, yk) = bandlimited(&b, 4, &mut r);
        let design = mnst_design(&b, 4, &f, &nodes, &yk).unwrap();
        for (j, &i) in nodes.iter().enumerate() {
            assert!((design.schedule.values[j] - y.values[i] * 2.0).norm() <= 1e-10 * y.norm());
        }
        let plan = plan_with_filter(&b, 4, Scheme::MnSt, &SelectionPattern::mnst(&nodes), f.clone(), &yk).unwrap();
        assert!(reconstruct(&s, &b, &plan, &y).unwrap().relative_error < 1e-10);
    }
}

#[test]
fn identity_seeding_fails_on_random_graphs() {
    let mut r = rng(3);
    for _ in 0..10 {
        let (_, b) = er_instance(10, 0.3, &mut r);
        let chk = identity_seeding_check(&b, 4, &choose(10, 4, &mut r)).unwrap();
        assert!(!chk.is_diagonal && chk.offdiag_norm > 1e-6);
    }
}

#[test]
fn seeding_is_linear_in_the_target() {
    let mut r = rng(12);
    let (_, b) = er_instance(10, 0.3, &mut r);
    let f = design_lowpass_kernel(&b, 4).unwrap();
    let pat = SelectionPattern::grid(3, &[1, 5], &[0, 2]);
    let (_, y1) = bandlimited(&b, 4, &mut r);
    let (_, y2) = bandlimited(&b, 4, &mut r);
    let a = c(0.7);
    let sum: Vec<Complex64> = y1.iter().zip(&y2).map(|(p, q)| a * p + q).collect();
    let d1 = mnmt_design(&b, 4, &f, &pat, &y1).unwrap().schedule.values;
    let d2 = mnmt_design(&b, 4, &f, &pat, &y2).unwrap().schedule.values;
    let ds = mnmt_design(&b, 4, &f, &pat, &sum).unwrap().schedule.values;
    let comb: Vec<Complex64> = d1.iter().zip(&d2).map(|(p, q)| a * p + q).collect();
    assert!(diff_norm(&ds, &comb) <= 1e-10 * norm(&ds));
}

#[test]
fn mnst_with_spare_budget_needs_a_degree_four_filter() {
    let mut r = rng(40);
    let mut generic = 0;
    for _ in 0..20 {
        let (s, b) = er_instance(10, 0.3, &mut r);
        let (y, yk) = bandlimited(&b, 4, &mut r);
        let pat = SelectionPattern::mnst(&choose(10, 6, &mut r));
        let g = seeding_operator(&b, &pat);
        let silent = (4..10).filter(|&j| g.row(j).iter().all(|z| z.norm() <= 1e-8 * g.max_abs())).count();
        let plan = degree_reduced_design(&b, 4, &pat, &yk).unwrap();
        assert_eq!(plan.filter.degree(), 4 - silent);
        generic += usize::from(silent == 0);
        let rep = reconstruct(&s, &b, &plan, &y).unwrap();
        assert!(rep.relative_error <= 1e-6, "{}", rep.relative_error);
        // each product stage removes one more inactive frequency
        let x_hat = b.vinv.matvec(&rep.seeding_trace.last().unwrap().values);
        let zeroed: Vec<usize> = (4..10).filter(|&j| x_hat[j].norm() <= 1e-8 * norm(&x_hat)).collect();
        assert_eq!(zeroed.len(), 2 + silent);
        for (l, root) in plan.filter.roots.iter().enumerate() {
            let st = b.vinv.matvec(&rep.filter_trace[l + 1].values);
            let k = (0..10).find(|&j| (b.eigenvalues[j] - root).norm() < 1e-9).unwrap();
            assert!(st[k].norm() <= 1e-8 * norm(&st));
        }
    }
    assert!(generic >= 10);
}

#[test]
fn snmt_degree_matches_census() {
    let mut r = rng(41);
    let mut checked = 0;
    while checked < 50 {
        let (s, b) = er_instance(10, 0.3, &mut r);
        let node = choose(10, 1, &mut r)[0];
        let p = 4 + checked % 5;
        let census = spectrum_census(&b, 4, Some(node), 1e-8).unwrap();
        let nc = census.node.unwrap();
        if nc.u1 > 0 {
            continue;
        }
        let (y, yk) = bandlimited(&b, 4, &mut r);
        let plan = degree_reduced_design(&b, 4, &SelectionPattern::snmt(node, p), &yk).unwrap();
        let want = 10usize.saturating_sub(p + nc.u2 + nc.d2);
        assert_eq!(plan.filter.degree(), want);
        let rep = reconstruct(&s, &b, &plan, &y).unwrap();
        assert!(rep.relative_error <= 1e-6);
        checked += 1;
    }
}

#[test]
fn full_budget_needs_no_filter() {
    let mut r = rng(42);
    let (s, b) = er_instance(8, 0.4, &mut r);
    let (y, yk) = bandlimited(&b, 3, &mut r);
    let plan = degree_reduced_design(&b, 3, &SelectionPattern::mnst(&(0..8).collect::<Vec<_>>()), &yk).unwrap();
    assert_eq!(plan.filter.degree(), 0);
    assert!(diff_norm(&plan.schedule.values, &y.values) <= 1e-9 * y.norm());
    assert!(reconstruct(&s, &b, &plan, &y).unwrap().relative_error < 1e-9);
}

#[test]
fn initial_state_is_compensated() {
    let mut r = rng(43);
    let (s, b) = er_instance(10, 0.3, &mut r);
    let y_init = Signal64::new(random_vec(10, &mut r));
    let y = Signal64::new(random_vec(10, &mut r));
    let tau = 2;
    let adjusted = adjust_for_initial_state(&s, &y_init, &y, tau).unwrap();
    let want: Vec<Complex64> =
        y.values.iter().zip(shift_pow(&s, &y_init.values, tau - 1)).map(|(a, b)| a - b).collect();
    assert!(diff_norm(&adjusted.values, &want) < 1e-12 * norm(&want));

    let pat = SelectionPattern::grid(tau, &(0..10).collect::<Vec<_>>(), &[0, 1]);
    let yk = gft(&b, &adjusted).unwrap().coeffs;
    let plan = exact_plan(&b, 10, Scheme::MnMt, &pat, &yk).unwrap();
    assert_eq!(plan.filter.degree(), 0);
    let rep = reconstruct_from(&s, &b, &plan, &y, Some(&y_init)).unwrap();
    assert!(rep.relative_error < 1e-8, "{}", rep.relative_error);
}

#[test]
fn snmt_single_frequency_closed_form() {
    let mut r = rng(44);
    let (_, b) = er_instance(8, 0.4, &mut r);
    let f = design_lowpass_kernel(&b, 1).unwrap();
    let yk = vec![c(2.5)];
    let d = snmt_design(&b, 1, &f, 3, 1, &yk).unwrap();
    let want = yk[0] / (f.response[0] * b.vinv[(0, 3)]);
    assert!((d.schedule.values[0] - want).norm() < 1e-10 * want.norm());
}

#[test]
fn silent_node_is_rejected() {
    let g = Graph::new(3, vec![(0, 1, 1.0), (1, 2, 1.0)], false).unwrap();
    let s: Shift64 = build_shift(&g, ShiftChoice::Adjacency, None).unwrap();
    let b = decompose(&s, &Tolerances::default()).unwrap();
    let f = FilterDesign::identity(3);
    let err = snmt_design(&b, 3, &f, 1, 3, &[c(1.0); 3]).unwrap_err();
    assert!(matches!(err, Error::NodeCannotExpress { node: 1, .. }), "{err:?}");
    assert!(snmt_design(&b, 3, &f, 0, 3, &[c(1.0); 3]).is_ok());
}

#[test]
fn budget_below_bandwidth_is_rejected() {
    let mut r = rng(45);
    let (_, b) = er_instance(8, 0.4, &mut r);
    let f = design_lowpass_kernel(&b, 4).unwrap();
    let err = mnst_design(&b, 4, &f, &[0, 1, 2], &[c(1.0); 4]).unwrap_err();
    assert_eq!(err, Error::BudgetTooSmall { p: 3, k: 4 });
}

#[test]
fn schedule_json_round_trip() {
    let pat = SelectionPattern::snmt(2, 3);
    let sch = Schedule64::new(pat, vec![c(1.0), Complex64::new(0.5, -1.0), c(-2.0)]).unwrap();
    let js = serde_json::to_value(&sch).unwrap();
    assert_eq!(js["tau"], 3);
    assert_eq!(js["injections"][0]["node"], 2);
    assert_eq!(js["injections"][0]["time"], 2);
    assert_eq!(js["injections"][1]["value"][1], -1.0);
    let back: Schedule64 = serde_json::from_value(js).unwrap();
    assert_eq!(back, sch);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn stacked_index_round_trips(tau in 1usize..6, node in 0usize..20, t in 0usize..6) {
        let t = t % tau;
        let p = SelectionPattern { tau, pairs: vec![(node, t)] };
        let j = p.stacked_index(node, t);
        prop_assert_eq!(SelectionPattern::pair_of(tau, j), (node, t));
        let cm = p.selection_matrix::<f64>(20);
        prop_assert_eq!(cm[(0, j)], c(1.0));
    }

    #[test]
    fn feasible_plans_recover_exactly(seed in any::<u64>(), tau in 1usize..4) {
        let mut r = rng(seed);
        let (s, b) = er_instance(9, 0.4, &mut r);
        let (y, yk) = bandlimited(&b, 3, &mut r);
        let pat = random_pattern(9, tau, 4, &mut r);
        if let Ok(plan) = exact_plan(&b, 3, Scheme::MnMt, &pat, &yk) {
            prop_assert!(plan.feasibility.full_rank);
            if plan.cond < 1e6 {
                let rep = reconstruct(&s, &b, &plan, &y).unwrap();
                prop_assert!(rep.relative_error < 1e-6);
            }
        }
    }

    #[test]
    fn seeded_signal_reproduces_design_values(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (s, b) = er_instance(8, 0.4, &mut r);
        let pat = random_pattern(8, 3, 5, &mut r);
        let vals = random_vec(5, &mut r);
        let x = brute_force(&s, &pat, &vals);
        let xh = seeding_operator(&b, &pat).matvec(&vals);
        prop_assert!(diff_norm(&b.v.matvec(&xh), &x) <= 1e-9 * norm(&vals) * b.cond_v * b.max_abs_eigenvalue().max(1.0).powi(2));
    }
}
