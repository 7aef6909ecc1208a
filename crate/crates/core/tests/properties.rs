//! Property suites: module invariants exercised on seeded random instances.

mod common;

use common::*;
use drsub_core::constraints::{contains, lmo, lmo_shrunken, project, Constraint};
use drsub_core::instances::RunReport;
use drsub_core::meanfield::{
    bar_supergradient_bound, build_elbo, build_pa_elbo, log_pa_exact, log_partition_exact,
    marginal_gain, pa_lower_bound, PaModel,
};
use drsub_core::objectives::Activation;
use drsub_core::rng::SplitMix64;
use drsub_core::solvers::*;
use drsub_core::verify::{finite_diff_grad, grid_max, mt_exhaustive};
use drsub_core::{BoxDomain, Mat, Objective, SetFunctionModel};
use proptest::prelude::*;

fn grad_matches_fd(obj: &Objective, rng: &mut SplitMix64, points: usize) {
    grad_matches_fd_margin(obj, rng, points, 2e-5)
}

/// Entropy-regularized families need a wider interior margin: the third
/// derivative of the binary entropy blows up near the boundary and central
/// differences lose accuracy there.
fn grad_matches_fd_margin(obj: &Objective, rng: &mut SplitMix64, points: usize, margin: f64) {
    let h = 1e-5;
    for _ in 0..points {
        let x = random_point(rng, obj.domain(), margin);
        let g = obj.grad(&x).unwrap();
        let fd = finite_diff_grad(obj, &x, h).unwrap();
        for i in 0..obj.dim() {
            let tol = 1e-5 * (1.0 + g[i].abs());
            assert!(
                (g[i] - fd.values[i]).abs() <= tol,
                "gradient mismatch at {i}: analytic {} vs fd {}",
                g[i],
                fd.values[i]
            );
        }
    }
}

#[test]
fn gradients_match_finite_differences_across_families() {
    let mut rng = SplitMix64::new(2024);
    for n in [2usize, 3, 5] {
        grad_matches_fd(&random_dr_quadratic(&mut rng, n), &mut rng, 100);
        grad_matches_fd(
            &Objective::multilinear(random_cut_model(&mut rng, n), BoxDomain::unit(n)).unwrap(),
            &mut rng,
            100,
        );
        grad_matches_fd(
            &Objective::multilinear(random_ising_model(&mut rng, n), BoxDomain::unit(n)).unwrap(),
            &mut rng,
            100,
        );
        grad_matches_fd(
            &Objective::multilinear(random_flid_model(&mut rng, n, 3), BoxDomain::unit(n)).unwrap(),
            &mut rng,
            100,
        );
        grad_matches_fd(
            &Objective::multilinear(random_setcover_model(&mut rng, n, 4), BoxDomain::unit(n))
                .unwrap(),
            &mut rng,
            100,
        );
        grad_matches_fd_margin(
            &build_elbo(&random_cut_model(&mut rng, n)).unwrap(),
            &mut rng,
            100,
            0.02,
        );
        let pa = PaModel::new(
            random_modular_model(&mut rng, n),
            random_ising_model(&mut rng, n),
            1.3,
        )
        .unwrap();
        grad_matches_fd_margin(&build_pa_elbo(&pa).unwrap(), &mut rng, 100, 0.02);
    }

    // Softmax kernel from the spectrum generator.
    let softmax = drsub_core::instances::gen_softmax(4, 0.5, 7)
        .unwrap()
        .objective;
    grad_matches_fd(&softmax, &mut rng, 100);

    // Revenue (influence-and-exploit).
    let mut w = Mat::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                w.set(i, j, rng.next_f64());
            }
        }
    }
    let rev =
        Objective::revenue_ie(w, 0.6, BoxDomain::new(vec![0.0; 3], vec![3.0; 3]).unwrap()).unwrap();
    grad_matches_fd(&rev, &mut rng, 100);

    // Influence with both activation modes.
    let fac = Mat::from_rows(&[vec![1.0, 0.5], vec![0.3, 1.2], vec![0.8, 0.1]]).unwrap();
    let independent = Objective::influence(
        Activation::Independent {
            probs: vec![0.3, 0.7, 0.5],
        },
        fac.clone(),
        BoxDomain::new(vec![0.0; 3], vec![2.0; 3]).unwrap(),
    )
    .unwrap();
    grad_matches_fd(&independent, &mut rng, 100);
    let mut probs = Mat::zeros(2, 3);
    probs.set(0, 0, 0.4);
    probs.set(0, 2, 0.2);
    probs.set(1, 1, 0.6);
    let bipartite = Objective::influence(
        Activation::Bipartite { probs },
        fac,
        BoxDomain::new(vec![0.0; 2], vec![2.0; 2]).unwrap(),
    )
    .unwrap();
    grad_matches_fd(&bipartite, &mut rng, 100);

    // Reflected quadratic.
    let base = Objective::quadratic(
        Mat::from_rows(&[vec![-0.5, 1.0], vec![1.0, -0.5]]).unwrap(),
        vec![0.2, -0.4],
        0.0,
        BoxDomain::new(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap(),
    )
    .unwrap();
    grad_matches_fd(&base.orthant_reflect(&[1.0, -1.0]).unwrap(), &mut rng, 100);
}

#[test]
fn multilinear_closed_forms_match_exhaustive_sums() {
    let mut rng = SplitMix64::new(7);
    for trial in 0..60 {
        let n = 2 + rng.below(7);
        let concepts = 1 + rng.below(5);
        let model = match trial % 4 {
            0 => random_cut_model(&mut rng, n),
            1 => random_ising_model(&mut rng, n),
            2 => {
                let latent = 2 + rng.below(3);
                random_flid_model(&mut rng, n, latent)
            }
            _ => random_setcover_model(&mut rng, n, concepts),
        };
        let obj = Objective::multilinear(model.clone(), BoxDomain::unit(n)).unwrap();
        let x: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
        let closed = obj.eval(&x).unwrap();
        let exact = mt_exhaustive(&model, &x).unwrap();
        assert!(
            (closed - exact).abs() <= 1e-10,
            "closed {closed} vs exhaustive {exact}"
        );

        // Vertex consistency: at 0/1 points the extension equals F(S).
        let mask = rng.next_u64() & ((1 << n) - 1);
        let vertex: Vec<f64> = (0..n).map(|i| (mask >> i & 1) as f64).collect();
        assert_eq!(obj.eval(&vertex).unwrap(), model.value(mask));
    }
}

#[test]
fn dr_gradients_are_antitone() {
    let mut rng = SplitMix64::new(99);
    for _ in 0..40 {
        let n = 2 + rng.below(3);
        let objectives = vec![
            random_dr_quadratic(&mut rng, n),
            Objective::multilinear(random_cut_model(&mut rng, n), BoxDomain::unit(n)).unwrap(),
            build_elbo(&random_ising_model(&mut rng, n)).unwrap(),
        ];
        for obj in &objectives {
            assert!(obj.meta().dr);
            let b = random_point(&mut rng, obj.domain(), 1e-6);
            let a: Vec<f64> = b
                .iter()
                .enumerate()
                .map(|(i, &bi)| rng.uniform(obj.domain().lower[i], bi))
                .collect();
            let ga = obj.grad(&a).unwrap();
            let gb = obj.grad(&b).unwrap();
            for i in 0..n {
                assert!(
                    ga[i] >= gb[i] - 1e-8,
                    "antitone violated: {} < {}",
                    ga[i],
                    gb[i]
                );
            }
        }
    }
}

#[test]
fn reflected_argmax_maps_back_to_inner_argmax() {
    let mut rng = SplitMix64::new(55);
    for _ in 0..10 {
        let n = 2 + rng.below(2);
        let mut h = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = rng.uniform(-1.0, 1.0);
                h.set(i, j, v);
                h.set(j, i, v);
            }
        }
        let lin: Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let domain = BoxDomain::new(vec![-1.0; n], vec![1.0; n]).unwrap();
        let inner = Objective::quadratic(h, lin, 0.0, domain).unwrap();
        let alpha: Vec<f64> = (0..n)
            .map(|_| if rng.next_f64() < 0.5 { 1.0 } else { -1.0 })
            .collect();
        let reflected = inner.orthant_reflect(&alpha).unwrap();

        let inner_box = Constraint::Box {
            lower: inner.domain().lower.clone(),
            upper: inner.domain().upper.clone(),
        };
        let refl_box = Constraint::Box {
            lower: reflected.domain().lower.clone(),
            upper: reflected.domain().upper.clone(),
        };
        let (x_inner, f_inner) = grid_max(&inner, &inner_box, 41).unwrap();
        let (x_refl, f_refl) = grid_max(&reflected, &refl_box, 41).unwrap();
        assert!((f_inner - f_refl).abs() < 1e-12);
        let mapped: Vec<f64> = x_refl
            .coords()
            .iter()
            .zip(&alpha)
            .map(|(v, a)| v * a)
            .collect();
        let f_mapped = inner.eval(&mapped).unwrap();
        assert!((f_mapped - f_inner).abs() < 1e-12);
        let _ = x_inner;
    }
}

#[test]
fn sampling_estimator_concentrates() {
    // Light version of the acceptance bound: 200 trials, k = 800.
    let model = SetFunctionModel::Cut {
        weights: Mat::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap(),
        directed: false,
    };
    let (k, eps) = (800usize, 0.1f64);
    let mut violations = 0;
    let trials = 200;
    for seed in 0..trials {
        let obj =
            Objective::sampled_multilinear(model.clone(), k, seed, BoxDomain::unit(2)).unwrap();
        let est = obj.eval(&[0.5, 0.5]).unwrap();
        if (est - 0.5).abs() > eps {
            violations += 1;
        }
    }
    let bound = 2.0 * (-(k as f64) * eps * eps / 2.0).exp() * 1.5 + 0.01;
    assert!((violations as f64 / trials as f64) <= bound);
}

#[test]
fn lmo_shrunken_never_beats_lmo() {
    let mut rng = SplitMix64::new(3);
    for _ in 0..100 {
        let n = 2 + rng.below(4);
        let m = 1 + rng.below(3);
        let c = random_polytope(&mut rng, n, m);
        let g: Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let full = lmo(&c, &g).unwrap();
        let cap: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
        let shrunken = lmo_shrunken(&c, &g, &cap).unwrap();
        let dot = |a: &[f64]| a.iter().zip(&g).map(|(x, y)| x * y).sum::<f64>();
        assert!(dot(&shrunken) <= dot(&full) + 1e-9);
        assert!(shrunken.iter().zip(&cap).all(|(v, c)| *v <= c + 1e-9));
    }
}

#[test]
fn projection_satisfies_the_variational_inequality() {
    let mut rng = SplitMix64::new(31);
    for _ in 0..20 {
        let n = 2 + rng.below(3);
        let m = 1 + rng.below(3);
        let c = random_polytope(&mut rng, n, m);
        let y: Vec<f64> = (0..n).map(|_| rng.uniform(-0.5, 2.0)).collect();
        let p = project(&c, &y).unwrap();
        assert!(contains(&c, &p, 1e-9));
        for _ in 0..50 {
            // Random feasible point by rejection from the box.
            let x: Vec<f64> = loop {
                let cand: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
                if contains(&c, &cand, 0.0) {
                    break cand;
                }
            };
            let inner: f64 = y
                .iter()
                .zip(&p)
                .zip(x.iter().zip(&p))
                .map(|((yi, pi), (xi, pj))| (yi - pi) * (xi - pj))
                .sum();
            assert!(inner <= 1e-6, "variational inequality violated: {inner}");
        }
    }
}

#[test]
fn down_closedness_holds_below_feasible_points() {
    let mut rng = SplitMix64::new(77);
    for _ in 0..50 {
        let n = 2 + rng.below(4);
        let m = 1 + rng.below(3);
        let c = random_polytope(&mut rng, n, m);
        let x: Vec<f64> = loop {
            let cand: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
            if contains(&c, &cand, 0.0) {
                break cand;
            }
        };
        let below: Vec<f64> = x.iter().map(|&xi| rng.uniform(0.0, xi)).collect();
        assert!(contains(&c, &below, 1e-12));
    }
}

#[test]
fn every_solver_keeps_iterates_feasible() {
    let mut rng = SplitMix64::new(2718);
    let monotone = random_monotone_dr_quadratic(&mut rng, 3);
    let nonneg = random_nonneg_dr_quadratic(&mut rng, 3);
    let poly = random_polytope(&mut rng, 3, 2);
    let boxc = Constraint::Box {
        lower: vec![0.0; 3],
        upper: vec![1.0; 3],
    };
    let cfg = SolverConfig {
        iterations: 15,
        ..Default::default()
    };

    let mut reports = vec![
        submodular_fw(&monotone, &poly, &cfg).unwrap(),
        nonconvex_fw(&nonneg, &poly, &cfg).unwrap(),
        pga(&monotone, &poly, &cfg).unwrap(),
        shrunken_fw(&nonneg, &poly, &cfg).unwrap(),
        two_phase(&nonneg, &poly, &cfg).unwrap(),
    ];
    let constraint_for = |idx: usize| if idx < 5 { &poly } else { &boxc };

    let elbo = build_elbo(&random_cut_model(&mut rng, 3)).unwrap();
    reports.push(submodular_double_greedy(&nonneg, nonneg.domain(), &cfg).unwrap());
    reports.push(dr_double_greedy(&nonneg, nonneg.domain(), &cfg).unwrap());
    reports.push(coordinate_ascent(&elbo, elbo.domain(), &cfg).unwrap());
    reports.push(dg_meanfield(&elbo, elbo.domain(), &cfg, DoubleGreedyVariant::Third).unwrap());
    reports.push(dg_meanfield(&elbo, elbo.domain(), &cfg, DoubleGreedyVariant::Half).unwrap());

    for (idx, report) in reports.iter().enumerate() {
        let constraint = constraint_for(idx);
        for rec in &report.trajectory {
            assert!(
                contains(constraint, rec.x.coords(), 1e-9),
                "solver {} produced an infeasible iterate",
                report.algorithm
            );
        }
        assert!(contains(constraint, report.solution.coords(), 1e-9));
        // Trajectory t is nondecreasing.
        for pair in report.trajectory.windows(2) {
            assert!(pair[1].t >= pair[0].t);
        }
        // best_f matches the trajectory maximum.
        let best = report
            .trajectory
            .iter()
            .map(|r| r.f)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(report.best_f >= best - 1e-15);
    }
}

#[test]
fn elbo_lower_bounds_the_log_partition() {
    let mut rng = SplitMix64::new(123);
    for trial in 0..12 {
        let n = 2 + rng.below(6);
        let model = match trial % 3 {
            0 => random_modular_model(&mut rng, n),
            1 => random_cut_model(&mut rng, n),
            _ => random_ising_model(&mut rng, n),
        };
        let elbo = build_elbo(&model).unwrap();
        let log_z = log_partition_exact(&model, 1.0).unwrap();
        for _ in 0..50 {
            let x: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
            assert!(elbo.eval(&x).unwrap() <= log_z + 1e-9);
        }
        // Mean-field is exact on modular models.
        if let SetFunctionModel::Modular { theta } = &model {
            let x: Vec<f64> = theta
                .iter()
                .map(|&t| drsub_core::objectives::sigmoid(t))
                .collect();
            assert!((elbo.eval(&x).unwrap() - log_z).abs() <= 1e-6);
        }
    }
}

#[test]
fn marginal_gains_diminish_for_submodular_models() {
    let mut rng = SplitMix64::new(321);
    for trial in 0..30 {
        let n = 3 + rng.below(6);
        let model = match trial % 4 {
            0 => random_cut_model(&mut rng, n),
            1 => random_ising_model(&mut rng, n),
            2 => random_flid_model(&mut rng, n, 3),
            _ => random_setcover_model(&mut rng, n, 4),
        };
        for _ in 0..30 {
            let t_mask = rng.next_u64() & ((1 << n) - 1);
            let s_mask = t_mask & rng.next_u64(); // S subseteq T
            let outside: Vec<usize> = (0..n).filter(|i| t_mask >> i & 1 == 0).collect();
            if outside.is_empty() {
                continue;
            }
            let i = outside[rng.below(outside.len())];
            let g_small = marginal_gain(&model, i, s_mask).unwrap();
            let g_large = marginal_gain(&model, i, t_mask).unwrap();
            assert!(g_small >= g_large - 1e-12);
        }
    }
}

#[test]
fn supergradient_bounds_dominate_the_partition_function() {
    let mut rng = SplitMix64::new(4444);
    for trial in 0..12 {
        let n = 2 + rng.below(6);
        let model = match trial % 3 {
            0 => random_modular_model(&mut rng, n),
            1 => random_cut_model(&mut rng, n),
            _ => random_ising_model(&mut rng, n),
        };
        let beta = rng.uniform(0.5, 2.0);
        let log_z = log_partition_exact(&model, beta).unwrap();
        for anchor in 0u64..(1 << n) {
            let bound = bar_supergradient_bound(&model, beta, anchor).unwrap();
            assert!(
                bound >= log_z - 1e-9,
                "anchor {anchor:b}: bound {bound} < log Z {log_z}"
            );
        }
    }
}

#[test]
fn pa_bound_is_valid_on_random_pairs() {
    let mut rng = SplitMix64::new(5150);
    let cfg = SolverConfig {
        iterations: 2,
        ..Default::default()
    };
    for trial in 0..12 {
        let n = 2 + rng.below(5);
        let (a, b) = match trial % 3 {
            0 => (
                random_modular_model(&mut rng, n),
                random_modular_model(&mut rng, n),
            ),
            1 => (random_cut_model(&mut rng, n), random_cut_model(&mut rng, n)),
            _ => (
                random_ising_model(&mut rng, n),
                random_ising_model(&mut rng, n),
            ),
        };
        let pa = PaModel::new(a, b, rng.uniform(0.5, 1.5)).unwrap();
        let bound = pa_lower_bound(&pa, &cfg, None).unwrap();
        let exact = log_pa_exact(&pa).unwrap();
        assert!(bound <= exact + 1e-6, "bound {bound} above exact {exact}");
    }
}

#[test]
fn grid_oracle_agrees_with_analytic_separable_maxima() {
    // Separable concave quadratics have closed-form box maxima; the grid
    // oracle must land within one cell in argument and within
    // (gradient bound) * (cell diagonal) in value.
    let mut rng = SplitMix64::new(606);
    for _ in 0..20 {
        let n = 1 + rng.below(3);
        let res = 101usize;
        let mut h = Mat::zeros(n, n);
        let mut lin = vec![0.0; n];
        for i in 0..n {
            h.set(i, i, rng.uniform(-3.0, -0.5));
            lin[i] = rng.uniform(-1.0, 2.0);
        }
        let obj = Objective::quadratic(h.clone(), lin.clone(), 0.0, BoxDomain::unit(n)).unwrap();
        let x_true: Vec<f64> = (0..n)
            .map(|i| (-lin[i] / h.get(i, i)).clamp(0.0, 1.0))
            .collect();
        let f_true = obj.eval(&x_true).unwrap();
        let boxc = Constraint::Box {
            lower: vec![0.0; n],
            upper: vec![1.0; n],
        };
        let (x_grid, f_grid) = grid_max(&obj, &boxc, res).unwrap();
        let cell = 1.0 / (res - 1) as f64;
        for i in 0..n {
            assert!((x_grid.coords()[i] - x_true[i]).abs() <= cell + 1e-12);
        }
        let grad_bound: f64 = (0..n)
            .map(|i| (h.get(i, i).abs() + lin[i].abs()).powi(2))
            .sum::<f64>()
            .sqrt();
        let cell_diag = cell * (n as f64).sqrt();
        assert!(f_true - f_grid <= grad_bound * cell_diag + 1e-12);
        assert!(f_grid <= f_true + 1e-12);
    }
}

#[test]
fn run_report_round_trips_and_matches_csv() {
    let mut rng = SplitMix64::new(808);
    let obj = random_monotone_dr_quadratic(&mut rng, 3);
    let poly = random_polytope(&mut rng, 3, 2);
    let cfg = SolverConfig {
        iterations: 20,
        ..Default::default()
    };
    let solve = submodular_fw(&obj, &poly, &cfg).unwrap();
    let report = RunReport::new("prop-test", &cfg, &solve, Some(1.23));
    let json = serde_json::to_string(&report).unwrap();
    let back: RunReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, report);

    let csv = report.trajectory_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "k,t,f,gap,gamma");
    let max_csv_f = lines
        .map(|l| l.split(',').nth(2).unwrap().parse::<f64>().unwrap())
        .fold(f64::NEG_INFINITY, f64::max);
    assert_eq!(max_csv_f, report.best_f);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Quadratic gradients agree with finite differences at arbitrary
    /// interior points.
    #[test]
    fn prop_quadratic_gradient_consistency(seed in 0u64..1000, n in 1usize..5) {
        let mut rng = SplitMix64::new(seed);
        let obj = random_dr_quadratic(&mut rng, n);
        let x = random_point(&mut rng, obj.domain(), 1e-3);
        let g = obj.grad(&x).unwrap();
        let fd = finite_diff_grad(&obj, &x, 1e-5).unwrap();
        for i in 0..n {
            prop_assert!((g[i] - fd.values[i]).abs() <= 1e-5 * (1.0 + g[i].abs()));
        }
        for i in 0..n {
            prop_assert!((obj.partial(&x, i).unwrap() - g[i]).abs() <= 1e-10);
        }
    }

    /// The lattice submodularity inequality holds for DR quadratics.
    #[test]
    fn prop_lattice_inequality_for_dr_quadratics(seed in 0u64..1000, n in 1usize..5) {
        let mut rng = SplitMix64::new(seed ^ 0xABCD);
        let obj = random_dr_quadratic(&mut rng, n);
        let x: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
        let join: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a.max(*b)).collect();
        let meet: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a.min(*b)).collect();
        let lhs = obj.eval(&x).unwrap() + obj.eval(&y).unwrap();
        let rhs = obj.eval(&join).unwrap() + obj.eval(&meet).unwrap();
        prop_assert!(lhs >= rhs - 1e-10);
    }
}

#[test]
fn influence_matches_the_composed_multilinear_oracle() {
    // Expected influence = multilinear extension of the facility-location
    // model evaluated at the activation vector; check against the exhaustive
    // oracle for both activation modes.
    let mut rng = SplitMix64::new(9090);
    for _ in 0..20 {
        let users = 2 + rng.below(5);
        let actions = 2 + rng.below(4);
        let latent = 1 + rng.below(3);
        let mut fac = Mat::zeros(users, latent);
        for i in 0..users {
            for d in 0..latent {
                fac.set(i, d, rng.next_f64());
            }
        }
        let fl_model = SetFunctionModel::Flid {
            weights: fac.clone(),
            utility: vec![0.0; users],
        };

        let mut probs = Mat::zeros(actions, users);
        for s in 0..actions {
            for t in 0..users {
                if rng.next_f64() < 0.6 {
                    probs.set(s, t, rng.uniform(0.05, 0.9));
                }
            }
        }
        let obj = Objective::influence(
            Activation::Bipartite {
                probs: probs.clone(),
            },
            fac.clone(),
            BoxDomain::new(vec![0.0; actions], vec![2.0; actions]).unwrap(),
        )
        .unwrap();
        let x: Vec<f64> = (0..actions).map(|_| rng.uniform(0.0, 2.0)).collect();
        let activations: Vec<f64> = (0..users)
            .map(|t| {
                1.0 - (0..actions)
                    .map(|s| (1.0 - probs.get(s, t)).powf(x[s]))
                    .product::<f64>()
            })
            .collect();
        let expected = mt_exhaustive(&fl_model, &activations).unwrap();
        assert!((obj.eval(&x).unwrap() - expected).abs() <= 1e-10);

        let user_probs: Vec<f64> = (0..users).map(|_| rng.uniform(0.05, 0.9)).collect();
        let obj = Objective::influence(
            Activation::Independent {
                probs: user_probs.clone(),
            },
            fac,
            BoxDomain::new(vec![0.0; users], vec![2.0; users]).unwrap(),
        )
        .unwrap();
        let y: Vec<f64> = (0..users).map(|_| rng.uniform(0.0, 2.0)).collect();
        let activations: Vec<f64> = user_probs
            .iter()
            .zip(&y)
            .map(|(&p, &yi)| 1.0 - (1.0 - p).powf(yi))
            .collect();
        let expected = mt_exhaustive(&fl_model, &activations).unwrap();
        assert!((obj.eval(&y).unwrap() - expected).abs() <= 1e-10);
    }
}

#[test]
fn softmax_instances_pass_the_dr_checker() {
    for seed in [1u64, 2, 3] {
        let spec = drsub_core::instances::gen_softmax(4, 0.5, seed).unwrap();
        let report = drsub_core::verify::check_dr(&spec.objective, 300, 1e-6, seed).unwrap();
        assert!(
            report.pass,
            "softmax DR check failed: {:?}",
            report.worst_violation
        );
        let report = drsub_core::verify::check_monotone(&spec.objective, 300, 1e-6, seed).unwrap();
        // log det shrinks when small eigenvalues enter: generically non-monotone.
        let _ = report.pass;
    }
}

#[test]
fn curvature_step_rule_takes_the_analyzed_step() {
    // x(1 - x) has curvature bound L D^2 = 2 on [0,1]; from the origin the
    // gap is 1, so the analyzed rule jumps exactly to the maximizer.
    let obj = Objective::quadratic(
        Mat::from_rows(&[vec![-2.0]]).unwrap(),
        vec![1.0],
        0.0,
        BoxDomain::unit(1),
    )
    .unwrap();
    let cfg = SolverConfig {
        iterations: 5,
        curvature_bound: Some(2.0),
        epsilon: 1e-9,
        ..Default::default()
    };
    let c = Constraint::Box {
        lower: vec![0.0],
        upper: vec![1.0],
    };
    let report = nonconvex_fw(&obj, &c, &cfg).unwrap();
    assert_eq!(report.trajectory[0].gamma, 0.5);
    assert!((report.solution.coords()[0] - 0.5).abs() < 1e-9);
}

#[test]
fn zero_dimensional_double_greedy_returns_the_constant() {
    let obj = Objective::quadratic(
        Mat::zeros(0, 0),
        vec![],
        1.5,
        BoxDomain::new(vec![], vec![]).unwrap(),
    )
    .unwrap();
    let cfg = SolverConfig::default();
    let report = submodular_double_greedy(&obj, obj.domain(), &cfg).unwrap();
    assert_eq!(report.solution.coords().len(), 0);
    assert_eq!(report.solution_f, 1.5);
    let report = dr_double_greedy(&obj, obj.domain(), &cfg).unwrap();
    assert_eq!(report.solution_f, 1.5);
}

#[test]
fn step_rules_converge_on_the_softmax_pipeline() {
    let spec = drsub_core::instances::gen_softmax(6, 0.5, 21).unwrap();
    let f0 = spec.objective.eval(&vec![0.0; 6]).unwrap();
    for rule in [StepRule::Oblivious, StepRule::LineSearch] {
        let cfg = SolverConfig {
            iterations: 40,
            step_rule: rule,
            ..Default::default()
        };
        let report = nonconvex_fw(&spec.objective, &spec.constraint, &cfg).unwrap();
        assert!(report.solution_f > f0, "{rule:?} failed to improve");
    }
    let cfg = SolverConfig {
        iterations: 40,
        step_rule: StepRule::Lipschitz,
        lipschitz_override: Some(25.0),
        ..Default::default()
    };
    let report = nonconvex_fw(&spec.objective, &spec.constraint, &cfg).unwrap();
    assert!(report.solution_f > f0);

    let cfg = SolverConfig {
        iterations: 40,
        step_rule: StepRule::Lipschitz,
        ..Default::default()
    };
    assert!(matches!(
        nonconvex_fw(&spec.objective, &spec.constraint, &cfg),
        Err(drsub_core::Error::MissingLipschitz)
    ));
}

#[test]
fn double_greedy_guarantees_hold_on_entropy_objectives() {
    // Half-of-optimum bound for the gain-blending greedy on mean-field
    // objectives, with the optimum from the exhaustive grid.
    let mut rng = SplitMix64::new(0xE1B0);
    let cfg = SolverConfig::default();
    for trial in 0..30 {
        let n = 2 + rng.below(2); // grid oracle stays cheap
        let model = match trial % 3 {
            0 => random_cut_model(&mut rng, n),
            1 => random_ising_model(&mut rng, n),
            _ => random_modular_model(&mut rng, n),
        };
        let elbo = build_elbo(&model).unwrap();
        let boxc = Constraint::Box {
            lower: elbo.domain().lower.clone(),
            upper: elbo.domain().upper.clone(),
        };
        let (_, f_star) = grid_max(&elbo, &boxc, 201).unwrap();
        let f_ends =
            elbo.eval(&elbo.domain().lower).unwrap() + elbo.eval(&elbo.domain().upper).unwrap();

        let report = dr_double_greedy(&elbo, elbo.domain(), &cfg).unwrap();
        assert!(
            report.solution_f >= 0.5 * f_star + 0.25 * f_ends - 1e-6,
            "half bound violated: {} < {}",
            report.solution_f,
            0.5 * f_star + 0.25 * f_ends
        );

        // The endpoint sum F(empty) + F(full) is the entropy-free part; when
        // it is non-negative the third-of-optimum greedy applies too.
        if f_ends >= 0.0 {
            let report = submodular_double_greedy(&elbo, elbo.domain(), &cfg).unwrap();
            assert!(report.solution_f >= f_star / 3.0 - 1e-6);
        }
    }
}

#[test]
fn stationary_audits_hold_on_monotone_multilinear_objectives() {
    let mut rng = SplitMix64::new(0xA0D1);
    let cfg = SolverConfig {
        iterations: 60,
        epsilon: 1e-9,
        ..Default::default()
    };
    for _ in 0..15 {
        let n = 2 + rng.below(2);
        let concepts = 2 + rng.below(4);
        let model = random_setcover_model(&mut rng, n, concepts);
        let obj = Objective::multilinear(model, BoxDomain::unit(n)).unwrap();
        assert!(obj.meta().monotone && obj.meta().dr);
        let m = 1 + rng.below(2);
        let poly = random_polytope(&mut rng, n, m);
        let (_, f_star) = grid_max(&obj, &poly, 201).unwrap();
        let report = nonconvex_fw(&obj, &poly, &cfg).unwrap();
        let audit =
            drsub_core::verify::local_global_audit(&report, f_star, None, 0.0, 1e-6).unwrap();
        assert!(audit.pass, "audit violation {}", audit.worst_violation);
    }
}

#[test]
fn local_global_audit_examples_and_errors() {
    use drsub_core::verify::local_global_audit;
    // A monotone instance solved to stationarity: gap ~ 0 implies
    // f(x) >= f*/2.
    let mut rng = SplitMix64::new(0xAD17);
    let obj = random_monotone_dr_quadratic(&mut rng, 2);
    let boxc = Constraint::Box { lower: vec![0.0; 2], upper: vec![1.0; 2] };
    let cfg = SolverConfig { iterations: 40, epsilon: 1e-10, ..Default::default() };
    let report = nonconvex_fw(&obj, &boxc, &cfg).unwrap();
    let (x_star, f_star) = grid_max(&obj, &boxc, 201).unwrap();
    let audit = local_global_audit(&report, f_star, None, 0.0, 1e-6).unwrap();
    assert!(audit.pass);
    assert!(report.solution_f >= 0.5 * f_star - 1e-6);

    // Solving at the optimum leaves roughly f*/2 of slack.
    let at_opt_cfg = SolverConfig {
        iterations: 0,
        init: InitKind::Given { point: x_star.0.clone() },
        ..Default::default()
    };
    let at_opt = nonconvex_fw(&obj, &boxc, &at_opt_cfg).unwrap();
    let audit = local_global_audit(&at_opt, f_star, None, 0.0, 1e-6).unwrap();
    assert!(audit.pass);

    // A report without gaps cannot be audited.
    let mut gapless = report.clone();
    gapless.solution_gap = None;
    assert!(matches!(
        local_global_audit(&gapless, f_star, None, 0.0, 1e-6),
        Err(drsub_core::Error::MissingGap)
    ));
    // A strengthened audit needs the optimizer location.
    assert!(local_global_audit(&report, f_star, None, 0.1, 1e-6).is_err());
    assert!(local_global_audit(&report, f_star, Some(x_star.coords()), 0.0, 1e-6)
        .unwrap()
        .pass);
}

#[test]
fn enumeration_limits_are_enforced() {
    use drsub_core::meanfield::{build_elbo, log_partition_exact};
    let big = SetFunctionModel::Modular { theta: vec![0.0; 21] };
    assert!(matches!(
        log_partition_exact(&big, 1.0),
        Err(drsub_core::Error::TooLarge { n: 21, .. })
    ));
    // Closed-form families build fine at n = 21; only the exact partition
    // enumeration is limited.
    assert!(build_elbo(&big).is_ok());
    // Explicit tables above the limit are rejected outright.
    let table = SetFunctionModel::Table { n: 21, values: vec![0.0; 1 << 21] };
    assert!(matches!(
        build_elbo(&table),
        Err(drsub_core::Error::TooLargeForTable)
    ));
    let model = random_cut_model(&mut SplitMix64::new(4), 13);
    assert!(matches!(
        mt_exhaustive(&model, &vec![0.5; 13]),
        Err(drsub_core::Error::TooLarge { n: 13, .. })
    ));
}
