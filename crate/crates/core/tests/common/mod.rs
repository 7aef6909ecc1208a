//! Shared instance generators for the integration suites.

#![allow(dead_code)]

use drsub_core::constraints::DownClosedPolytope;
use drsub_core::rng::SplitMix64;
use drsub_core::{BoxDomain, Constraint, Mat, Objective, SetFunctionModel};

/// Symmetric matrix with i.i.d. U(-2, 0) entries (both triangles drawn, then
/// averaged, so entries stay in [-2, 0]).
pub fn random_nonpositive_sym(rng: &mut SplitMix64, n: usize) -> Mat {
    let mut h = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            h.set(i, j, rng.uniform(-2.0, 0.0));
        }
    }
    let mut s = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            s.set(i, j, 0.5 * (h.get(i, j) + h.get(j, i)));
        }
    }
    s
}

/// DR-submodular quadratic on \[0,1\]^n with an interior-ish optimum:
/// h = -t H 1 with t ~ U(0.3, 0.7).
pub fn random_dr_quadratic(rng: &mut SplitMix64, n: usize) -> Objective {
    let h = random_nonpositive_sym(rng, n);
    let t = rng.uniform(0.3, 0.7);
    let linear: Vec<f64> = (0..n)
        .map(|i| -t * (0..n).map(|j| h.get(i, j)).sum::<f64>())
        .collect();
    Objective::quadratic(h, linear, 0.0, BoxDomain::unit(n))
        .unwrap()
        .require_dr()
        .unwrap()
}

/// Monotone DR quadratic on \[0,1\]^n with f(0) = 0: h = -H 1.
pub fn random_monotone_dr_quadratic(rng: &mut SplitMix64, n: usize) -> Objective {
    let h = random_nonpositive_sym(rng, n);
    let linear: Vec<f64> = (0..n)
        .map(|i| -(0..n).map(|j| h.get(i, j)).sum::<f64>())
        .collect();
    let obj = Objective::quadratic(h, linear, 0.0, BoxDomain::unit(n))
        .unwrap()
        .require_dr()
        .unwrap();
    assert!(obj.meta().monotone);
    obj
}

/// Non-monotone DR quadratic shifted so f >= 0 over \[0,1\]^n (the minimum of a
/// coordinate-wise concave function over a box sits at a vertex).
pub fn random_nonneg_dr_quadratic(rng: &mut SplitMix64, n: usize) -> Objective {
    let h = random_nonpositive_sym(rng, n);
    let t = rng.uniform(0.3, 0.7);
    let linear: Vec<f64> = (0..n)
        .map(|i| -t * (0..n).map(|j| h.get(i, j)).sum::<f64>())
        .collect();
    let mut vertex_min = f64::INFINITY;
    for mask in 0u64..(1 << n) {
        let x: Vec<f64> = (0..n).map(|i| (mask >> i & 1) as f64).collect();
        let val = 0.5 * h.quad_form(&x) + x.iter().zip(&linear).map(|(a, b)| a * b).sum::<f64>();
        vertex_min = vertex_min.min(val);
    }
    let c = (-vertex_min).max(0.0);
    Objective::quadratic(h, linear, c, BoxDomain::unit(n))
        .unwrap()
        .require_dr()
        .unwrap()
}

/// Random down-closed polytope {Ax <= b, 0 <= x <= 1} with U(0,1) rows.
pub fn random_polytope(rng: &mut SplitMix64, n: usize, m: usize) -> Constraint {
    let mut a = Mat::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            a.set(i, j, rng.next_f64());
        }
    }
    let b: Vec<f64> = (0..m).map(|_| rng.uniform(0.5, 1.5)).collect();
    Constraint::polytope(DownClosedPolytope::new(a, b, vec![1.0; n]).unwrap())
}

/// Random undirected cut model with edge probability 1/2 and U(0,1) weights.
pub fn random_cut_model(rng: &mut SplitMix64, n: usize) -> SetFunctionModel {
    let mut w = Mat::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.next_f64() < 0.5 {
                let weight = rng.next_f64();
                w.set(i, j, weight);
                w.set(j, i, weight);
            }
        }
    }
    SetFunctionModel::Cut {
        weights: w,
        directed: false,
    }
}

/// Random Ising model with U[-1,1] fields and non-positive couplings.
pub fn random_ising_model(rng: &mut SplitMix64, n: usize) -> SetFunctionModel {
    let field: Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
    let mut coupling = Mat::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.next_f64() < 0.5 {
                let w = -rng.next_f64();
                coupling.set(i, j, w);
                coupling.set(j, i, w);
            }
        }
    }
    SetFunctionModel::Ising { field, coupling }
}

/// Random FLID model with U(0,1) latent weights and U(0,1) utilities.
pub fn random_flid_model(rng: &mut SplitMix64, n: usize, latent: usize) -> SetFunctionModel {
    let mut w = Mat::zeros(n, latent);
    for i in 0..n {
        for d in 0..latent {
            w.set(i, d, rng.next_f64());
        }
    }
    let utility: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
    SetFunctionModel::Flid {
        weights: w,
        utility,
    }
}

/// Random set-cover model: each of `concepts` concepts is covered by a random
/// nonempty subset of items.
pub fn random_setcover_model(rng: &mut SplitMix64, n: usize, concepts: usize) -> SetFunctionModel {
    let mut covers = Vec::with_capacity(concepts);
    for _ in 0..concepts {
        let mut items: Vec<usize> = (0..n).filter(|_| rng.next_f64() < 0.4).collect();
        if items.is_empty() {
            items.push(rng.below(n));
        }
        covers.push(items);
    }
    let credits: Vec<f64> = (0..concepts).map(|_| rng.next_f64()).collect();
    SetFunctionModel::SetCover { n, credits, covers }
}

pub fn random_modular_model(rng: &mut SplitMix64, n: usize) -> SetFunctionModel {
    SetFunctionModel::Modular {
        theta: (0..n).map(|_| rng.uniform(-2.0, 2.0)).collect(),
    }
}

/// Random point in the box, optionally with an interior margin.
pub fn random_point(rng: &mut SplitMix64, domain: &BoxDomain, margin: f64) -> Vec<f64> {
    (0..domain.dim())
        .map(|i| rng.uniform(domain.lower[i] + margin, domain.upper[i] - margin))
        .collect()
}
