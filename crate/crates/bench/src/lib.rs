//! Shared fixture builders for the benchmark targets.

use drsub_core::instances::{gen_softmax, gen_sqp, InstanceSpec};
use drsub_core::meanfield::{build_elbo, SetFunctionModel};
use drsub_core::rng::SplitMix64;
use drsub_core::{Mat, Objective};

/// Large quadratic program: n = 100 variables, m = 50 rows.
pub fn sqp_instance() -> InstanceSpec {
    gen_sqp(100, 50, 7).expect("generator is infallible for valid sizes")
}

pub fn softmax_instance(n: usize) -> InstanceSpec {
    gen_softmax(n, 0.5, 11).expect("generator is infallible for valid sizes")
}

/// FLID mean-field objective over `n` items with `latent` dimensions.
pub fn flid_elbo(n: usize, latent: usize) -> Objective {
    let mut rng = SplitMix64::new(3);
    let mut w = Mat::zeros(n, latent);
    for i in 0..n {
        for d in 0..latent {
            w.set(i, d, rng.next_f64());
        }
    }
    let utility: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
    build_elbo(&SetFunctionModel::Flid {
        weights: w,
        utility,
    })
    .expect("valid model")
}

/// Random positive LP data of the given shape.
pub fn lp_data(n: usize, m: usize, seed: u64) -> (Mat, Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut rng = SplitMix64::new(seed);
    let mut a = Mat::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            a.set(i, j, rng.next_f64());
        }
    }
    let b: Vec<f64> = (0..m).map(|_| rng.uniform(0.5, 2.0)).collect();
    let ubar = vec![1.0; n];
    let g: Vec<f64> = (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect();
    (a, b, ubar, g)
}
