use criterion::{black_box, criterion_group, criterion_main, Criterion};
use drsub_bench::{flid_elbo, lp_data, softmax_instance};
use drsub_core::constraints::simplex_max;
use drsub_core::solvers::maximize_1d;
use drsub_core::verify::mt_exhaustive;
use drsub_core::{ObjectiveKind, SetFunctionModel};

fn bench_primitives(c: &mut Criterion) {
    let (a, b, ubar, g) = lp_data(60, 30, 5);
    c.bench_function("simplex_max n=60 m=30", |bench| {
        bench.iter(|| black_box(simplex_max(&a, &b, &ubar, &g).unwrap().value))
    });

    let softmax = softmax_instance(64);
    let x = vec![0.4; 64];
    c.bench_function("softmax eval n=64", |bench| {
        bench.iter(|| black_box(softmax.objective.eval(&x).unwrap()))
    });
    c.bench_function("softmax grad n=64", |bench| {
        bench.iter(|| black_box(softmax.objective.grad(&x).unwrap()))
    });

    let elbo = flid_elbo(64, 10);
    let y = vec![0.3; 64];
    c.bench_function("flid elbo eval n=64 D=10", |bench| {
        bench.iter(|| black_box(elbo.eval(&y).unwrap()))
    });
    c.bench_function("flid elbo coordinate maximize n=64", |bench| {
        bench.iter(|| {
            let r = elbo.restrict_1d(&y, 17).unwrap();
            black_box(maximize_1d(&r, 0.0, 1.0, 1e-10).unwrap())
        })
    });

    if let ObjectiveKind::Elbo { model } = elbo.kind() {
        let small = match model {
            SetFunctionModel::Flid { weights, utility } => SetFunctionModel::Flid {
                weights: {
                    let mut w = drsub_core::Mat::zeros(12, 10);
                    for i in 0..12 {
                        for d in 0..10 {
                            w.set(i, d, weights.get(i, d));
                        }
                    }
                    w
                },
                utility: utility[..12].to_vec(),
            },
            _ => unreachable!(),
        };
        let z = vec![0.3; 12];
        c.bench_function("mt_exhaustive flid n=12", |bench| {
            bench.iter(|| black_box(mt_exhaustive(&small, &z).unwrap()))
        });
    }
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench_primitives
}
criterion_main!(benches);
