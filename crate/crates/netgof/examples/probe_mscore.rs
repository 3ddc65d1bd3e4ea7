use nalgebra::DMatrix;
use netgof::membership::mscore;
use netgof::sim::{gen_omega, sample_network, PiSpec, SimConfig, ThetaLaw};
use netgof::vertex_hunting::VhSpec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn max_err(est: &DMatrix<f64>, truth: &DMatrix<f64>) -> f64 {
    let mut best = f64::INFINITY;
    for perm in [[0usize, 1], [1, 0]] {
        let mut worst = 0.0f64;
        for i in 0..truth.nrows() {
            let mut e = 0.0;
            for c in 0..2 {
                e += (est[(i, perm[c])] - truth[(i, c)]).abs();
            }
            worst = worst.max(e);
        }
        best = best.min(worst);
    }
    best
}

fn main() {
    for (a, b, off, n) in [
        (0.6, 1.0, 0.05, 400),
        (0.7, 1.0, 0.02, 400),
        (0.8, 1.0, 0.02, 600),
        (0.7, 1.0, 0.05, 800),
        (0.9, 1.0, 0.01, 400),
    ] {
        for vh in [VhSpec::Sp, VhSpec::KnnSpAuto] {
            let mut errs = Vec::new();
            for seed in 0..5u64 {
                let cfg = SimConfig {
                    schema_version: 1,
                    n,
                    k: 2,
                    model: netgof::fitters::ModelTag::Dcbm,
                    theta: ThetaLaw::Uniform { a, b },
                    p_offdiag: off,
                    pi: PiSpec::default(),
                    replicates: 1,
                    seed,
                    giant_component: false,
                    vh: VhSpec::Sp,
                    regularize: false,
                    alpha_level: 0.05,
                };
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let (omega, params) = gen_omega(&cfg, &mut rng).unwrap();
                let net = sample_network(&omega, &mut rng).unwrap();
                let est = mscore(&net, 2, &vh, None).unwrap();
                errs.push(max_err(&est.pi, &params.pi));
            }
            let txt: Vec<String> = errs.iter().map(|e| format!("{e:.3}")).collect();
            println!("theta U({a},{b}) off={off} n={n} vh={vh:?}: {txt:?}");
        }
    }
}
