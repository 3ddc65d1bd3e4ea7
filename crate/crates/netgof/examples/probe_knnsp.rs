use nalgebra::DMatrix;
use netgof::membership::mscore;
use netgof::sim::{gen_omega, sample_network, MixedLaw, PiSpec, SimConfig, ThetaLaw};
use netgof::vertex_hunting::VhSpec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn mean_err(est: &DMatrix<f64>, truth: &DMatrix<f64>) -> f64 {
    let mut best = f64::INFINITY;
    for perm in [[0usize, 1], [1, 0]] {
        let mut total = 0.0f64;
        for i in 0..truth.nrows() {
            for c in 0..2 {
                total += (est[(i, perm[c])] - truth[(i, c)]).abs();
            }
        }
        best = best.min(total / truth.nrows() as f64);
    }
    best
}

fn main() {
    for (a, b, off, n) in [(0.3, 0.6, 0.05, 300), (0.25, 0.5, 0.1, 300), (0.3, 0.6, 0.05, 400)] {
        let mut knn_wins = 0;
        let mut ties = 0;
        for seed in 0..50u64 {
            let cfg = SimConfig {
                schema_version: 1,
                n,
                k: 2,
                model: netgof::fitters::ModelTag::Dcmm,
                theta: ThetaLaw::Uniform { a, b },
                p_offdiag: off,
                pi: PiSpec {
                    pure_fraction: 0.125,
                    mixed: MixedLaw::Dirichlet { concentration: 0.5 },
                },
                replicates: 1,
                seed,
                giant_component: true,
                vh: VhSpec::Sp,
                regularize: false,
                alpha_level: 0.05,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (omega, params) = gen_omega(&cfg, &mut rng).unwrap();
            let net = sample_network(&omega, &mut rng).unwrap();
            let sp = mscore(&net, 2, &VhSpec::Sp, None).unwrap();
            let knn = mscore(&net, 2, &VhSpec::KnnSpAuto, None).unwrap();
            let e_sp = mean_err(&sp.pi, &params.pi);
            let e_knn = mean_err(&knn.pi, &params.pi);
            if e_knn < e_sp {
                knn_wins += 1;
            } else if e_knn == e_sp {
                ties += 1;
            }
        }
        println!("U({a},{b}) off={off} n={n}: knn wins {knn_wins}/50, ties {ties}");
    }
}
