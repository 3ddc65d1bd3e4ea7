use nalgebra::DMatrix;
use netgof::fitters::ModelTag;
use netgof::gof::snr;
use netgof::sim::{gen_omega, run_experiment, MixedLaw, PiSpec, SimConfig, ThetaLaw};
use netgof::vertex_hunting::VhSpec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cfg(n: usize, lo: f64, hi: f64) -> SimConfig {
    SimConfig {
        schema_version: 1,
        n,
        k: 2,
        model: ModelTag::Dcmm,
        theta: ThetaLaw::Uniform { a: lo, b: hi },
        p_offdiag: 0.05,
        pi: PiSpec {
            pure_fraction: 0.125,
            mixed: MixedLaw::Dirichlet { concentration: 0.5 },
        },
        replicates: 50,
        seed: 42,
        giant_component: true,
        vh: VhSpec::Sp,
        regularize: false,
        alpha_level: 0.05,
    }
}

fn mean_abs(result: &netgof::sim::ExperimentResult, m: ModelTag) -> f64 {
    let ts: Vec<f64> = result
        .records
        .iter()
        .filter(|r| r.assumed == m)
        .filter_map(|r| r.t_n)
        .collect();
    ts.iter().map(|t| t.abs()).sum::<f64>() / ts.len() as f64
}

fn main() {
    // Oracle SNR of the SBM fitting map at both scalings.
    for (n, lo, hi) in [(1000usize, 0.1, 0.3), (1000, 0.17320508, 0.51961524)] {
        let c = cfg(n, lo, hi);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (omega, _) = gen_omega(&c, &mut rng).unwrap();
        let omega_d: DMatrix<f64> = omega;
        let s = snr(&omega_d, ModelTag::Sbm, 2, 0).unwrap();
        println!("oracle SNR(SBM) n={n} theta U({lo:.3},{hi:.3}): {:.2}", s.snr);
    }

    // Monte-Carlo power at the degree-preserving scaling.
    let c = cfg(1000, 0.17320508, 0.51961524);
    let result = run_experiment(&c, &[ModelTag::Sbm, ModelTag::Dcmm]).unwrap();
    println!(
        "scaled power: mean|T(sbm)|={:.2} mean|T(dcmm)|={:.2}",
        mean_abs(&result, ModelTag::Sbm),
        mean_abs(&result, ModelTag::Dcmm)
    );
}
