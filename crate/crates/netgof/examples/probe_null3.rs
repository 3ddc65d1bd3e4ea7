use netgof::fitters::ModelTag;
use netgof::sim::{run_experiment, MixedLaw, PiSpec, SimConfig, ThetaLaw};
use netgof::vertex_hunting::VhSpec;

fn main() {
    let n = 800;
    for (alpha, b) in [(0.10, 0.1), (0.10, 0.2), (0.15, 0.2), (0.12, 0.15)] {
        let cfg = SimConfig {
            schema_version: 1,
            n,
            k: 2,
            model: ModelTag::Sbm,
            theta: ThetaLaw::ConstantSqrtAlpha { alpha },
            p_offdiag: b,
            pi: PiSpec::default(),
            replicates: 200,
            seed: 42,
            giant_component: true,
            vh: VhSpec::Sp,
            regularize: false,
            alpha_level: 0.05,
        };
        let assumed = vec![ModelTag::Sbm, ModelTag::Dcbm, ModelTag::Mmsbm, ModelTag::Dcmm];
        let result = run_experiment(&cfg, &assumed).unwrap();
        for s in &result.summaries {
            println!(
                "sbm a={alpha} b={b} -> {}: mean={:.3} var={:.3} rej={:.3}",
                s.assumed, s.mean, s.variance, s.rejection_rate
            );
        }
    }
    for (alpha, b) in [(0.08, 0.1), (0.10, 0.2)] {
        let cfg = SimConfig {
            schema_version: 1,
            n,
            k: 2,
            model: ModelTag::Mmsbm,
            theta: ThetaLaw::ConstantSqrtAlpha { alpha },
            p_offdiag: b,
            pi: PiSpec {
                pure_fraction: 0.125,
                mixed: MixedLaw::Dirichlet { concentration: 0.5 },
            },
            replicates: 200,
            seed: 42,
            giant_component: true,
            vh: VhSpec::Sp,
            regularize: false,
            alpha_level: 0.05,
        };
        let assumed = vec![ModelTag::Mmsbm, ModelTag::Dcmm];
        let result = run_experiment(&cfg, &assumed).unwrap();
        for s in &result.summaries {
            println!(
                "mmsbm a={alpha} b={b} -> {}: mean={:.3} var={:.3} rej={:.3}",
                s.assumed, s.mean, s.variance, s.rejection_rate
            );
        }
    }
}
