use netgof::fitters::ModelTag;
use netgof::sim::{run_experiment, MixedLaw, PiSpec, SimConfig, ThetaLaw};
use netgof::vertex_hunting::VhSpec;
use std::time::Instant;

fn main() {
    let n = 800;
    let cells: Vec<(&str, SimConfig, Vec<ModelTag>)> = vec![
        (
            "sbm a=0.05",
            SimConfig {
                schema_version: 1,
                n,
                k: 2,
                model: ModelTag::Sbm,
                theta: ThetaLaw::ConstantSqrtAlpha { alpha: 0.05 },
                p_offdiag: 0.1,
                pi: PiSpec::default(),
                replicates: 200,
                seed: 42,
                giant_component: true,
                vh: VhSpec::Sp,
                regularize: false,
                alpha_level: 0.05,
            },
            vec![ModelTag::Sbm, ModelTag::Dcbm, ModelTag::Mmsbm, ModelTag::Dcmm],
        ),
        (
            "sbm a=0.10",
            SimConfig {
                theta: ThetaLaw::ConstantSqrtAlpha { alpha: 0.10 },
                ..SimConfig {
                    schema_version: 1,
                    n,
                    k: 2,
                    model: ModelTag::Sbm,
                    theta: ThetaLaw::ConstantSqrtAlpha { alpha: 0.1 },
                    p_offdiag: 0.1,
                    pi: PiSpec::default(),
                    replicates: 200,
                    seed: 42,
                    giant_component: true,
                    vh: VhSpec::Sp,
                    regularize: false,
                    alpha_level: 0.05,
                }
            },
            vec![ModelTag::Sbm],
        ),
        (
            "mmsbm a=0.05",
            SimConfig {
                schema_version: 1,
                n,
                k: 2,
                model: ModelTag::Mmsbm,
                theta: ThetaLaw::ConstantSqrtAlpha { alpha: 0.05 },
                p_offdiag: 0.1,
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
            },
            vec![ModelTag::Mmsbm, ModelTag::Dcmm],
        ),
        (
            "dcbm b=0.2",
            SimConfig {
                schema_version: 1,
                n,
                k: 2,
                model: ModelTag::Dcbm,
                theta: ThetaLaw::Uniform { a: 0.1, b: 0.3 },
                p_offdiag: 0.2,
                pi: PiSpec::default(),
                replicates: 200,
                seed: 42,
                giant_component: true,
                vh: VhSpec::Sp,
                regularize: false,
                alpha_level: 0.05,
            },
            vec![ModelTag::Dcbm, ModelTag::Dcmm],
        ),
        (
            "dcmm b=0.2",
            SimConfig {
                schema_version: 1,
                n,
                k: 2,
                model: ModelTag::Dcmm,
                theta: ThetaLaw::Uniform { a: 0.1, b: 0.3 },
                p_offdiag: 0.2,
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
            },
            vec![ModelTag::Dcmm],
        ),
    ];
    for (name, cfg, assumed) in cells {
        let start = Instant::now();
        match run_experiment(&cfg, &assumed) {
            Ok(result) => {
                for s in &result.summaries {
                    println!(
                        "{name} -> {}: ok={} fail={} mean={:.3} var={:.3} rej={:.3} [{:.1}s]",
                        s.assumed,
                        s.n_ok,
                        s.n_failed,
                        s.mean,
                        s.variance,
                        s.rejection_rate,
                        start.elapsed().as_secs_f64()
                    );
                }
            }
            Err(e) => println!("{name}: ERROR {e}"),
        }
    }
}
