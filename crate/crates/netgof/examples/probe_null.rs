use netgof::fitters::ModelTag;
use netgof::sim::{run_experiment, MixedLaw, PiSpec, SimConfig, ThetaLaw};
use netgof::vertex_hunting::VhSpec;
use std::time::Instant;

fn truth_config(model: ModelTag, n: usize, seed: u64) -> SimConfig {
    let theta = match model {
        ModelTag::Sbm | ModelTag::Mmsbm => ThetaLaw::ConstantSqrtAlpha { alpha: 0.3 },
        ModelTag::Dcbm | ModelTag::Dcmm => ThetaLaw::Uniform { a: 0.1, b: 0.3 },
    };
    SimConfig {
        schema_version: 1,
        n,
        k: 2,
        model,
        theta,
        p_offdiag: 0.05,
        pi: PiSpec {
            pure_fraction: 0.125,
            mixed: MixedLaw::Dirichlet { concentration: 0.5 },
        },
        replicates: 200,
        seed,
        giant_component: true,
        vh: VhSpec::Sp,
        regularize: false,
        alpha_level: 0.05,
    }
}

fn main() {
    let pairs: Vec<(ModelTag, Vec<ModelTag>)> = vec![
        (
            ModelTag::Sbm,
            vec![ModelTag::Sbm, ModelTag::Dcbm, ModelTag::Mmsbm, ModelTag::Dcmm],
        ),
        (ModelTag::Dcbm, vec![ModelTag::Dcbm, ModelTag::Dcmm]),
        (ModelTag::Mmsbm, vec![ModelTag::Mmsbm, ModelTag::Dcmm]),
        (ModelTag::Dcmm, vec![ModelTag::Dcmm]),
    ];
    for (truth, assumed) in pairs {
        let start = Instant::now();
        let cfg = truth_config(truth, 800, 42);
        let result = run_experiment(&cfg, &assumed).unwrap();
        for s in &result.summaries {
            println!(
                "truth={truth} assumed={} n_ok={} n_failed={} mean={:.3} var={:.3} rej={:.3} [{:.1}s]",
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
}
