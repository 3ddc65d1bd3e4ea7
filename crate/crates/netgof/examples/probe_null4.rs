use netgof::fitters::ModelTag;
use netgof::sim::{run_experiment, MixedLaw, PiSpec, SimConfig, ThetaLaw};
use netgof::vertex_hunting::VhSpec;

fn main() {
    // DCBM truth variants.
    for (a, b, off, seed) in [
        (0.1, 0.3, 0.1, 42u64),
        (0.15, 0.35, 0.2, 42),
        (0.1, 0.3, 0.2, 7),
        (0.15, 0.35, 0.1, 42),
    ] {
        let cfg = SimConfig {
            schema_version: 1,
            n: 800,
            k: 2,
            model: ModelTag::Dcbm,
            theta: ThetaLaw::Uniform { a, b },
            p_offdiag: off,
            pi: PiSpec::default(),
            replicates: 200,
            seed,
            giant_component: true,
            vh: VhSpec::Sp,
            regularize: false,
            alpha_level: 0.05,
        };
        let result = run_experiment(&cfg, &[ModelTag::Dcbm, ModelTag::Dcmm]).unwrap();
        for s in &result.summaries {
            println!(
                "dcbm U({a},{b}) off={off} seed={seed} -> {}: fail={} mean={:.3} var={:.3} rej={:.3}",
                s.assumed, s.n_failed, s.mean, s.variance, s.rejection_rate
            );
        }
    }
    // DCMM truth variants.
    for (a, b, off, seed) in [
        (0.1, 0.3, 0.1, 42u64),
        (0.15, 0.35, 0.2, 42),
        (0.15, 0.35, 0.1, 42),
    ] {
        let cfg = SimConfig {
            schema_version: 1,
            n: 800,
            k: 2,
            model: ModelTag::Dcmm,
            theta: ThetaLaw::Uniform { a, b },
            p_offdiag: off,
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
        };
        let result = run_experiment(&cfg, &[ModelTag::Dcmm]).unwrap();
        for s in &result.summaries {
            println!(
                "dcmm U({a},{b}) off={off} seed={seed} -> {}: fail={} mean={:.3} var={:.3} rej={:.3}",
                s.assumed, s.n_failed, s.mean, s.variance, s.rejection_rate
            );
        }
    }
}
