use netgof::fitters::ModelTag;
use netgof::gof::{estimate_k, gof_all, GofConfig};
use netgof::graph::load_edge_list;
use netgof::sim::{run_experiment, MixedLaw, PiSpec, SimConfig, ThetaLaw};
use netgof::vertex_hunting::VhSpec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn main() {
    // Criterion 5: power at n = 1000 under the Experiment-1.1 truth.
    let start = Instant::now();
    let cfg = SimConfig {
        schema_version: 1,
        n: 1000,
        k: 2,
        model: ModelTag::Dcmm,
        theta: ThetaLaw::Uniform { a: 0.1, b: 0.3 },
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
    };
    let result = run_experiment(&cfg, &[ModelTag::Sbm, ModelTag::Dcmm]).unwrap();
    for s in &result.summaries {
        let mean_abs: f64 = result
            .records
            .iter()
            .filter(|r| r.assumed == s.assumed)
            .filter_map(|r| r.t_n)
            .map(f64::abs)
            .sum::<f64>()
            / s.n_ok as f64;
        println!(
            "power {}: mean|T|={mean_abs:.2} (mean={:.2}, fail={}) [{:.0}s]",
            s.assumed,
            s.mean,
            s.n_failed,
            start.elapsed().as_secs_f64()
        );
    }

    // Criterion 7: Karate with data-mode defaults.
    let karate = load_edge_list("crates/netgof/tests/fixtures/karate.txt").unwrap();
    let stats = karate.network.degree_stats();
    println!(
        "karate: n={} m={} dmin={} dmax={} dbar={:.2}",
        karate.network.n(),
        karate.network.edge_count(),
        stats.d_min,
        stats.d_max,
        stats.d_bar
    );
    for seed in [0u64, 1, 2] {
        let report = gof_all(&karate.network, 2, &GofConfig::data_mode(seed)).unwrap();
        let vals: Vec<String> = report
            .entries
            .iter()
            .map(|e| format!("{}={:.3}", e.model, e.t_n.unwrap_or(f64::NAN)))
            .collect();
        println!("karate gof (seed {seed}): {}", vals.join(" "));
    }

    // Criterion 9: estimate_k on SBM(n=600, K=3, b=0.1, alpha=0.3).
    let start = Instant::now();
    let mut hits = 0;
    let reps = 50u64;
    for seed in 0..reps {
        let cfg = SimConfig {
            schema_version: 1,
            n: 600,
            k: 3,
            model: ModelTag::Sbm,
            theta: ThetaLaw::ConstantSqrtAlpha { alpha: 0.3 },
            p_offdiag: 0.1,
            pi: PiSpec::default(),
            replicates: 1,
            seed,
            giant_component: false,
            vh: VhSpec::Sp,
            regularize: false,
            alpha_level: 0.05,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (omega, _) = netgof::sim::gen_omega(&cfg, &mut rng).unwrap();
        let net = netgof::sim::sample_network(&omega, &mut rng).unwrap();
        let fit_cfg = netgof::fitters::FitConfig::sim_mode(seed);
        let est = estimate_k(&net, 6, 0.05, &fit_cfg).unwrap();
        if est.k_hat == 3 {
            hits += 1;
        }
    }
    println!(
        "estimate_k: {hits}/{reps} returned 3 [{:.0}s]",
        start.elapsed().as_secs_f64()
    );
}
