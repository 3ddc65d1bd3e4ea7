//! Report-level behavior: gof_all determinism and smoke separation, K
//! estimation edge cases, SNR diagnostics, and the NMF feasibility check.

use nalgebra::{DMatrix, DVector};
use netgof::fitters::{FitConfig, ModelTag};
use netgof::gof::{estimate_k, gof_all, nmf_feasibility, snr, GofConfig};
use netgof::graph::Network;
use netgof::sim::{gen_omega, sample_network, MixedLaw, PiSpec, SimConfig, ThetaLaw};
use netgof::vertex_hunting::VhSpec;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn complete_graph(n: usize) -> Network {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            edges.push((i, j));
        }
    }
    Network::from_edges(n, edges).unwrap().0
}

#[test]
fn estimate_k_on_complete_graph_returns_one() {
    let net = complete_graph(30);
    let est = estimate_k(&net, 4, 0.05, &FitConfig::sim_mode(0)).unwrap();
    assert_eq!(est.k_hat, 1);
    assert!(est.accepted);
}

#[test]
fn estimate_k_on_erdos_renyi_returns_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let mut edges = Vec::new();
    let n = 300;
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < 0.1 {
                edges.push((i, j));
            }
        }
    }
    let net = Network::from_edges(n, edges).unwrap().0;
    let est = estimate_k(&net, 5, 0.05, &FitConfig::sim_mode(0)).unwrap();
    assert_eq!(est.k_hat, 1, "t values: {:?}", est.t_values);
}

#[test]
fn snr_vanishes_inside_the_model_class() {
    // SBM truth fitted by the SBM map reproduces Omega exactly.
    let cfg = SimConfig {
        schema_version: 1,
        n: 120,
        k: 2,
        model: ModelTag::Sbm,
        theta: ThetaLaw::ConstantSqrtAlpha { alpha: 0.3 },
        p_offdiag: 0.1,
        pi: PiSpec::default(),
        replicates: 1,
        seed: 52,
        giant_component: false,
        vh: VhSpec::Sp,
        regularize: false,
        alpha_level: 0.05,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    let (omega, _) = gen_omega(&cfg, &mut rng).unwrap();
    let s = snr(&omega, ModelTag::Sbm, 2, 0).unwrap();
    assert!(
        s.snr.abs() <= 1e-10,
        "in-class SNR should vanish, got {}",
        s.snr
    );
}

#[test]
fn snr_k1_closed_form_matches() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    let n = 100;
    let theta = DVector::from_iterator(n, (0..n).map(|_| rng.random_range(0.1..0.9)));
    let omega = &theta * theta.transpose();
    let s = snr(&omega, ModelTag::Sbm, 1, 0).unwrap();
    let norm2 = theta.norm_squared();
    let mean = theta.sum() / n as f64;
    let nm2 = n as f64 * mean * mean;
    let closed = (norm2 - nm2).powi(2) * (norm2 + 2.0 * nm2);
    let rel = (s.trace_diff_cubed - closed).abs() / closed.abs();
    assert!(rel <= 1e-9, "relative error {rel}");
    assert!((s.trace_omega_cubed - norm2.powi(3)).abs() <= 1e-9 * norm2.powi(3));
}

#[test]
fn snr_higher_rank_lower_bound_holds() {
    // K0 = 3 SBM truth, assumed K = 2: the spectral lower bound
    // sum_{j>K} lambda_j^3 / sqrt(6 sum lambda_j^3) holds for the SNR.
    let cfg = SimConfig {
        schema_version: 1,
        n: 150,
        k: 3,
        model: ModelTag::Sbm,
        theta: ThetaLaw::ConstantSqrtAlpha { alpha: 0.4 },
        p_offdiag: 0.1,
        pi: PiSpec::default(),
        replicates: 1,
        seed: 54,
        giant_component: false,
        vh: VhSpec::Sp,
        regularize: false,
        alpha_level: 0.05,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(54);
    let (omega, _) = gen_omega(&cfg, &mut rng).unwrap();
    let s = snr(&omega, ModelTag::Sbm, 2, 0).unwrap();

    let eig = omega.clone().symmetric_eigen();
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let bound = vals[2].powi(3) / (6.0 * (vals[0].powi(3) + vals[1].powi(3) + vals[2].powi(3))).sqrt();
    assert!(
        s.snr >= bound - 1e-9,
        "SNR {} below spectral bound {bound}",
        s.snr
    );
}

#[test]
fn snr_rejects_oversized_inputs() {
    let omega = DMatrix::from_element(3, 4, 0.1);
    assert!(snr(&omega, ModelTag::Sbm, 1, 0).is_err());
}

#[test]
fn nmf_k3_weak_signal_is_feasible() {
    // Balanced three-block SBM with nearly rank-one P: tau_2, tau_3 small,
    // so the weighted sum stays below 1/(K-1).
    let n = 90;
    let k = 3;
    let mut pi = DMatrix::zeros(n, k);
    for i in 0..n {
        pi[(i, i * k / n)] = 1.0;
    }
    let eps = 0.1;
    let mut p = DMatrix::from_element(k, k, 0.5 * (1.0 - eps));
    for c in 0..k {
        p[(c, c)] += 0.5 * eps;
    }
    let omega = 0.6 * &pi * &p * pi.transpose();
    let report = nmf_feasibility(&omega, k).unwrap();
    assert!((report.tau[0] - 1.0).abs() <= 1e-9);
    assert!(report.lhs < 0.5, "lhs {} not below 1/2", report.lhs);
    assert!(report.feasible);
    assert!(report.positive_eigenvalues > k / 2);
}

#[test]
fn nmf_rejects_reducible_omega() {
    let mut omega = DMatrix::zeros(6, 6);
    for i in 0..3 {
        for j in 0..3 {
            omega[(i, j)] = 0.4;
            omega[(i + 3, j + 3)] = 0.4;
        }
    }
    assert!(nmf_feasibility(&omega, 2).is_err());
}

#[test]
fn gof_all_is_deterministic_and_separates_models() {
    // A DCMM network with degree heterogeneity: the SBM metric must be much
    // larger than the DCMM metric; the report reproduces bit for bit.
    let cfg = SimConfig {
        schema_version: 1,
        n: 500,
        k: 2,
        model: ModelTag::Dcmm,
        theta: ThetaLaw::Uniform { a: 0.25, b: 0.75 },
        p_offdiag: 0.05,
        pi: PiSpec {
            pure_fraction: 0.125,
            mixed: MixedLaw::Dirichlet { concentration: 0.5 },
        },
        replicates: 1,
        seed: 55,
        giant_component: true,
        vh: VhSpec::Sp,
        regularize: false,
        alpha_level: 0.05,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let (omega, _) = gen_omega(&cfg, &mut rng).unwrap();
    let net = sample_network(&omega, &mut rng).unwrap().giant_component().unwrap().0;

    let gof_cfg = GofConfig {
        alpha: 0.05,
        fit: FitConfig::sim_mode(7),
    };
    let a = gof_all(&net, 2, &gof_cfg).unwrap();
    let b = gof_all(&net, 2, &gof_cfg).unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );

    let t_sbm = a.entry(ModelTag::Sbm).unwrap().t_n.unwrap();
    let t_dcmm = a.entry(ModelTag::Dcmm).unwrap().t_n.unwrap();
    assert!(
        t_sbm.abs() > 5.0 && t_dcmm.abs() < 3.0,
        "separation failed: sbm {t_sbm}, dcmm {t_dcmm}"
    );
}

#[test]
fn gof_all_small_null_keeps_all_models() {
    // Pure SBM truth: every nested model fits, so no metric should be huge.
    let cfg = SimConfig {
        schema_version: 1,
        n: 400,
        k: 2,
        model: ModelTag::Sbm,
        theta: ThetaLaw::ConstantSqrtAlpha { alpha: 0.15 },
        p_offdiag: 0.1,
        pi: PiSpec::default(),
        replicates: 1,
        seed: 56,
        giant_component: true,
        vh: VhSpec::Sp,
        regularize: false,
        alpha_level: 0.05,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(56);
    let (omega, _) = gen_omega(&cfg, &mut rng).unwrap();
    let net = sample_network(&omega, &mut rng).unwrap().giant_component().unwrap().0;
    let report = gof_all(&net, 2, &GofConfig { alpha: 0.05, fit: FitConfig::sim_mode(3) }).unwrap();
    for e in &report.entries {
        let t = e.t_n.unwrap();
        assert!(t.abs() < 4.0, "{}: |T| = {}", e.model, t.abs());
    }
}

#[test]
fn gof_errors_on_triangle_free_networks() {
    let net = Network::from_edges(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)])
        .unwrap()
        .0;
    assert!(matches!(
        gof_all(&net, 2, &GofConfig::data_mode(0)),
        Err(netgof::Error::UndefinedStatistic)
    ));
}
