mod common;

use hybrid_relay::channel::{fixed_drop, ChannelRealization};
use hybrid_relay::hybrid::{build_full_digital, build_processor};
use hybrid_relay::metrics::{sinr_exact, sinr_full_digital, Mode};
use hybrid_relay::{CMatrix, Complex64, DropPolicy, SystemConfig};
use hybrid_relay_sim::Engine;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

#[test]
fn hybrid_sinr_matches_materialized_relay() {
    for index in 0..100 {
        let (cfg, real) = common::instance(index);
        let proc = build_processor(&real, &cfg).unwrap();
        let o = common::hybrid(&real, &cfg);
        assert!(common::rel_err(proc.alpha, o.alpha) < 1e-10, "instance {index}: alpha");
        for k in 0..cfg.n_pairs {
            let got = sinr_exact(&real, &proc, &cfg, k).unwrap();
            let want = common::sinr(&o, &cfg, k);
            assert!(common::rel_err(got, want) < 1e-10, "instance {index} pair {k}: {got} vs {want}");
        }
    }
}

#[test]
fn full_digital_sinr_matches_materialized_relay() {
    for index in 0..100 {
        let (cfg, real) = common::instance(index);
        let fd = build_full_digital(&real, &cfg).unwrap();
        let o = common::full_digital(&real, &cfg);
        assert!(common::rel_err(fd.alpha, o.alpha) < 1e-10, "instance {index}: alpha");
        for k in 0..cfg.n_pairs {
            let got = sinr_full_digital(&real, &fd, &cfg, k).unwrap();
            let want = common::sinr(&o, &cfg, k);
            assert!(common::rel_err(got, want) < 1e-10, "instance {index} pair {k}");
        }
    }
}

#[test]
fn hybrid_with_one_chain_per_antenna_is_not_full_digital() {
    let cfg = SystemConfig { n_antennas: 4, n_pairs: 4, n_rx_chains: 4, n_tx_chains: 4, ..Default::default() };
    let real = hybrid_relay::channel::sample_realization(&cfg, 3).unwrap();
    let proc = build_processor(&real, &cfg).unwrap();
    let fd = build_full_digital(&real, &cfg).unwrap();
    let hybrid: Vec<f64> = (0..4).map(|k| sinr_exact(&real, &proc, &cfg, k).unwrap()).collect();
    let full: Vec<f64> = (0..4).map(|k| sinr_full_digital(&real, &fd, &cfg, k).unwrap()).collect();
    assert!(hybrid.iter().zip(&full).any(|(h, f)| common::rel_err(*h, *f) > 1e-6), "{hybrid:?} vs {full:?}");
}

#[test]
fn sinr_is_invariant_under_joint_power_scaling() {
    for index in 0..50 {
        let (cfg, real) = common::instance(index);
        let c = 10f64.powf((index % 7) as f64 - 3.0);
        let scaled = SystemConfig {
            p_user: cfg.p_user * c,
            p_relay: cfg.p_relay * c,
            var_relay_noise: cfg.var_relay_noise * c,
            var_dest_noise: cfg.var_dest_noise * c,
            ..cfg.clone()
        };
        let a = build_processor(&real, &cfg).unwrap();
        let b = build_processor(&real, &scaled).unwrap();
        for k in 0..cfg.n_pairs {
            let x = sinr_exact(&real, &a, &cfg, k).unwrap();
            let y = sinr_exact(&real, &b, &scaled, k).unwrap();
            assert!(common::rel_err(x, y) < 1e-10, "instance {index} pair {k}: {x} vs {y}");
        }
    }
}

#[test]
fn scaling_a_source_channel_column_leaves_analog_phases_alone() {
    let (cfg, real) = common::instance(11);
    let mut g1 = common::to_mat(&real.g1);
    for row in g1.iter_mut() {
        row[0] *= 3.5;
    }
    let before = common::analog(&common::to_mat(&real.g1), cfg.n_rx_chains, cfg.quant_bits);
    let after = common::analog(&g1, cfg.n_rx_chains, cfg.quant_bits);
    let lib = build_processor(&real, &cfg).unwrap();
    let scaled_eta: Vec<f64> = real.eta1.iter().enumerate().map(|(i, e)| if i == 0 { e * 12.25 } else { *e }).collect();
    let real2 = ChannelRealization::from_parts(real.h1.clone(), real.h2.clone(), scaled_eta, real.eta2.clone()).unwrap();
    let lib2 = build_processor(&real2, &cfg).unwrap();
    assert!(lib.f1.max_abs_diff(&lib2.f1) < 1e-15);
    for (r1, r2) in before.iter().zip(&after) {
        for (a, b) in r1.iter().zip(r2) {
            assert!((a - b).norm() < 1e-15);
        }
    }
}

fn draw(n: usize, k: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(n, k, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * s, im * s)
    })
}

#[test]
fn parallel_engine_agrees_with_straight_line_monte_carlo() {
    let n = 256;
    let trials = 500;
    let cfg = SystemConfig {
        n_antennas: n,
        p_user: 10f64.powf(1.3) / n as f64,
        p_relay: 10f64.powf(1.3),
        drop_policy: DropPolicy::Fixed,
        seed: 17,
        ..Default::default()
    };
    let engine = Engine::with_threads(4).unwrap();
    let lib = engine.monte_carlo_rate(&cfg, trials, Mode::Hybrid).unwrap();

    let (eta1, eta2) = fixed_drop(&cfg).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xfeed);
    let rates: Vec<f64> = (0..trials)
        .map(|_| {
            let h1 = draw(n, cfg.n_pairs, &mut rng);
            let h2 = draw(n, cfg.n_pairs, &mut rng);
            let real = ChannelRealization::from_parts(h1, h2, eta1.clone(), eta2.clone()).unwrap();
            let o = common::hybrid(&real, &cfg);
            0.5 * (0..cfg.n_pairs).map(|k| (1.0 + common::sinr(&o, &cfg, k)).log2()).sum::<f64>()
        })
        .collect();
    let mean = rates.iter().sum::<f64>() / trials as f64;
    let var = rates.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
    let se = (var / trials as f64 + lib.std_error.powi(2)).sqrt();
    assert!((mean - lib.mean_rate).abs() < 3.0 * se, "oracle {mean} vs engine {} (se {se})", lib.mean_rate);
}
