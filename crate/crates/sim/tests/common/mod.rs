//! Straight-line reference computations.
//!
//! Everything here works on nested `Vec`s with explicit loops and
//! materializes the full `N×N` relay matrix, so it shares no code path with
//! the library beyond the channel draw.

#![allow(dead_code)]

use std::f64::consts::PI;

use hybrid_relay::channel::ChannelRealization;
use hybrid_relay::{CMatrix, Complex64, SystemConfig};

pub type Mat = Vec<Vec<Complex64>>;

pub fn to_mat(m: &CMatrix) -> Mat {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)]).collect()).collect()
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let (n, m, p) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![Complex64::new(0.0, 0.0); p]; n];
    for i in 0..n {
        for j in 0..p {
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..m {
                acc += a[i][t] * b[t][j];
            }
            out[i][j] = acc;
        }
    }
    out
}

pub fn herm(a: &Mat) -> Mat {
    (0..a[0].len()).map(|j| (0..a.len()).map(|i| a[i][j].conj()).collect()).collect()
}

pub fn fro2(a: &Mat) -> f64 {
    a.iter().flatten().map(|z| z.norm_sqr()).sum()
}

pub fn scale(a: &Mat, s: f64) -> Mat {
    a.iter().map(|r| r.iter().map(|z| z * s).collect()).collect()
}

/// Nearest point of the uniform `2^bits` phase grid, ties rounding upward.
pub fn snap(phase: f64, bits: u32) -> f64 {
    let step = 2.0 * PI / 2f64.powi(bits as i32);
    (phase / step + 0.5).floor() * step
}

/// Phase-matched analog matrix: row `i` carries the conjugate phases of
/// column `i` of `g`, magnitude `1/√N`.
pub fn analog(g: &Mat, chains: usize, bits: Option<u32>) -> Mat {
    let n = g.len();
    let amp = 1.0 / (n as f64).sqrt();
    (0..chains)
        .map(|i| {
            (0..n)
                .map(|a| {
                    let z = g[a][i];
                    let mut phase = -z.im.atan2(z.re);
                    if let Some(b) = bits {
                        phase = snap(phase, b);
                    }
                    Complex64::new(amp * phase.cos(), amp * phase.sin())
                })
                .collect()
        })
        .collect()
}

/// Hybrid relay in materialized form.
pub struct HybridOracle {
    pub g1: Mat,
    pub g2: Mat,
    /// `α·F₂ᴴA₂A₁ᴴF₁`, `N×N`
    pub relay: Mat,
    pub alpha: f64,
}

pub fn hybrid(real: &ChannelRealization, cfg: &SystemConfig) -> HybridOracle {
    let g1 = to_mat(&real.g1);
    let g2 = to_mat(&real.g2);
    let f1 = analog(&g1, cfg.n_rx_chains, cfg.quant_bits);
    let f2 = analog(&g2, cfg.n_tx_chains, cfg.quant_bits);
    let a1 = matmul(&f1, &g1);
    let a2 = matmul(&f2, &g2);
    let unscaled = matmul(&matmul(&herm(&f2), &matmul(&a2, &herm(&a1))), &f1);
    let load = cfg.p_user * fro2(&matmul(&unscaled, &g1)) + cfg.var_relay_noise * fro2(&unscaled);
    let alpha = (cfg.p_relay / load).sqrt();
    HybridOracle { relay: scale(&unscaled, alpha), g1, g2, alpha }
}

/// Full-digital relay `α·G₂G₁ᴴ`, materialized.
pub fn full_digital(real: &ChannelRealization, cfg: &SystemConfig) -> HybridOracle {
    let g1 = to_mat(&real.g1);
    let g2 = to_mat(&real.g2);
    let unscaled = matmul(&g2, &herm(&g1));
    let load = cfg.p_user * fro2(&matmul(&unscaled, &g1)) + cfg.var_relay_noise * fro2(&unscaled);
    let alpha = (cfg.p_relay / load).sqrt();
    HybridOracle { relay: scale(&unscaled, alpha), g1, g2, alpha }
}

/// Average transmit power of the relay: `P_u‖T·G₁‖² + σ²_R‖T‖²`.
pub fn relay_power(o: &HybridOracle, cfg: &SystemConfig) -> f64 {
    cfg.p_user * fro2(&matmul(&o.relay, &o.g1)) + cfg.var_relay_noise * fro2(&o.relay)
}

/// SINR of pair `k`, summed term by term from the destination signal model.
pub fn sinr(o: &HybridOracle, cfg: &SystemConfig, k: usize) -> f64 {
    let n = o.g1.len();
    let pairs = o.g1[0].len();
    // row vector g₂ₖᴴ·T
    let row: Vec<Complex64> = (0..n)
        .map(|b| (0..n).map(|a| o.g2[a][k].conj() * o.relay[a][b]).sum())
        .collect();
    let coupling = |i: usize| -> Complex64 { (0..n).map(|b| row[b] * o.g1[b][i]).sum() };
    let desired = cfg.p_user * coupling(k).norm_sqr();
    let mut interference = 0.0;
    for i in 0..pairs {
        if i != k {
            interference += cfg.p_user * coupling(i).norm_sqr();
        }
    }
    let forwarded_noise = cfg.var_relay_noise * row.iter().map(|z| z.norm_sqr()).sum::<f64>();
    desired / (interference + forwarded_noise + cfg.var_dest_noise)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Seeded random system of at most 32 antennas and 4 pairs, with its
/// channel realization.
pub fn instance(index: u64) -> (SystemConfig, ChannelRealization) {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed ^ index);
    let pairs = rng.random_range(1..=4);
    let log_uniform = |rng: &mut rand_chacha::ChaCha8Rng, lo: f64, hi: f64| 10f64.powf(rng.random_range(lo..hi));
    let cfg = SystemConfig {
        n_antennas: rng.random_range(pairs.max(2)..=32),
        n_pairs: pairs,
        n_rx_chains: rng.random_range(1..=pairs),
        n_tx_chains: rng.random_range(1..=pairs),
        p_user: log_uniform(&mut rng, -2.0, 2.0),
        p_relay: log_uniform(&mut rng, -2.0, 2.0),
        var_relay_noise: log_uniform(&mut rng, -1.0, 1.0),
        var_dest_noise: log_uniform(&mut rng, -1.0, 1.0),
        quant_bits: match rng.random_range(0..5) {
            0 => None,
            b => Some(b),
        },
        seed: index,
        ..Default::default()
    };
    let real = hybrid_relay::channel::sample_realization(&cfg, index).expect("valid instance");
    (cfg, real)
}
