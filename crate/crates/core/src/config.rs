//! Scenario parameters shared by every module.

use alloc::format;

use crate::error::{Error, Result};
use crate::hybrid::QuantizationSpec;

/// How user positions and shadowing evolve across Monte-Carlo trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DropPolicy {
    /// Distances and shadowing are redrawn for every trial.
    #[default]
    RedrawPerTrial,
    /// One drop, derived from [`SystemConfig::drop_seed`], is reused by all
    /// trials; only the small-scale fading changes.
    Fixed,
}

/// All scenario parameters. Powers and noise variances are linear.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub n_antennas: usize,
    pub n_pairs: usize,
    pub n_rx_chains: usize,
    pub n_tx_chains: usize,
    pub p_user: f64,
    pub p_relay: f64,
    pub var_relay_noise: f64,
    pub var_dest_noise: f64,
    /// Phase-shifter resolution in bits; `None` means continuous phases.
    pub quant_bits: Option<u32>,
    pub cell_radius_m: f64,
    pub guard_radius_m: f64,
    pub pathloss_exp: f64,
    pub shadow_std_db: f64,
    pub seed: u64,
    pub drop_policy: DropPolicy,
    /// Seed of the single drop used under [`DropPolicy::Fixed`].
    pub drop_seed: u64,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            n_antennas: 128,
            n_pairs: 10,
            n_rx_chains: 10,
            n_tx_chains: 10,
            p_user: 1.0,
            p_relay: 1.0,
            var_relay_noise: 1.0,
            var_dest_noise: 1.0,
            quant_bits: None,
            cell_radius_m: 1000.0,
            guard_radius_m: 100.0,
            pathloss_exp: 3.8,
            shadow_std_db: 8.0,
            seed: 0,
            drop_policy: DropPolicy::RedrawPerTrial,
            drop_seed: 0,
        }
    }
}

impl SystemConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: alloc::string::String| Err(Error::InvalidConfig(msg));
        if self.n_antennas == 0 || self.n_pairs == 0 || self.n_rx_chains == 0 || self.n_tx_chains == 0 {
            return bad(format!(
                "dimensions must be positive (N={}, K={}, K_r={}, K_t={})",
                self.n_antennas, self.n_pairs, self.n_rx_chains, self.n_tx_chains
            ));
        }
        if self.n_rx_chains > self.n_antennas || self.n_tx_chains > self.n_antennas {
            return bad(format!(
                "RF chains exceed antennas (K_r={}, K_t={}, N={})",
                self.n_rx_chains, self.n_tx_chains, self.n_antennas
            ));
        }
        if self.n_rx_chains > self.n_pairs || self.n_tx_chains > self.n_pairs {
            return bad(format!(
                "each RF chain is matched to one pair, so K_r={} and K_t={} must not exceed K={}",
                self.n_rx_chains, self.n_tx_chains, self.n_pairs
            ));
        }
        for (name, v) in [("p_user", self.p_user), ("p_relay", self.p_relay)] {
            if !v.is_finite() || v < 0.0 {
                return bad(format!("{name} must be finite and non-negative, got {v}"));
            }
        }
        for (name, v) in [("var_relay_noise", self.var_relay_noise), ("var_dest_noise", self.var_dest_noise)] {
            if !v.is_finite() || v <= 0.0 {
                return bad(format!("{name} must be finite and positive, got {v}"));
            }
        }
        if let Some(bits) = self.quant_bits {
            QuantizationSpec::new(bits).map_err(|e| Error::InvalidConfig(format!("{e}")))?;
        }
        if !(self.guard_radius_m.is_finite() && self.guard_radius_m > 0.0) {
            return bad(format!("guard radius must be positive, got {}", self.guard_radius_m));
        }
        if !(self.cell_radius_m.is_finite() && self.guard_radius_m < self.cell_radius_m) {
            return bad(format!(
                "guard radius {} must be below cell radius {}",
                self.guard_radius_m, self.cell_radius_m
            ));
        }
        if !self.pathloss_exp.is_finite() || !self.shadow_std_db.is_finite() || self.shadow_std_db < 0.0 {
            return bad(format!(
                "path-loss exponent and shadowing std must be finite (nu={}, sigma_sh={})",
                self.pathloss_exp, self.shadow_std_db
            ));
        }
        Ok(())
    }

    pub fn quantization(&self) -> Option<QuantizationSpec> {
        self.quant_bits.and_then(|b| QuantizationSpec::new(b).ok())
    }

    /// `min(K_r, K_t, K)`: the number of pairs that keep a dedicated RF chain.
    pub fn effective_pairs(&self) -> usize {
        self.n_rx_chains.min(self.n_tx_chains).min(self.n_pairs)
    }
}
