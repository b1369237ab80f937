//! Grid sweeps over antenna count, phase resolution and relay architecture.
//!
//! Powers follow the power-scaling case of the sweep:
//!
//! | case  | `P_u`      | `P_r`      |
//! |-------|------------|------------|
//! | 1     | `E_u / N`  | `E_r / N`  |
//! | 2     | `E_u / N`  | fixed      |
//! | 3     | fixed      | `E_r / N`  |
//! | fixed | fixed      | fixed      |
//!
//! Asymptote values come from the closed-form laws evaluated on the
//! large-scale coefficients of the drop, so they depend on neither the
//! trial count nor the small-scale seed. Under per-trial redraws the
//! asymptote is averaged over [`ASYMPTOTE_DROPS`] drops from `drop_seed`.

use anyhow::Result;
use hybrid_relay::asymptotics::{rate_case1, rate_case2, rate_case3, rate_fixed_power, AsymptoticInputs};
use hybrid_relay::channel::{drop_rng, fixed_drop, sample_large_scale};
use hybrid_relay::metrics::Mode;
use hybrid_relay::{DropPolicy, Error, SystemConfig};
use log::warn;

use crate::engine::Engine;
use crate::table::{ResultTable, Row};
use crate::units::db_to_linear;

/// Drops averaged for the asymptote under [`DropPolicy::RedrawPerTrial`].
pub const ASYMPTOTE_DROPS: usize = 4096;

/// Beta label used for full-digital rows, which have no phase shifters.
pub const NO_BETA: &str = "na";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerCase {
    Case1,
    Case2,
    Case3,
    Fixed,
}

impl PowerCase {
    pub fn label(&self) -> &'static str {
        match self {
            PowerCase::Case1 => "case1",
            PowerCase::Case2 => "case2",
            PowerCase::Case3 => "case3",
            PowerCase::Fixed => "fixed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SweepMode {
    Hybrid,
    FullDigital,
    Asymptote,
}

impl SweepMode {
    pub fn label(&self) -> &'static str {
        match self {
            SweepMode::Hybrid => "hybrid",
            SweepMode::FullDigital => "full_digital",
            SweepMode::Asymptote => "asymptote",
        }
    }
}

/// Scenario energies/powers in dB. Which ones are required depends on the case.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EnergySpec {
    pub e_user_db: Option<f64>,
    pub e_relay_db: Option<f64>,
    pub p_user_db: Option<f64>,
    pub p_relay_db: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub case: PowerCase,
    pub n_values: Vec<usize>,
    /// `None` is continuous phases.
    pub beta_values: Vec<Option<u32>>,
    pub modes: Vec<SweepMode>,
    pub trials: usize,
    pub energy: EnergySpec,
    pub drop_policy: DropPolicy,
}

pub fn beta_label(beta: Option<u32>) -> String {
    beta.map_or_else(|| "cont".to_owned(), |b| b.to_string())
}

impl SweepSpec {
    /// Names of the energy fields this case needs but lacks.
    pub fn missing_energies(&self) -> Vec<&'static str> {
        let e = &self.energy;
        let need: &[(&str, Option<f64>)] = match self.case {
            PowerCase::Case1 => &[("eu_db", e.e_user_db), ("er_db", e.e_relay_db)],
            PowerCase::Case2 => &[("eu_db", e.e_user_db), ("pr_db", e.p_relay_db)],
            PowerCase::Case3 => &[("pu_db", e.p_user_db), ("er_db", e.e_relay_db)],
            PowerCase::Fixed => &[("pu_db", e.p_user_db), ("pr_db", e.p_relay_db)],
        };
        need.iter().filter(|(_, v)| v.is_none()).map(|(k, _)| *k).collect()
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        let mut problems = Vec::new();
        let missing = self.missing_energies();
        if !missing.is_empty() {
            problems.push(format!("{} requires {}", self.case.label(), missing.join(", ")));
        }
        if self.n_values.is_empty() {
            problems.push("no antenna counts given".to_owned());
        }
        if self.n_values.windows(2).any(|w| w[1] <= w[0]) {
            problems.push("antenna counts must be strictly ascending".to_owned());
        }
        if self.beta_values.is_empty() {
            problems.push("no phase resolutions given".to_owned());
        }
        if self.modes.is_empty() {
            problems.push("no modes given".to_owned());
        }
        let simulates = self.modes.iter().any(|m| *m != SweepMode::Asymptote);
        if simulates && self.trials < 2 {
            problems.push(format!("trials must be at least 2, got {}", self.trials));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(problems.join("; "))
        }
    }

    /// `(P_u, P_r)` in linear units at `n` antennas.
    pub fn powers_at(&self, n: usize) -> (f64, f64) {
        let n = n as f64;
        let e = &self.energy;
        let lin = |v: Option<f64>| v.map(db_to_linear).unwrap_or(0.0);
        match self.case {
            PowerCase::Case1 => (lin(e.e_user_db) / n, lin(e.e_relay_db) / n),
            PowerCase::Case2 => (lin(e.e_user_db) / n, lin(e.p_relay_db)),
            PowerCase::Case3 => (lin(e.p_user_db), lin(e.e_relay_db) / n),
            PowerCase::Fixed => (lin(e.p_user_db), lin(e.p_relay_db)),
        }
    }

    /// Config of one grid cell.
    pub fn cell_config(&self, base: &SystemConfig, n: usize, beta: Option<u32>) -> SystemConfig {
        let (p_user, p_relay) = self.powers_at(n);
        SystemConfig {
            n_antennas: n,
            p_user,
            p_relay,
            quant_bits: beta,
            drop_policy: self.drop_policy,
            ..base.clone()
        }
    }
}

fn closed_form(case: PowerCase, inputs: &AsymptoticInputs, n: usize) -> hybrid_relay::Result<f64> {
    match case {
        PowerCase::Case1 => rate_case1(inputs),
        PowerCase::Case2 => rate_case2(inputs),
        PowerCase::Case3 => rate_case3(inputs),
        PowerCase::Fixed => rate_fixed_power(inputs, n),
    }
}

/// Closed-form asymptote of one `(N, β)` cell.
pub fn asymptote_rate(spec: &SweepSpec, cell: &SystemConfig) -> hybrid_relay::Result<f64> {
    match spec.drop_policy {
        DropPolicy::Fixed => {
            let (eta1, eta2) = fixed_drop(cell)?;
            closed_form(spec.case, &AsymptoticInputs::from_config(cell, eta1, eta2), cell.n_antennas)
        }
        DropPolicy::RedrawPerTrial => {
            let mut rng = drop_rng(cell.drop_seed);
            let mut total = 0.0;
            for _ in 0..ASYMPTOTE_DROPS {
                let (eta1, eta2) = sample_large_scale(cell, &mut rng)?;
                total += closed_form(spec.case, &AsymptoticInputs::from_config(cell, eta1, eta2), cell.n_antennas)?;
            }
            Ok(total / ASYMPTOTE_DROPS as f64)
        }
    }
}

fn simulated_row(
    spec: &SweepSpec,
    engine: &Engine,
    cell: &SystemConfig,
    mode: Mode,
    beta: &str,
    asymptote: Option<f64>,
) -> Result<Row> {
    let sweep_mode = match mode {
        Mode::Hybrid => SweepMode::Hybrid,
        Mode::FullDigital => SweepMode::FullDigital,
    };
    let mut row = Row {
        case: spec.case.label().to_owned(),
        n: cell.n_antennas,
        beta: beta.to_owned(),
        mode: sweep_mode.label().to_owned(),
        mean_rate: f64::NAN,
        std_err: f64::NAN,
        trials: 0,
        asymptote_rate: asymptote,
        degenerate_trials: 0,
    };
    match engine.monte_carlo_rate(cell, spec.trials, mode) {
        Ok(p) => {
            row.mean_rate = p.mean_rate;
            row.std_err = p.std_error;
            row.trials = p.n_trials;
            row.degenerate_trials = p.degenerate_trials;
        }
        Err(Error::TooManyDegenerate { degenerate, total }) => {
            warn!(
                "{} N={} beta={} {}: {degenerate}/{total} degenerate trials, cell left empty",
                row.case, row.n, row.beta, row.mode
            );
            row.trials = total - degenerate;
            row.degenerate_trials = degenerate;
        }
        Err(e) => return Err(e.into()),
    }
    Ok(row)
}

/// Runs every `(N, β, mode)` cell. Rows are ordered by `N`, then `β` (with
/// hybrid before asymptote), then the β-independent full-digital row.
pub fn run_sweep(spec: &SweepSpec, base: &SystemConfig, engine: &Engine) -> Result<ResultTable> {
    spec.validate().map_err(anyhow::Error::msg)?;
    let mut rows = Vec::new();
    let has = |m: SweepMode| spec.modes.contains(&m);
    for &n in &spec.n_values {
        for &beta in &spec.beta_values {
            let cell = spec.cell_config(base, n, beta);
            cell.validate()?;
            let label = beta_label(beta);
            let asymptote = if has(SweepMode::Hybrid) || has(SweepMode::Asymptote) {
                Some(asymptote_rate(spec, &cell)?)
            } else {
                None
            };
            if has(SweepMode::Hybrid) {
                rows.push(simulated_row(spec, engine, &cell, Mode::Hybrid, &label, asymptote)?);
            }
            if let (true, Some(a)) = (has(SweepMode::Asymptote), asymptote) {
                rows.push(Row {
                    case: spec.case.label().to_owned(),
                    n,
                    beta: label.clone(),
                    mode: SweepMode::Asymptote.label().to_owned(),
                    mean_rate: a,
                    std_err: 0.0,
                    trials: 0,
                    asymptote_rate: Some(a),
                    degenerate_trials: 0,
                });
            }
        }
        if has(SweepMode::FullDigital) {
            let cell = spec.cell_config(base, n, None);
            rows.push(simulated_row(spec, engine, &cell, Mode::FullDigital, NO_BETA, None)?);
        }
    }
    Ok(ResultTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(case: PowerCase) -> SweepSpec {
        SweepSpec {
            case,
            n_values: vec![16, 32],
            beta_values: vec![None, Some(2)],
            modes: vec![SweepMode::Hybrid, SweepMode::FullDigital, SweepMode::Asymptote],
            trials: 8,
            energy: EnergySpec {
                e_user_db: Some(13.0),
                e_relay_db: Some(13.0),
                p_user_db: Some(13.0),
                p_relay_db: Some(13.0),
            },
            drop_policy: DropPolicy::Fixed,
        }
    }

    fn base() -> SystemConfig {
        SystemConfig { n_pairs: 4, n_rx_chains: 4, n_tx_chains: 4, ..Default::default() }
    }

    #[test]
    fn power_mapping_per_case() {
        let e = 10f64.powf(1.3);
        assert_eq!(spec(PowerCase::Case1).powers_at(64), (e / 64.0, e / 64.0));
        assert_eq!(spec(PowerCase::Case2).powers_at(64), (e / 64.0, e));
        assert_eq!(spec(PowerCase::Case3).powers_at(64), (e, e / 64.0));
        assert_eq!(spec(PowerCase::Fixed).powers_at(64), (e, e));
    }

    #[test]
    fn missing_energies_reported() {
        let mut s = spec(PowerCase::Case3);
        s.energy = EnergySpec { e_user_db: Some(1.0), ..Default::default() };
        assert_eq!(s.missing_energies(), vec!["pu_db", "er_db"]);
        let err = s.validate().unwrap_err();
        assert!(err.contains("pu_db") && err.contains("er_db"), "{err}");
    }

    #[test]
    fn rejects_unsorted_antennas() {
        let mut s = spec(PowerCase::Case1);
        s.n_values = vec![64, 32];
        assert!(s.validate().is_err());
    }

    #[test]
    fn row_layout() {
        let engine = Engine::with_threads(2).unwrap();
        let t = run_sweep(&spec(PowerCase::Case2), &base(), &engine).unwrap();
        let keys: Vec<(usize, &str, &str)> = t.rows.iter().map(|r| (r.n, r.beta.as_str(), r.mode.as_str())).collect();
        assert_eq!(
            keys,
            vec![
                (16, "cont", "hybrid"),
                (16, "cont", "asymptote"),
                (16, "2", "hybrid"),
                (16, "2", "asymptote"),
                (16, "na", "full_digital"),
                (32, "cont", "hybrid"),
                (32, "cont", "asymptote"),
                (32, "2", "hybrid"),
                (32, "2", "asymptote"),
                (32, "na", "full_digital"),
            ]
        );
        for r in &t.rows {
            assert!(r.mean_rate.is_finite());
            if r.mode == "hybrid" {
                assert_eq!(r.trials, 8);
            }
        }
    }

    #[test]
    fn asymptote_only_sweep_equals_closed_form() {
        let mut s = spec(PowerCase::Case2);
        s.n_values = vec![64];
        s.beta_values = vec![None];
        s.modes = vec![SweepMode::Asymptote];
        s.trials = 0;
        let engine = Engine::with_threads(1).unwrap();
        let t = run_sweep(&s, &base(), &engine).unwrap();
        assert_eq!(t.rows.len(), 1);
        let cell = s.cell_config(&base(), 64, None);
        let (eta1, eta2) = fixed_drop(&cell).unwrap();
        let expected = rate_case2(&AsymptoticInputs::from_config(&cell, eta1, eta2)).unwrap();
        assert_eq!(t.rows[0].mean_rate, expected);
        assert_eq!(t.rows[0].trials, 0);
    }

    #[test]
    fn asymptote_ignores_seed_and_trials() {
        let engine = Engine::with_threads(2).unwrap();
        for policy in [DropPolicy::Fixed, DropPolicy::RedrawPerTrial] {
            let mut s = spec(PowerCase::Case1);
            s.drop_policy = policy;
            s.modes = vec![SweepMode::Hybrid, SweepMode::Asymptote];
            let a = run_sweep(&s, &base(), &engine).unwrap();
            s.trials = 5;
            let b = run_sweep(&s, &SystemConfig { seed: 1234, ..base() }, &engine).unwrap();
            let asym = |t: &ResultTable| t.rows.iter().map(|r| r.asymptote_rate).collect::<Vec<_>>();
            assert_eq!(asym(&a), asym(&b));
        }
    }
}
