//! Scenario settings from a flat JSON file and command-line flags.
//!
//! The file is a JSON object of scalars and lists; every key has a flag of
//! the same name in kebab-case (`eu_db` ↔ `--eu-db`). Flags override file
//! values. Energies and powers are given in dB and converted to linear
//! with `10^(x/10)`; noise variances are linear. Unset system parameters
//! take the reference-scenario defaults: `K = K_r = K_t = 10`, unit noise
//! variances, 1000 m cell, 100 m guard zone, `ν = 3.8`, 8 dB shadowing.

use std::path::{Path, PathBuf};

use clap::Args;
use hybrid_relay::{DropPolicy, SystemConfig};
use log::info;
use serde_json::Value;

use crate::sweep::{EnergySpec, PowerCase, SweepMode, SweepSpec};

/// Bad command line or configuration; maps to exit code 2.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

impl UsageError {
    fn new(msg: impl Into<String>) -> Self {
        Self(msg.into())
    }
}

pub const DEFAULT_TRIALS: usize = 1000;
pub const DEFAULT_N: [usize; 4] = [64, 128, 256, 512];

pub fn parse_case(s: &str) -> Result<PowerCase, UsageError> {
    match s.trim().to_ascii_lowercase().as_str() {
        "1" | "case1" => Ok(PowerCase::Case1),
        "2" | "case2" => Ok(PowerCase::Case2),
        "3" | "case3" => Ok(PowerCase::Case3),
        "fixed" | "fixed_power" => Ok(PowerCase::Fixed),
        other => Err(UsageError::new(format!("unknown case {other:?} (expected 1, 2, 3 or fixed)"))),
    }
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty())
}

pub fn parse_usize_list(s: &str) -> Result<Vec<usize>, UsageError> {
    split_list(s)
        .map(|t| t.parse().map_err(|_| UsageError::new(format!("bad integer {t:?} in list {s:?}"))))
        .collect()
}

pub fn parse_beta(t: &str) -> Result<Option<u32>, UsageError> {
    match t.trim().to_ascii_lowercase().as_str() {
        "cont" | "continuous" => Ok(None),
        other => match other.parse::<u32>() {
            Ok(b) if b >= 1 => Ok(Some(b)),
            _ => Err(UsageError::new(format!("bad phase resolution {t:?} (expected cont or bits >= 1)"))),
        },
    }
}

pub fn parse_beta_list(s: &str) -> Result<Vec<Option<u32>>, UsageError> {
    split_list(s).map(parse_beta).collect()
}

pub fn parse_mode(t: &str) -> Result<SweepMode, UsageError> {
    match t.trim().to_ascii_lowercase().as_str() {
        "hybrid" => Ok(SweepMode::Hybrid),
        "full" | "full_digital" => Ok(SweepMode::FullDigital),
        "asym" | "asymptote" => Ok(SweepMode::Asymptote),
        other => Err(UsageError::new(format!("unknown mode {other:?} (expected hybrid, full or asym)"))),
    }
}

pub fn parse_modes(s: &str) -> Result<Vec<SweepMode>, UsageError> {
    split_list(s).map(parse_mode).collect()
}

/// Flags of the `simulate` subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct SimulateArgs {
    /// JSON settings file; flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Power-scaling case: 1, 2, 3 or fixed
    #[arg(long)]
    pub case: Option<String>,
    /// Antenna counts, comma separated and ascending
    #[arg(long)]
    pub n: Option<String>,
    /// Phase resolutions: cont or bit counts, comma separated
    #[arg(long)]
    pub beta: Option<String>,
    /// Any of hybrid, full, asym
    #[arg(long)]
    pub modes: Option<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// E_u = N·P_u in dB
    #[arg(long, allow_hyphen_values = true)]
    pub eu_db: Option<f64>,
    /// E_r = N·P_r in dB
    #[arg(long, allow_hyphen_values = true)]
    pub er_db: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub pu_db: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub pr_db: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Reuse one user drop for every trial
    #[arg(long)]
    pub fixed_drop: bool,
    #[arg(long)]
    pub drop_seed: Option<u64>,
    /// Number of source/destination pairs
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub kr: Option<usize>,
    #[arg(long)]
    pub kt: Option<usize>,
    #[arg(long)]
    pub var_relay_noise: Option<f64>,
    #[arg(long)]
    pub var_dest_noise: Option<f64>,
    #[arg(long)]
    pub cell_radius_m: Option<f64>,
    #[arg(long)]
    pub guard_radius_m: Option<f64>,
    #[arg(long)]
    pub pathloss_exp: Option<f64>,
    #[arg(long)]
    pub shadow_std_db: Option<f64>,
    /// CSV output path (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Optional gnuplot data file
    #[arg(long)]
    pub dat: Option<PathBuf>,
}

/// Every setting, each possibly unset.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawSettings {
    pub case: Option<PowerCase>,
    pub n: Option<Vec<usize>>,
    pub beta: Option<Vec<Option<u32>>>,
    pub modes: Option<Vec<SweepMode>>,
    pub trials: Option<usize>,
    pub eu_db: Option<f64>,
    pub er_db: Option<f64>,
    pub pu_db: Option<f64>,
    pub pr_db: Option<f64>,
    pub seed: Option<u64>,
    pub fixed_drop: Option<bool>,
    pub drop_seed: Option<u64>,
    pub k: Option<usize>,
    pub kr: Option<usize>,
    pub kt: Option<usize>,
    pub var_relay_noise: Option<f64>,
    pub var_dest_noise: Option<f64>,
    pub cell_radius_m: Option<f64>,
    pub guard_radius_m: Option<f64>,
    pub pathloss_exp: Option<f64>,
    pub shadow_std_db: Option<f64>,
    pub out: Option<PathBuf>,
    pub dat: Option<PathBuf>,
}

fn json_f64(key: &str, v: &Value) -> Result<f64, String> {
    v.as_f64().ok_or_else(|| format!("{key}: expected a number"))
}

fn json_u64(key: &str, v: &Value) -> Result<u64, String> {
    v.as_u64().ok_or_else(|| format!("{key}: expected a non-negative integer"))
}

fn json_usize(key: &str, v: &Value) -> Result<usize, String> {
    json_u64(key, v).map(|x| x as usize)
}

fn json_str(key: &str, v: &Value) -> Result<String, String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(format!("{key}: expected a string")),
    }
}

/// Lists may be JSON arrays or comma-separated strings.
fn json_list(key: &str, v: &Value) -> Result<String, String> {
    match v {
        Value::Array(items) => items
            .iter()
            .map(|i| json_str(key, i))
            .collect::<Result<Vec<_>, _>>()
            .map(|parts| parts.join(",")),
        other => json_str(key, other),
    }
}

impl RawSettings {
    pub fn from_json_str(text: &str) -> Result<Self, UsageError> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| UsageError::new(format!("settings file is not valid JSON: {e}")))?;
        Self::from_json(&value)
    }

    pub fn from_json(value: &Value) -> Result<Self, UsageError> {
        let obj = value
            .as_object()
            .ok_or_else(|| UsageError::new("settings file must hold a JSON object"))?;
        let mut s = RawSettings::default();
        let mut unknown = Vec::new();
        let mut problems = Vec::new();
        for (key, v) in obj {
            let res: Result<(), String> = (|| {
                match key.as_str() {
                    "case" => s.case = Some(parse_case(&json_str(key, v)?).map_err(|e| e.0)?),
                    "n" => s.n = Some(parse_usize_list(&json_list(key, v)?).map_err(|e| e.0)?),
                    "beta" => s.beta = Some(parse_beta_list(&json_list(key, v)?).map_err(|e| e.0)?),
                    "modes" => s.modes = Some(parse_modes(&json_list(key, v)?).map_err(|e| e.0)?),
                    "trials" => s.trials = Some(json_usize(key, v)?),
                    "eu_db" => s.eu_db = Some(json_f64(key, v)?),
                    "er_db" => s.er_db = Some(json_f64(key, v)?),
                    "pu_db" => s.pu_db = Some(json_f64(key, v)?),
                    "pr_db" => s.pr_db = Some(json_f64(key, v)?),
                    "seed" => s.seed = Some(json_u64(key, v)?),
                    "fixed_drop" => s.fixed_drop = Some(v.as_bool().ok_or("fixed_drop: expected true or false")?),
                    "drop_seed" => s.drop_seed = Some(json_u64(key, v)?),
                    "k" => s.k = Some(json_usize(key, v)?),
                    "kr" => s.kr = Some(json_usize(key, v)?),
                    "kt" => s.kt = Some(json_usize(key, v)?),
                    "var_relay_noise" => s.var_relay_noise = Some(json_f64(key, v)?),
                    "var_dest_noise" => s.var_dest_noise = Some(json_f64(key, v)?),
                    "cell_radius_m" => s.cell_radius_m = Some(json_f64(key, v)?),
                    "guard_radius_m" => s.guard_radius_m = Some(json_f64(key, v)?),
                    "pathloss_exp" => s.pathloss_exp = Some(json_f64(key, v)?),
                    "shadow_std_db" => s.shadow_std_db = Some(json_f64(key, v)?),
                    "out" => s.out = Some(PathBuf::from(json_str(key, v)?)),
                    "dat" => s.dat = Some(PathBuf::from(json_str(key, v)?)),
                    _ => unknown.push(key.clone()),
                }
                Ok(())
            })();
            if let Err(e) = res {
                problems.push(e);
            }
        }
        if !unknown.is_empty() {
            problems.insert(0, format!("unknown settings keys: {}", unknown.join(", ")));
        }
        if problems.is_empty() {
            Ok(s)
        } else {
            Err(UsageError::new(problems.join("; ")))
        }
    }

    pub fn from_args(a: &SimulateArgs) -> Result<Self, UsageError> {
        Ok(RawSettings {
            case: a.case.as_deref().map(parse_case).transpose()?,
            n: a.n.as_deref().map(parse_usize_list).transpose()?,
            beta: a.beta.as_deref().map(parse_beta_list).transpose()?,
            modes: a.modes.as_deref().map(parse_modes).transpose()?,
            trials: a.trials,
            eu_db: a.eu_db,
            er_db: a.er_db,
            pu_db: a.pu_db,
            pr_db: a.pr_db,
            seed: a.seed,
            fixed_drop: a.fixed_drop.then_some(true),
            drop_seed: a.drop_seed,
            k: a.k,
            kr: a.kr,
            kt: a.kt,
            var_relay_noise: a.var_relay_noise,
            var_dest_noise: a.var_dest_noise,
            cell_radius_m: a.cell_radius_m,
            guard_radius_m: a.guard_radius_m,
            pathloss_exp: a.pathloss_exp,
            shadow_std_db: a.shadow_std_db,
            out: a.out.clone(),
            dat: a.dat.clone(),
        })
    }

    /// `flags` over `self`; overridden values are logged.
    pub fn overridden_by(self, flags: RawSettings) -> RawSettings {
        macro_rules! pick {
            ($($field:ident),*) => {
                RawSettings {
                    $($field: match (self.$field, flags.$field) {
                        (Some(file), Some(flag)) => {
                            if file != flag {
                                info!(
                                    "flag --{} = {:?} overrides settings file value {:?}",
                                    stringify!($field).replace('_', "-"),
                                    flag,
                                    file
                                );
                            }
                            Some(flag)
                        }
                        (file, flag) => flag.or(file),
                    },)*
                }
            };
        }
        pick!(
            case, n, beta, modes, trials, eu_db, er_db, pu_db, pr_db, seed, fixed_drop, drop_seed, k, kr, kt,
            var_relay_noise, var_dest_noise, cell_radius_m, guard_radius_m, pathloss_exp, shadow_std_db, out, dat
        )
    }

    /// Applies defaults and checks requireds. All missing or invalid
    /// settings are reported together.
    pub fn resolve(&self) -> Result<Resolved, UsageError> {
        let defaults = SystemConfig::default();
        let Some(case) = self.case else {
            return Err(UsageError::new("missing required setting: case (1, 2, 3 or fixed)"));
        };
        let k = self.k.unwrap_or(defaults.n_pairs);
        let drop_policy = if self.fixed_drop.unwrap_or(false) { DropPolicy::Fixed } else { DropPolicy::RedrawPerTrial };
        let spec = SweepSpec {
            case,
            n_values: self.n.clone().unwrap_or_else(|| DEFAULT_N.to_vec()),
            beta_values: self.beta.clone().unwrap_or_else(|| vec![None]),
            modes: self.modes.clone().unwrap_or_else(|| vec![SweepMode::Hybrid, SweepMode::Asymptote]),
            trials: self.trials.unwrap_or(DEFAULT_TRIALS),
            energy: EnergySpec {
                e_user_db: self.eu_db,
                e_relay_db: self.er_db,
                p_user_db: self.pu_db,
                p_relay_db: self.pr_db,
            },
            drop_policy,
        };
        let config = SystemConfig {
            n_antennas: spec.n_values.first().copied().unwrap_or(defaults.n_antennas),
            n_pairs: k,
            n_rx_chains: self.kr.unwrap_or(k),
            n_tx_chains: self.kt.unwrap_or(k),
            var_relay_noise: self.var_relay_noise.unwrap_or(defaults.var_relay_noise),
            var_dest_noise: self.var_dest_noise.unwrap_or(defaults.var_dest_noise),
            cell_radius_m: self.cell_radius_m.unwrap_or(defaults.cell_radius_m),
            guard_radius_m: self.guard_radius_m.unwrap_or(defaults.guard_radius_m),
            pathloss_exp: self.pathloss_exp.unwrap_or(defaults.pathloss_exp),
            shadow_std_db: self.shadow_std_db.unwrap_or(defaults.shadow_std_db),
            seed: self.seed.unwrap_or(defaults.seed),
            drop_policy,
            drop_seed: self.drop_seed.unwrap_or(defaults.drop_seed),
            ..defaults
        };
        let mut problems = Vec::new();
        if let Err(e) = spec.validate() {
            problems.push(e);
        }
        for &n in &spec.n_values {
            let cell = spec.cell_config(&config, n, None);
            if let Err(e) = cell.validate() {
                problems.push(format!("N={n}: {e}"));
                break;
            }
        }
        if !problems.is_empty() {
            return Err(UsageError::new(problems.join("; ")));
        }
        Ok(Resolved { config, spec, out: self.out.clone(), dat: self.dat.clone() })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub config: SystemConfig,
    pub spec: SweepSpec,
    pub out: Option<PathBuf>,
    pub dat: Option<PathBuf>,
}

fn read_file(path: &Path) -> Result<RawSettings, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError::new(format!("cannot read settings file {}: {e}", path.display())))?;
    RawSettings::from_json_str(&text).map_err(|e| UsageError::new(format!("{}: {}", path.display(), e.0)))
}

/// Settings file (if any) overridden by flags, resolved into a run.
pub fn parse_config(args: &SimulateArgs) -> Result<Resolved, UsageError> {
    let file = match &args.config {
        Some(path) => read_file(path)?,
        None => RawSettings::default(),
    };
    file.overridden_by(RawSettings::from_args(args)?).resolve()
}
