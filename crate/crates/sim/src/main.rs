use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use hybrid_relay::SystemConfig;
use hybrid_relay_sim::engine::Engine;
use hybrid_relay_sim::lemmas::{emit_lemma_csv, lemma_rows, summarize_lemmas, write_lemma_csv};
use hybrid_relay_sim::settings::{parse_beta_list, parse_config, parse_usize_list, SimulateArgs};
use hybrid_relay_sim::{run_sweep, UsageError};
use log::info;

#[derive(Debug, Parser)]
#[command(name = "relaysim", version, about = "Hybrid analog/digital massive-MIMO relay simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Monte-Carlo and closed-form spectral efficiency over an (N, beta, mode) grid
    Simulate(Box<SimulateArgs>),
    /// Check the large-N convergence of the analog stage over many seeds
    VerifyLemmas(VerifyArgs),
}

#[derive(Debug, clap::Args)]
struct VerifyArgs {
    /// Antenna counts, comma separated and ascending
    #[arg(long, default_value = "100,1000,10000")]
    n: String,
    /// Number of seeds per antenna count
    #[arg(long, default_value_t = 50)]
    seeds: u64,
    /// Phase resolutions: cont or bit counts
    #[arg(long, default_value = "cont,1,2,3")]
    beta: String,
    /// RF chains (and pairs) per side
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// First seed of the family
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output path (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn simulate(args: &SimulateArgs) -> Result<()> {
    let run = parse_config(args)?;
    let engine = Engine::from_env()?;
    info!(
        "{} sweep: N={:?}, {} trials, {} workers",
        run.spec.case.label(),
        run.spec.n_values,
        run.spec.trials,
        engine.threads()
    );
    let table = run_sweep(&run.spec, &run.config, &engine)?;
    match &run.out {
        Some(path) => table.emit_csv(path)?,
        None => table.write_csv(std::io::stdout().lock())?,
    }
    if let Some(dat) = &run.dat {
        table.emit_dat(dat)?;
    }
    Ok(())
}

fn verify_lemmas(args: &VerifyArgs) -> Result<()> {
    let n_list = parse_usize_list(&args.n)?;
    if n_list.is_empty() || n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(UsageError(format!("--n must be a non-empty ascending list, got {:?}", args.n)).into());
    }
    if args.seeds == 0 {
        return Err(UsageError("--seeds must be positive".into()).into());
    }
    let betas = parse_beta_list(&args.beta)?;
    if betas.is_empty() {
        return Err(UsageError("--beta is empty".into()).into());
    }
    let base = SystemConfig { n_pairs: args.k, n_rx_chains: args.k, n_tx_chains: args.k, ..Default::default() };
    for &n in &n_list {
        SystemConfig { n_antennas: n, ..base.clone() }
            .validate()
            .map_err(|e| UsageError(format!("N={n}: {e}")))?;
    }
    let seeds: Vec<u64> = (0..args.seeds).map(|i| args.seed + i).collect();
    let engine = Engine::from_env()?;
    let rows = lemma_rows(&n_list, &seeds, &betas, &base, &engine)?;
    match &args.out {
        Some(path) => emit_lemma_csv(&rows, path)?,
        None => write_lemma_csv(&rows, std::io::stdout().lock())?,
    }
    let checks = summarize_lemmas(&rows, &betas);
    let mut err = std::io::stderr().lock();
    let mut failed = 0;
    for c in &checks {
        let verdict = if c.passed() { "PASS" } else { "FAIL" };
        writeln!(err, "{verdict} {} = {:.6} (allowed [{}, {}])", c.name, c.value, c.lo, c.hi)?;
        failed += usize::from(!c.passed());
    }
    anyhow::ensure!(failed == 0, "{failed} of {} lemma checks failed", checks.len());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Simulate(args) => simulate(args).context("simulate"),
        Command::VerifyLemmas(args) => verify_lemmas(args).context("verify-lemmas"),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.chain().any(|c| c.is::<UsageError>()) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
