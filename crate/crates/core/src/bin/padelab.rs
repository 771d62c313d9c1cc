use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use padelab::expcli::{exit_code, run_experiment, Experiment, ExperimentConfig};
use padelab::Error;

/// Rational approximation experiments: Padé, Hermite–Padé, Frobenius and
/// equilibrium checks.
#[derive(Debug, Parser)]
#[command(name = "padelab", version)]
struct Cli {
    /// fig-hp, fig-che, markov-demo, prop1-check, classl-check,
    /// equilibrium-check or interp-demo
    experiment: String,
    /// JSON configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated orders, overriding the config.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long)]
    bits: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Allow orders beyond the desk-scale limit.
    #[arg(long)]
    large: bool,
}

fn load(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let experiment: Experiment = cli.experiment.parse()?;
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            ExperimentConfig::from_json(&text)?
        }
        None => ExperimentConfig::default(),
    };
    match cfg.experiment {
        Some(e) if e != experiment => {
            return Err(Error::Config(format!("config is for {e}, command line asks for {experiment}")));
        }
        _ => cfg.experiment = Some(experiment),
    }
    if cli.n.is_some() {
        cfg.n = cli.n.clone();
    }
    if cli.bits.is_some() {
        cfg.bits = cli.bits;
    }
    if cli.out.is_some() {
        cfg.out = cli.out.clone();
    }
    cfg.large |= cli.large;
    Ok(cfg)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(threads) = std::env::var("PADELAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build_global() {
            log::warn!("could not size the worker pool: {e}");
        }
    }
    let result = load(&cli).and_then(run_experiment);
    match result {
        Ok(manifest) => {
            println!("{} files written for {}", manifest.files.len(), manifest.experiment);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("padelab: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
