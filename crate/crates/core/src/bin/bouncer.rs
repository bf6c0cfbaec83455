use bouncer_revivals::runner;
use bouncer_revivals::ScenarioConfig;
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "bouncer",
    version,
    about = "Quantum bouncer revivals via entropic uncertainty products"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// JSON scenario file; every field is optional.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides `output.directory`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for the time scan.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Time scan: timeline.csv, minima.json, manifest.json.
    Scan(Common),
    /// Uncertainty bounds at selected times; nonzero exit on a violation.
    Check(Common),
    /// Basis dump: spectrum.json.
    Spectrum(Common),
    /// Position and momentum wavefunction at given times.
    Snapshot {
        #[command(flatten)]
        common: Common,
        /// Times to export (overrides `snapshot.times`).
        #[arg(long = "time", value_delimiter = ',')]
        times: Vec<f64>,
    },
}

fn setup(common: &Common) -> Result<(ScenarioConfig, PathBuf), bouncer_revivals::Error> {
    if let Some(n) = common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| bouncer_revivals::Error::Config(e.to_string()))?;
    }
    let config = match &common.config {
        Some(p) => ScenarioConfig::from_path(p)?,
        None => ScenarioConfig::default(),
    };
    let out = common
        .out
        .clone()
        .unwrap_or_else(|| config.output.directory.clone());
    Ok((config, out))
}

fn run(cli: Cli) -> Result<bool, bouncer_revivals::Error> {
    match cli.command {
        Command::Scan(common) => {
            let (config, out) = setup(&common)?;
            let run = runner::run_scan(&config, &out)?;
            for f in &run.files {
                println!("wrote {}", f.display());
            }
            Ok(true)
        }
        Command::Check(common) => {
            let (config, _) = setup(&common)?;
            let reports = runner::run_check(&config)?;
            print!("{}", runner::format_bound_table(&reports));
            let ok = reports.iter().all(|r| r.violations().next().is_none());
            if !ok {
                eprintln!("error: at least one uncertainty bound is violated");
            }
            Ok(ok)
        }
        Command::Spectrum(common) => {
            let (config, out) = setup(&common)?;
            let path = runner::run_spectrum(&config, &out)?;
            println!("wrote {}", path.display());
            Ok(true)
        }
        Command::Snapshot { common, times } => {
            let (config, out) = setup(&common)?;
            let times = if times.is_empty() {
                None
            } else {
                Some(times.as_slice())
            };
            for f in runner::run_snapshot(&config, &out, times)? {
                println!("wrote {}", f.display());
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
