use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use housecast_api::{ServiceConfig, DEFAULT_PORT};
use housecast_core::models::parse_override;
use housecast_core::{run_forecast, Dataset, ForecastRequest};

#[derive(Parser)]
#[command(
    name = "housecast",
    version,
    about = "U.S. House seat forecasts from four regression models"
)]
struct Cli {
    /// Fixture directory holding dataset.toml and its CSV files.
    #[arg(long, global = true, env = "HOUSECAST_DATA_DIR")]
    data_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Load every fixture file and report the first violation.
    Validate,
    /// Run one model and print its document on stdout.
    Forecast {
        /// generic-ballot, npdi, structure-x or seats-in-trouble.
        model: String,
        /// Override a forecast input, e.g. `--set expert_weight=0`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Number of simulated elections (npdi only).
        #[arg(long)]
        sims: Option<usize>,
        /// Base seed for the simulation streams (npdi only).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Serve the JSON API and the bundled UI.
    Serve {
        #[arg(long, default_value_t = DEFAULT_PORT)]
        port: u16,
        /// Origin allowed to call the API cross-site; defaults to the
        /// service's own localhost origin.
        #[arg(long)]
        cors_origin: Option<String>,
        /// Request-handling threads.
        #[arg(long, default_value_t = 4)]
        workers: usize,
        /// Directory of UI assets served at `/`; the built-in page otherwise.
        #[arg(long)]
        ui_dir: Option<PathBuf>,
    },
}

fn load(data_dir: Option<PathBuf>) -> Result<Dataset, String> {
    let dir = data_dir.ok_or("no data directory: pass --data-dir or set HOUSECAST_DATA_DIR")?;
    Dataset::load(&dir).map_err(|e| format!("{}: {e}", dir.display()))
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Validate => {
            let ds = load(cli.data_dir)?;
            eprintln!(
                "ok: {} ({} polls, {} elections, {} districts, {} ratings) digest {}",
                ds.manifest.name,
                ds.polls.len(),
                ds.elections.len(),
                ds.districts.len(),
                ds.ratings.len(),
                ds.digest
            );
            Ok(())
        }
        Command::Forecast {
            model,
            overrides,
            format,
            sims,
            seed,
        } => {
            let ds = load(cli.data_dir)?;
            let mut request = ForecastRequest {
                model_id: model,
                overrides: Default::default(),
                n_sims: sims,
                seed,
            };
            for raw in &overrides {
                let (key, value) = parse_override(raw).map_err(|e| e.to_string())?;
                request.overrides.insert(key.to_owned(), value.into());
            }
            let doc = run_forecast(&ds, &request).map_err(|e| e.to_string())?;
            let text = match format {
                Format::Json => doc.to_json() + "\n",
                Format::Csv => doc.to_csv(),
            };
            std::io::stdout()
                .lock()
                .write_all(text.as_bytes())
                .map_err(|e| format!("writing output: {e}"))
        }
        Command::Serve {
            port,
            cors_origin,
            workers,
            ui_dir,
        } => {
            let ds = load(cli.data_dir)?;
            let config = ServiceConfig {
                port,
                workers,
                cors_origin: cors_origin.unwrap_or_else(|| format!("http://localhost:{port}")),
                ui_dir,
            };
            housecast_api::serve(ds, config).map_err(|e| e.to_string())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("housecast: {message}");
            ExitCode::FAILURE
        }
    }
}
