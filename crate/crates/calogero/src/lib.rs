//! Batch front end for `calogero-core`: run configuration, the subcommands,
//! and their CSV / JSON output.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::time::Instant;

pub use commands::Report;
pub use config::{Command, Format, RunConfig};
pub use error::CliError;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "CALOGERO_THREADS";

/// A finished run.
#[derive(Debug, Clone)]
pub struct Outcome {
    /// The config with every default filled in.
    pub config: RunConfig,
    pub report: Report,
    /// Seconds.
    pub wall_time: f64,
}

impl Outcome {
    /// Exit status: 3 if any grid point failed, 0 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.report.failures.is_empty() {
            0
        } else {
            3
        }
    }

    /// The output file contents in the configured format.
    pub fn render(&self) -> String {
        match self.config.format() {
            Format::Csv => self.report.table.to_csv(),
            Format::Json => {
                let envelope = output::Envelope {
                    command: self.config.command().as_str(),
                    params: self.config.params_json(),
                    results: self.report.results.clone(),
                    library_version: env!("CARGO_PKG_VERSION"),
                    wall_time: self.wall_time,
                };
                let mut s = serde_json::to_string_pretty(&envelope).expect("JSON values serialize");
                s.push('\n');
                s
            }
        }
    }
}

/// Worker count from [`THREADS_ENV`], if set.
pub fn thread_limit() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::config(format!("{THREADS_ENV} must be a positive integer, got '{v}'"))),
        },
        Err(_) => Ok(None),
    }
}

/// Resolves defaults and runs the command on a pool sized by [`THREADS_ENV`].
pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    let resolved = commands::resolve(config)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_limit()? {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Numeric(format!("cannot start worker threads: {e}")))?;
    let start = Instant::now();
    let report = pool.install(|| commands::execute(&resolved))?;
    Ok(Outcome { config: resolved, report, wall_time: start.elapsed().as_secs_f64() })
}
