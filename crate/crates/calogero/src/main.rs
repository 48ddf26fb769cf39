use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use calogero::{run, CliError, Command, RunConfig};
use clap::{Args, Parser, Subcommand};

/// 1-RDM spectra and entanglement entropies of the two-particle Calogero model.
#[derive(Parser)]
#[command(name = "calogero", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// 1D spectrum at one ν (variational, or exact with --exact).
    #[command(name = "spectrum1d")]
    Spectrum1d(Params),
    /// Isotropic 2D spectrum at one ν.
    #[command(name = "spectrum2d")]
    Spectrum2d(Params),
    /// Entropy curves over a ν grid.
    #[command(name = "scan-renyi")]
    ScanRenyi(Params),
    /// Non-analyticity classification and tail-exponent fit at a special ν.
    #[command(name = "classify")]
    Classify(Params),
    /// Closed-form harmonic-approximation entropies over ε.
    #[command(name = "ha-entropies")]
    HaEntropies(Params),
    /// Entropy of the N largest harmonic-approximation eigenvalues over ε − 1.
    #[command(name = "ha-truncated")]
    HaTruncated(Params),
    /// Variational relative energies and their ε-derivative diagnostic.
    #[command(name = "crossover")]
    Crossover(Params),
    /// 2D fermion entropy over β² for β ψ₊ + √(1−β²) ψ₋.
    #[command(name = "beta-sweep")]
    BetaSweep(Params),
}

/// Every flag mirrors the config key of the same name (dashes for
/// underscores); flags override the config file.
#[derive(Args, Default)]
struct Params {
    /// key = value file applied before the flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Output file; stdout if omitted.
    #[arg(long, short)]
    output: Option<String>,
    #[arg(long)]
    statistics: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    dimension: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<String>,
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    state: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long)]
    basis: Option<String>,
    #[arg(long)]
    quadrature: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    nu_min: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    nu_max: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    nu_step: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    nu_n: Option<String>,
    /// Comma-separated orders; 1 is von Neumann, inf is the min-entropy.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    offsets: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    tail_offsets: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    band: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    noise: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    delta_min: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    delta_max: Option<String>,
    #[arg(long)]
    points: Option<String>,
    #[arg(long)]
    asymptote: bool,
    #[arg(long)]
    truncation: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    nu_strength: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    delta_eps: Option<String>,
}

impl Params {
    fn overrides(&self) -> Vec<(&'static str, String)> {
        let options = [
            ("format", &self.format),
            ("output", &self.output),
            ("statistics", &self.statistics),
            ("dimension", &self.dimension),
            ("nu", &self.nu),
            ("state", &self.state),
            ("beta", &self.beta),
            ("basis", &self.basis),
            ("quadrature", &self.quadrature),
            ("nu_min", &self.nu_min),
            ("nu_max", &self.nu_max),
            ("nu_step", &self.nu_step),
            ("nu_n", &self.nu_n),
            ("alpha", &self.alpha),
            ("offsets", &self.offsets),
            ("tail_offsets", &self.tail_offsets),
            ("band", &self.band),
            ("noise", &self.noise),
            ("epsilon", &self.epsilon),
            ("delta_min", &self.delta_min),
            ("delta_max", &self.delta_max),
            ("points", &self.points),
            ("truncation", &self.truncation),
            ("nu_strength", &self.nu_strength),
            ("delta_eps", &self.delta_eps),
        ];
        let mut out: Vec<(&'static str, String)> =
            options.into_iter().filter_map(|(k, v)| v.clone().map(|v| (k, v))).collect();
        if self.exact {
            out.push(("exact", "true".into()));
        }
        if self.asymptote {
            out.push(("asymptote", "true".into()));
        }
        out
    }
}

fn build_config(sub: &Sub) -> Result<RunConfig, CliError> {
    let (command, params) = match sub {
        Sub::Spectrum1d(p) => (Command::Spectrum1d, p),
        Sub::Spectrum2d(p) => (Command::Spectrum2d, p),
        Sub::ScanRenyi(p) => (Command::ScanRenyi, p),
        Sub::Classify(p) => (Command::Classify, p),
        Sub::HaEntropies(p) => (Command::HaEntropies, p),
        Sub::HaTruncated(p) => (Command::HaTruncated, p),
        Sub::Crossover(p) => (Command::Crossover, p),
        Sub::BetaSweep(p) => (Command::BetaSweep, p),
    };
    let mut config = RunConfig::new(command);
    if let Some(path) = &params.config {
        config.merge_file(path)?;
    }
    for (k, v) in params.overrides() {
        config.set(k, &v)?;
    }
    Ok(config)
}

fn main_inner(cli: Cli) -> Result<i32, CliError> {
    let config = build_config(&cli.command)?;
    let outcome = run(&config)?;
    for w in &outcome.report.warnings {
        eprintln!("warning: {w}");
    }
    for f in &outcome.report.failures {
        eprintln!("failed: {f}");
    }
    let text = outcome.render();
    match outcome.config.output() {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))?
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            // A closed pipe is not a computation failure.
            let _ = stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush());
        }
    }
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
