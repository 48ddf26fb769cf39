//! Run configuration: `key = value` files merged with command-line overrides.
//!
//! Every key has one value type and a set of commands it applies to. Parsing
//! rejects unknown keys, keys that do not apply to the command and malformed
//! values. [`RunConfig::canonical`] writes the keys in table order with
//! shortest round-trip number formatting, so parsing the canonical text gives
//! back an identical config.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use calogero_core::Statistics;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Command {
    Spectrum1d,
    Spectrum2d,
    ScanRenyi,
    Classify,
    HaEntropies,
    HaTruncated,
    Crossover,
    BetaSweep,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Spectrum1d,
        Command::Spectrum2d,
        Command::ScanRenyi,
        Command::Classify,
        Command::HaEntropies,
        Command::HaTruncated,
        Command::Crossover,
        Command::BetaSweep,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Spectrum1d => "spectrum1d",
            Command::Spectrum2d => "spectrum2d",
            Command::ScanRenyi => "scan-renyi",
            Command::Classify => "classify",
            Command::HaEntropies => "ha-entropies",
            Command::HaTruncated => "ha-truncated",
            Command::Crossover => "crossover",
            Command::BetaSweep => "beta-sweep",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| CliError::config(format!("unknown command '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Value types of config keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Real,
    Count,
    Flag,
    Word(&'static [&'static str]),
    Reals,
    Counts,
    Path,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Real(f64),
    Count(usize),
    Flag(bool),
    Word(String),
    Reals(Vec<f64>),
    Counts(Vec<usize>),
    Path(PathBuf),
}

impl Value {
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            Value::Real(x) => real_json(*x),
            Value::Count(n) => json!(n),
            Value::Flag(b) => json!(b),
            Value::Word(w) => json!(w),
            Value::Reals(xs) => serde_json::Value::Array(xs.iter().map(|x| real_json(*x)).collect()),
            Value::Counts(ns) => json!(ns),
            Value::Path(p) => json!(p.display().to_string()),
        }
    }
}

/// Finite reals as JSON numbers; `inf` is written as the string `"inf"`.
pub fn real_json(x: f64) -> serde_json::Value {
    if x.is_finite() {
        serde_json::json!(x)
    } else {
        serde_json::json!(format_real(x))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Real(x) => f.write_str(&format_real(*x)),
            Value::Count(n) => write!(f, "{n}"),
            Value::Flag(b) => write!(f, "{b}"),
            Value::Word(w) => f.write_str(w),
            Value::Reals(xs) => f.write_str(&xs.iter().map(|x| format_real(*x)).collect::<Vec<_>>().join(",")),
            Value::Counts(ns) => f.write_str(&ns.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")),
            Value::Path(p) => write!(f, "{}", p.display()),
        }
    }
}

/// Shortest round-trip decimal; infinities as `inf` / `-inf`.
pub fn format_real(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:?}")
    }
}

fn parse_real(key: &str, s: &str) -> Result<f64, CliError> {
    let t = s.trim();
    let x = match t {
        "inf" | "+inf" | "infinity" => f64::INFINITY,
        "-inf" | "-infinity" => f64::NEG_INFINITY,
        _ => t
            .parse::<f64>()
            .ok()
            .filter(|x| !x.is_nan() && !x.is_infinite())
            .ok_or_else(|| CliError::config(format!("{key}: '{s}' is not a number")))?,
    };
    Ok(x)
}

fn parse_count(key: &str, s: &str) -> Result<usize, CliError> {
    s.trim().parse::<usize>().map_err(|_| CliError::config(format!("{key}: '{s}' is not a non-negative integer")))
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty())
}

struct KeySpec {
    name: &'static str,
    kind: Kind,
    commands: &'static [Command],
    help: &'static str,
}

use Command::*;

const ALL_COMMANDS: &[Command] = &Command::ALL;
const STATISTICS: &[&str] = &["boson", "fermion"];
const STATES: &[&str] = &["plus", "minus", "x", "y", "lc"];
const FORMATS: &[&str] = &["csv", "json"];

/// Canonical key order.
const KEYS: &[KeySpec] = &[
    KeySpec { name: "format", kind: Kind::Word(FORMATS), commands: ALL_COMMANDS, help: "output format" },
    KeySpec { name: "output", kind: Kind::Path, commands: ALL_COMMANDS, help: "output file (stdout if unset)" },
    KeySpec {
        name: "statistics",
        kind: Kind::Word(STATISTICS),
        commands: &[Spectrum1d, Spectrum2d, ScanRenyi, Classify],
        help: "boson or fermion",
    },
    KeySpec { name: "dimension", kind: Kind::Count, commands: &[ScanRenyi], help: "1 or 2" },
    KeySpec {
        name: "nu",
        kind: Kind::Real,
        commands: &[Spectrum1d, Spectrum2d, BetaSweep],
        help: "interaction parameter ν",
    },
    KeySpec {
        name: "exact",
        kind: Kind::Flag,
        commands: &[Spectrum1d, ScanRenyi],
        help: "use the exact finite-support route",
    },
    KeySpec { name: "state", kind: Kind::Word(STATES), commands: &[Spectrum2d, ScanRenyi], help: "2D fermion state" },
    KeySpec { name: "beta", kind: Kind::Real, commands: &[Spectrum2d, ScanRenyi], help: "β of the lc state" },
    KeySpec {
        name: "basis",
        kind: Kind::Count,
        commands: &[Spectrum1d, Spectrum2d, ScanRenyi, Classify, Crossover, BetaSweep],
        help: "basis size",
    },
    KeySpec {
        name: "quadrature",
        kind: Kind::Count,
        commands: &[Spectrum1d, ScanRenyi, Classify],
        help: "quadrature order (1D)",
    },
    KeySpec { name: "nu_min", kind: Kind::Real, commands: &[ScanRenyi], help: "first ν of the scan" },
    KeySpec { name: "nu_max", kind: Kind::Real, commands: &[ScanRenyi], help: "last ν of the scan" },
    KeySpec { name: "nu_step", kind: Kind::Real, commands: &[ScanRenyi], help: "ν step" },
    KeySpec { name: "nu_n", kind: Kind::Real, commands: &[Classify], help: "finite-support point" },
    KeySpec {
        name: "alpha",
        kind: Kind::Reals,
        commands: &[Spectrum1d, Spectrum2d, ScanRenyi, Classify, HaEntropies],
        help: "Rényi orders (1 = von Neumann, inf = min)",
    },
    KeySpec { name: "offsets", kind: Kind::Reals, commands: &[Classify], help: "halving finite-difference offsets" },
    KeySpec { name: "tail_offsets", kind: Kind::Reals, commands: &[Classify], help: "tail-fit offsets" },
    KeySpec { name: "band", kind: Kind::Real, commands: &[Classify], help: "exponent band half-width" },
    KeySpec { name: "noise", kind: Kind::Real, commands: &[Classify], help: "entropy noise level" },
    KeySpec { name: "epsilon", kind: Kind::Reals, commands: &[HaEntropies, Crossover], help: "anisotropy grid" },
    KeySpec { name: "delta_min", kind: Kind::Real, commands: &[HaEntropies, HaTruncated], help: "smallest ε − 1" },
    KeySpec { name: "delta_max", kind: Kind::Real, commands: &[HaEntropies, HaTruncated], help: "largest ε − 1" },
    KeySpec {
        name: "points",
        kind: Kind::Count,
        commands: &[HaEntropies, HaTruncated, BetaSweep],
        help: "grid points",
    },
    KeySpec {
        name: "asymptote", kind: Kind::Flag, commands: &[HaEntropies], help: "add the ε → 1 asymptote column"
    },
    KeySpec { name: "truncation", kind: Kind::Counts, commands: &[HaTruncated], help: "numbers of eigenvalues kept" },
    KeySpec { name: "nu_strength", kind: Kind::Reals, commands: &[Crossover], help: "ν(ν−1) values" },
    KeySpec { name: "delta_eps", kind: Kind::Real, commands: &[Crossover], help: "ε step of the centred difference" },
];

fn key_spec(name: &str) -> Option<&'static KeySpec> {
    KEYS.iter().find(|k| k.name == name)
}

/// Keys accepted by `command`, with their help text.
pub fn keys_for(command: Command) -> Vec<(&'static str, &'static str)> {
    KEYS.iter().filter(|k| k.commands.contains(&command)).map(|k| (k.name, k.help)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    command: Command,
    values: BTreeMap<&'static str, Value>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig { command, values: BTreeMap::new() }
    }

    /// Builds a config from `(key, raw value)` pairs; later pairs win.
    pub fn from_pairs<'a>(
        command: Command,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, CliError> {
        let mut config = RunConfig::new(command);
        for (k, v) in pairs {
            config.set(k, v)?;
        }
        Ok(config)
    }

    /// Parses `key = value` text. A `command` line must match `command`.
    pub fn parse_text(command: Command, text: &str) -> Result<Self, CliError> {
        let mut config = RunConfig::new(command);
        config.merge_text(text)?;
        Ok(config)
    }

    pub fn merge_text(&mut self, text: &str) -> Result<(), CliError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::config(format!("line {}: expected key = value", lineno + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if k == "command" {
                let c: Command = v.parse()?;
                if c != self.command {
                    return Err(CliError::config(format!(
                        "config file is for '{c}' but the command is '{}'",
                        self.command
                    )));
                }
                continue;
            }
            self.set(k, v).map_err(|e| CliError::config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    pub fn merge_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
        self.merge_text(&text)
    }

    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, raw: &str) -> Result<(), CliError> {
        let normalized = key.replace('-', "_");
        let spec = key_spec(&normalized).ok_or_else(|| CliError::config(format!("unknown key '{key}'")))?;
        if !spec.commands.contains(&self.command) {
            return Err(CliError::config(format!("key '{}' does not apply to '{}'", spec.name, self.command)));
        }
        let name = spec.name;
        let value = match spec.kind {
            Kind::Real => Value::Real(parse_real(name, raw)?),
            Kind::Count => Value::Count(parse_count(name, raw)?),
            Kind::Flag => Value::Flag(match raw.trim() {
                "true" | "yes" | "1" | "" => true,
                "false" | "no" | "0" => false,
                other => return Err(CliError::config(format!("{name}: '{other}' is not a boolean"))),
            }),
            Kind::Word(allowed) => {
                let w = raw.trim().to_ascii_lowercase();
                if !allowed.contains(&w.as_str()) {
                    return Err(CliError::config(format!("{name}: '{raw}' not one of {}", allowed.join(", "))));
                }
                Value::Word(w)
            }
            Kind::Reals => {
                let xs = split_list(raw).map(|t| parse_real(name, t)).collect::<Result<Vec<_>, _>>()?;
                if xs.is_empty() {
                    return Err(CliError::config(format!("{name}: empty list")));
                }
                Value::Reals(xs)
            }
            Kind::Counts => {
                let ns = split_list(raw).map(|t| parse_count(name, t)).collect::<Result<Vec<_>, _>>()?;
                if ns.is_empty() {
                    return Err(CliError::config(format!("{name}: empty list")));
                }
                Value::Counts(ns)
            }
            Kind::Path => {
                if raw.trim().is_empty() {
                    return Err(CliError::config(format!("{name}: empty path")));
                }
                Value::Path(PathBuf::from(raw.trim()))
            }
        };
        self.values.insert(name, value);
        Ok(())
    }

    pub fn command(&self) -> Command {
        self.command
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.values.get(key)
    }

    pub fn is_set(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    /// Keys in canonical order with their values.
    pub fn entries(&self) -> impl Iterator<Item = (&'static str, &Value)> + '_ {
        KEYS.iter().filter_map(|k| self.values.get(k.name).map(|v| (k.name, v)))
    }

    /// `command = …` followed by the set keys in canonical order.
    pub fn canonical(&self) -> String {
        let mut out = format!("command = {}\n", self.command);
        for (k, v) in self.entries() {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }

    pub fn params_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> =
            self.entries().map(|(k, v)| (k.to_string(), v.to_json())).collect();
        serde_json::Value::Object(map)
    }

    fn missing(&self, key: &str) -> CliError {
        CliError::config(format!("'{}' needs '{key}'", self.command))
    }

    pub fn real(&self, key: &str) -> Option<f64> {
        match self.values.get(key) {
            Some(Value::Real(x)) => Some(*x),
            _ => None,
        }
    }

    pub fn require_real(&self, key: &str) -> Result<f64, CliError> {
        self.real(key).ok_or_else(|| self.missing(key))
    }

    pub fn count(&self, key: &str) -> Option<usize> {
        match self.values.get(key) {
            Some(Value::Count(n)) => Some(*n),
            _ => None,
        }
    }

    pub fn flag(&self, key: &str) -> bool {
        matches!(self.values.get(key), Some(Value::Flag(true)))
    }

    pub fn word(&self, key: &str) -> Option<&str> {
        match self.values.get(key) {
            Some(Value::Word(w)) => Some(w),
            _ => None,
        }
    }

    pub fn reals(&self, key: &str) -> Option<&[f64]> {
        match self.values.get(key) {
            Some(Value::Reals(xs)) => Some(xs),
            _ => None,
        }
    }

    pub fn counts(&self, key: &str) -> Option<&[usize]> {
        match self.values.get(key) {
            Some(Value::Counts(ns)) => Some(ns),
            _ => None,
        }
    }

    pub fn output(&self) -> Option<&Path> {
        match self.values.get("output") {
            Some(Value::Path(p)) => Some(p),
            _ => None,
        }
    }

    pub fn format(&self) -> Format {
        match self.word("format") {
            Some("csv") => Format::Csv,
            _ => Format::Json,
        }
    }

    pub fn statistics(&self) -> Statistics {
        match self.word("statistics") {
            Some("fermion") => Statistics::Fermion,
            _ => Statistics::Boson,
        }
    }

    /// Sets `key` to `value` unless the user already did.
    pub fn default_value(&mut self, key: &'static str, value: Value) {
        if key_spec(key).is_some_and(|k| k.commands.contains(&self.command)) {
            self.values.entry(key).or_insert(value);
        }
    }
}
