//! One function per subcommand. Each fills defaults into the config, runs the
//! computation (grid points in parallel) and returns JSON results plus a CSV
//! table.

use std::collections::HashMap;
use std::sync::Mutex;

use calogero_core::calogero1d::{exact_rdm_for_nu, variational_spectrum_1d, ModelSpec1D};
use calogero_core::calogero2d::{self, BetaFamily, Calogero2dFamily, ModelSpec2D, Plan2D, DEFICIT_WARNING};
use calogero_core::crossover::{self, crossover_diagnostics, CrossoverRow};
use calogero_core::harmonic::{self, asymptotic_vn_offset, HarmonicParams};
use calogero_core::scan::{
    self, classify_from_values, curves_from_spectra, exact_overlay, fit_tail_exponent, linear_grid, log_grid,
    stepped_grid, Calogero1dFamily, ClassifyConfig, EntropyKind, Parameter, SpectrumFamily,
};
use calogero_core::{EntanglementSpectrum, FermionState, ModelSpec, Statistics};
use rayon::prelude::*;
use serde_json::{json, Value as Json};

use crate::config::{format_real, real_json, Command, RunConfig, Value};
use crate::error::CliError;
use crate::output::{Cell, Table};

/// Basis deficit above which a spectrum is reported as a failed point.
pub const MAX_DEFICIT: f64 = 0.1;

/// Turns spectra missing more than [`MAX_DEFICIT`] of the norm into errors.
fn check_deficit(s: calogero_core::Result<EntanglementSpectrum>) -> calogero_core::Result<EntanglementSpectrum> {
    let s = s?;
    if s.truncation_error() > MAX_DEFICIT {
        return Err(calogero_core::Error::Truncation { deficit: s.truncation_error(), limit: MAX_DEFICIT });
    }
    Ok(s)
}

fn deficit_warning(points: &[(f64, calogero_core::Result<EntanglementSpectrum>)], name: &str) -> Option<String> {
    let worst = points
        .iter()
        .filter_map(|(x, s)| s.as_ref().ok().map(|s| (*x, s.truncation_error())))
        .filter(|(_, d)| *d > DEFICIT_WARNING)
        .max_by(|a, b| a.1.total_cmp(&b.1))?;
    Some(format!(
        "basis deficit above {DEFICIT_WARNING:e} on this grid (worst {:.3e} at {name}={}); increase 'basis'",
        worst.1,
        format_real(worst.0)
    ))
}

/// What a command produced.
#[derive(Debug, Clone)]
pub struct Report {
    pub results: Json,
    pub table: Table,
    /// Grid points that failed; any entry makes the run exit with status 3.
    pub failures: Vec<String>,
    /// Non-fatal notes for stderr.
    pub warnings: Vec<String>,
}

impl Report {
    fn new(results: Json, table: Table) -> Self {
        Report { results, table, failures: Vec::new(), warnings: Vec::new() }
    }
}

/// Fills the command's defaults into `config`.
pub fn resolve(config: &RunConfig) -> Result<RunConfig, CliError> {
    let mut c = config.clone();
    c.default_value("format", Value::Word("json".into()));
    match c.command() {
        Command::Spectrum1d => {
            c.require_real("nu")?;
            c.default_value("statistics", Value::Word("boson".into()));
            c.default_value("exact", Value::Flag(false));
            if !c.flag("exact") {
                c.default_value("basis", Value::Count(calogero_core::calogero1d::DEFAULT_BASIS));
                c.default_value("quadrature", Value::Count(calogero_core::calogero1d::DEFAULT_QUADRATURE));
            }
        }
        Command::Spectrum2d => {
            c.require_real("nu")?;
            c.default_value("statistics", Value::Word("boson".into()));
            c.default_value("basis", Value::Count(calogero2d::DEFAULT_BASIS));
            if c.statistics() == Statistics::Fermion {
                c.default_value("state", Value::Word("plus".into()));
            }
            check_state_keys(&c)?;
        }
        Command::ScanRenyi => {
            c.default_value("statistics", Value::Word("boson".into()));
            c.default_value("dimension", Value::Count(1));
            c.default_value("alpha", Value::Reals(vec![1.0]));
            c.default_value("exact", Value::Flag(false));
            match c.count("dimension") {
                Some(1) => {
                    for key in ["state", "beta"] {
                        if c.is_set(key) {
                            return Err(CliError::config(format!("'{key}' applies to dimension = 2 only")));
                        }
                    }
                    c.default_value("nu_min", Value::Real(0.2));
                    c.default_value("nu_max", Value::Real(12.0));
                    c.default_value("nu_step", Value::Real(0.2));
                    if !c.flag("exact") {
                        c.default_value("basis", Value::Count(calogero_core::calogero1d::DEFAULT_BASIS));
                        c.default_value("quadrature", Value::Count(calogero_core::calogero1d::DEFAULT_QUADRATURE));
                    }
                }
                Some(2) => {
                    if c.flag("exact") {
                        return Err(CliError::config("exact overlays exist for dimension = 1 only"));
                    }
                    if c.is_set("quadrature") {
                        return Err(CliError::config("'quadrature' applies to dimension = 1 only"));
                    }
                    c.default_value("nu_min", Value::Real(1.0));
                    c.default_value("nu_max", Value::Real(6.0));
                    c.default_value("nu_step", Value::Real(0.5));
                    c.default_value("basis", Value::Count(calogero2d::DEFAULT_BASIS));
                    if c.statistics() == Statistics::Fermion {
                        c.default_value("state", Value::Word("plus".into()));
                    }
                    check_state_keys(&c)?;
                }
                Some(d) => return Err(CliError::config(format!("dimension must be 1 or 2, got {d}"))),
                None => unreachable!("defaulted above"),
            }
        }
        Command::Classify => {
            let defaults = ClassifyConfig::default();
            c.default_value("statistics", Value::Word("boson".into()));
            c.default_value("nu_n", Value::Real(4.0));
            c.default_value("alpha", Value::Reals(vec![0.4, 0.5, 0.6, 1.0, 2.0]));
            c.default_value("offsets", Value::Reals(defaults.offsets.clone()));
            c.default_value("tail_offsets", Value::Reals(vec![0.02, 0.04, 0.08]));
            c.default_value("band", Value::Real(defaults.band));
            c.default_value("noise", Value::Real(defaults.entropy_noise));
            c.default_value("basis", Value::Count(calogero_core::calogero1d::DEFAULT_BASIS));
            c.default_value("quadrature", Value::Count(calogero_core::calogero1d::DEFAULT_QUADRATURE));
        }
        Command::HaEntropies => {
            if c.is_set("epsilon") {
                if ["delta_min", "delta_max", "points"].iter().any(|k| c.is_set(k)) {
                    return Err(CliError::config("give either 'epsilon' or a delta grid, not both"));
                }
            } else {
                c.default_value("delta_min", Value::Real(1e-6));
                c.default_value("delta_max", Value::Real(2.0));
                c.default_value("points", Value::Count(200));
            }
            c.default_value("asymptote", Value::Flag(false));
        }
        Command::HaTruncated => {
            c.default_value("truncation", Value::Counts(vec![50, 100, 200]));
            c.default_value("delta_min", Value::Real(1e-12));
            c.default_value("delta_max", Value::Real(2.0));
            c.default_value("points", Value::Count(300));
        }
        Command::Crossover => {
            c.default_value("nu_strength", Value::Reals(vec![20.0, 2000.0]));
            c.default_value("epsilon", Value::Reals(vec![1.2, 1.4, 1.6, 1.8, 2.0, 2.2, 2.4, 2.6, 2.8, 3.0]));
            c.default_value("delta_eps", Value::Real(0.01));
            c.default_value("basis", Value::Count(crossover::DEFAULT_BASIS));
        }
        Command::BetaSweep => {
            c.default_value("nu", Value::Real(2.0));
            c.default_value("points", Value::Count(11));
            c.default_value("basis", Value::Count(calogero2d::DEFAULT_BASIS));
        }
    }
    Ok(c)
}

fn check_state_keys(c: &RunConfig) -> Result<(), CliError> {
    if c.statistics() == Statistics::Boson && (c.is_set("state") || c.is_set("beta")) {
        return Err(CliError::config("'state' and 'beta' apply to fermions only"));
    }
    match (c.word("state"), c.is_set("beta")) {
        (Some("lc"), false) => Err(CliError::config("state = lc needs 'beta'")),
        (Some(s), true) if s != "lc" => Err(CliError::config("'beta' applies to state = lc only")),
        _ => Ok(()),
    }
}

fn fermion_state(c: &RunConfig) -> Result<FermionState, CliError> {
    let state = match c.word("state").unwrap_or("plus") {
        "plus" => FermionState::Plus,
        "minus" => FermionState::Minus,
        "x" => FermionState::X,
        "y" => FermionState::Y,
        _ => FermionState::Lc(c.require_real("beta")?),
    };
    state.validate()?;
    Ok(state)
}

fn alphas(c: &RunConfig) -> Result<Vec<EntropyKind>, CliError> {
    c.reals("alpha").unwrap_or(&[]).iter().map(|&a| EntropyKind::from_alpha(a).map_err(CliError::from)).collect()
}

fn kind_alpha(kind: EntropyKind) -> f64 {
    kind.alpha().unwrap_or(f64::NAN)
}

/// Label used for an order in JSON keys and CSV headers.
fn alpha_label(kind: EntropyKind) -> String {
    match kind {
        EntropyKind::VonNeumann => "1".into(),
        EntropyKind::Min => "inf".into(),
        EntropyKind::Linear => "linear".into(),
        EntropyKind::Renyi(a) => format_real(a),
    }
}

fn spectrum_json(s: &EntanglementSpectrum, kinds: &[EntropyKind]) -> Result<Json, CliError> {
    let renyi = kinds
        .iter()
        .map(|&k| Ok(json!({ "alpha": alpha_label(k), "bits": k.evaluate(s)? })))
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(json!({
        "source": s.source().as_str(),
        "eigenvalues": s.eigenvalues(),
        "truncation_error": s.truncation_error(),
        "von_neumann": s.von_neumann(),
        "linear_entropy": s.linear_entropy(),
        "min_entropy": s.min_entropy(),
        "renyi": renyi,
    }))
}

fn spectrum_table(s: &EntanglementSpectrum) -> Table {
    let mut t = Table::new(["k", "lambda"]);
    for (k, &l) in s.eigenvalues().iter().enumerate() {
        t.push(vec![k.into(), l.into()]);
    }
    t
}

pub fn execute(c: &RunConfig) -> Result<Report, CliError> {
    match c.command() {
        Command::Spectrum1d => spectrum1d(c),
        Command::Spectrum2d => spectrum2d(c),
        Command::ScanRenyi => scan_renyi(c),
        Command::Classify => classify(c),
        Command::HaEntropies => ha_entropies(c),
        Command::HaTruncated => ha_truncated(c),
        Command::Crossover => crossover(c),
        Command::BetaSweep => beta_sweep(c),
    }
}

fn spectrum1d(c: &RunConfig) -> Result<Report, CliError> {
    let nu = c.require_real("nu")?;
    let stats = c.statistics();
    let spectrum = if c.flag("exact") {
        exact_rdm_for_nu(nu, stats)?.spectrum
    } else {
        let spec = ModelSpec1D::new(nu, stats)?;
        check_deficit(variational_spectrum_1d(
            spec,
            c.count("basis").unwrap_or(50),
            c.count("quadrature").unwrap_or(120),
        ))
        .map_err(|e| CliError::Numeric(e.to_string()))?
    };
    let mut report = Report::new(spectrum_json(&spectrum, &alphas(c)?)?, spectrum_table(&spectrum));
    if spectrum.truncation_error() > DEFICIT_WARNING {
        report.warnings.push(format!(
            "basis deficit {:.3e} exceeds {DEFICIT_WARNING:e}; increase 'basis'",
            spectrum.truncation_error()
        ));
    }
    Ok(report)
}

fn spectrum2d(c: &RunConfig) -> Result<Report, CliError> {
    let nu = c.require_real("nu")?;
    let stats = c.statistics();
    let state = if stats == Statistics::Fermion { fermion_state(c)? } else { FermionState::Plus };
    let plan = Plan2D::new(c.count("basis").unwrap_or(calogero2d::DEFAULT_BASIS))?;
    let spectrum = check_deficit(calogero2d::spectrum_2d(ModelSpec2D::new(nu, stats, state, plan)?))
        .map_err(|e| CliError::Numeric(e.to_string()))?;
    let mut report = Report::new(spectrum_json(&spectrum, &alphas(c)?)?, spectrum_table(&spectrum));
    if spectrum.truncation_error() > DEFICIT_WARNING {
        report.warnings.push(format!(
            "basis deficit {:.3e} exceeds {DEFICIT_WARNING:e}; increase 'basis'",
            spectrum.truncation_error()
        ));
    }
    Ok(report)
}

/// Evaluates `family` on `grid` in parallel, keeping grid order.
fn parallel_spectra<F: SpectrumFamily + Sync>(
    family: &F,
    grid: &[f64],
) -> Vec<(f64, calogero_core::Result<EntanglementSpectrum>)> {
    grid.par_iter().map(|&x| (x, check_deficit(family.spectrum_at(x)))).collect()
}

fn scan_renyi(c: &RunConfig) -> Result<Report, CliError> {
    let stats = c.statistics();
    let kinds = alphas(c)?;
    let (lo, hi, step) = (c.require_real("nu_min")?, c.require_real("nu_max")?, c.require_real("nu_step")?);
    let grid = stepped_grid(lo, hi, step)?;
    let mut table = Table::new(["nu", "alpha", "entropy_bits"]);

    if c.flag("exact") {
        let overlays =
            kinds.iter().map(|&k| exact_overlay(stats, lo, hi, k)).collect::<calogero_core::Result<Vec<_>>>()?;
        let nus: Vec<f64> = overlays.first().map(|o| o.iter().map(|p| p.0).collect()).unwrap_or_default();
        for (i, &nu) in nus.iter().enumerate() {
            for (k, o) in kinds.iter().zip(&overlays) {
                table.push(vec![nu.into(), kind_alpha(*k).into(), o[i].1.into()]);
            }
        }
        let results = kinds
            .iter()
            .zip(&overlays)
            .map(|(k, o)| json!({ "alpha": alpha_label(*k), "nu": o.iter().map(|p| p.0).collect::<Vec<_>>(), "entropy_bits": o.iter().map(|p| p.1).collect::<Vec<_>>() }))
            .collect();
        return Ok(Report::new(json!({ "exact": true, "curves": Json::Array(results) }), table));
    }

    let (points, metadata) = match c.count("dimension") {
        Some(2) => {
            let state = if stats == Statistics::Fermion { fermion_state(c)? } else { FermionState::Plus };
            let family = Calogero2dFamily {
                statistics: stats,
                state,
                plan: Plan2D::new(c.count("basis").unwrap_or(calogero2d::DEFAULT_BASIS))?,
            };
            (parallel_spectra(&family, &grid), family.metadata())
        }
        _ => {
            let family = Calogero1dFamily {
                statistics: stats,
                basis: c.count("basis").unwrap_or(50),
                quadrature: c.count("quadrature").unwrap_or(120),
            };
            (parallel_spectra(&family, &grid), family.metadata())
        }
    };
    curve_report(Parameter::Nu, metadata, &points, &kinds, table)
}

/// Builds `nu,alpha,entropy_bits` style output from per-point spectra; rows
/// are ordered by grid index, then by order.
fn curve_report(
    parameter: Parameter,
    metadata: ModelSpec,
    points: &[(f64, calogero_core::Result<EntanglementSpectrum>)],
    kinds: &[EntropyKind],
    mut table: Table,
) -> Result<Report, CliError> {
    let curves = curves_from_spectra(parameter, metadata, points, kinds)?;
    let warning = deficit_warning(points, parameter.as_str());
    for (x, _) in points {
        for (k, curve) in kinds.iter().zip(&curves) {
            if let Some(i) = curve.grid().iter().position(|g| g == x) {
                table.push(vec![(*x).into(), kind_alpha(*k).into(), curve.values()[i].into()]);
            }
        }
    }
    let results = kinds
        .iter()
        .zip(&curves)
        .map(|(k, curve)| {
            json!({
                "alpha": alpha_label(*k),
                parameter.as_str(): curve.grid(),
                "entropy_bits": curve.values(),
                "argmax": curve.argmax(),
            })
        })
        .collect();
    let mut report = Report::new(json!({ "curves": Json::Array(results) }), table);
    report.warnings.extend(warning);
    if let Some(curve) = curves.first() {
        report.failures = curve
            .failures()
            .iter()
            .map(|f| format!("point {} ({}={}): {}", f.index, parameter.as_str(), format_real(f.value), f.message))
            .collect();
    }
    Ok(report)
}

/// Memoizes spectra so that several orders reuse one evaluation per point.
struct Cached<'a, F> {
    inner: &'a F,
    cache: Mutex<HashMap<u64, EntanglementSpectrum>>,
}

impl<'a, F: SpectrumFamily + Sync> Cached<'a, F> {
    fn new(inner: &'a F) -> Self {
        Cached { inner, cache: Mutex::new(HashMap::new()) }
    }

    fn warm(&self, points: &[f64]) -> calogero_core::Result<()> {
        let computed: Vec<_> = points
            .par_iter()
            .map(|&x| self.inner.spectrum_at(x).map(|s| (x.to_bits(), s)))
            .collect::<calogero_core::Result<_>>()?;
        self.cache.lock().expect("cache lock").extend(computed);
        Ok(())
    }
}

impl<F: SpectrumFamily> SpectrumFamily for Cached<'_, F> {
    fn parameter(&self) -> Parameter {
        self.inner.parameter()
    }

    fn spectrum_at(&self, x: f64) -> calogero_core::Result<EntanglementSpectrum> {
        if let Some(s) = self.cache.lock().expect("cache lock").get(&x.to_bits()) {
            return Ok(s.clone());
        }
        self.inner.spectrum_at(x)
    }

    fn metadata(&self) -> ModelSpec {
        self.inner.metadata()
    }
}

fn classify(c: &RunConfig) -> Result<Report, CliError> {
    let stats = c.statistics();
    let nu_n = c.require_real("nu_n")?;
    scan::support_dimension(nu_n, stats)?;
    let config = ClassifyConfig {
        offsets: c.reals("offsets").unwrap_or(&[]).to_vec(),
        band: c.require_real("band")?,
        entropy_noise: c.require_real("noise")?,
    };
    let tail_offsets = c.reals("tail_offsets").unwrap_or(&[]).to_vec();
    let family = Calogero1dFamily {
        statistics: stats,
        basis: c.count("basis").unwrap_or(50),
        quadrature: c.count("quadrature").unwrap_or(120),
    };
    let mut points = vec![nu_n];
    for &h in &config.offsets {
        points.push(nu_n - h);
        points.push(nu_n + h);
    }
    let mut needed = points.clone();
    needed.extend(tail_offsets.iter().map(|o| nu_n + o));
    let cached = Cached::new(&family);
    cached.warm(&needed)?;

    let mut table = Table::new(["nu_n", "alpha", "classification", "fitted_exponent", "tail_slope"]);
    let mut results = Vec::new();
    for kind in alphas(c)? {
        let values = points
            .iter()
            .map(|&x| kind.evaluate(&cached.spectrum_at(x)?))
            .collect::<calogero_core::Result<Vec<_>>>()?;
        let report = classify_from_values(nu_n, kind, &config, &values)?;
        let tail = match kind.alpha().filter(|a| a.is_finite()) {
            Some(a) if !tail_offsets.is_empty() => Some(fit_tail_exponent(&cached, nu_n, a, stats, &tail_offsets)?),
            _ => None,
        };
        let slope = tail.as_ref().and_then(|t| t.slope);
        table.push(vec![
            nu_n.into(),
            kind_alpha(kind).into(),
            report.classification.as_str().into(),
            report.fitted_exponent.unwrap_or(f64::NAN).into(),
            slope.unwrap_or(f64::NAN).into(),
        ]);
        results.push(json!({
            "alpha": alpha_label(kind),
            "classification": report.classification.as_str(),
            "fitted_exponent": report.fitted_exponent,
            "exponent_estimates": report.exponent_estimates,
            "side_derivatives": report.side_derivatives.iter().map(|d| json!({
                "offset": d.offset, "left": d.left, "right": d.right, "jump": d.jump(),
            })).collect::<Vec<_>>(),
            "richardson": report.richardson,
            "noise_floor": report.noise_floor,
            "note": report.note,
            "tail_fit": tail.as_ref().map(|t| json!({
                "support": t.support,
                "offsets": t.offsets,
                "tail_sums": t.tail_sums,
                "slope": t.slope,
                "implied_km": t.implied_km(),
            })),
        }));
    }
    Ok(Report::new(json!({ "nu_n": nu_n, "reports": results }), table))
}

/// `(label, δ or ε values, params)` for the harmonic commands.
fn harmonic_grid(c: &RunConfig) -> Result<(&'static str, Vec<f64>, Vec<HarmonicParams>), CliError> {
    if let Some(eps) = c.reals("epsilon") {
        let params = eps.iter().map(|&e| HarmonicParams::new(e)).collect::<calogero_core::Result<Vec<_>>>()?;
        return Ok(("epsilon", eps.to_vec(), params));
    }
    let n = c.count("points").unwrap_or(200);
    let grid = log_grid(c.require_real("delta_min")?, c.require_real("delta_max")?, n)?;
    let params = grid.iter().map(|&d| HarmonicParams::from_offset(d)).collect::<calogero_core::Result<Vec<_>>>()?;
    Ok(("delta", grid, params))
}

fn ha_entropies(c: &RunConfig) -> Result<Report, CliError> {
    let (label, grid, params) = harmonic_grid(c)?;
    let kinds = alphas(c)?;
    let renyi_orders: Vec<f64> = kinds.iter().filter_map(|k| k.alpha()).collect();
    let asymptote = c.flag("asymptote");
    let mut header = vec![label.to_string(), "S_vN".into(), "S_le".into(), "S_min".into()];
    header.extend(kinds.iter().map(|k| format!("S_renyi_{}", alpha_label(*k))));
    if asymptote {
        header.push("S_vN_asymptotic".into());
    }
    let mut table = Table::new(header);
    let mut rows = Vec::new();
    for (x, p) in grid.iter().zip(&params) {
        let e = harmonic::ha_entropies(p, &renyi_orders)?;
        let mut row: Vec<Cell> = vec![(*x).into(), e.von_neumann.into(), e.linear.into(), e.min.into()];
        row.extend(e.renyi.iter().map(|r| Cell::Real(r.1)));
        let asym = if asymptote { asymptotic_vn_offset(p.offset()).ok() } else { None };
        if asymptote {
            row.push(asym.unwrap_or(f64::NAN).into());
        }
        table.push(row);
        rows.push(json!({
            label: real_json(*x),
            "von_neumann": e.von_neumann,
            "linear_entropy": e.linear,
            "min_entropy": e.min,
            "renyi": e.renyi.iter().map(|r| json!({ "alpha": real_json(r.0), "bits": r.1 })).collect::<Vec<_>>(),
            "asymptotic_von_neumann": asym,
        }));
    }
    Ok(Report::new(json!({ "points": rows }), table))
}

fn ha_truncated(c: &RunConfig) -> Result<Report, CliError> {
    let (_, grid, params) = harmonic_grid(c)?;
    let truncations = c.counts("truncation").unwrap_or(&[]).to_vec();
    let values: Vec<Vec<f64>> = truncations
        .par_iter()
        .map(|&n| {
            params.iter().map(|p| harmonic::truncated_von_neumann(p, n)).collect::<calogero_core::Result<Vec<_>>>()
        })
        .collect::<calogero_core::Result<_>>()?;
    let mut table = Table::new(["delta", "n", "S_vN"]);
    for (i, d) in grid.iter().enumerate() {
        for (n, v) in truncations.iter().zip(&values) {
            table.push(vec![(*d).into(), (*n).into(), v[i].into()]);
        }
    }
    let curves = truncations
        .iter()
        .zip(&values)
        .map(|(n, v)| {
            let curve = scan::EntropyCurve::new(
                Parameter::Epsilon,
                EntropyKind::VonNeumann,
                grid.clone(),
                v.clone(),
                ModelSpec::default(),
            )?;
            let maxima = curve.interior_maxima();
            Ok(json!({
                "n": n,
                "delta": grid,
                "von_neumann": v,
                "argmax_delta": curve.argmax(),
                "interior_maxima": maxima.iter().map(|&i| grid[i]).collect::<Vec<_>>(),
            }))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Report::new(json!({ "curves": curves }), table))
}

fn crossover(c: &RunConfig) -> Result<Report, CliError> {
    let strengths = c.reals("nu_strength").unwrap_or(&[]).to_vec();
    let grid = c.reals("epsilon").unwrap_or(&[]).to_vec();
    let delta = c.require_real("delta_eps")?;
    let nb = c.count("basis").unwrap_or(crossover::DEFAULT_BASIS);
    // Validate the whole grid up front so domain errors are configuration errors.
    for &g in &strengths {
        crossover_diagnostics(g, &[], delta, nb)?;
        if g.is_nan() || g < crossover::MIN_STRENGTH {
            return Err(CliError::config(format!("nu_strength {g} below {}", crossover::MIN_STRENGTH)));
        }
    }
    for &e in &grid {
        if !(e > 1.0 && e <= 3.0) || e - delta <= 1.0 {
            return Err(CliError::config(format!("epsilon {e} outside (1 + delta_eps, 3]")));
        }
    }
    let tasks: Vec<(f64, f64)> = strengths.iter().flat_map(|&g| grid.iter().map(move |&e| (g, e))).collect();
    let rows: Vec<calogero_core::Result<CrossoverRow>> = tasks
        .par_iter()
        .map(|&(g, e)| crossover_diagnostics(g, &[e], delta, nb).map(|mut c| c.rows.remove(0)))
        .collect();
    let mut table = Table::new(["nu_strength", "epsilon", "E00_var", "E_inf", "E_inf_shifted", "delta_E"]);
    let mut failures = Vec::new();
    let mut curves: Vec<Json> = Vec::new();
    for &g in &strengths {
        let mut points = Vec::new();
        for ((tg, e), row) in tasks.iter().zip(&rows) {
            if *tg != g {
                continue;
            }
            match row {
                Ok(r) => {
                    table.push(vec![
                        g.into(),
                        r.epsilon.into(),
                        r.energy.into(),
                        r.e_infinity.into(),
                        r.e_infinity_shifted.into(),
                        r.delta_e.into(),
                    ]);
                    points.push(json!({
                        "epsilon": r.epsilon,
                        "E00_var": r.energy,
                        "E_inf": r.e_infinity,
                        "E_inf_shifted": r.e_infinity_shifted,
                        "delta_E": r.delta_e,
                        "relative_deviation": r.relative_deviation(),
                    }));
                }
                Err(err) => failures.push(format!("nu_strength={} epsilon={}: {err}", format_real(g), format_real(*e))),
            }
        }
        curves.push(json!({ "nu_strength": g, "points": points }));
    }
    let mut report = Report::new(json!({ "delta_eps": delta, "basis": nb, "curves": curves }), table);
    report.failures = failures;
    Ok(report)
}

fn beta_sweep(c: &RunConfig) -> Result<Report, CliError> {
    let nu = c.require_real("nu")?;
    let n = c.count("points").unwrap_or(11);
    if n < 2 {
        return Err(CliError::config("beta-sweep needs at least 2 points"));
    }
    let plan = Plan2D::new(c.count("basis").unwrap_or(calogero2d::DEFAULT_BASIS))?;
    let family = BetaFamily::new(nu, plan)?;
    let grid = linear_grid(0.0, 1.0, n);
    let points = parallel_spectra(&family, &grid);
    let full = Table::new(["beta2", "alpha", "S_vN"]);
    let mut report = curve_report(Parameter::Beta2, family.metadata(), &points, &[EntropyKind::VonNeumann], full)?;
    let mut t = Table::new(["beta2", "S_vN"]);
    for row in &report.table.rows {
        t.push(vec![row[0].clone(), row[2].clone()]);
    }
    report.table = t;
    Ok(report)
}
