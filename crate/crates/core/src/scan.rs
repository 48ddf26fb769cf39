//! Entropy curves over parameter grids, and the behaviour of Rényi entropies
//! near finite-support points.
//!
//! Near `ν_n` (`2n` for bosons, `2n+1` for fermions) the eigenvalues that
//! vanish at `ν_n` grow like `(ν−ν_n)²`, so `Σλ^α` picks up a term
//! `C|ν−ν_n|^p` with `p = 2α k_m`. With `k_m = 1` the entropy has an infinite
//! slope for `p < 1`, a kink at `p = 1`, a finite slope but infinite curvature
//! for `1 < p < 2`, and finite first and second derivatives beyond.
//!
//! [`classify_nonanalyticity`] estimates `p` from one-sided difference
//! quotients: the jump `J(h) = D₊(h) − D₋(h)` behaves as `K h^{p−1} + S'' h`,
//! the Richardson combination `J(h) − 2J(h/2)` removes the regular `h` term,
//! and successive ratios of that combination give `p − 1`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::calogero1d::{exact_rdm_1d, variational_spectrum_1d, ModelSpec1D, DEFAULT_BASIS, DEFAULT_QUADRATURE};
use crate::error::{domain, invalid};
use crate::fmath::{abs, ln, log2, powf, LN_2};
use crate::spectra::{self, ALPHA_ONE_WINDOW};
use crate::{EntanglementSpectrum, ModelSpec, Result, Statistics};

/// Quantity varied along a curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parameter {
    Nu,
    Epsilon,
    Beta2,
    Alpha,
}

impl Parameter {
    pub fn as_str(self) -> &'static str {
        match self {
            Parameter::Nu => "nu",
            Parameter::Epsilon => "epsilon",
            Parameter::Beta2 => "beta2",
            Parameter::Alpha => "alpha",
        }
    }
}

/// Entropy functional evaluated along a curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntropyKind {
    VonNeumann,
    /// Rényi of order `α > 0`; `α = ∞` is the min-entropy.
    Renyi(f64),
    Linear,
    Min,
}

impl EntropyKind {
    /// Rényi order, mapping von Neumann to 1 and min-entropy to ∞.
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(domain!("Rényi order α = {alpha} must be positive"));
        }
        Ok(if abs(alpha - 1.0) <= ALPHA_ONE_WINDOW {
            EntropyKind::VonNeumann
        } else if alpha == f64::INFINITY {
            EntropyKind::Min
        } else {
            EntropyKind::Renyi(alpha)
        })
    }

    pub fn evaluate(self, spectrum: &EntanglementSpectrum) -> Result<f64> {
        Ok(match self {
            EntropyKind::VonNeumann => spectra::von_neumann(spectrum),
            EntropyKind::Renyi(a) => spectra::renyi(spectrum, a)?,
            EntropyKind::Linear => spectra::linear_entropy(spectrum),
            EntropyKind::Min => spectra::min_entropy(spectrum),
        })
    }

    /// Order as a number, where one exists (`1` for von Neumann).
    pub fn alpha(self) -> Option<f64> {
        match self {
            EntropyKind::VonNeumann => Some(1.0),
            EntropyKind::Renyi(a) => Some(a),
            EntropyKind::Min => Some(f64::INFINITY),
            EntropyKind::Linear => None,
        }
    }
}

/// A one-parameter family of spectra.
pub trait SpectrumFamily {
    fn parameter(&self) -> Parameter;

    fn spectrum_at(&self, value: f64) -> Result<EntanglementSpectrum>;

    /// Provenance shared by all points (the varied field left unset).
    fn metadata(&self) -> ModelSpec;
}

/// Grid point that could not be evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct PointFailure {
    pub index: usize,
    pub value: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyCurve {
    parameter: Parameter,
    kind: EntropyKind,
    grid: Vec<f64>,
    values: Vec<f64>,
    metadata: ModelSpec,
    failures: Vec<PointFailure>,
}

impl EntropyCurve {
    /// Requires a strictly increasing grid and finite values of equal length.
    pub fn new(
        parameter: Parameter,
        kind: EntropyKind,
        grid: Vec<f64>,
        values: Vec<f64>,
        metadata: ModelSpec,
    ) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(invalid!("grid has {} points but {} values", grid.len(), values.len()));
        }
        check_grid(&grid)?;
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(invalid!("curve value at {} is not finite", grid[k]));
        }
        Ok(EntropyCurve { parameter, kind, grid, values, metadata, failures: Vec::new() })
    }

    pub fn parameter(&self) -> Parameter {
        self.parameter
    }

    pub fn kind(&self) -> EntropyKind {
        self.kind
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn metadata(&self) -> &ModelSpec {
        &self.metadata
    }

    /// Points dropped from the curve, with the reason.
    pub fn failures(&self) -> &[PointFailure] {
        &self.failures
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.iter().copied().zip(self.values.iter().copied())
    }

    /// Grid value of the largest entry.
    pub fn argmax(&self) -> Option<f64> {
        self.points()
            .fold(None, |best: Option<(f64, f64)>, (x, y)| match best {
                Some((_, b)) if b >= y => best,
                _ => Some((x, y)),
            })
            .map(|(x, _)| x)
    }

    /// Indices of strict interior local maxima.
    pub fn interior_maxima(&self) -> Vec<usize> {
        let v = &self.values;
        (1..v.len().saturating_sub(1)).filter(|&i| v[i] > v[i - 1] && v[i] >= v[i + 1]).collect()
    }
}

/// Strictly increasing and finite.
pub fn check_grid(grid: &[f64]) -> Result<()> {
    if let Some(x) = grid.iter().find(|x| !x.is_finite()) {
        return Err(invalid!("grid value {x} is not finite"));
    }
    if let Some(w) = grid.windows(2).find(|w| w[1] <= w[0]) {
        return Err(invalid!("grid is not strictly increasing at {} → {}", w[0], w[1]));
    }
    Ok(())
}

/// `n` equally spaced points from `start` to `stop` inclusive.
pub fn linear_grid(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => alloc::vec![start],
        _ => (0..n).map(|i| start + (stop - start) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Grid `start, start+step, …` up to `stop` (inclusive within step/1000).
pub fn stepped_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(stop >= start) {
        return Err(invalid!("grid {start}..{stop} with step {step} is empty or malformed"));
    }
    let n = ((stop - start) / step + 1e-3) as usize + 1;
    Ok((0..n).map(|i| start + step * i as f64).collect())
}

/// `n` logarithmically spaced points from `start` to `stop` (both positive).
pub fn log_grid(start: f64, stop: f64, n: usize) -> Result<Vec<f64>> {
    if !(start > 0.0 && stop > start) {
        return Err(invalid!("log grid needs 0 < start < stop"));
    }
    Ok(linear_grid(ln(start), ln(stop), n).into_iter().map(crate::fmath::exp).collect())
}

/// Turns per-point spectra into one curve per entropy kind. Failed points are
/// recorded on every curve rather than aborting.
pub fn curves_from_spectra(
    parameter: Parameter,
    metadata: ModelSpec,
    points: &[(f64, Result<EntanglementSpectrum>)],
    kinds: &[EntropyKind],
) -> Result<Vec<EntropyCurve>> {
    check_grid(&points.iter().map(|p| p.0).collect::<Vec<_>>())?;
    kinds
        .iter()
        .map(|&kind| {
            let mut grid = Vec::new();
            let mut values = Vec::new();
            let mut failures = Vec::new();
            for (index, (x, spectrum)) in points.iter().enumerate() {
                match spectrum.as_ref().map_err(Clone::clone).and_then(|s| kind.evaluate(s)) {
                    Ok(v) if v.is_finite() => {
                        grid.push(*x);
                        values.push(v);
                    }
                    Ok(v) => failures.push(PointFailure {
                        index,
                        value: *x,
                        message: alloc::format!("entropy evaluated to {v}"),
                    }),
                    Err(e) => failures.push(PointFailure { index, value: *x, message: e.to_string() }),
                }
            }
            let mut curve = EntropyCurve::new(parameter, kind, grid, values, metadata)?;
            curve.failures = failures;
            Ok(curve)
        })
        .collect()
}

/// Evaluates `family` at every grid point (sequentially) and builds the curve.
pub fn entropy_curve<F: SpectrumFamily + ?Sized>(family: &F, grid: &[f64], kind: EntropyKind) -> Result<EntropyCurve> {
    let points: Vec<_> = grid.iter().map(|&x| (x, family.spectrum_at(x))).collect();
    let mut curves = curves_from_spectra(family.parameter(), family.metadata(), &points, &[kind])?;
    Ok(curves.remove(0))
}

/// Rényi entropy of one spectrum over a list of orders.
pub fn renyi_profile(spectrum: &EntanglementSpectrum, alphas: &[f64]) -> Result<EntropyCurve> {
    let mut pairs: Vec<(f64, f64)> =
        alphas.iter().map(|&a| Ok((a, EntropyKind::from_alpha(a)?.evaluate(spectrum)?))).collect::<Result<_>>()?;
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (grid, values) = pairs.into_iter().unzip();
    EntropyCurve::new(Parameter::Alpha, EntropyKind::VonNeumann, grid, values, *spectrum.params())
}

/// One-dimensional Calogero spectra as a function of `ν`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calogero1dFamily {
    pub statistics: Statistics,
    pub basis: usize,
    pub quadrature: usize,
}

impl Calogero1dFamily {
    pub fn new(statistics: Statistics) -> Self {
        Calogero1dFamily { statistics, basis: DEFAULT_BASIS, quadrature: DEFAULT_QUADRATURE }
    }
}

impl SpectrumFamily for Calogero1dFamily {
    fn parameter(&self) -> Parameter {
        Parameter::Nu
    }

    fn spectrum_at(&self, nu: f64) -> Result<EntanglementSpectrum> {
        variational_spectrum_1d(ModelSpec1D::new(nu, self.statistics)?, self.basis, self.quadrature)
    }

    fn metadata(&self) -> ModelSpec {
        ModelSpec { dimension: 1, statistics: Some(self.statistics), ..Default::default() }
    }
}

/// Exact entropies at the finite-support points inside `[lo, hi]`.
pub fn exact_overlay(statistics: Statistics, lo: f64, hi: f64, kind: EntropyKind) -> Result<Vec<(f64, f64)>> {
    let first = match statistics {
        Statistics::Boson => 0u32,
        Statistics::Fermion => 1,
    };
    let mut out = Vec::new();
    let mut n = 0u32;
    loop {
        let nu = (first + 2 * n) as f64;
        if nu > hi {
            break;
        }
        if nu >= lo {
            let rdm = exact_rdm_1d(n, statistics)?;
            out.push((nu, kind.evaluate(&rdm.spectrum)?));
        }
        n += 1;
    }
    Ok(out)
}

/// Dimension `ν_n + 1` of the finite support at a special point; errors if
/// `nu_n` is not one.
pub fn support_dimension(nu_n: f64, statistics: Statistics) -> Result<usize> {
    let wanted = match statistics {
        Statistics::Boson => 0.0,
        Statistics::Fermion => 1.0,
    };
    if !(nu_n >= wanted) || nu_n % 1.0 != 0.0 || nu_n % 2.0 != wanted {
        return Err(domain!("ν = {nu_n} is not a finite-support point for {statistics}s"));
    }
    Ok(nu_n as usize + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    DivergentDerivative,
    Kink,
    ContinuousDerivativeDivergentSecond,
    Analytic,
    /// Resolution or noise does not support any of the above.
    Inconclusive,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::DivergentDerivative => "divergent-derivative",
            Classification::Kink => "kink",
            Classification::ContinuousDerivativeDivergentSecond => "continuous-derivative-divergent-second",
            Classification::Analytic => "analytic",
            Classification::Inconclusive => "inconclusive",
        }
    }

    /// Case table for the exponent `p = δ k_m`, with half-width `band` around
    /// the boundaries 1 and 2.
    pub fn from_exponent(p: f64, band: f64) -> Self {
        if !p.is_finite() {
            Classification::Inconclusive
        } else if p < 1.0 - band {
            Classification::DivergentDerivative
        } else if p <= 1.0 + band {
            Classification::Kink
        } else if p < 2.0 - band {
            Classification::ContinuousDerivativeDivergentSecond
        } else {
            Classification::Analytic
        }
    }
}

/// Settings for [`classify_nonanalyticity`].
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifyConfig {
    /// Offsets, each half the previous; at least three.
    pub offsets: Vec<f64>,
    /// Half-width of the bands around `p = 1` and `p = 2`.
    pub band: f64,
    /// Absolute noise level of a single entropy evaluation.
    pub entropy_noise: f64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig { offsets: alloc::vec![4e-2, 2e-2, 1e-2, 5e-3], band: 0.1, entropy_noise: 1e-13 }
    }
}

/// Difference quotients at one offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SideDerivatives {
    pub offset: f64,
    pub left: f64,
    pub right: f64,
}

impl SideDerivatives {
    pub fn jump(&self) -> f64 {
        self.right - self.left
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonAnalyticityReport {
    pub nu_n: f64,
    pub alpha: f64,
    pub classification: Classification,
    /// Estimate of `δ k_m = 2α k_m`, when the singular part is resolved.
    pub fitted_exponent: Option<f64>,
    /// One estimate per consecutive offset triple, coarsest first.
    pub exponent_estimates: Vec<f64>,
    /// Per-offset one-sided difference quotients, coarsest first.
    pub side_derivatives: Vec<SideDerivatives>,
    /// `J(h) − 2J(h/2)` for consecutive offsets.
    pub richardson: Vec<f64>,
    /// Magnitude below which a Richardson value counts as noise.
    pub noise_floor: f64,
    pub note: String,
}

/// Classifies the entropy of `family` at the special point `nu_n`.
pub fn classify_nonanalyticity<F: SpectrumFamily + ?Sized>(
    family: &F,
    nu_n: f64,
    kind: EntropyKind,
    config: &ClassifyConfig,
) -> Result<NonAnalyticityReport> {
    let h = &config.offsets;
    let mut points = alloc::vec![nu_n];
    for &d in h {
        points.push(nu_n - d);
        points.push(nu_n + d);
    }
    let mut values = Vec::with_capacity(points.len());
    for &x in &points {
        values.push(kind.evaluate(&family.spectrum_at(x)?)?);
    }
    classify_from_values(nu_n, kind, config, &values)
}

/// Classification from precomputed entropies ordered as
/// `[S(ν_n), S(ν_n−h₀), S(ν_n+h₀), S(ν_n−h₁), …]`, so the evaluations can be
/// scheduled by the caller.
pub fn classify_from_values(
    nu_n: f64,
    kind: EntropyKind,
    config: &ClassifyConfig,
    values: &[f64],
) -> Result<NonAnalyticityReport> {
    let h = &config.offsets;
    if h.len() < 3 {
        return Err(invalid!("classification needs at least three offsets"));
    }
    if let Some(w) = h.windows(2).find(|w| abs(w[1] - 0.5 * w[0]) > 1e-12 * w[0]) {
        return Err(invalid!("offsets must halve successively ({} → {})", w[0], w[1]));
    }
    if values.len() != 1 + 2 * h.len() {
        return Err(invalid!("expected {} entropy values, got {}", 1 + 2 * h.len(), values.len()));
    }
    let alpha = kind.alpha().ok_or_else(|| domain!("classification needs a Rényi-type entropy"))?;
    let centre = values[0];
    let sides: Vec<SideDerivatives> = h
        .iter()
        .enumerate()
        .map(|(i, &d)| SideDerivatives {
            offset: d,
            left: (centre - values[1 + 2 * i]) / d,
            right: (values[2 + 2 * i] - centre) / d,
        })
        .collect();
    let richardson: Vec<f64> = sides.windows(2).map(|w| w[0].jump() - 2.0 * w[1].jump()).collect();
    let h_min = *h.last().unwrap_or(&1.0);
    // Each jump combines three values over h; the Richardson term two jumps.
    let noise_floor = 12.0 * config.entropy_noise / h_min;
    let estimates: Vec<f64> = richardson.windows(2).map(|w| log2(w[0] / w[1]) + 1.0).collect();

    let mut report = NonAnalyticityReport {
        nu_n,
        alpha,
        classification: Classification::Inconclusive,
        fitted_exponent: None,
        exponent_estimates: estimates.clone(),
        side_derivatives: sides,
        richardson: richardson.clone(),
        noise_floor,
        note: String::new(),
    };

    let finest = &richardson[richardson.len() - 2..];
    if finest.iter().all(|k| abs(*k) <= noise_floor) {
        // No singular part above noise: the jump is linear in h, i.e. both
        // one-sided derivatives agree and the curvature is finite.
        report.classification = Classification::Analytic;
        report.note = "singular part below noise floor at the finest offsets".into();
        return Ok(report);
    }
    if finest.iter().any(|k| abs(*k) <= noise_floor) {
        report.note = "singular part only partly resolved above noise".into();
        return Ok(report);
    }
    if finest[0].signum() != finest[1].signum() {
        report.note = "Richardson differences change sign under refinement".into();
        return Ok(report);
    }
    let p = *estimates.last().unwrap_or(&f64::NAN);
    report.fitted_exponent = Some(p);
    report.classification = Classification::from_exponent(p, config.band);
    // Successive resolutions must tell the same story.
    if estimates.len() >= 2 {
        let coarse = estimates[estimates.len() - 2];
        if !(abs(coarse - p) <= config.band) {
            report.classification = Classification::Inconclusive;
            report.note = alloc::format!("exponent estimates {coarse:.3} and {p:.3} disagree under refinement");
        }
    }
    Ok(report)
}

/// Log-log fit of the normalized tail sum near a special point.
#[derive(Debug, Clone, PartialEq)]
pub struct TailFit {
    pub nu_n: f64,
    pub alpha: f64,
    pub support: usize,
    pub offsets: Vec<f64>,
    /// `s_n^α = Σ_{i>d} λ_i^α / (ln 2 · Σ_{i≤d} λ_i^α)` at each offset.
    pub tail_sums: Vec<f64>,
    /// Fitted `2α k_m`; `None` when a tail sum is below the noise floor.
    pub slope: Option<f64>,
}

impl TailFit {
    /// `k_m = slope / (2α)`.
    pub fn implied_km(&self) -> Option<f64> {
        self.slope.map(|s| s / (2.0 * self.alpha))
    }
}

/// Tail sums below this are treated as noise.
pub const TAIL_NOISE_FLOOR: f64 = 1e-13;

/// `s_n^α` for a spectrum whose first `support` eigenvalues form the finite
/// part.
pub fn tail_sum(spectrum: &EntanglementSpectrum, support: usize, alpha: f64) -> f64 {
    let (head, tail) = spectrum.eigenvalues().split_at(support.min(spectrum.eigenvalues().len()));
    let pow = |l: &f64| if *l > 0.0 { powf(*l, alpha) } else { 0.0 };
    tail.iter().map(pow).sum::<f64>() / (LN_2 * head.iter().map(pow).sum::<f64>())
}

/// Fits the exponent of `s_n^α ∝ |ν−ν_n|^{2α k_m}` at `ν_n + offset` for each
/// offset, by least squares in log-log coordinates.
pub fn fit_tail_exponent<F: SpectrumFamily + ?Sized>(
    family: &F,
    nu_n: f64,
    alpha: f64,
    statistics: Statistics,
    offsets: &[f64],
) -> Result<TailFit> {
    let support = support_dimension(nu_n, statistics)?;
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(domain!("tail fit needs finite α > 0, got {alpha}"));
    }
    if offsets.len() < 2 || offsets.iter().any(|d| !(*d > 0.0)) {
        return Err(invalid!("tail fit needs at least two positive offsets"));
    }
    let mut tail_sums = Vec::with_capacity(offsets.len());
    for &d in offsets {
        tail_sums.push(tail_sum(&family.spectrum_at(nu_n + d)?, support, alpha));
    }
    let slope = if tail_sums.iter().all(|s| *s > TAIL_NOISE_FLOOR) {
        let xs: Vec<f64> = offsets.iter().map(|d| ln(*d)).collect();
        let ys: Vec<f64> = tail_sums.iter().map(|s| ln(*s)).collect();
        Some(least_squares_slope(&xs, &ys))
    } else {
        None
    };
    Ok(TailFit { nu_n, alpha, support, offsets: offsets.to_vec(), tail_sums, slope })
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
