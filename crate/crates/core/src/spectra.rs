//! Entanglement spectra and the entropy functionals evaluated on them.
//!
//! All entropies are in bits. A spectrum may carry a `truncation_error`: the
//! probability mass known to be missing from the listed eigenvalues (basis
//! truncation deficit, or the analytic tail of an infinite geometric
//! spectrum). Entropies are evaluated on the listed eigenvalues only.

use alloc::vec::Vec;

use crate::error::invalid;
use crate::fmath::{abs, log2, powf};
use crate::{Error, ModelSpec, Result};

/// Eigenvalues in `[−NEGATIVE_CLIP, 0)` are treated as round-off and set to zero.
pub const NEGATIVE_CLIP: f64 = 1e-12;

/// Tolerance on `Σλ + truncation_error = 1`.
pub const SUM_TOLERANCE: f64 = 1e-8;

/// `|α − 1|` below which the Rényi entropy is evaluated as von Neumann.
pub const ALPHA_ONE_WINDOW: f64 = 1e-6;

/// Which computation produced a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectrumSource {
    Exact1d,
    Variational1d,
    Numeric2d,
    HarmonicApprox,
    /// Spectrum supplied directly by the caller.
    External,
}

impl SpectrumSource {
    pub fn as_str(self) -> &'static str {
        match self {
            SpectrumSource::Exact1d => "exact-1d",
            SpectrumSource::Variational1d => "variational-1d",
            SpectrumSource::Numeric2d => "numeric-2d",
            SpectrumSource::HarmonicApprox => "harmonic-approx",
            SpectrumSource::External => "external",
        }
    }
}

/// Ordered 1-RDM eigenvalues with provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementSpectrum {
    eigenvalues: Vec<f64>,
    source: SpectrumSource,
    params: ModelSpec,
    truncation_error: f64,
}

impl EntanglementSpectrum {
    /// Validates, clips and sorts `eigenvalues`.
    pub fn new(
        mut eigenvalues: Vec<f64>,
        truncation_error: f64,
        source: SpectrumSource,
        params: ModelSpec,
    ) -> Result<Self> {
        for (k, value) in eigenvalues.iter_mut().enumerate() {
            if !value.is_finite() {
                return Err(invalid!("eigenvalue {k} is not finite"));
            }
            if *value < -NEGATIVE_CLIP {
                return Err(invalid!("eigenvalue {k} = {value:e} is negative"));
            }
            if *value < 0.0 {
                *value = 0.0;
            }
            if *value > 1.0 + SUM_TOLERANCE {
                return Err(invalid!("eigenvalue {k} = {value} exceeds one"));
            }
            *value = value.min(1.0);
        }
        if !truncation_error.is_finite() || truncation_error < -SUM_TOLERANCE {
            return Err(invalid!("truncation error {truncation_error:e} is invalid"));
        }
        let total: f64 = eigenvalues.iter().sum::<f64>() + truncation_error;
        if abs(total - 1.0) > SUM_TOLERANCE {
            return Err(invalid!("eigenvalues plus truncation error sum to {total:.12}, expected 1"));
        }
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        Ok(EntanglementSpectrum { eigenvalues, source, params, truncation_error: truncation_error.max(0.0) })
    }

    /// Builds a spectrum whose missing mass is whatever the eigenvalues leave
    /// out of one. Fails if they already exceed one beyond tolerance.
    pub fn from_partial(eigenvalues: Vec<f64>, source: SpectrumSource, params: ModelSpec) -> Result<Self> {
        let sum: f64 = eigenvalues.iter().filter(|v| **v > 0.0).sum();
        let missing = (1.0 - sum).max(0.0);
        Self::new(eigenvalues, missing, source, params)
    }

    /// Spectrum given directly by the caller, required to sum to one.
    pub fn from_probabilities(eigenvalues: Vec<f64>) -> Result<Self> {
        Self::new(eigenvalues, 0.0, SpectrumSource::External, ModelSpec::default())
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn source(&self) -> SpectrumSource {
        self.source
    }

    pub fn params(&self) -> &ModelSpec {
        &self.params
    }

    pub fn truncation_error(&self) -> f64 {
        self.truncation_error
    }

    pub fn largest(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    /// Number of eigenvalues strictly above `threshold`.
    pub fn count_above(&self, threshold: f64) -> usize {
        self.eigenvalues.iter().take_while(|v| **v > threshold).count()
    }

    /// The `n` largest eigenvalues, without re-normalization.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        let kept: Vec<f64> = self.eigenvalues.iter().copied().take(n).collect();
        let dropped: f64 = self.eigenvalues.iter().skip(n).sum();
        Self::new(kept, self.truncation_error + dropped, self.source, self.params)
    }

    pub fn von_neumann(&self) -> f64 {
        von_neumann(self)
    }

    pub fn renyi(&self, alpha: f64) -> Result<f64> {
        renyi(self, alpha)
    }

    pub fn linear_entropy(&self) -> f64 {
        linear_entropy(self)
    }

    pub fn min_entropy(&self) -> f64 {
        min_entropy(self)
    }
}

/// `−Σ λ log₂ λ`, with `0 log 0 = 0`.
pub fn von_neumann(spectrum: &EntanglementSpectrum) -> f64 {
    let s: f64 = spectrum.eigenvalues.iter().filter(|v| **v > 0.0).map(|v| -v * log2(*v)).sum();
    s.max(0.0)
}

/// Rényi entropy of order `alpha` in bits.
///
/// `alpha` within [`ALPHA_ONE_WINDOW`] of one gives the von Neumann entropy;
/// `f64::INFINITY` gives the min-entropy.
pub fn renyi(spectrum: &EntanglementSpectrum, alpha: f64) -> Result<f64> {
    if alpha.is_nan() || alpha <= 0.0 {
        return Err(Error::Domain(alloc::format!("Rényi order must be positive, got {alpha}")));
    }
    if alpha == f64::INFINITY {
        return Ok(min_entropy(spectrum));
    }
    if abs(alpha - 1.0) < ALPHA_ONE_WINDOW {
        return Ok(von_neumann(spectrum));
    }
    let lmax = spectrum.largest();
    if lmax <= 0.0 {
        return Err(invalid!("spectrum has no positive eigenvalue"));
    }
    // Factor out λ_max so large orders neither overflow nor underflow.
    let scaled: f64 = spectrum.eigenvalues.iter().filter(|v| **v > 0.0).map(|v| powf(v / lmax, alpha)).sum();
    Ok((alpha * log2(lmax) + log2(scaled)) / (1.0 - alpha))
}

/// `1 − Σ λ²`.
pub fn linear_entropy(spectrum: &EntanglementSpectrum) -> f64 {
    1.0 - spectrum.eigenvalues.iter().map(|v| v * v).sum::<f64>()
}

/// `−log₂ λ_max`.
pub fn min_entropy(spectrum: &EntanglementSpectrum) -> f64 {
    -log2(spectrum.largest())
}

/// All entropies of one spectrum, as written by the batch front end.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropySummary {
    pub von_neumann: f64,
    pub linear: f64,
    pub min: f64,
}

impl EntropySummary {
    pub fn of(spectrum: &EntanglementSpectrum) -> Self {
        EntropySummary {
            von_neumann: von_neumann(spectrum),
            linear: linear_entropy(spectrum),
            min: min_entropy(spectrum),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn spec(v: &[f64]) -> EntanglementSpectrum {
        EntanglementSpectrum::from_probabilities(v.to_vec()).unwrap()
    }

    #[test]
    fn pure_and_maximally_mixed() {
        assert_eq!(von_neumann(&spec(&[1.0])), 0.0);
        assert!((von_neumann(&spec(&[0.5, 0.5])) - 1.0).abs() < 1e-15);
        assert_eq!(linear_entropy(&spec(&[1.0])), 0.0);
        assert!((linear_entropy(&spec(&[0.5, 0.5])) - 0.5).abs() < 1e-15);
        assert!((renyi(&spec(&[0.5, 0.5]), f64::INFINITY).unwrap() - 1.0).abs() < 1e-15);
        assert!((renyi(&spec(&[0.25; 4]), 2.0).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn boson_nu2_oracle_spectrum() {
        let r3 = 3f64.sqrt();
        let s = spec(&[(2.0 + r3) / 6.0, 1.0 / 3.0, (2.0 - r3) / 6.0]);
        assert!((von_neumann(&s) - 1.15468).abs() < 1e-4);
        // Σλ² = 1/2 exactly.
        assert!((renyi(&s, 2.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fermion_nu3_linear_entropy() {
        let r = 198f64.sqrt();
        let (a, b) = ((15.0 + r) / 60.0, (15.0 - r) / 60.0);
        assert!((a - 0.484521).abs() < 1e-6 && (b - 0.015479).abs() < 1e-6);
        let s = spec(&[a, a, b, b]);
        // a + b = 1/2 and ab = 3/400 give exactly 1 − 2(a² + b²) = 0.53.
        assert!((linear_entropy(&s) - 0.53).abs() < 1e-12);
    }

    #[test]
    fn construction_clips_sorts_and_rejects() {
        let s = EntanglementSpectrum::from_probabilities(vec![0.25, -5e-13, 0.75]).unwrap();
        assert_eq!(s.eigenvalues(), &[0.75, 0.25, 0.0]);
        assert!(EntanglementSpectrum::from_probabilities(vec![1.0, -1e-9]).is_err());
        assert!(EntanglementSpectrum::from_probabilities(vec![0.5, 0.4]).is_err());
        assert!(EntanglementSpectrum::from_probabilities(vec![f64::NAN]).is_err());
        let partial =
            EntanglementSpectrum::new(vec![0.5, 0.4], 0.1, SpectrumSource::HarmonicApprox, ModelSpec::default())
                .unwrap();
        assert!((partial.truncation_error() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn renyi_rejects_nonpositive_order() {
        let s = spec(&[0.5, 0.5]);
        assert!(matches!(renyi(&s, 0.0), Err(Error::Domain(_))));
        assert!(matches!(renyi(&s, -1.0), Err(Error::Domain(_))));
        assert!(renyi(&s, f64::NAN).is_err());
    }

    #[test]
    fn renyi_near_one_is_von_neumann() {
        let s = spec(&[0.7, 0.2, 0.1]);
        assert_eq!(renyi(&s, 1.0 + 1e-7).unwrap(), von_neumann(&s));
    }

    #[test]
    fn truncation_keeps_mass_bookkeeping() {
        let s = spec(&[0.5, 0.3, 0.2]);
        let t = s.truncated(2).unwrap();
        assert_eq!(t.eigenvalues().len(), 2);
        assert!((t.truncation_error() - 0.2).abs() < 1e-15);
    }
}
