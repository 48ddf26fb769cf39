//! One-dimensional two-particle Calogero ground states.
//!
//! `ψ = C s |x₁−x₂|^ν e^{−(x₁²+x₂²)/2}` with `E = ν + 1`, where `s = 1` for
//! bosons and `sgn(x₁−x₂)` for fermions. At `ν = 2n` (bosons) and `ν = 2n+1`
//! (fermions) the Jastrow factor is a polynomial and the 1-RDM has finite
//! support; [`exact_rdm_1d`] builds that finite coefficient matrix directly.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{domain, invalid};
use crate::fmath::{abs, exp, ln, ln_factorial, LN_2, PI};
use crate::hermite::{
    assemble_coefficients, quadrature_norm, CoefficientMatrix, Exchange, JastrowPair, PairAmplitude, QuadraturePlan,
    Symmetry, MAX_HERMITE_INDEX,
};
use crate::linalg::Matrix;
use crate::{EntanglementSpectrum, ModelSpec, Result, SpectrumSource, Statistics};

/// Default basis size for variational spectra.
pub const DEFAULT_BASIS: usize = 50;
/// Default quadrature order for variational spectra.
pub const DEFAULT_QUADRATURE: usize = 120;
/// Largest `n` accepted by [`exact_rdm_1d`]; beyond it the alternating
/// binomial sums lose too many digits in double precision.
pub const MAX_EXACT_N: u32 = 20;

/// Relative gap allowed between the two members of a degenerate fermion pair.
pub const PAIR_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec1D {
    nu: f64,
    statistics: Statistics,
}

impl ModelSpec1D {
    /// Bosons need `ν ≥ 0`, fermions `ν ≥ 1`.
    pub fn new(nu: f64, statistics: Statistics) -> Result<Self> {
        let min = match statistics {
            Statistics::Boson => 0.0,
            Statistics::Fermion => 1.0,
        };
        if !nu.is_finite() || nu < min {
            return Err(invalid!("{statistics} requires finite ν ≥ {min}, got {nu}"));
        }
        Ok(ModelSpec1D { nu, statistics })
    }

    pub fn boson(nu: f64) -> Result<Self> {
        Self::new(nu, Statistics::Boson)
    }

    pub fn fermion(nu: f64) -> Result<Self> {
        Self::new(nu, Statistics::Fermion)
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    /// Interaction strength `ν(ν−1)`.
    pub fn strength(&self) -> f64 {
        self.nu * (self.nu - 1.0)
    }

    pub fn exchange(&self) -> Exchange {
        match self.statistics {
            Statistics::Boson => Exchange::Symmetric,
            Statistics::Fermion => Exchange::Antisymmetric,
        }
    }

    pub fn provenance(&self) -> ModelSpec {
        ModelSpec::one_dimensional(self.nu, self.statistics)
    }
}

/// Normalized ground state and its energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundState1D {
    spec: ModelSpec1D,
    amplitude: JastrowPair,
}

impl GroundState1D {
    pub fn spec(&self) -> ModelSpec1D {
        self.spec
    }

    pub fn amplitude(&self) -> &JastrowPair {
        &self.amplitude
    }

    /// `E = ν + 1` in oscillator units.
    pub fn energy(&self) -> f64 {
        self.spec.nu + 1.0
    }

    /// `C` from `|C|⁻² = √π 2^ν Γ(ν+½)`.
    pub fn normalization(&self) -> f64 {
        self.amplitude.prefactor()
    }

    pub fn value(&self, x1: f64, x2: f64) -> f64 {
        self.amplitude.value(x1, x2)
    }
}

pub fn ground_state_1d(spec: ModelSpec1D) -> Result<GroundState1D> {
    Ok(GroundState1D { spec, amplitude: JastrowPair::normalized(spec.nu, spec.exchange())? })
}

/// Finite coefficient matrix and spectrum at a finite-support point.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactRdm {
    pub coefficients: CoefficientMatrix,
    pub spectrum: EntanglementSpectrum,
}

/// Exact 1-RDM at `ν = 2n` (bosons) or `ν = 2n+1` (fermions).
///
/// `(x₁−x₂)^ν` is expanded binomially and each `x^k e^{−x²/2}` is rewritten
/// in Hermite functions, `x^k e^{−x²/2} = Σ_m k!/(2^k m!(k−2m)!) φ_{k−2m}/N_{k−2m}`
/// with `N_j = (2^j j! √π)^{−1/2}`. The result has dimension `ν + 1` and is
/// normalized at the end.
pub fn exact_rdm_1d(n: u32, statistics: Statistics) -> Result<ExactRdm> {
    if n > MAX_EXACT_N {
        return Err(domain!("exact finite spectrum limited to n ≤ {MAX_EXACT_N}; use the variational route"));
    }
    let nu = match statistics {
        Statistics::Boson => 2 * n,
        Statistics::Fermion => 2 * n + 1,
    } as usize;
    let dim = nu + 1;
    let monomials = monomial_expansions(nu);
    let mut c = Matrix::zeros(dim, dim);
    for k in 0..=nu {
        // (x − z)^ν = Σ_k C(ν,k) x^k (−z)^{ν−k}
        let sign = if (nu - k).is_multiple_of(2) { 1.0 } else { -1.0 };
        let binom = exp(ln_factorial(nu as u32) - ln_factorial(k as u32) - ln_factorial((nu - k) as u32));
        for (i, &a) in monomials[k].iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in monomials[nu - k].iter().enumerate() {
                c[(i, j)] += sign * binom * a * b;
            }
        }
    }
    let symmetry = match statistics {
        Statistics::Boson => Symmetry::Symmetric,
        Statistics::Fermion => Symmetry::Antisymmetric,
    };
    let norm = c.frobenius_norm();
    c.scale(1.0 / norm);
    let coefficients = CoefficientMatrix::new(c, symmetry)?;
    let lambdas: Vec<f64> = coefficients.schmidt_values()?.into_iter().map(|l| l * l).collect();
    let total: f64 = lambdas.iter().sum();
    let lambdas = lambdas.into_iter().map(|l| l / total).collect();
    let spectrum = EntanglementSpectrum::new(
        lambdas,
        0.0,
        SpectrumSource::Exact1d,
        ModelSpec::one_dimensional(nu as f64, statistics),
    )?;
    Ok(ExactRdm { coefficients, spectrum })
}

/// Exact route addressed by `ν`; fails unless `ν` is a finite-support point.
pub fn exact_rdm_for_nu(nu: f64, statistics: Statistics) -> Result<ExactRdm> {
    let parity_ok = |k: f64| match statistics {
        Statistics::Boson => k % 2.0 == 0.0,
        Statistics::Fermion => k % 2.0 == 1.0,
    };
    if !(nu >= 0.0) || nu % 1.0 != 0.0 || !parity_ok(nu) {
        return Err(domain!(
            "ν = {nu} is not a finite-support point for {statistics}s \
             (need even ν for bosons, odd ν for fermions); use variational_spectrum_1d"
        ));
    }
    exact_rdm_1d((nu as u32) / 2, statistics)
}

/// Row `k` holds the Hermite-function coefficients of `x^k e^{−x²/2}`.
fn monomial_expansions(max_k: usize) -> Vec<Vec<f64>> {
    let ln_sqrt_pi = 0.5 * ln(PI);
    (0..=max_k)
        .map(|k| {
            let mut row = vec![0.0; max_k + 1];
            for m in 0..=k / 2 {
                let j = k - 2 * m;
                let ln_coef =
                    ln_factorial(k as u32) - k as f64 * LN_2 - ln_factorial(m as u32) - ln_factorial(j as u32);
                // 1/N_j = (2^j j! √π)^{1/2}
                let ln_inv_norm = 0.5 * (j as f64 * LN_2 + ln_factorial(j as u32) + ln_sqrt_pi);
                row[j] = exp(ln_coef + ln_inv_norm);
            }
            row
        })
        .collect()
}

/// Squared Schmidt values of the ground state in the first `m` Hermite
/// functions, using `q`-point rules in both rotated coordinates.
///
/// The returned spectrum carries the basis deficit `1 − Σλ` as its truncation
/// error rather than failing on it, so scans over small `ν` (whose cusp makes
/// the expansion converge slowly) still produce a curve.
pub fn variational_spectrum_1d(spec: ModelSpec1D, m: usize, q: usize) -> Result<EntanglementSpectrum> {
    if m == 0 || m > MAX_HERMITE_INDEX {
        return Err(domain!("basis size {m} outside 1..={MAX_HERMITE_INDEX}"));
    }
    let state = ground_state_1d(spec)?;
    let c = assemble_coefficients(state.amplitude(), m, QuadraturePlan::uniform(q))?;
    c.spectrum(SpectrumSource::Variational1d, spec.provenance())
}

/// Largest relative gap inside consecutive pairs `(λ_{2k}, λ_{2k+1})` among
/// eigenvalues above `floor`.
pub fn pairing_defect(eigenvalues: &[f64], floor: f64) -> f64 {
    eigenvalues
        .chunks(2)
        .take_while(|pair| pair[0] > floor)
        .map(|pair| {
            let second = pair.get(1).copied().unwrap_or(0.0);
            abs(pair[0] - second) / pair[0]
        })
        .fold(0.0, f64::max)
}

/// Checks the amplitude norm by quadrature (used to cross-check the closed form).
pub fn quadrature_norm_1d(spec: ModelSpec1D, q: usize) -> Result<f64> {
    let state = ground_state_1d(spec)?;
    quadrature_norm(state.amplitude(), QuadraturePlan::uniform(q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) {
        assert!(a.len() >= b.len());
        for (k, (x, y)) in a.iter().zip(b).enumerate() {
            assert!((x - y).abs() < tol, "k={k}: {x} vs {y}");
        }
    }

    #[test]
    fn spec_validation() {
        assert!(ModelSpec1D::boson(0.0).is_ok());
        assert!(ModelSpec1D::fermion(0.5).is_err());
        assert!(ModelSpec1D::boson(-0.1).is_err());
        assert!(ModelSpec1D::boson(f64::NAN).is_err());
    }

    #[test]
    fn energies_and_norms() {
        let g = ground_state_1d(ModelSpec1D::boson(2.0).unwrap()).unwrap();
        assert_eq!(g.energy(), 3.0);
        let free = ground_state_1d(ModelSpec1D::boson(0.0).unwrap()).unwrap();
        assert_eq!(free.energy(), 1.0);
        assert!((free.value(0.3, -0.4) - exp(-0.125) / PI.sqrt()).abs() < 1e-15);
        let n = quadrature_norm_1d(ModelSpec1D::boson(3.5).unwrap(), 60).unwrap();
        assert!((n - 1.0).abs() < 1e-10);
    }

    #[test]
    fn exact_small_spectra() {
        let f0 = exact_rdm_1d(0, Statistics::Fermion).unwrap();
        close(f0.spectrum.eigenvalues(), &[0.5, 0.5], 1e-14);

        let r3 = 3f64.sqrt();
        let b1 = exact_rdm_1d(1, Statistics::Boson).unwrap();
        close(b1.spectrum.eigenvalues(), &[(2.0 + r3) / 6.0, 1.0 / 3.0, (2.0 - r3) / 6.0], 1e-14);

        let r = 198f64.sqrt();
        let (a, b) = ((15.0 + r) / 60.0, (15.0 - r) / 60.0);
        let f1 = exact_rdm_1d(1, Statistics::Fermion).unwrap();
        close(f1.spectrum.eigenvalues(), &[a, a, b, b], 1e-14);
    }

    #[test]
    fn exact_fermion_matrix_matches_hand_expansion() {
        // Up to normalization and overall sign: c01 = −3/√2, c03 = −√3/2, c12 = 3/2.
        let f1 = exact_rdm_1d(1, Statistics::Fermion).unwrap();
        let raw = [(0, 1, -3.0 / 2f64.sqrt()), (0, 3, -(3f64.sqrt()) / 2.0), (1, 2, 1.5)];
        let norm = (2.0 * raw.iter().map(|e| e.2 * e.2).sum::<f64>()).sqrt();
        let c = &f1.coefficients;
        let sign = (c.get(0, 1) * raw[0].2).signum();
        for &(i, j, v) in &raw {
            assert!((sign * c.get(i, j) - v / norm).abs() < 1e-14);
            assert!((sign * c.get(j, i) + v / norm).abs() < 1e-14);
        }
    }

    #[test]
    fn exact_route_rejects_non_support_points() {
        assert!(exact_rdm_for_nu(2.5, Statistics::Boson).is_err());
        assert!(exact_rdm_for_nu(3.0, Statistics::Boson).is_err());
        assert!(exact_rdm_for_nu(4.0, Statistics::Fermion).is_err());
        assert!(exact_rdm_for_nu(5.0, Statistics::Fermion).is_ok());
    }

    #[test]
    fn variational_matches_exact() {
        let v = variational_spectrum_1d(ModelSpec1D::boson(2.0).unwrap(), 50, 120).unwrap();
        let e = exact_rdm_1d(1, Statistics::Boson).unwrap();
        close(v.eigenvalues(), e.spectrum.eigenvalues(), 1e-10);
        assert!(v.eigenvalues()[3..].iter().all(|&l| l <= 1e-12));

        let f = variational_spectrum_1d(ModelSpec1D::fermion(3.0).unwrap(), 50, 120).unwrap();
        assert_eq!(f.count_above(1e-10), 4);
        assert!(pairing_defect(f.eigenvalues(), 1e-10) < PAIR_TOLERANCE);
    }

    #[test]
    fn variational_reports_deficit_for_cusped_states() {
        let v = variational_spectrum_1d(ModelSpec1D::boson(0.5).unwrap(), 50, 120).unwrap();
        assert!(v.truncation_error() > 1e-6);
        let total: f64 = v.eigenvalues().iter().sum::<f64>() + v.truncation_error();
        assert!((total - 1.0).abs() < 1e-8);
    }
}
