//! Harmonic approximation for the anisotropic two-dimensional model at large
//! interaction strength.
//!
//! Expanding the relative potential about its classical minima at
//! `(±x₀, 0)`, `x₀ = √2 (ν(ν−1))^{1/4}`, makes the ground state separable.
//! The 1-RDM eigenvalues are
//!
//! `λ_{k,k'} = P (1−ξ) ξ^k r^{k'}`, `P = 6√2 − 8`, `r = 17 − 12√2`,
//!
//! each occurring twice: the symmetrized double-well factor along `x` has
//! exactly doubly-degenerate Schmidt values in this limit. A single branch sums
//! to 1/2, so the two copies together are normalized, and this degeneracy is
//! what reproduces the one-dimensional limits `S_vN → 1 + H(r)`,
//! `S_le → 1 − √2/3` and `S_∞ → log₂(1 + 3/(2√2))`.
//!
//! `ξ(ε) = ((ε²−1)^{1/4} − √ε)² / ((ε²−1)^{1/4} + √ε)²` tends to 1 as `ε → 1⁺`
//! (logarithmically divergent entropies) and to 0 as `ε → ∞`. Parameters can
//! be given through the offset `δ = ε − 1` so that `ε` within `1e-16` of one
//! remains representable.

use alloc::vec::Vec;

use crate::error::domain;
use crate::fmath::{abs, exp, expm1, ln, log2, sqrt, LN_2};
use crate::spectra::ALPHA_ONE_WINDOW;
use crate::{EntanglementSpectrum, ModelSpec, Result, SpectrumSource};

/// `r = 17 − 12√2`, ratio of the geometric `x` spectrum.
pub const R_X: f64 = 0.029437251522859414;
/// `P = 6√2 − 8 = (1 − r)/2`, largest single-branch `x` eigenvalue.
pub const P_X: f64 = 0.4852813742385703;
/// Eigenvalue multiplicity of every `(k, k')`.
pub const DEGENERACY: usize = 2;
/// `S^x = 1 + H(r)`.
pub const S_X: f64 = 1.197371889;

/// Anisotropy together with the derived `ξ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicParams {
    offset: f64,
    ln_xi: f64,
    one_minus_xi: f64,
}

impl HarmonicParams {
    /// `ε > 1`; `ε = ∞` gives the one-dimensional limit.
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 1.0) {
            return Err(domain!("anisotropy ε = {epsilon} must exceed 1"));
        }
        if epsilon == f64::INFINITY {
            return Ok(Self::one_dimensional_limit());
        }
        Self::from_offset(epsilon - 1.0)
    }

    /// `ε = 1 + δ` with `δ > 0`.
    pub fn from_offset(delta: f64) -> Result<Self> {
        if !(delta > 0.0) || delta.is_nan() {
            return Err(domain!("anisotropy offset δ = {delta} must be positive"));
        }
        if delta == f64::INFINITY {
            return Ok(Self::one_dimensional_limit());
        }
        // a = (ε²−1)^{1/4}, b = √ε. Since a⁴ − b⁴ = −1,
        // |a − b| = 1/((a+b)(a²+b²)) and 1 − ξ = 4ab/(a+b)², both free of
        // cancellation for any ε.
        let a = sqrt(sqrt(delta * (2.0 + delta)));
        let b = sqrt(1.0 + delta);
        let s = a + b;
        let ln_xi = -2.0 * (2.0 * ln(s) + ln(a * a + b * b));
        let one_minus_xi = 4.0 * a * b / (s * s);
        Ok(HarmonicParams { offset: delta, ln_xi, one_minus_xi })
    }

    /// `ε → ∞`: `ξ = 0`.
    pub fn one_dimensional_limit() -> Self {
        HarmonicParams { offset: f64::INFINITY, ln_xi: f64::NEG_INFINITY, one_minus_xi: 1.0 }
    }

    pub fn epsilon(&self) -> f64 {
        1.0 + self.offset
    }

    /// `δ = ε − 1`.
    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn xi(&self) -> f64 {
        exp(self.ln_xi)
    }

    pub fn ln_xi(&self) -> f64 {
        self.ln_xi
    }

    pub fn one_minus_xi(&self) -> f64 {
        self.one_minus_xi
    }

    /// `√(ε² − 1)`, the relative-motion frequency along `y`.
    pub fn y_frequency(&self) -> f64 {
        sqrt(self.offset * (2.0 + self.offset))
    }

    pub fn provenance(&self) -> ModelSpec {
        ModelSpec::anisotropic(self.epsilon())
    }
}

/// `ξ(ε)`.
pub fn xi(epsilon: f64) -> Result<f64> {
    Ok(HarmonicParams::new(epsilon)?.xi())
}

/// Classical minimum `x₀ = √2 (ν(ν−1))^{1/4}` of the relative potential along `x`.
pub fn classical_minimum(strength: f64) -> f64 {
    sqrt(2.0) * sqrt(sqrt(strength))
}

/// Value `√(ν(ν−1))` of the relative potential at its minima.
pub fn potential_minimum(strength: f64) -> f64 {
    sqrt(strength)
}

/// Shannon entropy in bits of the geometric distribution `(1−q) q^k`, from
/// `ln q` and `1 − q`.
fn geometric_entropy(ln_q: f64, one_minus_q: f64) -> f64 {
    if ln_q == f64::NEG_INFINITY {
        return 0.0;
    }
    let q = exp(ln_q);
    -(ln(one_minus_q) + q * ln_q / one_minus_q) / LN_2
}

/// `H(q) = −log₂(1−q) − q log₂ q/(1−q)`.
pub fn geometric_entropy_of(q: f64) -> f64 {
    if q == 0.0 {
        return 0.0;
    }
    geometric_entropy(ln(q), 1.0 - q)
}

/// `S^x = 1 + H(r)`.
pub fn s_x() -> f64 {
    1.0 + geometric_entropy_of(R_X)
}

/// `S^y(ε) = H(ξ)`.
pub fn s_y(params: &HarmonicParams) -> f64 {
    geometric_entropy(params.ln_xi, params.one_minus_xi)
}

/// `log₂ Σ_k q_k^α` for the geometric distribution `(1−q) q^k`, `q = e^{ln_q}`.
fn ln_power_sum(ln_q: f64, one_minus_q: f64, alpha: f64) -> f64 {
    // (1−q)^α / (1 − q^α)
    alpha * ln(one_minus_q) - ln(-expm1(alpha * ln_q))
}

/// `S^α_x = 1/(1−α) log₂(2 P^α / (1 − r^α))`, the degeneracy kept inside the
/// logarithm. Limits: `S^x` at `α → 1`, `−log₂ P` at `α → ∞`.
pub fn renyi_x(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if alpha == f64::INFINITY {
        return Ok(-log2(P_X));
    }
    if abs(alpha - 1.0) <= ALPHA_ONE_WINDOW {
        return Ok(s_x());
    }
    let ln_sum = LN_2 + alpha * ln(P_X) - ln(-expm1(alpha * ln(R_X)));
    Ok(ln_sum / ((1.0 - alpha) * LN_2))
}

/// The alternative reading `1/(1−α) log₂(P^α/(1 − r^α)) + 1`, kept for
/// comparison. It exceeds [`renyi_x`] by `1 − 1/(1−α)`, so it matches neither
/// the `α → 1` nor the `α → ∞` limit.
pub fn renyi_x_plus_one(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if alpha == f64::INFINITY {
        return Ok(-log2(P_X) + 1.0);
    }
    if abs(alpha - 1.0) <= ALPHA_ONE_WINDOW {
        return Err(domain!("the +1 form is singular at α = 1"));
    }
    let ln_sum = alpha * ln(P_X) - ln(-expm1(alpha * ln(R_X)));
    Ok(ln_sum / ((1.0 - alpha) * LN_2) + 1.0)
}

/// `S^α_y = 1/(1−α) log₂((1−ξ)^α / (1 − ξ^α))`.
pub fn renyi_y(params: &HarmonicParams, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if params.ln_xi == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    if alpha == f64::INFINITY {
        return Ok(-log2(params.one_minus_xi));
    }
    if abs(alpha - 1.0) <= ALPHA_ONE_WINDOW {
        return Ok(s_y(params));
    }
    Ok(ln_power_sum(params.ln_xi, params.one_minus_xi, alpha) / ((1.0 - alpha) * LN_2))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0) {
        return Err(domain!("Rényi order α = {alpha} must be positive"));
    }
    Ok(())
}

/// `1 − 2Σλ² = 1 − (√2/3)(1−ξ)/(1+ξ)`; the prefactor equals
/// `(3√2−4)/(9−6√2) = (1−r)/(2(1+r))`.
pub fn linear_entropy(params: &HarmonicParams) -> f64 {
    let xi = params.xi();
    1.0 - le_coefficient() * params.one_minus_xi / (1.0 + xi)
}

/// `(1−r)/(2(1+r))`.
pub fn le_coefficient() -> f64 {
    (1.0 - R_X) / (2.0 * (1.0 + R_X))
}

/// Entropies of the full (untruncated) spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct HaEntropies {
    pub epsilon: f64,
    pub von_neumann: f64,
    pub linear: f64,
    pub min: f64,
    /// `(α, S^α)` in the order requested.
    pub renyi: Vec<(f64, f64)>,
}

pub fn ha_entropies(params: &HarmonicParams, alphas: &[f64]) -> Result<HaEntropies> {
    let renyi = alphas.iter().map(|&a| Ok((a, renyi_x(a)? + renyi_y(params, a)?))).collect::<Result<Vec<_>>>()?;
    Ok(HaEntropies {
        epsilon: params.epsilon(),
        von_neumann: s_x() + s_y(params),
        linear: linear_entropy(params),
        min: renyi_x(f64::INFINITY)? + renyi_y(params, f64::INFINITY)?,
        renyi,
    })
}

/// `−ln(ε−1)/ln 16`, the leading behaviour of `S_vN` as `ε → 1⁺`; accepted
/// for `ε ∈ (1, 1.01]`.
pub fn ha_asymptotic_vn(epsilon: f64) -> Result<f64> {
    if !(epsilon > 1.0 && epsilon <= 1.01) {
        return Err(domain!("asymptotic form applies for ε ∈ (1, 1.01], got {epsilon}"));
    }
    asymptotic_vn_offset(epsilon - 1.0)
}

/// [`ha_asymptotic_vn`] in terms of `δ = ε − 1 ∈ (0, 0.01]`.
pub fn asymptotic_vn_offset(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta <= 0.01) {
        return Err(domain!("asymptotic form applies for ε − 1 ∈ (0, 0.01], got {delta}"));
    }
    Ok(-ln(delta) / ln(16.0))
}

/// The eigenvalue set of the harmonic approximation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HaSpectrum {
    params: HarmonicParams,
}

impl HaSpectrum {
    pub fn new(params: HarmonicParams) -> Self {
        HaSpectrum { params }
    }

    pub fn params(&self) -> &HarmonicParams {
        &self.params
    }

    /// `λ_{k,k'}` (one of its two copies).
    pub fn eigenvalue(&self, k: u32, k_prime: u32) -> f64 {
        exp(self.ln_eigenvalue(k, k_prime))
    }

    fn ln_eigenvalue(&self, k: u32, k_prime: u32) -> f64 {
        let y = if k == 0 { 0.0 } else { k as f64 * self.params.ln_xi };
        ln(P_X) + ln(self.params.one_minus_xi) + y + k_prime as f64 * ln(R_X)
    }

    /// Mass of one branch, `Σ_{k<K, k'<K'} λ_{k,k'}`, and the analytic tail
    /// `1/2 − that`, computed without subtraction.
    pub fn branch_partial_sum(&self, k_max: u32, k_prime_max: u32) -> (f64, f64) {
        // Σ_{k<K} (1−ξ)ξ^k = 1 − ξ^K;  Σ_{k'<K'} P r^{k'} = (1 − r^{K'})/2.
        let y_tail = if self.params.ln_xi == f64::NEG_INFINITY || k_max == 0 {
            if k_max == 0 {
                1.0
            } else {
                0.0
            }
        } else {
            exp(k_max as f64 * self.params.ln_xi)
        };
        let x_tail = exp(k_prime_max as f64 * ln(R_X));
        let kept = 0.5 * (1.0 - y_tail) * (1.0 - x_tail);
        let tail = 0.5 * (y_tail + x_tail - y_tail * x_tail);
        (kept, tail)
    }

    /// The `n` largest eigenvalues with multiplicity, descending.
    pub fn largest(&self, n: usize) -> Vec<f64> {
        let distinct = n.div_ceil(DEGENERACY);
        let mut logs = Vec::with_capacity(distinct * distinct);
        for k in 0..distinct as u32 {
            for kp in 0..distinct as u32 {
                logs.push(self.ln_eigenvalue(k, kp));
            }
        }
        logs.sort_by(|a, b| b.total_cmp(a));
        logs.into_iter().take(distinct).flat_map(|l| core::iter::repeat_n(exp(l), DEGENERACY)).take(n).collect()
    }

    /// The `n` largest eigenvalues as a spectrum whose truncation error is the
    /// missing mass.
    pub fn truncated_spectrum(&self, n: usize) -> Result<EntanglementSpectrum> {
        let kept = self.largest(n);
        let mass: f64 = kept.iter().sum();
        EntanglementSpectrum::new(kept, (1.0 - mass).max(0.0), SpectrumSource::HarmonicApprox, self.params.provenance())
    }
}

/// von Neumann entropy of the `n` largest eigenvalues only, with no tail
/// correction: `−Σ_{i<n} λ_i log₂ λ_i`.
pub fn truncated_von_neumann(params: &HarmonicParams, n: usize) -> Result<f64> {
    Ok(HaSpectrum::new(*params).truncated_spectrum(n)?.von_neumann())
}

/// [`truncated_von_neumann`] over a grid of anisotropy offsets `δ = ε − 1`.
pub fn ha_truncated_vn(offsets: &[f64], n: usize) -> Result<Vec<f64>> {
    offsets.iter().map(|&d| truncated_von_neumann(&HarmonicParams::from_offset(d)?, n)).collect()
}

/// Harmonic-approximation energies in oscillator units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HaEnergies {
    /// `E^R = (n+½) + ε(m+½)`.
    pub center_of_mass: f64,
    /// `E^r = 2(n+½) + √(ε²−1)(m+½)`, measured from the potential minimum.
    pub relative: f64,
}

pub fn ha_energies(params: &HarmonicParams, n: u32, m: u32) -> HaEnergies {
    let (n, m) = (n as f64 + 0.5, m as f64 + 0.5);
    HaEnergies { center_of_mass: n + params.epsilon() * m, relative: 2.0 * n + params.y_frequency() * m }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_match_closed_forms() {
        let s2 = 2f64.sqrt();
        // 17 − 12√2 loses ~4e-15 to cancellation in f64.
        assert!((R_X - (17.0 - 12.0 * s2)).abs() < 1e-14);
        assert!((P_X - (6.0 * s2 - 8.0)).abs() < 1e-15);
        assert!((P_X - (1.0 - R_X) / 2.0).abs() < 1e-16);
        assert!((s_x() - S_X).abs() < 1e-9);
    }

    #[test]
    fn xi_values() {
        let e = 2f64.sqrt();
        let direct = {
            let a = (e * e - 1.0f64).powf(0.25);
            let b = e.sqrt();
            ((a - b) / (a + b)).powi(2)
        };
        assert!((xi(e).unwrap() - direct).abs() < 1e-15);
        assert!((xi(e).unwrap() - 0.0074697).abs() < 1e-7);
        assert!(xi(100.0).unwrap() <= 2e-9);
        // 1 − ξ ≈ 4 (2δ)^{1/4} near ε = 1, so ξ ≥ 0.999 needs δ ≲ 2e-15.
        assert!((HarmonicParams::from_offset(1e-8).unwrap().xi() - 0.9535432202160663).abs() < 1e-13);
        assert!((HarmonicParams::from_offset(1e-16).unwrap().xi() - 0.9995244302709056).abs() < 1e-13);
        assert!(xi(1.0).is_err());
        assert!(xi(0.5).is_err());
        let mut last = 1.0;
        for k in 1..200 {
            let x = xi(1.0 + 0.05 * k as f64).unwrap();
            assert!(x < last && x > 0.0);
            last = x;
        }
    }

    #[test]
    fn full_and_truncated_mass() {
        let h = HaSpectrum::new(HarmonicParams::new(1.3).unwrap());
        let (kept, tail) = h.branch_partial_sum(40, 12);
        assert!((2.0 * (kept + tail) - 1.0).abs() < 1e-12);
        let brute: f64 = (0..40).flat_map(|k| (0..12).map(move |kp| (k, kp))).map(|(k, kp)| h.eigenvalue(k, kp)).sum();
        assert!((brute - kept).abs() < 1e-12);
    }

    #[test]
    fn le_matches_direct_sum() {
        let p = HarmonicParams::new(1.7).unwrap();
        let h = HaSpectrum::new(p);
        let sq: f64 = h.largest(4000).iter().map(|l| l * l).sum();
        assert!((linear_entropy(&p) - (1.0 - sq)).abs() < 1e-12);
        let s2 = 2f64.sqrt();
        let printed = (3.0 * s2 - 4.0) / (9.0 - 6.0 * s2);
        assert!((le_coefficient() - printed).abs() < 1e-14);
        assert!((printed - 0.471404).abs() < 1e-6);
    }

    #[test]
    fn printed_sy_form_agrees() {
        for &e in &[1.05, 1.3, 2.0, 5.0] {
            let p = HarmonicParams::new(e).unwrap();
            let x = p.xi();
            let printed = -((1.0 - x) * 2.0 * (1.0 - x).ln() + 2.0 * x * x.ln()) / (4f64.ln() * (1.0 - x));
            assert!((s_y(&p) - printed).abs() < 1e-12);
        }
    }

    #[test]
    fn renyi_limits() {
        assert!((renyi_x(1.0 + 1e-6).unwrap() - S_X).abs() < 1e-6);
        assert!((renyi_x(1.0 - 1e-6).unwrap() - S_X).abs() < 1e-6);
        assert!((renyi_x(1.0 + 1e-3).unwrap() - S_X).abs() < 1e-3);
        let min = (1.0 + 3.0 / (2.0 * 2f64.sqrt())).log2();
        assert!((renyi_x(f64::INFINITY).unwrap() - min).abs() < 1e-12);
        assert!((renyi_x(400.0).unwrap() - min).abs() < 1e-2);
        assert!((renyi_x_plus_one(400.0).unwrap() - min - 1.0).abs() < 1e-2);
        assert!(renyi_x(0.0).is_err());
    }

    #[test]
    fn renyi_matches_direct_spectrum() {
        let p = HarmonicParams::new(1.8).unwrap();
        let s = HaSpectrum::new(p).truncated_spectrum(6000).unwrap();
        for &a in &[0.5, 2.0, 3.0] {
            let e = ha_entropies(&p, &[a]).unwrap();
            assert!((e.renyi[0].1 - s.renyi(a).unwrap()).abs() < 1e-9, "α={a}");
        }
        let e = ha_entropies(&p, &[]).unwrap();
        assert!((e.von_neumann - s.von_neumann()).abs() < 1e-9);
        assert!((e.min - s.min_entropy()).abs() < 1e-12);
    }

    #[test]
    fn one_dimensional_limit() {
        let e = ha_entropies(&HarmonicParams::one_dimensional_limit(), &[2.0]).unwrap();
        assert!((e.von_neumann - 1.197371889).abs() < 1e-8);
        assert!((e.linear - (1.0 - 2f64.sqrt() / 3.0)).abs() < 1e-12);
        assert!((e.min - 1.043106).abs() < 1e-5);
        let far = ha_entropies(&HarmonicParams::new(1e6).unwrap(), &[]).unwrap();
        assert!((far.von_neumann - 1.197371889).abs() < 1e-8);
    }

    #[test]
    fn asymptote_arithmetic() {
        let a4 = asymptotic_vn_offset(1e-4).unwrap();
        let a8 = asymptotic_vn_offset(1e-8).unwrap();
        assert!((a8 - a4 - 1e4f64.ln() / 16f64.ln()).abs() < 1e-9);
        assert!((a8 - a4 - core::f64::consts::LOG2_10).abs() < 1e-12);
        assert!((ha_asymptotic_vn(1.000001).unwrap() - 4.982892).abs() < 1e-5);
        assert!(ha_asymptotic_vn(1.02).is_err());
        assert!(ha_asymptotic_vn(1.0).is_err());
    }

    #[test]
    fn divergence_rate_matches_asymptote() {
        // dS/d(−ln δ) → 1/ln 16 as δ → 0 even though the ratio converges slowly.
        let s = |d: f64| s_x() + s_y(&HarmonicParams::from_offset(d).unwrap());
        let slope = (s(1e-40) - s(1e-36)) / (4.0 * 10f64.ln());
        assert!((slope * 16f64.ln() - 1.0).abs() < 1e-3, "{slope}");
    }

    #[test]
    fn energies() {
        let p = HarmonicParams::new(5f64.sqrt()).unwrap();
        assert!((ha_energies(&p, 0, 0).relative - 2.0).abs() < 1e-14);
        let p = HarmonicParams::new(2.0).unwrap();
        assert_eq!(ha_energies(&p, 0, 0).center_of_mass, 1.5);
        let e0 = |e: f64| ha_energies(&HarmonicParams::new(e).unwrap(), 0, 0).relative;
        for &e in &[1.2, 1.5, 2.5] {
            let h = 1e-5;
            let d = (e0(e + h) - e0(e - h)) / (2.0 * h);
            let w = (e * e - 1.0f64).sqrt();
            assert!((w * d - e / 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn truncated_curve_has_interior_maximum() {
        let offsets: Vec<f64> = (0..=120).map(|i| 10f64.powf(-24.0 + 0.2 * i as f64)).collect();
        let curve = ha_truncated_vn(&offsets, 50).unwrap();
        let (imax, _) =
            curve.iter().enumerate().fold((0, f64::MIN), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        assert!(imax > 0 && imax < curve.len() - 1);
        let exact = ha_entropies(&HarmonicParams::new(2.0).unwrap(), &[]).unwrap().von_neumann;
        let many = HaSpectrum::new(HarmonicParams::new(2.0).unwrap()).truncated_spectrum(400).unwrap();
        assert!((many.von_neumann() - exact).abs() < 1e-10);
    }
}
