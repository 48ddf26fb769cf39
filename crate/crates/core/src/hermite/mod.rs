//! Harmonic-oscillator basis, quadrature rules and Schmidt coefficient
//! matrices.
//!
//! The normalized Hermite functions are
//! `φ_n(x) = (2ⁿ n! √π)^{-1/2} H_n(x) e^{−x²/2}`. Quadrature code works with the
//! polynomial part `p_n(x) = φ_n(x) e^{x²/2}` and folds the Gaussians into the
//! rule weights.

mod coefficients;
mod quadrature;

pub use coefficients::{
    assemble_coefficients, coefficient_matrix, quadrature_norm, CoefficientMatrix, Exchange, JastrowPair,
    PairAmplitude, QuadraturePlan, Symmetry, MAX_NORM_DEFICIT,
};
pub use quadrature::{QuadratureRule, RuleKind, MAX_HERMITE_ORDER, MAX_LAGUERRE_ORDER};

use alloc::vec::Vec;

use crate::error::domain;
use crate::fmath::{abs, exp, ln, sqrt, PI};
use crate::Result;

/// Largest index for which the recurrence is guaranteed stable here.
pub const MAX_HERMITE_INDEX: usize = 400;

const RESCALE_AT: f64 = 1e150;

/// `φ_n(x)` via the normalized three-term recurrence
/// `φ_{n+1} = x√(2/(n+1)) φ_n − √(n/(n+1)) φ_{n−1}`.
pub fn hermite_function(n: usize, x: f64) -> Result<f64> {
    if n > MAX_HERMITE_INDEX {
        return Err(domain!("Hermite index {n} exceeds the stable range 0..={MAX_HERMITE_INDEX}"));
    }
    // Run the recurrence on the polynomial part with a tracked scale and
    // apply the Gaussian last, so large |x| does not underflow early.
    let mut prev = 0.0;
    let mut cur = pi_quarter_inv();
    let mut ln_scale = -0.5 * x * x;
    for k in 0..n {
        let next = x * sqrt(2.0 / (k as f64 + 1.0)) * cur - sqrt(k as f64 / (k as f64 + 1.0)) * prev;
        prev = cur;
        cur = next;
        if abs(cur) > RESCALE_AT {
            prev /= RESCALE_AT;
            cur /= RESCALE_AT;
            ln_scale += ln(RESCALE_AT);
        }
    }
    Ok(cur * exp(ln_scale))
}

/// `π^{-1/4} = φ_0(0)`.
fn pi_quarter_inv() -> f64 {
    1.0 / sqrt(sqrt(PI))
}

/// Fills `out[n] = p_n(x) = φ_n(x) e^{x²/2}` for `n < out.len()`.
pub fn hermite_polynomials_into(x: f64, out: &mut [f64]) {
    let m = out.len();
    if m == 0 {
        return;
    }
    out[0] = pi_quarter_inv();
    if m > 1 {
        out[1] = core::f64::consts::SQRT_2 * x * out[0];
    }
    for k in 1..m.saturating_sub(1) {
        out[k + 1] = x * sqrt(2.0 / (k as f64 + 1.0)) * out[k] - sqrt(k as f64 / (k as f64 + 1.0)) * out[k - 1];
    }
}

/// First `size` normalized Hermite functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HermiteBasis {
    size: usize,
}

impl HermiteBasis {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size > MAX_HERMITE_INDEX + 1 {
            return Err(domain!("basis size {size} outside 1..={}", MAX_HERMITE_INDEX + 1));
        }
        Ok(HermiteBasis { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `φ_0(x) … φ_{M−1}(x)`.
    pub fn values(&self, x: f64) -> Vec<f64> {
        let mut v = alloc::vec![0.0; self.size];
        hermite_polynomials_into(x, &mut v);
        let g = exp(-0.5 * x * x);
        v.iter_mut().for_each(|p| *p *= g);
        v
    }

    /// `φ_n'(x) = √(n/2) φ_{n−1} − √((n+1)/2) φ_{n+1}` for every basis member.
    pub fn derivatives(&self, x: f64) -> Vec<f64> {
        let mut ext = alloc::vec![0.0; self.size + 1];
        hermite_polynomials_into(x, &mut ext);
        let g = exp(-0.5 * x * x);
        (0..self.size)
            .map(|n| {
                let down = if n == 0 { 0.0 } else { sqrt(n as f64 / 2.0) * ext[n - 1] };
                (down - sqrt((n as f64 + 1.0) / 2.0) * ext[n + 1]) * g
            })
            .collect()
    }

    /// Gram matrix `⟨φ_i, φ_j⟩` under a Gauss–Hermite rule (row-major).
    pub fn overlap(&self, rule: &QuadratureRule) -> Vec<f64> {
        let m = self.size;
        let mut gram = alloc::vec![0.0; m * m];
        let mut p = alloc::vec![0.0; m];
        for (x, w) in rule.iter() {
            hermite_polynomials_into(x, &mut p);
            for i in 0..m {
                for j in 0..m {
                    gram[i * m + j] += w * p[i] * p[j];
                }
            }
        }
        gram
    }
}
