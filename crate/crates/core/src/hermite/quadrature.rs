//! Gauss rules from three-term recurrences, plus the periodic angular rule.
//!
//! Nodes start from the eigenvalues of the Jacobi (recurrence) matrix and are
//! polished by Newton steps on the orthonormal polynomial `p_Q`. Weights are
//! Christoffel numbers `1 / Σ_{k<Q} p_k(x)²`, accumulated with running
//! rescaling so that large nodes with vanishing weights neither overflow nor
//! turn into NaN.

use alloc::vec::Vec;

use crate::error::domain;
use crate::fmath::{abs, exp, ln, ln_gamma, sqrt, PI};
use crate::linalg::tridiagonal_eigenvalues;
use crate::{Error, Result};

pub const MAX_HERMITE_ORDER: usize = 512;
pub const MAX_LAGUERRE_ORDER: usize = 512;

/// Family a [`QuadratureRule`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RuleKind {
    /// Weight `e^{−x²}` on the real line.
    GaussHermite,
    /// Weight `t^a e^{−t}` on `[0, ∞)`.
    GaussLaguerre { exponent: f64 },
    /// Equispaced trapezoid on `[0, 2π)`; exact for trigonometric polynomials
    /// of degree below the order.
    PeriodicAngle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    kind: RuleKind,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Gauss–Hermite rule of order `q` (1 ≤ q ≤ 512).
    pub fn gauss_hermite(q: usize) -> Result<Self> {
        if q == 0 || q > MAX_HERMITE_ORDER {
            return Err(domain!("Gauss–Hermite order {q} outside 1..={MAX_HERMITE_ORDER}"));
        }
        let recurrence = Recurrence {
            diag: alloc::vec![0.0; q],
            off: (1..=q).map(|k| sqrt(k as f64 / 2.0)).collect(),
            ln_mu0: 0.5 * ln(PI),
        };
        let (mut nodes, mut weights) = recurrence.rule(q)?;
        // Symmetrize about the origin.
        for i in 0..q / 2 {
            let j = q - 1 - i;
            let x = 0.5 * (nodes[j] - nodes[i]);
            let w = 0.5 * (weights[i] + weights[j]);
            nodes[i] = -x;
            nodes[j] = x;
            weights[i] = w;
            weights[j] = w;
        }
        if q % 2 == 1 {
            nodes[q / 2] = 0.0;
        }
        Ok(QuadratureRule { kind: RuleKind::GaussHermite, nodes, weights })
    }

    /// Generalized Gauss–Laguerre rule of order `q` for weight `t^a e^{−t}`.
    pub fn gauss_laguerre(q: usize, exponent: f64) -> Result<Self> {
        if q == 0 || q > MAX_LAGUERRE_ORDER {
            return Err(domain!("Gauss–Laguerre order {q} outside 1..={MAX_LAGUERRE_ORDER}"));
        }
        if !(exponent > -1.0) || !exponent.is_finite() {
            return Err(domain!("Gauss–Laguerre exponent {exponent} must exceed −1"));
        }
        let a = exponent;
        let recurrence = Recurrence {
            diag: (0..q).map(|k| 2.0 * k as f64 + a + 1.0).collect(),
            off: (1..=q).map(|k| sqrt(k as f64 * (k as f64 + a))).collect(),
            ln_mu0: ln_gamma(a + 1.0),
        };
        let (nodes, weights) = recurrence.rule(q)?;
        Ok(QuadratureRule { kind: RuleKind::GaussLaguerre { exponent }, nodes, weights })
    }

    /// `n` equispaced angles on `[0, 2π)` with weights `2π/n`.
    pub fn periodic_angle(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(domain!("angular rule needs at least one node"));
        }
        let h = 2.0 * PI / n as f64;
        Ok(QuadratureRule {
            kind: RuleKind::PeriodicAngle,
            nodes: (0..n).map(|k| k as f64 * h).collect(),
            weights: alloc::vec![h; n],
        })
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// `Σ w_k f(x_k)`.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.iter().map(|(x, w)| w * f(x)).sum()
    }
}

/// Orthonormal three-term recurrence
/// `x p_k = off[k] p_{k+1} + diag[k] p_k + off[k−1] p_{k−1}`, `p_0 = μ₀^{-1/2}`.
struct Recurrence {
    diag: Vec<f64>,
    off: Vec<f64>,
    ln_mu0: f64,
}

/// Values carried through the recurrence with a common scale `e^{ln_scale}`.
struct Scaled {
    p: f64,
    dp: f64,
    sum_sq: f64,
    ln_scale: f64,
}

const RESCALE_AT: f64 = 1e100;

impl Recurrence {
    fn rule(&self, q: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        let guesses = tridiagonal_eigenvalues(&self.diag[..q], &self.off[..q - 1])?;
        let mut nodes = Vec::with_capacity(q);
        let mut weights = Vec::with_capacity(q);
        for (i, &guess) in guesses.iter().enumerate() {
            let x = self.polish(q, guess).map_err(|e| match e {
                Error::NonConvergence { routine, detail } => {
                    Error::NonConvergence { routine, detail: alloc::format!("node {i} of order {q}: {detail}") }
                }
                other => other,
            })?;
            let s = self.evaluate(q, x);
            // w = 1 / (sum_sq · e^{2 ln_scale})
            let ln_w = -(ln(s.sum_sq) + 2.0 * s.ln_scale);
            nodes.push(x);
            weights.push(exp(ln_w));
        }
        Ok((nodes, weights))
    }

    /// `p_q(x)`, `p_q'(x)` and `Σ_{k<q} p_k(x)²`, all sharing one scale factor
    /// (squared for the sum).
    fn evaluate(&self, q: usize, x: f64) -> Scaled {
        let mut prev = 0.0;
        let mut dprev = 0.0;
        let mut cur = exp(-0.5 * self.ln_mu0);
        let mut dcur = 0.0;
        let mut sum_sq = 0.0;
        let mut ln_scale = 0.0;
        for k in 0..q {
            sum_sq += cur * cur;
            let back = if k == 0 { 0.0 } else { self.off[k - 1] };
            let next = ((x - self.diag[k]) * cur - back * prev) / self.off[k];
            let dnext = (cur + (x - self.diag[k]) * dcur - back * dprev) / self.off[k];
            prev = cur;
            dprev = dcur;
            cur = next;
            dcur = dnext;
            if abs(cur) > RESCALE_AT || abs(dcur) > RESCALE_AT {
                let f = 1.0 / RESCALE_AT;
                prev *= f;
                dprev *= f;
                cur *= f;
                dcur *= f;
                sum_sq *= f * f;
                ln_scale += ln(RESCALE_AT);
            }
        }
        Scaled { p: cur, dp: dcur, sum_sq, ln_scale }
    }

    fn polish(&self, q: usize, mut x: f64) -> Result<f64> {
        // Rounding in p_q limits the attainable step, so stop once steps stop
        // shrinking below a few ulps or oscillate at that level.
        let mut last = f64::INFINITY;
        for _ in 0..100 {
            let s = self.evaluate(q, x);
            if s.dp == 0.0 || !s.dp.is_finite() {
                return Ok(x);
            }
            let step = s.p / s.dp;
            x -= step;
            let size = abs(step);
            let floor = 64.0 * f64::EPSILON * abs(x).max(f64::MIN_POSITIVE);
            if size <= floor || (size >= 0.5 * last && last <= 1e-10 * abs(x).max(1e-300)) {
                return Ok(x);
            }
            last = size;
        }
        Err(Error::NonConvergence {
            routine: "Gauss-rule Newton polish",
            detail: alloc::format!("no convergence near x = {x}"),
        })
    }
}
