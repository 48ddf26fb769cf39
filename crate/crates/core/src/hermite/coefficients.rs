//! Expansion of a two-particle amplitude in products of Hermite functions.
//!
//! `c_ij = ∫∫ φ_i(x₁) φ_j(x₂) ψ(x₁, x₂) dx₁ dx₂` is evaluated in rotated
//! coordinates `u = (x₁−x₂)/√2`, `v = (x₁+x₂)/√2`. The `|u|^ν` cusp is moved
//! into the weight of a generalized Gauss–Laguerre rule in `t = u²`, and `v`
//! uses Gauss–Hermite. For a Jastrow amplitude the remaining integrand is a
//! polynomial, so the rules are exact once their orders reach the basis size.
//!
//! The squared singular values of `c` are the 1-RDM eigenvalues.

use alloc::vec;
use alloc::vec::Vec;

use super::{hermite_polynomials_into, HermiteBasis, QuadratureRule};
use crate::error::{domain, invalid};
use crate::fmath::{abs, exp, ln, ln_gamma, powf, sqrt, LN_2, PI};
use crate::linalg::{blocked_singular_values, symmetric_eigen, Matrix};
use crate::{EntanglementSpectrum, Error, ModelSpec, Result, SpectrumSource};

/// Norm deficit `1 − ‖c‖²_F` above which [`coefficient_matrix`] refuses.
pub const MAX_NORM_DEFICIT: f64 = 1e-3;

/// Tolerance for the quadrature norm of an amplitude.
const NORM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exchange {
    Symmetric,
    Antisymmetric,
}

/// Symmetry tag of a coefficient matrix: `c = cᵀ`, `c = −cᵀ`, or neither.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
    None,
}

impl From<Exchange> for Symmetry {
    fn from(e: Exchange) -> Self {
        match e {
            Exchange::Symmetric => Symmetry::Symmetric,
            Exchange::Antisymmetric => Symmetry::Antisymmetric,
        }
    }
}

/// A real two-particle amplitude of the form
/// `ψ = |u|^ν sgn(u)^s g(u, v) e^{−(u²+v²)/2}` with `g` smooth and even in `u`,
/// where `s = 1` for antisymmetric exchange.
pub trait PairAmplitude {
    fn value(&self, x1: f64, x2: f64) -> f64;

    /// Exponent `ν` of the `|u|^ν` factor.
    fn cusp_exponent(&self) -> f64;

    fn exchange(&self) -> Exchange;

    /// The smooth factor `g(u, v)`.
    fn regular_part(&self, u: f64, v: f64) -> f64;
}

/// `C sgn(x₁−x₂)^s |x₁−x₂|^ν e^{−(x₁²+x₂²)/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JastrowPair {
    exponent: f64,
    exchange: Exchange,
    ln_prefactor: f64,
}

impl JastrowPair {
    /// Normalized amplitude: `|C|⁻² = √π 2^ν Γ(ν+½)`.
    pub fn normalized(exponent: f64, exchange: Exchange) -> Result<Self> {
        if !(exponent >= 0.0) || !exponent.is_finite() {
            return Err(domain!("Jastrow exponent {exponent} must be finite and ≥ 0"));
        }
        let ln_norm_sq = 0.5 * ln(PI) + exponent * LN_2 + ln_gamma(exponent + 0.5);
        Ok(JastrowPair { exponent, exchange, ln_prefactor: -0.5 * ln_norm_sq })
    }

    pub fn prefactor(&self) -> f64 {
        exp(self.ln_prefactor)
    }
}

impl PairAmplitude for JastrowPair {
    fn value(&self, x1: f64, x2: f64) -> f64 {
        let d = x1 - x2;
        let sign = match self.exchange {
            Exchange::Symmetric => 1.0,
            Exchange::Antisymmetric if d < 0.0 => -1.0,
            Exchange::Antisymmetric => 1.0,
        };
        let jastrow = if self.exponent == 0.0 { 1.0 } else { powf(abs(d), self.exponent) };
        sign * jastrow * exp(self.ln_prefactor - 0.5 * (x1 * x1 + x2 * x2))
    }

    fn cusp_exponent(&self) -> f64 {
        self.exponent
    }

    fn exchange(&self) -> Exchange {
        self.exchange
    }

    fn regular_part(&self, _u: f64, _v: f64) -> f64 {
        // |x₁ − x₂|^ν = 2^{ν/2} |u|^ν
        exp(self.ln_prefactor + 0.5 * self.exponent * LN_2)
    }
}

/// Orders of the rules used for the centre-of-mass (`v`) and relative (`t`)
/// integrations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadraturePlan {
    pub center_of_mass_order: usize,
    pub relative_order: usize,
}

impl QuadraturePlan {
    pub fn uniform(order: usize) -> Self {
        QuadraturePlan { center_of_mass_order: order, relative_order: order }
    }
}

impl Default for QuadraturePlan {
    fn default() -> Self {
        Self::uniform(120)
    }
}

/// Basis-expansion coefficients of a two-particle state.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix {
    entries: Matrix,
    symmetry: Symmetry,
}

impl CoefficientMatrix {
    /// Wraps `entries`, verifying the symmetry tag to `1e-10` entrywise.
    pub fn new(entries: Matrix, symmetry: Symmetry) -> Result<Self> {
        if !entries.is_square() {
            return Err(invalid!("coefficient matrix must be square"));
        }
        let c = CoefficientMatrix { entries, symmetry };
        c.verify_symmetry(1e-10)?;
        Ok(c)
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.frobenius_norm()
    }

    /// Probability mass outside the basis, `1 − ‖c‖²_F`.
    pub fn norm_deficit(&self) -> f64 {
        let n = self.frobenius_norm();
        1.0 - n * n
    }

    pub fn verify_symmetry(&self, tol: f64) -> Result<()> {
        let sign = match self.symmetry {
            Symmetry::Symmetric => 1.0,
            Symmetry::Antisymmetric => -1.0,
            Symmetry::None => return Ok(()),
        };
        let defect = self.entries.symmetry_defect(sign);
        if defect > tol {
            return Err(invalid!("coefficient matrix tagged {:?} deviates by {defect:e}", self.symmetry));
        }
        Ok(())
    }

    /// Rescales to unit Frobenius norm.
    pub fn normalized(mut self) -> Result<Self> {
        let n = self.frobenius_norm();
        if n == 0.0 {
            return Err(invalid!("cannot normalize a zero coefficient matrix"));
        }
        self.entries.scale(1.0 / n);
        Ok(self)
    }

    /// Schmidt coefficients `ℓ_k ≥ 0`, descending, by one-sided Jacobi SVD.
    pub fn schmidt_values(&self) -> Result<Vec<f64>> {
        blocked_singular_values(&self.entries)
    }

    /// Schmidt coefficients from a symmetric eigensolve of `c` itself:
    /// `|eig(c)|` for symmetric `c`, otherwise the positive eigenvalues of
    /// `[[0, c], [cᵀ, 0]]`.
    pub fn direct_schmidt_values(&self) -> Result<Vec<f64>> {
        let n = self.dim();
        let mut values = match self.symmetry {
            Symmetry::Symmetric => {
                symmetric_eigen(&self.entries, false)?.values.into_iter().map(abs).collect::<Vec<_>>()
            }
            _ => {
                let big = Matrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
                    (true, false) => self.entries[(i, j - n)],
                    (false, true) => self.entries[(j, i - n)],
                    _ => 0.0,
                });
                let mut e = symmetric_eigen(&big, false)?.values;
                e.truncate(n);
                e.into_iter().map(|v| v.max(0.0)).collect()
            }
        };
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(values)
    }

    /// Eigenvalues of the projected 1-RDM `c cᵀ`, descending.
    pub fn gram_eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(symmetric_eigen(&self.entries.gram_rows(), false)?.values)
    }

    /// The 1-RDM spectrum `λ_k = ℓ_k²`; missing mass goes to the truncation error.
    pub fn spectrum(&self, source: SpectrumSource, params: ModelSpec) -> Result<EntanglementSpectrum> {
        let lambdas = self.schmidt_values()?.into_iter().map(|l| l * l).collect();
        EntanglementSpectrum::from_partial(lambdas, source, params)
    }
}

/// `∫∫ |ψ|²` by rotated-coordinate quadrature.
pub fn quadrature_norm<A: PairAmplitude + ?Sized>(psi: &A, plan: QuadraturePlan) -> Result<f64> {
    let nu = psi.cusp_exponent();
    let radial = QuadratureRule::gauss_laguerre(plan.relative_order, nu - 0.5)?;
    let com = QuadratureRule::gauss_hermite(plan.center_of_mass_order)?;
    let mut total = 0.0;
    for (t, wt) in radial.iter() {
        let u = sqrt(t);
        for (v, wv) in com.iter() {
            let g = psi.regular_part(u, v);
            total += wt * wv * g * g;
        }
    }
    Ok(total)
}

/// Builds `c_ij` for `i, j < m` without judging the truncation deficit.
pub fn assemble_coefficients<A: PairAmplitude + ?Sized>(
    psi: &A,
    m: usize,
    plan: QuadraturePlan,
) -> Result<CoefficientMatrix> {
    HermiteBasis::new(m)?;
    let nu = psi.cusp_exponent();
    let exchange = psi.exchange();
    let exponent = match exchange {
        Exchange::Symmetric => 0.5 * (nu - 1.0),
        Exchange::Antisymmetric => 0.5 * nu,
    };
    let radial = QuadratureRule::gauss_laguerre(plan.relative_order, exponent)?;
    let com = QuadratureRule::gauss_hermite(plan.center_of_mass_order)?;

    let mut c = Matrix::zeros(m, m);
    let mut f = Matrix::zeros(m, m);
    let mut px = vec![0.0; m];
    let mut pz = vec![0.0; m];
    let inv_sqrt2 = core::f64::consts::FRAC_1_SQRT_2;
    for (t, wt) in radial.iter() {
        let u = sqrt(t);
        f.scale(0.0);
        for (v, wv) in com.iter() {
            let weight = wv * psi.regular_part(u, v);
            if weight == 0.0 {
                continue;
            }
            hermite_polynomials_into((v + u) * inv_sqrt2, &mut px);
            hermite_polynomials_into((v - u) * inv_sqrt2, &mut pz);
            for (i, &p) in px.iter().enumerate().take(m) {
                let a = weight * p;
                let row = f.row_mut(i);
                for (r, b) in row.iter_mut().zip(&pz) {
                    *r += a * b;
                }
            }
        }
        // The u < 0 half is the transpose of the u > 0 half.
        let scale = match exchange {
            Exchange::Symmetric => 0.5 * wt,
            Exchange::Antisymmetric => 0.5 * wt / u,
        };
        let sign = match exchange {
            Exchange::Symmetric => 1.0,
            Exchange::Antisymmetric => -1.0,
        };
        for i in 0..m {
            for j in 0..m {
                c[(i, j)] += scale * (f[(i, j)] + sign * f[(j, i)]);
            }
        }
    }
    if c.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::NonConvergence {
            routine: "coefficient quadrature",
            detail: alloc::format!("non-finite coefficient for ν = {nu}"),
        });
    }
    CoefficientMatrix::new(c, exchange.into())
}

/// Coefficient matrix of a normalized amplitude in the first `m` Hermite
/// functions. Fails if the amplitude is not normalized to `1e-6` or if the
/// basis misses more than [`MAX_NORM_DEFICIT`] of the norm.
pub fn coefficient_matrix<A: PairAmplitude + ?Sized>(
    psi: &A,
    m: usize,
    plan: QuadraturePlan,
) -> Result<CoefficientMatrix> {
    let norm = quadrature_norm(psi, plan)?;
    if abs(norm - 1.0) > NORM_TOLERANCE {
        return Err(Error::NotNormalized { norm });
    }
    let c = assemble_coefficients(psi, m, plan)?;
    let deficit = c.norm_deficit();
    if deficit > MAX_NORM_DEFICIT {
        return Err(Error::Truncation { deficit, limit: MAX_NORM_DEFICIT });
    }
    Ok(c)
}
