//! Isotropic two-dimensional ground states and their 1-RDM spectra.
//!
//! With `u = (r⃗₁ − r⃗₂)/√2 = ρ(cos θ, sin θ)` and `v = (r⃗₁ + r⃗₂)/√2`,
//!
//! - bosons: `Ψ = C |r⃗₁−r⃗₂|^μ e^{−(r₁²+r₂²)/2}`, `|C|⁻² = π² 2^μ Γ(μ+1)`;
//! - fermions: `Ψ = C |r⃗₁−r⃗₂|^μ ψ_S e^{−(r₁²+r₂²)/2}` with
//!   `ψ_S = a Δx + i b Δy = √2 ρ (a cos θ + i b sin θ)`, `a² + b² = 2`,
//!   `|C|⁻² = π² 2^{μ+1} Γ(μ+2)`.
//!
//! Coefficients in the tensor basis `φ_a(x) φ_b(y)` (orbital index `a·M + b`)
//! use Gauss–Hermite in each centre-of-mass direction, generalized
//! Gauss–Laguerre in `t = ρ²` with weight `t^{μ/2} e^{−t}`, and an equispaced
//! rule in `θ`; all three are exact for the polynomial part once the orders
//! reach `M`, `M` and `4M − 2`.
//!
//! The fermion matrix is `a c_x + i b c_y` with real `c_x`, `c_y`. Rephasing
//! every orbital by `i^b` (the same local unitary on both particles, so the
//! spectrum is unchanged) turns it into a real antisymmetric matrix.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{domain, invalid};
use crate::fmath::{cos, exp, ln, ln_factorial, ln_gamma, powf, sin, sqrt, LN_2, PI};
use crate::hermite::{hermite_polynomials_into, CoefficientMatrix, QuadratureRule, Symmetry};
use crate::linalg::{singular_values, Matrix};
use crate::scan::{Parameter, SpectrumFamily};
use crate::{EntanglementSpectrum, FermionState, ModelSpec, Result, SpectrumSource, Statistics};

/// Default orbitals per Cartesian direction.
pub const DEFAULT_BASIS: usize = 20;
/// Largest basis per direction accepted (matrix dimension `M²`).
pub const MAX_BASIS: usize = 30;
/// Basis deficit above which callers should warn.
pub const DEFICIT_WARNING: f64 = 1e-3;

/// `ν(ν−1)`.
pub fn strength(nu: f64) -> f64 {
    nu * (nu - 1.0)
}

/// The root `ν ≥ 1/2` of `ν(ν−1) = g`.
pub fn nu_from_strength(g: f64) -> Result<f64> {
    if !(g >= -0.25) || !g.is_finite() {
        return Err(domain!("interaction strength {g} must be finite and ≥ −1/4"));
    }
    Ok(0.5 * (1.0 + sqrt(1.0 + 4.0 * g)))
}

/// Jastrow exponent in `D` dimensions:
/// `μ_b = ½(√((D−2)² + 4g) − (D−2))`, `μ_f = ½(√(D² + 4g) − D)`.
pub fn mu_exponent(dimension: u32, nu: f64, statistics: Statistics) -> Result<f64> {
    if dimension < 2 {
        return Err(domain!("dimension {dimension} must be at least 2"));
    }
    let d = dimension as f64;
    let shift = match statistics {
        Statistics::Boson => d - 2.0,
        Statistics::Fermion => d,
    };
    let radicand = shift * shift + 4.0 * strength(nu);
    if !(radicand >= 0.0) {
        return Err(domain!("ν = {nu} gives a complex exponent in D = {dimension}"));
    }
    Ok(0.5 * (sqrt(radicand) - shift))
}

/// Both exponents at one `ν`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponents2D {
    pub mu_b: f64,
    pub mu_f: f64,
    pub dimension: u32,
    strength: f64,
}

impl Exponents2D {
    pub fn new(dimension: u32, nu: f64) -> Result<Self> {
        Ok(Exponents2D {
            mu_b: mu_exponent(dimension, nu, Statistics::Boson)?,
            mu_f: mu_exponent(dimension, nu, Statistics::Fermion)?,
            dimension,
            strength: strength(nu),
        })
    }

    /// Residuals of `μ² + (D−2)μ = g` and `μ² + Dμ = g`.
    pub fn residuals(&self) -> (f64, f64) {
        let d = self.dimension as f64;
        (
            self.mu_b * self.mu_b + (d - 2.0) * self.mu_b - self.strength,
            self.mu_f * self.mu_f + d * self.mu_f - self.strength,
        )
    }
}

/// Quadrature orders for a basis of `M` orbitals per direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Plan2D {
    pub basis: usize,
    pub center_of_mass_order: usize,
    pub radial_order: usize,
    pub angular_order: usize,
}

impl Plan2D {
    /// Orders `M + 2`, `M + 2`, `4M` (exact for the basis polynomials).
    pub fn new(basis: usize) -> Result<Self> {
        if basis == 0 || basis > MAX_BASIS {
            return Err(domain!("basis {basis} per direction outside 1..={MAX_BASIS}"));
        }
        Ok(Plan2D { basis, center_of_mass_order: basis + 2, radial_order: basis + 2, angular_order: 4 * basis })
    }
}

impl Default for Plan2D {
    fn default() -> Self {
        Plan2D {
            basis: DEFAULT_BASIS,
            center_of_mass_order: DEFAULT_BASIS + 2,
            radial_order: DEFAULT_BASIS + 2,
            angular_order: 4 * DEFAULT_BASIS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec2D {
    nu: f64,
    statistics: Statistics,
    fermion_state: FermionState,
    plan: Plan2D,
}

impl ModelSpec2D {
    /// Requires `ν ≥ 1`; `fermion_state` is ignored for bosons.
    pub fn new(nu: f64, statistics: Statistics, fermion_state: FermionState, plan: Plan2D) -> Result<Self> {
        if !(nu >= 1.0) || !nu.is_finite() {
            return Err(invalid!("two-dimensional model needs finite ν ≥ 1, got {nu}"));
        }
        fermion_state.validate()?;
        Plan2D::new(plan.basis)?;
        Ok(ModelSpec2D { nu, statistics, fermion_state, plan })
    }

    pub fn boson(nu: f64) -> Result<Self> {
        Self::new(nu, Statistics::Boson, FermionState::Plus, Plan2D::default())
    }

    pub fn fermion(nu: f64, state: FermionState) -> Result<Self> {
        Self::new(nu, Statistics::Fermion, state, Plan2D::default())
    }

    pub fn with_plan(mut self, plan: Plan2D) -> Result<Self> {
        Plan2D::new(plan.basis)?;
        self.plan = plan;
        Ok(self)
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn fermion_state(&self) -> FermionState {
        self.fermion_state
    }

    pub fn plan(&self) -> Plan2D {
        self.plan
    }

    pub fn mu(&self) -> f64 {
        // ν ≥ 1 keeps both radicands positive.
        mu_exponent(2, self.nu, self.statistics).unwrap_or(0.0)
    }

    pub fn provenance(&self) -> ModelSpec {
        let state = match self.statistics {
            Statistics::Boson => None,
            Statistics::Fermion => Some(self.fermion_state),
        };
        ModelSpec::two_dimensional(self.nu, self.statistics, state)
    }
}

/// Normalized ground-state amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundState2D {
    spec: ModelSpec2D,
    mu: f64,
    ln_prefactor: f64,
}

pub fn ground_state_2d(spec: ModelSpec2D) -> Result<GroundState2D> {
    let mu = spec.mu();
    let ln_norm_sq = match spec.statistics {
        Statistics::Boson => 2.0 * ln(PI) + mu * LN_2 + ln_gamma(mu + 1.0),
        Statistics::Fermion => 2.0 * ln(PI) + (mu + 1.0) * LN_2 + ln_gamma(mu + 2.0),
    };
    Ok(GroundState2D { spec, mu, ln_prefactor: -0.5 * ln_norm_sq })
}

impl GroundState2D {
    pub fn spec(&self) -> ModelSpec2D {
        self.spec
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn prefactor(&self) -> f64 {
        exp(self.ln_prefactor)
    }

    /// `Ψ(r⃗₁, r⃗₂)`.
    pub fn value(&self, r1: [f64; 2], r2: [f64; 2]) -> Complex64 {
        let dx = r1[0] - r2[0];
        let dy = r1[1] - r2[1];
        let d2 = dx * dx + dy * dy;
        let radial = if self.mu == 0.0 { 1.0 } else { powf(d2, 0.5 * self.mu) };
        let gauss = exp(self.ln_prefactor - 0.5 * (r1[0] * r1[0] + r1[1] * r1[1] + r2[0] * r2[0] + r2[1] * r2[1]));
        let slater = match self.spec.statistics {
            Statistics::Boson => Complex64::new(1.0, 0.0),
            Statistics::Fermion => {
                let (a, b) = self.spec.fermion_state.cartesian_weights();
                Complex64::new(a * dx, b * dy)
            }
        };
        slater * (radial * gauss)
    }

    /// `|Ψ|²`.
    pub fn density(&self, r1: [f64; 2], r2: [f64; 2]) -> f64 {
        self.value(r1, r2).norm_sqr()
    }

    /// `∫|Ψ|²` with the module's relative-coordinate rules.
    pub fn quadrature_norm(&self) -> Result<f64> {
        let plan = self.spec.plan;
        let angle = QuadratureRule::periodic_angle(plan.angular_order)?;
        // ∫d²v e^{−v²} = π; ρ dρ = dt/2 and |r₁₂|^{2μ} = 2^μ t^μ.
        let c2 = exp(2.0 * self.ln_prefactor + self.mu * LN_2);
        let total = match self.spec.statistics {
            Statistics::Boson => {
                let radial = QuadratureRule::gauss_laguerre(plan.radial_order, self.mu)?;
                let rad = 0.5 * radial.weights().iter().sum::<f64>();
                PI * angle.integrate(|_| 1.0) * rad
            }
            Statistics::Fermion => {
                let radial = QuadratureRule::gauss_laguerre(plan.radial_order, self.mu + 1.0)?;
                let (a, b) = self.spec.fermion_state.cartesian_weights();
                let ang = angle.integrate(|th| {
                    let (c, s) = (cos(th), sin(th));
                    2.0 * (a * a * c * c + b * b * s * s)
                });
                let rad = 0.5 * radial.weights().iter().sum::<f64>();
                PI * ang * rad
            }
        };
        Ok(c2 * total)
    }
}

/// Real coefficient matrices from which any state of the given `ν` is
/// assembled: the boson matrix, or the rephased fermion parts `c_x`, `c_y`.
#[derive(Debug, Clone, PartialEq)]
pub enum Components2D {
    Boson(Matrix),
    Fermion { x: Matrix, y: Matrix },
}

/// Coefficient components for `ν` and `statistics` under `plan`.
pub fn components_2d(nu: f64, statistics: Statistics, plan: Plan2D) -> Result<Components2D> {
    let spec = ModelSpec2D::new(nu, statistics, FermionState::Plus, plan)?;
    let state = ground_state_2d(spec)?;
    let m = plan.basis;
    let com = QuadratureRule::gauss_hermite(plan.center_of_mass_order)?;
    let radial = QuadratureRule::gauss_laguerre(plan.radial_order, 0.5 * state.mu)?;
    let angle = QuadratureRule::periodic_angle(plan.angular_order)?;

    let mut scale = state.prefactor() * exp(0.5 * state.mu * LN_2);
    if statistics == Statistics::Fermion {
        scale *= core::f64::consts::SQRT_2;
    }
    let dim = m * m;
    let mut cx = Matrix::zeros(dim, dim);
    let mut cy = Matrix::zeros(dim, dim);
    let mut fx = vec![0.0; m * m];
    let mut fy = vec![0.0; m * m];
    let mut p_plus = vec![0.0; m];
    let mut p_minus = vec![0.0; m];

    // F(u)[i·M + j] = Σ_v w_v p_i((v+u)/√2) p_j((v−u)/√2)
    let mut relative_factor = |u: f64, out: &mut [f64]| {
        out.iter_mut().for_each(|e| *e = 0.0);
        for (v, w) in com.iter() {
            hermite_polynomials_into((v + u) * core::f64::consts::FRAC_1_SQRT_2, &mut p_plus);
            hermite_polynomials_into((v - u) * core::f64::consts::FRAC_1_SQRT_2, &mut p_minus);
            for i in 0..m {
                let a = w * p_plus[i];
                for j in 0..m {
                    out[i * m + j] += a * p_minus[j];
                }
            }
        }
    };

    for (t, wt) in radial.iter() {
        let rho = sqrt(t);
        for (theta, wth) in angle.iter() {
            let (c, s) = (cos(theta), sin(theta));
            relative_factor(rho * c, &mut fx);
            relative_factor(rho * s, &mut fy);
            let weight = 0.5 * wt * wth * scale;
            match statistics {
                Statistics::Boson => accumulate(&mut cx, &fx, &fy, m, weight, (0, 0)),
                Statistics::Fermion => {
                    accumulate(&mut cx, &fx, &fy, m, weight * rho * c, (1, 0));
                    accumulate(&mut cy, &fx, &fy, m, weight * rho * s, (0, 1));
                }
            }
        }
    }
    Ok(match statistics {
        Statistics::Boson => Components2D::Boson(cx),
        Statistics::Fermion => {
            // Rephase orbital (a, b) by i^b on both particles.
            rephase(&mut cx, m, 0);
            rephase(&mut cy, m, 1);
            Components2D::Fermion { x: cx, y: cy }
        }
    })
}

/// `c[(a₁,b₁),(a₂,b₂)] += w F_x[a₁a₂] F_y[b₁b₂]` on entries with
/// `(a₁+a₂, b₁+b₂) ≡ parity (mod 2)`; all others vanish identically.
fn accumulate(c: &mut Matrix, fx: &[f64], fy: &[f64], m: usize, w: f64, parity: (usize, usize)) {
    for a1 in 0..m {
        for a2 in (0..m).filter(|a2| (a1 + a2) % 2 == parity.0) {
            let gx = w * fx[a1 * m + a2];
            for b1 in 0..m {
                let row = c.row_mut(a1 * m + b1);
                let mut b2 = (parity.1 + b1) % 2;
                while b2 < m {
                    row[a2 * m + b2] += gx * fy[b1 * m + b2];
                    b2 += 2;
                }
            }
        }
    }
}

/// Multiplies entry `(a₁,b₁),(a₂,b₂)` by `Re(i^{b₁+b₂+extra})`, where `extra = 1`
/// accounts for the explicit `i` in front of `c_y`.
fn rephase(c: &mut Matrix, m: usize, extra: usize) {
    const RE_POW_I: [f64; 4] = [1.0, 0.0, -1.0, 0.0];
    for i in 0..m * m {
        let b1 = i % m;
        let row = c.row_mut(i);
        for (j, e) in row.iter_mut().enumerate() {
            if *e != 0.0 {
                *e *= RE_POW_I[(b1 + j % m + extra) % 4];
            }
        }
    }
}

impl Components2D {
    /// Real coefficient matrix of the state with Cartesian weights `(a, b)`
    /// (ignored for bosons).
    pub fn combine(&self, weights: (f64, f64)) -> Result<CoefficientMatrix> {
        match self {
            Components2D::Boson(c) => CoefficientMatrix::new(c.clone(), Symmetry::Symmetric),
            Components2D::Fermion { x, y } => {
                let (a, b) = weights;
                let n = x.rows();
                let c = Matrix::from_fn(n, n, |i, j| a * x[(i, j)] + b * y[(i, j)]);
                CoefficientMatrix::new(c, Symmetry::Antisymmetric)
            }
        }
    }

    pub fn basis(&self) -> usize {
        let n = match self {
            Components2D::Boson(c) => c.rows(),
            Components2D::Fermion { x, .. } => x.rows(),
        };
        (sqrt(n as f64) + 0.5) as usize
    }
}

/// Real coefficient matrix of the ground state.
pub fn coefficient_matrix_2d(spec: ModelSpec2D) -> Result<CoefficientMatrix> {
    let comps = components_2d(spec.nu, spec.statistics, spec.plan)?;
    comps.combine(spec.fermion_state.cartesian_weights())
}

/// 1-RDM spectrum; the basis deficit is carried as the truncation error.
pub fn spectrum_2d(spec: ModelSpec2D) -> Result<EntanglementSpectrum> {
    coefficient_matrix_2d(spec)?.spectrum(SpectrumSource::Numeric2d, spec.provenance())
}

/// `(β², S_vN)` of `β ψ₊ + √(1−β²) ψ₋` for each `β ∈ [0, 1]`.
pub fn beta_sweep(nu: f64, betas: &[f64], plan: Plan2D) -> Result<Vec<(f64, f64)>> {
    let family = BetaFamily::new(nu, plan)?;
    betas
        .iter()
        .map(|&b| {
            FermionState::Lc(b).validate()?;
            Ok((b * b, family.spectrum_at(b * b)?.von_neumann()))
        })
        .collect()
}

/// Spectra over `ν` for a fixed statistics and fermion state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calogero2dFamily {
    pub statistics: Statistics,
    pub state: FermionState,
    pub plan: Plan2D,
}

impl SpectrumFamily for Calogero2dFamily {
    fn parameter(&self) -> Parameter {
        Parameter::Nu
    }

    fn spectrum_at(&self, nu: f64) -> Result<EntanglementSpectrum> {
        spectrum_2d(ModelSpec2D::new(nu, self.statistics, self.state, self.plan)?)
    }

    fn metadata(&self) -> ModelSpec {
        ModelSpec {
            dimension: 2,
            statistics: Some(self.statistics),
            fermion_state: match self.statistics {
                Statistics::Boson => None,
                Statistics::Fermion => Some(self.state),
            },
            epsilon: Some(1.0),
            nu: None,
        }
    }
}

/// Fermion spectra over `β²` at fixed `ν`, reusing one set of components.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaFamily {
    nu: f64,
    components: Components2D,
}

impl BetaFamily {
    pub fn new(nu: f64, plan: Plan2D) -> Result<Self> {
        Ok(BetaFamily { nu, components: components_2d(nu, Statistics::Fermion, plan)? })
    }
}

impl SpectrumFamily for BetaFamily {
    fn parameter(&self) -> Parameter {
        Parameter::Beta2
    }

    fn spectrum_at(&self, beta2: f64) -> Result<EntanglementSpectrum> {
        if !(0.0..=1.0).contains(&beta2) {
            return Err(domain!("β² = {beta2} outside [0, 1]"));
        }
        let state = FermionState::Lc(sqrt(beta2));
        let c = self.components.combine(state.cartesian_weights())?;
        c.spectrum(SpectrumSource::Numeric2d, ModelSpec::two_dimensional(self.nu, Statistics::Fermion, Some(state)))
    }

    fn metadata(&self) -> ModelSpec {
        ModelSpec::two_dimensional(self.nu, Statistics::Fermion, None)
    }
}

/// Angular-momentum structure of a `ψ₊` or `ψ₋` state on the complete oscillator
/// shells `a + b ≤ M − 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularMomentumCheck {
    /// Total `L_z` of the pair (`+1` for `ψ₊`, `−1` for `ψ₋`).
    pub total: i32,
    /// Largest `|c̃|` between sectors with `m₁ + m₂ ≠ total`.
    pub max_cross_sector: f64,
    /// Squared singular values collected sector by sector, descending.
    pub sector_spectrum: Vec<f64>,
}

/// Transforms the fermion coefficient matrix to the circular basis
/// `|N, m⟩ ∝ (a_x† + i a_y†)^{(N+m)/2} (a_x† − i a_y†)^{(N−m)/2} |0⟩` and
/// checks that only `m₁ + m₂ = L` survives. Only `Plus` and `Minus` qualify.
pub fn angular_momentum_check(spec: ModelSpec2D) -> Result<AngularMomentumCheck> {
    let total = match (spec.statistics, spec.fermion_state) {
        (Statistics::Fermion, FermionState::Plus) => 1,
        (Statistics::Fermion, FermionState::Minus) => -1,
        (Statistics::Boson, _) => 0,
        _ => return Err(domain!("only ψ₊, ψ₋ and boson states have definite L_z")),
    };
    let m = spec.plan.basis;
    let comps = components_2d(spec.nu, spec.statistics, spec.plan)?;
    // Undo the real rephasing: the complex matrix is i^{−b₁−b₂} c'.
    let (a, b) = spec.fermion_state.cartesian_weights();
    let real = comps.combine((a, b))?;
    let cart: Vec<(usize, usize)> = (0..m * m).map(|i| (i / m, i % m)).filter(|(a, b)| a + b < m).collect();
    let phase = |b: usize| -> Complex64 {
        match b % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, -1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, 1.0),
        }
    };
    let n_cart = cart.len();
    let c: Vec<Complex64> = (0..n_cart * n_cart)
        .map(|k| {
            let (i, j) = (cart[k / n_cart], cart[k % n_cart]);
            let value = real.get(i.0 * m + i.1, j.0 * m + j.1);
            phase(i.1) * phase(j.1) * value
        })
        .collect();

    // Circular states, in the same shell ordering.
    let circ: Vec<(usize, i32)> = (0..m).flat_map(|n| (0..=n).map(move |k| (n, n as i32 - 2 * k as i32))).collect();
    let mut w = vec![Complex64::new(0.0, 0.0); n_cart * circ.len()];
    let index_of = |a: usize, b: usize| cart.iter().position(|&p| p == (a, b));
    for (col, &(n, mm)) in circ.iter().enumerate() {
        let p = ((n as i32 + mm) / 2) as usize;
        let q = n - p;
        let norm = -0.5 * n as f64 * LN_2 - 0.5 * (ln_factorial(p as u32) + ln_factorial(q as u32));
        for j in 0..=p {
            for k in 0..=q {
                let ax = j + k;
                let ay = n - ax;
                let ln_mag = norm
                    + ln_binomial(p, j)
                    + ln_binomial(q, k)
                    + 0.5 * (ln_factorial(ax as u32) + ln_factorial(ay as u32));
                // (i)^{p−j} (−i)^{q−k}
                let e = (p - j) as i64 + 3 * (q - k) as i64;
                let unit = match e.rem_euclid(4) {
                    0 => Complex64::new(1.0, 0.0),
                    1 => Complex64::new(0.0, 1.0),
                    2 => Complex64::new(-1.0, 0.0),
                    _ => Complex64::new(0.0, -1.0),
                };
                if let Some(row) = index_of(ax, ay) {
                    w[row * circ.len() + col] += unit * exp(ln_mag);
                }
            }
        }
    }

    // c̃ = Wᴴ c W̄
    let nc = circ.len();
    let mut tmp = vec![Complex64::new(0.0, 0.0); n_cart * nc];
    for i in 0..n_cart {
        for beta in 0..nc {
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n_cart {
                let wj = w[j * nc + beta];
                if wj.re != 0.0 || wj.im != 0.0 {
                    s += c[i * n_cart + j] * wj.conj();
                }
            }
            tmp[i * nc + beta] = s;
        }
    }
    let mut ct = vec![Complex64::new(0.0, 0.0); nc * nc];
    for alpha in 0..nc {
        for i in 0..n_cart {
            let wi = w[i * nc + alpha].conj();
            if wi.re == 0.0 && wi.im == 0.0 {
                continue;
            }
            for beta in 0..nc {
                ct[alpha * nc + beta] += wi * tmp[i * nc + beta];
            }
        }
    }

    let mut max_cross = 0.0f64;
    for (alpha, &(_, m1)) in circ.iter().enumerate() {
        for (beta, &(_, m2)) in circ.iter().enumerate() {
            if m1 + m2 != total {
                max_cross = max_cross.max(ct[alpha * nc + beta].norm());
            }
        }
    }

    let mut sector_spectrum = Vec::new();
    let max_m = m as i32;
    for m1 in -max_m..=max_m {
        let rows: Vec<usize> = (0..nc).filter(|&k| circ[k].1 == m1).collect();
        let cols: Vec<usize> = (0..nc).filter(|&k| circ[k].1 == total - m1).collect();
        if rows.is_empty() || cols.is_empty() {
            continue;
        }
        let (r, q) = (rows.len(), cols.len());
        // [[Re, −Im], [Im, Re]] doubles every singular value.
        let embed = Matrix::from_fn(2 * r, 2 * q, |i, j| {
            let z = ct[rows[i % r] * nc + cols[j % q]];
            match (i < r, j < q) {
                (true, true) | (false, false) => z.re,
                (true, false) => -z.im,
                (false, true) => z.im,
            }
        });
        let embed = if embed.rows() > embed.cols() { embed.transpose() } else { embed };
        let mut sv = singular_values(&embed)?;
        sv.sort_by(|a, b| b.total_cmp(a));
        sector_spectrum.extend(sv.iter().step_by(2).map(|s| s * s));
    }
    sector_spectrum.sort_by(|a, b| b.total_cmp(a));
    Ok(AngularMomentumCheck { total, max_cross_sector: max_cross, sector_spectrum })
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    ln_factorial(n as u32) - ln_factorial(k as u32) - ln_factorial((n - k) as u32)
}

/// Cartesian spectrum restricted to the complete shells `a + b ≤ M − 1`, for
/// comparison with [`AngularMomentumCheck::sector_spectrum`].
pub fn shell_truncated_spectrum(spec: ModelSpec2D) -> Result<Vec<f64>> {
    let m = spec.plan.basis;
    let c = coefficient_matrix_2d(spec)?;
    let keep: Vec<usize> = (0..m * m).filter(|i| i / m + i % m < m).collect();
    let sub = c.entries().submatrix(&keep, &keep);
    let mut s: Vec<f64> = singular_values(&sub)?.into_iter().map(|x| x * x).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(m: usize) -> Plan2D {
        Plan2D::new(m).unwrap()
    }

    #[test]
    fn exponents() {
        assert_eq!(mu_exponent(2, 1.0, Statistics::Fermion).unwrap(), 0.0);
        let nu = (1.0 + 33f64.sqrt()) / 2.0;
        assert!((mu_exponent(2, nu, Statistics::Fermion).unwrap() - 2.0).abs() < 1e-12);
        assert!((mu_exponent(2, 2.0, Statistics::Boson).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        for d in 2..6 {
            let e = Exponents2D::new(d, 3.7).unwrap();
            let (rb, rf) = e.residuals();
            assert!(rb.abs() < 1e-12 && rf.abs() < 1e-12);
            assert!(e.mu_b >= 0.0 && e.mu_f >= 0.0);
        }
        assert!((nu_from_strength(strength(2.5)).unwrap() - 2.5).abs() < 1e-14);
    }

    #[test]
    fn norms() {
        for spec in [
            ModelSpec2D::boson(2.0).unwrap(),
            ModelSpec2D::fermion(2.0, FermionState::Plus).unwrap(),
            ModelSpec2D::fermion(1.7, FermionState::Lc(0.3)).unwrap(),
        ] {
            let n = ground_state_2d(spec).unwrap().quadrature_norm().unwrap();
            assert!((n - 1.0).abs() < 1e-12, "{spec:?}: {n}");
        }
    }

    #[test]
    fn noninteracting_limits() {
        let b = spectrum_2d(ModelSpec2D::boson(1.0).unwrap().with_plan(small(3)).unwrap()).unwrap();
        assert!((b.eigenvalues()[0] - 1.0).abs() < 1e-12);
        assert!(b.von_neumann().abs() < 1e-10);
        for beta in [0.0, 0.3, 0.5, 1.0] {
            let spec = ModelSpec2D::fermion(1.0, FermionState::Lc(beta)).unwrap().with_plan(small(3)).unwrap();
            let s = spectrum_2d(spec).unwrap();
            assert!((s.eigenvalues()[0] - 0.5).abs() < 1e-12 && (s.eigenvalues()[1] - 0.5).abs() < 1e-12);
            assert!((s.von_neumann() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn plus_state_slater_determinant() {
        // ψ₊ at ν = 1 is φ₀₀ ∧ (φ₁₀ + iφ₀₁)/√2; after rephasing (φ₀₁ → iφ₀₁)
        // the real matrix has |c| = 1/2 on the four (00,10), (00,01) entries.
        let c =
            coefficient_matrix_2d(ModelSpec2D::fermion(1.0, FermionState::Plus).unwrap().with_plan(small(2)).unwrap())
                .unwrap();
        let (o00, o01, o10) = (0, 1, 2);
        assert!((c.get(o00, o10).abs() - 0.5).abs() < 1e-12);
        assert!((c.get(o00, o01).abs() - 0.5).abs() < 1e-12);
        assert!((c.frobenius_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn angular_momentum_sectors() {
        let spec = ModelSpec2D::fermion(2.0, FermionState::Plus).unwrap().with_plan(small(10)).unwrap();
        let check = angular_momentum_check(spec).unwrap();
        assert!(check.max_cross_sector <= 1e-10, "{}", check.max_cross_sector);
        let shells = shell_truncated_spectrum(spec).unwrap();
        for (a, b) in check.sector_spectrum.iter().zip(&shells).take(10) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn beta_symmetry() {
        let plan = small(8);
        let sweep = beta_sweep(2.0, &[0.3f64.sqrt(), 0.7f64.sqrt()], plan).unwrap();
        assert!((sweep[0].1 - sweep[1].1).abs() < 1e-8);
    }

    #[test]
    fn boson_fermion_density_identity() {
        let g = 2.7;
        let fermion =
            ground_state_2d(ModelSpec2D::fermion(nu_from_strength(g).unwrap(), FermionState::Plus).unwrap()).unwrap();
        let boson = ground_state_2d(ModelSpec2D::boson(nu_from_strength(g + 1.0).unwrap()).unwrap()).unwrap();
        let mut seed = 0x9e37_79b9_7f4a_7c15u64;
        let mut next = || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 * 4.0 - 2.0
        };
        for _ in 0..20 {
            let (r1, r2) = ([next(), next()], [next(), next()]);
            let (b, f) = (boson.density(r1, r2), fermion.density(r1, r2));
            assert!((b - f).abs() <= 1e-10 * b, "{b} vs {f}");
        }
    }

    #[test]
    fn circular_states_more_entangled_than_cartesian() {
        let plan = small(14);
        let plus =
            spectrum_2d(ModelSpec2D::fermion(2.0, FermionState::Plus).unwrap().with_plan(plan).unwrap()).unwrap();
        let x = spectrum_2d(ModelSpec2D::fermion(2.0, FermionState::X).unwrap().with_plan(plan).unwrap()).unwrap();
        assert!(plus.von_neumann() > x.von_neumann() + 1e-3);
    }

    #[test]
    fn flat_sweep_without_interaction() {
        let betas: Vec<f64> = (0..=10).map(|k| (k as f64 / 10.0).sqrt()).collect();
        for (_, s) in beta_sweep(1.0, &betas, small(4)).unwrap() {
            assert!((s - 1.0).abs() < 1e-8);
        }
    }
}
