//! Model selectors shared by every spectrum producer.

use core::fmt;

/// Exchange symmetry of the two-particle state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistics {
    Boson,
    Fermion,
}

impl Statistics {
    pub fn as_str(self) -> &'static str {
        match self {
            Statistics::Boson => "boson",
            Statistics::Fermion => "fermion",
        }
    }
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for Statistics {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "boson" | "bosons" | "b" => Ok(Statistics::Boson),
            "fermion" | "fermions" | "f" => Ok(Statistics::Fermion),
            other => Err(crate::error::domain!("unknown statistics '{other}'")),
        }
    }
}

/// Choice of the antisymmetric factor `ψ_S` in the degenerate two-dimensional
/// fermion ground state.
///
/// `ψ₊ = Δx + iΔy` and `ψ₋ = Δx − iΔy` are the angular-momentum eigenstates;
/// `x` and `y` are their normalized real combinations, and `Lc(β)` is
/// `β ψ₊ + √(1−β²) ψ₋`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FermionState {
    Plus,
    Minus,
    X,
    Y,
    Lc(f64),
}

impl FermionState {
    /// Coefficients `(a, b)` with `ψ_S ∝ a Δx + i b Δy`, normalized so that
    /// `a² + b² = 2` (the norm of `ψ₊`).
    pub fn cartesian_weights(self) -> (f64, f64) {
        use crate::fmath::sqrt;
        match self {
            FermionState::Plus => (1.0, 1.0),
            FermionState::Minus => (1.0, -1.0),
            FermionState::X => (core::f64::consts::SQRT_2, 0.0),
            FermionState::Y => (0.0, core::f64::consts::SQRT_2),
            FermionState::Lc(beta) => {
                let gamma = sqrt((1.0 - beta * beta).max(0.0));
                (beta + gamma, beta - gamma)
            }
        }
    }

    pub fn validate(self) -> crate::Result<()> {
        match self {
            FermionState::Lc(beta) if !(0.0..=1.0).contains(&beta) => {
                Err(crate::error::domain!("β = {beta} outside [0, 1]"))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for FermionState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FermionState::Plus => f.write_str("plus"),
            FermionState::Minus => f.write_str("minus"),
            FermionState::X => f.write_str("x"),
            FermionState::Y => f.write_str("y"),
            FermionState::Lc(beta) => write!(f, "lc({beta})"),
        }
    }
}

/// Provenance record attached to every spectrum.
///
/// Fields that do not apply to a given producer are left `None`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ModelSpec {
    pub dimension: u8,
    pub statistics: Option<Statistics>,
    pub nu: Option<f64>,
    pub fermion_state: Option<FermionState>,
    pub epsilon: Option<f64>,
}

impl ModelSpec {
    pub fn one_dimensional(nu: f64, statistics: Statistics) -> Self {
        ModelSpec { dimension: 1, statistics: Some(statistics), nu: Some(nu), ..Default::default() }
    }

    pub fn two_dimensional(nu: f64, statistics: Statistics, state: Option<FermionState>) -> Self {
        ModelSpec { dimension: 2, statistics: Some(statistics), nu: Some(nu), fermion_state: state, epsilon: Some(1.0) }
    }

    pub fn anisotropic(epsilon: f64) -> Self {
        ModelSpec { dimension: 2, statistics: Some(Statistics::Boson), epsilon: Some(epsilon), ..Default::default() }
    }
}
