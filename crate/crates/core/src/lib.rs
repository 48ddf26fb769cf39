//! Entanglement spectra of the two-particle Calogero model.
//!
//! The crate computes one-particle reduced-density-matrix (1-RDM) spectra for
//! two particles in a harmonic trap with the inverse-square interaction
//! `ν(ν−1)/r₁₂²`, and the entropies built from them:
//!
//! - [`spectra`]: validated spectrum container and the von Neumann, Rényi,
//!   linear and min entropies.
//! - [`hermite`]: oscillator basis, Gauss quadrature rules and the
//!   coefficient-matrix (Schmidt) construction.
//! - [`calogero1d`]: exact finite spectra at `ν = 2n` / `2n+1` and variational
//!   spectra for continuous `ν`.
//! - [`calogero2d`]: isotropic two-dimensional ground states, including the
//!   degenerate fermion family `β ψ₊ + √(1−β²) ψ₋`.
//! - [`harmonic`]: closed-form large-interaction results for the anisotropic
//!   two-dimensional model.
//! - [`crossover`]: variational relative-motion energies and the
//!   two-to-one-dimensional crossover diagnostics.
//! - [`scan`]: entropy curves over parameter grids, tail-exponent fits and
//!   classification of Rényi non-analyticities.
//!
//! Everything here is pure computation on `alloc` collections; IO, CLI and
//! parallel scheduling live in the companion `calogero` crate.
#![no_std]
// `!(x > 0.0)` is used on purpose so that NaN falls into the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
mod fmath;

pub mod calogero1d;
pub mod calogero2d;
pub mod crossover;
pub mod harmonic;
pub mod hermite;
pub mod linalg;
pub mod model;
pub mod scan;
pub mod spectra;

pub use error::{Error, Result};
pub use model::{FermionState, ModelSpec, Statistics};
pub use spectra::{EntanglementSpectrum, SpectrumSource};
