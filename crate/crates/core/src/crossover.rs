//! Variational ground energy of the anisotropic relative Hamiltonian
//! `H = −∇² + ¼(x² + ε²y²) + g/(x² + y²)`, `g = ν(ν−1)`, and the diagnostics
//! built from it as `ε` varies.
//!
//! The basis is the harmonic approximation around the two minima `(±x₀, 0)`:
//! `f_{nm} = w(r) [φ_n(x − x₀) + φ_n(−x − x₀)] √s φ_m(s y)` with `m` even,
//! `s = ((ε² − 1)/4)^{1/4}` and the cutoff `w = 1 − e^{−r²}`, which keeps
//! `g w²/r²` bounded at the origin. Every basis function is even in `x` and
//! `y`, so matrix elements are integrated on one quadrant with the trapezoid
//! rule; the integrands are smooth and Gaussian-decaying, for which the rule
//! converges exponentially.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::domain;
use crate::fmath::{abs, ceil, exp, expm1, sqrt};
use crate::harmonic::{classical_minimum, potential_minimum};
use crate::hermite::hermite_polynomials_into;
use crate::linalg::{generalized_ground, Matrix};
use crate::{Error, Result};

/// Smallest `ν(ν−1)` for which the two-centre basis is adequate.
pub const MIN_STRENGTH: f64 = 20.0;
/// Overlap condition number above which near-null directions are dropped.
pub const MAX_CONDITION: f64 = 1e12;
/// Default highest excitation per direction.
pub const DEFAULT_BASIS: usize = 10;
/// Largest highest-excitation accepted.
pub const MAX_BASIS: usize = 24;
/// Largest `delta_eps` accepted by [`crossover_diagnostics`].
pub const MAX_DELTA_EPS: f64 = 0.01;

const STEP: f64 = 0.125;
const MARGIN: f64 = 10.0;

/// One variational energy with its basis bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossoverPoint {
    pub nu_strength: f64,
    pub epsilon: f64,
    pub energy: f64,
    /// Highest excitation `Nb` actually used (after any retry).
    pub basis: usize,
    /// Basis functions kept after canonical orthogonalization.
    pub kept: usize,
    /// `|E(Nb) − E(Nb − 2)|`, or `None` when `Nb < 2`.
    pub convergence: Option<f64>,
}

fn check_inputs(g: f64, epsilon: f64, nb: usize) -> Result<()> {
    if !(g >= MIN_STRENGTH) || !g.is_finite() {
        return Err(domain!("ν(ν−1) = {g} below the two-centre basis range (≥ {MIN_STRENGTH})"));
    }
    if !(epsilon > 1.0) || !epsilon.is_finite() {
        return Err(domain!("anisotropy ε = {epsilon} must be finite and > 1"));
    }
    if nb > MAX_BASIS {
        return Err(domain!("basis excitation {nb} above {MAX_BASIS}"));
    }
    Ok(())
}

/// Normalized Hermite functions and their derivatives at `x`.
fn hermite_with_derivatives(x: f64, values: &mut [f64], derivs: &mut [f64], scratch: &mut [f64]) {
    let n = values.len();
    hermite_polynomials_into(x, scratch);
    let gauss = exp(-0.5 * x * x);
    for s in scratch[..=n].iter_mut() {
        *s *= gauss;
    }
    values.copy_from_slice(&scratch[..n]);
    for k in 0..n {
        let down = if k > 0 { sqrt(k as f64 / 2.0) * scratch[k - 1] } else { 0.0 };
        derivs[k] = down - sqrt((k as f64 + 1.0) / 2.0) * scratch[k + 1];
    }
}

fn trapezoid_axis(length: f64, step: f64) -> Vec<(f64, f64)> {
    let n = ceil(length / step) as usize;
    let h = length / n as f64;
    (0..=n).map(|k| (k as f64 * h, if k == 0 || k == n { 0.5 * h } else { h })).collect()
}

/// Overlap and Hamiltonian matrices.
fn assemble(g: f64, epsilon: f64, nb: usize) -> (Matrix, Matrix) {
    let x0 = classical_minimum(g);
    let s = sqrt(sqrt((epsilon * epsilon - 1.0) / 4.0));
    let nx = nb + 1;
    let my: Vec<usize> = (0..=nb).step_by(2).collect();
    let dim = nx * my.len();
    let reach = MARGIN + sqrt(2.0 * nb as f64 + 1.0);
    let xs = trapezoid_axis(x0 + reach, STEP);
    let ys = trapezoid_axis(reach / s, STEP / s.max(1.0));

    // x factors at every x node: symmetrized values and derivatives.
    let mut scratch = vec![0.0; nx + 1];
    let (mut pv, mut pd, mut mv, mut md) = (vec![0.0; nx], vec![0.0; nx], vec![0.0; nx], vec![0.0; nx]);
    let fx: Vec<(Vec<f64>, Vec<f64>)> = xs
        .iter()
        .map(|&(x, _)| {
            hermite_with_derivatives(x - x0, &mut pv, &mut pd, &mut scratch);
            hermite_with_derivatives(-x - x0, &mut mv, &mut md, &mut scratch);
            ((0..nx).map(|k| pv[k] + mv[k]).collect(), (0..nx).map(|k| pd[k] - md[k]).collect())
        })
        .collect();
    let ny = nb + 1;
    let (mut yv, mut yd, mut ys_scratch) = (vec![0.0; ny], vec![0.0; ny], vec![0.0; ny + 1]);
    let norm_y = sqrt(s);
    let fy: Vec<(Vec<f64>, Vec<f64>)> = ys
        .iter()
        .map(|&(y, _)| {
            hermite_with_derivatives(s * y, &mut yv, &mut yd, &mut ys_scratch);
            (my.iter().map(|&m| norm_y * yv[m]).collect(), my.iter().map(|&m| norm_y * s * yd[m]).collect())
        })
        .collect();

    let mut overlap = Matrix::zeros(dim, dim);
    let mut hamiltonian = Matrix::zeros(dim, dim);
    let (mut base, mut gx, mut gy) = (vec![0.0; dim], vec![0.0; dim], vec![0.0; dim]);
    for (ix, &(x, wx)) in xs.iter().enumerate() {
        for (iy, &(y, wy)) in ys.iter().enumerate() {
            let r2 = x * x + y * y;
            let e = exp(-r2);
            let w = -expm1(-r2);
            // g w²/r² → 0 at the origin.
            let singular = if r2 > 0.0 { g * w * w / r2 } else { 0.0 };
            let potential = 0.25 * (x * x + epsilon * epsilon * y * y) * w * w + singular;
            let (dwx, dwy) = (2.0 * x * e, 2.0 * y * e);
            let (ax, dax) = (&fx[ix].0, &fx[ix].1);
            let (by, dby) = (&fy[iy].0, &fy[iy].1);
            for i in 0..nx {
                for j in 0..my.len() {
                    let k = i * my.len() + j;
                    let b = ax[i] * by[j];
                    base[k] = b;
                    gx[k] = dax[i] * by[j] * w + b * dwx;
                    gy[k] = ax[i] * dby[j] * w + b * dwy;
                }
            }
            let weight = 4.0 * wx * wy;
            let (sw, vw) = (weight * w * w, weight * potential);
            for a in 0..dim {
                let (sa, va, gxa, gya) = (sw * base[a], vw * base[a], weight * gx[a], weight * gy[a]);
                let srow = overlap.row_mut(a);
                for b in a..dim {
                    srow[b] += sa * base[b];
                }
                let hrow = hamiltonian.row_mut(a);
                for b in a..dim {
                    hrow[b] += gxa * gx[b] + gya * gy[b] + va * base[b];
                }
            }
        }
    }
    for a in 0..dim {
        for b in 0..a {
            overlap[(a, b)] = overlap[(b, a)];
            hamiltonian[(a, b)] = hamiltonian[(b, a)];
        }
    }
    (overlap, hamiltonian)
}

fn ground(g: f64, epsilon: f64, nb: usize) -> Result<(f64, usize)> {
    let (overlap, hamiltonian) = assemble(g, epsilon, nb);
    let solved = generalized_ground(&hamiltonian, &overlap, MAX_CONDITION)?;
    Ok((solved.energy, overlap.rows() - solved.dropped))
}

/// Ground energy, functions kept and excitation used; an ill-conditioned
/// overlap is retried once with `nb − 2` before giving up.
fn solve(g: f64, epsilon: f64, nb: usize) -> Result<(f64, usize, usize)> {
    check_inputs(g, epsilon, nb)?;
    match ground(g, epsilon, nb) {
        Ok((e, k)) => Ok((e, k, nb)),
        Err(Error::IllConditioned { condition }) if nb >= 2 => match ground(g, epsilon, nb - 2) {
            Ok((e, k)) => Ok((e, k, nb - 2)),
            Err(_) => Err(Error::IllConditioned { condition }),
        },
        Err(e) => Err(e),
    }
}

/// Rayleigh–Ritz ground energy with excitations `n, m ≤ nb`.
pub fn variational_relative_energy(nu_strength: f64, epsilon: f64, nb: usize) -> Result<f64> {
    Ok(solve(nu_strength, epsilon, nb)?.0)
}

/// Ground energy plus basis bookkeeping.
pub fn crossover_point(nu_strength: f64, epsilon: f64, nb: usize) -> Result<CrossoverPoint> {
    let (energy, kept, used) = solve(nu_strength, epsilon, nb)?;
    let convergence = if used >= 2 { Some(abs(energy - ground(nu_strength, epsilon, used - 2)?.0)) } else { None };
    Ok(CrossoverPoint { nu_strength, epsilon, energy, basis: used, kept, convergence })
}

/// One row of [`crossover_diagnostics`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossoverRow {
    pub epsilon: f64,
    pub energy: f64,
    /// `E₀₀ / (E^r₀₀(ε) − 1)` with `E^r₀₀ = 1 + √(ε²−1)/2`.
    pub e_infinity: f64,
    /// `2(E₀₀ − √(ν(ν−1)) − 1)`, which drops the classical-minimum energy.
    pub e_infinity_shifted: f64,
    /// `√(ε²−1) dE₀₀/dε` by a centred difference; tends to `ε/2`.
    pub delta_e: f64,
}

impl CrossoverRow {
    /// `ΔE / (ε/2) − 1`.
    pub fn relative_deviation(&self) -> f64 {
        2.0 * self.delta_e / self.epsilon - 1.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossoverCurves {
    pub nu_strength: f64,
    pub delta_eps: f64,
    pub basis: usize,
    pub rows: Vec<CrossoverRow>,
}

/// Energies and derivative diagnostic over an `ε` grid in `(1, 3]`.
pub fn crossover_diagnostics(nu_strength: f64, grid: &[f64], delta_eps: f64, nb: usize) -> Result<CrossoverCurves> {
    if !(delta_eps > 0.0 && delta_eps <= MAX_DELTA_EPS) {
        return Err(domain!("delta_eps = {delta_eps} outside (0, {MAX_DELTA_EPS}]"));
    }
    for &eps in grid {
        if !(eps > 1.0 && eps <= 3.0) {
            return Err(domain!("grid point ε = {eps} outside (1, 3]"));
        }
        if eps - delta_eps <= 1.0 {
            return Err(domain!("ε − delta_eps = {} touches the isotropic point", eps - delta_eps));
        }
    }
    let rows = grid.iter().map(|&eps| crossover_row(nu_strength, eps, delta_eps, nb)).collect::<Result<Vec<_>>>()?;
    Ok(CrossoverCurves { nu_strength, delta_eps, basis: nb, rows })
}

/// A single grid point of [`crossover_diagnostics`].
pub fn crossover_row(nu_strength: f64, epsilon: f64, delta_eps: f64, nb: usize) -> Result<CrossoverRow> {
    let energy = variational_relative_energy(nu_strength, epsilon, nb)?;
    let up = variational_relative_energy(nu_strength, epsilon + delta_eps, nb)?;
    let down = variational_relative_energy(nu_strength, epsilon - delta_eps, nb)?;
    let root = sqrt(epsilon * epsilon - 1.0);
    Ok(CrossoverRow {
        epsilon,
        energy,
        e_infinity: energy / (0.5 * root),
        e_infinity_shifted: 2.0 * (energy - potential_minimum(nu_strength) - 1.0),
        delta_e: root * (up - down) / (2.0 * delta_eps),
    })
}
