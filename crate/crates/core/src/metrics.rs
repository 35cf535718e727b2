//! Entanglement and teleportation-fidelity functionals.
//!
//! Two-qubit matrices use the basis `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩` (first site is
//! the more significant index).

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::Temperature;

/// `|x|` above `1/2` by less than this is treated as round-off and clamped.
pub const CORRELATOR_SLACK: f64 = 1e-9;
/// Tolerance for the density-matrix axioms (hermiticity, trace, positivity).
pub const PHYSICAL_TOL: f64 = 1e-9;

pub type Matrix4c = Matrix4<Complex64>;

/// End-to-end quantities of a chain at one `(N, T)` point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndToEndReport {
    /// Fermionic end-to-end correlator.
    pub x: f64,
    pub concurrence: f64,
    /// Fully entangled fraction of the end-spin pair.
    pub fully_entangled_fraction: f64,
    /// Optimal teleportation fidelity using the end-spin pair as resource.
    pub fidelity: f64,
    pub gap: f64,
    pub sites: usize,
    pub temperature: Temperature,
    /// Zero (or numerically zero) one-body mode present.
    pub degenerate: bool,
}

impl EndToEndReport {
    pub fn from_correlator(
        x: f64,
        gap: f64,
        sites: usize,
        temperature: Temperature,
        degenerate: bool,
    ) -> Result<Self> {
        let x = clamp_correlator(x)?;
        let fid = fidelity_from_x(x)?;
        Ok(Self {
            x,
            concurrence: concurrence_from_x(x)?,
            fully_entangled_fraction: fid.fully_entangled_fraction,
            fidelity: fid.fidelity,
            gap,
            sites,
            temperature,
            degenerate,
        })
    }
}

/// Fully entangled fraction and the induced teleportation fidelity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fidelity {
    pub fully_entangled_fraction: f64,
    pub fidelity: f64,
}

fn clamp_correlator(x: f64) -> Result<f64> {
    if !x.is_finite() || x.abs() > 0.5 + CORRELATOR_SLACK {
        return Err(Error::NonPhysical(format!(
            "end-to-end correlator |x| = {} exceeds 1/2",
            x.abs()
        )));
    }
    Ok(x.clamp(-0.5, 0.5))
}

/// `C = 2·max(0, x² + |x| − 1/4)`.
pub fn concurrence_from_x(x: f64) -> Result<f64> {
    let x = clamp_correlator(x)?.abs();
    Ok((2.0 * (x * x + x - 0.25)).max(0.0))
}

/// Thermodynamic-limit concurrence of the dimerized chain,
/// `C∞ = 2·max(0, 1/2 − λ² + λ⁴/4)`.
pub fn saturation_concurrence(lambda: f64) -> f64 {
    let l2 = lambda * lambda;
    (2.0 * (0.5 - l2 + 0.25 * l2 * l2)).max(0.0)
}

/// Root of the saturation formula: `λ_c = √(2 − √2)`.
pub fn saturation_threshold() -> f64 {
    (2.0 - std::f64::consts::SQRT_2).sqrt()
}

/// `F_full = 1/4 + |x| + x²` and `f = (2F_full + 1)/3`.
pub fn fidelity_from_x(x: f64) -> Result<Fidelity> {
    let x = clamp_correlator(x)?.abs();
    let full = 0.25 + x + x * x;
    Ok(Fidelity {
        fully_entangled_fraction: full,
        fidelity: (2.0 * full + 1.0) / 3.0,
    })
}

/// `C = 2·max(0, (3/2)f − 1)`.
pub fn concurrence_from_fidelity(fidelity: f64) -> f64 {
    (2.0 * (1.5 * fidelity - 1.0)).max(0.0)
}

/// End-pair reduced state for correlator `x`, transverse sign fixed to `+1`:
/// `ρ = I/4 + (x/2)(σˣσˣ + σʸσʸ) − x² σᶻσᶻ`.
pub fn two_site_reduced_from_x(x: f64) -> Matrix4c {
    let c = |v: f64| Complex64::new(v, 0.0);
    let outer = 0.25 - x * x;
    let inner = 0.25 + x * x;
    let mut rho = Matrix4c::zeros();
    rho[(0, 0)] = c(outer);
    rho[(1, 1)] = c(inner);
    rho[(2, 2)] = c(inner);
    rho[(3, 3)] = c(outer);
    rho[(1, 2)] = c(x);
    rho[(2, 1)] = c(x);
    rho
}

/// Checks hermiticity, unit trace and positivity; returns the eigenvalues.
pub fn check_density_matrix(rho: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    if rho.nrows() != rho.ncols() || rho.nrows() == 0 {
        return Err(Error::NonPhysical(format!(
            "density matrix must be square, got {}×{}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    let herm_err = (rho - rho.adjoint()).camax();
    if herm_err > PHYSICAL_TOL {
        return Err(Error::NonPhysical(format!("not Hermitian (deviation {herm_err:.3e})")));
    }
    let trace = rho.trace();
    if (trace - Complex64::new(1.0, 0.0)).norm() > PHYSICAL_TOL {
        return Err(Error::NonPhysical(format!("trace {trace} differs from 1")));
    }
    let values = hermitian_eigenvalues(rho);
    if let Some(&min) = values.first() {
        if min < -PHYSICAL_TOL {
            return Err(Error::NonPhysical(format!("negative eigenvalue {min:.3e}")));
        }
    }
    Ok(values)
}

/// Ascending eigenvalues of a Hermitian matrix (the anti-Hermitian part is discarded).
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut v: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Wootters concurrence of a two-qubit state.
///
/// The Wootters λ's (square roots of the eigenvalues of `ρ ρ̃`, with
/// `ρ̃ = (σʸ⊗σʸ) ρ* (σʸ⊗σʸ)`) are the singular values of `√ρ (σʸ⊗σʸ) √ρ*`.
/// Taking them from an SVD avoids squaring and then square-rooting small
/// eigenvalues, which would cost half the significant digits near `C = 1`.
pub fn wootters_concurrence(rho: &Matrix4c) -> Result<f64> {
    let dense = DMatrix::from_column_slice(4, 4, rho.as_slice());
    check_density_matrix(&dense)?;
    let h = (rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let mut sqrt_rho = Matrix4c::zeros();
    for k in 0..4 {
        let w = eig.eigenvalues[k].max(0.0).sqrt();
        let v = eig.eigenvectors.column(k);
        sqrt_rho += v * v.adjoint() * Complex64::new(w, 0.0);
    }
    // σʸ⊗σʸ is real in this basis: anti-diagonal (−1, 1, 1, −1).
    let mut yy = Matrix4c::zeros();
    yy[(0, 3)] = Complex64::new(-1.0, 0.0);
    yy[(1, 2)] = Complex64::new(1.0, 0.0);
    yy[(2, 1)] = Complex64::new(1.0, 0.0);
    yy[(3, 0)] = Complex64::new(-1.0, 0.0);
    let a = sqrt_rho * yy * sqrt_rho.map(|z| z.conj());
    let mut lambdas: Vec<f64> = a.singular_values().iter().copied().collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0))
}

/// Partial transpose over the second factor of a `d_A·d_B` bipartite matrix.
pub fn partial_transpose(rho: &DMatrix<Complex64>, dims: (usize, usize)) -> Result<DMatrix<Complex64>> {
    let (da, db) = dims;
    if da == 0 || db == 0 || rho.nrows() != da * db || rho.ncols() != da * db {
        return Err(Error::InvalidParameter(format!(
            "dimensions {da}×{db} do not match a {}×{} matrix",
            rho.nrows(),
            rho.ncols()
        )));
    }
    Ok(DMatrix::from_fn(da * db, da * db, |r, c| {
        let (a, b) = (r / db, r % db);
        let (a2, b2) = (c / db, c % db);
        rho[(a * db + b2, a2 * db + b)]
    }))
}

/// Logarithmic negativity `log₂ ‖ρ^{T_B}‖₁`.
pub fn log_negativity(rho: &DMatrix<Complex64>, dims: (usize, usize)) -> Result<f64> {
    let pt = partial_transpose(rho, dims)?;
    check_density_matrix(rho)?;
    let trace_norm: f64 = hermitian_eigenvalues(&pt).iter().map(|v| v.abs()).sum();
    Ok(trace_norm.log2().max(0.0))
}

/// Swap the two factors of a bipartite matrix (`A⊗B → B⊗A`).
pub fn swap_factors(rho: &DMatrix<Complex64>, dims: (usize, usize)) -> DMatrix<Complex64> {
    let (da, db) = dims;
    let idx = |r: usize| {
        let (b, a) = (r / da, r % da);
        a * db + b
    };
    DMatrix::from_fn(da * db, da * db, |r, c| rho[(idx(r), idx(c))])
}
