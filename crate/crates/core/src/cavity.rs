//! Jaynes–Cummings polaritons of a single cavity and the conditions under
//! which a coupled cavity array behaves as an XX spin chain.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default ratio below which a scale counts as "much smaller".
pub const DEFAULT_VALIDITY_THRESHOLD: f64 = 0.1;

/// Single-cavity parameters (all energies in the same unit).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityParams {
    /// Photon energy ω.
    pub photon: f64,
    /// Atomic level spacing ω′.
    pub atom: f64,
    /// Photon–atom coupling g.
    pub coupling: f64,
}

impl CavityParams {
    pub fn new(photon: f64, atom: f64, coupling: f64) -> Result<Self> {
        if !(photon.is_finite() && photon > 0.0) {
            return Err(Error::InvalidParameter(format!("photon energy must be positive, got {photon}")));
        }
        if !(coupling.is_finite() && coupling > 0.0) {
            return Err(Error::InvalidParameter(format!("coupling must be positive, got {coupling}")));
        }
        if !atom.is_finite() {
            return Err(Error::InvalidParameter(format!("atomic gap must be finite, got {atom}")));
        }
        Ok(Self {
            photon,
            atom,
            coupling,
        })
    }

    /// Cavity tuned so that the one-polariton state `|1−⟩` is degenerate with
    /// the empty cavity: `ω = √(g² + Δ²)`, with `ω′ = ω + Δ`.
    pub fn resonant(coupling: f64, detuning: f64) -> Result<Self> {
        let photon = coupling.hypot(detuning);
        Self::new(photon, photon + detuning, coupling)
    }

    /// Δ = ω′ − ω.
    pub fn detuning(&self) -> f64 {
        self.atom - self.photon
    }
}

/// Polariton energies of the `n`-excitation manifold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolaritonEnergies {
    pub ground: f64,
    pub plus: f64,
    pub minus: f64,
}

/// `ε₀ = 0`, `ε_{n±} = nω ± √(n g² + Δ²)`.
pub fn polariton_energies(params: &CavityParams, n: u32) -> Result<PolaritonEnergies> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "polariton branches need at least one excitation".into(),
        ));
    }
    let nf = n as f64;
    let delta = params.detuning();
    let split = (nf * params.coupling * params.coupling + delta * delta).sqrt();
    Ok(PolaritonEnergies {
        ground: 0.0,
        plus: nf * params.photon + split,
        minus: nf * params.photon - split,
    })
}

/// Ratios that decide whether higher polaritons can be neglected.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    /// `max J / ε_{2−}`.
    pub coupling_ratio: f64,
    /// `T / ε_{2−}`.
    pub temperature_ratio: f64,
    pub threshold: f64,
    pub passes: bool,
}

/// Two-level (hard-core polariton) validity for inter-cavity hopping `max_hopping`
/// at temperature `temperature`.
pub fn two_level_validity(
    params: &CavityParams,
    max_hopping: f64,
    temperature: f64,
    threshold: f64,
) -> Result<ValidityReport> {
    let gap = polariton_energies(params, 2)?.minus;
    if gap.is_nan() || gap <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "second polariton level ε₂₋ = {gap} is not above the qubit doublet"
        )));
    }
    let coupling_ratio = max_hopping.abs() / gap;
    let temperature_ratio = temperature / gap;
    Ok(ValidityReport {
        coupling_ratio,
        temperature_ratio,
        threshold,
        passes: coupling_ratio < threshold && temperature_ratio < threshold,
    })
}
