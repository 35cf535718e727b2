//! Free-fermion solution of the XX chain.
//!
//! After a Jordan–Wigner transformation the chain is a tight-binding model
//! whose one-body matrix is the adjacency matrix from [`crate::chain`].  The
//! end-to-end spin correlations follow from the end amplitudes of its
//! eigenvectors and the Fermi occupations at zero chemical potential.

use nalgebra::DMatrix;

use crate::chain::{build_adjacency, Bonds};
use crate::error::Result;
use crate::linalg::SymTridiagonal;
use crate::metrics::EndToEndReport;
use crate::units::Temperature;

/// Modes closer to zero than this fraction of the bandwidth count as zero
/// modes for the degeneracy flag.
pub const ZERO_MODE_RELATIVE_TOL: f64 = 1e-12;

/// Access to one-body energies and the end amplitudes `ξ_k(1)`, `ξ_k(N)`.
pub trait EndModes {
    /// Eigenvalues in ascending order.
    fn energies(&self) -> &[f64];
    /// `(ξ_k(1), ξ_k(N))` for mode `k`.
    fn end_amplitudes(&self, k: usize) -> (f64, f64);

    fn sites(&self) -> usize {
        self.energies().len()
    }
}

/// Full eigen-decomposition of the adjacency matrix.
#[derive(Debug, Clone)]
pub struct SingleParticleSpectrum {
    eigenvalues: Vec<f64>,
    /// Column `k` is the normalized eigenvector of `eigenvalues[k]`.
    eigenvectors: DMatrix<f64>,
}

impl SingleParticleSpectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    /// Energy of the filled Fermi sea (all negative modes occupied).
    pub fn fermi_sea_energy(&self) -> f64 {
        self.eigenvalues.iter().filter(|&&l| l < 0.0).sum()
    }
}

impl EndModes for SingleParticleSpectrum {
    fn energies(&self) -> &[f64] {
        &self.eigenvalues
    }

    fn end_amplitudes(&self, k: usize) -> (f64, f64) {
        let n = self.eigenvalues.len();
        (self.eigenvectors[(0, k)], self.eigenvectors[(n - 1, k)])
    }
}

/// Eigenvalues plus only the first and last eigenvector components; enough
/// for every end-to-end quantity and `O(N²)` instead of `O(N³)`.
#[derive(Debug, Clone)]
pub struct EdgeSpectrum {
    eigenvalues: Vec<f64>,
    first: Vec<f64>,
    last: Vec<f64>,
}

impl EdgeSpectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }
}

impl EndModes for EdgeSpectrum {
    fn energies(&self) -> &[f64] {
        &self.eigenvalues
    }

    fn end_amplitudes(&self, k: usize) -> (f64, f64) {
        (self.first[k], self.last[k])
    }
}

/// Full eigen-decomposition: ascending eigenvalues, first significant
/// component of every eigenvector positive.
pub fn diagonalize(m: &SymTridiagonal) -> Result<SingleParticleSpectrum> {
    let rows: Vec<usize> = (0..m.order()).collect();
    let eig = m.eigen(&rows)?;
    Ok(SingleParticleSpectrum {
        eigenvalues: eig.values,
        eigenvectors: eig.vectors,
    })
}

/// Eigenvalues and end amplitudes only.
pub fn diagonalize_edges(m: &SymTridiagonal) -> Result<EdgeSpectrum> {
    let n = m.order();
    let rows = if n == 1 { vec![0] } else { vec![0, n - 1] };
    let eig = m.eigen(&rows)?;
    let last_row = rows.len() - 1;
    Ok(EdgeSpectrum {
        first: eig.vectors.row(0).iter().copied().collect(),
        last: eig.vectors.row(last_row).iter().copied().collect(),
        eigenvalues: eig.values,
    })
}

/// End-to-end fermionic correlator `x = Σ_k ξ_k(1) ξ_k(N) n_F(Λ_k)`.
pub fn end_correlator<S: EndModes + ?Sized>(spec: &S, temperature: Temperature) -> f64 {
    spec.energies()
        .iter()
        .enumerate()
        .map(|(k, &lambda)| {
            let (a, b) = spec.end_amplitudes(k);
            a * b * temperature.fermi(lambda)
        })
        .sum()
}

/// Many-body gap: the cheapest single quasiparticle excitation, `min_k |Λ_k|`.
///
/// No clamping is applied: exponentially small but resolved gaps are
/// returned as computed (see [`is_degenerate`] for the zero-mode test).
pub fn many_body_gap<S: EndModes + ?Sized>(spec: &S) -> f64 {
    spec.energies()
        .iter()
        .fold(f64::INFINITY, |acc, l| acc.min(l.abs()))
}

/// True when the smallest `|Λ_k|` is below the zero-mode tolerance, i.e. the
/// half-filled ground state is (numerically) degenerate.
pub fn is_degenerate<S: EndModes + ?Sized>(spec: &S) -> bool {
    let max = spec.energies().iter().fold(0.0_f64, |acc, l| acc.max(l.abs()));
    many_body_gap(spec) <= ZERO_MODE_RELATIVE_TOL * max
}

/// Full end-to-end report for a bond profile at temperature `T`.
pub fn end_to_end(bonds: &Bonds, temperature: Temperature) -> Result<EndToEndReport> {
    let spectrum = diagonalize_edges(&build_adjacency(bonds))?;
    end_to_end_from_spectrum(&spectrum, temperature)
}

pub fn end_to_end_from_spectrum<S: EndModes + ?Sized>(
    spectrum: &S,
    temperature: Temperature,
) -> Result<EndToEndReport> {
    let x = end_correlator(spectrum, temperature);
    EndToEndReport::from_correlator(
        x,
        many_body_gap(spectrum),
        spectrum.sites(),
        temperature,
        is_degenerate(spectrum),
    )
}
