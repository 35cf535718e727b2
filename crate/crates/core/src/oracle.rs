//! Exact diagonalization of the XX spin chain in fixed-magnetization sectors.
//!
//! Independent of the free-fermion machinery: it builds the many-body
//! Hamiltonian directly on spin configurations and diagonalizes each block
//! densely.  Used to validate correlators, gaps and thermal states at small N.
//!
//! Site `i` is bit `i` of a configuration mask; a set bit is spin up.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::chain::Bonds;
use crate::error::{Error, Result};
use crate::linalg::{sorted_symmetric_eigen, CsrMatrix};
use crate::metrics::Matrix4c;
use crate::units::Temperature;

/// Largest chain handled by sparse sector construction.
pub const SECTOR_SITE_LIMIT: usize = 24;
/// Largest chain for which every sector is diagonalized densely.
pub const THERMAL_SITE_LIMIT: usize = 14;
/// Largest chain for the unrestricted `2^N` dense builders.
pub const FULL_SPACE_SITE_LIMIT: usize = 12;

/// Energies closer than this (relative to the largest bond) are degenerate.
pub const DEGENERACY_RELATIVE_TOL: f64 = 1e-10;

/// All `N`-bit masks with `n_up` set bits, in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorBasis {
    sites: usize,
    n_up: usize,
    states: Vec<u32>,
}

impl SectorBasis {
    pub fn new(sites: usize, n_up: usize) -> Result<Self> {
        if sites == 0 || sites > SECTOR_SITE_LIMIT {
            return Err(Error::SizeGuard {
                what: "spin sector basis",
                size: sites,
                limit: SECTOR_SITE_LIMIT,
            });
        }
        if n_up > sites {
            return Err(Error::InvalidParameter(format!(
                "{n_up} up spins do not fit on {sites} sites"
            )));
        }
        let mut states = Vec::with_capacity(binomial(sites, n_up));
        if n_up == 0 {
            states.push(0);
        } else {
            // Gosper's hack enumerates fixed-popcount masks in increasing order.
            let limit = 1u64 << sites;
            let mut v: u64 = (1u64 << n_up) - 1;
            while v < limit {
                states.push(v as u32);
                let t = v | (v - 1);
                v = (t + 1) | (((!t & (t + 1)) - 1) >> (v.trailing_zeros() + 1));
            }
        }
        Ok(Self {
            sites,
            n_up,
            states,
        })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn n_up(&self) -> usize {
        self.n_up
    }

    pub fn states(&self) -> &[u32] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn index_of(&self, mask: u32) -> Option<usize> {
        self.states.binary_search(&mask).ok()
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Many-body state restricted to one magnetization sector.
#[derive(Debug, Clone)]
pub struct SectorState {
    pub basis: Arc<SectorBasis>,
    pub amplitudes: DVector<f64>,
    pub energy: f64,
}

impl SectorState {
    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }
}

/// Sparse Hamiltonian block of one sector.
#[derive(Debug, Clone)]
pub struct SectorHamiltonian {
    pub basis: Arc<SectorBasis>,
    pub matrix: CsrMatrix,
}

fn check_bond_count(bonds: &Bonds, limit: usize, what: &'static str) -> Result<usize> {
    let sites = bonds.sites();
    if sites > limit {
        return Err(Error::SizeGuard {
            what,
            size: sites,
            limit,
        });
    }
    Ok(sites)
}

/// `H = Σ_i J_i (Sˣ_i Sˣ_{i+1} + Sʸ_i Sʸ_{i+1})` on the `n_up` sector.
pub fn build_sector_hamiltonian(bonds: &Bonds, n_up: usize) -> Result<SectorHamiltonian> {
    let sites = check_bond_count(bonds, SECTOR_SITE_LIMIT, "sector Hamiltonian")?;
    let basis = Arc::new(SectorBasis::new(sites, n_up)?);
    Ok(SectorHamiltonian {
        matrix: sector_matrix(&basis, bonds),
        basis,
    })
}

fn sector_matrix(basis: &SectorBasis, bonds: &[f64]) -> CsrMatrix {
    let mut trip = Vec::with_capacity(basis.dim() * bonds.len());
    for (col, &s) in basis.states().iter().enumerate() {
        for (i, &j) in bonds.iter().enumerate() {
            let pair = 0b11u32 << i;
            let bits = s & pair;
            if bits != 0 && bits != pair && j != 0.0 {
                let row = basis
                    .index_of(s ^ pair)
                    .expect("hopping conserves the number of up spins");
                trip.push((row, col, 0.5 * j));
            }
        }
    }
    CsrMatrix::from_triplets(basis.dim(), trip)
}

/// Complete spectrum of one sector.
#[derive(Debug, Clone)]
pub struct SectorSpectrum {
    pub basis: Arc<SectorBasis>,
    /// Ascending energies.
    pub energies: Vec<f64>,
    /// Column `k` is the eigenvector of `energies[k]`.
    pub vectors: DMatrix<f64>,
}

/// Dense diagonalization of every magnetization sector.
#[derive(Debug, Clone)]
pub struct SectorSpectra {
    sites: usize,
    bond_scale: f64,
    sectors: Vec<SectorSpectrum>,
}

/// Diagonalize all `N + 1` sectors (in parallel).
pub fn sector_spectra(bonds: &Bonds) -> Result<SectorSpectra> {
    let sites = check_bond_count(bonds, THERMAL_SITE_LIMIT, "dense sector diagonalization")?;
    let sectors = (0..=sites)
        .into_par_iter()
        .map(|n_up| {
            let h = build_sector_hamiltonian(bonds, n_up)?;
            let (energies, vectors) = sorted_symmetric_eigen(h.matrix.to_dense());
            Ok(SectorSpectrum {
                basis: h.basis,
                energies,
                vectors,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SectorSpectra {
        sites,
        bond_scale: bonds.max_abs().max(f64::MIN_POSITIVE),
        sectors,
    })
}

/// Equal-weight mixture over a degenerate ground space.
#[derive(Debug, Clone)]
pub struct GroundSpace {
    pub energy: f64,
    pub states: Vec<SectorState>,
}

impl SectorSpectra {
    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn sectors(&self) -> &[SectorSpectrum] {
        &self.sectors
    }

    pub fn ground_energy(&self) -> f64 {
        self.sectors
            .iter()
            .map(|s| s.energies[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// All energies of the full Hilbert space in ascending order.
    pub fn all_energies(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self
            .sectors
            .iter()
            .flat_map(|s| s.energies.iter().copied())
            .collect();
        e.sort_by(f64::total_cmp);
        e
    }

    /// `E₁ − E₀` over the union of all sectors (zero for a degenerate ground state).
    pub fn gap(&self) -> f64 {
        let e = self.all_energies();
        e[1] - e[0]
    }

    fn degeneracy_tol(&self) -> f64 {
        DEGENERACY_RELATIVE_TOL * self.bond_scale
    }

    pub fn ground_space(&self) -> GroundSpace {
        let e0 = self.ground_energy();
        let tol = self.degeneracy_tol();
        let mut states = Vec::new();
        for sector in &self.sectors {
            for (k, &e) in sector.energies.iter().enumerate() {
                if e > e0 + tol {
                    break;
                }
                states.push(SectorState {
                    basis: sector.basis.clone(),
                    amplitudes: sector.vectors.column(k).into_owned(),
                    energy: e,
                });
            }
        }
        GroundSpace { energy: e0, states }
    }

    /// A single lowest-energy eigenstate; among degenerate candidates the one
    /// closest to zero magnetization is chosen.
    pub fn ground_state(&self) -> SectorState {
        let space = self.ground_space();
        let n = self.sites as isize;
        space
            .states
            .into_iter()
            .min_by_key(|s| (2 * s.basis.n_up() as isize - n).abs())
            .expect("ground space is never empty")
    }

    /// Gibbs weights `(sector, level, weight)`; at `T = 0` the ground space
    /// is weighted uniformly.  Weights below `cutoff` (relative to the
    /// ground-state weight) are dropped before normalization.
    pub fn gibbs_weights(&self, temperature: Temperature, cutoff: f64) -> Vec<(usize, usize, f64)> {
        let e0 = self.ground_energy();
        let mut out = Vec::new();
        if temperature.is_zero() {
            let tol = self.degeneracy_tol();
            for (s, sector) in self.sectors.iter().enumerate() {
                for (k, &e) in sector.energies.iter().enumerate() {
                    if e <= e0 + tol {
                        out.push((s, k, 1.0));
                    }
                }
            }
        } else {
            let beta = 1.0 / temperature.value();
            for (s, sector) in self.sectors.iter().enumerate() {
                for (k, &e) in sector.energies.iter().enumerate() {
                    let w = (-(e - e0) * beta).exp();
                    if w > cutoff {
                        out.push((s, k, w));
                    }
                }
            }
        }
        let z: f64 = out.iter().map(|t| t.2).sum();
        for t in &mut out {
            t.2 /= z;
        }
        out
    }

    /// Reduced state of sites `(i, j)` in the Gibbs ensemble, computed
    /// directly from the eigenvectors.
    pub fn thermal_reduced_two_site(&self, temperature: Temperature, sites: (usize, usize)) -> Result<Matrix4c> {
        check_pair(self.sites, sites)?;
        let mut acc = [[0.0f64; 4]; 4];
        for (s, k, w) in self.gibbs_weights(temperature, 0.0) {
            let sector = &self.sectors[s];
            accumulate_pure(&sector.basis, sector.vectors.column(k).as_slice(), w, sites, &mut acc);
        }
        Ok(to_complex(acc))
    }

    /// Block-diagonal Gibbs state.
    pub fn thermal_state(&self, temperature: Temperature) -> ThermalState {
        let weights = self.gibbs_weights(temperature, 0.0);
        let blocks = self
            .sectors
            .iter()
            .enumerate()
            .map(|(s, sector)| {
                let dim = sector.basis.dim();
                let mut rho = DMatrix::zeros(dim, dim);
                for &(_, k, w) in weights.iter().filter(|t| t.0 == s) {
                    let v = sector.vectors.column(k);
                    rho.ger(w, &v, &v, 1.0);
                }
                (sector.basis.clone(), rho)
            })
            .collect();
        ThermalState {
            sites: self.sites,
            blocks,
        }
    }
}

/// Density matrix that is block diagonal in magnetization sectors.
#[derive(Debug, Clone)]
pub struct ThermalState {
    sites: usize,
    pub blocks: Vec<(Arc<SectorBasis>, DMatrix<f64>)>,
}

impl ThermalState {
    pub fn trace(&self) -> f64 {
        self.blocks.iter().map(|(_, b)| b.trace()).sum()
    }

    /// Assemble the full `2^N × 2^N` matrix (basis index = configuration mask).
    pub fn to_dense(&self) -> Result<DMatrix<f64>> {
        if self.sites > FULL_SPACE_SITE_LIMIT {
            return Err(Error::SizeGuard {
                what: "dense 2^N density matrix",
                size: self.sites,
                limit: FULL_SPACE_SITE_LIMIT,
            });
        }
        let dim = 1usize << self.sites;
        let mut rho = DMatrix::zeros(dim, dim);
        for (basis, block) in &self.blocks {
            for (a, &sa) in basis.states().iter().enumerate() {
                for (b, &sb) in basis.states().iter().enumerate() {
                    rho[(sa as usize, sb as usize)] = block[(a, b)];
                }
            }
        }
        Ok(rho)
    }

    pub fn reduced_two_site(&self, sites: (usize, usize)) -> Result<Matrix4c> {
        check_pair(self.sites, sites)?;
        let (i, j) = sites;
        let flip = (1u32 << i) | (1u32 << j);
        let mut acc = [[0.0f64; 4]; 4];
        for (basis, block) in &self.blocks {
            for (a, &s) in basis.states().iter().enumerate() {
                let ia = pair_index(s, i, j);
                acc[ia][ia] += block[(a, a)];
                if ((s >> i) & 1) != ((s >> j) & 1) {
                    let b = basis.index_of(s ^ flip).expect("same sector");
                    acc[ia][pair_index(s ^ flip, i, j)] += block[(a, b)];
                }
            }
        }
        Ok(to_complex(acc))
    }
}

fn check_pair(n: usize, (i, j): (usize, usize)) -> Result<()> {
    if i >= n || j >= n || i == j {
        return Err(Error::InvalidParameter(format!(
            "site pair ({i}, {j}) invalid for a {n}-site chain"
        )));
    }
    Ok(())
}

/// Index in `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩` of the spins on sites `i`, `j`.
#[inline]
fn pair_index(mask: u32, i: usize, j: usize) -> usize {
    let bi = ((mask >> i) & 1) as usize;
    let bj = ((mask >> j) & 1) as usize;
    ((1 - bi) << 1) | (1 - bj)
}

fn accumulate_pure(basis: &SectorBasis, psi: &[f64], weight: f64, (i, j): (usize, usize), acc: &mut [[f64; 4]; 4]) {
    let flip = (1u32 << i) | (1u32 << j);
    for (a, &s) in basis.states().iter().enumerate() {
        let amp = psi[a];
        if amp == 0.0 {
            continue;
        }
        let ia = pair_index(s, i, j);
        acc[ia][ia] += weight * amp * amp;
        if ((s >> i) & 1) != ((s >> j) & 1) {
            let b = basis.index_of(s ^ flip).expect("same sector");
            acc[ia][pair_index(s ^ flip, i, j)] += weight * amp * psi[b];
        }
    }
}

fn to_complex(acc: [[f64; 4]; 4]) -> Matrix4c {
    Matrix4c::from_fn(|r, c| Complex64::new(acc[r][c], 0.0))
}

/// Reduced state of sites `(i, j)` for a pure sector state.
pub fn reduced_two_site(state: &SectorState, sites: (usize, usize)) -> Result<Matrix4c> {
    check_pair(state.basis.sites(), sites)?;
    let mut acc = [[0.0f64; 4]; 4];
    accumulate_pure(&state.basis, state.amplitudes.as_slice(), 1.0, sites, &mut acc);
    Ok(to_complex(acc))
}

/// Reduced state of sites `(i, j)` for the equal-weight ground-space mixture.
pub fn reduced_two_site_ground(space: &GroundSpace, sites: (usize, usize)) -> Result<Matrix4c> {
    let first = space.states.first().expect("ground space is never empty");
    check_pair(first.basis.sites(), sites)?;
    let w = 1.0 / space.states.len() as f64;
    let mut acc = [[0.0f64; 4]; 4];
    for s in &space.states {
        accumulate_pure(&s.basis, s.amplitudes.as_slice(), w, sites, &mut acc);
    }
    Ok(to_complex(acc))
}

pub fn ground_state(bonds: &Bonds) -> Result<SectorState> {
    Ok(sector_spectra(bonds)?.ground_state())
}

pub fn ground_space(bonds: &Bonds) -> Result<GroundSpace> {
    Ok(sector_spectra(bonds)?.ground_space())
}

pub fn thermal_state(bonds: &Bonds, temperature: Temperature) -> Result<ThermalState> {
    Ok(sector_spectra(bonds)?.thermal_state(temperature))
}

pub fn oracle_gap(bonds: &Bonds) -> Result<f64> {
    Ok(sector_spectra(bonds)?.gap())
}

/// Hamiltonian on the unrestricted `2^N` basis (index = configuration mask).
pub fn full_hamiltonian(bonds: &Bonds) -> Result<DMatrix<f64>> {
    let sites = check_bond_count(bonds, FULL_SPACE_SITE_LIMIT, "dense 2^N Hamiltonian")?;
    let dim = 1usize << sites;
    let mut h = DMatrix::zeros(dim, dim);
    for s in 0..dim as u32 {
        for (i, &j) in bonds.iter().enumerate() {
            let pair = 0b11u32 << i;
            let bits = s & pair;
            if bits != 0 && bits != pair {
                h[((s ^ pair) as usize, s as usize)] += 0.5 * j;
            }
        }
    }
    Ok(h)
}

/// Gibbs state on the unrestricted basis, from a dense eigendecomposition.
pub fn full_thermal_state(bonds: &Bonds, temperature: Temperature) -> Result<DMatrix<f64>> {
    let h = full_hamiltonian(bonds)?;
    let (e, v) = sorted_symmetric_eigen(h);
    let e0 = e[0];
    let tol = DEGENERACY_RELATIVE_TOL * bonds.max_abs();
    let w: Vec<f64> = e
        .iter()
        .map(|&ek| {
            if temperature.is_zero() {
                if ek <= e0 + tol {
                    1.0
                } else {
                    0.0
                }
            } else {
                (-(ek - e0) / temperature.value()).exp()
            }
        })
        .collect();
    let z: f64 = w.iter().sum();
    let d = DMatrix::from_diagonal(&DVector::from_iterator(w.len(), w.iter().map(|x| x / z)));
    Ok(&v * d * v.transpose())
}
