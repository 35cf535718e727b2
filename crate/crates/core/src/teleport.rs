//! Teleportation through a thermal spin channel, and thermal fidelity maps.
//!
//! The sender owns a storage qubit (site 0) coupled by a strong bond
//! `J₀ = ν J_b` to the first site of an `N`-site channel.  After evolving for
//! `t* = π/(4J₀)` the sender measures `S₀ᶻ, S₁ᶻ`; when the two outcomes
//! differ, the receiver applies a `±π/2` rotation about z to the last channel
//! site and holds the teleported state.
//!
//! Hopping amplitudes of a cavity array map to XX bonds of twice their size;
//! all energies and temperatures here are in units of the bulk hopping `J_b`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{build_adjacency, build_couplings, Bonds, CouplingPattern};
use crate::error::{Error, Result};
use crate::fermion::{diagonalize_edges, end_correlator, EdgeSpectrum};
use crate::linalg::{sorted_symmetric_eigen, CsrMatrix};
use crate::metrics::fidelity_from_x;
use crate::oracle::{self, sector_spectra, SectorBasis, SectorSpectra};
use crate::units::Temperature;

/// Storage qubit plus channel must not exceed this many spins.
pub const TELEPORT_SITE_LIMIT: usize = 14;
/// XX bond produced by a unit hopping amplitude between cavities.
pub const SPIN_BOND_PER_HOPPING: f64 = 2.0;
/// Quadrature points for averaging over the relative input phase.
pub const PHASE_POINTS: usize = 16;
/// Channel eigenstates with smaller relative Boltzmann weight are dropped.
pub const GIBBS_CUTOFF: f64 = 1e-16;
/// Classical teleportation threshold.
pub const CLASSICAL_FIDELITY: f64 = 2.0 / 3.0;
/// Highest temperature probed when bracketing the critical temperature.
pub const TC_CEILING: f64 = 10.0;

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);

/// Protocol parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeleportConfig {
    /// Hopping profile of the channel, in units of `J_b`.
    pub channel: CouplingPattern,
    pub channel_sites: usize,
    /// `ν = J₀ / J_b`.
    pub nu: f64,
    pub temperature: Temperature,
    /// Evolution time; `None` selects `π/(4J₀)`.
    pub time: Option<f64>,
}

impl TeleportConfig {
    pub fn lambda_mu(channel_sites: usize, lambda: f64, mu: f64, nu: f64, temperature: Temperature) -> Self {
        Self {
            channel: CouplingPattern::lambda_mu(lambda, mu),
            channel_sites,
            nu,
            temperature,
            time: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nu.is_finite() && self.nu > 0.0) {
            return Err(Error::InvalidParameter(format!("ν must be positive, got {}", self.nu)));
        }
        if self.channel_sites + 1 > TELEPORT_SITE_LIMIT {
            return Err(Error::SizeGuard {
                what: "teleportation simulation (storage + channel spins)",
                size: self.channel_sites + 1,
                limit: TELEPORT_SITE_LIMIT,
            });
        }
        if let Some(t) = self.time {
            if !t.is_finite() {
                return Err(Error::InvalidParameter(format!("evolution time must be finite, got {t}")));
            }
        }
        self.channel.validate()
    }

    pub fn evolution_time(&self) -> f64 {
        self.time.unwrap_or(PI / (4.0 * self.nu))
    }

    /// XX bonds of the channel alone.
    pub fn channel_bonds(&self) -> Result<Bonds> {
        Ok(build_couplings(&self.channel, self.channel_sites)?.scaled(SPIN_BOND_PER_HOPPING))
    }

    /// XX bonds of storage qubit plus channel.
    pub fn full_bonds(&self) -> Result<Bonds> {
        let mut bonds = vec![SPIN_BOND_PER_HOPPING * self.nu];
        bonds.extend_from_slice(&self.channel_bonds()?);
        Bonds::new(bonds)
    }
}

/// Normalized input qubit `α|↑⟩ + β|↓⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitInput {
    pub alpha: C,
    pub beta: C,
}

impl QubitInput {
    pub fn new(alpha: C, beta: C) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "input state must be normalized, |α|² + |β|² = {norm}"
            )));
        }
        Ok(Self { alpha, beta })
    }

    /// `|α| |↑⟩ + √(1 − |α|²) e^{iφ} |↓⟩`.
    pub fn from_modulus(modulus: f64, phase: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&modulus) {
            return Err(Error::InvalidParameter(format!("|α| must lie in [0, 1], got {modulus}")));
        }
        let beta = (1.0 - modulus * modulus).max(0.0).sqrt();
        Self::new(C::new(modulus, 0.0), C::from_polar(beta, phase))
    }

    fn amplitudes(&self) -> [C; 2] {
        [self.alpha, self.beta]
    }
}

/// Measurement outcomes of `(S₀ᶻ, S₁ᶻ)` in the order ↑↑, ↑↓, ↓↑, ↓↓.
pub const OUTCOMES: [(bool, bool); 4] = [(true, true), (true, false), (false, true), (false, false)];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TeleportResult {
    pub outcome_probabilities: [f64; 4],
    /// Probability of the kept (opposite-spin) outcomes.
    pub success_probability: f64,
    /// Post-correction fidelity of each kept outcome.
    pub outcome_fidelities: [Option<f64>; 4],
    /// Success-weighted average fidelity.
    pub fidelity: f64,
}

/// Phase-averaged fidelity at fixed `|α|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityPoint {
    pub alpha_modulus: f64,
    pub fidelity: f64,
    pub success_probability: f64,
}

/// Linear response of the protocol: the unnormalized state of the last site
/// for every outcome is `Σ_ab φ_a φ_b* R[s][a][b]`, independent of the input.
#[derive(Debug, Clone)]
pub struct TeleportResponse {
    response: [[[Matrix2<C>; 2]; 2]; 4],
    /// z-rotation angle per outcome, `None` for discarded outcomes.
    corrections: [Option<f64>; 4],
}

fn rz(theta: f64) -> Matrix2<C> {
    Matrix2::new(C::from_polar(1.0, -theta / 2.0), ZERO, ZERO, C::from_polar(1.0, theta / 2.0))
}

/// Outcome probabilities and corrected fidelities from the four
/// unnormalized conditional states of the last site.
fn score(states: &[Matrix2<C>; 4], corrections: &[Option<f64>; 4], input: &QubitInput) -> TeleportResult {
    let phi = nalgebra::Vector2::new(input.alpha, input.beta);
    let mut probs = [0.0; 4];
    let mut fids = [None; 4];
    let mut success = 0.0;
    let mut weighted = 0.0;
    for (s, rho) in states.iter().enumerate() {
        let p = rho.trace().re;
        probs[s] = p;
        if let Some(theta) = corrections[s] {
            let r = rz(theta);
            let overlap = (phi.adjoint() * (r * rho * r.adjoint()) * phi)[(0, 0)].re;
            success += p;
            weighted += overlap;
            if p > 0.0 {
                fids[s] = Some((overlap / p).clamp(0.0, 1.0));
            }
        }
    }
    TeleportResult {
        outcome_probabilities: probs,
        success_probability: success,
        outcome_fidelities: fids,
        fidelity: if success > 0.0 { (weighted / success).clamp(0.0, 1.0) } else { 0.0 },
    }
}

fn corrections_for(transverse: f64) -> [Option<f64>; 4] {
    let half = PI / 2.0;
    let (up_down, down_up) = if transverse < 0.0 { (-half, half) } else { (half, -half) };
    [None, Some(up_down), Some(down_up), None]
}

impl TeleportResponse {
    fn from_parts(response: [[[Matrix2<C>; 2]; 2]; 4], transverse: f64) -> Self {
        Self {
            response,
            corrections: corrections_for(transverse),
        }
    }

    /// Unnormalized last-site state for outcome `s`.
    pub fn conditional_state(&self, s: usize, input: &QubitInput) -> Matrix2<C> {
        let phi = input.amplitudes();
        let mut rho = Matrix2::zeros();
        for a in 0..2 {
            for b in 0..2 {
                rho += self.response[s][a][b] * (phi[a] * phi[b].conj());
            }
        }
        rho
    }

    pub fn evaluate(&self, input: &QubitInput) -> TeleportResult {
        let states = std::array::from_fn(|s| self.conditional_state(s, input));
        score(&states, &self.corrections, input)
    }

    /// Average over the relative phase of `α` and `β` with `points` nodes.
    pub fn phase_averaged(&self, modulus: f64, points: usize) -> Result<FidelityPoint> {
        if points == 0 {
            return Err(Error::InvalidParameter("phase average needs at least one point".into()));
        }
        let mut f = 0.0;
        let mut p = 0.0;
        for j in 0..points {
            let input = QubitInput::from_modulus(modulus, 2.0 * PI * j as f64 / points as f64)?;
            let r = self.evaluate(&input);
            f += r.fidelity;
            p += r.success_probability;
        }
        Ok(FidelityPoint {
            alpha_modulus: modulus,
            fidelity: f / points as f64,
            success_probability: p / points as f64,
        })
    }
}

/// `ψ ← e^{−iHt} ψ` by Taylor steps with `‖H‖ dt ≤ 1`.
fn propagate(h: &CsrMatrix, psi: &mut [C], time: f64, norm_bound: f64) {
    let steps = (norm_bound * time.abs()).ceil().max(1.0) as usize;
    let dt = time / steps as f64;
    let dim = psi.len();
    let mut term = vec![ZERO; dim];
    let mut next = vec![ZERO; dim];
    for _ in 0..steps {
        term.copy_from_slice(psi);
        for k in 1..=80 {
            let factor = C::new(0.0, -dt / k as f64);
            for (r, out) in next.iter_mut().enumerate() {
                let mut acc = ZERO;
                for (c, v) in h.row(r) {
                    acc += term[c] * v;
                }
                *out = acc * factor;
            }
            std::mem::swap(&mut term, &mut next);
            let mut size = 0.0;
            for (p, t) in psi.iter_mut().zip(&term) {
                *p += t;
                size += t.norm_sqr();
            }
            if size < 1e-34 {
                break;
            }
        }
    }
}

/// Amplitudes keyed by the configuration without the last site, split by
/// the last site's spin (index 0 = ↑).
fn split_last(basis: &SectorBasis, psi: &[C], last: usize) -> HashMap<u32, [C; 2]> {
    let bit = 1u32 << last;
    let mut map: HashMap<u32, [C; 2]> = HashMap::with_capacity(psi.len());
    for (&mask, &amp) in basis.states().iter().zip(psi) {
        let slot = if mask & bit != 0 { 0 } else { 1 };
        map.entry(mask & !bit).or_insert([ZERO; 2])[slot] = amp;
    }
    map
}

fn outcome_index(key: u32) -> usize {
    let b0 = (key & 1) as usize;
    let b1 = ((key >> 1) & 1) as usize;
    ((1 - b0) << 1) | (1 - b1)
}

/// Signed transverse end-to-end correlation `Re⟨S₁⁺ S_N⁻⟩` of the channel.
fn channel_transverse(spectra: &SectorSpectra, temperature: Temperature) -> Result<f64> {
    let n = spectra.sites();
    let rho = spectra.thermal_reduced_two_site(temperature, (0, n - 1))?;
    Ok(rho[(2, 1)].re)
}

/// Evolve the storage-plus-channel system once per thermally relevant
/// channel eigenstate and collect the protocol's linear response.
pub fn prepare_teleport(config: &TeleportConfig) -> Result<TeleportResponse> {
    config.validate()?;
    let n = config.channel_sites;
    let channel = config.channel_bonds()?;
    let full = config.full_bonds()?;
    let spectra = sector_spectra(&channel)?;
    let transverse = channel_transverse(&spectra, config.temperature)?;
    let weights = spectra.gibbs_weights(config.temperature, GIBBS_CUTOFF);
    let time = config.evolution_time();
    let norm_bound: f64 = full.iter().map(|b| 0.5 * b.abs()).sum();

    // Full-system sector Hamiltonians, shared between eigenstates.
    let mut needed: Vec<usize> = weights
        .iter()
        .flat_map(|&(s, _, _)| {
            let up = spectra.sectors()[s].basis.n_up();
            [up, up + 1]
        })
        .collect();
    needed.sort_unstable();
    needed.dedup();
    let hamiltonians: HashMap<usize, (Arc<SectorBasis>, CsrMatrix)> = needed
        .into_par_iter()
        .map(|up| {
            let h = oracle::build_sector_hamiltonian(&full, up)?;
            Ok((up, (h.basis, h.matrix)))
        })
        .collect::<Result<_>>()?;

    let partials: Vec<[[[Matrix2<C>; 2]; 2]; 4]> = weights
        .par_iter()
        .map(|&(s, k, w)| {
            let sector = &spectra.sectors()[s];
            let chi = sector.vectors.column(k);
            let mut evolved: Vec<HashMap<u32, [C; 2]>> = Vec::with_capacity(2);
            // a = 0: storage ↑ (bit set); a = 1: storage ↓.
            for a in 0..2 {
                let storage_up = a == 0;
                let up = sector.basis.n_up() + usize::from(storage_up);
                let (basis, h) = &hamiltonians[&up];
                let mut psi = vec![ZERO; basis.dim()];
                for (i, &c) in sector.basis.states().iter().enumerate() {
                    let mask = (c << 1) | u32::from(storage_up);
                    let idx = basis.index_of(mask).expect("embedding preserves the sector");
                    psi[idx] = C::new(chi[i], 0.0);
                }
                propagate(h, &mut psi, time, norm_bound);
                evolved.push(split_last(basis, &psi, n));
            }
            let mut acc = [[[Matrix2::<C>::zeros(); 2]; 2]; 4];
            for a in 0..2 {
                for b in 0..2 {
                    for (key, amp_a) in &evolved[a] {
                        let Some(amp_b) = evolved[b].get(key) else { continue };
                        let s_idx = outcome_index(*key);
                        for sa in 0..2 {
                            for sb in 0..2 {
                                acc[s_idx][a][b][(sa, sb)] += amp_a[sa] * amp_b[sb].conj() * w;
                            }
                        }
                    }
                }
            }
            acc
        })
        .collect();

    let mut response = [[[Matrix2::<C>::zeros(); 2]; 2]; 4];
    for part in &partials {
        for s in 0..4 {
            for a in 0..2 {
                for b in 0..2 {
                    response[s][a][b] += part[s][a][b];
                }
            }
        }
    }
    Ok(TeleportResponse::from_parts(response, transverse))
}

pub fn teleport_protocol(config: &TeleportConfig, input: &QubitInput) -> Result<TeleportResult> {
    Ok(prepare_teleport(config)?.evaluate(input))
}

/// Phase-averaged fidelity on a grid of `|α|`.
pub fn fidelity_curve(config: &TeleportConfig, moduli: &[f64]) -> Result<Vec<FidelityPoint>> {
    let response = prepare_teleport(config)?;
    moduli
        .iter()
        .map(|&m| response.phase_averaged(m, PHASE_POINTS))
        .collect()
}

/// Independent reference: dense spectral evolution of the full density
/// matrix on the unrestricted `2^(N+1)` space.
pub fn dense_teleport_reference(config: &TeleportConfig, input: &QubitInput) -> Result<TeleportResult> {
    config.validate()?;
    let n = config.channel_sites;
    if n + 1 > 8 {
        return Err(Error::SizeGuard {
            what: "dense teleportation reference",
            size: n + 1,
            limit: 8,
        });
    }
    let channel = config.channel_bonds()?;
    let rho_channel = oracle::full_thermal_state(&channel, config.temperature)?;
    let h = oracle::full_hamiltonian(&config.full_bonds()?)?;
    let (energies, vectors) = sorted_symmetric_eigen(h);
    let t = config.evolution_time();
    let v = vectors.map(|x| C::new(x, 0.0));
    let phases = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        energies.len(),
        energies.iter().map(|e| C::from_polar(1.0, -e * t)),
    ));
    let u = &v * phases * v.adjoint();

    // |φ⟩⟨φ| ⊗ ρ_channel with the storage qubit on bit 0.
    let dim = 1usize << (n + 1);
    let phi = input.amplitudes();
    let amp = |bit: usize| if bit == 1 { phi[0] } else { phi[1] };
    let rho0 = DMatrix::from_fn(dim, dim, |r, c| {
        amp(r & 1) * amp(c & 1).conj() * rho_channel[(r >> 1, c >> 1)]
    });
    let rho_t = &u * rho0 * u.adjoint();

    let mut states = [Matrix2::<C>::zeros(); 4];
    let last = 1usize << n;
    for r in 0..dim {
        for c in 0..dim {
            if (r & !last) != (c & !last) {
                continue;
            }
            let sr = if r & last != 0 { 0 } else { 1 };
            let sc = if c & last != 0 { 0 } else { 1 };
            states[outcome_index(r as u32)][(sr, sc)] += rho_t[(r, c)];
        }
    }
    let transverse = channel_transverse(&sector_spectra(&channel)?, config.temperature)?;
    Ok(score(&states, &corrections_for(transverse), input))
}

/// Grid of `(λ, μ)` channel parameters with precomputed one-body spectra,
/// so that fidelities at many temperatures are cheap.
#[derive(Debug, Clone)]
pub struct FidelityLandscape {
    pub channel_sites: usize,
    pub lambdas: Vec<f64>,
    pub mus: Vec<f64>,
    spectra: Vec<EdgeSpectrum>,
}

/// Long-format fidelity map: `values[i * mus.len() + j]` belongs to
/// `(lambdas[i], mus[j])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityMap {
    pub channel_sites: usize,
    pub temperature: Temperature,
    pub lambdas: Vec<f64>,
    pub mus: Vec<f64>,
    pub values: Vec<f64>,
}

impl FidelityMap {
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let m = self.mus.len();
        self.values
            .iter()
            .enumerate()
            .map(move |(k, &v)| (self.lambdas[k / m], self.mus[k % m], v))
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

impl FidelityLandscape {
    pub fn new(channel_sites: usize, lambdas: &[f64], mus: &[f64]) -> Result<Self> {
        if lambdas.is_empty() || mus.is_empty() {
            return Err(Error::InvalidParameter("fidelity grid must not be empty".into()));
        }
        if let Some(l) = lambdas.iter().find(|l| !(**l > 0.0 && **l <= 1.0)) {
            return Err(Error::InvalidParameter(format!("λ grid must lie in (0, 1], got {l}")));
        }
        if let Some(m) = mus.iter().find(|m| !(**m >= 1.0 && **m <= 8.0)) {
            return Err(Error::InvalidParameter(format!("μ grid must lie in [1, 8], got {m}")));
        }
        let points: Vec<(f64, f64)> = lambdas
            .iter()
            .flat_map(|&l| mus.iter().map(move |&m| (l, m)))
            .collect();
        let spectra = points
            .par_iter()
            .map(|&(l, m)| {
                let bonds = build_couplings(
                    &CouplingPattern::lambda_mu(l, m).with_scale(SPIN_BOND_PER_HOPPING),
                    channel_sites,
                )?;
                diagonalize_edges(&build_adjacency(&bonds))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            channel_sites,
            lambdas: lambdas.to_vec(),
            mus: mus.to_vec(),
            spectra,
        })
    }

    pub fn fidelities(&self, temperature: Temperature) -> Result<Vec<f64>> {
        self.spectra
            .iter()
            .map(|s| Ok(fidelity_from_x(end_correlator(s, temperature))?.fidelity))
            .collect()
    }

    pub fn max_fidelity(&self, temperature: Temperature) -> Result<f64> {
        Ok(self
            .fidelities(temperature)?
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max))
    }

    pub fn map(&self, temperature: Temperature) -> Result<FidelityMap> {
        Ok(FidelityMap {
            channel_sites: self.channel_sites,
            temperature,
            lambdas: self.lambdas.clone(),
            mus: self.mus.clone(),
            values: self.fidelities(temperature)?,
        })
    }
}

/// Teleportation fidelity of the end-spin pair over a `(λ, μ)` grid.
pub fn thermal_fidelity_map(
    channel_sites: usize,
    lambdas: &[f64],
    mus: &[f64],
    temperature: Temperature,
) -> Result<FidelityMap> {
    FidelityLandscape::new(channel_sites, lambdas, mus)?.map(temperature)
}

/// Resolution of the `(λ, μ)` grid used for the critical temperature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TcGrid {
    pub lambda_points: usize,
    pub mu_points: usize,
}

impl Default for TcGrid {
    fn default() -> Self {
        Self {
            lambda_points: 40,
            mu_points: 40,
        }
    }
}

impl TcGrid {
    pub const MIN_POINTS: usize = 20;

    pub fn validate(&self) -> Result<()> {
        if self.lambda_points < Self::MIN_POINTS || self.mu_points < Self::MIN_POINTS {
            return Err(Error::InvalidParameter(format!(
                "critical-temperature grid must be at least {0}×{0}, got {1}×{2}",
                Self::MIN_POINTS,
                self.lambda_points,
                self.mu_points
            )));
        }
        Ok(())
    }

    /// `λ_i = i/n_λ` for `i = 1..n_λ` and `μ` uniformly on `[1, 8]`.
    pub fn axes(&self) -> (Vec<f64>, Vec<f64>) {
        let lambdas = (1..=self.lambda_points)
            .map(|i| i as f64 / self.lambda_points as f64)
            .collect();
        let mus = (0..self.mu_points)
            .map(|j| 1.0 + 7.0 * j as f64 / (self.mu_points - 1) as f64)
            .collect();
        (lambdas, mus)
    }
}

/// Highest temperature at which some `(λ, μ)` on the grid still beats the
/// classical fidelity, located by bisection to `tolerance`.
pub fn critical_temperature(channel_sites: usize, grid: TcGrid, tolerance: f64) -> Result<f64> {
    grid.validate()?;
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tolerance}")));
    }
    let (lambdas, mus) = grid.axes();
    let landscape = FidelityLandscape::new(channel_sites, &lambdas, &mus)?;
    let excess = |t: f64| -> Result<f64> {
        Ok(landscape.max_fidelity(Temperature::new(t)?)? - CLASSICAL_FIDELITY)
    };
    if excess(TC_CEILING)? > 0.0 {
        return Err(Error::Unbounded { ceiling: TC_CEILING });
    }
    if excess(0.0)? <= 0.0 {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0, TC_CEILING);
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        if excess(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal(nu: f64, t: f64) -> TeleportConfig {
        TeleportConfig {
            channel: CouplingPattern::uniform(),
            channel_sites: 2,
            nu,
            temperature: Temperature::new(t).unwrap(),
            time: None,
        }
    }

    #[test]
    fn ideal_regime_teleports_perfectly() {
        let response = prepare_teleport(&ideal(1e4, 0.0)).unwrap();
        for (m, ph) in [(0.0, 0.0), (1.0, 0.0), (0.6, 1.1), (0.3, -2.0)] {
            let r = response.evaluate(&QubitInput::from_modulus(m, ph).unwrap());
            assert!((r.fidelity - 1.0).abs() < 1e-6, "|α| = {m}: {}", r.fidelity);
            assert!((r.success_probability - 0.5).abs() < 1e-6);
            assert!((r.outcome_probabilities.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn sparse_path_matches_dense_reference() {
        for (nu, t) in [(3.0, 0.0), (1.5, 0.3), (10.0, 0.05)] {
            let cfg = ideal(nu, t);
            let response = prepare_teleport(&cfg).unwrap();
            for (m, ph) in [(0.2, 0.4), (0.8, 2.5)] {
                let input = QubitInput::from_modulus(m, ph).unwrap();
                let a = response.evaluate(&input);
                let b = dense_teleport_reference(&cfg, &input).unwrap();
                assert!((a.fidelity - b.fidelity).abs() < 1e-10);
                for s in 0..4 {
                    assert!((a.outcome_probabilities[s] - b.outcome_probabilities[s]).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn probabilities_ignore_global_phase() {
        let cfg = TeleportConfig::lambda_mu(6, 0.4, 2.0, 5.0, Temperature::new(0.1).unwrap());
        let response = prepare_teleport(&cfg).unwrap();
        let base = QubitInput::from_modulus(0.7, 0.3).unwrap();
        let g = C::from_polar(1.0, 1.234);
        let rotated = QubitInput::new(base.alpha * g, base.beta * g).unwrap();
        let (a, b) = (response.evaluate(&base), response.evaluate(&rotated));
        for s in 0..4 {
            assert!((a.outcome_probabilities[s] - b.outcome_probabilities[s]).abs() < 1e-12);
        }
        assert!((a.fidelity - b.fidelity).abs() < 1e-12);
    }

    #[test]
    fn phase_average_is_converged() {
        let cfg = TeleportConfig::lambda_mu(6, 0.3, 3.0, 8.0, Temperature::new(0.02).unwrap());
        let response = prepare_teleport(&cfg).unwrap();
        for m in [0.1, 0.5, 0.9] {
            let a = response.phase_averaged(m, PHASE_POINTS).unwrap();
            let b = response.phase_averaged(m, 257).unwrap();
            assert!((a.fidelity - b.fidelity).abs() < 1e-6);
        }
    }

    #[test]
    fn input_validation() {
        assert!(QubitInput::new(C::new(1.0, 0.0), C::new(1.0, 0.0)).is_err());
        assert!(QubitInput::from_modulus(1.2, 0.0).is_err());
        let mut cfg = ideal(1.0, 0.0);
        cfg.channel_sites = 14;
        assert!(prepare_teleport(&cfg).is_err());
        cfg.channel_sites = 2;
        cfg.nu = 0.0;
        assert!(prepare_teleport(&cfg).is_err());
    }

    #[test]
    fn fidelity_map_limits() {
        let map = thermal_fidelity_map(12, &[0.1], &[4.0], Temperature::ZERO).unwrap();
        assert!(map.values[0] > CLASSICAL_FIDELITY);
        let hot = thermal_fidelity_map(12, &[0.1, 0.5], &[1.0, 4.0], Temperature::new(1e9).unwrap()).unwrap();
        assert!(hot.values.iter().all(|f| (f - 0.5).abs() < 1e-8));
        assert!(thermal_fidelity_map(12, &[1.5], &[4.0], Temperature::ZERO).is_err());
        assert!(thermal_fidelity_map(12, &[0.5], &[9.0], Temperature::ZERO).is_err());
    }

    #[test]
    fn fidelity_map_nonincreasing_in_temperature() {
        let landscape = FidelityLandscape::new(10, &[0.1, 0.4, 0.9], &[1.0, 3.0, 7.0]).unwrap();
        let mut previous = landscape.fidelities(Temperature::ZERO).unwrap();
        for t in [0.001, 0.01, 0.05, 0.2, 1.0] {
            let now = landscape.fidelities(Temperature::new(t).unwrap()).unwrap();
            for (p, n) in previous.iter().zip(&now) {
                assert!(*n <= *p + 1e-12);
            }
            previous = now;
        }
    }

    #[test]
    fn grid_guard() {
        assert!(critical_temperature(12, TcGrid { lambda_points: 10, mu_points: 40 }, 1e-3).is_err());
        let (l, m) = TcGrid::default().axes();
        assert_eq!((l.len(), m.len()), (40, 40));
        assert_eq!((l[0], *l.last().unwrap()), (1.0 / 40.0, 1.0));
        assert_eq!((m[0], *m.last().unwrap()), (1.0, 8.0));
    }
}
