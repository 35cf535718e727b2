//! One-dimensional Bose-Hubbard lattices with site-dependent local fields.
//!
//! `H = (U/2) Σ n_i(n_i − 1) − t Σ (b_i† b_{i+1} + h.c.) + Σ ε_i n_i`
//! is diagonalized exactly in the fixed-particle-number basis, with an
//! optional cap on the per-site occupation.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chain::{CouplingPattern, PatternKind};
use crate::error::{Error, Result};
use crate::linalg::{lowest_eigenpairs, sorted_symmetric_eigen, CsrMatrix};
use crate::metrics::{log_negativity, wootters_concurrence, Matrix4c};

/// Largest Fock basis the builder accepts.
pub const BASIS_LIMIT: usize = 200_000;
/// Above this dimension the ground state comes from Lanczos instead of a dense solve.
pub const DENSE_LIMIT: usize = 4000;
/// Default occupation cap, `min(n, DEFAULT_CAP)`.
pub const DEFAULT_CAP: usize = 4;
/// Smallest admissible weight of the `{0,1}²` end-site block.
pub const MIN_PROJECTION_WEIGHT: f64 = 1e-12;
/// Ratio above which `t ≪ ε` or `ε ≪ U` is reported as violated.
pub const REGIME_RATIO: f64 = 0.2;

/// Parameters of a Bose-Hubbard lattice; energies in units of the hopping `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BhParams {
    pub sites: usize,
    pub bosons: usize,
    pub interaction: f64,
    pub hopping: f64,
    pub fields: Vec<f64>,
    pub occupancy_cap: usize,
}

impl BhParams {
    /// Unit hopping, default occupancy cap.
    pub fn new(sites: usize, bosons: usize, interaction: f64, fields: Vec<f64>) -> Result<Self> {
        let p = Self {
            sites,
            bosons,
            interaction,
            hopping: 1.0,
            fields,
            occupancy_cap: bosons.min(DEFAULT_CAP),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_cap(mut self, cap: usize) -> Result<Self> {
        self.occupancy_cap = cap;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sites < 2 {
            return Err(Error::InvalidParameter(format!(
                "a lattice needs at least 2 sites, got {}",
                self.sites
            )));
        }
        if self.fields.len() != self.sites {
            return Err(Error::InvalidParameter(format!(
                "{} local fields given for {} sites",
                self.fields.len(),
                self.sites
            )));
        }
        if let Some(e) = self.fields.iter().find(|e| !e.is_finite() || **e < 0.0) {
            return Err(Error::InvalidParameter(format!("local fields must be finite and ≥ 0, got {e}")));
        }
        if !(self.interaction.is_finite() && self.interaction > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "on-site repulsion must be positive, got {}",
                self.interaction
            )));
        }
        if !(self.hopping.is_finite() && self.hopping > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "hopping must be positive, got {}",
                self.hopping
            )));
        }
        if self.occupancy_cap < self.bosons.min(DEFAULT_CAP) {
            return Err(Error::InvalidParameter(format!(
                "occupancy cap {} is below min(n, {DEFAULT_CAP}) = {}",
                self.occupancy_cap,
                self.bosons.min(DEFAULT_CAP)
            )));
        }
        Ok(())
    }
}

/// Field `ε` on every third site (2nd, 5th, 8th, … in 1-based numbering).
pub fn superlattice_fields(sites: usize, epsilon: f64) -> Result<Vec<f64>> {
    if sites == 0 || !sites.is_multiple_of(3) {
        return Err(Error::InvalidParameter(format!(
            "super-lattice needs a multiple of 3 sites, got {sites}"
        )));
    }
    Ok((0..sites).map(|i| if i % 3 == 1 { epsilon } else { 0.0 }).collect())
}

/// Field `ε` on the second and the next-to-last site.
pub fn end_probe_fields(sites: usize, epsilon: f64) -> Result<Vec<f64>> {
    if sites < 4 {
        return Err(Error::InvalidParameter(format!(
            "end-probe lattice needs at least 4 sites, got {sites}"
        )));
    }
    Ok((0..sites)
        .map(|i| if i == 1 || i == sites - 2 { epsilon } else { 0.0 })
        .collect())
}

/// Super-lattice at half filling of the effective spins: `n = N/3`.
pub fn superlattice_params(sites: usize, epsilon: f64, interaction: f64) -> Result<BhParams> {
    BhParams::new(sites, sites / 3, interaction, superlattice_fields(sites, epsilon)?)
}

/// End-probe lattice at half filling of the effective spins: `n = (N − 2)/2`.
pub fn end_probe_params(sites: usize, epsilon: f64, interaction: f64) -> Result<BhParams> {
    if !sites.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "end-probe lattice at half filling needs an even number of sites, got {sites}"
        )));
    }
    BhParams::new(sites, (sites - 2) / 2, interaction, end_probe_fields(sites, epsilon)?)
}

/// Fock states with a fixed particle number, in descending lexicographic order.
#[derive(Debug, Clone)]
pub struct BoseBasis {
    sites: usize,
    states: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

impl BoseBasis {
    pub fn new(sites: usize, bosons: usize, cap: usize) -> Result<Self> {
        let count = restricted_compositions(sites, bosons, cap);
        if count > BASIS_LIMIT {
            return Err(Error::SizeGuard {
                what: "Bose-Hubbard basis",
                size: count,
                limit: BASIS_LIMIT,
            });
        }
        if count == 0 {
            return Err(Error::InvalidParameter(format!(
                "{bosons} bosons do not fit on {sites} sites with cap {cap}"
            )));
        }
        let mut states = Vec::with_capacity(count);
        let mut current = vec![0u8; sites];
        fill(&mut current, 0, bosons, cap, &mut states);
        let index = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Ok(Self {
            sites,
            states,
            index,
        })
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn states(&self) -> &[Vec<u8>] {
        &self.states
    }

    pub fn index_of(&self, occupations: &[u8]) -> Option<usize> {
        self.index.get(occupations).copied()
    }
}

fn fill(current: &mut Vec<u8>, site: usize, left: usize, cap: usize, out: &mut Vec<Vec<u8>>) {
    let sites = current.len();
    if site + 1 == sites {
        if left <= cap {
            current[site] = left as u8;
            out.push(current.clone());
        }
        return;
    }
    for m in (0..=left.min(cap)).rev() {
        if left - m > cap * (sites - site - 1) {
            break;
        }
        current[site] = m as u8;
        fill(current, site + 1, left - m, cap, out);
    }
    current[site] = 0;
}

/// Number of ways to place `n` bosons on `sites` sites with at most `cap` per site.
pub fn restricted_compositions(sites: usize, n: usize, cap: usize) -> usize {
    let mut ways = vec![0usize; n + 1];
    ways[0] = 1;
    for _ in 0..sites {
        let mut next = vec![0usize; n + 1];
        for (total, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for m in 0..=cap.min(n - total) {
                next[total + m] = next[total + m].saturating_add(w);
            }
        }
        ways = next;
    }
    ways[n]
}

/// Hamiltonian matrix together with its basis.
#[derive(Debug, Clone)]
pub struct BhHamiltonian {
    pub basis: BoseBasis,
    pub matrix: CsrMatrix,
}

pub fn build_bh_hamiltonian(params: &BhParams) -> Result<BhHamiltonian> {
    params.validate()?;
    let basis = BoseBasis::new(params.sites, params.bosons, params.occupancy_cap)?;
    let cap = params.occupancy_cap as u8;
    let mut trip = Vec::new();
    let mut scratch = vec![0u8; params.sites];
    for (col, occ) in basis.states().iter().enumerate() {
        let diag: f64 = occ
            .iter()
            .zip(&params.fields)
            .map(|(&m, &eps)| {
                let m = m as f64;
                0.5 * params.interaction * m * (m - 1.0) + eps * m
            })
            .sum();
        if diag != 0.0 {
            trip.push((col, col, diag));
        }
        for i in 0..params.sites - 1 {
            // Move one boson between neighbours i and i+1, both directions.
            for (from, to) in [(i + 1, i), (i, i + 1)] {
                if occ[from] == 0 || occ[to] >= cap {
                    continue;
                }
                scratch.copy_from_slice(occ);
                scratch[from] -= 1;
                scratch[to] += 1;
                let row = basis.index_of(&scratch).expect("hopping stays inside the basis");
                let amp = -params.hopping * ((occ[to] as f64 + 1.0) * occ[from] as f64).sqrt();
                trip.push((row, col, amp));
            }
        }
    }
    let matrix = CsrMatrix::from_triplets(basis.dim(), trip);
    Ok(BhHamiltonian { basis, matrix })
}

/// Lowest two levels and the ground-state vector.
#[derive(Debug, Clone)]
pub struct BhGroundState {
    pub basis: BoseBasis,
    pub energy: f64,
    pub first_excited: Option<f64>,
    pub vector: DVector<f64>,
}

impl BhGroundState {
    pub fn gap(&self) -> Option<f64> {
        self.first_excited.map(|e| e - self.energy)
    }
}

pub fn bh_ground_state(params: &BhParams) -> Result<BhGroundState> {
    let h = build_bh_hamiltonian(params)?;
    let dim = h.basis.dim();
    let (energy, first_excited, vector) = if dim <= DENSE_LIMIT {
        let (values, vectors) = sorted_symmetric_eigen(h.matrix.to_dense());
        (values[0], values.get(1).copied(), vectors.column(0).into_owned())
    } else {
        let low = lowest_eigenpairs(&h.matrix, 2, 1e-10)?;
        (low.values[0], Some(low.values[1]), low.vectors.column(0).into_owned())
    };
    Ok(BhGroundState {
        basis: h.basis,
        energy,
        first_excited,
        vector,
    })
}

pub fn bh_gap(params: &BhParams) -> Result<f64> {
    bh_ground_state(params)?
        .gap()
        .ok_or_else(|| Error::InvalidParameter("a one-dimensional basis has no gap".into()))
}

/// Reduced density matrix of the two end sites, local dimension `cap + 1`,
/// index `a·(cap+1) + b` for occupations `a` (first site) and `b` (last site).
pub fn end_site_reduced(ground: &BhGroundState, cap: usize) -> DMatrix<f64> {
    let d = cap + 1;
    let last = ground.basis.sites() - 1;
    let mut groups: HashMap<&[u8], Vec<(usize, f64)>> = HashMap::new();
    for (k, occ) in ground.basis.states().iter().enumerate() {
        let amp = ground.vector[k];
        if amp == 0.0 {
            continue;
        }
        let idx = occ[0] as usize * d + occ[last] as usize;
        groups.entry(&occ[1..last]).or_default().push((idx, amp));
    }
    let mut rho = DMatrix::zeros(d * d, d * d);
    for entries in groups.values() {
        for &(i, a) in entries {
            for &(j, b) in entries {
                rho[(i, j)] += a * b;
            }
        }
    }
    rho
}

/// End-to-end entanglement of a Bose-Hubbard ground state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndSiteEntanglement {
    /// Logarithmic negativity of the full end-site reduced state.
    pub log_negativity: f64,
    /// Concurrence of the end sites projected on occupations {0, 1}.
    pub effective_concurrence: f64,
    /// Weight of the {0,1}² block before renormalization.
    pub projection_weight: f64,
    pub energy: f64,
    pub gap: Option<f64>,
}

pub fn end_site_entanglement(params: &BhParams) -> Result<EndSiteEntanglement> {
    let ground = bh_ground_state(params)?;
    end_site_entanglement_of(&ground, params.occupancy_cap)
}

pub fn end_site_entanglement_of(ground: &BhGroundState, cap: usize) -> Result<EndSiteEntanglement> {
    let d = cap + 1;
    let rho = end_site_reduced(ground, cap);
    let rho_c = rho.map(|v| Complex64::new(v, 0.0));
    let en = log_negativity(&rho_c, (d, d))?;

    // Qubit basis |↑⟩ = one boson, |↓⟩ = empty.
    let qubit = |occ: usize| 1 - occ;
    let mut projected = Matrix4c::zeros();
    for a in 0..2 {
        for b in 0..2 {
            for a2 in 0..2 {
                for b2 in 0..2 {
                    let v = rho[(a * d + b, a2 * d + b2)];
                    projected[((qubit(a) << 1) | qubit(b), (qubit(a2) << 1) | qubit(b2))] =
                        Complex64::new(v, 0.0);
                }
            }
        }
    }
    let weight = projected.trace().re;
    if weight < MIN_PROJECTION_WEIGHT {
        return Err(Error::NonPhysical(format!(
            "end sites have negligible weight {weight:.3e} on occupations {{0, 1}}"
        )));
    }
    projected /= Complex64::new(weight, 0.0);
    Ok(EndSiteEntanglement {
        log_negativity: en,
        effective_concurrence: wootters_concurrence(&projected)?,
        projection_weight: weight,
        energy: ground.energy,
        gap: ground.gap(),
    })
}

/// Effective spin chain of the zero-field sites to second order in `t/ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveSpinChain {
    /// Custom pattern with scale `2t`; ratios are bond / `2t`.
    pub pattern: CouplingPattern,
    /// Lattice indices (0-based) hosting the effective spins.
    pub spin_sites: Vec<usize>,
    /// Human-readable notes on violated perturbative conditions.
    pub warnings: Vec<String>,
}

/// Spins live on zero-field sites.  Neighbouring spins couple with `2t`;
/// spins separated by a field site `k` couple with `2t²/ε_k`.
pub fn effective_spin_couplings(params: &BhParams) -> Result<EffectiveSpinChain> {
    params.validate()?;
    let n = params.sites;
    let t = params.hopping;
    let f = &params.fields;
    if f[0] > 0.0 || f[n - 1] > 0.0 {
        return Err(Error::InvalidParameter(
            "field sites at the lattice ends cannot be eliminated".into(),
        ));
    }
    let spin_sites: Vec<usize> = (0..n).filter(|&i| f[i] == 0.0).collect();
    let mut ratios = Vec::with_capacity(spin_sites.len().saturating_sub(1));
    let mut warnings = Vec::new();
    for w in spin_sites.windows(2) {
        let (p, q) = (w[0], w[1]);
        match q - p {
            1 => ratios.push(1.0),
            2 => {
                let eps = f[p + 1];
                ratios.push(t / eps);
                if t / eps > REGIME_RATIO {
                    warnings.push(format!(
                        "site {}: t/ε = {:.3} is not small; second-order mapping unreliable",
                        p + 1,
                        t / eps
                    ));
                }
                if eps / params.interaction > REGIME_RATIO {
                    warnings.push(format!(
                        "site {}: ε/U = {:.3} is not small; doubly occupied states compete",
                        p + 1,
                        eps / params.interaction
                    ));
                }
            }
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "adjacent field sites between {p} and {q} cannot be eliminated"
                )))
            }
        }
    }
    if spin_sites.len() < 2 {
        return Err(Error::InvalidParameter("fewer than two effective spins".into()));
    }
    if t / params.interaction > REGIME_RATIO {
        warnings.push(format!(
            "t/U = {:.3} is not small; hard-core mapping unreliable",
            t / params.interaction
        ));
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(EffectiveSpinChain {
        pattern: CouplingPattern {
            kind: PatternKind::Custom { ratios },
            scale: 2.0 * t,
        },
        spin_sites,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::build_couplings;

    #[test]
    fn field_layouts() {
        let f = superlattice_fields(12, 3.0).unwrap();
        let strong: Vec<usize> = (0..12).filter(|&i| f[i] > 0.0).map(|i| i + 1).collect();
        assert_eq!(strong, vec![2, 5, 8, 11]);
        let f = superlattice_fields(6, 3.0).unwrap();
        assert_eq!(f.iter().filter(|&&e| e > 0.0).count(), 2);
        assert!(superlattice_fields(10, 1.0).is_err());
        assert_eq!(end_probe_fields(6, 2.0).unwrap(), vec![0.0, 2.0, 0.0, 0.0, 2.0, 0.0]);
    }

    #[test]
    fn basis_counts() {
        assert_eq!(restricted_compositions(12, 4, 4), 1365);
        let b = BoseBasis::new(12, 4, 4).unwrap();
        assert_eq!(b.dim(), 1365);
        assert_eq!(b.states()[0], vec![4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(BoseBasis::new(5, 6, 2).unwrap().dim(), restricted_compositions(5, 6, 2));
        for (i, s) in b.states().iter().enumerate() {
            assert_eq!(b.index_of(s), Some(i));
        }
        assert!(b.states().windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn small_hamiltonians() {
        let p = BhParams::new(2, 1, 5.0, vec![0.0, 0.0]).unwrap();
        let h = build_bh_hamiltonian(&p).unwrap();
        assert_eq!(h.matrix.to_dense(), DMatrix::from_row_slice(2, 2, &[0.0, -1.0, -1.0, 0.0]));
        assert!((bh_ground_state(&p).unwrap().energy + 1.0).abs() < 1e-14);

        let u = 3.0;
        let p = BhParams::new(2, 2, u, vec![0.0, 0.0]).unwrap();
        let h = build_bh_hamiltonian(&p).unwrap().matrix.to_dense();
        let s2 = 2f64.sqrt();
        let expected = DMatrix::from_row_slice(3, 3, &[u, -s2, 0.0, -s2, 0.0, -s2, 0.0, -s2, u]);
        assert!((h - expected).amax() < 1e-15);
        // Symmetric sector: [[U, -2],[-2, 0]] → (U − √(U² + 16))/2.
        let e0 = (u - (u * u + 16.0).sqrt()) / 2.0;
        assert!((bh_ground_state(&p).unwrap().energy - e0).abs() < 1e-13);
    }

    #[test]
    fn hamiltonian_is_symmetric() {
        let p = superlattice_params(9, 2.0, 7.0).unwrap();
        let h = build_bh_hamiltonian(&p).unwrap();
        assert!(h.matrix.is_symmetric(0.0));
    }

    #[test]
    fn cap_convergence() {
        // Five bosons: raising the cap from 4 to 5 only admits quintuply
        // occupied sites, which strong repulsion suppresses.
        let p = BhParams::new(8, 5, 100.0, end_probe_fields(8, 6.0).unwrap()).unwrap();
        assert_eq!(p.occupancy_cap, 4);
        let e_cap = bh_ground_state(&p).unwrap().energy;
        let e_full = bh_ground_state(&p.clone().with_cap(5).unwrap()).unwrap().energy;
        assert!((e_cap - e_full).abs() < 1e-8);
        assert!(e_cap >= e_full - 1e-12);
        assert!(p.with_cap(3).is_err());
    }

    #[test]
    fn effective_chains() {
        let p = superlattice_params(12, 10.0, 100.0).unwrap();
        let eff = effective_spin_couplings(&p).unwrap();
        assert_eq!(eff.spin_sites.len(), 8);
        let bonds = build_couplings(&eff.pattern, 8).unwrap();
        let alt = build_couplings(&CouplingPattern::alternating(0.1).with_scale(2.0), 8).unwrap();
        for (a, b) in bonds.iter().zip(alt.iter()) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(eff.warnings.is_empty());

        let p = end_probe_params(10, 12.0, 100.0).unwrap();
        let eff = effective_spin_couplings(&p).unwrap();
        let bonds = build_couplings(&eff.pattern, 8).unwrap();
        let probe = build_couplings(&CouplingPattern::end_probe(1.0 / 12.0).with_scale(2.0), 8).unwrap();
        for (a, b) in bonds.iter().zip(probe.iter()) {
            assert!((a - b).abs() < 1e-15);
        }

        let p = superlattice_params(12, 1.0, 100.0).unwrap();
        let eff = effective_spin_couplings(&p).unwrap();
        assert!(!eff.warnings.is_empty());
        match eff.pattern.kind {
            PatternKind::Custom { ref ratios } => assert!(ratios.iter().all(|&r| r == 1.0)),
            _ => unreachable!(),
        }
    }

    #[test]
    fn weak_interaction_has_no_end_concurrence() {
        let p = end_probe_params(8, 8.0, 0.5).unwrap();
        let e = end_site_entanglement(&p).unwrap();
        assert!(e.effective_concurrence < 0.05);
        assert!(e.log_negativity >= 0.0);
    }
}
