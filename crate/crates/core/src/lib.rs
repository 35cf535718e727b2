//! Long-distance entanglement in open XX spin chains.
//!
//! The crate is organised around the free-fermion image of the XX chain:
//!
//! * [`chain`] builds bond profiles (alternating, hybrid, end-probe, λ–μ and
//!   custom patterns, optionally with multiplicative disorder) and the
//!   one-body adjacency matrix.
//! * [`fermion`] diagonalizes that matrix and evaluates the end-to-end
//!   correlator and the many-body gap.
//! * [`metrics`] turns correlators and density matrices into concurrence,
//!   fidelity and logarithmic negativity.
//! * [`oracle`] is an independent sector-blocked exact diagonalization of the
//!   spin Hamiltonian used to validate the free-fermion path.
//! * [`bose`] handles the Bose-Hubbard realizations, [`cavity`] the
//!   Jaynes-Cummings polariton physics and [`teleport`] the measurement based
//!   teleportation protocol and thermal fidelity maps.
//!
//! Energies are in units of the reference coupling `J` (or `J_b` for cavity
//! arrays) and temperatures in units of `J / k_B`.

pub mod bose;
pub mod cavity;
pub mod chain;
pub mod error;
pub mod fermion;
pub mod linalg;
pub mod metrics;
pub mod oracle;
pub mod sweep;
pub mod teleport;
pub mod units;

pub use chain::{build_adjacency, build_couplings, CouplingPattern, DisorderSpec, PatternKind};
pub use error::{Error, Result};
pub use fermion::{diagonalize, end_correlator, many_body_gap, SingleParticleSpectrum};
pub use metrics::EndToEndReport;
