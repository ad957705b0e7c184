//! Thermal properties of the resonant Tavis-Cummings model.
//!
//! The Hamiltonian splits into blocks labelled by total spin `j` and
//! excitation number `k`. Each block is a hollow symmetric tridiagonal
//! coupling matrix `L(j,k)` on top of a uniform energy `k·ω₀`, repeated
//! `d_j` times. Everything here works on that decomposition:
//!
//! - [`combinatorics`]: degeneracies, block geometry, the most degenerate `j`
//! - [`coupling`]: bond sequences and trace moments of `L(j,k)`
//! - [`spectra`]: exact block spectra (Sturm bisection / implicit QL)
//! - [`thermo`]: partition functions, energy shifts, thermal distributions
//! - [`regimes`]: Dicke cutoff temperature and related diagnostics
//! - [`observables`]: photon-number and `J_z` shifts, generic expectations
//! - [`robustness`]: eigenvalue-shift gates for block-preserving noise
//! - [`bench`]: runtime scaling harness
//! - [`cli`]: command-line surface and CSV/JSON export
//!
//! Half-integer spins are passed around as `twice_j` integers throughout.

pub mod bench;
pub mod cli;
pub mod combinatorics;
pub mod coupling;
mod error;
pub mod fit;
pub mod observables;
pub mod regimes;
pub mod robustness;
pub mod spectra;
pub mod summation;
pub mod thermo;
pub mod units;

pub use combinatorics::{EnsembleSize, SubspaceIndex};
pub use coupling::Block;
pub use error::{Error, Result};
pub use units::ModelParams;
