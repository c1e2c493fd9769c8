//! Entanglement measures of Gaussian and small discrete quantum states.
//!
//! The crate computes purity, linear entropy, and von Neumann entropy
//! of coupled-harmonic-oscillator networks along three mutually
//! verifying routes:
//!
//! * covariance matrices and their symplectic eigenvalues
//!   ([`gaussian`], [`oscillator`]),
//! * the reduced density matrix's geometric eigenvalue ladders
//!   ([`reduction`]),
//! * angle-averaged classical covariance analogs that reproduce the
//!   quantum results under the Bohr-Sommerfeld substitution I = ħ/2
//!   ([`classical`]).
//!
//! Finite-dimensional density matrices (spin-½, qubit pairs) live in
//! [`discrete`]; the Quantum Geometric Tensor, fidelity susceptibility,
//! and phase-space metric in [`qgt`].
//!
//! All numerics are generic over the scalar type via [`scalar::Real`]
//! (f32 or f64); the type aliases at the crate root fix f64 for
//! everyday use.

#![forbid(unsafe_code)]

pub mod classical;
pub mod discrete;
mod error;
pub mod gaussian;
pub mod oscillator;
pub mod qgt;
pub mod reduction;
pub mod scalar;

pub use error::{Error, Result};

/// f64 coupling matrix.
pub type CouplingMatrix = oscillator::CouplingMatrix<f64>;
/// f64 normal-mode decomposition.
pub type NormalModes = oscillator::NormalModes<f64>;
/// f64 ground-state specification.
pub type GroundStateSpec = oscillator::GroundStateSpec<f64>;
/// f64 covariance matrix.
pub type CovarianceMatrix = gaussian::CovarianceMatrix<f64>;
/// f64 mean vector.
pub type MeanVector = gaussian::MeanVector<f64>;
/// f64 physicality report.
pub type PhysicalityReport = gaussian::PhysicalityReport<f64>;
/// f64 block decomposition.
pub type BlockDecomposition = reduction::BlockDecomposition<f64>;
/// f64 mode spectrum.
pub type ModeSpectrum = reduction::ModeSpectrum<f64>;
/// f64 two-oscillator closed forms.
pub type TwoOscillatorClosedForms = reduction::TwoOscillatorClosedForms<f64>;
/// f64 state vector.
pub type StateVector = discrete::StateVector<f64>;
/// f64 density matrix.
pub type DensityMatrix = discrete::DensityMatrix<f64>;
/// f64 action assignment.
pub type ActionAssignment = classical::ActionAssignment<f64>;
/// f64 parametrized Hamiltonian family.
pub type ParametrizedHamiltonian = qgt::ParametrizedHamiltonian<f64>;
/// f64 quantum geometric tensor.
pub type GeometricTensor = qgt::GeometricTensor<f64>;
