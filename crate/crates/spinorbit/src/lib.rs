//! Numerical toolkit for spin-orbit states of neutron wavepackets.
//!
//! A neutron wavepacket with transverse coherence length σ⊥ is expanded in
//! spin-tagged Laguerre-Gauss modes |n_r, ℓ, s⟩. Two optical elements act on
//! that expansion:
//!
//! * a **spiral phase plate** ([`spp`]) imprints the azimuthal phase e^{iqφ},
//!   shifting (integer q) or spreading (fractional q) the orbital quantum
//!   number ℓ, and
//! * a **quadrupole magnet** ([`quadrupole`]) entangles spin with orbital
//!   angular momentum through the unitary
//!   cos(πr/2r_c)·𝟙 + i·sin(πr/2r_c)(l₊σ̂₊ + l₋σ̂₋),
//!   parametrized by the spin-flip radius r_c.
//!
//! The [`entanglement`] module quantifies the resulting spin-orbit
//! correlations (pure-state and Wootters mixed-state concurrence, radial
//! filtering, radial tracing), and [`ramsey`] models the two-quadrupole
//! Ramsey-fringe experiment that verifies the entangling action. [`cli`]
//! exposes everything as reproducible CSV sweeps plus a self-check suite.
//!
//! All radial integrals are evaluated in the dimensionless variable ξ = r/σ⊥
//! with the quadrature rules from [`specfun`]; σ⊥ itself enters observables
//! only through the ratio r_c/σ⊥.

pub mod basis;
pub mod cli;
pub mod entanglement;
pub mod quadrupole;
pub mod ramsey;
pub mod specfun;
pub mod spp;

/// Unified error type for the whole crate.
#[derive(Debug, thiserror::Error)]
pub enum SpinOrbitError {
    /// A parameter violated a documented precondition (caps, signs, domains).
    #[error("parameter error: {0}")]
    Parameter(String),
    /// A numerical guarantee could not be met (non-convergence, residuals).
    #[error("numerical error: {0}")]
    Numerical(String),
    /// Configuration file or value could not be parsed.
    #[error("config error: {0}")]
    Config(String),
    /// Underlying I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SpinOrbitError>;

impl SpinOrbitError {
    /// Process exit code bucket for the CLI contract:
    /// 1 usage/parameter/config, 2 numerical, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            SpinOrbitError::Parameter(_) | SpinOrbitError::Config(_) => 1,
            SpinOrbitError::Numerical(_) => 2,
            SpinOrbitError::Io(_) => 3,
        }
    }
}
