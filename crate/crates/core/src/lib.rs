//! Probability (tomographic) representation of the forced parametric
//! oscillator.
//!
//! A quantum state is described by its marginal distribution function
//! (MDF) `w(X, mu, nu)`, the probability density of the quadrature
//! `X = mu q + nu p` over the family of phase-space frames `(mu, nu)`.
//! For the Hamiltonian `H = p^2/2 + omega^2(t) q^2/2 - f(t) q` everything
//! is built from one complex classical trajectory `eps(t)` and the drive
//! shift `beta(t)`:
//!
//! * [`dynamics`]: `eps`, `beta`, drive profiles, Hermite polynomials.
//! * [`invariants`]: the linear integral of motion `I = Lambda Q + Delta`
//!   and the ladder invariants `A`, `A^dagger`.
//! * [`propagators`]: the classical propagator as an affine pullback on
//!   `(X, mu, nu)`, Green's functions and density-matrix propagators.
//! * [`states`]: closed-form coherent and Fock MDFs.
//! * [`transforms`]: density matrix <-> MDF and Wigner -> MDF.
//! * [`figures`] and [`acceptance`]: the figure generator and the
//!   numerical self-checks used by the `tomoprop` binary.
//!
//! Units are dimensionless with `hbar = m = 1`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod dynamics;
mod error;
pub mod figures;
pub mod invariants;
pub mod propagators;
pub mod quad;
pub mod states;
pub mod transforms;

pub use dynamics::{
    beta_shift, hermite, parametric_resonance_epsilon, solve_epsilon, DriveProfile,
    EpsilonSource, EpsilonTrajectory, Mode, ModeSolver, ProfileKind,
};
pub use error::{Error, Result};
pub use invariants::{LadderInvariant, LinearInvariant};
pub use propagators::{ClassicalPropagator, FramePoint};
pub use states::FrameKernel;

pub use num_complex::Complex64 as C64;
