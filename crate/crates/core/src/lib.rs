//! Fourier-spectral Galerkin discretization of the periodic fractional
//! Korteweg-de Vries equation
//!
//! ```text
//! u_t + λ u u_x − ε² D^α u_x = 0,   x ∈ [−L, L),   D^α ↔ |κ|^α
//! ```
//!
//! with Crank-Nicolson time stepping, the three classical invariants,
//! analytic and asymptotic reference solutions (solitons, Hopf
//! characteristics, elliptic/theta-function zero-dispersion asymptotics),
//! and the convergence and zero-dispersion experiment drivers built on top.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod experiments;
pub mod invariants;
pub mod reference;
pub mod solver;
pub mod spectral;

pub use invariants::{energy, mass, momentum, InvariantReport};
pub use solver::{ModelParams, SolverConfig, Trajectory};
pub use spectral::{PeriodicGrid, SobolevExponent, SpectralField};

/// Complex scalar used for every Fourier coefficient.
pub type Complex = num_complex::Complex64;
