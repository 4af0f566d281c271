//! Closed-form and asymptotic reference solutions.
//!
//! * travelling waves: the KdV sech² soliton and the periodic Benjamin-Ono wave;
//! * the dispersionless (Hopf) limit `u_t + λ u u_x = 0`, solved along
//!   characteristics up to the first gradient catastrophe;
//! * the pieces of the genus-one zero-dispersion asymptotics: complete elliptic
//!   integrals, the theta function μ, the weak limit ũ, the oscillatory
//!   correction and the phase integral q.

mod beta;
mod elliptic;
mod hopf;
mod quadrature;
mod soliton;

pub use beta::{BetaProfile, BetaTriple};
pub use elliptic::{
    elliptic_asymptotic_u, elliptic_asymptotic_u_with_step, elliptic_ke, jacobi_theta3, weak_limit, EllipticData,
};
pub use hopf::{break_point, hopf_solution, BreakPoint, HopfSolver};
pub use quadrature::{gauss_legendre, q_phase, q_phase_with_nodes, Q_PHASE_NODES};
pub use soliton::{bo_soliton, kdv_one_soliton, BoSoliton, KDV_SOLITON_AMPLITUDE, KDV_SOLITON_SPEED, KDV_SOLITON_WIDTH};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReferenceError {
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },
    #[error("initial datum has no negative slope on [{a}, {b}]: characteristics never cross")]
    NoBreaking { a: f64, b: f64 },
    #[error("Hopf solution is multivalued at t = {t}: break time is t_c = {t_c:.12}")]
    Multivalued { t: f64, t_c: f64 },
    #[error("characteristic root finding failed at x = {x} (residual {residual:.3e})")]
    RootFind { x: f64, residual: f64 },
    #[error("theta series diverges for Im(tau) = {tau_im}")]
    DivergentSeries { tau_im: f64 },
    #[error("f₋ is not finite at A = {a}")]
    Domain { a: f64 },
    #[error("β-profile: {0}")]
    Profile(String),
}

/// Five-point centred first derivative.
pub(crate) fn derivative5(f: &impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}
