use super::{semi_discrete_rhs, ModelParams, SolverError};
use crate::spectral::SpectralField;

/// Bound on `ε² κ_max^{1+α} |Δt|` accepted by [`rk4_step`]; the RK4
/// stability interval on the imaginary axis is `|z| ≤ 2√2 ≈ 2.83`.
pub const RK4_STABILITY_LIMIT: f64 = 2.8;

/// Classical four-stage Runge-Kutta step of the semi-discrete system.
pub fn rk4_step(u: &SpectralField, p: &ModelParams, dt: f64) -> Result<SpectralField, SolverError> {
    let kmax = u.grid().max_wavenumber();
    let stiffness = p.dispersion(kmax).abs() * dt.abs();
    if stiffness > RK4_STABILITY_LIMIT {
        return Err(SolverError::StepSize {
            dt,
            limit: RK4_STABILITY_LIMIT / p.dispersion(kmax).abs(),
            kind: "RK4 stability",
        });
    }
    let k1 = semi_discrete_rhs(u, p);
    let k2 = semi_discrete_rhs(&(u + &(&k1 * (0.5 * dt))), p);
    let k3 = semi_discrete_rhs(&(u + &(&k2 * (0.5 * dt))), p);
    let k4 = semi_discrete_rhs(&(u + &(&k3 * dt)), p);
    let incr = &(&(&k1 + &k4) + &(&(&k2 + &k3) * 2.0)) * (dt / 6.0);
    let mut next = u + &incr;
    next.symmetrize();
    Ok(next)
}

/// Integrates to `t_final` with steps of at most `dt`; the final step is
/// shortened to land on `t_final`.
pub fn rk4_integrate(
    u0: &SpectralField,
    p: &ModelParams,
    dt: f64,
    t_final: f64,
) -> Result<SpectralField, SolverError> {
    let steps = super::run::step_sizes(dt, t_final);
    let mut u = u0.clone();
    for h in steps {
        u = rk4_step(&u, p, h)?;
    }
    Ok(u)
}
