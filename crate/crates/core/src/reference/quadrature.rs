use std::f64::consts::{PI, SQRT_2};

use super::{BetaTriple, ReferenceError};

pub const Q_PHASE_NODES: usize = 64;

/// Gauss-Legendre nodes and weights on `[−1, 1]`, by Newton iteration on
/// `P_n` from the Chebyshev initial guesses.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                (p0, p1) = (p1, ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf);
            }
            let p = if n == 0 { 1.0 } else if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * p - pm) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Phase of the genus-one asymptotics,
///
/// ```text
/// q = 1/(2√2 π) ∫∫ f₋(A) / (√(1−θ) √(1−γ²)) dθ dγ,
/// A = (1+θ)/2 · ((1+γ)/2 β₁ + (1−γ)/2 β₂) + (1−θ)/2 · β₃,
/// ```
///
/// with Gauss-Chebyshev in γ and, after `θ = 1 − 2v²`, Gauss-Legendre in `v ∈ [0, 1]`.
pub fn q_phase(beta: &BetaTriple, f_minus: impl Fn(f64) -> f64) -> Result<f64, ReferenceError> {
    q_phase_with_nodes(beta, f_minus, Q_PHASE_NODES)
}

pub fn q_phase_with_nodes(beta: &BetaTriple, f_minus: impl Fn(f64) -> f64, nodes: usize) -> Result<f64, ReferenceError> {
    if nodes == 0 {
        return Err(ReferenceError::Parameter { name: "nodes", reason: "need at least one node".into() });
    }
    let (v, w) = gauss_legendre(nodes);
    let mut total = 0.0;
    for (vi, wi) in v.iter().zip(&w) {
        // Map [−1, 1] to [0, 1].
        let vv = 0.5 * (vi + 1.0);
        let theta = 1.0 - 2.0 * vv * vv;
        let mut inner = 0.0;
        for j in 0..nodes {
            let gamma = (PI * (2 * j + 1) as f64 / (2 * nodes) as f64).cos();
            let a = 0.5 * (1.0 + theta) * (0.5 * (1.0 + gamma) * beta.beta1 + 0.5 * (1.0 - gamma) * beta.beta2)
                + 0.5 * (1.0 - theta) * beta.beta3;
            let f = f_minus(a);
            if !f.is_finite() {
                return Err(ReferenceError::Domain { a });
            }
            inner += f;
        }
        total += 0.5 * wi * inner * PI / nodes as f64;
    }
    // dθ/√(1−θ) = 2√2 dv.
    Ok(total * 2.0 * SQRT_2 / (2.0 * SQRT_2 * PI))
}
