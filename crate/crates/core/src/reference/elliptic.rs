use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{BetaTriple, ReferenceError};
use crate::Complex;

const AGM_TOL: f64 = 1e-15;
const THETA_TERM_TOL: f64 = 1e-16;

/// Complete elliptic integrals at modulus `s` and the nome parameter
/// `𝒯 = iK′(s)/K(s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticData {
    pub s: f64,
    pub k: f64,
    pub e: f64,
    /// Purely imaginary; `Im 𝒯 = ∞` at `s = 0`.
    pub tau: Complex,
}

/// Arithmetic-geometric mean of `(1, b)` together with
/// `Σ 2^{n−1} c_n²` where `c_0² = 1 − b²`.
fn agm(b: f64) -> (f64, f64) {
    let (mut a, mut b) = (1.0f64, b);
    let mut sum = 0.5 * (1.0 - b * b);
    let mut pow = 0.5;
    for _ in 0..64 {
        if (a - b).abs() <= AGM_TOL * a {
            break;
        }
        let c = 0.5 * (a - b);
        (a, b) = (0.5 * (a + b), (a * b).sqrt());
        pow *= 2.0;
        sum += pow * c * c;
    }
    (a, sum)
}

/// `K(s)`, `E(s)` by the AGM; `K′(s) = π/(2·AGM(1, s))`.
pub fn elliptic_ke(s: f64) -> Result<EllipticData, ReferenceError> {
    if !(0.0..1.0).contains(&s) {
        return Err(ReferenceError::Parameter { name: "s", reason: format!("modulus must lie in [0, 1), got {s}") });
    }
    let (a, sum) = agm((1.0 - s * s).sqrt());
    let k = PI / (2.0 * a);
    let e = k * (1.0 - sum);
    let tau_im = if s == 0.0 {
        f64::INFINITY
    } else {
        let (a1, _) = agm(s);
        PI / (2.0 * a1) / k
    };
    Ok(EllipticData { s, k, e, tau: Complex::new(0.0, tau_im) })
}

/// `μ(ξ; 𝒯) = Σ_n exp(πi n² 𝒯 + 2πi n ξ)` for purely imaginary `𝒯`,
/// i.e. `1 + 2 Σ_{n≥1} e^{−π n² Im𝒯} cos(2πnξ)`.
pub fn jacobi_theta3(xi: f64, tau: Complex) -> Result<f64, ReferenceError> {
    let b = tau.im;
    if !(b > 0.0) {
        return Err(ReferenceError::DivergentSeries { tau_im: b });
    }
    if tau.re != 0.0 {
        return Err(ReferenceError::Parameter {
            name: "tau",
            reason: format!("must be purely imaginary, got real part {}", tau.re),
        });
    }
    let mut sum = 1.0;
    let mut n = 1.0f64;
    loop {
        let w = (-PI * n * n * b).exp();
        if w < THETA_TERM_TOL {
            break;
        }
        sum += 2.0 * w * (2.0 * PI * n * xi).cos();
        n += 1.0;
    }
    Ok(sum)
}

/// `μ(θ)`, `μ(θ+δ) − μ(θ)` and `μ(θ−δ) − μ(θ)`, with the differences summed
/// term by term as `cos a − cos b = −2 sin((a+b)/2) sin((a−b)/2)`.
fn theta3_increments(theta: f64, delta: f64, b: f64) -> (f64, f64, f64) {
    let (mut mu, mut up, mut down) = (1.0, 0.0, 0.0);
    let mut n = 1.0f64;
    loop {
        let w = (-PI * n * n * b).exp();
        if w < THETA_TERM_TOL {
            break;
        }
        let s = (PI * n * delta).sin();
        mu += 2.0 * w * (2.0 * PI * n * theta).cos();
        up -= 4.0 * w * (PI * n * (2.0 * theta + delta)).sin() * s;
        down += 4.0 * w * (PI * n * (2.0 * theta - delta)).sin() * s;
        n += 1.0;
    }
    (mu, up, down)
}

/// Elliptic modulus `s² = (β₂ − β₃)/(β₁ − β₃)`; zero when all three merge.
fn modulus(beta: &BetaTriple) -> f64 {
    let span = beta.beta1 - beta.beta3;
    if span > 0.0 {
        ((beta.beta2 - beta.beta3) / span).clamp(0.0, 1.0).sqrt()
    } else {
        0.0
    }
}

/// `ũ = β₁ + β₂ + β₃ + 2β̄`, `β̄ = −β₁ + (β₁ − β₃)E(s)/K(s)`.
pub fn weak_limit(beta: &BetaTriple) -> Result<f64, ReferenceError> {
    let sum = beta.beta1 + beta.beta2 + beta.beta3;
    let s = modulus(beta);
    // E/K → 0 as s → 1.
    let ratio = if s >= 1.0 {
        0.0
    } else {
        let d = elliptic_ke(s)?;
        d.e / d.k
    };
    let bar = -beta.beta1 + (beta.beta1 - beta.beta3) * ratio;
    Ok(sum + 2.0 * bar)
}

/// `u ≈ ũ + 2ε² ∂²_x log μ(θ(x); 𝒯)` with
/// `θ(x) = √(β₁−β₃)/(2εK) · (x − 2t(β₁+β₂+β₃) − q)`, β frozen at its value at `x`.
/// The second derivative is a centred difference with step `ε·10⁻³`.
pub fn elliptic_asymptotic_u(x: f64, t: f64, eps: f64, beta: &BetaTriple, q: f64) -> Result<f64, ReferenceError> {
    elliptic_asymptotic_u_with_step(x, t, eps, beta, q, eps * 1e-3)
}

pub fn elliptic_asymptotic_u_with_step(
    x: f64,
    t: f64,
    eps: f64,
    beta: &BetaTriple,
    q: f64,
    h: f64,
) -> Result<f64, ReferenceError> {
    if !(eps > 0.0) {
        return Err(ReferenceError::Parameter { name: "eps", reason: format!("must be positive, got {eps}") });
    }
    if !(h > 0.0) {
        return Err(ReferenceError::Parameter { name: "h", reason: format!("must be positive, got {h}") });
    }
    if !(beta.beta1 > beta.beta2 && beta.beta2 >= beta.beta3) {
        return Err(ReferenceError::Parameter {
            name: "beta",
            reason: format!("need β₁ > β₂ ≥ β₃, got {beta:?}"),
        });
    }
    let u_bar = weak_limit(beta)?;
    let d = elliptic_ke(modulus(beta))?;
    if d.tau.im.is_infinite() {
        return Ok(u_bar);
    }
    let scale = (beta.beta1 - beta.beta3).sqrt() / (2.0 * eps * d.k);
    let shift = 2.0 * t * (beta.beta1 + beta.beta2 + beta.beta3) + q;
    let (mu, up, down) = theta3_increments(scale * (x - shift), scale * h, d.tau.im);
    // log μ(θ+δ) − 2 log μ(θ) + log μ(θ−δ), without cancellation.
    let second = ((up + down) / mu + up * down / (mu * mu)).ln_1p() / (h * h);
    Ok(u_bar + 2.0 * eps * eps * second)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limits() {
        let d = elliptic_ke(0.0).unwrap();
        assert!((d.k - PI / 2.0).abs() < 1e-15 && (d.e - PI / 2.0).abs() < 1e-15);
        assert!(d.tau.im.is_infinite());
        assert!((elliptic_ke(0.999999).unwrap().e - 1.0).abs() < 1e-3);
        assert!(elliptic_ke(1.0).is_err());
        assert!(elliptic_ke(-0.1).is_err());
    }

    #[test]
    fn tiny_modulus_has_large_finite_tau() {
        let d = elliptic_ke(1e-12).unwrap();
        assert!(d.tau.im.is_finite() && d.tau.im > 10.0);
    }

    #[test]
    fn theta_rejects_bad_tau() {
        assert!(jacobi_theta3(0.0, Complex::new(0.0, 0.0)).is_err());
        assert!(jacobi_theta3(0.0, Complex::new(0.1, 1.0)).is_err());
        assert_eq!(jacobi_theta3(0.3, Complex::new(0.0, f64::INFINITY)).unwrap(), 1.0);
    }

    #[test]
    fn weak_limit_degenerations() {
        let merged = BetaTriple::new(0.7, 0.7, 0.7).unwrap();
        assert!((weak_limit(&merged).unwrap() - 0.7).abs() < 1e-15);
        let b = BetaTriple::new(1.0, 0.2, 0.2).unwrap();
        assert!((weak_limit(&b).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn asymptotic_needs_strict_order() {
        let b = BetaTriple::new(1.0, 1.0, 0.0).unwrap();
        assert!(elliptic_asymptotic_u(0.0, 0.1, 0.01, &b, 0.0).is_err());
        let b = BetaTriple::new(1.0, 0.3, 0.0).unwrap();
        assert!(elliptic_asymptotic_u(0.0, 0.1, 0.0, &b, 0.0).is_err());
    }
}
