use serde::{Deserialize, Serialize};

use super::{derivative5, ReferenceError};

const SCAN_POINTS: usize = 100_000;
const GOLDEN_TOL: f64 = 1e-10;
const DERIVATIVE_STEP: f64 = 1e-3;
const RESIDUAL_TOL: f64 = 1e-12;

/// First gradient catastrophe of `u_t + λ u u_x = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BreakPoint {
    pub t_c: f64,
    pub x_c: f64,
    pub u_c: f64,
    /// Foot of the first crossing characteristic.
    pub xi: f64,
}

/// `t_c = 1/max(−λu₀′)` over `window`, with the argmax `ξ*` located by a
/// dense scan followed by golden-section refinement. `x_c = ξ* + λ t_c u₀(ξ*)`.
pub fn break_point(u0: impl Fn(f64) -> f64, lambda: f64, window: [f64; 2]) -> Result<BreakPoint, ReferenceError> {
    let [a, b] = window;
    if !(a < b && a.is_finite() && b.is_finite()) {
        return Err(ReferenceError::Parameter { name: "window", reason: format!("[{a}, {b}] is not a finite interval") });
    }
    let steep = |x: f64| -lambda * derivative5(&u0, x, DERIVATIVE_STEP);
    let h = (b - a) / SCAN_POINTS as f64;
    let (mut best_i, mut best, mut size) = (0, f64::NEG_INFINITY, 0.0f64);
    for i in 0..=SCAN_POINTS {
        let x = a + i as f64 * h;
        let v = steep(x);
        size = size.max(u0(x).abs());
        if v > best {
            best = v;
            best_i = i;
        }
    }
    // Rounding in the difference quotient is about ε|u₀|/h.
    if !(best > 1e-10 * lambda.abs() * size.max(1.0)) {
        return Err(ReferenceError::NoBreaking { a, b });
    }
    let lo = a + best_i.saturating_sub(1) as f64 * h;
    let hi = (a + (best_i + 1) as f64 * h).min(b);
    let xi = polish_argmax(&u0, golden_max(&steep, lo, hi));
    let s = steep(xi).max(best);
    let t_c = 1.0 / s;
    let u_c = u0(xi);
    Ok(BreakPoint { t_c, x_c: xi + lambda * t_c * u_c, u_c, xi })
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > GOLDEN_TOL {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Golden section only pins the argmax to about √ε; refine it as a root of
/// `u₀″` when that changes sign nearby.
fn polish_argmax(u0: &impl Fn(f64) -> f64, xi: f64) -> f64 {
    let h = DERIVATIVE_STEP;
    let second = |x: f64| {
        (-u0(x + 2.0 * h) + 16.0 * u0(x + h) - 30.0 * u0(x) + 16.0 * u0(x - h) - u0(x - 2.0 * h)) / (12.0 * h * h)
    };
    let delta = 1e-5;
    let (mut a, mut b) = (xi - delta, xi + delta);
    let (fa, fb) = (second(a), second(b));
    if !(fa * fb < 0.0) {
        return xi;
    }
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        if second(m) * fa > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Characteristic solution of `u_t + λ u u_x = 0` before breaking:
/// `u(x,t) = u₀(ξ)` with `ξ + λ t u₀(ξ) = x`.
pub struct HopfSolver<F> {
    u0: F,
    lambda: f64,
    t_c: f64,
}

impl<F: Fn(f64) -> f64> HopfSolver<F> {
    /// The break time is searched for on `window`; data that never steepens
    /// there gets `t_c = ∞`.
    pub fn new(u0: F, lambda: f64, window: [f64; 2]) -> Result<Self, ReferenceError> {
        let t_c = match break_point(&u0, lambda, window) {
            Ok(bp) => bp.t_c,
            Err(ReferenceError::NoBreaking { .. }) => f64::INFINITY,
            Err(e) => return Err(e),
        };
        Ok(Self { u0, lambda, t_c })
    }

    pub fn break_time(&self) -> f64 {
        self.t_c
    }

    pub fn check_time(&self, t: f64) -> Result<(), ReferenceError> {
        if !(t >= 0.0) {
            return Err(ReferenceError::Parameter { name: "t", reason: format!("must be non-negative, got {t}") });
        }
        if t >= self.t_c {
            return Err(ReferenceError::Multivalued { t, t_c: self.t_c });
        }
        Ok(())
    }

    /// Foot `ξ` of the characteristic through `(x, t)`.
    pub fn foot(&self, x: f64, t: f64) -> Result<f64, ReferenceError> {
        self.check_time(t)?;
        let lt = self.lambda * t;
        let g = |xi: f64| xi + lt * (self.u0)(xi) - x;
        let dg = |xi: f64| 1.0 + lt * derivative5(&self.u0, xi, DERIVATIVE_STEP);

        // g is increasing, so expand a bracket around x.
        let (mut a, mut b) = (x, x);
        let (mut ga, mut gb) = (g(a), g(b));
        if ga == 0.0 {
            return Ok(x);
        }
        let mut width = 1.0;
        let mut expansions = 0;
        while ga > 0.0 || gb < 0.0 {
            if ga > 0.0 {
                a -= width;
                ga = g(a);
            }
            if gb < 0.0 {
                b += width;
                gb = g(b);
            }
            width *= 2.0;
            expansions += 1;
            if expansions > 200 || !(ga.is_finite() && gb.is_finite()) {
                return Err(ReferenceError::RootFind { x, residual: g(x) });
            }
        }

        let mut xi = (x - lt * (self.u0)(x)).clamp(a, b);
        let mut r = g(xi);
        for _ in 0..200 {
            if r.abs() <= RESIDUAL_TOL {
                return Ok(xi);
            }
            if r < 0.0 {
                a = xi;
            } else {
                b = xi;
            }
            let d = dg(xi);
            let newton = xi - r / d;
            let next = if d > 0.0 && newton > a && newton < b { newton } else { 0.5 * (a + b) };
            let rn = g(next);
            // Fall back to bisection when Newton does not shrink the residual.
            let (next, rn) = if rn.abs() > 0.5 * r.abs() && next == newton {
                let m = 0.5 * (a + b);
                (m, g(m))
            } else {
                (next, rn)
            };
            if next == xi {
                break;
            }
            xi = next;
            r = rn;
        }
        if r.abs() <= RESIDUAL_TOL {
            Ok(xi)
        } else {
            Err(ReferenceError::RootFind { x, residual: r })
        }
    }

    pub fn solve(&self, x: f64, t: f64) -> Result<f64, ReferenceError> {
        Ok((self.u0)(self.foot(x, t)?))
    }
}

/// One-shot [`HopfSolver`] evaluation.
pub fn hopf_solution(
    u0: impl Fn(f64) -> f64,
    x: f64,
    t: f64,
    lambda: f64,
    window: [f64; 2],
) -> Result<f64, ReferenceError> {
    HopfSolver::new(u0, lambda, window)?.solve(x, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sech2(x: f64) -> f64 {
        -x.cosh().powi(-2)
    }

    #[test]
    fn sech2_break_point() {
        let bp = break_point(sech2, 6.0, [-6.0, 6.0]).unwrap();
        let s3 = 3f64.sqrt();
        assert!((bp.t_c - s3 / 8.0).abs() < 1e-8, "{bp:?}");
        assert!((bp.u_c + 2.0 / 3.0).abs() < 1e-8);
        let x_c = -s3 / 2.0 + ((s3 - 1.0) / 2f64.sqrt()).ln();
        assert!((bp.x_c - x_c).abs() < 1e-6);
    }

    #[test]
    fn constant_never_breaks() {
        assert!(matches!(break_point(|_| 0.3, 6.0, [-6.0, 6.0]), Err(ReferenceError::NoBreaking { .. })));
        let h = HopfSolver::new(|_| 0.3, 6.0, [-6.0, 6.0]).unwrap();
        assert!(h.break_time().is_infinite());
        assert_eq!(h.solve(1.0, 10.0).unwrap(), 0.3);
    }

    #[test]
    fn time_zero_is_identity() {
        let h = HopfSolver::new(sech2, 6.0, [-6.0, 6.0]).unwrap();
        for x in [-2.0, -0.4, 0.0, 1.3] {
            assert_eq!(h.solve(x, 0.0).unwrap(), sech2(x));
        }
    }

    #[test]
    fn past_break_is_rejected() {
        let h = HopfSolver::new(sech2, 6.0, [-6.0, 6.0]).unwrap();
        assert!(matches!(h.solve(0.0, 0.25), Err(ReferenceError::Multivalued { .. })));
        assert!(h.solve(0.0, -0.1).is_err());
    }

    #[test]
    fn residual_near_break() {
        let h = HopfSolver::new(sech2, 6.0, [-6.0, 6.0]).unwrap();
        let t = 0.2;
        for i in 0..1000 {
            let x = -6.0 + 12.0 * i as f64 / 999.0;
            let xi = h.foot(x, t).unwrap();
            assert!((x - 6.0 * t * sech2(xi) - xi).abs() <= 1e-12, "x = {x}");
        }
    }
}
