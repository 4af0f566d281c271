use std::f64::consts::PI;

use super::ReferenceError;

pub const KDV_SOLITON_AMPLITUDE: f64 = 9.0;
pub const KDV_SOLITON_SPEED: f64 = 3.0;
/// `√(c/4)` for `c = 3`; the value a sech² wave of amplitude `3c` needs to
/// solve `u_t + u u_x + u_xxx = 0`.
pub const KDV_SOLITON_WIDTH: f64 = 0.866_025_403_784_438_6;

/// `9 sech²(√3/2 (x − 3t))`, the one-soliton of `u_t + u u_x + u_xxx = 0`.
pub fn kdv_one_soliton(x: f64, t: f64) -> f64 {
    let s = (KDV_SOLITON_WIDTH * (x - KDV_SOLITON_SPEED * t)).cosh().recip();
    KDV_SOLITON_AMPLITUDE * s * s
}

/// Periodic travelling wave of the Benjamin-Ono equation
/// `u_t + u u_x − H u_xx = 0` on `[−L, L)`:
///
/// ```text
/// u(x,t) = 2cδ² / (1 − √(1−δ²) cos(cδ(x − ct))),   δ = π/(cL).
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoSoliton {
    pub c: f64,
    pub half_length: f64,
    delta: f64,
}

impl BoSoliton {
    pub fn new(c: f64, half_length: f64) -> Result<Self, ReferenceError> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(ReferenceError::Parameter { name: "c", reason: format!("speed must be positive, got {c}") });
        }
        if !(half_length > 0.0 && half_length.is_finite()) {
            return Err(ReferenceError::Parameter {
                name: "half_length",
                reason: format!("must be positive, got {half_length}"),
            });
        }
        let delta = PI / (c * half_length);
        if delta > 1.0 {
            return Err(ReferenceError::Parameter {
                name: "c",
                reason: format!("c·L = {} < π gives δ = {delta} > 1", c * half_length),
            });
        }
        Ok(Self { c, half_length, delta })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn eval(&self, x: f64, t: f64) -> f64 {
        let cd = self.c * self.delta;
        let a = (1.0 - self.delta * self.delta).sqrt();
        2.0 * cd * self.delta / (1.0 - a * (cd * (x - self.c * t)).cos())
    }

    /// Crest value `2cδ²/(1 − √(1−δ²))`.
    pub fn peak(&self) -> f64 {
        self.eval(0.0, 0.0)
    }

    /// Spatial mean, `2cδ`.
    pub fn mean(&self) -> f64 {
        2.0 * self.c * self.delta
    }
}

pub fn bo_soliton(x: f64, t: f64, c: f64, half_length: f64) -> Result<f64, ReferenceError> {
    Ok(BoSoliton::new(c, half_length)?.eval(x, t))
}
