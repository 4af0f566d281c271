use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{elliptic_asymptotic_u, ReferenceError};

/// Whitham branch points `β₁ ≥ β₂ ≥ β₃` at one `(x, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaTriple {
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
}

impl BetaTriple {
    pub fn new(beta1: f64, beta2: f64, beta3: f64) -> Result<Self, ReferenceError> {
        if !(beta1.is_finite() && beta2.is_finite() && beta3.is_finite()) {
            return Err(ReferenceError::Parameter { name: "beta", reason: "values must be finite".into() });
        }
        if !(beta1 >= beta2 && beta2 >= beta3) {
            return Err(ReferenceError::Parameter {
                name: "beta",
                reason: format!("need β₁ ≥ β₂ ≥ β₃, got ({beta1}, {beta2}, {beta3})"),
            });
        }
        Ok(Self { beta1, beta2, beta3 })
    }

    fn lerp(&self, other: &Self, w: f64) -> Self {
        Self {
            beta1: self.beta1 + w * (other.beta1 - self.beta1),
            beta2: self.beta2 + w * (other.beta2 - self.beta2),
            beta3: self.beta3 + w * (other.beta3 - self.beta3),
        }
    }
}

#[derive(Debug, Deserialize)]
struct Row {
    x: f64,
    beta1: f64,
    beta2: f64,
    beta3: f64,
}

/// β sampled along a line at fixed `t`, read from CSV with header
/// `x,beta1,beta2,beta3` and strictly increasing `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaProfile {
    pub x: Vec<f64>,
    pub beta: Vec<BetaTriple>,
}

impl BetaProfile {
    pub fn new(x: Vec<f64>, beta: Vec<BetaTriple>) -> Result<Self, ReferenceError> {
        if x.len() != beta.len() || x.is_empty() {
            return Err(ReferenceError::Profile(format!(
                "need matching non-empty columns, got {} abscissae and {} triples",
                x.len(),
                beta.len()
            )));
        }
        if let Some(w) = x.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(ReferenceError::Profile(format!("x must increase strictly ({} then {})", w[0], w[1])));
        }
        Ok(Self { x, beta })
    }

    pub fn from_reader(reader: impl Read) -> Result<Self, ReferenceError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let (mut x, mut beta) = (Vec::new(), Vec::new());
        for (line, rec) in rdr.deserialize::<Row>().enumerate() {
            let r = rec.map_err(|e| ReferenceError::Profile(e.to_string()))?;
            let b = BetaTriple::new(r.beta1, r.beta2, r.beta3)
                .map_err(|e| ReferenceError::Profile(format!("row {}: {e}", line + 1)))?;
            x.push(r.x);
            beta.push(b);
        }
        Self::new(x, beta)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, ReferenceError> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| ReferenceError::Profile(format!("{}: {e}", path.display())))?;
        Self::from_reader(file)
    }

    pub fn window(&self) -> [f64; 2] {
        [self.x[0], self.x[self.x.len() - 1]]
    }

    /// Linear interpolation; `None` outside the sampled range.
    pub fn interpolate(&self, x: f64) -> Option<BetaTriple> {
        let [a, b] = self.window();
        if !(x >= a && x <= b) {
            return None;
        }
        let i = self.x.partition_point(|&xi| xi <= x);
        if i == 0 {
            return Some(self.beta[0]);
        }
        if i == self.x.len() {
            return Some(self.beta[i - 1]);
        }
        let w = (x - self.x[i - 1]) / (self.x[i] - self.x[i - 1]);
        Some(self.beta[i - 1].lerp(&self.beta[i], w))
    }

    /// Asymptotic solution at the sample abscissae.
    pub fn evaluate(&self, t: f64, eps: f64, q: f64) -> Result<Vec<f64>, ReferenceError> {
        self.x.iter().zip(&self.beta).map(|(&x, b)| elliptic_asymptotic_u(x, t, eps, b, q)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_enforced() {
        assert!(BetaTriple::new(0.0, 1.0, -1.0).is_err());
        assert!(BetaTriple::new(1.0, 1.0, 1.0).is_ok());
        assert!(BetaTriple::new(f64::NAN, 0.0, 0.0).is_err());
    }

    #[test]
    fn csv_round_trip_and_interpolation() {
        let text = "x,beta1,beta2,beta3\n0.0, 1.0, 0.5, 0.0\n1.0, 2.0, 1.5, 1.0\n";
        let p = BetaProfile::from_reader(text.as_bytes()).unwrap();
        assert_eq!(p.window(), [0.0, 1.0]);
        let m = p.interpolate(0.25).unwrap();
        assert!((m.beta1 - 1.25).abs() < 1e-15 && (m.beta3 - 0.25).abs() < 1e-15);
        assert_eq!(p.interpolate(1.0).unwrap(), p.beta[1]);
        assert!(p.interpolate(1.5).is_none());
    }

    #[test]
    fn malformed_profiles_rejected() {
        assert!(BetaProfile::from_reader("x,beta1,beta2,beta3\n0,0,1,2\n".as_bytes()).is_err());
        assert!(BetaProfile::from_reader("x,beta1,beta2,beta3\n1,1,0,0\n0,1,0,0\n".as_bytes()).is_err());
        assert!(BetaProfile::from_reader("x,b1\n1,1\n".as_bytes()).is_err());
        assert!(BetaProfile::from_reader("x,beta1,beta2,beta3\n".as_bytes()).is_err());
    }
}
