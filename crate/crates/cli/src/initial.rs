//! Named initial data, written as `name` or `name(arg, ...)`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use fkdv_core::reference::{kdv_one_soliton, BoSoliton};
use fkdv_core::spectral::{analyze_samples, project, PeriodicGrid, SpectralField};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum InitialDatum {
    /// `−sech² x`.
    Sech2,
    /// `a sin(kπx/L)`.
    Sine { a: f64, k: u32 },
    /// The amplitude-9 KdV soliton centred at 0.
    KdvSoliton,
    /// Periodic Benjamin-Ono wave of speed `c`; `half_length` must match the domain when given.
    BoSoliton { c: f64, half_length: Option<f64> },
    /// Uniform samples on `[−L, L)` from a CSV file with a `u` column.
    SamplesFile(PathBuf),
}

pub const NAMES: &str = "sech2, sine(a,k), kdv-soliton, bo-soliton(c[,L]), samples-file(path)";

impl FromStr for InitialDatum {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (name, args) = match s.find('(') {
            Some(i) => {
                let rest = s[i + 1..].strip_suffix(')').ok_or_else(|| format!("`{s}`: missing closing parenthesis"))?;
                (s[..i].trim(), rest.split(',').map(str::trim).filter(|a| !a.is_empty()).collect::<Vec<_>>())
            }
            None => (s, Vec::new()),
        };
        let num = |i: usize, what: &str| -> Result<f64, String> {
            args.get(i)
                .ok_or_else(|| format!("`{s}`: missing {what}"))?
                .parse::<f64>()
                .map_err(|e| format!("`{s}`: {what}: {e}"))
        };
        let arity = |lo: usize, hi: usize| -> Result<(), String> {
            if args.len() < lo || args.len() > hi {
                Err(format!("`{name}` takes {lo}..={hi} arguments, got {}", args.len()))
            } else {
                Ok(())
            }
        };
        match name {
            "sech2" => arity(0, 0).map(|_| InitialDatum::Sech2),
            "sine" => {
                arity(0, 2)?;
                let a = if args.is_empty() { 0.5 } else { num(0, "amplitude")? };
                let k = match args.get(1) {
                    Some(k) => k.parse::<u32>().map_err(|_| format!("`{s}`: wavenumber must be a positive integer"))?,
                    None => 1,
                };
                Ok(InitialDatum::Sine { a, k })
            }
            "kdv-soliton" => arity(0, 0).map(|_| InitialDatum::KdvSoliton),
            "bo-soliton" => {
                arity(0, 2)?;
                let c = if args.is_empty() { 0.25 } else { num(0, "speed")? };
                let half_length = if args.len() == 2 { Some(num(1, "half-length")?) } else { None };
                Ok(InitialDatum::BoSoliton { c, half_length })
            }
            "samples-file" => {
                arity(1, 1)?;
                Ok(InitialDatum::SamplesFile(PathBuf::from(args[0])))
            }
            _ => Err(format!("unknown initial datum `{name}` (expected one of {NAMES})")),
        }
    }
}

impl fmt::Display for InitialDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialDatum::Sech2 => write!(f, "sech2"),
            InitialDatum::Sine { a, k } => write!(f, "sine({a:?}, {k})"),
            InitialDatum::KdvSoliton => write!(f, "kdv-soliton"),
            InitialDatum::BoSoliton { c, half_length: None } => write!(f, "bo-soliton({c:?})"),
            InitialDatum::BoSoliton { c, half_length: Some(l) } => write!(f, "bo-soliton({c:?}, {l:?})"),
            InitialDatum::SamplesFile(p) => write!(f, "samples-file({})", p.display()),
        }
    }
}

/// A datum ready to be sampled on a domain `[−L, L)`.
pub enum Profile {
    Function(Box<dyn Fn(f64) -> f64 + Sync + Send>),
    Samples(Vec<f64>),
}

impl InitialDatum {
    /// Range and domain checks that need the domain half-length.
    pub fn issues(&self, half_length: f64) -> Vec<String> {
        let mut out = Vec::new();
        match self {
            InitialDatum::Sine { a, k } => {
                if !a.is_finite() {
                    out.push(format!("initial: amplitude must be finite, got {a}"));
                }
                if *k == 0 {
                    out.push("initial: sine wavenumber must be at least 1".into());
                }
            }
            InitialDatum::BoSoliton { c, half_length: l } => {
                if let Some(l) = l {
                    if *l != half_length {
                        out.push(format!("initial: bo-soliton half-length {l} differs from the domain half-length {half_length}"));
                    }
                }
                if let Err(e) = BoSoliton::new(*c, half_length) {
                    out.push(format!("initial: {e}"));
                }
            }
            InitialDatum::SamplesFile(p) => {
                if !p.is_file() {
                    out.push(format!("initial: samples file {} does not exist", p.display()));
                }
            }
            InitialDatum::Sech2 | InitialDatum::KdvSoliton => {}
        }
        out
    }

    pub fn profile(&self, half_length: f64) -> Result<Profile, CliError> {
        Ok(match *self {
            InitialDatum::Sech2 => Profile::Function(Box::new(|x: f64| -x.cosh().powi(-2))),
            InitialDatum::Sine { a, k } => {
                let w = k as f64 * std::f64::consts::PI / half_length;
                Profile::Function(Box::new(move |x: f64| a * (w * x).sin()))
            }
            InitialDatum::KdvSoliton => Profile::Function(Box::new(|x: f64| kdv_one_soliton(x, 0.0))),
            InitialDatum::BoSoliton { c, .. } => {
                let wave = BoSoliton::new(c, half_length).map_err(|e| CliError::config(format!("initial: {e}")))?;
                Profile::Function(Box::new(move |x: f64| wave.eval(x, 0.0)))
            }
            InitialDatum::SamplesFile(ref p) => Profile::Samples(read_samples(p)?),
        })
    }

    /// `P_N u₀` on `[−L, L)`.
    pub fn project(&self, n_modes: usize, half_length: f64) -> Result<SpectralField, CliError> {
        let grid = PeriodicGrid::new(n_modes, half_length).map_err(|e| CliError::config(format!("grid: {e}")))?;
        match self.profile(half_length)? {
            Profile::Function(f) => Ok(project(f, &grid)),
            Profile::Samples(s) => {
                let u = analyze_samples(&s, half_length, n_modes).map_err(|e| CliError::config(format!("initial: {e}")))?;
                Ok(SpectralField::from_fn(grid, |k| u.coeff(k)))
            }
        }
    }

    /// Pointwise evaluator; sampled data is evaluated through its interpolant.
    pub fn evaluator(&self, n_modes: usize, half_length: f64) -> Result<Box<dyn Fn(f64) -> f64 + Sync + Send>, CliError> {
        match self.profile(half_length)? {
            Profile::Function(f) => Ok(f),
            Profile::Samples(_) => {
                let u = self.project(n_modes, half_length)?;
                Ok(Box::new(move |x| u.evaluate(x)))
            }
        }
    }
}

fn read_samples(path: &Path) -> Result<Vec<f64>, CliError> {
    let bad = |msg: String| CliError::config(format!("initial: samples file {}: {msg}", path.display()));
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(|e| bad(e.to_string()))?;
    let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let col = headers.iter().position(|h| h == "u").ok_or_else(|| bad("needs a `u` column".into()))?;
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let v: f64 = rec.get(col).unwrap_or("").parse().map_err(|_| bad(format!("row {}: not a number", i + 2)))?;
        if !v.is_finite() {
            return Err(bad(format!("row {}: non-finite value", i + 2)));
        }
        out.push(v);
    }
    if out.is_empty() {
        return Err(bad("no samples".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["sech2", "sine(0.5, 1)", "sine(2.0, 3)", "kdv-soliton", "bo-soliton(0.25)", "bo-soliton(0.25, 15.0)", "samples-file(u0.csv)"] {
            let d: InitialDatum = s.parse().unwrap();
            assert_eq!(d.to_string().parse::<InitialDatum>().unwrap(), d, "{s}");
        }
        assert_eq!("sine".parse::<InitialDatum>().unwrap(), InitialDatum::Sine { a: 0.5, k: 1 });
    }

    #[test]
    fn rejects_malformed_names() {
        for s in ["gauss", "sine(1, 0.5)", "sine(1", "sech2(1)", "samples-file()"] {
            assert!(s.parse::<InitialDatum>().is_err(), "{s}");
        }
    }

    #[test]
    fn bo_soliton_range_checked() {
        let d: InitialDatum = "bo-soliton(0.1)".parse().unwrap();
        assert!(!d.issues(15.0).is_empty());
        assert!("bo-soliton(0.25)".parse::<InitialDatum>().unwrap().issues(15.0).is_empty());
        assert!(!"bo-soliton(0.25, 10)".parse::<InitialDatum>().unwrap().issues(15.0).is_empty());
    }
}
