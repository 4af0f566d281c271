use std::io::Write;

use super::{ConvergenceRow, EpsSweepRow, ExperimentError};

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(format_f64).unwrap_or_default()
}

fn csv_error(e: csv::Error) -> ExperimentError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => ExperimentError::Io(io),
        other => ExperimentError::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

/// Columns `N, E, R, I1, I2, I3`; failed rows leave the numeric cells empty.
pub fn write_convergence_csv(rows: &[ConvergenceRow], out: impl Write) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["N", "E", "R", "I1", "I2", "I3"]).map_err(csv_error)?;
    for r in rows {
        let inv = r.invariants.map(|v| v.map(Some)).unwrap_or([None; 3]);
        w.write_record([r.n_modes.to_string(), opt(r.error), opt(r.rate), opt(inv[0]), opt(inv[1]), opt(inv[2])])
            .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Columns `eps, E, t, reference_kind`.
pub fn write_sweep_csv(rows: &[EpsSweepRow], out: impl Write) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["eps", "E", "t", "reference_kind"]).map_err(csv_error)?;
    for r in rows {
        w.write_record([format_f64(r.eps), format_f64(r.sup_error), format_f64(r.t_eval), r.reference_kind.to_string()])
            .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_precision_round_trip() {
        for v in [0.1, 1.0 / 3.0, 2.5e-300, -7.0e12] {
            assert_eq!(format_f64(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn convergence_csv_layout() {
        let rows = vec![
            ConvergenceRow { n_modes: 8, dt: 0.1, error: Some(0.5), rate: None, invariants: Some([1.0; 3]), failure: None },
            ConvergenceRow { n_modes: 16, dt: 0.05, error: None, rate: None, invariants: None, failure: Some("x".into()) },
        ];
        let mut buf = Vec::new();
        write_convergence_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "N,E,R,I1,I2,I3");
        assert!(lines[1].starts_with("8,5.0000000000000000e-1,,"));
        assert_eq!(lines[2], "16,,,,,");
    }
}
