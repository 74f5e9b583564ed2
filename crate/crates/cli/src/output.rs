//! CSV and plot-data writers.
//!
//! Floats are written with 17 significant digits so parsing a file gives
//! back the exact in-memory values.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use duffing_core::analysis::EnergyLedger;
use duffing_core::{Sample, State, Trajectory};

use crate::error::CliError;

pub const TRAJECTORY_HEADER: &str =
    "t,x,y,E,modified_E,cumulative_dissipation,identity_residual,newton_iters";
pub const LEDGER_HEADER: &str = "t,E,modified_E,cumulative_dissipation,identity_residual";

/// 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_trajectory_csv<W: Write>(
    mut w: W,
    traj: &Trajectory,
    ledger: &EnergyLedger,
) -> io::Result<()> {
    writeln!(w, "{TRAJECTORY_HEADER}")?;
    for (s, row) in traj.samples.iter().zip(&ledger.rows) {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            fmt_f64(s.t),
            fmt_f64(s.state.x),
            fmt_f64(s.state.y),
            fmt_f64(row.energy),
            fmt_f64(row.modified_energy),
            fmt_f64(row.dissipation),
            fmt_f64(row.residual),
            s.newton_iters
        )?;
    }
    w.flush()
}

pub fn write_ledger_csv<W: Write>(mut w: W, ledger: &EnergyLedger) -> io::Result<()> {
    writeln!(w, "{LEDGER_HEADER}")?;
    for row in &ledger.rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_f64(row.t),
            fmt_f64(row.energy),
            fmt_f64(row.modified_energy),
            fmt_f64(row.dissipation),
            fmt_f64(row.residual)
        )?;
    }
    w.flush()
}

/// One parsed line of a trajectory CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRow {
    pub sample: Sample,
    pub energy: f64,
    pub modified_energy: f64,
    pub identity_residual: f64,
}

pub fn parse_trajectory_csv(text: &str) -> Result<Vec<TrajectoryRow>, CliError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(TRAJECTORY_HEADER) => {}
        other => {
            return Err(CliError::Csv {
                line: 1,
                reason: format!("unexpected header {other:?}"),
            })
        }
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let line_no = i + 2;
            let bad = |reason: String| CliError::Csv {
                line: line_no,
                reason,
            };
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 8 {
                return Err(bad(format!("expected 8 fields, found {}", fields.len())));
            }
            let num = |k: usize| {
                fields[k]
                    .parse::<f64>()
                    .map_err(|e| bad(format!("field {}: {e}", k + 1)))
            };
            Ok(TrajectoryRow {
                sample: Sample {
                    t: num(0)?,
                    state: State::new(num(1)?, num(2)?),
                    dissipation: num(5)?,
                    newton_iters: fields[7]
                        .parse()
                        .map_err(|e| bad(format!("field 8: {e}")))?,
                },
                energy: num(3)?,
                modified_energy: num(4)?,
                identity_residual: num(6)?,
            })
        })
        .collect()
}

pub fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

/// Whitespace-separated columns behind a `#` header line.
pub fn write_plot_data<W: Write>(
    mut w: W,
    columns: &[String],
    rows: impl Iterator<Item = Vec<f64>>,
) -> io::Result<()> {
    writeln!(w, "# {}", columns.join(" "))?;
    for row in rows {
        let line: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    w.flush()
}

/// Parse plot data written by [`write_plot_data`]: column names and rows.
pub fn parse_plot_data(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>), CliError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .and_then(|h| h.strip_prefix("# "))
        .ok_or_else(|| CliError::Csv {
            line: 1,
            reason: "missing '# ' header".into(),
        })?;
    let columns: Vec<String> = header.split_whitespace().map(String::from).collect();
    let rows = lines
        .enumerate()
        .map(|(i, line)| {
            line.split_whitespace()
                .map(|f| {
                    f.parse::<f64>().map_err(|e| CliError::Csv {
                        line: i + 2,
                        reason: e.to_string(),
                    })
                })
                .collect::<Result<Vec<f64>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((columns, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use duffing_core::analysis::build_ledger;
    use duffing_core::{integrate, DuffingParams, SchemeConfig};
    use proptest::prelude::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(2.0), "2.0000000000000000e0");
    }

    #[test]
    fn trajectory_csv_round_trip() {
        let params = DuffingParams::new(5, 0.3, 2.0).unwrap();
        let config = SchemeConfig::new(0.01, 3.0)
            .unwrap()
            .with_record_stride(7)
            .unwrap();
        let traj = integrate(&params, &config, State::new(1.1, -0.2)).unwrap();
        let ledger = build_ledger(&traj).unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &traj, &ledger).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(!text.contains('\r'));
        let rows = parse_trajectory_csv(&text).unwrap();
        assert_eq!(rows.len(), traj.samples.len());
        for ((row, sample), l) in rows.iter().zip(&traj.samples).zip(&ledger.rows) {
            assert_eq!(row.sample, *sample);
            assert_eq!(row.energy, l.energy);
            assert_eq!(row.modified_energy, l.modified_energy);
            assert_eq!(row.identity_residual, l.residual);
        }
    }

    #[test]
    fn malformed_csv() {
        assert!(parse_trajectory_csv("t,x\n").is_err());
        let bad = format!("{TRAJECTORY_HEADER}\n1,2,3\n");
        assert!(matches!(
            parse_trajectory_csv(&bad),
            Err(CliError::Csv { line: 2, .. })
        ));
    }

    #[test]
    fn plot_data_round_trip() {
        let mut buf = Vec::new();
        let cols = vec!["t".to_string(), "E".to_string()];
        write_plot_data(
            &mut buf,
            &cols,
            vec![vec![1.0, 0.5], vec![2.0, 0.25]].into_iter(),
        )
        .unwrap();
        let (c, rows) = parse_plot_data(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(c, cols);
        assert_eq!(rows, vec![vec![1.0, 0.5], vec![2.0, 0.25]]);
    }

    proptest! {
        #[test]
        fn float_text_round_trip(bits in any::<u64>()) {
            let v = f64::from_bits(bits);
            prop_assume!(v.is_finite());
            prop_assert_eq!(fmt_f64(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
    }
}
