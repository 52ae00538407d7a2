//! CSV form of trajectories, fields and reports.
//!
//! Reals are written with 17 significant digits, so parsing a file back
//! reproduces every value exactly. Records end with a bare `\n`.

use std::io::{Read, Write};

use super::decay::{DecayReport, DecayRow};
use super::energy::{BoundRecord, EnergyReport};
use super::sweep::{SweepReport, SweepRow};
use crate::error::{Error, Result};
use crate::grid::{Field, Grid, Trajectory};

pub const TRAJECTORY_HEADER_1D: &str = "t,x,u";
pub const TRAJECTORY_HEADER_2D: &str = "t,x,y,u";
pub const ENERGY_HEADER: &str = "name,lhs,rhs,ratio,satisfied";
pub const SWEEP_HEADER: &str = "lambda,err_l2h1,err_supl2,pen_mass";
pub const DECAY_HEADER: &str = "lambda,I_eps,W,scaled,slope_fit,residual";

/// Formats a real with 17 significant digits.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::new(std::io::ErrorKind::InvalidData, e))
}

fn invalid(msg: String) -> Error {
    Error::Io(std::io::Error::new(std::io::ErrorKind::InvalidData, msg))
}

fn coordinates(grid: &Grid, i: usize) -> Vec<String> {
    let p = grid.node(i);
    p[..grid.dim()].iter().map(|&c| real(c)).collect()
}

fn header_for(grid: &Grid, with_time: bool) -> Vec<&'static str> {
    let mut h = Vec::new();
    if with_time {
        h.push("t");
    }
    h.push("x");
    if grid.dim() == 2 {
        h.push("y");
    }
    h.push("u");
    h
}

/// One row per layer and node: `t,x[,y],u`.
pub fn write_trajectory<W: Write>(traj: &Trajectory, w: W) -> Result<()> {
    let grid = traj.grid();
    let mut out = writer(w);
    out.write_record(header_for(grid, true))
        .map_err(csv_error)?;
    for (k, layer) in traj.layers().iter().enumerate() {
        let t = real(traj.time_grid().time(k));
        for (i, v) in layer.values().iter().enumerate() {
            let mut rec = vec![t.clone()];
            rec.extend(coordinates(grid, i));
            rec.push(real(*v));
            out.write_record(&rec).map_err(csv_error)?;
        }
    }
    out.flush()?;
    Ok(())
}

/// One row per node: `x[,y],u`.
pub fn write_field<W: Write>(field: &Field, w: W) -> Result<()> {
    let grid = field.grid();
    let mut out = writer(w);
    out.write_record(header_for(grid, false))
        .map_err(csv_error)?;
    for (i, v) in field.values().iter().enumerate() {
        let mut rec = coordinates(grid, i);
        rec.push(real(*v));
        out.write_record(&rec).map_err(csv_error)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_energy<W: Write>(report: &EnergyReport, w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(ENERGY_HEADER.split(','))
        .map_err(csv_error)?;
    for r in &report.records {
        out.write_record([
            r.name.clone(),
            real(r.lhs),
            real(r.rhs),
            real(r.ratio),
            r.satisfied.to_string(),
        ])
        .map_err(csv_error)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_sweep<W: Write>(report: &SweepReport, w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(SWEEP_HEADER.split(','))
        .map_err(csv_error)?;
    for r in &report.rows {
        out.write_record([
            real(r.lambda),
            real(r.err_l2h1),
            real(r.err_supl2),
            real(r.pen_mass),
        ])
        .map_err(csv_error)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_decay<W: Write>(report: &DecayReport, w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(DECAY_HEADER.split(','))
        .map_err(csv_error)?;
    for r in &report.rows {
        out.write_record([
            real(r.lambda),
            real(r.i_eps),
            real(r.w),
            real(r.scaled),
            real(report.slope),
            real(report.residual),
        ])
        .map_err(csv_error)?;
    }
    out.flush()?;
    Ok(())
}

/// Parses a CSV with the given header into string records.
fn records<R: Read>(r: R, header: &str) -> Result<Vec<csv::StringRecord>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let found: Vec<String> = rdr
        .headers()
        .map_err(csv_error)?
        .iter()
        .map(str::to_string)
        .collect();
    if found.join(",") != header {
        return Err(invalid(format!(
            "expected header {header:?}, found {:?}",
            found.join(",")
        )));
    }
    rdr.records().map(|r| r.map_err(csv_error)).collect()
}

fn parse_real(s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| invalid(format!("{s:?} is not a real number")))
}

pub fn read_energy<R: Read>(r: R) -> Result<EnergyReport> {
    let records = records(r, ENERGY_HEADER)?
        .iter()
        .map(|rec| {
            Ok(BoundRecord {
                name: rec[0].to_string(),
                lhs: parse_real(&rec[1])?,
                rhs: parse_real(&rec[2])?,
                ratio: parse_real(&rec[3])?,
                satisfied: rec[4]
                    .parse()
                    .map_err(|_| invalid(format!("{:?} is not a boolean", &rec[4])))?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(EnergyReport { records })
}

pub fn read_sweep<R: Read>(r: R) -> Result<SweepReport> {
    let rows = records(r, SWEEP_HEADER)?
        .iter()
        .map(|rec| {
            Ok(SweepRow {
                lambda: parse_real(&rec[0])?,
                err_l2h1: parse_real(&rec[1])?,
                err_supl2: parse_real(&rec[2])?,
                pen_mass: parse_real(&rec[3])?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(SweepReport { rows })
}

pub fn read_decay<R: Read>(r: R) -> Result<DecayReport> {
    let recs = records(r, DECAY_HEADER)?;
    let mut report = DecayReport::default();
    for (j, rec) in recs.iter().enumerate() {
        let (slope, residual) = (parse_real(&rec[4])?, parse_real(&rec[5])?);
        if j == 0 {
            report.slope = slope;
            report.residual = residual;
        } else if slope.to_bits() != report.slope.to_bits()
            || residual.to_bits() != report.residual.to_bits()
        {
            return Err(invalid(
                "slope_fit and residual must repeat on every row".into(),
            ));
        }
        report.rows.push(DecayRow {
            lambda: parse_real(&rec[0])?,
            i_eps: parse_real(&rec[1])?,
            w: parse_real(&rec[2])?,
            scaled: parse_real(&rec[3])?,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TimeGrid;
    use std::sync::Arc;

    #[test]
    fn reals_keep_every_bit() {
        for x in [
            0.1,
            1.0 / 3.0,
            -2.5e-300,
            6.02214076e23,
            0.0,
            f64::MIN_POSITIVE,
        ] {
            assert_eq!(real(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn sweep_round_trip() {
        let report = SweepReport {
            rows: vec![SweepRow {
                lambda: 100.0,
                err_l2h1: 0.123_456_789_012_345_67,
                err_supl2: 1.0 / 7.0,
                pen_mass: 3e-9,
            }],
        };
        let mut buf = Vec::new();
        write_sweep(&report, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("lambda,err_l2h1,err_supl2,pen_mass\n"));
        assert!(!text.contains('\r'));
        assert_eq!(read_sweep(buf.as_slice()).unwrap(), report);
    }

    #[test]
    fn energy_round_trip() {
        let report = EnergyReport {
            records: vec![
                BoundRecord::new("bound2", 0.3, 0.9, 0.05),
                BoundRecord::new("derbound", 2.0, 1.0, 0.05),
            ],
        };
        let mut buf = Vec::new();
        write_energy(&report, &mut buf).unwrap();
        assert_eq!(read_energy(buf.as_slice()).unwrap(), report);
    }

    #[test]
    fn trajectory_rows() {
        let grid = Arc::new(Grid::new(&[1.0], &[3]).unwrap());
        let time = TimeGrid::new(1.0, 2).unwrap();
        let layers = vec![Field::zeros(grid.clone()); 3];
        let traj = Trajectory::new(grid, time, layers).unwrap();
        let mut buf = Vec::new();
        write_trajectory(&traj, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], TRAJECTORY_HEADER_1D);
        assert_eq!(lines.len(), 1 + 3 * 3);
    }

    #[test]
    fn wrong_header_rejected() {
        assert!(read_sweep("lambda,err\n1,2\n".as_bytes()).is_err());
    }
}
