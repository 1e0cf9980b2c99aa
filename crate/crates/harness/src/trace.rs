//! Convergence traces as CSV.
//!
//! Header `run_id,seed,iteration,evaluations,best_fitness`. Fitness values
//! are written in scientific notation with 17 significant digits, which
//! parses back to the same `f64`.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::Deserialize;
use swarmopt::TraceRow;

use crate::error::{HarnessError, Result};

pub const HEADER: [&str; 5] = ["run_id", "seed", "iteration", "evaluations", "best_fitness"];

/// A trace as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceFile {
    pub run_id: usize,
    pub seed: u64,
    pub rows: Vec<TraceRow>,
}

#[derive(Deserialize)]
struct CsvRow {
    run_id: usize,
    seed: u64,
    iteration: u64,
    evaluations: u64,
    best_fitness: f64,
}

pub fn format_fitness(value: f64) -> String {
    format!("{value:.16e}")
}

/// Rows whose iteration is a multiple of `every`, plus the last row.
pub fn thin(rows: &[TraceRow], every: u64) -> Vec<TraceRow> {
    let every = every.max(1);
    let mut out: Vec<TraceRow> = rows.iter().filter(|r| r.iteration % every == 0).copied().collect();
    if let Some(last) = rows.last() {
        if out.last() != Some(last) {
            out.push(*last);
        }
    }
    out
}

/// Checks the trace invariants: best fitness never increases, iterations and
/// evaluations strictly increase. Returns a description of the first violation.
pub fn lint(rows: &[TraceRow]) -> std::result::Result<(), String> {
    if rows.is_empty() {
        return Err("trace has no rows".into());
    }
    for (i, w) in rows.windows(2).enumerate() {
        let (a, b) = (&w[0], &w[1]);
        if b.best_fitness > a.best_fitness {
            return Err(format!("row {}: best fitness rose from {} to {}", i + 1, a.best_fitness, b.best_fitness));
        }
        if b.evaluations <= a.evaluations {
            return Err(format!("row {}: evaluations {} after {}", i + 1, b.evaluations, a.evaluations));
        }
        if b.iteration <= a.iteration {
            return Err(format!("row {}: iteration {} after {}", i + 1, b.iteration, a.iteration));
        }
    }
    Ok(())
}

pub fn write_csv<W: Write>(out: W, trace: &TraceFile) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in &trace.rows {
        w.write_record([
            trace.run_id.to_string(),
            trace.seed.to_string(),
            r.iteration.to_string(),
            r.evaluations.to_string(),
            format_fitness(r.best_fitness),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Parses a trace written by [`write_csv`]. Stage labels are not stored and
/// come back as 0.
pub fn read_csv<R: Read>(input: R) -> std::result::Result<TraceFile, String> {
    let mut reader = csv::Reader::from_reader(input);
    let header = reader.headers().map_err(|e| e.to_string())?;
    if header.iter().ne(HEADER) {
        return Err(format!("unexpected header {:?}", header.iter().collect::<Vec<_>>()));
    }
    let mut ids = None;
    let mut rows = Vec::new();
    for row in reader.deserialize::<CsvRow>() {
        let row = row.map_err(|e| e.to_string())?;
        match ids {
            None => ids = Some((row.run_id, row.seed)),
            Some(id) if id != (row.run_id, row.seed) => return Err("run_id or seed changes within one trace".into()),
            Some(_) => {}
        }
        rows.push(TraceRow {
            iteration: row.iteration,
            evaluations: row.evaluations,
            best_fitness: row.best_fitness,
            stage: 0,
        });
    }
    let (run_id, seed) = ids.ok_or("trace has no rows")?;
    Ok(TraceFile { run_id, seed, rows })
}

/// Writes the trace, then reads the file back and lints it.
pub fn write_trace(path: &Path, trace: &TraceFile) -> Result<()> {
    lint(&trace.rows).map_err(|m| HarnessError::format(path, m))?;
    let file = File::create(path).map_err(|e| HarnessError::io(path, e))?;
    write_csv(file, trace).map_err(|e| csv_error(path, e))?;
    let back = read_trace(path)?;
    lint(&back.rows).map_err(|m| HarnessError::format(path, m))
}

pub fn read_trace(path: &Path) -> Result<TraceFile> {
    let file = File::open(path).map_err(|e| HarnessError::io(path, e))?;
    read_csv(file).map_err(|m| HarnessError::format(path, m))
}

fn csv_error(path: &Path, e: csv::Error) -> HarnessError {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => HarnessError::io(path, io),
            other => HarnessError::format(path, format!("{other:?}")),
        }
    } else {
        HarnessError::format(path, e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(iteration: u64, evaluations: u64, best_fitness: f64) -> TraceRow {
        TraceRow { iteration, evaluations, best_fitness, stage: 0 }
    }

    fn to_string(trace: &TraceFile) -> String {
        let mut buf = Vec::new();
        write_csv(&mut buf, trace).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn init_only_trace_is_header_plus_one_row() {
        let t = TraceFile { run_id: 0, seed: 9, rows: vec![row(0, 20, 1.5)] };
        let text = to_string(&t);
        assert_eq!(text, "run_id,seed,iteration,evaluations,best_fitness\n0,9,0,20,1.5000000000000000e0\n");
        assert_eq!(read_csv(text.as_bytes()).unwrap(), t);
    }

    #[test]
    fn seventeen_significant_digits_round_trip() {
        let values = [0.1, 1.0 / 3.0, -1.0, 5e-324, f64::MAX, 2.2250738585072014e-308, -0.9999999999999999];
        for v in values {
            let s = format_fitness(v);
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
            assert_eq!(mantissa.len(), 17, "{s}");
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
    }

    #[test]
    fn thinning_keeps_multiples_and_last() {
        let rows: Vec<TraceRow> = (0..=7).map(|i| row(i, 10 * (i + 1), 1.0 / (i + 1) as f64)).collect();
        let kept: Vec<u64> = thin(&rows, 3).iter().map(|r| r.iteration).collect();
        assert_eq!(kept, vec![0, 3, 6, 7]);
        assert_eq!(thin(&rows, 1), rows);
        assert_eq!(thin(&rows[..7], 3).len(), 3);
    }

    #[test]
    fn lint_catches_violations() {
        assert!(lint(&[row(0, 10, 1.0), row(1, 20, 0.5)]).is_ok());
        assert!(lint(&[row(0, 10, 1.0), row(1, 20, 1.5)]).is_err());
        assert!(lint(&[row(0, 10, 1.0), row(1, 10, 0.5)]).is_err());
        assert!(lint(&[]).is_err());
    }

    #[test]
    fn bad_header_rejected() {
        assert!(read_csv("a,b\n1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let t = TraceFile { run_id: 0, seed: 0, rows: vec![row(0, 1, 0.0)] };
        let err = write_trace(Path::new("/nonexistent-dir/trace.csv"), &t).unwrap_err();
        assert_eq!(err.exit_code(), 4);
        assert!(matches!(err, HarnessError::Io { .. }));
    }
}
