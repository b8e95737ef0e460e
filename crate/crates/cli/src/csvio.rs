//! CSV files written and read by the CLI.
//!
//! Comma separated, `\n` line endings, header row first. Real numbers carry
//! 12 significant digits.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use nkland::harness::MovesTrace;
use nkland::{Algorithm, ReplicateRecord, SummaryRow, SweepSummary};

use crate::CliError;

pub const SUMMARY_HEADER: [&str; 9] = [
    "algorithm",
    "k",
    "mean_fitness",
    "se_fitness",
    "mean_hamming",
    "se_hamming",
    "mean_steps",
    "early_term_rate",
    "iterations",
];

pub const TRACE_HEADER: [&str; 3] = ["k", "step", "mean_moves_available"];

pub const RECORDS_HEADER: [&str; 8] = [
    "algorithm",
    "k",
    "replicate_index",
    "best_fitness",
    "hamming",
    "steps_executed",
    "terminated_early",
    "seed_used",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schema {
    Summary,
    Trace,
    Records,
}

impl Schema {
    pub fn detect(header: &csv::StringRecord) -> Option<Self> {
        let h: Vec<&str> = header.iter().collect();
        if h == SUMMARY_HEADER {
            Some(Self::Summary)
        } else if h == TRACE_HEADER {
            Some(Self::Trace)
        } else if h == RECORDS_HEADER {
            Some(Self::Records)
        } else {
            None
        }
    }
}

/// Renders `x` with 12 significant digits: fixed notation for magnitudes in
/// `[1e-5, 1e15)`, scientific otherwise.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&magnitude) {
        return format!("{x:.11e}");
    }
    let fixed = |mag: i32| format!("{:.*}", (11 - mag).max(0) as usize, x);
    let s = fixed(magnitude);
    // rounding can carry into a new leading digit (9.99...95 -> 10.00...0)
    let rounded: f64 = s.parse().expect("formatted float");
    let new_mag = rounded.abs().log10().floor() as i32;
    if new_mag != magnitude {
        fixed(new_mag)
    } else {
        s
    }
}

fn writer(path: &Path) -> Result<csv::Writer<File>, CliError> {
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)?)
}

fn finish(mut w: csv::Writer<File>) -> Result<(), CliError> {
    w.flush()?;
    Ok(())
}

pub fn write_summary(path: &Path, summary: &SweepSummary) -> Result<(), CliError> {
    let mut w = writer(path)?;
    w.write_record(SUMMARY_HEADER)?;
    for r in &summary.rows {
        w.write_record([
            r.algorithm.name().to_string(),
            r.k.to_string(),
            fmt_num(r.mean_fitness),
            fmt_num(r.se_fitness),
            fmt_num(r.mean_hamming),
            fmt_num(r.se_hamming),
            fmt_num(r.mean_steps),
            fmt_num(r.early_term_rate),
            r.iterations.to_string(),
        ])?;
    }
    finish(w)
}

pub fn write_records(path: &Path, records: &[ReplicateRecord]) -> Result<(), CliError> {
    let mut w = writer(path)?;
    w.write_record(RECORDS_HEADER)?;
    for r in records {
        w.write_record([
            r.algorithm.name().to_string(),
            r.k.to_string(),
            r.replicate_index.to_string(),
            fmt_num(r.best_fitness),
            r.hamming.to_string(),
            r.steps_executed.to_string(),
            r.terminated_early.to_string(),
            r.seed_used.to_string(),
        ])?;
    }
    finish(w)
}

/// One row per `(k, step)`, steps numbered from 1.
pub fn write_trace(path: &Path, traces: &[MovesTrace]) -> Result<(), CliError> {
    let mut w = writer(path)?;
    w.write_record(TRACE_HEADER)?;
    for t in traces {
        for (step, mean) in t.mean().into_iter().enumerate() {
            w.write_record([t.k.to_string(), (step + 1).to_string(), fmt_num(mean)])?;
        }
    }
    finish(w)
}

/// Opens a CSV file and checks its header against `expected`.
fn open(path: &Path, expected: Schema) -> Result<csv::Reader<File>, CliError> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.clone();
    match Schema::detect(&header) {
        Some(s) if s == expected => Ok(r),
        _ => Err(CliError::Runtime(format!(
            "{}: header does not match the {expected:?} schema",
            path.display()
        ))),
    }
}

fn field<T: std::str::FromStr>(
    rec: &csv::StringRecord,
    i: usize,
    name: &str,
) -> Result<T, CliError> {
    rec.get(i).and_then(|s| s.parse().ok()).ok_or_else(|| {
        CliError::Runtime(format!(
            "bad {name} value in row {:?}",
            rec.position().map(|p| p.line())
        ))
    })
}

fn algorithm(rec: &csv::StringRecord) -> Result<Algorithm, CliError> {
    rec.get(0)
        .unwrap_or_default()
        .parse()
        .map_err(|e: nkland::NkError| CliError::Runtime(e.to_string()))
}

pub fn read_records(path: &Path) -> Result<Vec<ReplicateRecord>, CliError> {
    let mut r = open(path, Schema::Records)?;
    r.records()
        .map(|rec| {
            let rec = rec?;
            Ok(ReplicateRecord {
                algorithm: algorithm(&rec)?,
                k: field(&rec, 1, "k")?,
                replicate_index: field(&rec, 2, "replicate_index")?,
                best_fitness: field(&rec, 3, "best_fitness")?,
                hamming: field(&rec, 4, "hamming")?,
                steps_executed: field(&rec, 5, "steps_executed")?,
                terminated_early: field(&rec, 6, "terminated_early")?,
                seed_used: field(&rec, 7, "seed_used")?,
            })
        })
        .collect()
}

pub fn read_summary(path: &Path) -> Result<SweepSummary, CliError> {
    let mut r = open(path, Schema::Summary)?;
    let rows = r
        .records()
        .map(|rec| {
            let rec = rec?;
            Ok(SummaryRow {
                algorithm: algorithm(&rec)?,
                k: field(&rec, 1, "k")?,
                mean_fitness: field(&rec, 2, "mean_fitness")?,
                se_fitness: field(&rec, 3, "se_fitness")?,
                mean_hamming: field(&rec, 4, "mean_hamming")?,
                se_hamming: field(&rec, 5, "se_hamming")?,
                mean_steps: field(&rec, 6, "mean_steps")?,
                early_term_rate: field(&rec, 7, "early_term_rate")?,
                iterations: field(&rec, 8, "iterations")?,
            })
        })
        .collect::<Result<_, CliError>>()?;
    Ok(SweepSummary { rows })
}

/// Rows of a trace file as `(k, step, mean_moves_available)`.
pub fn read_trace(path: &Path) -> Result<Vec<(usize, usize, f64)>, CliError> {
    let mut r = open(path, Schema::Trace)?;
    r.records()
        .map(|rec| {
            let rec = rec?;
            Ok((
                field(&rec, 0, "k")?,
                field(&rec, 1, "step")?,
                field(&rec, 2, "mean_moves_available")?,
            ))
        })
        .collect()
}

/// Writes `contents` to `path` in one go.
pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    let mut f = File::create(path)?;
    f.write_all(contents.as_bytes())?;
    Ok(())
}
