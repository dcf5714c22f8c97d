//! Deterministic file and text rendering: every floating-point value is
//! written as 17-significant-digit scientific notation so outputs are
//! byte-stable and round-trip losslessly.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use hfbm_core::TimeGrid;

pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Paths as CSV: header `t,path_0,...`, one row per grid point.
pub fn write_paths_csv(path: &Path, grid: &TimeGrid, paths: &[Vec<f64>]) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    let mut header = String::from("t");
    for i in 0..paths.len() {
        header.push_str(&format!(",path_{i}"));
    }
    writeln!(out, "{header}")?;
    for (k, &t) in grid.points().iter().enumerate() {
        let mut row = format_f64(t);
        for p in paths {
            row.push(',');
            row.push_str(&format_f64(p[k]));
        }
        writeln!(out, "{row}")?;
    }
    out.flush()
}

/// Square matrix as CSV lines: header `t,<t1>,...`, one row per time.
pub fn render_matrix(times: &[f64], entries: &[f64]) -> String {
    let dim = times.len();
    let mut text = String::from("t");
    for &t in times {
        text.push(',');
        text.push_str(&format_f64(t));
    }
    text.push('\n');
    for (i, &t) in times.iter().enumerate() {
        text.push_str(&format_f64(t));
        for j in 0..dim {
            text.push(',');
            text.push_str(&format_f64(entries[i * dim + j]));
        }
        text.push('\n');
    }
    text
}

pub fn write_text(path: &Path, text: &str) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    out.write_all(text.as_bytes())?;
    out.flush()
}

/// JSON with sorted keys: serializing through `serde_json::Value` makes
/// parse-then-serialize the identity, which the report stream promises.
pub fn to_sorted_json<T: serde::Serialize>(value: &T) -> serde_json::Result<String> {
    let v = serde_json::to_value(value)?;
    serde_json::to_string_pretty(&v)
}
