//! Table emission: a fixed-schema CSV for benchmark rows and JSON for
//! everything else. Output is deterministic down to the byte: rows are
//! written in the order given and every float uses the same 17
//! significant digit rendering, so identical runs produce identical
//! files.

use super::{BenchRow, Method};
use crate::{Error, Result};
use serde::Serialize;
use std::path::{Path, PathBuf};

/// Lossless float rendering: 17 significant digits in scientific form.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

const CSV_HEADER: &str = "scenario,method,n,mu_exact,estimate,epsilon,delta,shots,queries,seed";

/// Renders rows to CSV with the fixed column set.
pub fn rows_to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.scenario,
            r.method.as_str(),
            r.n,
            format_float(r.mu_exact),
            format_float(r.estimate),
            format_float(r.epsilon),
            format_float(r.delta),
            r.shots,
            r.queries,
            r.seed
        ));
    }
    out
}

/// Canonical table file name: `<scenario>_<n>_<lo>-<hi>.csv` over the
/// seed range.
pub fn table_filename(scenario: &str, n: usize, seeds: &[u64]) -> String {
    let lo = seeds.iter().min().copied().unwrap_or(0);
    let hi = seeds.iter().max().copied().unwrap_or(0);
    format!("{scenario}_{n}_{lo}-{hi}.csv")
}

/// Writes rows under the canonical name in `dir`; returns the path.
pub fn write_table(dir: &Path, scenario: &str, n: usize, seeds: &[u64], rows: &[BenchRow]) -> Result<PathBuf> {
    let path = dir.join(table_filename(scenario, n, seeds));
    std::fs::write(&path, rows_to_csv(rows))
        .map_err(|e| Error::arg(format!("writing {}: {e}", path.display())))?;
    Ok(path)
}

/// Pretty JSON with a trailing newline; key order follows the struct.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Parse(format!("serialising: {e}")))?;
    text.push('\n');
    std::fs::write(path, text)
        .map_err(|e| Error::arg(format!("writing {}: {e}", path.display())))
}

/// Median of an integer sample; averages the middle pair on even sizes.
pub fn median_u64(values: &[u64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty sample");
    let mut v = values.to_vec();
    v.sort_unstable();
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid] as f64
    } else {
        (v[mid - 1] as f64 + v[mid] as f64) / 2.0
    }
}

/// Median queries per method over a row set.
pub fn median_queries_by_method(rows: &[BenchRow]) -> Vec<(Method, f64)> {
    let mut out = Vec::new();
    for method in Method::ALL {
        let qs: Vec<u64> = rows
            .iter()
            .filter(|r| r.method == method)
            .map(|r| r.queries)
            .collect();
        if !qs.is_empty() {
            out.push((method, median_u64(&qs)));
        }
    }
    out
}
