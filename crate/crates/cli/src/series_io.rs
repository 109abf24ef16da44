//! Plain-text persistence of correlator series.
//!
//! `series.csv` holds one row per evaluated kick with header `n,re_f,im_f,c`.
//! Values are printed with Rust's shortest round-trip float formatting, so
//! re-parsing reproduces the in-memory numbers bit for bit.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use floq_otoc::{OtocRequest, OtocSeries};

use crate::UsageError;

pub const SERIES_FILE: &str = "series.csv";

pub fn render_series(series: &OtocSeries) -> String {
    let mut out = String::from("n,re_f,im_f,c\n");
    for ((&n, f), &c) in series
        .kicks
        .iter()
        .zip(&series.f_values)
        .zip(&series.c_values)
    {
        out.push_str(&format!("{n},{},{},{}\n", f.re, f.im, c));
    }
    out
}

pub fn write_series(path: &Path, series: &OtocSeries) -> std::io::Result<()> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(render_series(series).as_bytes())
}

/// Parse a series file back into kick/value columns.
pub fn read_series(path: &Path) -> Result<(Vec<usize>, Vec<Complex64>), UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
    parse_series(&text)
}

pub fn parse_series(text: &str) -> Result<(Vec<usize>, Vec<Complex64>), UsageError> {
    let mut lines = text.lines();
    match lines.next() {
        Some("n,re_f,im_f,c") => {}
        other => {
            return Err(UsageError(format!(
                "unexpected series header: {other:?} (want n,re_f,im_f,c)"
            )))
        }
    }
    let mut kicks = Vec::new();
    let mut values = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 4 {
            return Err(UsageError(format!(
                "series row {} has {} columns, want 4",
                lineno + 2,
                cols.len()
            )));
        }
        let n: usize = cols[0]
            .parse()
            .map_err(|_| UsageError(format!("bad kick index {:?}", cols[0])))?;
        let re: f64 = cols[1]
            .parse()
            .map_err(|_| UsageError(format!("bad re_f {:?}", cols[1])))?;
        let im: f64 = cols[2]
            .parse()
            .map_err(|_| UsageError(format!("bad im_f {:?}", cols[2])))?;
        kicks.push(n);
        values.push(Complex64::new(re, im));
    }
    Ok((kicks, values))
}

/// Rebuild an in-memory series from persisted kick/value columns.
pub fn series_from_columns(
    request: OtocRequest,
    kicks: Vec<usize>,
    values: Vec<Complex64>,
    truncated: bool,
) -> Result<OtocSeries, UsageError> {
    let mut series = OtocSeries::from_parts(request, kicks, values)
        .map_err(|e| UsageError(e.to_string()))?;
    series.truncated = truncated;
    Ok(series)
}
