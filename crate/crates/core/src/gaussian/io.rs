//! Plain-text covariance-matrix files.
//!
//! ```text
//! modes=2 convention=one
//! <2N rows of 2N whitespace-separated numbers>
//! d= <2N numbers>          (optional)
//! ```
//!
//! Numbers are written with 17 significant digits so that reading a written
//! file reproduces every entry bit for bit. Blank lines and lines starting
//! with `#` are ignored.

use std::fmt::Write as _;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::numerics::Mat;

use super::state::{Convention, GaussianState};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_numbers(text: &str, line: usize) -> Result<Vec<f64>> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| parse_err(line, format!("invalid number `{t}`")))
                .and_then(|x| {
                    if x.is_finite() {
                        Ok(x)
                    } else {
                        Err(parse_err(line, format!("non-finite number `{t}`")))
                    }
                })
        })
        .collect()
}

/// Parses a covariance-matrix file.
pub fn parse_cm(text: &str) -> Result<GaussianState> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let mut modes = None;
    let mut convention = None;
    for tok in header.split_whitespace() {
        match tok.split_once('=') {
            Some(("modes", v)) => {
                modes = Some(
                    v.parse::<usize>()
                        .ok()
                        .filter(|&n| n > 0)
                        .ok_or_else(|| parse_err(hline, format!("invalid mode count `{v}`")))?,
                )
            }
            Some(("convention", "one")) => convention = Some(Convention::VacuumOne),
            Some(("convention", "half")) => convention = Some(Convention::VacuumHalf),
            _ => return Err(parse_err(hline, format!("unexpected header token `{tok}`"))),
        }
    }
    let n = modes.ok_or_else(|| parse_err(hline, "missing `modes=`"))?;
    let convention = convention.ok_or_else(|| parse_err(hline, "missing `convention=`"))?;
    let dim = 2 * n;
    let mut entries = Vec::with_capacity(dim * dim);
    for _ in 0..dim {
        let (ln, row) = lines
            .next()
            .ok_or_else(|| parse_err(hline, format!("expected {dim} matrix rows")))?;
        let vals = parse_numbers(row, ln)?;
        if vals.len() != dim {
            return Err(parse_err(ln, format!("expected {dim} entries, found {}", vals.len())));
        }
        entries.extend(vals);
    }
    let mut d = None;
    if let Some((ln, rest)) = lines.next() {
        let body = rest
            .strip_prefix("d=")
            .ok_or_else(|| parse_err(ln, "expected `d=` line or end of file"))?;
        let vals = parse_numbers(body, ln)?;
        if vals.len() != dim {
            return Err(parse_err(ln, format!("expected {dim} displacement entries, found {}", vals.len())));
        }
        d = Some(DVector::from_vec(vals));
        if let Some((ln, _)) = lines.next() {
            return Err(parse_err(ln, "trailing content after displacement"));
        }
    }
    let v = Mat::from_row_slice(dim, dim, &entries);
    GaussianState::new(v, d, convention).map_err(|e| parse_err(hline, e.to_string()))
}

/// Formats a state as a covariance-matrix file.
pub fn format_cm(state: &GaussianState) -> String {
    let dim = state.cm().nrows();
    let conv = match state.convention() {
        Convention::VacuumOne => "one",
        Convention::VacuumHalf => "half",
    };
    let mut out = format!("modes={} convention={}\n", state.modes(), conv);
    for i in 0..dim {
        let row: Vec<String> = (0..dim).map(|j| format!("{:.16e}", state.cm()[(i, j)])).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    if state.displacement().iter().any(|&x| x != 0.0) {
        let row: Vec<String> = state.displacement().iter().map(|x| format!("{x:.16e}")).collect();
        let _ = writeln!(out, "d= {}", row.join(" "));
    }
    out
}
