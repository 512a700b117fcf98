//! Plain-text exchange formats shared by every tool in the workspace.
//!
//! Matrices travel as headerless CSV: one row per line, comma-separated
//! decimal literals, dimension inferred from the file. Vectors are one
//! value per line. Writing uses Rust's shortest round-trip float
//! formatting, so write → read is lossless and byte-deterministic.

use std::path::Path;

use crate::error::{Error, Result};
use crate::sym::SymMatrix;

/// Largest tolerated relative mismatch between (i,j) and (j,i) when reading
/// a matrix that is required to be symmetric; pairs within the tolerance
/// are averaged, anything larger is an error naming the entry.
const SYMMETRY_TOL: f64 = 1e-12;

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

fn parse_err(source: &str, line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: source.to_string(),
        line,
        col,
        msg: msg.into(),
    }
}

fn parse_field(source: &str, line: usize, col: usize, field: &str) -> Result<f64> {
    let trimmed = field.trim();
    if trimmed.is_empty() {
        return Err(parse_err(source, line, col, "empty field"));
    }
    let value: f64 = trimmed
        .parse()
        .map_err(|_| parse_err(source, line, col, format!("not a number: {trimmed:?}")))?;
    if !value.is_finite() {
        return Err(parse_err(
            source,
            line,
            col,
            format!("non-finite value: {trimmed:?}"),
        ));
    }
    Ok(value)
}

/// Parse a symmetric matrix from CSV text. `source` names the origin
/// (usually a file path) for error messages; `line` is 1-based and `col`
/// is the 1-based field position within the line.
pub fn parse_matrix(text: &str, source: &str) -> Result<SymMatrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let mut row = Vec::with_capacity(width);
        for (fidx, field) in raw.split(',').enumerate() {
            row.push(parse_field(source, lineno, fidx + 1, field)?);
        }
        if rows.is_empty() {
            width = row.len();
        } else if row.len() != width {
            return Err(parse_err(
                source,
                lineno,
                row.len().min(width) + 1,
                format!("row has {} fields, expected {width}", row.len()),
            ));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_err(source, 1, 1, "empty matrix"));
    }
    let n = rows.len();
    if width != n {
        return Err(parse_err(
            source,
            n,
            1,
            format!("matrix is not square: {n} rows but {width} columns"),
        ));
    }
    let mut m = SymMatrix::zeros(n);
    for i in 0..n {
        m.set(i, i, rows[i][i]);
        for j in 0..i {
            let (a, b) = (rows[i][j], rows[j][i]);
            if (a - b).abs() > SYMMETRY_TOL * a.abs().max(b.abs()).max(1.0) {
                return Err(Error::NotSymmetric { i, j, a, b });
            }
            m.set(i, j, 0.5 * (a + b));
        }
    }
    Ok(m)
}

/// Parse a vector from text: one value per line, blank lines ignored.
pub fn parse_vector(text: &str, source: &str) -> Result<Vec<f64>> {
    let mut v = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        if raw.trim().is_empty() {
            continue;
        }
        v.push(parse_field(source, idx + 1, 1, raw)?);
    }
    Ok(v)
}

/// Render a matrix as headerless CSV (full precision, trailing newline).
pub fn format_matrix(m: &SymMatrix) -> String {
    let n = m.n();
    let mut out = String::new();
    for i in 0..n {
        for j in 0..n {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&m.get(i, j).to_string());
        }
        out.push('\n');
    }
    out
}

/// Render a vector, one value per line (full precision, trailing newline).
pub fn format_vector(v: &[f64]) -> String {
    let mut out = String::new();
    for x in v {
        out.push_str(&x.to_string());
        out.push('\n');
    }
    out
}

/// Read a symmetric matrix from a CSV file.
pub fn read_matrix(path: impl AsRef<Path>) -> Result<SymMatrix> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_matrix(&text, &path.display().to_string())
}

/// Read a vector (one value per line) from a file.
pub fn read_vector(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_vector(&text, &path.display().to_string())
}

/// Write a matrix as headerless CSV.
pub fn write_matrix(path: impl AsRef<Path>, m: &SymMatrix) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, format_matrix(m)).map_err(|e| io_err(path, e))
}

/// Write a vector, one value per line.
pub fn write_vector(path: impl AsRef<Path>, v: &[f64]) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, format_vector(v)).map_err(|e| io_err(path, e))
}

/// Write arbitrary text (CSV reports, JSON lines) with the shared Io error
/// shape, so callers get the path in the message.
pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}
