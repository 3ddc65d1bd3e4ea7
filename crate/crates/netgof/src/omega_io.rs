//! Dense probability-matrix files: row-major CSV with an `n=<N>` header.

use std::path::Path;

use nalgebra::DMatrix;

use crate::{Error, Result};

/// Parses a dense symmetric matrix from the CSV format.
pub fn parse_omega_csv(text: &str) -> Result<DMatrix<f64>> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Validation("empty matrix file".into()))?;
    let n: usize = header
        .trim()
        .strip_prefix("n=")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| Error::Parse {
            line: 1,
            msg: format!("expected header \"n=<N>\", got {header:?}"),
        })?;
    let mut m = DMatrix::zeros(n, n);
    let mut row = 0usize;
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if row >= n {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("more than {n} rows"),
            });
        }
        let mut col = 0usize;
        for tok in line.split(',') {
            if col >= n {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("more than {n} columns"),
                });
            }
            let v: f64 = tok.trim().parse().map_err(|_| Error::Parse {
                line: idx + 1,
                msg: format!("invalid number {tok:?}"),
            })?;
            m[(row, col)] = v;
            col += 1;
        }
        if col != n {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("expected {n} columns, got {col}"),
            });
        }
        row += 1;
    }
    if row != n {
        return Err(Error::Validation(format!("expected {n} rows, got {row}")));
    }
    let asym = (0..n)
        .flat_map(|i| (0..i).map(move |j| (i, j)))
        .map(|(i, j)| (m[(i, j)] - m[(j, i)]).abs())
        .fold(0.0f64, f64::max);
    if asym > 1e-9 {
        return Err(Error::Validation(format!(
            "matrix is not symmetric (max asymmetry {asym:e})"
        )));
    }
    Ok(m)
}

pub fn read_omega_csv(path: impl AsRef<Path>) -> Result<DMatrix<f64>> {
    parse_omega_csv(&std::fs::read_to_string(path)?)
}

/// Serializes a dense matrix in the CSV format (row major, `n=<N>` header).
pub fn omega_csv_string(m: &DMatrix<f64>) -> String {
    let n = m.nrows();
    let mut out = format!("n={n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format!("{}", m[(i, j)])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn write_omega_csv(m: &DMatrix<f64>, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, omega_csv_string(m))?;
    Ok(())
}
