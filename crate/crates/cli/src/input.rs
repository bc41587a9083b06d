//! Matrix sources: files, stdin, and seeded random instances.

use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};
use mvlab::ff::{parse_matrix, Field, Matrix, Vector};
use serde_json::{json, Value};

/// Reads `path`, or stdin when `path` is `-`.
pub fn read_source(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

pub fn read_matrix(path: &Path) -> Result<Matrix> {
    Ok(parse_matrix(&read_source(path)?)?)
}

/// Whitespace-separated integer rows; blank and `#` lines are skipped.
pub fn parse_int_rows(text: &str) -> Result<Vec<Vec<i64>>> {
    let mut rows = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let row: Vec<i64> =
            line.split_whitespace().map(|t| t.parse::<i64>().with_context(|| format!("not an integer: {t:?}"))).collect::<Result<_>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        bail!("no matrix rows in input");
    }
    Ok(rows)
}

pub fn field(q: u64) -> Result<Field> {
    Field::of_order(q).map_err(|e| crate::UsageError(format!("invalid q = {q}: {e}")).into())
}

pub fn check_dims(m: usize, n: usize, max_dim: usize) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(crate::UsageError("dimensions must be positive".into()).into());
    }
    if m > max_dim || n > max_dim {
        return Err(crate::UsageError(format!("{m}×{n} exceeds --max-dim {max_dim}")).into());
    }
    Ok(())
}

/// Number of matrices in F_q^{m×n}, if it does not exceed `cap`.
pub fn enumerable(field: &Field, m: usize, n: usize, cap: u64) -> Result<u64> {
    Matrix::space_size(field, m, n)
        .filter(|&s| s <= cap)
        .ok_or_else(|| crate::UsageError(format!("q^(mn) = {}^{} exceeds the enumeration cap {cap}", field.q(), m * n)).into())
}

pub fn vector_json(v: &Vector) -> Value {
    json!(v.iter().map(|e| e.index()).collect::<Vec<_>>())
}

pub fn matrix_json(m: &Matrix) -> Value {
    json!((0..m.rows()).map(|i| m.row(i).iter().map(|e| e.index()).collect::<Vec<_>>()).collect::<Vec<_>>())
}
