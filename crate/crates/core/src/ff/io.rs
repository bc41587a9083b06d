//! Plain-text matrix files.
//!
//! ```text
//! q m n
//! modulus c0 c1 ... cr      (only when q = p^r with r > 1)
//! a11 a12 ... a1n
//! ...
//! am1 ... amn
//! ```
//!
//! Each entry is an integer in `[0, q)` whose little-endian base-p digits
//! are the polynomial-basis coefficients of the element. Blank lines and
//! lines starting with `#` are ignored.

use std::fmt::Write as _;

use super::field::{prime_power, Field};
use super::matrix::Matrix;
use crate::error::{Error, Result};

fn parse_ints(line: &str) -> Result<Vec<u64>> {
    line.split_whitespace().map(|t| t.parse::<u64>().map_err(|_| Error::Parse(format!("not an integer: {t:?}")))).collect()
}

/// Parses a matrix file, building the field from its header.
pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let dims = parse_ints(header)?;
    let [q, m, n] = dims[..] else {
        return Err(Error::Parse(format!("header must be `q m n`, got {header:?}")));
    };
    let (p, r) = prime_power(q).ok_or_else(|| Error::Parse(format!("q = {q} is not a prime power")))?;
    let field = if r > 1 {
        let line = lines.next().ok_or_else(|| Error::Parse("missing modulus line".into()))?;
        let rest = line.strip_prefix("modulus").ok_or_else(|| Error::Parse(format!("expected `modulus c0 ... cr`, got {line:?}")))?;
        let coeffs: Vec<u32> = parse_ints(rest)?.into_iter().map(|c| c as u32).collect();
        Field::new(p, r, Some(&coeffs))?
    } else {
        Field::prime(p)?
    };
    let (m, n) = (m as usize, n as usize);
    let mut rows = Vec::with_capacity(m);
    for line in lines.by_ref().take(m) {
        let row = parse_ints(line)?;
        if row.len() != n {
            return Err(Error::Parse(format!("row has {} entries, expected {n}", row.len())));
        }
        if let Some(bad) = row.iter().find(|&&v| v >= q) {
            return Err(Error::Parse(format!("entry {bad} out of range for q = {q}")));
        }
        rows.push(row);
    }
    if rows.len() != m {
        return Err(Error::Parse(format!("expected {m} rows, found {}", rows.len())));
    }
    if lines.next().is_some() {
        return Err(Error::Parse("trailing data after matrix rows".into()));
    }
    if m == 0 || n == 0 {
        return Ok(Matrix::zeros(&field, m, n));
    }
    Matrix::from_rows(&field, &rows)
}

/// Renders a matrix in the file format accepted by [`parse_matrix`].
pub fn write_matrix(m: &Matrix) -> String {
    let f = m.field();
    let mut out = format!("{} {} {}\n", f.q(), m.rows(), m.cols());
    if f.r() > 1 {
        let coeffs: Vec<String> = f.modulus().iter().map(u32::to_string).collect();
        let _ = writeln!(out, "modulus {}", coeffs.join(" "));
    }
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|e| e.index().to_string()).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_prime_field_matrix() {
        let m = parse_matrix("2 2 3\n1 0 1\n0 1 1\n").unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 3));
        assert_eq!(m.get(0, 2).index(), 1);
        assert_eq!(m.get(1, 0).index(), 0);
    }

    #[test]
    fn extension_field_needs_modulus() {
        assert!(matches!(parse_matrix("4 1 1\n3\n"), Err(Error::Parse(_))));
        let m = parse_matrix("4 1 2\nmodulus 1 1 1\n3 2\n").unwrap();
        assert_eq!(m.field().modulus(), &[1, 1, 1]);
        assert!(matches!(parse_matrix("4 1 1\nmodulus 1 0 1\n1\n"), Err(Error::ReducibleModulus(..))));
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_matrix("").is_err());
        assert!(parse_matrix("6 1 1\n0\n").is_err());
        assert!(parse_matrix("3 1 2\n0 3\n").is_err());
        assert!(parse_matrix("3 2 2\n0 1\n").is_err());
        assert!(parse_matrix("3 1 1\n0\n1\n").is_err());
    }

    proptest! {
        #[test]
        fn write_then_parse_is_identity(q in prop::sample::select(vec![2u64, 3, 4, 5, 8, 9]), m in 1usize..5, n in 1usize..5, seed in any::<u64>()) {
            use rand::SeedableRng;
            let f = Field::of_order(q).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let a = Matrix::random(&f, m, n, &mut rng);
            let back = parse_matrix(&write_matrix(&a)).unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
