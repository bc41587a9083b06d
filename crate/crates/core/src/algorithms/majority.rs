use std::sync::atomic::{AtomicU64, Ordering};

use super::{AlgorithmResult, TranscriptEntry};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Majority {
    Zero,
    One,
    /// Exactly half the entries are 1.
    Tie,
}

/// Classical MV and VM access to a 0/1 matrix over the reals, with integer
/// query vectors.
#[derive(Debug)]
pub struct BinaryRealOracle {
    rows: Vec<Vec<u8>>,
    cols: usize,
    counter: AtomicU64,
}

impl BinaryRealOracle {
    pub fn new(entries: &[Vec<i64>]) -> Result<Self> {
        let cols = entries.first().map_or(0, Vec::len);
        let mut rows = Vec::with_capacity(entries.len());
        for (i, r) in entries.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            let row: Option<Vec<u8>> = r.iter().map(|&v| u8::try_from(v).ok().filter(|&b| b <= 1)).collect();
            rows.push(row.ok_or_else(|| Error::NonBinary(format!("row {i} has an entry outside {{0, 1}}")))?);
        }
        Ok(BinaryRealOracle { rows, cols, counter: AtomicU64::new(0) })
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows.len(), self.cols)
    }

    pub fn queries(&self) -> u64 {
        self.counter.load(Ordering::SeqCst)
    }

    /// x ↦ Mx.
    pub fn mv_query(&self, x: &[i64]) -> Result<Vec<i64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!("query of length {}, expected {}", x.len(), self.cols)));
        }
        self.counter.fetch_add(1, Ordering::SeqCst);
        Ok(self.rows.iter().map(|r| r.iter().zip(x).map(|(&a, &b)| a as i64 * b).sum()).collect())
    }

    /// y ↦ yᵀM.
    pub fn vm_query(&self, y: &[i64]) -> Result<Vec<i64>> {
        if y.len() != self.rows.len() {
            return Err(Error::DimensionMismatch(format!("query of length {}, expected {}", y.len(), self.rows.len())));
        }
        self.counter.fetch_add(1, Ordering::SeqCst);
        let mut out = vec![0i64; self.cols];
        for (r, &c) in self.rows.iter().zip(y) {
            for (o, &a) in out.iter_mut().zip(r) {
                *o += a as i64 * c;
            }
        }
        Ok(out)
    }
}

fn classify(count: i64, len: usize) -> Majority {
    match (2 * count).cmp(&(len as i64)) {
        std::cmp::Ordering::Greater => Majority::One,
        std::cmp::Ordering::Less => Majority::Zero,
        std::cmp::Ordering::Equal => Majority::Tie,
    }
}

/// Row majorities from the single product M·1.
pub fn majority_rows(oracle: &BinaryRealOracle) -> Result<AlgorithmResult<Vec<Majority>, Vec<i64>>> {
    let (_, n) = oracle.dims();
    let before = oracle.queries();
    let query = vec![1i64; n];
    let counts = oracle.mv_query(&query)?;
    let answer = counts.iter().map(|&c| classify(c, n)).collect();
    Ok(AlgorithmResult { answer, queries_used: oracle.queries() - before, transcript: vec![TranscriptEntry { query, response: counts }] })
}

/// Column majorities from the single product 1ᵀM.
pub fn majority_columns(oracle: &BinaryRealOracle) -> Result<AlgorithmResult<Vec<Majority>, Vec<i64>>> {
    let (m, _) = oracle.dims();
    let before = oracle.queries();
    let query = vec![1i64; m];
    let counts = oracle.vm_query(&query)?;
    let answer = counts.iter().map(|&c| classify(c, m)).collect();
    Ok(AlgorithmResult { answer, queries_used: oracle.queries() - before, transcript: vec![TranscriptEntry { query, response: counts }] })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let ones = BinaryRealOracle::new(&[vec![1, 1, 1], vec![1, 1, 1]]).unwrap();
        assert_eq!(majority_rows(&ones).unwrap().answer, vec![Majority::One; 2]);
        assert_eq!(majority_columns(&ones).unwrap().answer, vec![Majority::One; 3]);
        let single = BinaryRealOracle::new(&[vec![1, 0, 0]]).unwrap();
        assert_eq!(majority_rows(&single).unwrap().answer, vec![Majority::Zero]);
        let tie = BinaryRealOracle::new(&[vec![1, 0]]).unwrap();
        let r = majority_rows(&tie).unwrap();
        assert_eq!(r.answer, vec![Majority::Tie]);
        assert_eq!(r.queries_used, 1);
        assert!(matches!(BinaryRealOracle::new(&[vec![1, 2]]), Err(Error::NonBinary(_))));
        assert!(matches!(BinaryRealOracle::new(&[vec![-1, 0]]), Err(Error::NonBinary(_))));
    }

    #[test]
    fn exhaustive_3x3() {
        for bits in 0u32..512 {
            let rows: Vec<Vec<i64>> = (0..3).map(|i| (0..3).map(|j| ((bits >> (3 * i + j)) & 1) as i64).collect()).collect();
            let o = BinaryRealOracle::new(&rows).unwrap();
            let r = majority_rows(&o).unwrap().answer;
            let c = majority_columns(&o).unwrap().answer;
            for i in 0..3 {
                let row: i64 = rows[i].iter().sum();
                let col: i64 = rows.iter().map(|r| r[i]).sum();
                assert_eq!(r[i], if row >= 2 { Majority::One } else { Majority::Zero });
                assert_eq!(c[i], if col >= 2 { Majority::One } else { Majority::Zero });
            }
            assert_eq!(o.queries(), 2);
        }
    }
}
