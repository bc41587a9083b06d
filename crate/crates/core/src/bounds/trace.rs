use num_bigint::BigUint;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ff::{count_rank_at_most, Field, Matrix};

/// Largest Z-space q^{n²} searched by [`TraceBoundMode::BruteForce`].
pub const BRUTE_FORCE_CAP: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceBoundMode {
    /// Maximize over every Z ∈ F_q^{n×n}.
    BruteForce,
    /// Evaluate the single witness Z = Σ_{i≤⌈n/2⌉} e_i e_iᵀ (q = 2 only).
    Witness,
}

fn shifted_ranks_at_most(z: &Matrix, t: usize) -> u64 {
    let f = z.field();
    let n = z.rows();
    f.elements()
        .filter(|&s| {
            let mut shifted = z.clone();
            for i in 0..n {
                shifted.set(i, i, f.add(z.get(i, i), s));
            }
            shifted.rank() <= t
        })
        .count() as u64
}

/// Optimal success probability of a t-query algorithm for tr(M), M ∈ F_q^{n×n}:
/// (1/q)·max_Z |{s ∈ F_q : rank(Z + s·1) ≤ t}|.
///
/// Witness mode returns max(count, 1)/q for the witness Z, a lower bound on
/// the optimum (and always at least the guessing probability 1/q).
pub fn trace_opt_success(n: usize, q: u64, t: usize, mode: TraceBoundMode) -> Result<BigRational> {
    trace_opt_success_capped(n, q, t, mode, BRUTE_FORCE_CAP)
}

pub fn trace_opt_success_capped(n: usize, q: u64, t: usize, mode: TraceBoundMode, cap: u64) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::DimensionMismatch("trace bound needs n ≥ 1".into()));
    }
    let field = Field::of_order(q)?;
    let best = match mode {
        TraceBoundMode::BruteForce => {
            let size = Matrix::space_size(&field, n, n)
                .filter(|&s| s <= cap)
                .ok_or_else(|| Error::CapExceeded(format!("q^(n^2) = {q}^{} exceeds brute-force cap {cap}", n * n)))?;
            (0..size).into_par_iter().map(|idx| shifted_ranks_at_most(&Matrix::from_index(&field, n, n, idx), t)).max().unwrap_or(0)
        }
        TraceBoundMode::Witness => {
            if q != 2 {
                return Err(Error::Unsupported("witness mode is defined for q = 2".into()));
            }
            let ell = n.div_ceil(2);
            let z = Matrix::from_fn(&field, n, n, |i, j| if i == j && i < ell { field.one() } else { field.zero() });
            shifted_ranks_at_most(&z, t).max(1)
        }
    };
    Ok(BigRational::new(best.into(), q.into()))
}

/// Probability of identifying a uniformly random M ∈ F_q^{m×n} exactly with
/// t queries: |R_t| / q^{mn}.
pub fn oracle_discrimination_success(m: usize, n: usize, q: u64, t: usize) -> BigRational {
    let total = BigUint::from(q).pow((m * n) as u32);
    BigRational::new(count_rank_at_most(m, n, t, q).into(), total.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn trace_examples() {
        assert_eq!(trace_opt_success(2, 2, 1, TraceBoundMode::BruteForce).unwrap(), r(1, 1));
        assert_eq!(trace_opt_success(3, 2, 1, TraceBoundMode::BruteForce).unwrap(), r(1, 2));
        assert_eq!(trace_opt_success(2, 2, 0, TraceBoundMode::BruteForce).unwrap(), r(1, 2));
        assert!(trace_opt_success(5, 2, 1, TraceBoundMode::BruteForce).is_err());
    }

    #[test]
    fn witness_reaches_one_at_half_n() {
        for n in 1usize..=12 {
            let t = n.div_ceil(2);
            assert!(trace_opt_success(n, 2, t, TraceBoundMode::Witness).unwrap().is_one());
            if t > 0 && n > 1 {
                assert_eq!(trace_opt_success(n, 2, t - 1, TraceBoundMode::Witness).unwrap(), r(1, 2));
            }
        }
        for n in 1usize..=4 {
            let t = n.div_ceil(2);
            assert!(trace_opt_success(n, 2, t, TraceBoundMode::BruteForce).unwrap().is_one());
        }
    }

    #[test]
    fn discrimination_examples() {
        let curve: Vec<_> = (0..=2).map(|t| oracle_discrimination_success(2, 2, 2, t)).collect();
        assert_eq!(curve, vec![r(1, 16), r(10, 16), r(1, 1)]);
        assert_eq!(oracle_discrimination_success(2, 3, 3, 0), r(1, 729));
        for (m, n, q) in [(3usize, 2usize, 5u64), (4, 4, 2)] {
            let mut prev = r(0, 1);
            for t in 0..=m.min(n) {
                let v = oracle_discrimination_success(m, n, q, t);
                assert!(v >= prev);
                prev = v;
            }
            assert!(prev.is_one());
        }
    }
}
