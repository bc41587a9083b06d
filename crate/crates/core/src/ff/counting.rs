//! Exact subspace and rank counts over F_q, and uniform sampling by rank.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;

use super::field::Field;
use super::matrix::Matrix;
use crate::error::{Error, Result};

fn q_pow(q: u64, e: usize) -> BigUint {
    BigUint::from(q).pow(e as u32)
}

/// Gaussian binomial coefficient (ℓ choose m)_q: the number of
/// m-dimensional subspaces of F_q^ℓ. Zero when m > ℓ.
pub fn gaussian_binomial(l: usize, m: usize, q: u64) -> BigUint {
    if m > l {
        return BigUint::zero();
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..m {
        num *= q_pow(q, l) - q_pow(q, i);
        den *= q_pow(q, m) - q_pow(q, i);
    }
    num / den
}

/// Number of m-dimensional subspaces of F_q^ℓ containing a fixed
/// k-dimensional subspace.
pub fn subspaces_containing(l: usize, m: usize, k: usize, q: u64) -> BigUint {
    if k > m || m > l {
        return BigUint::zero();
    }
    gaussian_binomial(l - k, m - k, q)
}

/// Number of m×n matrices of rank exactly r over F_q:
/// (n choose r)_q · ∏_{i<r} (q^m − q^i).
pub fn count_rank_matrices(m: usize, n: usize, r: usize, q: u64) -> BigUint {
    if r > m.min(n) {
        return BigUint::zero();
    }
    let mut injections = BigUint::one();
    for i in 0..r {
        injections *= q_pow(q, m) - q_pow(q, i);
    }
    gaussian_binomial(n, r, q) * injections
}

/// Number of m×n matrices of rank at most t, i.e. |R_t|.
pub fn count_rank_at_most(m: usize, n: usize, t: usize, q: u64) -> BigUint {
    (0..=t.min(m.min(n))).map(|r| count_rank_matrices(m, n, r, q)).sum()
}

/// |GL_n(F_q)|.
pub fn general_linear_order(n: usize, q: u64) -> BigUint {
    count_rank_matrices(n, n, n, q)
}

fn sample_full_rank<R: Rng + ?Sized>(field: &Field, rows: usize, cols: usize, rng: &mut R) -> Matrix {
    loop {
        let m = Matrix::random(field, rows, cols, rng);
        if m.rank() == rows.min(cols) {
            return m;
        }
    }
}

/// Uniform sample from the m×n matrices of rank exactly r.
///
/// Draws U (m×r) and V (r×n) uniformly among full-rank matrices and returns
/// U·V; every rank-r matrix has exactly |GL_r(F_q)| such factorizations.
pub fn sample_matrix_of_rank<R: Rng + ?Sized>(field: &Field, m: usize, n: usize, r: usize, rng: &mut R) -> Result<Matrix> {
    if r > m.min(n) {
        return Err(Error::DimensionMismatch(format!("rank {r} impossible for a {m}x{n} matrix")));
    }
    if r == 0 {
        return Ok(Matrix::zeros(field, m, n));
    }
    let u = sample_full_rank(field, m, r, rng);
    let v = sample_full_rank(field, r, n, rng);
    u.mul(&v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;

    fn enumerate_subspaces(l: usize, q: u64) -> BTreeMap<usize, usize> {
        // distinct row spaces of all l x l matrices, keyed by dimension
        let f = Field::of_order(q).unwrap();
        let mut spaces = std::collections::BTreeSet::new();
        for m in Matrix::all(&f, l, l).unwrap() {
            // canonical form: the set of all vectors in the row space
            let t = m.transpose();
            let mut span = std::collections::BTreeSet::new();
            let total = q.pow(l as u32);
            for idx in 0..total {
                let coeffs = Matrix::from_index(&f, l, 1, idx).column(0);
                span.insert(t.mul_vec(&coeffs).unwrap());
            }
            spaces.insert(span);
        }
        let mut by_dim = BTreeMap::new();
        for s in spaces {
            let dim = (s.len() as f64).log(q as f64).round() as usize;
            *by_dim.entry(dim).or_insert(0) += 1;
        }
        by_dim
    }

    #[test]
    fn gaussian_binomial_against_enumeration() {
        let by2 = enumerate_subspaces(2, 2);
        assert_eq!(by2[&1], 3);
        assert_eq!(gaussian_binomial(2, 1, 2), BigUint::from(3u32));
        let by3 = enumerate_subspaces(3, 2);
        assert_eq!(by3[&1], 7);
        assert_eq!(gaussian_binomial(3, 1, 2), BigUint::from(7u32));
        for (&d, &count) in &by3 {
            assert_eq!(gaussian_binomial(3, d, 2), BigUint::from(count));
        }
        let by2q3 = enumerate_subspaces(2, 3);
        for (&d, &count) in &by2q3 {
            assert_eq!(gaussian_binomial(2, d, 3), BigUint::from(count));
        }
        for l in 0..6 {
            assert_eq!(gaussian_binomial(l, 0, 5), BigUint::one());
        }
        assert!(gaussian_binomial(2, 3, 2).is_zero());
    }

    #[test]
    fn containing_count_small_case() {
        // 2-dim subspaces of F2^3 containing a fixed line: (2 choose 1)_2 = 3
        assert_eq!(subspaces_containing(3, 2, 1, 2), BigUint::from(3u32));
    }

    #[test]
    fn rank_counts_against_enumeration() {
        for (q, m, n) in [(2u64, 2, 2), (2, 2, 3), (3, 2, 2), (2, 3, 3), (4, 2, 2)] {
            let f = Field::of_order(q).unwrap();
            let mut hist = vec![0u64; m.min(n) + 1];
            for a in Matrix::all(&f, m, n).unwrap() {
                hist[a.rank()] += 1;
            }
            for (r, &c) in hist.iter().enumerate() {
                assert_eq!(count_rank_matrices(m, n, r, q), BigUint::from(c), "q={q} {m}x{n} r={r}");
            }
        }
        assert_eq!(count_rank_matrices(2, 2, 1, 2), BigUint::from(9u32));
        assert_eq!(count_rank_matrices(2, 2, 2, 2), BigUint::from(6u32));
        assert_eq!(count_rank_matrices(5, 3, 0, 7), BigUint::one());
    }

    #[test]
    fn rank_counts_sum_to_space_size() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16] {
            for m in 1..=8 {
                for n in 1..=8 {
                    if (q as f64).powi((m * n) as i32) > 65536.0 {
                        continue;
                    }
                    let total: BigUint = (0..=m.min(n)).map(|r| count_rank_matrices(m, n, r, q)).sum();
                    assert_eq!(total, q_pow(q, m * n));
                }
            }
        }
    }

    #[test]
    fn sampled_ranks_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for q in [2u64, 3, 4] {
            let f = Field::of_order(q).unwrap();
            for r in 0..=3 {
                for _ in 0..20 {
                    let m = sample_matrix_of_rank(&f, 3, 4, r, &mut rng).unwrap();
                    assert_eq!(m.rank(), r);
                }
            }
            assert!(Matrix::zeros(&f, 3, 4) == sample_matrix_of_rank(&f, 3, 4, 0, &mut rng).unwrap());
        }
        let f = Field::prime(2).unwrap();
        assert!(sample_matrix_of_rank(&f, 2, 2, 3, &mut rng).is_err());
    }

    #[test]
    fn invertible_2x2_sampling_is_uniform() {
        let f = Field::prime(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let n = 60_000;
        let mut counts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        for _ in 0..n {
            let m = sample_matrix_of_rank(&f, 2, 2, 2, &mut rng).unwrap();
            *counts.entry(m.entries().iter().map(|e| e.index()).collect()).or_default() += 1;
        }
        assert_eq!(counts.len(), 6);
        let expected = n as f64 / 6.0;
        let sigma = (n as f64 * (1.0 / 6.0) * (5.0 / 6.0)).sqrt();
        let mut chi2 = 0.0;
        for &c in counts.values() {
            assert!((c as f64 - expected).abs() < 3.0 * sigma);
            chi2 += (c as f64 - expected).powi(2) / expected;
        }
        // chi-square, 5 degrees of freedom, 0.999 quantile
        assert!(chi2 < 20.52, "chi2 = {chi2}");
    }
}
