pub mod bounds;
pub mod identical;
pub mod majority;
pub mod oracle_check;
pub mod parities;
pub mod solve_reduction;
pub mod symmetrize;
pub mod trace;

/// Binomial standard error of a rate p over `n` trials.
pub(crate) fn binomial_sigma(p: f64, n: u64) -> f64 {
    if n == 0 {
        0.0
    } else {
        (p * (1.0 - p) / n as f64).sqrt()
    }
}
