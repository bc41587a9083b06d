use num_rational::BigRational;
use num_traits::One;
use rand::Rng;

use super::{AlgorithmResult, TranscriptEntry};
use crate::error::{Error, Result};
use crate::ff::{random_vector, Field, Vector};
use crate::oracles::{Flavor, Oracle, OracleKind, TransposedMv};
use crate::qsim::{RegisterLayout, SimOptions};
use crate::StateVector;

/// 2⌈log₂ k⌉ random queries for k rows (or columns).
pub fn default_trials(k: usize) -> usize {
    if k <= 1 {
        0
    } else {
        2 * (usize::BITS - (k - 1).leading_zeros()) as usize
    }
}

/// Union bound C(k, 2)·q^{−trials} on the false-positive probability.
pub fn false_positive_bound(k: usize, q: u64, trials: usize) -> BigRational {
    let pairs = num_bigint::BigInt::from(k) * num_bigint::BigInt::from(k.saturating_sub(1)) / 2;
    let den = num_bigint::BigInt::from(q).pow(trials as u32);
    let r = BigRational::new(pairs, den);
    if r > BigRational::one() {
        BigRational::one()
    } else {
        r
    }
}

/// True iff some pair of response coordinates agrees on every trial.
fn collision(responses: &[Vector], len: usize) -> bool {
    let mut columns: Vec<Vec<u32>> = (0..len).map(|i| responses.iter().map(|r| r[i].index()).collect()).collect();
    columns.sort();
    columns.windows(2).any(|w| w[0] == w[1])
}

fn decide<Q, R>(
    field: &Field,
    in_len: usize,
    out_len: usize,
    trials: Option<usize>,
    rng: &mut R,
    mut query: Q,
) -> Result<(bool, Vec<TranscriptEntry>)>
where
    Q: FnMut(&[crate::ff::FieldElem]) -> Result<Vector>,
    R: Rng + ?Sized,
{
    let trials = trials.unwrap_or_else(|| default_trials(out_len));
    let mut transcript = Vec::with_capacity(trials);
    for _ in 0..trials {
        let v = random_vector(field, in_len, rng);
        let response = query(&v)?;
        transcript.push(TranscriptEntry { query: v, response });
    }
    let responses: Vec<Vector> = transcript.iter().map(|t| t.response.clone()).collect();
    Ok((out_len >= 2 && collision(&responses, out_len), transcript))
}

/// Decides whether M has two identical rows from random products M·v.
/// One-sided: identical rows are always reported.
pub fn identical_rows_randomized<R: Rng + ?Sized>(oracle: &Oracle, trials: Option<usize>, rng: &mut R) -> Result<AlgorithmResult<bool>> {
    if oracle.kind() != OracleKind::Mv {
        return Err(Error::Oracle("identical rows needs MV access".into()));
    }
    let (m, n) = oracle.dims();
    let before = oracle.queries();
    let (answer, transcript) = decide(oracle.field(), n, m, trials, rng, |v| oracle.mv_query(v))?;
    Ok(AlgorithmResult { answer, queries_used: oracle.queries() - before, transcript })
}

/// Identical columns, with each random product Mᵀ·v computed by the
/// one-query transpose circuit on a basis state.
pub fn identical_columns<R: Rng + ?Sized>(oracle: &Oracle, trials: Option<usize>, rng: &mut R) -> Result<AlgorithmResult<bool>> {
    if oracle.flavor() != Flavor::Standard {
        return Err(Error::Oracle("identical columns needs a standard MV oracle".into()));
    }
    let sim = TransposedMv::new(oracle)?;
    let f = oracle.field().clone();
    let (m, n) = oracle.dims();
    let layout = RegisterLayout::new(&f, &[m, n]);
    let before = oracle.queries();
    let (answer, transcript) = decide(&f, m, n, trials, rng, |v| {
        let mut input = v.to_vec();
        input.extend(vec![f.zero(); n]);
        let mut state = StateVector::basis_state(&layout, &input, &SimOptions::framed())?;
        sim.apply_on(&mut state, 0, 1, false)?;
        let dist = state.register_distribution(1)?;
        dist.into_iter()
            .find(|(_, p)| *p > 1.0 - 1e-9)
            .map(|(l, _)| l)
            .ok_or_else(|| Error::Oracle("transpose circuit output is not a basis state".into()))
    })?;
    Ok(AlgorithmResult { answer, queries_used: oracle.queries() - before, transcript })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::Matrix;
    use num_traits::ToPrimitive;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trial_defaults_and_bound() {
        assert_eq!(default_trials(1), 0);
        assert_eq!(default_trials(2), 2);
        assert_eq!(default_trials(8), 6);
        assert_eq!(default_trials(9), 8);
        let b = false_positive_bound(8, 2, 6);
        assert_eq!(b, BigRational::new(28.into(), 64.into()));
        assert_eq!(b.to_f64().unwrap(), 0.5 - 1.0 / 16.0);
    }

    #[test]
    fn duplicated_rows_always_found() {
        let f = Field::prime(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let mut a = Matrix::random(&f, 8, 16, &mut rng);
            let i = rng.gen_range(0..8);
            let j = (i + rng.gen_range(1..8)) % 8;
            for c in 0..16 {
                a.set(j, c, a.get(i, c));
            }
            let o = Oracle::mv_standard(a.clone());
            let r = identical_rows_randomized(&o, None, &mut rng).unwrap();
            assert!(r.answer);
            assert_eq!(r.queries_used, 6);
            let c = identical_columns(&Oracle::mv_standard(a.transpose()), None, &mut rng).unwrap();
            assert!(c.answer);
            assert_eq!(c.queries_used, 6);
        }
    }

    #[test]
    fn single_row_has_no_pair() {
        let f = Field::prime(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let o = Oracle::mv_standard(Matrix::zeros(&f, 1, 4));
        assert!(!identical_rows_randomized(&o, None, &mut rng).unwrap().answer);
    }
}
