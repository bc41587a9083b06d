use num_complex::Complex64;
use rand::Rng;

use super::AlgorithmResult;
use crate::error::{Error, Result};
use crate::ff::{unit_vector, Vector};
use crate::oracles::{Flavor, Oracle, OracleKind};
use crate::qsim::{Label, OutcomeLabel, RegisterLayout, SimOptions};
use crate::StateVector;

#[derive(Clone, Debug, PartialEq)]
pub struct TraceOutcome {
    /// Measured trace bit.
    pub trace: bool,
    /// Probability of the reported outcome.
    pub probability: f64,
}

/// Computes tr(M) for M ∈ F₂^{n×n} with ⌈n/2⌉ queries and probability 1.
///
/// With ℓ = ⌈n/2⌉ and M' the (possibly zero-padded) 2ℓ×2ℓ matrix, query pair
/// i holds |e_i, e_i⟩ on one branch and |e_{ℓ+i}, e_{ℓ+i}⟩ on the other. After
/// ℓ phase queries the relative sign of the branches is (−1)^{tr M}, which a
/// measurement in {|ψ₀⟩, |ψ₁⟩} reads out.
pub fn quantum_trace_f2<R: Rng + ?Sized>(oracle: &Oracle, rng: &mut R) -> Result<AlgorithmResult<TraceOutcome>> {
    let field = oracle.field().clone();
    if field.q() != 2 {
        return Err(Error::Unsupported(format!("trace algorithm needs q = 2, got q = {}", field.q())));
    }
    if oracle.kind() != OracleKind::Mv {
        return Err(Error::Oracle("trace algorithm needs MV access".into()));
    }
    let (m, n) = oracle.dims();
    if m != n {
        return Err(Error::NotSquare { rows: m, cols: n });
    }
    let ell = n.div_ceil(2);
    let pad = 2 * ell - n;
    // per pair: x (n), x-pad, y (n), y-pad; M' acts only on the unpadded parts
    let sizes: Vec<usize> = (0..ell).flat_map(|_| [n, pad, n, pad]).collect();
    let layout = RegisterLayout::new(&field, &sizes);

    let branch = |offset: usize| -> Label {
        let mut l = Vec::with_capacity(layout.num_symbols());
        for i in 0..ell {
            let e: Vector = unit_vector(&field, 2 * ell, offset + i);
            l.extend_from_slice(&e[..n]);
            l.extend_from_slice(&e[n..]);
            l.extend_from_slice(&e[..n]);
            l.extend_from_slice(&e[n..]);
        }
        l
    };
    let (b0, b1) = (branch(0), branch(ell));
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let opts = SimOptions::framed();
    let psi = |sign: f64| {
        StateVector::superposition(&layout, &[(b0.clone(), Complex64::new(h, 0.0)), (b1.clone(), Complex64::new(sign * h, 0.0))], &opts)
    };
    let (psi0, psi1) = (psi(1.0)?, psi(-1.0)?);

    let before = oracle.queries();
    let mut state = psi0.clone();
    for i in 0..ell {
        let (x, y) = (4 * i, 4 * i + 2);
        match oracle.flavor() {
            Flavor::Phase => oracle.apply(&mut state, &[x, y], false)?,
            Flavor::Standard => {
                state.apply_qft(y, true)?;
                oracle.apply(&mut state, &[x, y], false)?;
                state.apply_qft(y, false)?;
            }
        }
    }
    let queries_used = oracle.queries() - before;

    let outcome = state.measure_in_basis(&[psi0, psi1], rng)?;
    let trace = match outcome.label {
        OutcomeLabel::Basis(i) => i == 1,
        _ => return Err(Error::Oracle("trace measurement left the {ψ₀, ψ₁} span".into())),
    };
    Ok(AlgorithmResult { answer: TraceOutcome { trace, probability: outcome.probability }, queries_used, transcript: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::{Field, Matrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn run(m: &Matrix, rng: &mut ChaCha8Rng) -> AlgorithmResult<TraceOutcome> {
        quantum_trace_f2(&Oracle::mv_standard(m.clone()), rng).unwrap()
    }

    #[test]
    fn single_entry() {
        let f = Field::prime(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let r = run(&Matrix::from_rows(&f, &[vec![1]]).unwrap(), &mut rng);
        assert!(r.answer.trace);
        assert_eq!(r.queries_used, 1);
        assert!((r.answer.probability - 1.0).abs() < 1e-9);
    }

    #[test]
    fn all_2x2_and_3x3() {
        let f = Field::prime(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [2, 3] {
            for m in Matrix::all(&f, n, n).unwrap() {
                let r = run(&m, &mut rng);
                assert_eq!(r.answer.trace, !m.trace().unwrap().is_zero());
                assert!((r.answer.probability - 1.0).abs() < 1e-9);
                assert_eq!(r.queries_used, n.div_ceil(2) as u64);
            }
        }
    }

    #[test]
    fn phase_oracle_works_directly() {
        let f = Field::prime(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m = Matrix::from_rows(&f, &[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]).unwrap();
        let r = quantum_trace_f2(&Oracle::mv_phase(m), &mut rng).unwrap();
        assert!(r.answer.trace);
        assert_eq!(r.queries_used, 2);
    }

    #[test]
    fn rejects_other_fields_and_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f3 = Field::prime(3).unwrap();
        assert!(matches!(quantum_trace_f2(&Oracle::mv_standard(Matrix::identity(&f3, 2)), &mut rng), Err(Error::Unsupported(_))));
        let f2 = Field::prime(2).unwrap();
        assert!(quantum_trace_f2(&Oracle::mv_standard(Matrix::zeros(&f2, 2, 3)), &mut rng).is_err());
    }
}
