use super::{AlgorithmResult, TranscriptEntry};
use crate::error::{Error, Result};
use crate::ff::{unit_vector, Field, Vector};
use crate::oracles::{Flavor, Oracle, OracleKind, TransposedMv};
use crate::qsim::{RegisterLayout, SimOptions};
use crate::StateVector;

fn require_standard_mv(oracle: &Oracle) -> Result<()> {
    if oracle.kind() == OracleKind::Mv && oracle.flavor() == Flavor::Standard {
        Ok(())
    } else {
        Err(Error::Oracle("needs a standard MV oracle".into()))
    }
}

/// Reads register `reg`, which must hold a single basis value.
fn deterministic_readout(state: &StateVector, reg: usize) -> Result<Vector> {
    let dist = state.register_distribution(reg)?;
    match dist.iter().find(|(_, &p)| p > 1.0 - 1e-9) {
        Some((label, _)) => Ok(label.clone()),
        None => Err(Error::Oracle("readout register is not in a basis state".into())),
    }
}

fn ones(field: &Field, len: usize) -> Vector {
    vec![field.one(); len]
}

/// M·1ⁿ (the row parities over F₂) from one standard query on |1ⁿ, 0ᵐ⟩.
pub fn row_parities(oracle: &Oracle) -> Result<AlgorithmResult<Vector>> {
    require_standard_mv(oracle)?;
    let f = oracle.field().clone();
    let (m, n) = oracle.dims();
    let layout = oracle.layout();
    let mut input = ones(&f, n);
    input.extend(vec![f.zero(); m]);
    let mut state = StateVector::basis_state(&layout, &input, &SimOptions::framed())?;
    let before = oracle.queries();
    oracle.apply(&mut state, &[0, 1], false)?;
    let answer = deterministic_readout(&state, 1)?;
    Ok(AlgorithmResult { answer, queries_used: oracle.queries() - before, transcript: Vec::new() })
}

/// Mᵀ·1ᵐ (the column parities over F₂) from one query, through the
/// transpose simulation.
pub fn column_parities(oracle: &Oracle) -> Result<AlgorithmResult<Vector>> {
    let sim = TransposedMv::new(oracle)?;
    let f = oracle.field().clone();
    let (m, n) = oracle.dims();
    let layout = RegisterLayout::new(&f, &[m, n]);
    let mut input = ones(&f, m);
    input.extend(vec![f.zero(); n]);
    let mut state = StateVector::basis_state(&layout, &input, &SimOptions::framed())?;
    let before = oracle.queries();
    sim.apply_on(&mut state, 0, 1, false)?;
    let answer = deterministic_readout(&state, 1)?;
    Ok(AlgorithmResult { answer, queries_used: oracle.queries() - before, transcript: Vec::new() })
}

/// Row parities from m classical VMV queries (x, y) = (1ⁿ, e_i).
pub fn vmv_parities_classical(oracle: &Oracle) -> Result<AlgorithmResult<Vector>> {
    vmv_sums(oracle, false)
}

/// Column parities from n classical VMV queries (x, y) = (e_j, 1ᵐ).
pub fn vmv_column_parities_classical(oracle: &Oracle) -> Result<AlgorithmResult<Vector>> {
    vmv_sums(oracle, true)
}

fn vmv_sums(oracle: &Oracle, columns: bool) -> Result<AlgorithmResult<Vector>> {
    let f = oracle.field().clone();
    let (m, n) = oracle.dims();
    let before = oracle.queries();
    let count = if columns { n } else { m };
    let mut answer = Vec::with_capacity(count);
    let mut transcript = Vec::with_capacity(count);
    for i in 0..count {
        let (x, y) = if columns { (unit_vector(&f, n, i), ones(&f, m)) } else { (ones(&f, n), unit_vector(&f, m, i)) };
        let r = oracle.vmv_query(&x, &y)?;
        answer.push(r);
        let mut query = x;
        query.extend(y);
        transcript.push(TranscriptEntry { query, response: vec![r] });
    }
    Ok(AlgorithmResult { answer, queries_used: oracle.queries() - before, transcript })
}

#[cfg(test)]
fn row_sums(m: &crate::ff::Matrix) -> Vector {
    m.mul_vec(&ones(m.field(), m.cols())).expect("ones vector has matching length")
}
