//! Query algorithms and reductions. Each one sees the hidden matrix only
//! through an oracle and reports the queries it spent.

mod identical;
mod majority;
mod parities;
mod regression;
mod trace;

pub use identical::{default_trials, false_positive_bound, identical_columns, identical_rows_randomized};
pub use majority::{majority_columns, majority_rows, BinaryRealOracle, Majority};
pub use parities::{column_parities, row_parities, vmv_column_parities_classical, vmv_parities_classical};
pub use regression::{
    fullrank_via_solver, pad_for_rank_reduction, FullRankOutcome, LinearSolver, MvAccess, PaddedOracle, PaddedVmvOracle, Padding,
    ReferenceSolver, DEFAULT_RETRY_CAP,
};
pub use trace::{quantum_trace_f2, TraceOutcome};

use crate::ff::Vector;

/// One classical query and its response.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranscriptEntry<V = Vector> {
    pub query: V,
    pub response: V,
}

#[derive(Clone, Debug)]
pub struct AlgorithmResult<A, V = Vector> {
    pub answer: A,
    /// Oracle counter delta over the run.
    pub queries_used: u64,
    /// Classical (query, response) pairs; empty for quantum runs.
    pub transcript: Vec<TranscriptEntry<V>>,
}
