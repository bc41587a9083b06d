//! Exact optimal success probabilities, symmetrized acceptance profiles, and
//! polynomial degree bounds.

mod lp;
mod symmetrize;
mod trace;

pub use lp::{
    find_feasible_point, min_feasible_degree, rank_testing_constraints, unit_interval_constraints, DegreeOutcome, LinearConstraint,
    PointConstraint, Relation,
};
pub use symmetrize::{
    fit_max_residual, low_degree_fit_check, symmetrize_acceptance, BuiltinCircuit, FitOutcome, ProfilePoint, SymmetrizationProfile,
    SymmetrizeMode, EXHAUSTIVE_CAP, MIN_SAMPLES,
};
pub use trace::{oracle_discrimination_success, trace_opt_success, trace_opt_success_capped, TraceBoundMode, BRUTE_FORCE_CAP};
