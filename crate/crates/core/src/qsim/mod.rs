//! State-vector simulation over registers of F_q symbols.
//!
//! Sparse states keep a frame per register, so Fourier transforms and linear
//! queries stay label permutations with phases instead of expanding into
//! q^k terms. Dense states apply every gate explicitly and serve as the
//! reference implementation.

mod circuit;
mod layout;
mod map;
mod measure;
mod state;

pub use circuit::{operator_distance, operator_distance_on, Circuit};
pub use layout::{Label, RegisterLayout};
pub use map::{FnMap, QueryMap};
pub use measure::{MeasurementOutcome, OutcomeLabel, ORTHONORMAL_TOL};
pub use state::{Frame, Representation, SimOptions, StateVector, PRUNE_THRESHOLD};
