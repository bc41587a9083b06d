//! Finite-field linear algebra, a quantum state-vector simulator, and query
//! algorithms and lower-bound tools for matrix-vector product oracles.

pub mod algorithms;
pub mod bounds;
pub mod error;
pub mod ff;
pub mod oracles;
pub mod qsim;
pub mod scalar;

pub use error::{Error, Result};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StateVector = qsim::StateVector<f64>;
pub type StateVector32 = qsim::StateVector<f32>;
pub type MeasurementOutcome = qsim::MeasurementOutcome<f64>;
pub type InstanceRng = ChaCha8Rng;

/// Deterministic generator for instance `index` of an experiment seeded by `seed`.
pub fn instance_rng(seed: u64, index: u64) -> InstanceRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
