//! Scalar abstractions shared by the simulator, the fitting code and the
//! linear-programming feasibility check.

use std::fmt::Debug;
use std::iter::Sum;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, Signed};

/// Real scalar type backing complex amplitudes and least-squares fits.
pub trait Real: Float + FloatConst + NumAssign + FromPrimitive + Sum + Debug + Send + Sync + 'static {
    fn from_f64_lossy(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).unwrap_or_else(Self::nan)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Ordered field used by the simplex feasibility solver.
///
/// `BigRational` gives exact answers; `f64` is accepted with an absolute
/// tolerance for quick exploratory runs.
pub trait LpScalar: Clone + Debug + PartialOrd + Signed {
    /// Whether the value should be treated as zero by pivoting rules.
    fn is_negligible(&self) -> bool;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;
}

impl LpScalar for BigRational {
    fn is_negligible(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl LpScalar for f64 {
    fn is_negligible(&self) -> bool {
        self.abs() < 1e-11
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}
