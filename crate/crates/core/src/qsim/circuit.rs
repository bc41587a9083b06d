use rayon::prelude::*;

use super::layout::{Label, RegisterLayout};
use super::state::{SimOptions, StateVector};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A unitary acting in place on states of one layout.
pub trait Circuit<T: Real>: Sync {
    fn apply(&self, state: &mut StateVector<T>) -> Result<()>;
}

impl<T: Real, F> Circuit<T> for F
where
    F: Fn(&mut StateVector<T>) -> Result<()> + Sync,
{
    fn apply(&self, state: &mut StateVector<T>) -> Result<()> {
        self(state)
    }
}

/// max over all basis inputs |v⟩ of ‖A|v⟩ − B|v⟩‖.
pub fn operator_distance<T: Real>(a: &dyn Circuit<T>, b: &dyn Circuit<T>, layout: &RegisterLayout, options: &SimOptions) -> Result<T> {
    let inputs: Vec<Label> = layout.basis_labels()?.collect();
    operator_distance_on(a, b, layout, &inputs, options)
}

/// As [`operator_distance`], restricted to the given basis inputs.
pub fn operator_distance_on<T: Real>(
    a: &dyn Circuit<T>,
    b: &dyn Circuit<T>,
    layout: &RegisterLayout,
    inputs: &[Label],
    options: &SimOptions,
) -> Result<T> {
    let dists: Vec<T> = inputs
        .par_iter()
        .map(|label| {
            let start = StateVector::basis_state(layout, label, options)?;
            let (mut sa, mut sb) = (start.clone(), start);
            a.apply(&mut sa)?;
            b.apply(&mut sb)?;
            if sa.layout() != layout || sb.layout() != layout {
                return Err(Error::DimensionMismatch("circuit changed the layout".into()));
            }
            sa.distance(&sb)
        })
        .collect::<Result<_>>()?;
    Ok(dists.into_iter().fold(T::zero(), T::max))
}
