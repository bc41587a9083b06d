use rand::Rng;

use super::layout::Label;
use super::state::StateVector;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Orthonormality tolerance for user-supplied measurement bases.
pub const ORTHONORMAL_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OutcomeLabel {
    /// A register value from a computational-basis measurement.
    Register(Label),
    /// Position in a supplied basis.
    Basis(usize),
    /// Residual outside the span of a partial basis.
    Other,
}

#[derive(Clone, Debug)]
pub struct MeasurementOutcome<T: Real> {
    pub index: usize,
    pub label: OutcomeLabel,
    pub probability: T,
    /// Born probabilities of every outcome, in index order.
    pub probabilities: Vec<T>,
    /// `None` for the "other" outcome of a partial basis.
    pub post_state: Option<StateVector<T>>,
}

fn sample<T: Real, R: Rng + ?Sized>(probs: &[T], rng: &mut R) -> usize {
    let total: f64 = probs.iter().map(|p| p.to_f64().unwrap_or(0.0)).sum();
    let mut u = rng.gen::<f64>() * total;
    for (i, p) in probs.iter().enumerate() {
        let p = p.to_f64().unwrap_or(0.0);
        if u < p {
            return i;
        }
        u -= p;
    }
    probs.iter().rposition(|p| !p.is_zero()).unwrap_or(0)
}

impl<T: Real> StateVector<T> {
    /// Measures one register in the computational basis. Outcomes are the
    /// register values with nonzero probability, in label order.
    pub fn measure_register<R: Rng + ?Sized>(&self, reg: usize, rng: &mut R) -> Result<MeasurementOutcome<T>> {
        let dist = self.register_distribution(reg)?;
        let labels: Vec<Label> = dist.keys().cloned().collect();
        let probabilities: Vec<T> = dist.values().map(|p| p.min(T::one())).collect();
        let index = sample(&probabilities, rng);
        let mut post = self.clone();
        post.project_register(reg, &labels[index])?;
        Ok(MeasurementOutcome {
            index,
            label: OutcomeLabel::Register(labels[index].clone()),
            probability: probabilities[index],
            probabilities,
            post_state: Some(post),
        })
    }

    /// Measures in an orthonormal family. If the family spans a proper
    /// subspace, the last probability is the residual "other" outcome.
    pub fn measure_in_basis<R: Rng + ?Sized>(&self, basis: &[StateVector<T>], rng: &mut R) -> Result<MeasurementOutcome<T>> {
        let tol = T::from_f64_lossy(ORTHONORMAL_TOL);
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate().skip(i) {
                let ip = a.inner_product(b)?;
                let target = if i == j { T::one() } else { T::zero() };
                let err = (ip - num_complex::Complex::new(target, T::zero())).norm();
                if err > tol {
                    return Err(Error::NotOrthonormal(err.to_f64().unwrap_or(f64::NAN)));
                }
            }
        }
        let mut probabilities: Vec<T> =
            basis.iter().map(|b| b.inner_product(self).map(|c| c.norm_sqr().min(T::one()))).collect::<Result<_>>()?;
        let covered: T = probabilities.iter().copied().sum();
        let residual = (self.norm_sqr() - covered).max(T::zero());
        let partial = residual > tol;
        if partial {
            probabilities.push(residual);
        }
        let index = sample(&probabilities, rng);
        let (label, post_state) = if partial && index == basis.len() {
            (OutcomeLabel::Other, None)
        } else {
            (OutcomeLabel::Basis(index), Some(basis[index].clone()))
        };
        Ok(MeasurementOutcome { index, label, probability: probabilities[index], probabilities, post_state })
    }
}
