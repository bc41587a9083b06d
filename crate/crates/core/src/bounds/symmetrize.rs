//! Acceptance probabilities averaged over matrices of fixed nullity, and the
//! low-degree polynomial fit at abscissae q^d.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ff::{sample_matrix_of_rank, unit_vector, Field, Matrix};
use crate::oracles::Oracle;
use crate::qsim::{RegisterLayout, SimOptions};
use crate::scalar::Real;
use crate::StateVector;

/// Largest space q^{mn} enumerated in exhaustive mode.
pub const EXHAUSTIVE_CAP: u64 = 1 << 16;
/// Minimum samples per nullity in sampled mode.
pub const MIN_SAMPLES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymmetrizeMode {
    Exhaustive,
    Sampled { per_nullity: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProfilePoint {
    /// Nullity d = n − rank.
    pub nullity: usize,
    /// Q(d).
    pub value: f64,
    /// Matrices averaged.
    pub samples: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetrizationProfile {
    pub m: usize,
    pub n: usize,
    pub q: u64,
    /// Nonempty nullity classes in increasing order of d.
    pub points: Vec<ProfilePoint>,
}

impl SymmetrizationProfile {
    pub fn abscissae(&self) -> Vec<f64> {
        self.points.iter().map(|p| (self.q as f64).powi(p.nullity as i32)).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }
}

#[derive(Default, Clone, Copy)]
struct Kahan {
    sum: f64,
    c: f64,
}

impl Kahan {
    fn add(&mut self, v: f64) {
        let y = v - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Q(d) = E_{M ∼ Y_d}[accept(M)] for every nonempty nullity class of
/// m×n matrices over F_q.
pub fn symmetrize_acceptance<A, R>(
    accept: &A,
    m: usize,
    n: usize,
    field: &Field,
    mode: SymmetrizeMode,
    rng: &mut R,
) -> Result<SymmetrizationProfile>
where
    A: Fn(&Matrix) -> f64 + Sync + ?Sized,
    R: Rng + ?Sized,
{
    let max_rank = m.min(n);
    let mut points = Vec::new();
    match mode {
        SymmetrizeMode::Exhaustive => {
            let size = Matrix::space_size(field, m, n)
                .filter(|&s| s <= EXHAUSTIVE_CAP)
                .ok_or_else(|| Error::CapExceeded(format!("q^(mn) exceeds exhaustive cap {EXHAUSTIVE_CAP}")))?;
            let evaluated: Vec<(usize, f64)> = (0..size)
                .into_par_iter()
                .map(|idx| {
                    let a = Matrix::from_index(field, m, n, idx);
                    (n - a.rank(), accept(&a))
                })
                .collect();
            let mut sums = vec![(Kahan::default(), 0u64); n + 1];
            for (d, v) in evaluated {
                sums[d].0.add(v);
                sums[d].1 += 1;
            }
            for (d, (s, c)) in sums.into_iter().enumerate() {
                if c > 0 {
                    points.push(ProfilePoint { nullity: d, value: s.sum / c as f64, samples: c });
                }
            }
        }
        SymmetrizeMode::Sampled { per_nullity } => {
            if per_nullity < MIN_SAMPLES {
                return Err(Error::DimensionMismatch(format!("sampled mode needs at least {MIN_SAMPLES} samples per nullity")));
            }
            for d in (n - max_rank)..=n {
                let matrices: Vec<Matrix> =
                    (0..per_nullity).map(|_| sample_matrix_of_rank(field, m, n, n - d, rng)).collect::<Result<_>>()?;
                let values: Vec<f64> = matrices.par_iter().map(accept).collect();
                let mut s = Kahan::default();
                values.iter().for_each(|&v| s.add(v));
                points.push(ProfilePoint { nullity: d, value: s.sum / per_nullity as f64, samples: per_nullity as u64 });
            }
        }
    }
    Ok(SymmetrizationProfile { m, n, q: field.q() as u64, points })
}

#[derive(Clone, Debug, PartialEq)]
pub enum FitOutcome<T> {
    /// Largest |Q(d) − R(q^d)| for the least-squares R of degree ≤ cap.
    Residual(T),
    /// Fewer than cap + 2 points, so any data fits.
    Vacuous { points: usize, degree_cap: usize },
}

/// Least-squares fit of degree ≤ `degree` through (x, y), in the discrete
/// orthogonal polynomial basis of the points; returns the max residual.
pub fn fit_max_residual<T: Real>(xs: &[T], ys: &[T], degree: usize) -> Result<T> {
    if xs.len() != ys.len() || xs.is_empty() {
        return Err(Error::DimensionMismatch("fit needs equally many x and y values".into()));
    }
    let npts = xs.len();
    // map abscissae to [−1, 1]
    let (lo, hi) = xs.iter().fold((xs[0], xs[0]), |(l, h), &x| (l.min(x), h.max(x)));
    let two = T::from_f64_lossy(2.0);
    let scale = if hi > lo { two / (hi - lo) } else { T::one() };
    let u: Vec<T> = xs.iter().map(|&x| (x - lo) * scale - T::one()).collect();

    let dot = |a: &[T], b: &[T]| a.iter().zip(b).map(|(&x, &y)| x * y).sum::<T>();
    let mut residual = ys.to_vec();
    let mut prev: Vec<T> = vec![T::zero(); npts];
    let mut cur: Vec<T> = vec![T::one(); npts];
    let mut prev_norm = T::one();
    for k in 0..=degree.min(npts - 1) {
        let norm = dot(&cur, &cur);
        if norm <= T::epsilon() {
            break;
        }
        let c = dot(&residual, &cur) / norm;
        for (r, &p) in residual.iter_mut().zip(&cur) {
            *r -= c * p;
        }
        let xp: Vec<T> = u.iter().zip(&cur).map(|(&x, &p)| x * p).collect();
        let alpha = dot(&xp, &cur) / norm;
        let beta = if k == 0 { T::zero() } else { norm / prev_norm };
        let next: Vec<T> = (0..npts).map(|i| (u[i] - alpha) * cur[i] - beta * prev[i]).collect();
        prev = std::mem::replace(&mut cur, next);
        prev_norm = norm;
    }
    Ok(residual.iter().fold(T::zero(), |m, r| m.max(r.abs())))
}

/// Checks whether the profile is fitted by a polynomial of degree
/// ≤ `degree_cap` in q^d.
pub fn low_degree_fit_check<T: Real>(xs: &[T], ys: &[T], degree_cap: usize) -> Result<FitOutcome<T>> {
    if xs.len() < degree_cap + 2 {
        return Ok(FitOutcome::Vacuous { points: xs.len(), degree_cap });
    }
    fit_max_residual(xs, ys, degree_cap).map(FitOutcome::Residual)
}

/// Test circuits with known query counts, for symmetrization runs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BuiltinCircuit {
    /// Accepts with a fixed probability, no queries.
    Constant(f64),
    /// One phase query on (|e₁,e₁⟩ + |e₂,e₂⟩)/√2, then measures that state:
    /// accepts iff M₁₁ = M₂₂ (q = 2, n ≥ 2).
    TraceGuess,
    /// One standard query on |1ⁿ, 0⟩: accepts iff M·1 = 0.
    OnesInKernel,
}

impl BuiltinCircuit {
    pub fn queries(&self) -> usize {
        match self {
            BuiltinCircuit::Constant(_) => 0,
            _ => 1,
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "trace-guess" => Some(Self::TraceGuess),
            "ones-in-kernel" => Some(Self::OnesInKernel),
            "zero-query" => Some(Self::Constant(0.5)),
            _ => name.strip_prefix("constant:").and_then(|c| c.parse().ok()).filter(|c: &f64| (0.0..=1.0).contains(c)).map(Self::Constant),
        }
    }

    /// Acceptance probability on M, by simulation.
    pub fn accept(&self, m: &Matrix) -> Result<f64> {
        let f = m.field().clone();
        let (rows, cols) = (m.rows(), m.cols());
        let oracle = Oracle::mv_standard(m.clone());
        let opts = SimOptions::framed();
        match self {
            BuiltinCircuit::Constant(c) => Ok(*c),
            BuiltinCircuit::TraceGuess => {
                if f.q() != 2 || rows < 2 || cols < 2 {
                    return Err(Error::Unsupported("trace-guess needs q = 2 and at least 2 rows and columns".into()));
                }
                let layout = oracle.layout();
                let branch = |i: usize| [unit_vector(&f, cols, i), unit_vector(&f, rows, i)].concat();
                let h = std::f64::consts::FRAC_1_SQRT_2;
                let psi = StateVector::superposition(
                    &layout,
                    &[(branch(0), Complex64::new(h, 0.0)), (branch(1), Complex64::new(h, 0.0))],
                    &opts,
                )?;
                let mut s = psi.clone();
                s.apply_qft(1, true)?;
                oracle.apply(&mut s, &[0, 1], false)?;
                s.apply_qft(1, false)?;
                Ok(s.inner_product(&psi)?.norm_sqr().clamp(0.0, 1.0))
            }
            BuiltinCircuit::OnesInKernel => {
                let layout = RegisterLayout::new(&f, &[cols, rows]);
                let mut input = vec![f.one(); cols];
                input.extend(vec![f.zero(); rows]);
                let mut s = StateVector::basis_state(&layout, &input, &opts)?;
                oracle.apply(&mut s, &[0, 1], false)?;
                let zero = vec![f.zero(); rows];
                let out = s.register_distribution(1)?;
                Ok(out.get(&zero).copied().unwrap_or(0.0).clamp(0.0, 1.0))
            }
        }
    }
}
