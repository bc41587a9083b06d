//! Full-rank testing through a linear-system solver.
//!
//! M ∈ F_q^{n×n} is padded to A = [[a, uᵀ], [v, M]] with random a, u, v. When A
//! is invertible, (A⁻¹)₁₁ = det M / det A, so the first coordinate of the
//! solution of A·x = e₁ is nonzero exactly when M is full rank.

use std::sync::atomic::{AtomicU64, Ordering};

use rand::Rng;

use super::AlgorithmResult;
use crate::error::{Error, Result};
use crate::ff::{random_vector, unit_vector, Field, FieldElem, Matrix, Vector};
use crate::oracles::{Oracle, OracleKind};

/// Paddings tried before the reduction gives up.
pub const DEFAULT_RETRY_CAP: usize = 8;

/// Classical MV access to a square or rectangular matrix.
pub trait MvAccess {
    fn field(&self) -> &Field;
    fn dims(&self) -> (usize, usize);
    fn mv(&self, x: &[FieldElem]) -> Result<Vector>;
}

impl MvAccess for Oracle {
    fn field(&self) -> &Field {
        Oracle::field(self)
    }

    fn dims(&self) -> (usize, usize) {
        Oracle::dims(self)
    }

    fn mv(&self, x: &[FieldElem]) -> Result<Vector> {
        self.mv_query(x)
    }
}

/// The random border (a, u, v) of a padded matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Padding {
    pub a: FieldElem,
    pub u: Vector,
    pub v: Vector,
}

impl Padding {
    pub fn random<R: Rng + ?Sized>(field: &Field, n: usize, rng: &mut R) -> Self {
        let a = field.elem(rng.gen_range(0..field.q() as u64)).expect("below q");
        Padding { a, u: random_vector(field, n, rng), v: random_vector(field, n, rng) }
    }
}

/// MV access to A = [[a, uᵀ], [v, M]], one M-query per A-query.
pub struct PaddedOracle<'a> {
    inner: &'a Oracle,
    padding: Padding,
    counter: AtomicU64,
}

impl<'a> PaddedOracle<'a> {
    pub fn new(inner: &'a Oracle, padding: Padding) -> Result<Self> {
        if inner.kind() != OracleKind::Mv {
            return Err(Error::Oracle("padding needs MV access".into()));
        }
        let (m, n) = inner.dims();
        if m != n {
            return Err(Error::NotSquare { rows: m, cols: n });
        }
        if padding.u.len() != n || padding.v.len() != n {
            return Err(Error::DimensionMismatch("padding vectors must have length n".into()));
        }
        Ok(PaddedOracle { inner, padding, counter: AtomicU64::new(0) })
    }

    pub fn padding(&self) -> &Padding {
        &self.padding
    }

    pub fn queries(&self) -> u64 {
        self.counter.load(Ordering::SeqCst)
    }
}

impl MvAccess for PaddedOracle<'_> {
    fn field(&self) -> &Field {
        self.inner.field()
    }

    fn dims(&self) -> (usize, usize) {
        let n = self.inner.dims().0 + 1;
        (n, n)
    }

    fn mv(&self, x: &[FieldElem]) -> Result<Vector> {
        let n = self.inner.dims().1;
        if x.len() != n + 1 {
            return Err(Error::DimensionMismatch(format!("query of length {}, expected {}", x.len(), n + 1)));
        }
        let f = self.field();
        let (x0, rest) = (x[0], &x[1..]);
        let mx = self.inner.mv_query(rest)?;
        self.counter.fetch_add(1, Ordering::SeqCst);
        let Padding { a, u, v } = &self.padding;
        let mut out = Vec::with_capacity(n + 1);
        out.push(f.add(f.mul(*a, x0), f.dot(u, rest)));
        out.extend(v.iter().zip(mx).map(|(&vi, mi)| f.add(f.mul(x0, vi), mi)));
        Ok(out)
    }
}

/// VMV access to the padded A, one M-query per A-query:
/// yᵀAx = a·y₀x₀ + y₀·uᵀx₁ + (y₁ᵀv)·x₀ + y₁ᵀMx₁.
pub struct PaddedVmvOracle<'a> {
    inner: &'a Oracle,
    padding: Padding,
    counter: AtomicU64,
}

impl<'a> PaddedVmvOracle<'a> {
    pub fn new(inner: &'a Oracle, padding: Padding) -> Result<Self> {
        if inner.kind() != OracleKind::Vmv {
            return Err(Error::Oracle("VMV padding needs a VMV oracle".into()));
        }
        let (m, n) = inner.dims();
        if m != n {
            return Err(Error::NotSquare { rows: m, cols: n });
        }
        if padding.u.len() != n || padding.v.len() != n {
            return Err(Error::DimensionMismatch("padding vectors must have length n".into()));
        }
        Ok(PaddedVmvOracle { inner, padding, counter: AtomicU64::new(0) })
    }

    pub fn queries(&self) -> u64 {
        self.counter.load(Ordering::SeqCst)
    }

    pub fn vmv(&self, x: &[FieldElem], y: &[FieldElem]) -> Result<FieldElem> {
        let n = self.inner.dims().0;
        if x.len() != n + 1 || y.len() != n + 1 {
            return Err(Error::DimensionMismatch(format!("queries must have length {}", n + 1)));
        }
        let f = self.inner.field();
        let core = self.inner.vmv_query(&x[1..], &y[1..])?;
        self.counter.fetch_add(1, Ordering::SeqCst);
        let Padding { a, u, v } = &self.padding;
        let t0 = f.mul(*a, f.mul(y[0], x[0]));
        let t1 = f.mul(y[0], f.dot(u, &x[1..]));
        let t2 = f.mul(f.dot(&y[1..], v), x[0]);
        Ok(f.add(f.add(t0, t1), f.add(t2, core)))
    }
}

/// Pads an MV oracle over M with a fresh random border.
pub fn pad_for_rank_reduction<'a, R: Rng + ?Sized>(oracle: &'a Oracle, rng: &mut R) -> Result<PaddedOracle<'a>> {
    let n = oracle.dims().1;
    PaddedOracle::new(oracle, Padding::random(oracle.field(), n, rng))
}

/// Black-box solver for A·x = b given MV access to A. `Ok(None)` reports
/// that A is singular.
pub trait LinearSolver {
    fn solve(&self, access: &dyn MvAccess, b: &[FieldElem]) -> Result<Option<Vector>>;
}

/// Learns A column by column (one query per column) and solves exactly.
#[derive(Clone, Copy, Debug, Default)]
pub struct ReferenceSolver;

impl LinearSolver for ReferenceSolver {
    fn solve(&self, access: &dyn MvAccess, b: &[FieldElem]) -> Result<Option<Vector>> {
        let f = access.field().clone();
        let (m, n) = access.dims();
        let mut a = Matrix::zeros(&f, m, n);
        for j in 0..n {
            for (i, v) in access.mv(&unit_vector(&f, n, j))?.into_iter().enumerate() {
                a.set(i, j, v);
            }
        }
        match a.solve(b) {
            Ok(sol) if sol.null_basis.is_empty() => Ok(Some(sol.particular)),
            Ok(_) | Err(Error::NoSolution) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullRankOutcome {
    pub full_rank: bool,
    /// Paddings drawn, including the successful one.
    pub attempts: usize,
    /// Border of the invertible padded matrix that settled the answer.
    pub padding: Padding,
}

/// Decides whether M is full rank with one solver call on an invertible
/// padding, retrying up to `retry_cap` fresh paddings.
pub fn fullrank_via_solver<S: LinearSolver + ?Sized, R: Rng + ?Sized>(
    oracle: &Oracle,
    solver: &S,
    retry_cap: usize,
    rng: &mut R,
) -> Result<AlgorithmResult<FullRankOutcome>> {
    let f = oracle.field().clone();
    let before = oracle.queries();
    let n = oracle.dims().1;
    for attempt in 1..=retry_cap {
        let padded = pad_for_rank_reduction(oracle, rng)?;
        if let Some(x) = solver.solve(&padded, &unit_vector(&f, n + 1, 0))? {
            let answer = FullRankOutcome { full_rank: !x[0].is_zero(), attempts: attempt, padding: padded.padding().clone() };
            return Ok(AlgorithmResult { answer, queries_used: oracle.queries() - before, transcript: Vec::new() });
        }
    }
    Err(Error::ReductionFailed(format!("no invertible padding in {retry_cap} attempts")))
}
