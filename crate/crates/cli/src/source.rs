//! Indexed matrix instances with a deterministic generator per instance.

use anyhow::Result;
use mvlab::ff::{Field, Matrix};
use mvlab::{instance_rng, InstanceRng};

use crate::input::{check_dims, enumerable, field, read_matrix};
use crate::report::Report;
use crate::{Context, SourceArgs, UsageError};

/// Largest exhaustive sweep.
pub const ENUMERATION_CAP: u64 = 1 << 16;

#[derive(Clone, Debug)]
pub enum Instances {
    File(Matrix),
    All { field: Field, m: usize, n: usize, count: u64 },
    Random { field: Field, m: usize, n: usize, count: u64 },
}

impl Instances {
    /// Resolves the source flags. `square` ties m to n.
    pub fn resolve(args: &SourceArgs, ctx: Context, square: bool) -> Result<Self> {
        if let Some(path) = &args.matrix {
            let m = read_matrix(path)?;
            check_dims(m.rows(), m.cols(), ctx.max_dim)?;
            if square && !m.is_square() {
                return Err(UsageError(format!("expected a square matrix, got {}×{}", m.rows(), m.cols())).into());
            }
            return Ok(Instances::File(m));
        }
        let (m, n) = match (args.m, args.n, square) {
            (_, Some(n), true) | (Some(n), None, true) => (n, n),
            (Some(m), Some(n), false) => (m, n),
            _ => return Err(UsageError(if square { "give --n or --matrix".into() } else { "give --m and --n, or --matrix".into() }).into()),
        };
        check_dims(m, n, ctx.max_dim)?;
        let field = field(args.q)?;
        if args.all {
            let count = enumerable(&field, m, n, ENUMERATION_CAP)?;
            Ok(Instances::All { field, m, n, count })
        } else if let Some(count) = args.random {
            Ok(Instances::Random { field, m, n, count: count as u64 })
        } else {
            Err(UsageError("give one of --matrix, --all or --random".into()).into())
        }
    }

    pub fn len(&self) -> u64 {
        match self {
            Instances::File(_) => 1,
            Instances::All { count, .. } | Instances::Random { count, .. } => *count,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Instance `i` and the generator for the rest of its run.
    pub fn get(&self, seed: u64, i: u64) -> (Matrix, InstanceRng) {
        let mut rng = instance_rng(seed, i);
        let m = match self {
            Instances::File(m) => m.clone(),
            Instances::All { field, m, n, .. } => Matrix::from_index(field, *m, *n, i),
            Instances::Random { field, m, n, .. } => Matrix::random(field, *m, *n, &mut rng),
        };
        (m, rng)
    }

    pub fn record(&self, report: &mut Report) {
        let (kind, field, m, n) = match self {
            Instances::File(a) => ("file", a.field(), a.rows(), a.cols()),
            Instances::All { field, m, n, .. } => ("all", field, *m, *n),
            Instances::Random { field, m, n, .. } => ("random", field, *m, *n),
        };
        report.param("source", kind).param("q", field.q()).param("m", m).param("n", n).param("instances", self.len());
    }

    /// Whether per-instance results should carry the matrix itself.
    pub fn show_matrices(&self) -> bool {
        matches!(self, Instances::File(_))
    }
}
