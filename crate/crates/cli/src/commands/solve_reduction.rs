use anyhow::Result;
use mvlab::algorithms::{fullrank_via_solver, pad_for_rank_reduction, Padding, ReferenceSolver};
use mvlab::ff::{count_rank_matrices, sample_matrix_of_rank, Matrix};
use mvlab::oracles::Oracle;
use mvlab::{instance_rng, Error};
use num_traits::ToPrimitive;
use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use super::binomial_sigma;
use crate::input::{check_dims, field};
use crate::report::Report;
use crate::{Context, SolveReductionArgs, UsageError};

/// The (n+1)×(n+1) matrix [[a, uᵀ], [v, M]].
pub fn padded_matrix(m: &Matrix, p: &Padding) -> Matrix {
    let n = m.rows();
    Matrix::from_fn(m.field(), n + 1, n + 1, |i, j| match (i, j) {
        (0, 0) => p.a,
        (0, j) => p.u[j - 1],
        (i, 0) => p.v[i - 1],
        (i, j) => m.get(i - 1, j - 1),
    })
}

struct Trial {
    rank: usize,
    invertible: bool,
    decided: Option<(bool, usize)>,
}

pub fn run(args: &SolveReductionArgs, ctx: Context) -> Result<Report> {
    let n = args.n;
    check_dims(n, n, ctx.max_dim)?;
    let f = field(args.q)?;
    if args.retry_cap == 0 {
        return Err(UsageError("--retry-cap must be positive".into()).into());
    }
    let mut report = Report::new("solve-reduction", ctx.seed);
    report.param("n", n).param("q", args.q).param("trials", args.trials).param("retry_cap", args.retry_cap);

    // a uniform M conditioned on rank ≥ n − 1
    let full = count_rank_matrices(n, n, n, args.q).to_f64().unwrap_or(0.0);
    let deficient = count_rank_matrices(n, n, n - 1, args.q).to_f64().unwrap_or(0.0);
    let p_full = full / (full + deficient);

    let trials: Vec<Trial> = (0..args.trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(ctx.seed, i);
            let rank = if rng.gen_bool(p_full) { n } else { n - 1 };
            let m = sample_matrix_of_rank(&f, n, n, rank, &mut rng)?;
            let o = Oracle::mv_standard(m.clone());
            let padded = pad_for_rank_reduction(&o, &mut rng)?;
            let invertible = padded_matrix(&m, padded.padding()).rank() == n + 1;
            let decided = match fullrank_via_solver(&o, &ReferenceSolver, args.retry_cap, &mut rng) {
                Ok(r) => Some((r.answer.full_rank, r.answer.attempts)),
                Err(Error::ReductionFailed(_)) => None,
                Err(e) => return Err(e.into()),
            };
            Ok(Trial { rank, invertible, decided })
        })
        .collect::<Result<_>>()?;

    let mut agree = 0u64;
    let mut decided = 0u64;
    for (i, t) in trials.iter().enumerate() {
        let mut row = json!({ "index": i, "rank": t.rank, "a_invertible": t.invertible, "decided": t.decided.is_some() });
        if let Some((full_rank, attempts)) = t.decided {
            decided += 1;
            agree += (full_rank == (t.rank == n)) as u64;
            row["full_rank"] = full_rank.into();
            row["attempts"] = attempts.into();
        }
        report.results.push(row);
    }
    let total = trials.len() as u64;
    let invertible = trials.iter().filter(|t| t.invertible).count() as u64;
    let rate = if total == 0 { 0.0 } else { invertible as f64 / total as f64 };
    let bound = (1.0 - 1.0 / args.q as f64).powi(2);
    let sigma = binomial_sigma(bound, total);
    report.stat("a_invertible", invertible).stat("a_invertible_rate", rate).stat("decided", decided).stat("agreements", agree);
    report.theory("invertible_lower_bound", bound).theory("sigma", sigma).theory("full_rank_fraction", p_full);
    if total > 0 {
        report.check("Pr[A invertible]", rate >= bound - 3.0 * sigma, rate, format!(">= {} (bound - 3 sigma)", bound - 3.0 * sigma)).check(
            "full-rank decisions match rank",
            agree == decided,
            format!("{agree}/{decided}"),
            format!("{decided}/{decided}"),
        );
    }
    Ok(report)
}
