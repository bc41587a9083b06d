use anyhow::Result;
use mvlab::algorithms::quantum_trace_f2;
use mvlab::bounds::{trace_opt_success, TraceBoundMode, BRUTE_FORCE_CAP};
use mvlab::oracles::Oracle;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::input::matrix_json;
use crate::report::{rational, Report};
use crate::source::Instances;
use crate::{Context, TraceArgs, UsageError};

pub const PROBABILITY_TOL: f64 = 1e-9;

/// Optimal t-query success, by brute force when the Z-space is small and
/// from the witness otherwise.
fn theory(n: usize, t: usize) -> Result<(BigRational, &'static str)> {
    let brute = 2u64.checked_pow((n * n) as u32).is_some_and(|s| s <= BRUTE_FORCE_CAP);
    if brute {
        Ok((trace_opt_success(n, 2, t, TraceBoundMode::BruteForce)?, "brute-force"))
    } else {
        Ok((trace_opt_success(n, 2, t, TraceBoundMode::Witness)?, "witness"))
    }
}

struct Run {
    correct: bool,
    trace: bool,
    expected: bool,
    probability: f64,
    queries: u64,
    matrix: Option<Value>,
}

pub fn run(args: &TraceArgs, ctx: Context) -> Result<Report> {
    if args.source.q != 2 {
        return Err(UsageError(format!("the trace algorithm is defined for q = 2, got q = {}", args.source.q)).into());
    }
    let instances = Instances::resolve(&args.source, ctx, true)?;
    if let Instances::File(m) = &instances {
        if m.field().q() != 2 {
            return Err(UsageError("the trace algorithm needs a matrix over F_2".into()).into());
        }
    }
    let mut report = Report::new("trace", ctx.seed);
    instances.record(&mut report);
    let n = report.parameters["n"].as_u64().unwrap_or(0) as usize;
    let ell = n.div_ceil(2);
    let show = instances.show_matrices();

    let runs: Vec<Run> = (0..instances.len())
        .into_par_iter()
        .map(|i| {
            let (m, mut rng) = instances.get(ctx.seed, i);
            let o = Oracle::mv_standard(m.clone());
            let r = quantum_trace_f2(&o, &mut rng)?;
            let expected = !m.trace()?.is_zero();
            Ok(Run {
                correct: r.answer.trace == expected,
                trace: r.answer.trace,
                expected,
                probability: r.answer.probability,
                queries: r.queries_used,
                matrix: show.then(|| matrix_json(&m)),
            })
        })
        .collect::<Result<_>>()?;

    for (i, r) in runs.iter().enumerate() {
        let mut row = json!({
            "index": i,
            "trace": r.trace as u8,
            "expected": r.expected as u8,
            "correct": r.correct,
            "probability": r.probability,
            "queries": r.queries,
        });
        if let Some(m) = &r.matrix {
            row["matrix"] = m.clone();
        }
        report.results.push(row);
    }

    let total = runs.len() as u64;
    let correct = runs.iter().filter(|r| r.correct).count() as u64;
    let min_p = runs.iter().map(|r| r.probability).fold(1.0, f64::min);
    let mean_success = if total == 0 {
        0.0
    } else {
        runs.iter().map(|r| if r.correct { r.probability } else { 1.0 - r.probability }).sum::<f64>() / total as f64
    };
    report
        .stat("correct", correct)
        .stat("total", total)
        .stat("min_outcome_probability", min_p)
        .stat("mean_success_probability", mean_success);

    let (at_ell, mode) = theory(n, ell)?;
    report.theory("queries", ell).theory("opt_success", rational(&at_ell)).theory("mode", mode);
    if let Some(t) = args.queries {
        let (at_t, mode) = theory(n, t)?;
        report.theory("budget", t).theory("opt_success_at_budget", rational(&at_t)).theory("budget_mode", mode);
    }

    let wrong_queries = runs.iter().map(|r| r.queries).find(|&q| q != ell as u64).unwrap_or(ell as u64);
    report
        .check("all traces correct", correct == total, format!("{correct}/{total}"), format!("{total}/{total}"))
        .check("outcome probability", min_p >= 1.0 - PROBABILITY_TOL, min_p, format!(">= 1 - {PROBABILITY_TOL:e}"))
        .check("queries per run", wrong_queries == ell as u64, wrong_queries, ell.to_string());
    let cap = at_ell.to_f64().unwrap_or(1.0);
    report.check("simulation within theory", mean_success <= cap + PROBABILITY_TOL, mean_success, format!("<= {cap}"));
    Ok(report)
}
