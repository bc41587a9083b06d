use anyhow::Result;
use mvlab::algorithms::{default_trials, false_positive_bound, identical_columns, identical_rows_randomized};
use mvlab::ff::Matrix;
use mvlab::oracles::Oracle;
use num_traits::ToPrimitive;
use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use super::binomial_sigma;
use crate::input::matrix_json;
use crate::report::{rational, Report};
use crate::source::Instances;
use crate::{Axis, Context, IdenticalArgs, UsageError};

fn has_duplicate_rows(a: &Matrix) -> bool {
    let mut rows: Vec<&[_]> = (0..a.rows()).map(|i| a.row(i)).collect();
    rows.sort();
    rows.windows(2).any(|w| w[0] == w[1])
}

/// Copies row i onto row j for a random pair i ≠ j.
fn plant_rows<R: Rng>(a: &mut Matrix, rng: &mut R) {
    let pair = sample(rng, a.rows(), 2);
    let (i, j) = (pair.index(0), pair.index(1));
    for c in 0..a.cols() {
        a.set(j, c, a.get(i, c));
    }
}

struct Run {
    duplicate: bool,
    answer: bool,
    queries: u64,
}

pub fn run(args: &IdenticalArgs, ctx: Context) -> Result<Report> {
    let instances = Instances::resolve(&args.source, ctx, false)?;
    let mut report = Report::new("identical", ctx.seed);
    instances.record(&mut report);
    let m = report.parameters["m"].as_u64().unwrap_or(0) as usize;
    let n = report.parameters["n"].as_u64().unwrap_or(0) as usize;
    let q = report.parameters["q"].as_u64().unwrap_or(2);
    let k = if args.axis == Axis::Rows { m } else { n };
    if args.planted && k < 2 {
        return Err(UsageError("planting a duplicate needs at least two rows (or columns)".into()).into());
    }
    let trials = args.trials.unwrap_or_else(|| default_trials(k));
    report.param("axis", format!("{:?}", args.axis).to_lowercase()).param("planted", args.planted).param("trials", trials);

    let runs: Vec<(Matrix, Run)> = (0..instances.len())
        .into_par_iter()
        .map(|i| {
            let (mut a, mut rng) = instances.get(ctx.seed, i);
            let rows_view = |a: &Matrix| if args.axis == Axis::Rows { a.clone() } else { a.transpose() };
            if args.planted {
                let mut t = rows_view(&a);
                plant_rows(&mut t, &mut rng);
                a = rows_view(&t);
            }
            let duplicate = has_duplicate_rows(&rows_view(&a));
            let o = Oracle::mv_standard(a.clone());
            let r = match args.axis {
                Axis::Rows => identical_rows_randomized(&o, Some(trials), &mut rng)?,
                Axis::Columns => identical_columns(&o, Some(trials), &mut rng)?,
            };
            Ok((a, Run { duplicate, answer: r.answer, queries: r.queries_used }))
        })
        .collect::<Result<_>>()?;

    for (i, (a, r)) in runs.iter().enumerate() {
        let mut row = json!({ "index": i, "duplicate": r.duplicate, "answer": r.answer, "queries": r.queries });
        if instances.show_matrices() {
            row["matrix"] = matrix_json(a);
        }
        report.results.push(row);
    }

    let with_dup = runs.iter().filter(|(_, r)| r.duplicate).count() as u64;
    let false_neg = runs.iter().filter(|(_, r)| r.duplicate && !r.answer).count() as u64;
    let without = runs.len() as u64 - with_dup;
    let false_pos = runs.iter().filter(|(_, r)| !r.duplicate && r.answer).count() as u64;
    let fp_rate = if without == 0 { 0.0 } else { false_pos as f64 / without as f64 };
    let bound = false_positive_bound(k, q, trials);
    let b = bound.to_f64().unwrap_or(1.0);
    let threshold = b + 3.0 * binomial_sigma(b, without);
    report
        .stat("instances_with_duplicate", with_dup)
        .stat("false_negatives", false_neg)
        .stat("instances_without_duplicate", without)
        .stat("false_positives", false_pos)
        .stat("false_positive_rate", fp_rate);
    report.theory("false_positive_bound", rational(&bound)).theory("false_positive_threshold", threshold);

    let bad_q = runs.iter().map(|(_, r)| r.queries).find(|&x| x != trials as u64).unwrap_or(trials as u64);
    report
        .check("no false negatives", false_neg == 0, false_neg, "0")
        .check("queries per run", bad_q == trials as u64, bad_q, trials.to_string())
        .check("false-positive rate", fp_rate <= threshold, fp_rate, format!("<= {threshold} (bound + 3 sigma)"));
    Ok(report)
}
