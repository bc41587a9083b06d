use anyhow::Result;
use mvlab::algorithms::{majority_columns, majority_rows, BinaryRealOracle, Majority};
use mvlab::instance_rng;
use rand::Rng;
use serde_json::{json, Value};

use crate::input::{check_dims, parse_int_rows, read_source};
use crate::report::Report;
use crate::{Context, MajorityArgs, UsageError};

fn label(v: &Majority) -> &'static str {
    match v {
        Majority::Zero => "0",
        Majority::One => "1",
        Majority::Tie => "tie",
    }
}

fn direct(counts: impl Iterator<Item = i64>, len: usize) -> Vec<Majority> {
    counts
        .map(|c| match (2 * c).cmp(&(len as i64)) {
            std::cmp::Ordering::Greater => Majority::One,
            std::cmp::Ordering::Less => Majority::Zero,
            std::cmp::Ordering::Equal => Majority::Tie,
        })
        .collect()
}

fn labels(v: &[Majority]) -> Value {
    json!(v.iter().map(label).collect::<Vec<_>>())
}

pub fn run(args: &MajorityArgs, ctx: Context) -> Result<Report> {
    let matrices: Vec<Vec<Vec<i64>>> = if let Some(path) = &args.matrix {
        vec![parse_int_rows(&read_source(path)?)?]
    } else if let Some(count) = args.random {
        let (Some(m), Some(n)) = (args.m, args.n) else {
            return Err(UsageError("give --m and --n with --random".into()).into());
        };
        check_dims(m, n, ctx.max_dim)?;
        (0..count as u64)
            .map(|i| {
                let mut rng = instance_rng(ctx.seed, i);
                (0..m).map(|_| (0..n).map(|_| rng.gen_range(0..=1)).collect()).collect()
            })
            .collect()
    } else {
        return Err(UsageError("give --matrix or --random".into()).into());
    };

    let mut report = Report::new("majority", ctx.seed);
    report.param("source", if args.matrix.is_some() { "file" } else { "random" }).param("instances", matrices.len());
    let (mut correct, mut ties, mut bad_queries) = (0usize, 0usize, 0usize);
    for (i, entries) in matrices.iter().enumerate() {
        let oracle = BinaryRealOracle::new(entries)?;
        let (m, n) = oracle.dims();
        check_dims(m, n, ctx.max_dim)?;
        let rows = majority_rows(&oracle)?;
        let cols = majority_columns(&oracle)?;
        let want_rows = direct(entries.iter().map(|r| r.iter().sum()), n);
        let want_cols = direct((0..n).map(|j| entries.iter().map(|r| r[j]).sum()), m);
        let ok = rows.answer == want_rows && cols.answer == want_cols;
        correct += ok as usize;
        ties += rows.answer.iter().chain(&cols.answer).filter(|v| **v == Majority::Tie).count();
        bad_queries += (rows.queries_used != 1 || cols.queries_used != 1) as usize;
        let mut row = json!({
            "index": i,
            "row_majority": labels(&rows.answer),
            "column_majority": labels(&cols.answer),
            "row_counts": rows.transcript[0].response,
            "column_counts": cols.transcript[0].response,
            "queries": rows.queries_used + cols.queries_used,
            "correct": ok,
        });
        if args.matrix.is_some() {
            row["matrix"] = json!(entries);
        }
        report.results.push(row);
    }
    let total = matrices.len();
    report.stat("correct", correct).stat("total", total).stat("ties", ties);
    report.check("majorities match direct counts", correct == total, format!("{correct}/{total}"), format!("{total}/{total}")).check(
        "one query per direction",
        bad_queries == 0,
        bad_queries,
        "0 runs off",
    );
    Ok(report)
}
