use anyhow::Result;
use mvlab::algorithms::{column_parities, row_parities, vmv_column_parities_classical, vmv_parities_classical, AlgorithmResult};
use mvlab::ff::{Matrix, Vector};
use mvlab::oracles::Oracle;
use rayon::prelude::*;
use serde_json::json;

use crate::input::{matrix_json, vector_json};
use crate::report::Report;
use crate::source::Instances;
use crate::{Context, SourceArgs};

struct Run {
    rows: AlgorithmResult<Vector>,
    cols: AlgorithmResult<Vector>,
    rows_ok: bool,
    cols_ok: bool,
}

fn run_one(a: &Matrix, classical_vmv: bool) -> Result<Run> {
    let f = a.field();
    let (rows, cols) = if classical_vmv {
        let o = Oracle::vmv_standard(a.clone());
        (vmv_parities_classical(&o)?, vmv_column_parities_classical(&o)?)
    } else {
        let o = Oracle::mv_standard(a.clone());
        (row_parities(&o)?, column_parities(&o)?)
    };
    let rows_ok = rows.answer == a.mul_vec(&vec![f.one(); a.cols()])?;
    let cols_ok = cols.answer == a.vec_mul(&vec![f.one(); a.rows()])?;
    Ok(Run { rows, cols, rows_ok, cols_ok })
}

/// Row and column sums, quantum (one query each) or from classical VMV
/// queries (m and n queries).
pub fn run(args: &SourceArgs, ctx: Context, classical_vmv: bool) -> Result<Report> {
    let instances = Instances::resolve(args, ctx, false)?;
    let mut report = Report::new(if classical_vmv { "vmv-parities" } else { "parities" }, ctx.seed);
    instances.record(&mut report);
    let m = report.parameters["m"].as_u64().unwrap_or(0);
    let n = report.parameters["n"].as_u64().unwrap_or(0);
    let (want_rows, want_cols) = if classical_vmv { (m, n) } else { (1, 1) };

    let runs: Vec<(Matrix, Run)> = (0..instances.len())
        .into_par_iter()
        .map(|i| {
            let (a, _) = instances.get(ctx.seed, i);
            run_one(&a, classical_vmv).map(|r| (a, r))
        })
        .collect::<Result<_>>()?;

    for (i, (a, r)) in runs.iter().enumerate() {
        let mut row = json!({
            "index": i,
            "row_parities": vector_json(&r.rows.answer),
            "column_parities": vector_json(&r.cols.answer),
            "row_queries": r.rows.queries_used,
            "column_queries": r.cols.queries_used,
            "correct": r.rows_ok && r.cols_ok,
        });
        if instances.show_matrices() {
            row["matrix"] = matrix_json(a);
        }
        report.results.push(row);
    }

    let total = runs.len();
    let correct = runs.iter().filter(|(_, r)| r.rows_ok && r.cols_ok).count();
    let bad_row_q = runs.iter().map(|(_, r)| r.rows.queries_used).find(|&q| q != want_rows).unwrap_or(want_rows);
    let bad_col_q = runs.iter().map(|(_, r)| r.cols.queries_used).find(|&q| q != want_cols).unwrap_or(want_cols);
    report.stat("correct", correct).stat("total", total);
    report.theory("row_queries", want_rows).theory("column_queries", want_cols);
    report
        .check("parities match direct sums", correct == total, format!("{correct}/{total}"), format!("{total}/{total}"))
        .check("row queries", bad_row_q == want_rows, bad_row_q, want_rows.to_string())
        .check("column queries", bad_col_q == want_cols, bad_col_q, want_cols.to_string());
    Ok(report)
}
