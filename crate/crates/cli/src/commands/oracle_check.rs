use anyhow::Result;
use mvlab::ff::{Field, Matrix};
use mvlab::instance_rng;
use mvlab::oracles::{MvPhaseFromVmv, Oracle, TransposedMv, VmvFromMv};
use mvlab::qsim::{operator_distance, operator_distance_on, Label, RegisterLayout, SimOptions};
use mvlab::StateVector;
use rayon::prelude::*;
use serde::Serialize;

use crate::input::{check_dims, enumerable, field, matrix_json};
use crate::report::Report;
use crate::source::ENUMERATION_CAP;
use crate::{Context, OracleCheckArgs, SweepMode, UsageError};

pub const DISTANCE_TOL: f64 = 1e-10;

/// Largest simulated register space q^(n+2m+1).
pub const STATE_CAP: u64 = 1 << 20;

/// Operator distances of the three simulations against direct oracles, and
/// the queries each spends per application.
#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceCheck {
    pub transpose_distance: f64,
    pub vmv_distance: f64,
    pub phase_distance: f64,
    pub transpose_queries: u64,
    pub vmv_queries: u64,
    pub phase_queries: u64,
}

fn single_application_cost(layout: &RegisterLayout, oracle: &Oracle, apply: impl Fn(&mut StateVector) -> mvlab::Result<()>) -> Result<u64> {
    let zero = vec![layout.field().zero(); layout.num_symbols()];
    let mut s = StateVector::basis_state(layout, &zero, &SimOptions::framed())?;
    let before = oracle.queries();
    apply(&mut s)?;
    Ok(oracle.queries() - before)
}

pub fn check_matrix(a: &Matrix) -> Result<EquivalenceCheck> {
    let f = a.field();
    let (m, n) = (a.rows(), a.cols());
    let opts = SimOptions::framed();

    let mv = Oracle::mv_standard(a.clone());
    let transpose = TransposedMv::new(&mv)?;
    let layout = transpose.layout();
    let direct = Oracle::mv_standard(a.transpose());
    let transpose_distance = operator_distance(&transpose, &direct, &layout, &opts)?;
    let transpose_queries = single_application_cost(&layout, &mv, |s| transpose.apply_on(s, 0, 1, false))?;

    let vmv_sim = VmvFromMv::new(&mv)?;
    let layout = vmv_sim.layout();
    let direct = Oracle::vmv_standard(a.clone());
    let clean: Vec<Label> = layout.basis_labels()?.filter(|l| l[n + m + 1..].iter().all(|e| e.is_zero())).collect();
    let b = |s: &mut StateVector| direct.apply(s, &[0, 1, 2], false);
    let vmv_distance = operator_distance_on(&vmv_sim, &b, &layout, &clean, &opts)?;
    let vmv_queries = single_application_cost(&layout, &mv, |s| vmv_sim.apply_on(s, [0, 1, 2, 3], false))?;

    let vmv = Oracle::vmv_standard(a.clone());
    let phase_sim = MvPhaseFromVmv::new(&vmv)?;
    let layout = phase_sim.layout();
    let direct = Oracle::mv_phase(a.clone());
    let sector: Vec<Label> = layout.basis_labels()?.filter(|l| l[n + m] == f.one()).collect();
    let b = |s: &mut StateVector| direct.apply(s, &[0, 1], false);
    let phase_distance = operator_distance_on(&phase_sim, &b, &layout, &sector, &opts)?;
    let phase_queries = single_application_cost(&layout, &vmv, |s| phase_sim.apply_on(s, [0, 1, 2], false))?;

    Ok(EquivalenceCheck { transpose_distance, vmv_distance, phase_distance, transpose_queries, vmv_queries, phase_queries })
}

fn state_space_ok(field: &Field, m: usize, n: usize) -> bool {
    (field.q() as u64).checked_pow((n + 2 * m + 1) as u32).is_some_and(|d| d <= STATE_CAP)
}

pub fn run(args: &OracleCheckArgs, ctx: Context) -> Result<Report> {
    let (m, n) = (args.m, args.n);
    check_dims(m, n, ctx.max_dim)?;
    let f = field(args.q)?;
    if !state_space_ok(&f, m, n) {
        return Err(UsageError(format!("q^(n+2m+1) = {}^{} exceeds the state cap {STATE_CAP}", f.q(), n + 2 * m + 1)).into());
    }
    let count = match args.mode {
        SweepMode::Exhaustive => enumerable(&f, m, n, ENUMERATION_CAP)?,
        SweepMode::Random => args.count as u64,
    };
    let mut report = Report::new("oracle-check", ctx.seed);
    report
        .param("q", args.q)
        .param("m", m)
        .param("n", n)
        .param("mode", format!("{:?}", args.mode).to_lowercase())
        .param("instances", count);

    let checks: Vec<(Matrix, EquivalenceCheck)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let a = match args.mode {
                SweepMode::Exhaustive => Matrix::from_index(&f, m, n, i),
                SweepMode::Random => Matrix::random(&f, m, n, &mut instance_rng(ctx.seed, i)),
            };
            check_matrix(&a).map(|c| (a, c))
        })
        .collect::<Result<_>>()?;

    for (i, (a, c)) in checks.iter().enumerate() {
        let mut row = serde_json::to_value(c)?;
        row["index"] = i.into();
        row["matrix"] = matrix_json(a);
        report.results.push(row);
    }
    let max = |g: fn(&EquivalenceCheck) -> f64| checks.iter().map(|(_, c)| g(c)).fold(0.0, f64::max);
    let (dt, dv, dp) = (max(|c| c.transpose_distance), max(|c| c.vmv_distance), max(|c| c.phase_distance));
    report.stat("max_transpose_distance", dt).stat("max_vmv_distance", dv).stat("max_phase_distance", dp);
    let tol = format!("< {DISTANCE_TOL:e}");
    report
        .check("transpose simulation", dt < DISTANCE_TOL, dt, tol.clone())
        .check("vmv from two mv queries", dv < DISTANCE_TOL, dv, tol.clone())
        .check("mv phase from vmv", dp < DISTANCE_TOL, dp, tol);
    for (name, want, get) in [
        ("transpose queries per application", 1, (|c: &EquivalenceCheck| c.transpose_queries) as fn(&EquivalenceCheck) -> u64),
        ("vmv queries per application", 2, |c| c.vmv_queries),
        ("phase queries per application", 1, |c| c.phase_queries),
    ] {
        let worst = checks.iter().map(|(_, c)| get(c)).find(|&v| v != want).unwrap_or(want);
        report.check(name, worst == want, worst, want.to_string());
    }
    Ok(report)
}
