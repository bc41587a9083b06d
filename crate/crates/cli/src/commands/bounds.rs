use anyhow::{Context as _, Result};
use mvlab::bounds::{
    min_feasible_degree, oracle_discrimination_success, rank_testing_constraints, trace_opt_success, unit_interval_constraints,
    PointConstraint, TraceBoundMode,
};
use mvlab::ff::{count_rank_matrices, Matrix};
use mvlab::scalar::LpScalar;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::json;

use crate::input::{check_dims, enumerable, field};
use crate::report::{rational, Report};
use crate::source::ENUMERATION_CAP;
use crate::{BoundMode, BoundsCommand, ConstraintSet, Context, UsageError};

pub fn run(cmd: &BoundsCommand, ctx: Context) -> Result<Report> {
    match cmd {
        BoundsCommand::Trace { n, q, t, mode } => trace(*n, *q, *t, *mode, ctx),
        BoundsCommand::Discrimination { m, n, q } => discrimination(*m, *n, *q, ctx),
        BoundsCommand::Count { m, n, q, verify } => count(*m, *n, *q, *verify, ctx),
        BoundsCommand::Degree { n, xi, constraints, float } => degree(*n, xi, *constraints, *float, ctx),
    }
}

fn trace(n_max: usize, q: u64, t: Option<usize>, mode: BoundMode, ctx: Context) -> Result<Report> {
    check_dims(n_max, n_max, ctx.max_dim)?;
    field(q)?;
    let mode_core = match mode {
        BoundMode::BruteForce => TraceBoundMode::BruteForce,
        BoundMode::Witness => TraceBoundMode::Witness,
    };
    let mut report = Report::new("bounds trace", ctx.seed);
    report.param("n_max", n_max).param("q", q).param("mode", format!("{mode:?}").to_lowercase());
    if let Some(t) = t {
        report.param("t", t);
    }
    let guess = BigRational::new(1.into(), q.into());
    let (mut below_ok, mut at_half_ok) = (true, true);
    for n in 1..=n_max {
        let budgets: Vec<usize> = match t {
            Some(t) => vec![t],
            None => (0..=n).collect(),
        };
        for t in budgets {
            let v = trace_opt_success(n, q, t, mode_core)?;
            if 2 * t < n && mode == BoundMode::BruteForce {
                below_ok &= v <= guess && (q != 2 || v == guess);
            }
            if q == 2 && t == n.div_ceil(2) {
                at_half_ok &= v.is_one();
            }
            let mut row = json!({ "n": n, "t": t });
            row["exact"] = v.to_string().into();
            row["value"] = rational(&v)["value"].clone();
            report.results.push(row);
        }
    }
    if mode == BoundMode::BruteForce {
        report.check("t < n/2 gives no advantage over guessing", below_ok, below_ok, format!("<= {guess}"));
    }
    if q == 2 {
        report.check("t = ceil(n/2) succeeds with certainty", at_half_ok, at_half_ok, "1");
    }
    Ok(report)
}

fn discrimination(m: usize, n: usize, q: u64, ctx: Context) -> Result<Report> {
    check_dims(m, n, ctx.max_dim)?;
    field(q)?;
    let mut report = Report::new("bounds discrimination", ctx.seed);
    report.param("m", m).param("n", n).param("q", q);
    let curve: Vec<BigRational> = (0..=m.min(n)).map(|t| oracle_discrimination_success(m, n, q, t)).collect();
    for (t, v) in curve.iter().enumerate() {
        report.results.push(json!({ "t": t, "exact": v.to_string(), "value": rational(v)["value"] }));
    }
    let monotone = curve.windows(2).all(|w| w[0] <= w[1]);
    let last = curve.last().cloned().unwrap_or_else(BigRational::zero);
    let first = BigRational::new(1.into(), num_bigint::BigInt::from(q).pow((m * n) as u32));
    report
        .check("nondecreasing in t", monotone, monotone, "true")
        .check("t = min(m, n) identifies M", last.is_one(), last.to_string(), "1")
        .check("t = 0 is a blind guess", curve[0] == first, curve[0].to_string(), first.to_string());
    Ok(report)
}

fn count(m: usize, n: usize, q: u64, verify: bool, ctx: Context) -> Result<Report> {
    check_dims(m, n, ctx.max_dim)?;
    let f = field(q)?;
    let mut report = Report::new("bounds count", ctx.seed);
    report.param("m", m).param("n", n).param("q", q).param("verify", verify);
    let counts: Vec<BigUint> = (0..=m.min(n)).map(|r| count_rank_matrices(m, n, r, q)).collect();
    let enumerated: Option<Vec<u64>> = if verify {
        let size = enumerable(&f, m, n, ENUMERATION_CAP)?;
        let ranks: Vec<usize> = (0..size).into_par_iter().map(|i| Matrix::from_index(&f, m, n, i).rank()).collect();
        let mut hist = vec![0u64; m.min(n) + 1];
        ranks.into_iter().for_each(|r| hist[r] += 1);
        Some(hist)
    } else {
        None
    };
    for (r, c) in counts.iter().enumerate() {
        let mut row = json!({ "rank": r, "count": c.to_string() });
        if let Some(h) = &enumerated {
            row["enumerated"] = h[r].into();
        }
        report.results.push(row);
    }
    let total: BigUint = counts.iter().sum();
    let space = BigUint::from(q).pow((m * n) as u32);
    report.check("counts sum to q^(mn)", total == space, total.to_string(), space.to_string());
    if let Some(h) = &enumerated {
        let agree = counts.iter().zip(h).all(|(c, &e)| *c == BigUint::from(e));
        report.check("counts match rank enumeration", agree, agree, "true");
    }
    Ok(report)
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = s.split_once('/').unwrap_or((s, "1"));
    let num: num_bigint::BigInt = num.trim().parse().with_context(|| format!("bad rational {s:?}"))?;
    let den: num_bigint::BigInt = den.trim().parse().with_context(|| format!("bad rational {s:?}"))?;
    if den.is_zero() {
        return Err(UsageError(format!("zero denominator in {s:?}")).into());
    }
    Ok(BigRational::new(num, den))
}

fn constraint_set<S: LpScalar>(set: ConstraintSet, n: usize) -> Result<Vec<PointConstraint<S>>> {
    match set {
        ConstraintSet::RankTesting => rank_testing_constraints(n).map_err(|e| UsageError(e.to_string()).into()),
        ConstraintSet::UnitInterval => Ok(unit_interval_constraints(n)),
    }
}

/// Evaluates the polynomial at every constrained point.
fn satisfied<S: LpScalar>(coeffs: &[S], xi: &S, cs: &[PointConstraint<S>], slack: &S) -> bool {
    cs.iter().all(|c| {
        let x = (0..c.exponent).fold(S::from_ratio(1, 1), |a, _| a * xi.clone());
        let v = coeffs.iter().rev().fold(S::from_ratio(0, 1), |acc, a| acc * x.clone() + a.clone());
        c.lower.as_ref().is_none_or(|lo| v.clone() >= lo.clone() - slack.clone())
            && c.upper.as_ref().is_none_or(|hi| v.clone() <= hi.clone() + slack.clone())
    })
}

fn degree(n: usize, xi: &str, set: ConstraintSet, float: bool, ctx: Context) -> Result<Report> {
    if n == 0 || n > ctx.max_dim {
        return Err(UsageError(format!("n must be in 1..={}", ctx.max_dim)).into());
    }
    let xi_exact = parse_rational(xi)?;
    let mut report = Report::new("bounds degree", ctx.seed);
    report
        .param("n", n)
        .param("xi", xi_exact.to_string())
        .param("constraints", format!("{set:?}").to_lowercase())
        .param("arithmetic", if float { "f64" } else { "exact" });
    let (degree, coefficients, ok) = if float {
        let x = xi_exact.to_f64();
        let cs = constraint_set::<f64>(set, n)?;
        let out = min_feasible_degree(n, &x, &cs)?;
        let ok = satisfied(&out.coefficients, &x, &cs, &1e-9);
        (out.degree, out.coefficients.iter().map(|c| json!(c)).collect::<Vec<_>>(), ok)
    } else {
        let cs = constraint_set::<BigRational>(set, n)?;
        let out = min_feasible_degree(n, &xi_exact, &cs)?;
        let ok = satisfied(&out.coefficients, &xi_exact, &cs, &BigRational::zero());
        (out.degree, out.coefficients.iter().map(rational).collect(), ok)
    };
    report.results.push(json!({ "degree": degree, "coefficients": coefficients }));
    report.stat("degree", degree);
    report.check("witness polynomial meets every constraint", ok, ok, "true");
    Ok(report)
}
