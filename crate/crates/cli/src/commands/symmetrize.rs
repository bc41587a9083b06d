use anyhow::Result;
use mvlab::bounds::{low_degree_fit_check, symmetrize_acceptance, BuiltinCircuit, FitOutcome, SymmetrizeMode};
use mvlab::ff::Matrix;
use mvlab::instance_rng;
use serde_json::json;

use crate::input::{check_dims, field};
use crate::report::Report;
use crate::{Context, ProfileMode, SymmetrizeArgs, UsageError};

/// Residual tolerance for exhaustive profiles.
pub const EXACT_RESIDUAL_TOL: f64 = 1e-8;

pub fn run(args: &SymmetrizeArgs, ctx: Context) -> Result<Report> {
    let mut report = Report::new("symmetrize", ctx.seed);
    report.param("q", args.q);
    let q = args.q as f64;
    let (xs, ys, t, tol) = if let Some(values) = &args.values {
        if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(UsageError("profile values must lie in [0, 1]".into()).into());
        }
        let t = args.t.ok_or_else(|| UsageError("give --t with a hand-set profile".into()))?;
        report.param("profile", "hand-set").param("t", t);
        let xs: Vec<f64> = (0..values.len()).map(|d| q.powi(d as i32)).collect();
        for (d, v) in values.iter().enumerate() {
            report.results.push(json!({ "nullity": d, "abscissa": xs[d], "value": v }));
        }
        (xs, values.clone(), t, EXACT_RESIDUAL_TOL)
    } else {
        let (Some(m), Some(n)) = (args.m, args.n) else {
            return Err(UsageError("give --m and --n, or --values".into()).into());
        };
        check_dims(m, n, ctx.max_dim)?;
        let f = field(args.q)?;
        let circuit = BuiltinCircuit::parse(&args.circuit).ok_or_else(|| UsageError(format!("unknown circuit {:?}", args.circuit)))?;
        // surface unsupported parameters before the sweep
        circuit.accept(&Matrix::zeros(&f, m, n))?;
        let t = args.t.unwrap_or(circuit.queries());
        let (mode, tol) = match args.mode {
            ProfileMode::Exhaustive => (SymmetrizeMode::Exhaustive, EXACT_RESIDUAL_TOL),
            ProfileMode::Sampled => (SymmetrizeMode::Sampled { per_nullity: args.samples }, 5.0 / (args.samples as f64).sqrt()),
        };
        report
            .param("m", m)
            .param("n", n)
            .param("circuit", &args.circuit)
            .param("t", t)
            .param("mode", format!("{:?}", args.mode).to_lowercase());
        if args.mode == ProfileMode::Sampled {
            report.param("samples", args.samples);
        }
        let accept = |a: &Matrix| circuit.accept(a).unwrap_or(f64::NAN);
        let mut rng = instance_rng(ctx.seed, 0);
        let profile = symmetrize_acceptance(&accept, m, n, &f, mode, &mut rng)?;
        for p in &profile.points {
            report
                .results
                .push(json!({ "nullity": p.nullity, "abscissa": q.powi(p.nullity as i32), "value": p.value, "samples": p.samples }));
        }
        (profile.abscissae(), profile.values(), t, tol)
    };
    if ys.iter().any(|v| v.is_nan()) {
        return Err(UsageError("circuit evaluation failed on some matrix".into()).into());
    }
    let cap = 2 * t;
    report.theory("degree_cap", cap).theory("residual_tolerance", tol);
    match low_degree_fit_check(&xs, &ys, cap)? {
        FitOutcome::Residual(r) => {
            report.stat("fit_residual", r);
            report.check("low-degree fit", r < tol, r, format!("< {tol:e}"));
        }
        FitOutcome::Vacuous { points, degree_cap } => {
            report.stat("fit_residual", "vacuous");
            report.check("low-degree fit", true, "vacuous", format!("needs {} points, have {points}", degree_cap + 2));
        }
    }
    Ok(report)
}
