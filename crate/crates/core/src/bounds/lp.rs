//! Phase-one simplex with Bland's rule, and the minimum polynomial degree
//! meeting interval constraints at geometric points.

use crate::error::{Error, Result};
use crate::scalar::LpScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// Σ coeffs[j]·z_j (relation) rhs, over free variables z.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearConstraint<S> {
    pub coeffs: Vec<S>,
    pub relation: Relation,
    pub rhs: S,
}

/// A feasible point of the system, or `None`. Variables are unrestricted in
/// sign.
pub fn find_feasible_point<S: LpScalar>(num_vars: usize, constraints: &[LinearConstraint<S>]) -> Result<Option<Vec<S>>> {
    let rows = constraints.len();
    if let Some(c) = constraints.iter().find(|c| c.coeffs.len() != num_vars) {
        return Err(Error::DimensionMismatch(format!("constraint has {} coefficients, expected {num_vars}", c.coeffs.len())));
    }
    let slacks = constraints.iter().filter(|c| c.relation != Relation::Eq).count();
    // columns: z⁺ (num_vars), z⁻ (num_vars), slacks, artificials, rhs
    let art0 = 2 * num_vars + slacks;
    let width = art0 + rows + 1;
    let zero = S::from_ratio(0, 1);
    let mut tab: Vec<Vec<S>> = Vec::with_capacity(rows);
    let mut slack_col = 2 * num_vars;
    for (i, c) in constraints.iter().enumerate() {
        let mut row = vec![zero.clone(); width];
        for (j, a) in c.coeffs.iter().enumerate() {
            row[j] = a.clone();
            row[num_vars + j] = -a.clone();
        }
        match c.relation {
            Relation::Le => {
                row[slack_col] = S::from_ratio(1, 1);
                slack_col += 1;
            }
            Relation::Ge => {
                row[slack_col] = S::from_ratio(-1, 1);
                slack_col += 1;
            }
            Relation::Eq => {}
        }
        row[width - 1] = c.rhs.clone();
        if c.rhs.is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
        }
        row[art0 + i] = S::from_ratio(1, 1);
        tab.push(row);
    }
    let mut basis: Vec<usize> = (art0..art0 + rows).collect();
    // reduced costs of the phase-one objective Σ artificials
    let mut cost = vec![zero.clone(); width];
    for row in &tab {
        for j in 0..width {
            if j < art0 || j == width - 1 {
                cost[j] = cost[j].clone() - row[j].clone();
            }
        }
    }

    loop {
        let Some(enter) = (0..width - 1).find(|&j| cost[j].is_negative() && !cost[j].is_negligible()) else { break };
        let mut leave: Option<(usize, S)> = None;
        for (i, row) in tab.iter().enumerate() {
            let a = &row[enter];
            if a.is_positive() && !a.is_negligible() {
                let ratio = row[width - 1].clone() / a.clone();
                let better = match &leave {
                    None => true,
                    Some((k, best)) => ratio < *best || (!(ratio > *best) && basis[i] < basis[*k]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else {
            return Err(Error::Infeasible("phase-one objective unbounded".into()));
        };
        let pivot = tab[pr][enter].clone();
        for v in tab[pr].iter_mut() {
            *v = v.clone() / pivot.clone();
        }
        let prow = tab[pr].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i != pr && !row[enter].is_negligible() {
                let factor = row[enter].clone();
                for (v, p) in row.iter_mut().zip(&prow) {
                    *v = v.clone() - factor.clone() * p.clone();
                }
            }
        }
        let factor = cost[enter].clone();
        for (v, p) in cost.iter_mut().zip(&prow) {
            *v = v.clone() - factor.clone() * p.clone();
        }
        basis[pr] = enter;
    }

    // cost[rhs] holds −(Σ artificials)
    if !cost[width - 1].is_negligible() {
        return Ok(None);
    }
    let mut z = vec![zero.clone(); 2 * num_vars];
    for (i, &b) in basis.iter().enumerate() {
        if b < 2 * num_vars {
            z[b] = tab[i][width - 1].clone();
        }
    }
    Ok(Some((0..num_vars).map(|j| z[j].clone() - z[num_vars + j].clone()).collect()))
}

/// lower ≤ f(ξ^exponent) ≤ upper.
#[derive(Clone, Debug, PartialEq)]
pub struct PointConstraint<S> {
    pub exponent: usize,
    pub lower: Option<S>,
    pub upper: Option<S>,
}

/// The rank-testing constraint set for even n: 0 ≤ f(ξ^i) ≤ 1 for i < n,
/// f(1) ≤ 1/3, and f(ξ^i) ≥ 2/3 for n/2 ≤ i < n.
pub fn rank_testing_constraints<S: LpScalar>(n: usize) -> Result<Vec<PointConstraint<S>>> {
    if n < 2 {
        return Err(Error::DimensionMismatch("rank-testing constraints need n ≥ 2".into()));
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let lower = if i >= n / 2 { S::from_ratio(2, 3) } else { S::from_ratio(0, 1) };
        let upper = if i == 0 { S::from_ratio(1, 3) } else { S::from_ratio(1, 1) };
        out.push(PointConstraint { exponent: i, lower: Some(lower), upper: Some(upper) });
    }
    Ok(out)
}

/// Interval constraints 0 ≤ f(ξ^i) ≤ 1 for i < n.
pub fn unit_interval_constraints<S: LpScalar>(n: usize) -> Vec<PointConstraint<S>> {
    (0..n).map(|i| PointConstraint { exponent: i, lower: Some(S::from_ratio(0, 1)), upper: Some(S::from_ratio(1, 1)) }).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegreeOutcome<S> {
    pub degree: usize,
    /// Coefficients of a feasible polynomial, constant term first.
    pub coefficients: Vec<S>,
}

/// Smallest d such that some real polynomial of degree ≤ d satisfies every
/// constraint at the points ξ⁰, …, ξ^{n−1}.
pub fn min_feasible_degree<S: LpScalar>(n: usize, xi: &S, constraints: &[PointConstraint<S>]) -> Result<DegreeOutcome<S>> {
    if let Some(c) = constraints.iter().find(|c| c.exponent >= n.max(1)) {
        return Err(Error::DimensionMismatch(format!("constraint at ξ^{} outside ξ⁰..ξ^{}", c.exponent, n.saturating_sub(1))));
    }
    let one = S::from_ratio(1, 1);
    let power = |e: usize| (0..e).fold(one.clone(), |acc, _| acc * xi.clone());
    for d in 0..n.max(1) {
        let mut rows = Vec::new();
        for c in constraints {
            let x = power(c.exponent);
            let coeffs: Vec<S> = (0..=d)
                .scan(one.clone(), |p, _| {
                    let cur = p.clone();
                    *p = p.clone() * x.clone();
                    Some(cur)
                })
                .collect();
            if let Some(lo) = &c.lower {
                rows.push(LinearConstraint { coeffs: coeffs.clone(), relation: Relation::Ge, rhs: lo.clone() });
            }
            if let Some(hi) = &c.upper {
                rows.push(LinearConstraint { coeffs, relation: Relation::Le, rhs: hi.clone() });
            }
        }
        if let Some(coefficients) = find_feasible_point(d + 1, &rows)? {
            return Ok(DegreeOutcome { degree: d, coefficients });
        }
    }
    Err(Error::Infeasible(format!("no polynomial of degree ≤ {} meets the constraints", n.saturating_sub(1))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::Zero;

    type Q = BigRational;

    fn q(a: i64, b: i64) -> Q {
        Q::new(a.into(), b.into())
    }

    fn eval(c: &[Q], x: &Q) -> Q {
        c.iter().rev().fold(Q::zero(), |acc, a| acc * x + a)
    }

    #[test]
    fn small_systems() {
        // z0 + z1 ≤ 1, z0 ≥ 2, z1 ≥ −3
        let cs = vec![
            LinearConstraint { coeffs: vec![q(1, 1), q(1, 1)], relation: Relation::Le, rhs: q(1, 1) },
            LinearConstraint { coeffs: vec![q(1, 1), q(0, 1)], relation: Relation::Ge, rhs: q(2, 1) },
            LinearConstraint { coeffs: vec![q(0, 1), q(1, 1)], relation: Relation::Ge, rhs: q(-3, 1) },
        ];
        let z = find_feasible_point(2, &cs).unwrap().unwrap();
        assert!(z[0].clone() + z[1].clone() <= q(1, 1) && z[0] >= q(2, 1) && z[1] >= q(-3, 1));
        let mut bad = cs.clone();
        bad.push(LinearConstraint { coeffs: vec![q(0, 1), q(1, 1)], relation: Relation::Le, rhs: q(-4, 1) });
        assert!(find_feasible_point(2, &bad).unwrap().is_none());
        let eq = vec![LinearConstraint { coeffs: vec![q(2, 1)], relation: Relation::Eq, rhs: q(-3, 1) }];
        assert_eq!(find_feasible_point(1, &eq).unwrap().unwrap(), vec![q(-3, 2)]);
    }

    #[test]
    fn rank_testing_degrees() {
        let xi = q(2, 1);
        let expected = [(2, 1), (4, 2), (6, 2), (8, 3)];
        for (n, d) in expected {
            let cs = rank_testing_constraints::<Q>(n).unwrap();
            let out = min_feasible_degree(n, &xi, &cs).unwrap();
            assert_eq!(out.degree, d, "n = {n}");
            for c in &cs {
                let v = eval(&out.coefficients, &(0..c.exponent).fold(q(1, 1), |a, _| a * &xi));
                assert!(c.lower.as_ref().is_none_or(|lo| v >= *lo));
                assert!(c.upper.as_ref().is_none_or(|hi| v <= *hi));
            }
        }
        let f = min_feasible_degree(4, &2.0f64, &rank_testing_constraints::<f64>(4).unwrap()).unwrap();
        assert_eq!(f.degree, 2);
    }

    #[test]
    fn unit_interval_only_needs_constants() {
        let out = min_feasible_degree(5, &q(3, 1), &unit_interval_constraints::<Q>(5)).unwrap();
        assert_eq!(out.degree, 0);
    }

    #[test]
    fn adding_constraints_never_lowers_degree() {
        let xi = q(2, 1);
        let all = rank_testing_constraints::<Q>(6).unwrap();
        let mut prev = 0;
        for k in 0..=all.len() {
            let d = min_feasible_degree(6, &xi, &all[..k]).unwrap().degree;
            assert!(d >= prev);
            prev = d;
        }
    }
}
