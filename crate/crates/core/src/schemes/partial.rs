use super::types::{assign_blocks, nn_rank};
use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::matching::{stable_bipartite_match, Matching};
use crate::process::DegreeDistribution;
use crate::scalar::Real;

/// Relative tolerance for treating the demand as equal to the capacity.
const EQUALITY_TOL: f64 = 1e-12;

/// How many demand points go to each level of a partial matching.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialMatchingPlan {
    /// Number of levels.
    pub m: u32,
    /// Set when demand equals capacity and `m` is unbounded in principle; `m`
    /// is then the largest support value of the capacity law.
    pub unbounded: bool,
    /// Share of demand points per level; sums to one.
    pub p: Vec<f64>,
    /// Cumulative shares `p_1 + ... + p_i` for `i < m`: the nearest-neighbour
    /// rank quantiles separating consecutive levels.
    pub cumulative: Vec<f64>,
    pub lambda_r: f64,
    pub lambda_s: f64,
}

/// Plans the matching of demand points (intensity `lambda_r`) to spare stubs
/// of supply points (intensity `lambda_s`, spare counts with law `nu`).
/// Level `i` serves a `p_i` share of the demand from the supply points with at
/// least `i` spare stubs.
pub fn plan_partial_matching(nu: &DegreeDistribution, lambda_r: f64, lambda_s: f64) -> Result<PartialMatchingPlan> {
    if !(lambda_r >= 0.0 && lambda_s >= 0.0) || !lambda_r.is_finite() || !lambda_s.is_finite() {
        return Err(Error::Parameter(format!("intensities must be non-negative, got {lambda_r} and {lambda_s}")));
    }
    let capacity = nu.mean() * lambda_s;
    let equal = (lambda_r - capacity).abs() <= EQUALITY_TOL * capacity.max(f64::MIN_POSITIVE);
    if lambda_r > capacity && !equal {
        return Err(Error::Infeasible(format!(
            "demand {lambda_r} exceeds spare capacity {capacity} = {} x {lambda_s}",
            nu.mean()
        )));
    }
    let mut p = Vec::new();
    let m = if lambda_r == 0.0 {
        1
    } else if equal {
        nu.max_value()
    } else {
        let mut acc = 0.0;
        let mut j = 0;
        while acc < lambda_r {
            j += 1;
            acc += nu.tail(j) * lambda_s;
        }
        j
    };
    for i in 1..m {
        p.push(nu.tail(i) * lambda_s / lambda_r);
    }
    let head: f64 = p.iter().sum();
    p.push(1.0 - head);
    let cumulative = p[..p.len() - 1]
        .iter()
        .scan(0.0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect();
    Ok(PartialMatchingPlan { m, unbounded: equal && lambda_r > 0.0, p, cumulative, lambda_r, lambda_s })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartialMatchingOutput<T> {
    pub plan: PartialMatchingPlan,
    pub matching: Matching<T>,
    /// Level of every demand point, in the demand order.
    pub level_of: Vec<u32>,
    /// Demand points left without a partner.
    pub unmatched: Vec<usize>,
}

/// Matches every demand point to one spare stub of a supply point. Demand
/// points are ranked by nearest-demand-neighbour distance and cut into levels
/// by the plan's quantiles; level `i` is stably matched to the supply points
/// holding at least `i` spare stubs.
pub fn partial_matching<T: Real>(
    points: &PointSet<T>,
    demand: &[usize],
    supply: &[(usize, u32)],
) -> Result<PartialMatchingOutput<T>> {
    let supply: Vec<(usize, u32)> = supply.iter().copied().filter(|s| s.1 > 0).collect();
    let volume = points.bbox().volume().as_f64();
    let lambda_r = demand.len() as f64 / volume;
    let lambda_s = supply.len() as f64 / volume;
    let n = points.len();
    if demand.is_empty() {
        let plan = PartialMatchingPlan { m: 1, unbounded: false, p: vec![1.0], cumulative: Vec::new(), lambda_r, lambda_s };
        return Ok(PartialMatchingOutput { plan, matching: Matching::new(n), level_of: Vec::new(), unmatched: Vec::new() });
    }
    if supply.is_empty() {
        return Err(Error::Infeasible(format!("{} demand points and no spare stubs", demand.len())));
    }
    let nu = DegreeDistribution::empirical(supply.iter().map(|s| s.1))?;
    let plan = plan_partial_matching(&nu, lambda_r, lambda_s)?;
    let ranked = nn_rank(points, demand);
    let total = ranked.len();
    let mut bounds: Vec<usize> = plan.cumulative.iter().map(|&c| ((c * total as f64).round() as usize).min(total)).collect();
    bounds.push(total);
    let mut blocks = Vec::with_capacity(bounds.len());
    let mut prev = 0;
    for b in bounds {
        let b = b.max(prev);
        blocks.push(b - prev);
        prev = b;
    }
    let types = assign_blocks(n, plan.m, &ranked, &blocks);
    let mut matching = Matching::new(n);
    for level in 1..=plan.m {
        let red = types.members_of(level);
        let blue: Vec<usize> = supply.iter().filter(|s| s.1 >= level).map(|s| s.0).collect();
        let step = stable_bipartite_match(&red, &blue, points)?;
        for e in step.edges() {
            matching.push(e.i, e.j, e.length);
        }
    }
    let used = matching.degree_used();
    let unmatched = demand.iter().copied().filter(|&r| used[r] == 0).collect();
    let level_of = demand.iter().map(|&r| types.type_of[r].expect("every demand point has a level")).collect();
    Ok(PartialMatchingOutput { plan, matching, level_of, unmatched })
}
