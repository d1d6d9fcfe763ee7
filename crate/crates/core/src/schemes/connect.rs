use super::partial::{partial_matching, PartialMatchingPlan};
use super::path::{build_paths, complete_with_stable};
use crate::analysis::components;
use crate::error::{Error, Result};
use crate::matching::MatchResult;
use crate::process::MarkedPointSet;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct ConnectivityOutput<T> {
    pub result: MatchResult<T>,
    pub paths: Vec<Vec<usize>>,
    /// Plan used to attach degree-1 points; `None` when there are none.
    pub plan: Option<PartialMatchingPlan>,
    /// Degree-1 points the partial matching could not attach.
    pub unattached: Vec<usize>,
    pub component_count: usize,
}

/// Paths through the degree-2+ points, then every degree-1 point attached to a
/// spare stub (beyond the two path stubs) of a degree-3+ point, then a stable
/// multi-matching of whatever is left with existing edges forbidden.
pub fn connectivity_scheme<T: Real>(m: &MarkedPointSet<T>) -> Result<ConnectivityOutput<T>> {
    if m.total_stubs() < 2 * m.len() as u64 {
        return Err(Error::Infeasible(format!(
            "mean degree {:.4} is below 2",
            m.total_stubs() as f64 / m.len().max(1) as f64
        )));
    }
    let (mut base, paths, _) = build_paths(m)?;
    let degrees = m.degrees();
    let demand: Vec<usize> = (0..m.len()).filter(|&i| degrees[i] == 1).collect();
    let supply: Vec<(usize, u32)> = (0..m.len()).filter(|&i| degrees[i] >= 3).map(|i| (i, degrees[i] - 2)).collect();
    let (plan, unattached) = if demand.is_empty() {
        (None, Vec::new())
    } else {
        let partial = partial_matching(m.points(), &demand, &supply)?;
        base.extend_from(&partial.matching);
        (Some(partial.plan), partial.unmatched)
    };
    let result = complete_with_stable(m, base);
    let component_count = components(m.len(), &result.matching).component_count;
    Ok(ConnectivityOutput { result, paths, plan, unattached, component_count })
}
