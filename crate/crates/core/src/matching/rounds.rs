//! The round-by-round procedure: every round links all compatible mutually
//! closest pairs among points that still hold stubs, simultaneously. Quadratic
//! per round at worst; used as the reference the greedy kernel is checked
//! against.

use super::{ForbiddenPairs, MatchResult, Matching};
use crate::geometry::SpatialIndex;
use crate::process::MarkedPointSet;
use crate::scalar::Real;

/// All pairs `(x, y)`, `x < y`, of active points that are each other's nearest
/// active compatible point.
pub fn mutually_closest_pairs<T: Real>(
    active: &[usize],
    compat: impl Fn(usize, usize) -> bool,
    index: &SpatialIndex<'_, T>,
) -> Vec<(usize, usize)> {
    let n = index.points().len();
    let mut is_active = vec![false; n];
    for &i in active {
        is_active[i] = true;
    }
    let mut nearest = vec![usize::MAX; n];
    for &x in active {
        if let Some((y, _)) = index.nearest(x, |y| !is_active[y] || !compat(x, y)) {
            nearest[x] = y;
        }
    }
    let mut pairs: Vec<(usize, usize)> = active
        .iter()
        .filter_map(|&x| {
            let y = nearest[x];
            (y != usize::MAX && x < y && nearest[y] == x).then_some((x, y))
        })
        .collect();
    pairs.sort_unstable();
    pairs
}

/// Runs the round procedure to completion.
pub fn stable_multi_match_rounds<T: Real>(m: &MarkedPointSet<T>, forbidden: &ForbiddenPairs) -> MatchResult<T> {
    stable_multi_match_rounds_traced(m, forbidden).0
}

/// As [`stable_multi_match_rounds`], also returning the round (starting at 0)
/// in which each edge was created, aligned with the matching's edge list.
pub fn stable_multi_match_rounds_traced<T: Real>(
    m: &MarkedPointSet<T>,
    forbidden: &ForbiddenPairs,
) -> (MatchResult<T>, Vec<usize>) {
    let points = m.points();
    let n = points.len();
    let index = SpatialIndex::build_default(points);
    let mut stubs = m.degrees().to_vec();
    let mut linked: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut matching = Matching::new(n);
    let mut created_in = Vec::new();
    for round in 0.. {
        let active: Vec<usize> = (0..n).filter(|&i| stubs[i] > 0).collect();
        let pairs = mutually_closest_pairs(
            &active,
            |x, y| !forbidden.contains(x, y) && !linked[x].contains(&y),
            &index,
        );
        if pairs.is_empty() {
            break;
        }
        for (x, y) in pairs {
            matching.push(x, y, points.dist(x, y));
            created_in.push(round);
            linked[x].push(y);
            linked[y].push(x);
            stubs[x] -= 1;
            stubs[y] -= 1;
        }
    }
    let steps = matching.len();
    (MatchResult { matching, leftover: stubs, steps }, created_in)
}
