//! Stability check.
//!
//! A point is *willing* towards a pair at distance `r` if it still has a
//! leftover stub or an incident edge strictly longer than `r`. A compatible,
//! unlinked pair is unstable when both of its points are willing. Leftover
//! stubs count as willingness so that finite-window results can be checked.

use std::collections::BTreeSet;

use super::MatchResult;
use crate::geometry::{PointSet, SpatialIndex};
use crate::process::MarkedPointSet;
use crate::scalar::Real;

struct Willingness<T> {
    /// Longest incident edge, or `None` for an unbounded radius (leftover stub).
    radius: Vec<Option<T>>,
    linked: Vec<Vec<usize>>,
}

impl<T: Real> Willingness<T> {
    fn new<R: AsRef<[u32]>>(n: usize, result: &MatchResult<T>, leftover: R) -> Self {
        let leftover = leftover.as_ref();
        let mut radius: Vec<Option<T>> = vec![Some(T::zero()); n];
        let mut linked = vec![Vec::new(); n];
        for e in result.matching.edges() {
            for (a, b) in [(e.i, e.j), (e.j, e.i)] {
                linked[a].push(b);
                if let Some(r) = radius[a].as_mut() {
                    if e.length > *r {
                        *r = e.length;
                    }
                }
            }
        }
        for (i, &left) in leftover.iter().enumerate() {
            if left > 0 {
                radius[i] = None;
            }
        }
        Self { radius, linked }
    }

    #[inline]
    fn willing(&self, x: usize, dist: T) -> bool {
        self.radius[x].is_none_or(|r| r > dist)
    }

    #[inline]
    fn unstable(&self, x: usize, y: usize, dist: T, compat: &impl Fn(usize, usize) -> bool) -> bool {
        self.willing(x, dist) && self.willing(y, dist) && !self.linked[x].contains(&y) && compat(x, y)
    }
}

/// All-pairs reference check. Returns unstable pairs `(i, j)`, `i < j`, sorted.
pub fn verify_stability_reference<T: Real>(
    m: &MarkedPointSet<T>,
    result: &MatchResult<T>,
    compat: impl Fn(usize, usize) -> bool,
) -> Vec<(usize, usize)> {
    let points = m.points();
    let w = Willingness::new(points.len(), result, &result.leftover);
    let mut out = Vec::new();
    for x in 0..points.len() {
        for y in x + 1..points.len() {
            if w.unstable(x, y, points.dist(x, y), &compat) {
                out.push((x, y));
            }
        }
    }
    out
}

/// Pruned check: each point only scans neighbours closer than its longest
/// edge, plus all pairs of points with leftover stubs. Agrees with
/// [`verify_stability_reference`].
pub fn verify_stability<T: Real>(
    m: &MarkedPointSet<T>,
    result: &MatchResult<T>,
    compat: impl Fn(usize, usize) -> bool,
) -> Vec<(usize, usize)> {
    verify_stability_stubs(m.points(), result, compat)
}

/// [`verify_stability`] on a bare point set, with the stub budget implied by
/// `result` (used + leftover). Points with no stubs at all are never willing.
pub fn verify_stability_stubs<T: Real>(
    points: &PointSet<T>,
    result: &MatchResult<T>,
    compat: impl Fn(usize, usize) -> bool,
) -> Vec<(usize, usize)> {
    let n = points.len();
    let w = Willingness::new(n, result, &result.leftover);
    let index = SpatialIndex::build_default(points);
    let mut found = BTreeSet::new();
    let mut open = Vec::new();
    for x in 0..n {
        match w.radius[x] {
            None => open.push(x),
            Some(r) if r > T::zero() => index.within(x, r, |y, dist| {
                if dist < r && w.unstable(x, y, dist, &compat) {
                    found.insert((x.min(y), x.max(y)));
                }
            }),
            Some(_) => {}
        }
    }
    for (a, &x) in open.iter().enumerate() {
        for &y in &open[a + 1..] {
            if w.unstable(x, y, points.dist(x, y), &compat) {
                found.insert((x, y));
            }
        }
    }
    found.into_iter().collect()
}
