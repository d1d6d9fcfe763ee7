//! Stable multi-matching of stubs, its round-based reference procedure,
//! bipartite variants and the stability verifier.

mod kernel;
mod rounds;
mod verify;

pub use rounds::{mutually_closest_pairs, stable_multi_match_rounds, stable_multi_match_rounds_traced};
pub use verify::{verify_stability, verify_stability_reference, verify_stability_stubs};

pub(crate) use kernel::greedy_match;

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::process::MarkedPointSet;
use crate::scalar::Real;

/// Unordered pairs of points that may not be linked.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ForbiddenPairs {
    pairs: HashSet<(usize, usize)>,
}

#[inline]
fn ordered(i: usize, j: usize) -> (usize, usize) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

impl ForbiddenPairs {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, i: usize, j: usize) -> Result<bool> {
        if i == j {
            return Err(Error::contract(format!("forbidden pair ({i}, {i}) is a loop")));
        }
        Ok(self.pairs.insert(ordered(i, j)))
    }

    #[inline]
    pub fn contains(&self, i: usize, j: usize) -> bool {
        !self.pairs.is_empty() && self.pairs.contains(&ordered(i, j))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Every edge of `matching`.
    pub fn from_matching<T>(matching: &Matching<T>) -> Self {
        Self {
            pairs: matching.edges.iter().map(|e| (e.i, e.j)).collect(),
        }
    }
}

/// An undirected edge with `i < j` and its length at creation time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge<T> {
    pub i: usize,
    pub j: usize,
    pub length: T,
}

impl<T> Edge<T> {
    pub fn other(&self, v: usize) -> usize {
        if v == self.i {
            self.j
        } else {
            self.i
        }
    }
}

/// A simple graph on point indices `0..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Matching<T> {
    edges: Vec<Edge<T>>,
    degree_used: Vec<u32>,
}

impl<T: Real> Matching<T> {
    pub fn new(n: usize) -> Self {
        Self { edges: Vec::new(), degree_used: vec![0; n] }
    }

    /// Rebuilds a matching from stored edges, rejecting loops, duplicates and
    /// out-of-range indices.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, T)>) -> Result<Self> {
        let mut m = Self::new(n);
        let mut seen = HashSet::new();
        for (i, j, length) in edges {
            if i >= n || j >= n {
                return Err(Error::contract(format!("edge ({i}, {j}) out of range for {n} points")));
            }
            if i == j {
                return Err(Error::contract(format!("self-loop at {i}")));
            }
            if !seen.insert(ordered(i, j)) {
                return Err(Error::contract(format!("duplicate edge ({i}, {j})")));
            }
            m.push(i, j, length);
        }
        Ok(m)
    }

    pub(crate) fn push(&mut self, i: usize, j: usize, length: T) {
        let (i, j) = ordered(i, j);
        self.edges.push(Edge { i, j, length });
        self.degree_used[i] += 1;
        self.degree_used[j] += 1;
    }

    pub(crate) fn extend_from(&mut self, other: &Matching<T>) {
        for e in &other.edges {
            self.push(e.i, e.j, e.length);
        }
    }

    pub fn edges(&self) -> &[Edge<T>] {
        &self.edges
    }

    pub fn degree_used(&self) -> &[u32] {
        &self.degree_used
    }

    pub fn point_count(&self) -> usize {
        self.degree_used.len()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Edges as ordered index pairs, for order-independent comparison.
    pub fn edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.edges.iter().map(|e| (e.i, e.j)).collect()
    }

    /// Incident edge ids per point.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.degree_used.len()];
        for (k, e) in self.edges.iter().enumerate() {
            inc[e.i].push(k);
            inc[e.j].push(k);
        }
        inc
    }

    /// Checks simplicity, stub budgets and stored lengths against `points`.
    /// Returns one message per violation.
    pub fn check(&self, points: &PointSet<T>, degrees: &[u32], forbidden: &ForbiddenPairs) -> Vec<String> {
        let mut problems = Vec::new();
        let n = points.len();
        if self.degree_used.len() != n || degrees.len() != n {
            problems.push(format!(
                "size mismatch: {} points, {} degrees, matching over {}",
                n,
                degrees.len(),
                self.degree_used.len()
            ));
            return problems;
        }
        let mut seen = HashSet::new();
        let tol = T::of(1e-12) * (T::one() + points.bbox().side);
        for e in &self.edges {
            if e.i == e.j {
                problems.push(format!("self-loop at {}", e.i));
                continue;
            }
            if !seen.insert(ordered(e.i, e.j)) {
                problems.push(format!("duplicate edge ({}, {})", e.i, e.j));
            }
            if forbidden.contains(e.i, e.j) {
                problems.push(format!("forbidden edge ({}, {})", e.i, e.j));
            }
            let d = points.dist(e.i, e.j);
            if (d - e.length).abs() > tol {
                problems.push(format!("edge ({}, {}) stores length {} but points are {} apart", e.i, e.j, e.length, d));
            }
        }
        for (i, (&used, &deg)) in self.degree_used.iter().zip(degrees).enumerate() {
            if used > deg {
                problems.push(format!("point {i} uses {used} stubs but has {deg}"));
            }
        }
        problems
    }
}

/// Outcome of a matching run on a finite window.
#[derive(Clone, Debug, PartialEq)]
pub struct MatchResult<T> {
    pub matching: Matching<T>,
    /// Stubs per point that were never matched.
    pub leftover: Vec<u32>,
    /// Number of edges created.
    pub steps: usize,
}

impl<T: Real> MatchResult<T> {
    pub fn leftover_total(&self) -> u64 {
        self.leftover.iter().map(|&k| k as u64).sum()
    }

    /// Leftover stubs divided by all stubs (0 for an empty instance).
    pub fn leftover_fraction(&self) -> f64 {
        let used: u64 = self.matching.degree_used().iter().map(|&k| k as u64).sum();
        let total = used + self.leftover_total();
        if total == 0 {
            0.0
        } else {
            self.leftover_total() as f64 / total as f64
        }
    }

    /// Result for a given matching and stub budget.
    pub fn from_matching(matching: Matching<T>, degrees: &[u32]) -> Self {
        let leftover = degrees
            .iter()
            .zip(matching.degree_used())
            .map(|(&d, &u)| d.saturating_sub(u))
            .collect();
        let steps = matching.len();
        Self { matching, leftover, steps }
    }
}

/// The stable multi-matching of `m`, with `forbidden` pairs never linked.
///
/// Greedy kernel: every point holding a stub proposes to its nearest
/// compatible stub holder; the globally shortest live proposal is linked, and
/// stale proposals are re-issued lazily when they surface. Produces the same
/// edge set as [`stable_multi_match_rounds`].
pub fn stable_multi_match<T: Real>(m: &MarkedPointSet<T>, forbidden: &ForbiddenPairs) -> MatchResult<T> {
    greedy_match(m.points(), m.degrees(), |i, j| !forbidden.contains(i, j))
}

/// Stable matching between `red` and `blue` where only red–blue pairs are
/// compatible; every point of the smaller class ends up matched.
pub fn stable_bipartite_match<T: Real>(red: &[usize], blue: &[usize], points: &PointSet<T>) -> Result<Matching<T>> {
    let n = points.len();
    let mut class = vec![0u8; n];
    let mut stubs = vec![0u32; n];
    for (&i, c) in red.iter().map(|i| (i, 1u8)).chain(blue.iter().map(|i| (i, 2u8))) {
        if i >= n {
            return Err(Error::contract(format!("index {i} out of range")));
        }
        if class[i] != 0 {
            return Err(Error::contract(format!("point {i} listed twice or in both classes")));
        }
        class[i] = c;
        stubs[i] = 1;
    }
    Ok(greedy_match(points, &stubs, |i, j| class[i] != class[j]).matching)
}
