//! Greedy kernel for the stable multi-matching.
//!
//! Pairs are ranked by `(distance, min index, max index)`. For pairs sharing an
//! endpoint this agrees with "nearest, ties to the smaller index", so the
//! globally smallest compatible pair among stub holders is always mutually
//! closest, and linking pairs in that order reproduces the round procedure.
//!
//! Each point keeps a cursor into its neighbour list sorted by
//! `(distance, index)`. A candidate that is skipped (no stubs left, already
//! linked, or incompatible) never becomes valid again, so cursors only move
//! forward and neighbour lists are fetched from the grid in growing pages.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use super::{MatchResult, Matching};
use crate::geometry::{PointSet, SpatialIndex};
use crate::scalar::{cmp_key, Real};

const FIRST_PAGE: usize = 8;

struct Cursor<T> {
    cands: Vec<(T, usize)>,
    pos: usize,
    page: usize,
    exhausted: bool,
}

impl<T> Default for Cursor<T> {
    fn default() -> Self {
        Self { cands: Vec::new(), pos: 0, page: FIRST_PAGE, exhausted: false }
    }
}

struct Proposal<T> {
    dist: T,
    lo: usize,
    hi: usize,
    from: usize,
    to: usize,
    generation: u32,
}

impl<T: Real> Proposal<T> {
    fn rank(&self, other: &Self) -> Ordering {
        cmp_key((self.dist, self.lo), (other.dist, other.lo)).then(self.hi.cmp(&other.hi))
    }
}

impl<T: Real> PartialEq for Proposal<T> {
    fn eq(&self, other: &Self) -> bool {
        self.rank(other).is_eq() && self.from == other.from
    }
}
impl<T: Real> Eq for Proposal<T> {}
impl<T: Real> PartialOrd for Proposal<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Proposal<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank(other).then(self.from.cmp(&other.from))
    }
}

struct Kernel<'a, T, C> {
    index: SpatialIndex<'a, T>,
    stubs: Vec<u32>,
    adjacency: Vec<Vec<usize>>,
    cursors: Vec<Cursor<T>>,
    generation: Vec<u32>,
    compat: C,
}

impl<T: Real, C: Fn(usize, usize) -> bool> Kernel<'_, T, C> {
    #[inline]
    fn linked(&self, x: usize, y: usize) -> bool {
        let (a, b) = if self.adjacency[x].len() <= self.adjacency[y].len() { (x, y) } else { (y, x) };
        self.adjacency[a].contains(&b)
    }

    #[inline]
    fn usable(&self, x: usize, y: usize) -> bool {
        self.stubs[y] > 0 && !self.linked(x, y) && (self.compat)(x, y)
    }

    /// Current nearest usable partner of `x`, advancing its cursor.
    fn nearest(&mut self, x: usize) -> Option<(T, usize)> {
        loop {
            let mut cursor = std::mem::take(&mut self.cursors[x]);
            while cursor.pos < cursor.cands.len() {
                let (d, y) = cursor.cands[cursor.pos];
                if self.usable(x, y) {
                    self.cursors[x] = cursor;
                    return Some((d, y));
                }
                cursor.pos += 1;
            }
            if cursor.exhausted {
                self.cursors[x] = cursor;
                return None;
            }
            let after = cursor.cands.last().copied();
            let page = cursor.page;
            let stubs = &self.stubs;
            cursor.cands = self.index.k_nearest(x, page, after, |y| stubs[y] == 0);
            cursor.exhausted = cursor.cands.len() < page;
            cursor.pos = 0;
            cursor.page = page.saturating_mul(2);
            if cursor.cands.is_empty() {
                cursor.cands.extend(after);
                cursor.pos = cursor.cands.len();
            }
            self.cursors[x] = cursor;
        }
    }

    fn propose(&mut self, x: usize, heap: &mut BinaryHeap<Reverse<Proposal<T>>>) {
        self.generation[x] = self.generation[x].wrapping_add(1);
        if self.stubs[x] == 0 {
            return;
        }
        if let Some((dist, y)) = self.nearest(x) {
            heap.push(Reverse(Proposal {
                dist,
                lo: x.min(y),
                hi: x.max(y),
                from: x,
                to: y,
                generation: self.generation[x],
            }));
        }
    }

    fn spend(&mut self, x: usize) {
        self.stubs[x] -= 1;
        if self.stubs[x] == 0 {
            self.index.remove(x);
        }
    }
}

/// Links stubs greedily in pair order. `compat` must not change during the
/// run; already-linked pairs are never linked twice.
pub(crate) fn greedy_match<T: Real>(
    points: &PointSet<T>,
    stubs: &[u32],
    compat: impl Fn(usize, usize) -> bool,
) -> MatchResult<T> {
    let n = points.len();
    assert_eq!(stubs.len(), n, "one stub count per point");
    let holders: Vec<usize> = (0..n).filter(|&i| stubs[i] > 0).collect();
    let cell = crate::geometry::index::default_cell_side(points.bbox().side, holders.len(), points.dim());
    let index = SpatialIndex::build_subset(points, &holders, cell).expect("positive cell side");
    let mut k = Kernel {
        index,
        stubs: stubs.to_vec(),
        adjacency: vec![Vec::new(); n],
        cursors: (0..n).map(|_| Cursor::default()).collect(),
        generation: vec![0; n],
        compat,
    };
    let mut matching = Matching::new(n);
    let mut heap = BinaryHeap::with_capacity(holders.len());
    for &x in &holders {
        k.propose(x, &mut heap);
    }
    while let Some(Reverse(p)) = heap.pop() {
        let (x, y) = (p.from, p.to);
        if p.generation != k.generation[x] || k.stubs[x] == 0 {
            continue;
        }
        if !k.usable(x, y) {
            k.propose(x, &mut heap);
            continue;
        }
        // The smallest live proposal is mutually closest; confirm from y's side.
        match k.nearest(y) {
            Some((_, back)) if back == x => {}
            _ => {
                debug_assert!(false, "popped pair ({x}, {y}) is not mutually closest");
                k.propose(y, &mut heap);
                k.propose(x, &mut heap);
                continue;
            }
        }
        matching.push(x, y, p.dist);
        k.adjacency[x].push(y);
        k.adjacency[y].push(x);
        k.spend(x);
        k.spend(y);
        k.propose(x, &mut heap);
        k.propose(y, &mut heap);
    }
    let steps = matching.len();
    MatchResult { matching, leftover: k.stubs, steps }
}
