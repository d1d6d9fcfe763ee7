use std::collections::BinaryHeap;

use super::PointSet;
use crate::error::{Error, Result};
use crate::scalar::{cmp_key, Real};

/// Upper bound on the number of grid cells, relative to the point count.
const MAX_CELLS_PER_POINT: usize = 16;
const MIN_CELL_BUDGET: usize = 1 << 16;

/// Uniform grid over a box for exact nearest-neighbour and range queries.
///
/// Point `p` lives in cell `floor(p / cell_side)` (componentwise, wrapped on a
/// torus). Queries expand Chebyshev rings of cells around the query cell and
/// stop once no unvisited cell can hold a closer point, so results are exact.
/// Ties in distance go to the smaller point index.
#[derive(Clone, Debug)]
pub struct SpatialIndex<'a, T> {
    points: &'a PointSet<T>,
    cell_side: T,
    cells_per_axis: usize,
    buckets: Vec<Vec<usize>>,
    len: usize,
}

/// `(distance, index)` ordered lexicographically; max-heap element.
#[derive(Clone, Copy, Debug)]
struct Key<T>(T, usize);

impl<T: Real> PartialEq for Key<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}
impl<T: Real> Eq for Key<T> {}
impl<T: Real> PartialOrd for Key<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Key<T> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        cmp_key((self.0, self.1), (other.0, other.1))
    }
}

impl<'a, T: Real> SpatialIndex<'a, T> {
    /// Index over all points with the default cell side, about one point per
    /// cell at the set's density.
    pub fn build_default(points: &'a PointSet<T>) -> Self {
        let all: Vec<usize> = (0..points.len()).collect();
        Self::build_subset(points, &all, default_cell_side(points.bbox().side, all.len(), points.dim()))
            .expect("default cell side is positive")
    }

    pub fn build(points: &'a PointSet<T>, cell_side: T) -> Result<Self> {
        let all: Vec<usize> = (0..points.len()).collect();
        Self::build_subset(points, &all, cell_side)
    }

    /// Index over the listed points only. Queries never return other points.
    pub fn build_subset(points: &'a PointSet<T>, members: &[usize], cell_side: T) -> Result<Self> {
        if !(cell_side > T::zero()) || !cell_side.is_finite() {
            return Err(Error::Parameter(format!("cell side must be positive, got {cell_side}")));
        }
        let bx = points.bbox();
        let d = bx.dim;
        let mut k = (bx.side / cell_side).ceil().to_usize().unwrap_or(usize::MAX).max(1);
        // Coarsen absurdly fine grids so memory stays proportional to the point count.
        let budget = (members.len() * MAX_CELLS_PER_POINT).max(MIN_CELL_BUDGET);
        let cap = (budget as f64).powf(1.0 / d as f64).floor().max(1.0) as usize;
        k = k.min(cap);
        let cell_side = bx.side / T::of_usize(k);
        let mut index = Self {
            points,
            cell_side,
            cells_per_axis: k,
            buckets: Vec::new(),
            len: 0,
        };
        if members.is_empty() {
            return Ok(index);
        }
        index.buckets = vec![Vec::new(); k.pow(d as u32)];
        for &i in members {
            let cell = index.cell_of(points.point(i));
            index.buckets[cell].push(i);
        }
        index.len = members.len();
        Ok(index)
    }

    pub fn points(&self) -> &'a PointSet<T> {
        self.points
    }

    pub fn cell_side(&self) -> T {
        self.cell_side
    }

    pub fn cells_per_axis(&self) -> usize {
        self.cells_per_axis
    }

    /// Number of indexed points.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Sizes of the non-empty buckets.
    pub fn occupied_bucket_sizes(&self) -> Vec<usize> {
        self.buckets.iter().map(Vec::len).filter(|&n| n > 0).collect()
    }

    fn axis_cell(&self, x: T) -> usize {
        let c = (x / self.cell_side).floor().to_usize().unwrap_or(0);
        c.min(self.cells_per_axis - 1)
    }

    /// Linear bucket id of a position.
    pub fn cell_of(&self, p: &[T]) -> usize {
        let k = self.cells_per_axis;
        p.iter().rev().fold(0, |acc, &x| acc * k + self.axis_cell(x))
    }

    /// Drops a point from the index. Used by the matching kernel to retire
    /// points that have no stubs left.
    pub(crate) fn remove(&mut self, i: usize) {
        if self.buckets.is_empty() {
            return;
        }
        let cell = self.cell_of(self.points.point(i));
        let bucket = &mut self.buckets[cell];
        if let Some(pos) = bucket.iter().position(|&j| j == i) {
            bucket.swap_remove(pos);
            self.len -= 1;
        }
    }

    fn max_ring(&self) -> usize {
        let k = self.cells_per_axis;
        if self.points.bbox().periodic {
            k - 1 - (k - 1) / 2
        } else {
            k - 1
        }
    }

    /// Visits every bucket at Chebyshev cell distance exactly `r` from `center`.
    fn for_each_ring_bucket(&self, center: &[usize], r: usize, f: &mut impl FnMut(&[usize])) {
        let d = center.len();
        let k = self.cells_per_axis as isize;
        let periodic = self.points.bbox().periodic;
        let half_lo = (k - 1) / 2;
        let half_hi = k - 1 - half_lo;
        let r = r as isize;
        let mut ranges = Vec::with_capacity(d);
        for &c in center {
            let c = c as isize;
            let (lo, hi) = if periodic {
                (-r.min(half_lo), r.min(half_hi))
            } else {
                (-r.min(c), r.min(k - 1 - c))
            };
            ranges.push((lo, hi));
        }
        let mut offsets = vec![0isize; d];
        self.ring_rec(center, r, &ranges, 0, false, &mut offsets, f);
    }

    #[allow(clippy::too_many_arguments)]
    fn ring_rec(
        &self,
        center: &[usize],
        r: isize,
        ranges: &[(isize, isize)],
        axis: usize,
        hit: bool,
        offsets: &mut [isize],
        f: &mut impl FnMut(&[usize]),
    ) {
        let d = center.len();
        if axis == d {
            if !hit {
                return;
            }
            let k = self.cells_per_axis as isize;
            let mut lin = 0usize;
            for a in (0..d).rev() {
                let c = (center[a] as isize + offsets[a]).rem_euclid(k) as usize;
                lin = lin * self.cells_per_axis + c;
            }
            f(&self.buckets[lin]);
            return;
        }
        let (lo, hi) = ranges[axis];
        if axis == d - 1 && !hit {
            // Only the two faces of the ring remain.
            if lo == -r {
                offsets[axis] = lo;
                self.ring_rec(center, r, ranges, axis + 1, true, offsets, f);
            }
            if hi == r && r != 0 {
                offsets[axis] = hi;
                self.ring_rec(center, r, ranges, axis + 1, true, offsets, f);
            }
            return;
        }
        for o in lo..=hi {
            offsets[axis] = o;
            self.ring_rec(center, r, ranges, axis + 1, hit || o.abs() == r, offsets, f);
        }
    }

    fn center_cell(&self, p: &[T]) -> Vec<usize> {
        p.iter().map(|&x| self.axis_cell(x)).collect()
    }

    /// Smallest possible distance to a point in ring `r + 1`, minus a rounding slack.
    fn ring_floor(&self, r: usize) -> T {
        let raw = self.cell_side * T::of_usize(r);
        raw - (raw + self.points.bbox().side) * T::epsilon() * T::of(16.0)
    }

    /// Up to `k` indexed points closest to point `from`, sorted by
    /// `(distance, index)`, restricted to keys strictly greater than `after`
    /// and to points for which `exclude` is false. `from` itself is skipped.
    pub fn k_nearest(
        &self,
        from: usize,
        k: usize,
        after: Option<(T, usize)>,
        exclude: impl Fn(usize) -> bool,
    ) -> Vec<(T, usize)> {
        if self.len == 0 || k == 0 {
            return Vec::new();
        }
        let q = self.points.point(from);
        let center = self.center_cell(q);
        let mut heap: BinaryHeap<Key<T>> = BinaryHeap::with_capacity(k + 1);
        let bx = self.points.bbox();
        for r in 0..=self.max_ring() {
            self.for_each_ring_bucket(&center, r, &mut |bucket: &[usize]| {
                for &j in bucket {
                    if j == from || exclude(j) {
                        continue;
                    }
                    let dist = bx.dist_unchecked(q, self.points.point(j));
                    let key = Key(dist, j);
                    if let Some(a) = after {
                        if cmp_key((dist, j), a).is_le() {
                            continue;
                        }
                    }
                    if heap.len() < k {
                        heap.push(key);
                    } else if key < *heap.peek().unwrap() {
                        heap.pop();
                        heap.push(key);
                    }
                }
            });
            if heap.len() == k && heap.peek().unwrap().0 < self.ring_floor(r) {
                break;
            }
        }
        let mut out: Vec<(T, usize)> = heap.into_iter().map(|Key(d, j)| (d, j)).collect();
        out.sort_by(|a, b| cmp_key(*a, *b));
        out
    }

    /// The closest indexed point to `from` that is not excluded; ties go to the
    /// smaller index.
    pub fn nearest(&self, from: usize, exclude: impl Fn(usize) -> bool) -> Option<(usize, T)> {
        self.k_nearest(from, 1, None, exclude).first().map(|&(d, j)| (j, d))
    }

    /// Calls `f(j, dist)` for every indexed point `j != from` within `radius`
    /// (inclusive) of point `from`.
    pub fn within(&self, from: usize, radius: T, mut f: impl FnMut(usize, T)) {
        if self.len == 0 {
            return;
        }
        let q = self.points.point(from);
        let center = self.center_cell(q);
        let bx = self.points.bbox();
        for r in 0..=self.max_ring() {
            if r >= 1 && self.ring_floor(r - 1) > radius {
                break;
            }
            self.for_each_ring_bucket(&center, r, &mut |bucket: &[usize]| {
                for &j in bucket {
                    if j == from {
                        continue;
                    }
                    let dist = bx.dist_unchecked(q, self.points.point(j));
                    if dist <= radius {
                        f(j, dist);
                    }
                }
            });
        }
    }
}

/// `L / ceil(L * n^(-1/d))`: about one point per cell for `n` points.
pub(crate) fn default_cell_side<T: Real>(side: T, n: usize, dim: usize) -> T {
    if n == 0 {
        return side;
    }
    let target = side * T::of(n as f64).powf(-T::one() / T::of_usize(dim));
    let cells = (side / target).ceil().max(T::one());
    side / cells
}
