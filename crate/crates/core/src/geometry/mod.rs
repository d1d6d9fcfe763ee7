//! Boxes, tori, point sets and the Euclidean / toroidal metric.

pub(crate) mod index;

pub use index::SpatialIndex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A cube `[0, side)^dim`, optionally with periodic boundary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoxSpec<T> {
    pub dim: usize,
    pub side: T,
    pub periodic: bool,
}

impl<T: Real> BoxSpec<T> {
    pub fn new(dim: usize, side: T, periodic: bool) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Parameter("dimension must be at least 1".into()));
        }
        if !(side > T::zero()) || !side.is_finite() {
            return Err(Error::Parameter(format!("box side must be positive, got {side}")));
        }
        Ok(Self { dim, side, periodic })
    }

    pub fn torus(dim: usize, side: T) -> Result<Self> {
        Self::new(dim, side, true)
    }

    pub fn open(dim: usize, side: T) -> Result<Self> {
        Self::new(dim, side, false)
    }

    pub fn volume(&self) -> T {
        self.side.powi(self.dim as i32)
    }

    /// Signed displacement `to - from` along one axis. On a torus the result is
    /// reduced to `[-side/2, side/2]`.
    #[inline]
    pub fn displacement(&self, from: T, to: T) -> T {
        let mut dx = to - from;
        if self.periodic {
            let half = self.side * T::of(0.5);
            if dx > half {
                dx -= self.side;
            } else if dx < -half {
                dx += self.side;
            }
        }
        dx
    }

    /// Absolute per-axis separation under the box metric.
    #[inline]
    fn axis_gap(&self, a: T, b: T) -> T {
        let dx = (a - b).abs();
        if self.periodic && dx > self.side * T::of(0.5) {
            self.side - dx
        } else {
            dx
        }
    }

    /// Reduces a coordinate into `[0, side)`. Only meaningful on a torus.
    pub fn wrap(&self, x: T) -> T {
        let mut y = x % self.side;
        if y < T::zero() {
            y += self.side;
        }
        if y >= self.side {
            y = T::zero();
        }
        y
    }

    #[inline]
    pub(crate) fn dist_unchecked(&self, p: &[T], q: &[T]) -> T {
        let mut acc = T::zero();
        for (&a, &b) in p.iter().zip(q) {
            let g = self.axis_gap(a, b);
            acc += g * g;
        }
        acc.sqrt()
    }
}

/// Distance between two points under the metric of `bx`: Euclidean, or the
/// minimum over periodic images when the box is a torus.
pub fn distance<T: Real>(p: &[T], q: &[T], bx: &BoxSpec<T>) -> Result<T> {
    for v in [p, q] {
        if v.len() != bx.dim {
            return Err(Error::DimensionMismatch { expected: bx.dim, found: v.len() });
        }
    }
    Ok(bx.dist_unchecked(p, q))
}

/// Points in a box, stored flat; index `i` names the same point for the
/// lifetime of the set.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet<T> {
    bbox: BoxSpec<T>,
    coords: Vec<T>,
}

impl<T: Real> PointSet<T> {
    pub fn empty(bbox: BoxSpec<T>) -> Self {
        Self { bbox, coords: Vec::new() }
    }

    /// Builds a point set from flat coordinates (`dim` values per point).
    pub fn new(bbox: BoxSpec<T>, coords: Vec<T>) -> Result<Self> {
        if coords.len() % bbox.dim != 0 {
            return Err(Error::DimensionMismatch {
                expected: bbox.dim,
                found: coords.len() % bbox.dim,
            });
        }
        if let Some(bad) = coords.iter().find(|&&x| !(x >= T::zero() && x < bbox.side)) {
            return Err(Error::contract(format!(
                "coordinate {bad} outside [0, {})",
                bbox.side
            )));
        }
        Ok(Self { bbox, coords })
    }

    pub fn from_points<P: AsRef<[T]>>(bbox: BoxSpec<T>, points: &[P]) -> Result<Self> {
        let mut coords = Vec::with_capacity(points.len() * bbox.dim);
        for p in points {
            let p = p.as_ref();
            if p.len() != bbox.dim {
                return Err(Error::DimensionMismatch { expected: bbox.dim, found: p.len() });
            }
            coords.extend_from_slice(p);
        }
        Self::new(bbox, coords)
    }

    #[inline]
    pub fn bbox(&self) -> &BoxSpec<T> {
        &self.bbox
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.bbox.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.coords.len() / self.bbox.dim
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[T] {
        let d = self.bbox.dim;
        &self.coords[i * d..(i + 1) * d]
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn iter(&self) -> impl Iterator<Item = &[T]> {
        self.coords.chunks_exact(self.bbox.dim)
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> T {
        self.bbox.dist_unchecked(self.point(i), self.point(j))
    }

    /// The points listed in `indices`, renumbered `0..indices.len()`.
    pub fn subset(&self, indices: &[usize]) -> Self {
        let mut coords = Vec::with_capacity(indices.len() * self.dim());
        for &i in indices {
            coords.extend_from_slice(self.point(i));
        }
        Self { bbox: self.bbox, coords }
    }

    /// Same points in the box `bbox` (which must contain them).
    pub fn with_box(&self, bbox: BoxSpec<T>) -> Result<Self> {
        Self::new(bbox, self.coords.clone())
    }
}
