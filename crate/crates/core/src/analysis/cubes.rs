use super::components::UnionFind;
use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::scalar::Real;

/// Largest number of cubes the diagnostic will allocate.
const MAX_CUBES: usize = 50_000_000;

/// Smallest integer `m` with `m^2 >= d + 3`, so that any two points of
/// face-adjacent cubes of side `a` are within `m * a`.
pub fn reach_multiplier(dim: usize) -> usize {
    let target = dim + 3;
    let mut m = (target as f64).sqrt().floor() as usize;
    while m * m < target {
        m += 1;
    }
    m
}

/// Renormalization cubes of side `a`, corner-aligned at the origin, stored
/// densely in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct CubeGrid {
    pub cube_side: f64,
    pub per_axis: usize,
    pub dim: usize,
    pub occupancy: Vec<u32>,
    pub acceptable: Vec<bool>,
    pub good: Vec<bool>,
    pub n_bound: u32,
    pub m_reach: usize,
    /// l-infinity radius of the supercube in cube units.
    pub radius: usize,
}

impl CubeGrid {
    pub fn cube_count(&self) -> usize {
        self.occupancy.len()
    }

    /// Cube coordinates of a linear cube id.
    pub fn coords_of(&self, mut id: usize) -> Vec<usize> {
        let mut c = vec![0; self.dim];
        for a in (0..self.dim).rev() {
            c[a] = id % self.per_axis;
            id /= self.per_axis;
        }
        c
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CubeDiagnostic {
    pub grid: CubeGrid,
    pub acceptable_count: usize,
    pub good_count: usize,
    /// Good cubes over all cubes.
    pub good_fraction: f64,
    /// Size of the largest face-adjacent cluster of good cubes.
    pub largest_good_cluster: usize,
    /// Largest cluster over good cubes (0 when there are none).
    pub largest_good_cluster_fraction: f64,
    pub good_cluster_count: usize,
}

/// Classifies cubes as acceptable (`1 <= occupancy <= n`) and good (every cube
/// within l-infinity distance `radius` acceptable; default `2m`), then clusters
/// good cubes by face adjacency. On a torus neighbourhoods wrap; on an open box
/// they are clipped to the window.
pub fn cube_diagnostic<T: Real>(points: &PointSet<T>, a: f64, n: u32, radius: Option<usize>) -> Result<CubeDiagnostic> {
    let bx = points.bbox();
    let side = bx.side.as_f64();
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Parameter(format!("cube side must be positive, got {a}")));
    }
    let ratio = side / a;
    let k = ratio.round();
    if k < 1.0 || (ratio - k).abs() > 1e-9 {
        return Err(Error::Parameter(format!("cube side {a} does not tile a window of side {side}")));
    }
    let k = k as usize;
    let dim = bx.dim;
    let total = k
        .checked_pow(dim as u32)
        .filter(|&t| t <= MAX_CUBES)
        .ok_or_else(|| Error::Resource(format!("{k}^{dim} cubes exceed the limit of {MAX_CUBES}")))?;
    let m_reach = reach_multiplier(dim);
    let radius = radius.unwrap_or(2 * m_reach);

    let mut occupancy = vec![0u32; total];
    for p in points.iter() {
        let mut id = 0;
        for &x in p {
            id = id * k + ((x.as_f64() / a) as usize).min(k - 1);
        }
        occupancy[id] += 1;
    }
    let acceptable: Vec<bool> = occupancy.iter().map(|&c| c >= 1 && c <= n).collect();

    // Separable erosion: a cube is good iff the minimum over its box
    // neighbourhood is true, computed one axis at a time.
    let mut good = acceptable.clone();
    let mut stride = 1;
    for _ in 0..dim {
        let prev = good.clone();
        for id in 0..total {
            let c = (id / stride) % k;
            let base = id - c * stride;
            let r = radius as isize;
            let mut ok = true;
            for off in -r..=r {
                let t = c as isize + off;
                let t = if bx.periodic {
                    t.rem_euclid(k as isize)
                } else if t < 0 || t >= k as isize {
                    continue;
                } else {
                    t
                };
                if !prev[base + t as usize * stride] {
                    ok = false;
                    break;
                }
            }
            good[id] = ok;
        }
        stride *= k;
    }

    let mut uf = UnionFind::new(total);
    let mut stride = 1;
    for _ in 0..dim {
        for id in 0..total {
            if !good[id] {
                continue;
            }
            let c = (id / stride) % k;
            let next = if c + 1 < k {
                Some(id + stride)
            } else if bx.periodic && k > 1 {
                Some(id - c * stride)
            } else {
                None
            };
            if let Some(j) = next.filter(|&j| good[j]) {
                uf.union(id, j);
            }
        }
        stride *= k;
    }
    let mut largest = 0;
    let mut clusters = 0;
    for id in 0..total {
        if good[id] && uf.find(id) == id {
            clusters += 1;
            largest = largest.max(uf.set_size(id));
        }
    }
    let acceptable_count = acceptable.iter().filter(|&&g| g).count();
    let good_count = good.iter().filter(|&&g| g).count();
    Ok(CubeDiagnostic {
        acceptable_count,
        good_count,
        good_fraction: good_count as f64 / total as f64,
        largest_good_cluster: largest,
        largest_good_cluster_fraction: if good_count == 0 { 0.0 } else { largest as f64 / good_count as f64 },
        good_cluster_count: clusters,
        grid: CubeGrid { cube_side: a, per_axis: k, dim, occupancy, acceptable, good, n_bound: n, m_reach, radius },
    })
}
