use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::scalar::Real;

/// Each point points to the member of its forward cone
/// `{y : y_0 - x_0 >= |y_rest - x_rest|}` with the smallest first coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeForest {
    pub parent: Vec<Option<usize>>,
    /// Coordinate axis the cones open along.
    pub axis: usize,
}

impl ConeForest {
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.parent.len()).filter(|&i| self.parent[i].is_none()).collect()
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.parent.len()];
        for (c, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                out[p].push(c);
            }
        }
        out
    }

    /// Root of the tree holding each point.
    pub fn tree_root(&self) -> Vec<usize> {
        let mut root: Vec<Option<usize>> = vec![None; self.parent.len()];
        for start in 0..self.parent.len() {
            let mut chain = Vec::new();
            let mut v = start;
            let r = loop {
                if let Some(r) = root[v] {
                    break r;
                }
                chain.push(v);
                match self.parent[v] {
                    Some(p) => v = p,
                    None => break v,
                }
            };
            for c in chain {
                root[c] = Some(r);
            }
        }
        root.into_iter().map(|r| r.expect("every point reaches a root")).collect()
    }
}

#[inline]
fn in_cone<T: Real>(x: &[T], y: &[T]) -> bool {
    let h = y[0] - x[0];
    if h <= T::zero() {
        return false;
    }
    let rest = x[1..].iter().zip(&y[1..]).fold(T::zero(), |acc, (&a, &b)| acc + (b - a) * (b - a));
    h * h >= rest
}

/// Cone forest of a point set in an open box. Cones open along the first
/// axis; ties in the first coordinate go to the smaller index.
pub fn cone_forest<T: Real>(points: &PointSet<T>) -> Result<ConeForest> {
    let bx = points.bbox();
    if bx.periodic {
        return Err(Error::contract("cone forests need a non-periodic box"));
    }
    let n = points.len();
    let dim = bx.dim;
    if n == 0 {
        return Ok(ConeForest { parent: Vec::new(), axis: 0 });
    }
    let side = bx.side.as_f64();
    let k = ((n as f64).powf(1.0 / dim as f64).ceil() as usize).clamp(1, 1 << 12);
    let cs = side / k as f64;
    let total = k.pow(dim as u32);
    let cell_of = |c: f64| ((c / cs) as usize).min(k - 1);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); total];
    for i in 0..n {
        let id = points.point(i).iter().fold(0, |id, &c| id * k + cell_of(c.as_f64()));
        buckets[id].push(i);
    }
    let mut parent = vec![None; n];
    let mut ranges = vec![(0usize, 0usize); dim];
    for (i, slot) in parent.iter_mut().enumerate() {
        let x = points.point(i);
        let x0 = x[0].as_f64();
        let mut best: Option<(T, usize)> = None;
        for col in cell_of(x0)..k {
            let col_start = col as f64 * cs;
            if let Some((b, _)) = best {
                if col_start > b.as_f64() {
                    break;
                }
            }
            // widest cone cross-section reachable inside this column
            let reach = (col as f64 + 1.0) * cs - x0;
            ranges[0] = (col, col);
            for a in 1..dim {
                let c = x[a].as_f64();
                ranges[a] = (cell_of((c - reach).max(0.0)), cell_of((c + reach).min(side)));
            }
            visit(&ranges, k, 0, 0, &mut |id| {
                for &j in &buckets[id] {
                    let y = points.point(j);
                    if j != i && in_cone(x, y) {
                        let cand = (y[0], j);
                        if best.is_none_or(|b| crate::scalar::cmp_key(cand, b).is_lt()) {
                            best = Some(cand);
                        }
                    }
                }
            });
        }
        *slot = best.map(|b| b.1);
    }
    Ok(ConeForest { parent, axis: 0 })
}

fn visit(ranges: &[(usize, usize)], k: usize, axis: usize, id: usize, f: &mut impl FnMut(usize)) {
    if axis == ranges.len() {
        f(id);
        return;
    }
    for c in ranges[axis].0..=ranges[axis].1 {
        visit(ranges, k, axis + 1, id * k + c, f);
    }
}

/// Depth-first order of each tree, children by `(distance to parent, index)`,
/// one sequence per root in root-index order.
pub fn dfs_path_order<T: Real>(forest: &ConeForest, points: &PointSet<T>) -> Vec<Vec<usize>> {
    let mut children = forest.children();
    for (p, list) in children.iter_mut().enumerate() {
        list.sort_by(|&a, &b| crate::scalar::cmp_key((points.dist(p, a), a), (points.dist(p, b), b)));
    }
    let mut out = Vec::new();
    for root in forest.roots() {
        let mut seq = Vec::new();
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            seq.push(v);
            stack.extend(children[v].iter().rev());
        }
        out.push(seq);
    }
    out
}
