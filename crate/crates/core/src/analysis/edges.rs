use super::components::components;
use crate::matching::Matching;
use crate::scalar::Real;

/// Equal-width bins over `[0, max length]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    /// Bin boundaries, one more than the number of bins.
    pub bounds: Vec<f64>,
    pub counts: Vec<u64>,
}

/// Descriptive statistics of stored edge lengths. Fields that are undefined
/// for an empty matching are `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeLengthStats {
    pub count: usize,
    pub mean: Option<f64>,
    pub max: Option<f64>,
    /// Raw sample moments `(order, mean of length^order)`.
    pub moments: Vec<(u32, Option<f64>)>,
    pub histogram: Histogram,
}

pub fn edge_length_stats<T: Real>(matching: &Matching<T>, orders: &[u32], bins: usize) -> EdgeLengthStats {
    let lengths: Vec<f64> = matching.edges().iter().map(|e| e.length.as_f64()).collect();
    let count = lengths.len();
    let moment = |k: u32| -> Option<f64> {
        (count > 0).then(|| lengths.iter().map(|&x| x.powi(k as i32)).sum::<f64>() / count as f64)
    };
    let max = lengths.iter().copied().fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.max(x))));
    let histogram = match max {
        Some(top) if bins > 0 => {
            let width = if top > 0.0 { top / bins as f64 } else { 1.0 };
            let bounds = (0..=bins).map(|b| b as f64 * width).collect();
            let mut counts = vec![0u64; bins];
            for &x in &lengths {
                counts[((x / width) as usize).min(bins - 1)] += 1;
            }
            Histogram { bounds, counts }
        }
        _ => Histogram { bounds: Vec::new(), counts: Vec::new() },
    };
    EdgeLengthStats {
        count,
        mean: moment(1),
        max,
        moments: orders.iter().map(|&k| (k, moment(k))).collect(),
        histogram,
    }
}

/// Ids of edges strictly longer than every edge sharing an endpoint with them.
/// With `path_only`, only edges of components that are simple paths count.
pub fn locally_maximal_edges<T: Real>(matching: &Matching<T>, path_only: bool) -> Vec<usize> {
    let n = matching.point_count();
    let inc = matching.incidence();
    let on_path = if path_only {
        let report = components(n, matching);
        let mut edges_in = vec![0usize; report.component_count];
        for e in matching.edges() {
            edges_in[report.component_of[e.i]] += 1;
        }
        let mut max_degree = vec![0usize; report.component_count];
        for (v, list) in inc.iter().enumerate() {
            let c = report.component_of[v];
            max_degree[c] = max_degree[c].max(list.len());
        }
        let is_path: Vec<bool> = (0..report.component_count)
            .map(|c| max_degree[c] <= 2 && edges_in[c] + 1 == report.sizes[c])
            .collect();
        (0..n).map(|v| is_path[report.component_of[v]]).collect()
    } else {
        vec![true; n]
    };
    let edges = matching.edges();
    (0..edges.len())
        .filter(|&k| {
            let e = &edges[k];
            on_path[e.i]
                && [e.i, e.j]
                    .iter()
                    .all(|&v| inc[v].iter().all(|&o| o == k || edges[o].length < e.length))
        })
        .collect()
}
