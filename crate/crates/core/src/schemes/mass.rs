use crate::matching::MatchResult;
use crate::process::MarkedPointSet;
use crate::scalar::Real;

/// Per-vertex transport masses and the vertices where
/// `D_x - 2 >= M_in - M_out` fails.
#[derive(Clone, Debug, PartialEq)]
pub struct MassBoundReport {
    /// Pieces smaller than this count as finite.
    pub threshold: usize,
    pub m_in: Vec<u64>,
    pub m_out: Vec<u64>,
    pub violations: Vec<usize>,
    pub total_in: u64,
    pub total_out: u64,
}

impl MassBoundReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn balanced(&self) -> bool {
        self.total_in == self.total_out
    }
}

/// `x` sends a unit mass to its neighbour `y` when deleting the edge `xy`
/// leaves `x` in a piece with fewer than `threshold` vertices. Only bridges
/// can do that, so masses are computed from a bridge search with subtree
/// sizes. The default threshold is `N + 1`, which makes every piece finite.
pub fn mass_bound_check<T: Real>(m: &MarkedPointSet<T>, result: &MatchResult<T>, threshold: Option<usize>) -> MassBoundReport {
    let n = m.len();
    let threshold = threshold.unwrap_or(n + 1);
    let matching = &result.matching;
    let edges = matching.edges();
    let inc = matching.incidence();
    let mut m_in = vec![0u64; n];
    let mut m_out = vec![0u64; n];

    // Iterative lowlink search. `order[v]` is the preorder number (0 = unvisited).
    let mut order = vec![0usize; n];
    let mut low = vec![0usize; n];
    let mut sub = vec![1usize; n];
    let mut counter = 0;
    for root in 0..n {
        if order[root] != 0 {
            continue;
        }
        // component size first, for the far side of each bridge
        let mut tree_edges: Vec<(usize, usize)> = Vec::new();
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        counter += 1;
        order[root] = counter;
        low[root] = counter;
        while let Some(&mut (v, via, ref mut next)) = stack.last_mut() {
            if let Some(&e) = inc[v].get(*next) {
                *next += 1;
                if e == via {
                    continue;
                }
                let w = edges[e].other(v);
                if order[w] == 0 {
                    counter += 1;
                    order[w] = counter;
                    low[w] = counter;
                    stack.push((w, e, 0));
                } else {
                    low[v] = low[v].min(order[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[v]);
                    sub[p] += sub[v];
                    if low[v] > order[p] {
                        tree_edges.push((p, v));
                    }
                }
            }
        }
        let comp = sub[root];
        for (p, c) in tree_edges {
            // deleting p-c leaves c with its subtree and p with the rest
            if sub[c] < threshold {
                m_out[c] += 1;
                m_in[p] += 1;
            }
            if comp - sub[c] < threshold {
                m_out[p] += 1;
                m_in[c] += 1;
            }
        }
    }
    let violations = (0..n)
        .filter(|&x| (m.degrees()[x] as i64) - 2 < m_in[x] as i64 - m_out[x] as i64)
        .collect();
    MassBoundReport {
        threshold,
        total_in: m_in.iter().sum(),
        total_out: m_out.iter().sum(),
        m_in,
        m_out,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{BoxSpec, PointSet};
    use crate::matching::Matching;

    fn instance(degrees: &[u32], edges: &[(usize, usize)]) -> (MarkedPointSet<f64>, MatchResult<f64>) {
        let n = degrees.len();
        let bx = BoxSpec::open(1, n as f64 + 1.0).unwrap();
        let pts: Vec<[f64; 1]> = (0..n).map(|i| [i as f64]).collect();
        let m = MarkedPointSet::new(PointSet::from_points(bx, &pts).unwrap(), degrees.to_vec()).unwrap();
        let g = Matching::from_edges(n, edges.iter().map(|&(i, j)| (i, j, m.points().dist(i, j)))).unwrap();
        let r = MatchResult::from_matching(g, degrees);
        (m, r)
    }

    #[test]
    fn three_path_with_everything_finite() {
        let (m, r) = instance(&[1, 2, 1], &[(0, 1), (1, 2)]);
        let rep = mass_bound_check(&m, &r, None);
        assert_eq!(rep.m_out, vec![1, 2, 1]);
        assert_eq!(rep.m_in, vec![1, 2, 1]);
        assert!(rep.balanced());
        // D - 2 = -1 < 0 at both endpoints
        assert_eq!(rep.violations, vec![0, 2]);
    }

    #[test]
    fn three_path_with_small_threshold() {
        // only the single endpoints count as finite pieces
        let (m, r) = instance(&[1, 2, 1], &[(0, 1), (1, 2)]);
        let rep = mass_bound_check(&m, &r, Some(2));
        assert_eq!(rep.m_out, vec![1, 0, 1]);
        assert_eq!(rep.m_in, vec![0, 2, 0]);
        // endpoints meet the bound with equality; the centre receives 2 with D - 2 = 0
        assert_eq!(rep.violations, vec![1]);
    }

    #[test]
    fn cycles_carry_no_mass() {
        let (m, r) = instance(&[2; 5], &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]);
        let rep = mass_bound_check(&m, &r, None);
        assert_eq!(rep.total_in + rep.total_out, 0);
        assert!(rep.holds());
    }

    #[test]
    fn bridges_match_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..60 {
            let n = rng.random_range(2..25);
            let mut set = std::collections::BTreeSet::new();
            for _ in 0..rng.random_range(0..2 * n) {
                let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
                if i != j {
                    set.insert((i.min(j), i.max(j)));
                }
            }
            let edges: Vec<_> = set.into_iter().collect();
            let threshold = rng.random_range(1..n + 2);
            let (m, r) = instance(&vec![4; n], &edges);
            let rep = mass_bound_check(&m, &r, Some(threshold));
            // oracle: delete each edge and measure the piece of each endpoint
            let mut m_out = vec![0u64; n];
            for (k, &(i, j)) in edges.iter().enumerate() {
                let rest: Vec<_> = edges.iter().enumerate().filter(|&(o, _)| o != k).map(|(_, &e)| e).collect();
                let report = crate::analysis::components(
                    n,
                    &Matching::<f64>::from_edges(n, rest.iter().map(|&(a, b)| (a, b, 1.0))).unwrap(),
                );
                for x in [i, j] {
                    if report.sizes[report.component_of[x]] < threshold
                        && report.component_of[i] != report.component_of[j]
                    {
                        m_out[x] += 1;
                    }
                }
            }
            assert_eq!(rep.m_out, m_out);
            assert!(rep.balanced());
        }
    }
}
