use std::collections::BTreeSet;

use super::types::{assign_blocks, equal_blocks, nn_rank};
use crate::analysis::UnionFind;
use crate::matching::{stable_bipartite_match, MatchResult, Matching};
use crate::process::MarkedPointSet;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteSchemeOutput<T> {
    pub result: MatchResult<T>,
    /// Type within its degree class, for grouped points.
    pub type_of: Vec<Option<u32>>,
    /// Points dropped so every class splits into groups of `n + 1`.
    pub remainder: Vec<usize>,
    /// Vertex sets of the complete graphs, each sorted.
    pub groups: Vec<Vec<usize>>,
}

/// For each degree value `n`, groups the degree-`n` points into sets of
/// `n + 1` (one point of each nearest-neighbour type, chained by stable
/// bipartite matchings) and links every group into a complete graph. Points
/// that do not fill a whole group are the ones with the largest
/// nearest-neighbour distance; they stay unmatched.
pub fn finite_component_scheme<T: Real>(m: &MarkedPointSet<T>) -> FiniteSchemeOutput<T> {
    let n_points = m.len();
    let points = m.points();
    let mut matching = Matching::new(n_points);
    let mut type_of = vec![None; n_points];
    let mut remainder = Vec::new();
    let mut groups = Vec::new();
    let values: BTreeSet<u32> = m.degrees().iter().copied().collect();
    for n in values {
        let members: Vec<usize> = (0..n_points).filter(|&i| m.degrees()[i] == n).collect();
        let ranked = nn_rank(points, &members);
        let size = n as usize + 1;
        let kept = ranked.len() - ranked.len() % size;
        remainder.extend(ranked[kept..].iter().map(|r| r.1));
        if kept == 0 {
            continue;
        }
        let types = assign_blocks(n_points, size as u32, &ranked[..kept], &equal_blocks(kept, size));
        let by_type: Vec<Vec<usize>> = (1..=size as u32).map(|t| types.members_of(t)).collect();
        let mut uf = UnionFind::new(n_points);
        for t in 0..n as usize {
            let chain = stable_bipartite_match(&by_type[t], &by_type[t + 1], points)
                .expect("type classes are disjoint and in range");
            for e in chain.edges() {
                uf.union(e.i, e.j);
            }
        }
        let mut group_of_root = std::collections::BTreeMap::new();
        for &i in &by_type[0] {
            group_of_root.insert(uf.find(i), Vec::new());
        }
        for &(_, i) in &ranked[..kept] {
            group_of_root.get_mut(&uf.find(i)).expect("every chain starts at a type-1 point").push(i);
        }
        for (_, mut group) in group_of_root {
            group.sort_unstable();
            debug_assert_eq!(group.len(), size);
            for (a, &x) in group.iter().enumerate() {
                for &y in &group[a + 1..] {
                    matching.push(x, y, points.dist(x, y));
                }
            }
            groups.push(group);
        }
        for (i, t) in types.type_of.iter().enumerate() {
            if t.is_some() {
                type_of[i] = *t;
            }
        }
    }
    remainder.sort_unstable();
    groups.sort();
    FiniteSchemeOutput { result: MatchResult::from_matching(matching, m.degrees()), type_of, remainder, groups }
}
