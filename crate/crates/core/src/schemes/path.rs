use super::cone::{cone_forest, dfs_path_order};
use crate::error::{Error, Result};
use crate::matching::{greedy_match, ForbiddenPairs, MatchResult, Matching};
use crate::process::MarkedPointSet;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct PathSchemeOutput<T> {
    pub result: MatchResult<T>,
    /// One vertex sequence per cone tree of the degree-2+ points.
    pub paths: Vec<Vec<usize>>,
    /// Index into `paths` for every degree-2+ point.
    pub tree_of: Vec<Option<usize>>,
}

/// Links the degree-2+ points of `m` along the depth-first orders of their
/// cone forest. Returns the path edges and the tree sequences.
pub(crate) fn build_paths<T: Real>(m: &MarkedPointSet<T>) -> Result<(Matching<T>, Vec<Vec<usize>>, Vec<Option<usize>>)> {
    let points = m.points();
    if points.bbox().periodic {
        return Err(Error::contract("path construction needs a non-periodic box"));
    }
    let members: Vec<usize> = (0..m.len()).filter(|&i| m.degrees()[i] >= 2).collect();
    if members.len() < 2 {
        return Err(Error::Infeasible(format!("{} points of degree at least 2; need two", members.len())));
    }
    let sub = points.subset(&members);
    let forest = cone_forest(&sub)?;
    let paths: Vec<Vec<usize>> = dfs_path_order(&forest, &sub)
        .into_iter()
        .map(|seq| seq.into_iter().map(|s| members[s]).collect())
        .collect();
    let mut matching = Matching::new(m.len());
    let mut tree_of = vec![None; m.len()];
    for (t, seq) in paths.iter().enumerate() {
        for &v in seq {
            tree_of[v] = Some(t);
        }
        for w in seq.windows(2) {
            matching.push(w[0], w[1], points.dist(w[0], w[1]));
        }
    }
    Ok((matching, paths, tree_of))
}

/// Stable multi-matching of the stubs left over by `base`, never relinking a
/// pair of `base`, merged with `base`.
pub(crate) fn complete_with_stable<T: Real>(m: &MarkedPointSet<T>, mut base: Matching<T>) -> MatchResult<T> {
    let residual: Vec<u32> = m.degrees().iter().zip(base.degree_used()).map(|(&d, &u)| d - u).collect();
    let forbidden = ForbiddenPairs::from_matching(&base);
    let rest = greedy_match(m.points(), &residual, |i, j| !forbidden.contains(i, j));
    base.extend_from(&rest.matching);
    MatchResult { steps: base.len(), matching: base, leftover: rest.leftover }
}

/// Threads every cone tree of degree-2+ points into one path (depth-first,
/// children by distance), then matches all remaining stubs stably with the
/// path edges forbidden.
pub fn infinite_path_scheme<T: Real>(m: &MarkedPointSet<T>) -> Result<PathSchemeOutput<T>> {
    let (paths_matching, paths, tree_of) = build_paths(m)?;
    Ok(PathSchemeOutput { result: complete_with_stable(m, paths_matching), paths, tree_of })
}
