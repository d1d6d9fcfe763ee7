use crate::error::{Error, Result};
use crate::geometry::{PointSet, SpatialIndex};
use crate::process::MarkedPointSet;
use crate::scalar::{cmp_key, Real};

/// Types `1..=class_count` for the points of one degree class, assigned by
/// rank of the nearest-neighbour distance within the class.
#[derive(Clone, Debug, PartialEq)]
pub struct TypeAssignment<T> {
    pub class_count: u32,
    /// Type per point; `None` for points outside the class.
    pub type_of: Vec<Option<u32>>,
    /// Distance to the nearest other class member; infinite for a lone member.
    pub nn_distance: Vec<Option<T>>,
    /// Class members sorted by `(nn_distance, index)`.
    pub rank_order: Vec<usize>,
}

impl<T: Real> TypeAssignment<T> {
    /// Members of type `t`, in rank order.
    pub fn members_of(&self, t: u32) -> Vec<usize> {
        self.rank_order.iter().copied().filter(|&i| self.type_of[i] == Some(t)).collect()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        (1..=self.class_count).map(|t| self.members_of(t).len()).collect()
    }
}

/// `members` with their nearest-other-member distances, sorted by
/// `(distance, index)`.
pub(crate) fn nn_rank<T: Real>(points: &PointSet<T>, members: &[usize]) -> Vec<(T, usize)> {
    let mut ranked: Vec<(T, usize)> = if members.len() < 2 {
        members.iter().map(|&i| (T::infinity(), i)).collect()
    } else {
        let cell = crate::geometry::index::default_cell_side(points.bbox().side, members.len(), points.dim());
        let index = SpatialIndex::build_subset(points, members, cell).expect("positive cell side");
        members
            .iter()
            .map(|&i| (index.nearest(i, |_| false).map_or(T::infinity(), |(_, d)| d), i))
            .collect()
    };
    ranked.sort_by(|a, b| cmp_key(*a, *b));
    ranked
}

/// Sizes of `parts` contiguous blocks of `total` items differing by at most
/// one, larger blocks first.
pub(crate) fn equal_blocks(total: usize, parts: usize) -> Vec<usize> {
    (0..parts).map(|b| total / parts + usize::from(b < total % parts)).collect()
}

/// Splits the degree-`degree` points of `m` into `class_count` types of
/// near-equal size by rank of nearest-same-degree-neighbour distance.
pub fn partition_by_nn_rank<T: Real>(
    m: &MarkedPointSet<T>,
    degree: u32,
    class_count: u32,
) -> Result<TypeAssignment<T>> {
    if class_count == 0 {
        return Err(Error::Parameter("class count must be positive".into()));
    }
    let members: Vec<usize> = (0..m.len()).filter(|&i| m.degrees()[i] == degree).collect();
    if members.len() < class_count as usize {
        return Err(Error::Infeasible(format!(
            "{} points of degree {degree} cannot fill {class_count} classes",
            members.len()
        )));
    }
    let ranked = nn_rank(m.points(), &members);
    Ok(assign_blocks(m.len(), class_count, &ranked, &equal_blocks(ranked.len(), class_count as usize)))
}

/// Gives the `b`-th block of `ranked` type `b + 1`.
pub(crate) fn assign_blocks<T: Real>(n: usize, class_count: u32, ranked: &[(T, usize)], blocks: &[usize]) -> TypeAssignment<T> {
    let mut type_of = vec![None; n];
    let mut nn_distance = vec![None; n];
    let mut pos = 0;
    for (b, &size) in blocks.iter().enumerate() {
        for &(d, i) in &ranked[pos..pos + size] {
            type_of[i] = Some(b as u32 + 1);
            nn_distance[i] = Some(d);
        }
        pos += size;
    }
    for &(d, i) in &ranked[pos..] {
        nn_distance[i] = Some(d);
    }
    TypeAssignment {
        class_count,
        type_of,
        nn_distance,
        rank_order: ranked.iter().map(|r| r.1).collect(),
    }
}
