use crate::matching::Matching;
use crate::scalar::Real;

/// Disjoint-set forest with union by size and path halving.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `true` if `a` and `b` were in different sets.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    pub fn set_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r]
    }
}

/// Connected components of a graph on `0..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentReport {
    /// Component id per point; ids are numbered by smallest member.
    pub component_of: Vec<usize>,
    /// Size per component id.
    pub sizes: Vec<usize>,
    pub largest_fraction: f64,
    pub component_count: usize,
}

impl ComponentReport {
    pub fn largest(&self) -> usize {
        self.sizes.iter().copied().max().unwrap_or(0)
    }

    /// Size of the component of a uniformly chosen point, averaged over points.
    pub fn mean_point_component_size(&self) -> f64 {
        let n: usize = self.sizes.iter().sum();
        if n == 0 {
            return 0.0;
        }
        self.sizes.iter().map(|&s| (s * s) as f64).sum::<f64>() / n as f64
    }

    /// Members of each component, in index order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.component_count];
        for (i, &c) in self.component_of.iter().enumerate() {
            out[c].push(i);
        }
        out
    }
}

pub fn components<T: Real>(n: usize, matching: &Matching<T>) -> ComponentReport {
    components_of_pairs(n, matching.edges().iter().map(|e| (e.i, e.j)))
}

pub(crate) fn components_of_pairs(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> ComponentReport {
    let mut uf = UnionFind::new(n);
    for (i, j) in edges {
        uf.union(i, j);
    }
    let mut id_of_root = vec![usize::MAX; n];
    let mut component_of = vec![0; n];
    let mut sizes = Vec::new();
    for i in 0..n {
        let r = uf.find(i);
        if id_of_root[r] == usize::MAX {
            id_of_root[r] = sizes.len();
            sizes.push(0);
        }
        component_of[i] = id_of_root[r];
        sizes[id_of_root[r]] += 1;
    }
    let largest = sizes.iter().copied().max().unwrap_or(0);
    ComponentReport {
        component_of,
        component_count: sizes.len(),
        largest_fraction: if n == 0 { 0.0 } else { largest as f64 / n as f64 },
        sizes,
    }
}

/// Components that are simple paths with at least one edge, each given as its
/// vertex sequence starting from the endpoint with the smaller index.
pub fn path_components<T: Real>(matching: &Matching<T>) -> Vec<Vec<usize>> {
    let n = matching.point_count();
    let report = components(n, matching);
    let inc = matching.incidence();
    let mut edge_count = vec![0usize; report.component_count];
    for e in matching.edges() {
        edge_count[report.component_of[e.i]] += 1;
    }
    let mut out = Vec::new();
    for (c, members) in report.members().into_iter().enumerate() {
        if edge_count[c] == 0 || edge_count[c] + 1 != members.len() || members.iter().any(|&v| inc[v].len() > 2) {
            continue;
        }
        let start = *members.iter().find(|&&v| inc[v].len() == 1).expect("a tree path has an endpoint");
        let mut seq = vec![start];
        let mut prev_edge = usize::MAX;
        let mut v = start;
        loop {
            let Some(&e) = inc[v].iter().find(|&&e| e != prev_edge) else { break };
            v = matching.edges()[e].other(v);
            prev_edge = e;
            seq.push(v);
        }
        out.push(seq);
    }
    out
}
