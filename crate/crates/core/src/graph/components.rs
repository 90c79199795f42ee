use super::{Graph, VertexId};
use crate::error::{Error, Result};

/// Disjoint-set forest with union by size and path compression.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        Self {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    /// Returns false if `a` and `b` were already joined.
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
}

/// Splits `vertex_set` into maximal connected components under `local_arcs`.
///
/// Each component is sorted ascending; components are ordered by size
/// descending, then by smallest vertex id. Every arc endpoint must belong to
/// `vertex_set`.
pub fn wcc<I>(vertex_set: &[VertexId], local_arcs: I) -> Result<Vec<Vec<VertexId>>>
where
    I: IntoIterator<Item = (VertexId, VertexId)>,
{
    let mut vertices = vertex_set.to_vec();
    vertices.sort_unstable();
    vertices.dedup();
    let local = |v: VertexId| {
        vertices
            .binary_search(&v)
            .map_err(|_| Error::Integrity(format!("arc endpoint {v} is not in the vertex set")))
    };
    let mut uf = UnionFind::new(vertices.len());
    for (u, v) in local_arcs {
        let (a, b) = (local(u)?, local(v)?);
        uf.union(a, b);
    }
    Ok(group(&vertices, &mut uf))
}

/// Connected components of the whole graph, in the standard order.
pub fn components_ordered(g: &Graph) -> Vec<Vec<VertexId>> {
    let mut uf = UnionFind::new(g.n());
    for (u, v) in g.edges() {
        uf.union(u, v);
    }
    let vertices: Vec<VertexId> = (0..g.n()).collect();
    group(&vertices, &mut uf)
}

fn group(vertices: &[VertexId], uf: &mut UnionFind) -> Vec<Vec<VertexId>> {
    let mut slot = vec![usize::MAX; vertices.len()];
    let mut components: Vec<Vec<VertexId>> = Vec::new();
    // vertices are ascending, so each component comes out sorted and its
    // first element is its minimum
    for (i, &v) in vertices.iter().enumerate() {
        let root = uf.find(i);
        if slot[root] == usize::MAX {
            slot[root] = components.len();
            components.push(Vec::new());
        }
        components[slot[root]].push(v);
    }
    components.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    components
}
