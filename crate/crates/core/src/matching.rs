//! Bipartite matchings across vertex cuts and canonical König covers.
//!
//! For a bipartite graph with sides `A` and `B` and a maximum matching `M`,
//! the `A`-König cover takes, for every matched edge `ab`, the vertex `b`
//! when `ab` lies on an alternating path starting at an unsaturated
//! `A`-vertex and the vertex `a` otherwise. Among all minimum vertex covers
//! it is the unique one that is largest on the `A` side and smallest on the
//! `B` side, so it does not depend on which maximum matching was found.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CutError {
    #[error("vertex {0} lies on both sides of the cut")]
    Overlap(usize),
    #[error("edge ({0}, {1}) does not cross the cut")]
    NotCrossing(usize, usize),
}

/// Bipartite graph `G[A, B]` given by two disjoint vertex sets and the
/// edges between them. Vertex identities are those of the host graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteCut {
    side_a: Vec<usize>,
    side_b: Vec<usize>,
    /// `(a, b)` pairs with `a` in `side_a` and `b` in `side_b`, sorted.
    edges: Vec<(usize, usize)>,
}

impl BipartiteCut {
    /// Builds a cut from explicit sides and crossing edges. Edges may be
    /// given in either orientation.
    pub fn new(
        side_a: impl IntoIterator<Item = usize>,
        side_b: impl IntoIterator<Item = usize>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, CutError> {
        let mut side_a: Vec<usize> = side_a.into_iter().collect();
        let mut side_b: Vec<usize> = side_b.into_iter().collect();
        side_a.sort_unstable();
        side_a.dedup();
        side_b.sort_unstable();
        side_b.dedup();
        if let Some(&v) = side_a.iter().find(|v| side_b.binary_search(v).is_ok()) {
            return Err(CutError::Overlap(v));
        }
        let mut oriented = Vec::new();
        for (u, v) in edges {
            let in_a = |x: usize| side_a.binary_search(&x).is_ok();
            let in_b = |x: usize| side_b.binary_search(&x).is_ok();
            if in_a(u) && in_b(v) {
                oriented.push((u, v));
            } else if in_a(v) && in_b(u) {
                oriented.push((v, u));
            } else {
                return Err(CutError::NotCrossing(u, v));
            }
        }
        oriented.sort_unstable();
        oriented.dedup();
        Ok(Self {
            side_a,
            side_b,
            edges: oriented,
        })
    }

    /// `G[A, B]` for disjoint `A, B ⊆ V(G)`: all edges of `G` between them.
    pub fn between(graph: &Graph, side_a: &[usize], side_b: &[usize]) -> Result<Self, CutError> {
        let mut in_b = vec![false; graph.vertex_count()];
        for &b in side_b {
            in_b[b] = true;
        }
        let edges: Vec<(usize, usize)> = side_a
            .iter()
            .flat_map(|&a| {
                let in_b = &in_b;
                graph.neighbors(a).iter().filter(move |&&b| in_b[b]).map(move |&b| (a, b))
            })
            .collect();
        Self::new(side_a.iter().copied(), side_b.iter().copied(), edges)
    }

    /// The cut `G[S, V(G) \ S]` with `S` as side `A`.
    pub fn of_set(graph: &Graph, set: &[usize]) -> Self {
        let mut in_set = vec![false; graph.vertex_count()];
        for &v in set {
            in_set[v] = true;
        }
        let complement: Vec<usize> = (0..graph.vertex_count()).filter(|&v| !in_set[v]).collect();
        Self::between(graph, set, &complement).expect("a set and its complement are disjoint")
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[usize] {
        &self.side_b
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// The same cut with the roles of `A` and `B` exchanged.
    pub fn swapped(&self) -> Self {
        let mut edges: Vec<(usize, usize)> = self.edges.iter().map(|&(a, b)| (b, a)).collect();
        edges.sort_unstable();
        Self {
            side_a: self.side_b.clone(),
            side_b: self.side_a.clone(),
            edges,
        }
    }

    /// All vertices of both sides, sorted.
    pub fn vertices(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.side_a.iter().chain(&self.side_b).copied().collect();
        all.sort_unstable();
        all
    }

    /// Whether `cover` touches every crossing edge.
    pub fn is_vertex_cover(&self, cover: &[usize]) -> bool {
        self.edges
            .iter()
            .all(|(a, b)| cover.contains(a) || cover.contains(b))
    }

    /// Local adjacency from `A` positions to `B` positions.
    fn local_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.side_a.len()];
        for &(a, b) in &self.edges {
            let ia = self.side_a.binary_search(&a).unwrap();
            let ib = self.side_b.binary_search(&b).unwrap();
            adj[ia].push(ib);
        }
        adj
    }
}

/// A set of pairwise vertex-disjoint crossing edges, stored as `(a, b)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Matching {
    edges: Vec<(usize, usize)>,
}

impl Matching {
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Matched vertices of both sides, sorted.
    pub fn saturated(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        v.sort_unstable();
        v
    }
}

/// Maximum-cardinality matching by repeated augmenting-path search. `A`
/// vertices are tried in ascending order and their neighbors scanned in
/// ascending order, so the result is a function of the cut alone.
pub fn maximum_matching(cut: &BipartiteCut) -> Matching {
    let (mate_a, _) = matching_positions(cut);
    let mut edges: Vec<(usize, usize)> = mate_a
        .iter()
        .enumerate()
        .filter_map(|(ia, m)| m.map(|ib| (cut.side_a[ia], cut.side_b[ib])))
        .collect();
    edges.sort_unstable();
    Matching { edges }
}

/// Mates by local position: `mate_a[i]` is the `B` position matched to
/// `side_a[i]`, and vice versa.
fn matching_positions(cut: &BipartiteCut) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
    let adj = cut.local_adjacency();
    let mut mate_a = vec![None; cut.side_a.len()];
    let mut mate_b = vec![None; cut.side_b.len()];
    let mut visited = vec![usize::MAX; cut.side_b.len()];
    for root in 0..adj.len() {
        if adj[root].is_empty() {
            continue;
        }
        augment(root, root, &adj, &mut mate_a, &mut mate_b, &mut visited);
    }
    (mate_a, mate_b)
}

fn augment(
    a: usize,
    stamp: usize,
    adj: &[Vec<usize>],
    mate_a: &mut [Option<usize>],
    mate_b: &mut [Option<usize>],
    visited: &mut [usize],
) -> bool {
    for &b in &adj[a] {
        if visited[b] == stamp {
            continue;
        }
        visited[b] = stamp;
        let free = match mate_b[b] {
            None => true,
            Some(next) => augment(next, stamp, adj, mate_a, mate_b, visited),
        };
        if free {
            mate_a[a] = Some(b);
            mate_b[b] = Some(a);
            return true;
        }
    }
    false
}

/// `mm(S)`: size of a maximum matching of `G[S, V(G) \ S]`.
pub fn mm_value(graph: &Graph, set: &[usize]) -> usize {
    maximum_matching(&BipartiteCut::of_set(graph, set)).len()
}

/// Which side of its cut a König cover is canonical for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoverSide {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KonigCover {
    vertices: Vec<usize>,
    side: CoverSide,
}

impl KonigCover {
    /// Cover vertices, sorted ascending.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn side(&self) -> CoverSide {
        self.side
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn into_vertices(self) -> Vec<usize> {
        self.vertices
    }
}

/// The `A`-König cover of `cut`.
///
/// Alternating reachability from all unsaturated `A`-vertices is computed
/// in one BFS (`A -> B` along non-matching edges, `B -> A` along matching
/// edges). The cover is `(A \ Z) ∪ (B ∩ Z)` for the reached set `Z`, which
/// is exactly the per-matched-edge rule above.
pub fn konig_cover_a(cut: &BipartiteCut) -> KonigCover {
    let adj = cut.local_adjacency();
    let (mate_a, mate_b) = matching_positions(cut);
    let mut reached_a = vec![false; cut.side_a.len()];
    let mut reached_b = vec![false; cut.side_b.len()];
    let mut queue = VecDeque::new();
    for (ia, mate) in mate_a.iter().enumerate() {
        if mate.is_none() {
            reached_a[ia] = true;
            queue.push_back(ia);
        }
    }
    while let Some(ia) = queue.pop_front() {
        for &ib in &adj[ia] {
            if mate_a[ia] == Some(ib) || reached_b[ib] {
                continue;
            }
            reached_b[ib] = true;
            // A reached B vertex is always matched, otherwise the matching
            // would have an augmenting path.
            let next = mate_b[ib].expect("maximum matching has no augmenting path");
            if !reached_a[next] {
                reached_a[next] = true;
                queue.push_back(next);
            }
        }
    }
    let mut vertices: Vec<usize> = cut
        .side_a
        .iter()
        .zip(&reached_a)
        .filter(|(_, &r)| !r)
        .map(|(&a, _)| a)
        .chain(cut.side_b.iter().zip(&reached_b).filter(|(_, &r)| r).map(|(&b, _)| b))
        .collect();
    vertices.sort_unstable();
    KonigCover {
        vertices,
        side: CoverSide::A,
    }
}

/// The `B`-König cover: the same construction with the sides exchanged.
pub fn konig_cover_b(cut: &BipartiteCut) -> KonigCover {
    KonigCover {
        side: CoverSide::B,
        ..konig_cover_a(&cut.swapped())
    }
}
