//! Branch decompositions over the vertex set of a graph.
//!
//! A branch decomposition is a tree whose internal nodes have degree three
//! and whose leaves are in bijection with `V(G)`. Every tree edge splits
//! the leaves, and hence `V(G)`, into two parts; the mm-value of the edge is
//! the size of a maximum matching across that split and the mm-width of the
//! decomposition is the largest mm-value over its edges.
//!
//! Dynamic programming wants a rooted tree. Rooting subdivides one edge
//! and makes the new node the root, so the root always has exactly two
//! children and every other internal node has exactly two children.
//!
//! File format (`.bd`, 1-indexed, whitespace separated):
//!
//! ```text
//! c comment
//! s bd <tree-nodes> <graph-vertices>
//! r <i> <j>          optional: the tree edge to subdivide for the root
//! e <i> <j>          tree edges
//! m <leaf> <vertex>  one record per graph vertex
//! ```

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::Graph;
use crate::matching::mm_value;

/// Largest graph handled by [`exact_decomposition`].
pub const EXACT_MAX_VERTICES: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid decomposition: {0}")]
    Invalid(String),
    #[error("decomposition covers {decomposition} vertices but the graph has {graph}")]
    VertexCountMismatch { decomposition: usize, graph: usize },
    #[error("a graph on {0} vertices admits no branch decomposition")]
    TooSmall(usize),
    #[error("exhaustive search supports at most {max} vertices, got {n}")]
    TooLarge { n: usize, max: usize },
}

impl DecompositionError {
    /// Whether the error is a syntax problem rather than a violated tree
    /// invariant.
    pub fn is_syntax(&self) -> bool {
        matches!(self, DecompositionError::Parse { .. })
    }
}

fn invalid(message: impl Into<String>) -> DecompositionError {
    DecompositionError::Invalid(message.into())
}

/// Unrooted branch decomposition as read from a file or built by a search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnrootedBranchDecomposition {
    node_count: usize,
    /// Normalised `(min, max)` pairs, sorted.
    edges: Vec<(usize, usize)>,
    /// Graph vertex of each leaf node.
    leaf_vertex: Vec<Option<usize>>,
    /// Edge to subdivide when rooting; `None` picks the lowest edge.
    root_edge: Option<(usize, usize)>,
}

impl UnrootedBranchDecomposition {
    /// Validates and builds a decomposition over `vertex_count` graph
    /// vertices. `leaves` lists `(tree node, graph vertex)` pairs.
    pub fn new(
        node_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        leaves: impl IntoIterator<Item = (usize, usize)>,
        vertex_count: usize,
        root_edge: Option<(usize, usize)>,
    ) -> Result<Self, DecompositionError> {
        if vertex_count < 2 {
            return Err(DecompositionError::TooSmall(vertex_count));
        }
        let mut normalised = Vec::new();
        let mut degree = vec![0usize; node_count];
        let mut adjacency = vec![Vec::new(); node_count];
        for (i, j) in edges {
            if i >= node_count || j >= node_count {
                return Err(invalid(format!(
                    "edge ({}, {}) refers to a node outside 1..={node_count}",
                    i + 1,
                    j + 1
                )));
            }
            if i == j {
                return Err(invalid(format!("loop edge at tree node {}", i + 1)));
            }
            normalised.push((i.min(j), i.max(j)));
            degree[i] += 1;
            degree[j] += 1;
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        normalised.sort_unstable();
        if let Some(w) = normalised.windows(2).find(|w| w[0] == w[1]) {
            return Err(invalid(format!(
                "duplicate tree edge ({}, {})",
                w[0].0 + 1,
                w[0].1 + 1
            )));
        }
        if normalised.len() + 1 != node_count {
            return Err(invalid(format!(
                "{} edges cannot form a tree on {node_count} nodes",
                normalised.len()
            )));
        }
        // connectivity
        let mut seen = vec![false; node_count];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &w in &adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if let Some(u) = seen.iter().position(|s| !s) {
            return Err(invalid(format!("tree is disconnected at node {}", u + 1)));
        }
        for (u, &d) in degree.iter().enumerate() {
            if d != 1 && d != 3 {
                return Err(invalid(format!(
                    "tree node {} has degree {d}; only leaves (degree 1) and degree-3 nodes are allowed",
                    u + 1
                )));
            }
        }
        let mut leaf_vertex = vec![None; node_count];
        let mut vertex_leaf = vec![None; vertex_count];
        let mut records = 0usize;
        for (leaf, vertex) in leaves {
            records += 1;
            if leaf >= node_count {
                return Err(invalid(format!("leaf map names unknown tree node {}", leaf + 1)));
            }
            if vertex >= vertex_count {
                return Err(invalid(format!(
                    "leaf map names graph vertex {} outside 1..={vertex_count}",
                    vertex + 1
                )));
            }
            if degree[leaf] != 1 {
                return Err(invalid(format!("tree node {} is mapped but is not a leaf", leaf + 1)));
            }
            if leaf_vertex[leaf].is_some() {
                return Err(invalid(format!("leaf {} is mapped twice", leaf + 1)));
            }
            if let Some(other) = vertex_leaf[vertex] {
                return Err(invalid(format!(
                    "graph vertex {} is mapped from leaves {} and {}; the leaf map must be a bijection",
                    vertex + 1,
                    other + 1,
                    leaf + 1
                )));
            }
            leaf_vertex[leaf] = Some(vertex);
            vertex_leaf[vertex] = Some(leaf);
        }
        if records != vertex_count {
            return Err(invalid(format!(
                "expected {vertex_count} leaf map records, found {records}"
            )));
        }
        if let Some(u) = (0..node_count).find(|&u| degree[u] == 1 && leaf_vertex[u].is_none()) {
            return Err(invalid(format!("leaf {} is not mapped to a graph vertex", u + 1)));
        }
        let root_edge = match root_edge {
            None => None,
            Some((i, j)) => {
                let e = (i.min(j), i.max(j));
                if normalised.binary_search(&e).is_err() {
                    return Err(invalid(format!(
                        "root record ({}, {}) is not a tree edge",
                        i + 1,
                        j + 1
                    )));
                }
                Some(e)
            }
        };
        Ok(Self {
            node_count,
            edges: normalised,
            leaf_vertex,
            root_edge,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.leaf_vertex.iter().flatten().count()
    }

    pub fn root_edge(&self) -> Option<(usize, usize)> {
        self.root_edge
    }

    /// Replaces the edge used for rooting.
    pub fn with_root_edge(mut self, edge: (usize, usize)) -> Result<Self, DecompositionError> {
        let e = (edge.0.min(edge.1), edge.0.max(edge.1));
        if self.edges.binary_search(&e).is_err() {
            return Err(invalid(format!("({}, {}) is not a tree edge", edge.0 + 1, edge.1 + 1)));
        }
        self.root_edge = Some(e);
        Ok(self)
    }
}

/// Subdivides the chosen edge (the recorded root edge, or else the lowest
/// edge) and hangs the tree from the new node, which receives the largest
/// node id.
pub fn root_decomposition(tree: &UnrootedBranchDecomposition) -> RootedBranchDecomposition {
    let (left, right) = tree.root_edge.unwrap_or(tree.edges[0]);
    let root = tree.node_count;
    let total = root + 1;
    let mut adjacency = vec![Vec::new(); total];
    for &(i, j) in &tree.edges {
        if (i, j) == (left, right) {
            continue;
        }
        adjacency[i].push(j);
        adjacency[j].push(i);
    }
    adjacency[root] = vec![left, right];
    adjacency[left].push(root);
    adjacency[right].push(root);
    let mut parent = vec![None; total];
    let mut children = vec![Vec::new(); total];
    let mut queue = VecDeque::from([root]);
    let mut seen = vec![false; total];
    seen[root] = true;
    while let Some(u) = queue.pop_front() {
        for &w in &adjacency[u] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some(u);
                children[u].push(w);
                queue.push_back(w);
            }
        }
    }
    for list in &mut children {
        list.sort_unstable();
    }
    let mut leaf_vertex = tree.leaf_vertex.clone();
    leaf_vertex.push(None);
    RootedBranchDecomposition::from_parts(parent, children, root, leaf_vertex)
}

/// Rooted branch decomposition `(T, δ)`; the root is always the node with
/// the largest id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedBranchDecomposition {
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    root: usize,
    leaf_vertex: Vec<Option<usize>>,
    vertex_leaf: Vec<usize>,
}

impl RootedBranchDecomposition {
    fn from_parts(
        parent: Vec<Option<usize>>,
        children: Vec<Vec<usize>>,
        root: usize,
        leaf_vertex: Vec<Option<usize>>,
    ) -> Self {
        let n = leaf_vertex.iter().flatten().count();
        let mut vertex_leaf = vec![usize::MAX; n];
        for (node, v) in leaf_vertex.iter().enumerate() {
            if let Some(v) = v {
                vertex_leaf[*v] = node;
            }
        }
        debug_assert_eq!(root + 1, parent.len());
        Self {
            parent,
            children,
            root,
            leaf_vertex,
            vertex_leaf,
        }
    }

    /// Caterpillar decomposition with leaves in the given vertex order:
    /// a spine of internal nodes with one leaf hanging from each, plus one
    /// extra leaf at either end. Rooted on the lowest edge.
    pub fn caterpillar(order: &[usize]) -> Result<Self, DecompositionError> {
        let n = order.len();
        if n < 2 {
            return Err(DecompositionError::TooSmall(n));
        }
        let leaves: Vec<(usize, usize)> = order.iter().copied().enumerate().collect();
        let mut edges = Vec::new();
        if n == 2 {
            edges.push((0, 1));
        } else {
            // spine nodes n .. 2n-3
            let spine = |i: usize| n + i;
            edges.push((0, spine(0)));
            for i in 1..n - 1 {
                edges.push((i, spine(i - 1)));
                if i >= 2 {
                    edges.push((spine(i - 2), spine(i - 1)));
                }
            }
            edges.push((n - 1, spine(n - 3)));
        }
        let node_count = if n == 2 { 2 } else { 2 * n - 2 };
        let tree = UnrootedBranchDecomposition::new(node_count, edges, leaves, n, None)?;
        Ok(root_decomposition(&tree))
    }

    /// Number of tree nodes including the root.
    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    /// Number of graph vertices (leaves).
    pub fn vertex_count(&self) -> usize {
        self.vertex_leaf.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, node: usize) -> Option<usize> {
        self.parent[node]
    }

    pub fn children(&self, node: usize) -> &[usize] {
        &self.children[node]
    }

    pub fn is_leaf(&self, node: usize) -> bool {
        self.leaf_vertex[node].is_some()
    }

    /// `δ(leaf)`.
    pub fn leaf_vertex(&self, node: usize) -> Option<usize> {
        self.leaf_vertex[node]
    }

    /// `δ⁻¹(v)`.
    pub fn leaf_of(&self, vertex: usize) -> usize {
        self.vertex_leaf[vertex]
    }

    /// Tree edges, each identified by its child endpoint.
    pub fn edge_children(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.node_count()).filter(move |&u| u != self.root)
    }

    /// Nodes in post-order (children before parents, root last).
    pub fn post_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.node_count());
        let mut stack = vec![(self.root, false)];
        while let Some((u, expanded)) = stack.pop() {
            if expanded {
                order.push(u);
            } else {
                stack.push((u, true));
                for &c in self.children[u].iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        order
    }

    /// `δ(u)` for every node, each sorted ascending.
    pub fn vertex_sets(&self) -> Vec<Vec<usize>> {
        let mut sets: Vec<Vec<usize>> = vec![Vec::new(); self.node_count()];
        for u in self.post_order() {
            if let Some(v) = self.leaf_vertex[u] {
                sets[u] = vec![v];
            } else {
                let mut merged: Vec<usize> = self.children[u]
                    .iter()
                    .flat_map(|&c| sets[c].iter().copied())
                    .collect();
                merged.sort_unstable();
                sets[u] = merged;
            }
        }
        sets
    }

    /// Whether `ancestor` lies on the path from `node` to the root
    /// (a node is its own ancestor).
    pub fn is_ancestor(&self, ancestor: usize, mut node: usize) -> bool {
        loop {
            if node == ancestor {
                return true;
            }
            match self.parent[node] {
                Some(p) => node = p,
                None => return false,
            }
        }
    }

    /// Tree nodes on the path between `a` and `b`, both included.
    pub fn path_nodes(&self, a: usize, b: usize) -> Vec<usize> {
        let mut up_a = vec![a];
        let mut x = a;
        while let Some(p) = self.parent[x] {
            up_a.push(p);
            x = p;
        }
        let mut up_b = vec![b];
        let mut y = b;
        while !up_a.contains(&y) {
            y = self.parent[y].expect("root is a common ancestor");
            up_b.push(y);
        }
        let lca = y;
        let mut path: Vec<usize> = up_a.into_iter().take_while(|&u| u != lca).collect();
        path.push(lca);
        up_b.pop();
        path.extend(up_b.into_iter().rev());
        path
    }

    /// The unrooted tree: the root is suppressed and its two children are
    /// joined by the recorded root edge.
    pub fn unrooted(&self) -> UnrootedBranchDecomposition {
        let root = self.root;
        let mut edges: Vec<(usize, usize)> = self
            .edge_children()
            .filter(|&u| self.parent[u] != Some(root))
            .map(|u| {
                let p = self.parent[u].unwrap();
                (u.min(p), u.max(p))
            })
            .collect();
        let (l, r) = (self.children[root][0], self.children[root][1]);
        let root_edge = (l.min(r), l.max(r));
        edges.push(root_edge);
        edges.sort_unstable();
        let mut leaf_vertex = self.leaf_vertex.clone();
        leaf_vertex.pop();
        UnrootedBranchDecomposition {
            node_count: root,
            edges,
            leaf_vertex,
            root_edge: Some(root_edge),
        }
    }

    /// The same tree rooted on a different edge.
    pub fn rerooted(&self, edge: (usize, usize)) -> Result<Self, DecompositionError> {
        Ok(root_decomposition(&self.unrooted().with_root_edge(edge)?))
    }

    /// Restriction to a subset of graph vertices: leaves outside `keep` are
    /// pruned and nodes left with one child are contracted. `keep[i]`
    /// becomes vertex `i` of the result. Cut values over an induced
    /// subgraph can only shrink.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self, DecompositionError> {
        if keep.len() < 2 {
            return Err(DecompositionError::TooSmall(keep.len()));
        }
        let mut new_label = vec![None; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            if v >= self.vertex_count() || new_label[v].is_some() {
                return Err(invalid(format!("cannot restrict to vertex {}", v + 1)));
            }
            new_label[v] = Some(i);
        }
        // For every node, the surviving node representing its subtree.
        let mut image: Vec<Option<usize>> = vec![None; self.node_count()];
        let mut parent: Vec<Option<usize>> = Vec::new();
        let mut children: Vec<Vec<usize>> = Vec::new();
        let mut leaf_vertex: Vec<Option<usize>> = Vec::new();
        for u in self.post_order() {
            if let Some(v) = self.leaf_vertex[u] {
                if let Some(label) = new_label[v] {
                    image[u] = Some(leaf_vertex.len());
                    parent.push(None);
                    children.push(Vec::new());
                    leaf_vertex.push(Some(label));
                }
                continue;
            }
            let kept: Vec<usize> = self.children[u].iter().filter_map(|&c| image[c]).collect();
            image[u] = match kept.len() {
                0 => None,
                1 => Some(kept[0]),
                _ => {
                    let id = leaf_vertex.len();
                    for &c in &kept {
                        parent[c] = Some(id);
                    }
                    parent.push(None);
                    children.push(kept);
                    leaf_vertex.push(None);
                    Some(id)
                }
            };
        }
        let root = image[self.root].expect("at least two kept leaves");
        // post-order construction makes the root the last node
        debug_assert_eq!(root + 1, parent.len());
        for list in &mut children {
            list.sort_unstable();
        }
        Ok(Self::from_parts(parent, children, root, leaf_vertex))
    }

    /// Checks that the decomposition is over exactly `graph`'s vertices.
    pub fn check_graph(&self, graph: &Graph) -> Result<(), DecompositionError> {
        if self.vertex_count() != graph.vertex_count() {
            return Err(DecompositionError::VertexCountMismatch {
                decomposition: self.vertex_count(),
                graph: graph.vertex_count(),
            });
        }
        Ok(())
    }
}

/// Parses a `.bd` file into a rooted decomposition.
pub fn parse_bd(input: &[u8]) -> Result<RootedBranchDecomposition, DecompositionError> {
    let text = std::str::from_utf8(input).map_err(|_| DecompositionError::Parse {
        line: 0,
        message: "input is not valid UTF-8".into(),
    })?;
    let mut header: Option<(usize, usize)> = None;
    let mut root_edge = None;
    let mut edges = Vec::new();
    let mut leaves = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let perr = |message: String| DecompositionError::Parse { line, message };
        let mut tokens = raw.split_whitespace();
        let Some(tag) = tokens.next() else { continue };
        if tag == "c" {
            continue;
        }
        let fields: Vec<&str> = tokens.collect();
        if tag == "s" {
            if header.is_some() {
                return Err(perr("duplicate header".into()));
            }
            if fields.len() != 3 || fields[0] != "bd" {
                return Err(perr(format!("malformed header `{}`", raw.trim_end())));
            }
            let nodes = fields[1].parse::<usize>();
            let vertices = fields[2].parse::<usize>();
            match (nodes, vertices) {
                (Ok(t), Ok(n)) => header = Some((t, n)),
                _ => return Err(perr(format!("malformed header `{}`", raw.trim_end()))),
            }
            continue;
        }
        let Some((node_count, vertex_count)) = header else {
            return Err(perr(format!("`{tag}` record before header")));
        };
        if fields.len() != 2 {
            return Err(perr(format!("expected two fields in `{}`", raw.trim_end())));
        }
        let mut pair = [0usize; 2];
        for (slot, field) in pair.iter_mut().zip(&fields) {
            let value: usize = field
                .parse()
                .map_err(|_| perr(format!("`{field}` is not a positive integer")))?;
            if value == 0 {
                return Err(perr("indices are 1-based".into()));
            }
            *slot = value - 1;
        }
        match tag {
            "e" => edges.push((pair[0], pair[1])),
            "r" => {
                if root_edge.is_some() {
                    return Err(perr("duplicate root record".into()));
                }
                root_edge = Some((pair[0], pair[1]));
            }
            "m" => {
                if pair[1] >= vertex_count {
                    return Err(invalid(format!(
                        "leaf map names graph vertex {} outside 1..={vertex_count}",
                        pair[1] + 1
                    )));
                }
                if pair[0] >= node_count {
                    return Err(invalid(format!("leaf map names unknown tree node {}", pair[0] + 1)));
                }
                leaves.push((pair[0], pair[1]));
            }
            _ => return Err(perr(format!("unrecognised record `{tag}`"))),
        }
    }
    let Some((node_count, vertex_count)) = header else {
        return Err(DecompositionError::Parse {
            line: 0,
            message: "missing header `s bd <nodes> <vertices>`".into(),
        });
    };
    let tree = UnrootedBranchDecomposition::new(node_count, edges, leaves, vertex_count, root_edge)?;
    Ok(root_decomposition(&tree))
}

/// Writes the `.bd` text for `d`, including its root edge.
pub fn serialize_bd(d: &RootedBranchDecomposition) -> String {
    serialize_bd_with_comment(d, None)
}

pub fn serialize_bd_with_comment(d: &RootedBranchDecomposition, comment: Option<&str>) -> String {
    let tree = d.unrooted();
    let mut out = String::new();
    if let Some(comment) = comment {
        for line in comment.lines() {
            writeln!(out, "c {line}").unwrap();
        }
    }
    writeln!(out, "s bd {} {}", tree.node_count, d.vertex_count()).unwrap();
    if let Some((i, j)) = tree.root_edge {
        writeln!(out, "r {} {}", i + 1, j + 1).unwrap();
    }
    for &(i, j) in &tree.edges {
        writeln!(out, "e {} {}", i + 1, j + 1).unwrap();
    }
    for (leaf, v) in tree.leaf_vertex.iter().enumerate() {
        if let Some(v) = v {
            writeln!(out, "m {} {}", leaf + 1, v + 1).unwrap();
        }
    }
    out
}

/// mm-width of `d`: the largest `mm(δ(u))` over tree edges with child `u`.
/// Graphs with fewer than two vertices have width 0.
pub fn width_of(graph: &Graph, d: &RootedBranchDecomposition) -> Result<usize, DecompositionError> {
    d.check_graph(graph)?;
    if graph.vertex_count() <= 1 {
        return Ok(0);
    }
    let sets = d.vertex_sets();
    Ok(d.edge_children()
        .map(|u| mm_value(graph, &sets[u]))
        .max()
        .unwrap_or(0))
}

/// Minimum-width decomposition by exhaustive enumeration of all leaf-labelled
/// ternary trees. The first optimum in enumeration order is returned.
pub fn exact_decomposition(graph: &Graph) -> Result<(RootedBranchDecomposition, usize), DecompositionError> {
    let n = graph.vertex_count();
    if n < 2 {
        return Err(DecompositionError::TooSmall(n));
    }
    if n > EXACT_MAX_VERTICES {
        return Err(DecompositionError::TooLarge {
            n,
            max: EXACT_MAX_VERTICES,
        });
    }
    let mm: Vec<usize> = (0..1usize << n)
        .map(|mask| {
            let set: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            mm_value(graph, &set)
        })
        .collect();
    let mut search = ExactSearch {
        n,
        mm,
        edges: Vec::new(),
        best: None,
    };
    if n == 2 {
        search.edges.push((0, 1));
        search.evaluate();
    } else {
        let center = n;
        search.edges.extend([(0, center), (1, center), (2, center)]);
        search.insert(3);
    }
    let (width, edges) = search.best.expect("at least one tree is enumerated");
    let node_count = if n == 2 { 2 } else { 2 * n - 2 };
    let tree = UnrootedBranchDecomposition::new(node_count, edges, (0..n).map(|v| (v, v)), n, None)?;
    Ok((root_decomposition(&tree), width))
}

struct ExactSearch {
    n: usize,
    mm: Vec<usize>,
    edges: Vec<(usize, usize)>,
    best: Option<(usize, Vec<(usize, usize)>)>,
}

impl ExactSearch {
    /// Inserts leaf `leaf` by subdividing every current edge in turn.
    fn insert(&mut self, leaf: usize) {
        if leaf == self.n {
            self.evaluate();
            return;
        }
        let joint = self.n + leaf - 2;
        for e in 0..self.edges.len() {
            let (x, y) = self.edges[e];
            self.edges[e] = (x, joint);
            self.edges.push((joint, y));
            self.edges.push((leaf, joint));
            self.insert(leaf + 1);
            self.edges.pop();
            self.edges.pop();
            self.edges[e] = (x, y);
            if matches!(self.best, Some((0, _))) {
                return;
            }
        }
    }

    fn evaluate(&mut self) {
        let nodes = self.edges.len() + 1;
        let mut adjacency = vec![Vec::with_capacity(3); nodes];
        for &(i, j) in &self.edges {
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        // hang from leaf 0 and accumulate leaf masks bottom-up
        let mut order = Vec::with_capacity(nodes);
        let mut parent = vec![usize::MAX; nodes];
        let mut stack = vec![0usize];
        parent[0] = 0;
        while let Some(u) = stack.pop() {
            order.push(u);
            for &w in &adjacency[u] {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    stack.push(w);
                }
            }
        }
        let mut mask = vec![0usize; nodes];
        let mut width = 0;
        for &u in order.iter().rev() {
            if u < self.n {
                mask[u] |= 1 << u;
            }
            if u != 0 {
                width = width.max(self.mm[mask[u]]);
                mask[parent[u]] |= mask[u];
            }
        }
        if self.best.as_ref().is_none_or(|(w, _)| width < *w) {
            self.best = Some((width, self.edges.clone()));
        }
    }
}

/// Number of restarts tried by [`heuristic_decomposition`].
const HEURISTIC_RESTARTS: usize = 4;
const LOCAL_SEARCH_PASSES: usize = 64;

/// Greedy recursive splitting: the vertex set is cut into three parts at the
/// top and every part is split in two recursively. Each split starts from
/// contiguous chunks of a BFS order and is improved by single-vertex moves
/// that lower the largest, then the summed, mm-value of the new cuts.
/// Several BFS start vertices are tried; the narrowest result wins.
pub fn heuristic_decomposition(graph: &Graph, seed: u64) -> Result<RootedBranchDecomposition, DecompositionError> {
    let n = graph.vertex_count();
    if n < 2 {
        return Err(DecompositionError::TooSmall(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts: Vec<usize> = (0..n).collect();
    starts.shuffle(&mut rng);
    starts.truncate(HEURISTIC_RESTARTS);
    let mut splitter = Splitter {
        graph,
        cache: HashMap::new(),
    };
    let mut best: Option<(usize, RootedBranchDecomposition)> = None;
    for &start in &starts {
        let candidate = splitter.build(start);
        let width = width_of(graph, &candidate)?;
        if best.as_ref().is_none_or(|(w, _)| width < *w) {
            best = Some((width, candidate));
        }
    }
    Ok(best.expect("at least one restart").1)
}

struct Splitter<'g> {
    graph: &'g Graph,
    cache: HashMap<Vec<usize>, usize>,
}

impl Splitter<'_> {
    fn mm(&mut self, set: &[usize]) -> usize {
        if let Some(&v) = self.cache.get(set) {
            return v;
        }
        let v = mm_value(self.graph, set);
        self.cache.insert(set.to_vec(), v);
        v
    }

    fn build(&mut self, start: usize) -> RootedBranchDecomposition {
        let n = self.graph.vertex_count();
        let all: Vec<usize> = (0..n).collect();
        let mut edges = Vec::new();
        let mut next_internal = n;
        if n == 2 {
            edges.push((0, 1));
        } else {
            let parts = self.partition(&all, 3, start);
            let center = next_internal;
            next_internal += 1;
            for part in parts {
                let top = self.subtree(&part, start, &mut edges, &mut next_internal);
                edges.push((center, top));
            }
        }
        let tree = UnrootedBranchDecomposition::new(next_internal, edges, (0..n).map(|v| (v, v)), n, None)
            .expect("splitting produces a valid ternary tree");
        root_decomposition(&tree)
    }

    /// Builds a subtree with leaves `set`, returning its top node.
    fn subtree(
        &mut self,
        set: &[usize],
        start: usize,
        edges: &mut Vec<(usize, usize)>,
        next_internal: &mut usize,
    ) -> usize {
        if set.len() == 1 {
            return set[0];
        }
        let local_start = if set.contains(&start) { start } else { set[0] };
        let parts = self.partition(set, 2, local_start);
        let node = *next_internal;
        *next_internal += 1;
        for part in parts {
            let child = self.subtree(&part, start, edges, next_internal);
            edges.push((node, child));
        }
        node
    }

    fn score(&mut self, parts: &[Vec<usize>]) -> (usize, usize) {
        let values: Vec<usize> = parts.iter().map(|p| self.mm(p)).collect();
        (values.iter().copied().max().unwrap_or(0), values.iter().sum())
    }

    /// Splits `set` into `k` nonempty parts.
    fn partition(&mut self, set: &[usize], k: usize, start: usize) -> Vec<Vec<usize>> {
        let order = self.bfs_order(set, start);
        let mut assignment: HashMap<usize, usize> = HashMap::new();
        let len = order.len();
        for (i, &v) in order.iter().enumerate() {
            assignment.insert(v, i * k / len);
        }
        let collect = |assignment: &HashMap<usize, usize>| -> Vec<Vec<usize>> {
            let mut parts = vec![Vec::new(); k];
            for &v in set {
                parts[assignment[&v]].push(v);
            }
            parts
        };
        let mut parts = collect(&assignment);
        let mut best = self.score(&parts);
        for _ in 0..LOCAL_SEARCH_PASSES {
            let mut improved = false;
            for &v in set {
                let from = assignment[&v];
                if parts[from].len() == 1 {
                    continue;
                }
                for to in 0..k {
                    if to == from {
                        continue;
                    }
                    assignment.insert(v, to);
                    let candidate = collect(&assignment);
                    let score = self.score(&candidate);
                    if score < best {
                        best = score;
                        parts = candidate;
                        improved = true;
                        break;
                    }
                    assignment.insert(v, from);
                }
            }
            if !improved {
                break;
            }
        }
        parts
    }

    /// BFS order of `set` inside the induced subgraph, starting at `start`
    /// and continuing from the smallest unvisited vertex when stuck.
    fn bfs_order(&self, set: &[usize], start: usize) -> Vec<usize> {
        let mut inside = vec![false; self.graph.vertex_count()];
        for &v in set {
            inside[v] = true;
        }
        let mut seen = vec![false; self.graph.vertex_count()];
        let mut order = Vec::with_capacity(set.len());
        let mut queue = VecDeque::new();
        for &s in std::iter::once(&start).chain(set) {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                order.push(u);
                for &w in self.graph.neighbors(u) {
                    if inside[w] && !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        order
    }
}
