//! Subtrees-of-a-tree representation and the derived tree decomposition.
//!
//! Given a rooted branch decomposition of mm-width `k`, every tree edge
//! `(parent, u)` receives the `δ(u)`-König cover `C_u` of the cut
//! `G[δ(u), V \ δ(u)]`. For a graph vertex `x`, `T_x` is the set of tree
//! edges whose cover contains `x`. These sets are connected, adjacent graph
//! vertices get subtrees that meet, and no tree edge is used by more than
//! `k` of them.
//!
//! The tree decomposition has one bag per tree edge (the vertices whose
//! subtree uses it, at most `k`), one bag per non-root internal node (the
//! union of its three edge bags, at most `3k`) and a root bag (the union of
//! the two root edge bags).

use std::collections::VecDeque;
use std::fmt;

use crate::decomposition::{DecompositionError, RootedBranchDecomposition};
use crate::graph::Graph;
use crate::matching::{konig_cover_a, BipartiteCut};

/// `{T_x}` over the host tree of a rooted branch decomposition. Tree edges
/// are identified by their child endpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubtreeRepresentation {
    host: RootedBranchDecomposition,
    /// Sorted edge ids of `T_x` for each graph vertex `x`.
    subtrees: Vec<Vec<usize>>,
    /// `C_u` for the edge with child `u`; `None` at the root.
    edge_covers: Vec<Option<Vec<usize>>>,
}

impl SubtreeRepresentation {
    pub fn host(&self) -> &RootedBranchDecomposition {
        &self.host
    }

    /// Edge ids (child endpoints) used by `T_x`.
    pub fn subtree(&self, vertex: usize) -> &[usize] {
        &self.subtrees[vertex]
    }

    pub fn subtrees(&self) -> &[Vec<usize>] {
        &self.subtrees
    }

    /// Mutable access for building counterexamples.
    pub fn subtrees_mut(&mut self) -> &mut Vec<Vec<usize>> {
        &mut self.subtrees
    }

    /// The König cover assigned to the edge with child `node`.
    pub fn edge_cover(&self, node: usize) -> Option<&[usize]> {
        self.edge_covers[node].as_deref()
    }

    /// Number of subtrees using each edge, indexed by child endpoint.
    pub fn edge_loads(&self) -> Vec<usize> {
        let mut loads = vec![0; self.host.node_count()];
        for subtree in &self.subtrees {
            for &e in subtree {
                loads[e] += 1;
            }
        }
        loads
    }

    /// Tree nodes touched by the edges of `T_x`.
    pub fn subtree_nodes(&self, vertex: usize) -> Vec<usize> {
        let mut nodes: Vec<usize> = self.subtrees[vertex]
            .iter()
            .flat_map(|&e| [e, self.host.parent(e).expect("edge ids are non-root nodes")])
            .collect();
        nodes.sort_unstable();
        nodes.dedup();
        nodes
    }
}

/// Assigns every tree edge its child-side König cover and collects `T_x`.
/// An isolated vertex `x` gets exactly the edge at its leaf.
pub fn build_subtrees(
    graph: &Graph,
    d: &RootedBranchDecomposition,
) -> Result<SubtreeRepresentation, DecompositionError> {
    d.check_graph(graph)?;
    if graph.vertex_count() < 2 {
        return Err(DecompositionError::TooSmall(graph.vertex_count()));
    }
    let sets = d.vertex_sets();
    let mut edge_covers = vec![None; d.node_count()];
    let mut subtrees = vec![Vec::new(); graph.vertex_count()];
    for u in d.edge_children() {
        let cover = konig_cover_a(&BipartiteCut::of_set(graph, &sets[u])).into_vertices();
        for &x in &cover {
            subtrees[x].push(u);
        }
        edge_covers[u] = Some(cover);
    }
    for x in 0..graph.vertex_count() {
        if graph.degree(x) == 0 {
            subtrees[x] = vec![d.leaf_of(x)];
        }
        subtrees[x].sort_unstable();
    }
    Ok(SubtreeRepresentation {
        host: d.clone(),
        subtrees,
        edge_covers,
    })
}

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    /// `None` on success, otherwise a description of the first failure.
    pub failure: Option<String>,
}

impl Check {
    fn new(name: &'static str, failure: Option<String>) -> Self {
        Self { name, failure }
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Line-oriented report: one `<name> ok` or `<name> FAIL <detail>` line per
/// check.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for check in &self.checks {
            match &check.failure {
                None => writeln!(f, "{} ok", check.name)?,
                Some(detail) => writeln!(f, "{} FAIL {detail}", check.name)?,
            }
        }
        Ok(())
    }
}

/// Whether `edges` (ids = child endpoints) form a connected subgraph of
/// the host tree.
fn edges_connected(host: &RootedBranchDecomposition, edges: &[usize]) -> bool {
    if edges.is_empty() {
        return true;
    }
    let mut in_set = vec![false; host.node_count()];
    for &e in edges {
        in_set[e] = true;
    }
    // Two edges are adjacent when they share a node: a child edge meets its
    // parent edge and its sibling edges.
    let mut seen = vec![false; host.node_count()];
    let mut queue = VecDeque::from([edges[0]]);
    seen[edges[0]] = true;
    let mut count = 0;
    while let Some(e) = queue.pop_front() {
        count += 1;
        let parent = host.parent(e).unwrap();
        let mut neighbours: Vec<usize> = host.children(e).to_vec();
        neighbours.extend(host.children(parent).iter().copied().filter(|&s| s != e));
        if host.parent(parent).is_some() {
            neighbours.push(parent);
        }
        for w in neighbours {
            if in_set[w] && !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    count == edges.len()
}

/// Check names used by [`verify_representation`].
pub const SUBTREE_CONNECTED: &str = "subtree-connected";
pub const SUBTREE_NONTRIVIAL: &str = "subtree-nontrivial";
pub const ADJACENT_SUBTREES_MEET: &str = "adjacent-subtrees-meet";
pub const EDGE_LOAD: &str = "edge-load";

/// Checks a subtree family against the representation conditions: each
/// `T_x` is connected and uses at least one edge, `T_u` and `T_v` share a
/// tree node for every graph edge `uv`, and at most `k` subtrees use any
/// tree edge.
pub fn verify_representation(graph: &Graph, rep: &SubtreeRepresentation, k: usize) -> Report {
    let host = &rep.host;
    let n = rep.subtrees.len();
    let mut report = Report::default();

    let disconnected = (0..n).find(|&x| !edges_connected(host, &rep.subtrees[x]));
    report.checks.push(Check::new(
        SUBTREE_CONNECTED,
        disconnected.map(|x| format!("subtree of vertex {} is disconnected", x + 1)),
    ));

    let trivial = (0..n).find(|&x| rep.subtrees[x].is_empty());
    report.checks.push(Check::new(
        SUBTREE_NONTRIVIAL,
        trivial.map(|x| format!("subtree of vertex {} uses no edge", x + 1)),
    ));

    let node_sets: Vec<Vec<usize>> = (0..n).map(|x| rep.subtree_nodes(x)).collect();
    let apart = graph.edges().find(|&(u, v)| {
        u >= n || v >= n || !node_sets[u].iter().any(|w| node_sets[v].binary_search(w).is_ok())
    });
    report.checks.push(Check::new(
        ADJACENT_SUBTREES_MEET,
        apart.map(|(u, v)| format!("subtrees of adjacent vertices {} and {} share no node", u + 1, v + 1)),
    ));

    let loads = rep.edge_loads();
    let heavy = host.edge_children().find(|&e| loads[e] > k);
    report.checks.push(Check::new(
        EDGE_LOAD,
        heavy.map(|e| {
            format!(
                "tree edge ({}, {}) is used by {} subtrees, more than {k}",
                e + 1,
                host.parent(e).unwrap() + 1,
                loads[e]
            )
        }),
    ));
    report
}

/// Kind of a tree-decomposition node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BagKind {
    /// Bag of the host-tree edge with this child endpoint.
    Edge(usize),
    /// Bag of a non-root internal host-tree node.
    Node(usize),
    Root,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TdNode {
    pub kind: BagKind,
    /// Sorted graph vertices.
    pub bag: Vec<usize>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

/// Rooted tree decomposition whose nodes alternate between edge bags and
/// node (or root) bags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub nodes: Vec<TdNode>,
    pub root: usize,
}

impl TreeDecomposition {
    /// Index of the bag for the host-tree edge with child `node`.
    pub fn edge_bag_index(&self, node: usize) -> Option<usize> {
        self.nodes.iter().position(|t| t.kind == BagKind::Edge(node))
    }

    /// Union of the bags in the subtree rooted at `t`, sorted.
    pub fn vertices_below(&self, t: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![t];
        while let Some(s) = stack.pop() {
            out.extend_from_slice(&self.nodes[s].bag);
            stack.extend_from_slice(&self.nodes[s].children);
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn max_bag_size(&self) -> usize {
        self.nodes.iter().map(|t| t.bag.len()).max().unwrap_or(0)
    }
}

/// Derives the tree decomposition from a subtree representation.
pub fn build_tree_decomposition(rep: &SubtreeRepresentation) -> TreeDecomposition {
    let host = &rep.host;
    let mut edge_bags: Vec<Vec<usize>> = vec![Vec::new(); host.node_count()];
    for (x, subtree) in rep.subtrees.iter().enumerate() {
        for &e in subtree {
            edge_bags[e].push(x);
        }
    }
    let mut nodes: Vec<TdNode> = Vec::new();
    // index of the node bag (or root bag) for each internal host node
    let mut node_index = vec![usize::MAX; host.node_count()];
    let mut stack = vec![host.root()];
    while let Some(u) = stack.pop() {
        let kind = if u == host.root() { BagKind::Root } else { BagKind::Node(u) };
        let mut bag: Vec<usize> = host.children(u).iter().flat_map(|&c| edge_bags[c].iter().copied()).collect();
        let parent_edge = host.parent(u).map(|_| node_index[u]);
        if parent_edge.is_some() {
            bag.extend_from_slice(&edge_bags[u]);
        }
        bag.sort_unstable();
        bag.dedup();
        let index = nodes.len();
        nodes.push(TdNode {
            kind,
            bag,
            parent: parent_edge,
            children: Vec::new(),
        });
        if let Some(p) = parent_edge {
            nodes[p].children.push(index);
        }
        for &c in host.children(u) {
            let edge_index = nodes.len();
            nodes.push(TdNode {
                kind: BagKind::Edge(c),
                bag: edge_bags[c].clone(),
                parent: Some(index),
                children: Vec::new(),
            });
            nodes[index].children.push(edge_index);
            if !host.is_leaf(c) {
                // the node bag of `c` hangs below this edge bag
                node_index[c] = edge_index;
                stack.push(c);
            }
        }
    }
    TreeDecomposition { nodes, root: 0 }
}

pub const TD_VERTEX_COVERAGE: &str = "td-vertex-coverage";
pub const TD_EDGE_COVERAGE: &str = "td-edge-coverage";
pub const TD_CONNECTIVITY: &str = "td-connectivity";
pub const TD_EDGE_BAG_SIZE: &str = "td-edge-bag-size";
pub const TD_NODE_BAG_SIZE: &str = "td-node-bag-size";

/// Checks the three tree-decomposition conditions (every vertex in some
/// bag, every edge inside some bag, bags containing a vertex form a
/// subtree) together with the size bounds `|edge bag| <= k` and
/// `|node bag| <= 3k`.
pub fn verify_tree_decomposition(graph: &Graph, td: &TreeDecomposition, k: usize) -> Report {
    let n = graph.vertex_count();
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (t, node) in td.nodes.iter().enumerate() {
        for &v in &node.bag {
            if v < n {
                holders[v].push(t);
            }
        }
    }
    let mut report = Report::default();

    let uncovered = (0..n).find(|&v| holders[v].is_empty());
    report.checks.push(Check::new(
        TD_VERTEX_COVERAGE,
        uncovered.map(|v| format!("vertex {} is in no bag", v + 1)),
    ));

    let missing = graph.edges().find(|&(u, v)| {
        !holders[u].iter().any(|t| td.nodes[*t].bag.binary_search(&v).is_ok())
    });
    report.checks.push(Check::new(
        TD_EDGE_COVERAGE,
        missing.map(|(u, v)| format!("no bag contains edge ({}, {})", u + 1, v + 1)),
    ));

    // A vertex's bags form a subtree iff exactly one of them has a parent
    // outside the set.
    let split = (0..n).find(|&v| {
        let tops = holders[v]
            .iter()
            .filter(|&&t| match td.nodes[t].parent {
                None => true,
                Some(p) => td.nodes[p].bag.binary_search(&v).is_err(),
            })
            .count();
        tops > 1
    });
    report.checks.push(Check::new(
        TD_CONNECTIVITY,
        split.map(|v| format!("bags containing vertex {} are not connected", v + 1)),
    ));

    let big_edge = td
        .nodes
        .iter()
        .find(|t| matches!(t.kind, BagKind::Edge(_)) && t.bag.len() > k);
    report.checks.push(Check::new(
        TD_EDGE_BAG_SIZE,
        big_edge.map(|t| format!("edge bag {:?} has {} vertices, more than {k}", t.kind, t.bag.len())),
    ));

    let big_node = td
        .nodes
        .iter()
        .find(|t| !matches!(t.kind, BagKind::Edge(_)) && t.bag.len() > 3 * k);
    report.checks.push(Check::new(
        TD_NODE_BAG_SIZE,
        big_node.map(|t| format!("bag {:?} has {} vertices, more than {}", t.kind, t.bag.len(), 3 * k)),
    ));
    report
}
