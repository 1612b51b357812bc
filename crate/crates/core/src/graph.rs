//! Simple, loopless, undirected graphs on vertices `0..n`.
//!
//! Externally (in files and CLI output) vertices are 1-indexed; every
//! in-memory structure uses 0-indexed identities.

use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

/// Error raised while reading the graph text format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    /// 1-based line number; 0 when the error concerns the whole input.
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("input is not valid UTF-8")]
    NotUtf8,
    #[error("missing header line `p edge <n> <m>`")]
    MissingHeader,
    #[error("duplicate header line")]
    DuplicateHeader,
    #[error("malformed header: {0}")]
    BadHeader(String),
    #[error("malformed edge line: {0}")]
    BadEdge(String),
    #[error("edge line before header")]
    EdgeBeforeHeader,
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: u64, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("unrecognised line: {0}")]
    Unrecognised(String),
    #[error("header declares {declared} edge lines but {found} were found")]
    EdgeCountMismatch { declared: usize, found: usize },
}

/// Error raised when building a graph from an edge list.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
}

/// Simple loopless undirected graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Graph on `n` vertices without edges.
    pub fn empty(n: usize) -> Self {
        Self {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list. Duplicate edges (in either
    /// orientation) collapse to one; self-loops are rejected.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut edge_count = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Ok(Self {
            adjacency,
            edge_count: edge_count / 2,
        })
    }

    /// Complete graph `K_n`.
    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::from_edges(n, edges).expect("complete graph is simple")
    }

    /// Path `P_n` on vertices `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("path is simple")
    }

    /// Cycle `C_n`, `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a simple cycle needs at least three vertices");
        Self::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle is simple")
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    /// `N(v)`, sorted ascending.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// `N[S] = N(S) ∪ S`, sorted ascending.
    pub fn closed_neighborhood(&self, set: &[usize]) -> Vec<usize> {
        let mut mark = vec![false; self.vertex_count()];
        for &v in set {
            mark[v] = true;
            for &w in &self.adjacency[v] {
                mark[w] = true;
            }
        }
        mark.iter()
            .enumerate()
            .filter_map(|(v, &m)| m.then_some(v))
            .collect()
    }

    /// Maximal connected vertex sets, each sorted, ordered by minimum vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut component = Vec::new();
            while let Some(v) = queue.pop_front() {
                component.push(v);
                for &w in &self.adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            component.sort_unstable();
            components.push(component);
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Subgraph induced by `vertices` (sorted, distinct), relabelled so that
    /// `vertices[i]` becomes vertex `i`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut position = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            position[v] = i;
        }
        let edges = vertices.iter().enumerate().flat_map(|(i, &v)| {
            let position = &position;
            self.adjacency[v]
                .iter()
                .filter_map(move |&w| (position[w] != usize::MAX && i < position[w]).then(|| (i, position[w])))
        });
        Graph::from_edges(vertices.len(), edges.collect::<Vec<_>>()).expect("induced subgraph is simple")
    }

    /// Serialises to the graph text format (1-indexed).
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        writeln!(out, "p edge {} {}", self.vertex_count(), self.edge_count()).unwrap();
        for (u, v) in self.edges() {
            writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
        }
        out
    }
}

/// Parses the graph text format:
///
/// ```text
/// c optional comments
/// p edge <n> <m>
/// e <u> <v>        (m lines, 1 <= u, v <= n, u != v)
/// ```
///
/// Blank lines are ignored, CRLF endings are accepted and duplicate edge
/// lines collapse to a single edge.
pub fn parse_graph(input: &[u8]) -> Result<Graph, ParseError> {
    let text = std::str::from_utf8(input).map_err(|_| ParseError {
        line: 0,
        kind: ParseErrorKind::NotUtf8,
    })?;
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut edge_lines = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |kind| ParseError { line: line_no, kind };
        let line = raw.trim_end_matches('\r');
        let mut tokens = line.split_whitespace();
        let Some(tag) = tokens.next() else { continue };
        match tag {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(err(ParseErrorKind::DuplicateHeader));
                }
                let fields: Vec<&str> = tokens.collect();
                if fields.len() != 3 || fields[0] != "edge" {
                    return Err(err(ParseErrorKind::BadHeader(line.to_string())));
                }
                let n = fields[1].parse::<usize>();
                let m = fields[2].parse::<usize>();
                match (n, m) {
                    (Ok(n), Ok(m)) => header = Some((n, m)),
                    _ => return Err(err(ParseErrorKind::BadHeader(line.to_string()))),
                }
            }
            "e" => {
                let Some((n, _)) = header else {
                    return Err(err(ParseErrorKind::EdgeBeforeHeader));
                };
                let fields: Vec<&str> = tokens.collect();
                if fields.len() != 2 {
                    return Err(err(ParseErrorKind::BadEdge(line.to_string())));
                }
                let mut ends = [0usize; 2];
                for (slot, field) in ends.iter_mut().zip(&fields) {
                    let vertex: u64 = field
                        .parse()
                        .map_err(|_| err(ParseErrorKind::BadEdge(line.to_string())))?;
                    if vertex == 0 || vertex > n as u64 {
                        return Err(err(ParseErrorKind::VertexOutOfRange { vertex, n }));
                    }
                    *slot = vertex as usize - 1;
                }
                if ends[0] == ends[1] {
                    return Err(err(ParseErrorKind::SelfLoop(ends[0] + 1)));
                }
                edges.push((ends[0], ends[1]));
                edge_lines += 1;
            }
            _ => return Err(err(ParseErrorKind::Unrecognised(line.to_string()))),
        }
    }
    let Some((n, m)) = header else {
        return Err(ParseError {
            line: 0,
            kind: ParseErrorKind::MissingHeader,
        });
    };
    if m != edge_lines {
        return Err(ParseError {
            line: 0,
            kind: ParseErrorKind::EdgeCountMismatch {
                declared: m,
                found: edge_lines,
            },
        });
    }
    Ok(Graph::from_edges(n, edges).expect("validated while parsing"))
}
