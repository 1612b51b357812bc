//! Maximum-matching-width (mm-width) toolkit.
//!
//! The crate covers the whole pipeline from a graph and a branch
//! decomposition over its vertex set to the size of a minimum dominating
//! set:
//!
//! * [`graph`]: simple undirected graphs and the DIMACS-like text format.
//! * [`matching`]: bipartite maximum matchings on vertex cuts, the `mm`
//!   cut function and canonical (König) minimum vertex covers.
//! * [`decomposition`]: rooted branch decompositions over `V(G)`, their
//!   mm-width, exact and heuristic construction, and the `.bd` format.
//! * [`representation`]: the subtrees-of-a-tree representation induced by
//!   König covers and the derived tree decomposition with edge and node bags.
//! * [`convolution`]: min-sum subset convolution, naive and fast.
//! * [`domset`]: the coloring-table dynamic program over the derived tree
//!   decomposition, running in `O*(8^k)` for mm-width `k`.
//! * [`oracle`]: brute-force references used by tests and `--verify`.
//! * [`cli`]: the `mmw` command-line front end.

pub mod cli;
pub mod convolution;
pub mod decomposition;
pub mod domset;
pub mod graph;
pub mod matching;
pub mod oracle;
pub mod representation;

pub use decomposition::{RootedBranchDecomposition, UnrootedBranchDecomposition};
pub use graph::Graph;
