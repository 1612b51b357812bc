//! Brute-force references. Nothing here calls the matching, representation
//! or dynamic-programming code.

use thiserror::Error;

use crate::decomposition::exact_decomposition;
use crate::graph::Graph;
use crate::matching::BipartiteCut;

pub const DOMSET_MAX_VERTICES: usize = 25;
pub const BRANCH_AND_BOUND_MAX_VERTICES: usize = 64;
pub const COVER_MAX_VERTICES: usize = 16;
pub const MMW_MAX_VERTICES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{what} oracle supports at most {max} vertices, got {n}")]
    TooLarge { what: &'static str, n: usize, max: usize },
    #[error("{what} oracle needs at least {min} vertices, got {n}")]
    TooSmall { what: &'static str, n: usize, min: usize },
}

fn closed_masks(graph: &Graph) -> Vec<u64> {
    (0..graph.vertex_count())
        .map(|v| graph.neighbors(v).iter().fold(1u64 << v, |m, &u| m | 1 << u))
        .collect()
}

/// Smallest `|S|` with `N[S] = V`, trying all sets of size 0, 1, 2, ...
pub fn brute_force_domset(graph: &Graph) -> Result<usize, OracleError> {
    let n = graph.vertex_count();
    if n > DOMSET_MAX_VERTICES {
        return Err(OracleError::TooLarge {
            what: "dominating set",
            n,
            max: DOMSET_MAX_VERTICES,
        });
    }
    let closed = closed_masks(graph);
    let all = (1u64 << n) - 1;
    for size in 0..=n {
        let mut found = false;
        for_each_subset_of_size(n, size, |set| {
            let mut covered = 0u64;
            let mut rest = set;
            while rest != 0 {
                covered |= closed[rest.trailing_zeros() as usize];
                rest &= rest - 1;
            }
            found = covered == all;
            found
        });
        if found {
            return Ok(size);
        }
    }
    unreachable!("V dominates itself")
}

/// Calls `visit` on every `size`-subset of `0..n` as a bitmask, in
/// increasing numeric order, until it returns true.
fn for_each_subset_of_size(n: usize, size: usize, mut visit: impl FnMut(u64) -> bool) {
    if size > n {
        return;
    }
    if size == 0 {
        visit(0);
        return;
    }
    let limit = 1u64 << n;
    let mut set = (1u64 << size) - 1;
    while set < limit {
        if visit(set) {
            return;
        }
        // next bit permutation
        let low = set & set.wrapping_neg();
        let ripple = set + low;
        set = (((ripple ^ set) >> 2) / low) | ripple;
    }
}

/// Minimum dominating set size by branching on how the lowest undominated
/// vertex gets dominated.
pub fn branch_and_bound_domset(graph: &Graph) -> Result<usize, OracleError> {
    let n = graph.vertex_count();
    if n > BRANCH_AND_BOUND_MAX_VERTICES {
        return Err(OracleError::TooLarge {
            what: "branch and bound",
            n,
            max: BRANCH_AND_BOUND_MAX_VERTICES,
        });
    }
    let closed = closed_masks(graph);
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = n;
    branch(&closed, all, 0, 0, &mut best);
    Ok(best)
}

fn branch(closed: &[u64], all: u64, dominated: u64, used: usize, best: &mut usize) {
    if dominated == all {
        *best = (*best).min(used);
        return;
    }
    if used + 1 >= *best {
        return;
    }
    let v = (!dominated & all).trailing_zeros() as usize;
    let mut choices = closed[v];
    while choices != 0 {
        let u = choices.trailing_zeros() as usize;
        choices &= choices - 1;
        branch(closed, all, dominated | closed[u], used + 1, best);
    }
}

/// Every minimum vertex cover of the crossing edges, each sorted, the list
/// sorted lexicographically. Only cut vertices are candidates.
pub fn enumerate_min_vertex_covers(cut: &BipartiteCut) -> Result<Vec<Vec<usize>>, OracleError> {
    let mut vertices: Vec<usize> = cut.side_a().iter().chain(cut.side_b()).copied().collect();
    vertices.sort_unstable();
    let n = vertices.len();
    if n > COVER_MAX_VERTICES {
        return Err(OracleError::TooLarge {
            what: "vertex cover",
            n,
            max: COVER_MAX_VERTICES,
        });
    }
    let local = |v: usize| vertices.binary_search(&v).expect("edge endpoint on a side");
    let edges: Vec<u64> = cut
        .edges()
        .iter()
        .map(|&(a, b)| 1u64 << local(a) | 1u64 << local(b))
        .collect();
    for size in 0..=n {
        let mut covers = Vec::new();
        for_each_subset_of_size(n, size, |set| {
            if edges.iter().all(|&e| e & set != 0) {
                covers.push(
                    (0..n)
                        .filter(|&i| set >> i & 1 == 1)
                        .map(|i| vertices[i])
                        .collect::<Vec<_>>(),
                );
            }
            false
        });
        if !covers.is_empty() {
            covers.sort();
            return Ok(covers);
        }
    }
    unreachable!("all cut vertices form a cover")
}

/// Exact mm-width by exhaustive search over decompositions.
pub fn brute_force_mmw(graph: &Graph) -> Result<usize, OracleError> {
    let n = graph.vertex_count();
    if n < 2 {
        return Err(OracleError::TooSmall { what: "mm-width", n, min: 2 });
    }
    if n > MMW_MAX_VERTICES {
        return Err(OracleError::TooLarge {
            what: "mm-width",
            n,
            max: MMW_MAX_VERTICES,
        });
    }
    let (_, width) = exact_decomposition(graph).expect("size already checked");
    Ok(width)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        Graph::from_edges(10, edges).unwrap()
    }

    #[test]
    fn domset_examples() {
        for n in 1..=6 {
            assert_eq!(brute_force_domset(&Graph::complete(n)).unwrap(), 1);
            assert_eq!(brute_force_domset(&Graph::empty(n)).unwrap(), n);
        }
        assert_eq!(brute_force_domset(&Graph::cycle(6)).unwrap(), 2);
        assert_eq!(brute_force_domset(&Graph::cycle(5)).unwrap(), 2);
        assert_eq!(brute_force_domset(&petersen()).unwrap(), 3);
        assert_eq!(brute_force_domset(&Graph::empty(0)).unwrap(), 0);
        assert!(brute_force_domset(&Graph::empty(26)).is_err());
    }

    #[test]
    fn two_oracles_agree_on_small_families() {
        for n in 1..=10 {
            for g in [Graph::path(n), Graph::cycle(n.max(3)), Graph::complete(n), Graph::empty(n)] {
                assert_eq!(brute_force_domset(&g), branch_and_bound_domset(&g));
            }
        }
        assert_eq!(branch_and_bound_domset(&petersen()).unwrap(), 3);
    }

    #[test]
    fn subset_enumeration_counts() {
        let mut count = 0;
        for_each_subset_of_size(6, 3, |_| {
            count += 1;
            false
        });
        assert_eq!(count, 20);
    }

    #[test]
    fn cover_examples() {
        let edge = BipartiteCut::new(vec![0], vec![1], vec![(0, 1)]).unwrap();
        assert_eq!(enumerate_min_vertex_covers(&edge).unwrap(), vec![vec![0], vec![1]]);
        let star = BipartiteCut::new(vec![0], vec![1, 2, 3], vec![(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(enumerate_min_vertex_covers(&star).unwrap(), vec![vec![0]]);
        // a1=0 b1=1 a2=2 b2=3
        let p4 = BipartiteCut::new(vec![0, 2], vec![1, 3], vec![(0, 1), (2, 1), (2, 3)]).unwrap();
        assert_eq!(
            enumerate_min_vertex_covers(&p4).unwrap(),
            vec![vec![0, 2], vec![1, 2], vec![1, 3]]
        );
        let empty = BipartiteCut::new(vec![0], vec![1], vec![]).unwrap();
        assert_eq!(enumerate_min_vertex_covers(&empty).unwrap(), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn mmw_examples() {
        assert_eq!(brute_force_mmw(&Graph::complete(5)).unwrap(), 2);
        assert_eq!(brute_force_mmw(&Graph::path(5)).unwrap(), 1);
        assert_eq!(brute_force_mmw(&Graph::complete(2)).unwrap(), 1);
        assert!(brute_force_mmw(&Graph::complete(9)).is_err());
        assert!(brute_force_mmw(&Graph::empty(1)).is_err());
    }
}
