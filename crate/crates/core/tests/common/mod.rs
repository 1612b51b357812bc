#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use mmw::decomposition::{root_decomposition, width_of, UnrootedBranchDecomposition};
use mmw::domset::{Color, ColoringTable, JoinContext, JoinObserver, Stage};
use mmw::matching::{konig_cover_a, konig_cover_b, maximum_matching, BipartiteCut};
use mmw::oracle::enumerate_min_vertex_covers;
use mmw::representation::{
    build_subtrees, build_tree_decomposition, verify_representation, verify_tree_decomposition, BagKind,
    TreeDecomposition,
};
use mmw::{Graph, RootedBranchDecomposition};

pub const INF: u32 = u32::MAX;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn gnp(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// G(n, p) plus a random spanning tree, so the result is connected.
pub fn connected_gnp(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let base = gnp(n, p, rng);
    let mut edges: Vec<(usize, usize)> = base.edges().collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for i in 1..n {
        let j = rng.gen_range(0..i);
        edges.push((order[i], order[j]));
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Disjoint union of small random pieces, with at least one isolated vertex
/// when `isolated` is set. Vertex labels are shuffled.
pub fn disconnected(n: usize, isolated: bool, rng: &mut ChaCha8Rng) -> Graph {
    let mut sizes = Vec::new();
    let mut left = n;
    if isolated {
        sizes.push(1);
        left -= 1;
    }
    while left > 0 {
        let s = rng.gen_range(1..=left.min(5));
        sizes.push(s);
        left -= s;
    }
    if sizes.len() < 2 {
        sizes = vec![n - 1, 1];
    }
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    let mut edges = Vec::new();
    let mut offset = 0;
    for s in sizes {
        let piece = gnp(s, 0.6, rng);
        edges.extend(piece.edges().map(|(u, v)| (labels[offset + u], labels[offset + v])));
        offset += s;
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Uniformly grown random ternary tree over `n >= 2` leaves, rooted on a
/// random edge. Leaf `i` carries vertex `order[i]` for a random order.
pub fn random_decomposition(n: usize, rng: &mut ChaCha8Rng) -> RootedBranchDecomposition {
    assert!(n >= 2);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let leaves: Vec<(usize, usize)> = order.iter().copied().enumerate().collect();
    let mut edges: Vec<(usize, usize)> = vec![(0, 1)];
    let mut next = n;
    for leaf in 2..n {
        // subdivide a random edge and hang the new leaf from the new node
        let i = rng.gen_range(0..edges.len());
        let (a, b) = edges.swap_remove(i);
        let mid = next;
        next += 1;
        edges.extend([(a, mid), (mid, b), (mid, leaf)]);
    }
    let node_count = next;
    let root_edge = edges[rng.gen_range(0..edges.len())];
    let tree = UnrootedBranchDecomposition::new(node_count, edges, leaves, n, Some(root_edge)).unwrap();
    root_decomposition(&tree)
}

pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((i + 5, (i + 2) % 5 + 5));
    }
    Graph::from_edges(10, edges).unwrap()
}

/// Closed neighbourhoods as bitmasks.
pub fn closed_masks(graph: &Graph) -> Vec<u64> {
    (0..graph.vertex_count())
        .map(|v| graph.neighbors(v).iter().fold(1u64 << v, |m, &u| m | 1 << u))
        .collect()
}

fn mask_of(vs: &[usize]) -> u64 {
    vs.iter().fold(0, |m, &v| m | 1 << v)
}

/// The table defined directly from dominating sets: for each coloring `f`
/// of `bag` (in the Full layout), the least `|S|` over `S ⊆ allowed` such
/// that every `1` of `f` is in `S`, every `0` of `f` and every vertex of
/// `must_dominate` is in `N[S]`.
pub fn definitional_table(graph: &Graph, bag: &[usize], allowed: &[usize], must_dominate: &[usize]) -> ColoringTable {
    let closed = closed_masks(graph);
    let allowed_mask = mask_of(allowed);
    let must = mask_of(must_dominate);
    let mut table = ColoringTable::full(bag.to_vec(), INF);
    let colorings: Vec<(u64, u64)> = (0..table.len())
        .map(|i| {
            let c = table.colors_at(i);
            let ones = bag.iter().zip(&c).filter(|(_, &c)| c == Color::One).fold(0u64, |m, (&v, _)| m | 1 << v);
            let zeros = bag.iter().zip(&c).filter(|(_, &c)| c == Color::Zero).fold(0u64, |m, (&v, _)| m | 1 << v);
            (ones, zeros)
        })
        .collect();
    let mut s = 0u64;
    loop {
        let mut dominated = 0u64;
        let mut rest = s;
        while rest != 0 {
            dominated |= closed[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        if dominated & must == must {
            let size = s.count_ones();
            for (i, &(ones, zeros)) in colorings.iter().enumerate() {
                if ones & !s == 0 && zeros & !dominated == 0 {
                    let v = &mut table.values_mut()[i];
                    *v = (*v).min(size);
                }
            }
        }
        if s == allowed_mask {
            break;
        }
        s = (s.wrapping_sub(allowed_mask)) & allowed_mask;
    }
    table
}

/// `T[t, ·]` from the definition for the edge bag of host edge `u`.
pub fn definitional_edge_table(graph: &Graph, td: &TreeDecomposition, u: usize) -> ColoringTable {
    let t = td.edge_bag_index(u).unwrap();
    let bag = td.nodes[t].bag.clone();
    let below = td.vertices_below(t);
    let forgotten: Vec<usize> = below.iter().copied().filter(|v| bag.binary_search(v).is_err()).collect();
    definitional_table(graph, &bag, &below, &forgotten)
}

/// Table over `target`'s domain holding, for each coloring, the value of
/// `source` at the same coloring. Both are over the same bag.
pub fn restrict_to_domain(source: &ColoringTable, target: &ColoringTable) -> Vec<u32> {
    assert_eq!(source.bag(), target.bag());
    (0..target.len())
        .map(|i| source.get(&target.colors_at(i)).unwrap())
        .collect()
}

/// Every table an instrumented solve produced, tagged with its join.
#[derive(Default)]
pub struct Recorder {
    pub joins: Vec<RecordedJoin>,
    current: Vec<(Stage, ColoringTable)>,
}

pub struct RecordedJoin {
    pub ctx: JoinContext,
    pub tables: Vec<(Stage, ColoringTable)>,
}

impl RecordedJoin {
    pub fn stage(&self, stage: Stage) -> &ColoringTable {
        &self.tables.iter().find(|(s, _)| *s == stage).unwrap().1
    }
}

impl JoinObserver for Recorder {
    fn table(&mut self, stage: Stage, ctx: &JoinContext, table: &mut ColoringTable) {
        self.current.push((stage, table.clone()));
        if stage == Stage::Forget {
            self.joins.push(RecordedJoin {
                ctx: ctx.clone(),
                tables: std::mem::take(&mut self.current),
            });
        }
    }
}

/// Internal host nodes in the order the solver joins them: post-order,
/// root last. Each comes with its children ordered as `(B, C)`.
pub fn join_order(d: &RootedBranchDecomposition) -> Vec<(usize, usize, usize)> {
    let sets = d.vertex_sets();
    d.post_order()
        .into_iter()
        .filter(|&u| !d.is_leaf(u))
        .map(|u| {
            let ch = d.children(u);
            let (y, z) = if sets[ch[0]][0] <= sets[ch[1]][0] { (ch[0], ch[1]) } else { (ch[1], ch[0]) };
            (u, y, z)
        })
        .collect()
}

pub fn tree_decomposition(graph: &Graph, d: &RootedBranchDecomposition) -> TreeDecomposition {
    build_tree_decomposition(&build_subtrees(graph, d).unwrap())
}

pub fn edge_bag(td: &TreeDecomposition, u: usize) -> Vec<usize> {
    td.nodes
        .iter()
        .find(|t| t.kind == BagKind::Edge(u))
        .map(|t| t.bag.clone())
        .unwrap()
}

/// Whether `f <= g` under recolorings `1 -> 0 -> *` taken pointwise.
pub fn dominated_by(f: &[Color], g: &[Color]) -> bool {
    let rank = |c: Color| match c {
        Color::One => 0,
        Color::Zero => 1,
        Color::Star => 2,
    };
    f.iter().zip(g).all(|(&a, &b)| rank(a) <= rank(b))
}

/// Whether relaxing a coloring never raises its value: `table[g] <=
/// table[f]` whenever `g` is reachable from `f` by recolorings `1 -> 0` or
/// `0 -> *` (equivalently `f <= g` pointwise), checked over all pairs.
pub fn is_monotone(table: &ColoringTable) -> bool {
    let colorings: Vec<Vec<Color>> = (0..table.len()).map(|i| table.colors_at(i)).collect();
    let values = table.values();
    for i in 0..colorings.len() {
        for j in 0..colorings.len() {
            if dominated_by(&colorings[i], &colorings[j]) && values[j] > values[i] {
                return false;
            }
        }
    }
    true
}

/// Cut with `1..=7` vertices per side, labels drawn from `0..30`, and each
/// possible crossing edge present with probability `p`.
pub fn random_cut(rng: &mut ChaCha8Rng) -> BipartiteCut {
    let a = rng.gen_range(1..=7);
    let b = rng.gen_range(1..=7);
    let mut labels: Vec<usize> = (0..30).collect();
    labels.shuffle(rng);
    let side_a = labels[..a].to_vec();
    let side_b = labels[a..a + b].to_vec();
    let p = rng.gen_range(0.1..0.9);
    let mut edges = Vec::new();
    for &u in &side_a {
        for &v in &side_b {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    BipartiteCut::new(side_a, side_b, edges).unwrap()
}

fn side_parts(cover: &[usize], cut: &BipartiteCut) -> (Vec<usize>, Vec<usize>) {
    let a = cover.iter().copied().filter(|v| cut.side_a().contains(v)).collect();
    let b = cover.iter().copied().filter(|v| cut.side_b().contains(v)).collect();
    (a, b)
}

fn subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|v| big.contains(v))
}

/// Cover size equals matching size for the A-cover, the extremal characterisation against
/// every minimum cover, and uniqueness of the cover with that property.
pub fn check_konig(cut: &BipartiteCut) -> Result<(), String> {
    let cover = konig_cover_a(cut);
    let matching = maximum_matching(cut);
    if cover.len() != matching.len() {
        return Err(format!("|cover| = {} but |M| = {}", cover.len(), matching.len()));
    }
    if !cut.is_vertex_cover(cover.vertices()) {
        return Err("A-cover misses an edge".into());
    }
    let all = enumerate_min_vertex_covers(cut).map_err(|e| e.to_string())?;
    if all.iter().any(|c| c.len() != matching.len()) {
        return Err("oracle cover size differs from |M|".into());
    }
    let (ca, cb) = side_parts(cover.vertices(), cut);
    for other in &all {
        let (oa, ob) = side_parts(other, cut);
        if !subset(&oa, &ca) || !subset(&cb, &ob) {
            return Err(format!("cover {other:?} escapes the characterisation of {:?}", cover.vertices()));
        }
    }
    let extremal: Vec<&Vec<usize>> = all
        .iter()
        .filter(|c| {
            let (xa, xb) = side_parts(c, cut);
            all.iter().all(|o| {
                let (oa, ob) = side_parts(o, cut);
                subset(&oa, &xa) && subset(&xb, &ob)
            })
        })
        .collect();
    if extremal.len() != 1 || extremal[0] != cover.vertices() {
        return Err(format!("extremal covers {extremal:?}, A-cover {:?}", cover.vertices()));
    }
    let b_cover = konig_cover_b(cut);
    let swapped = konig_cover_a(&cut.swapped());
    if b_cover.vertices() != swapped.vertices() {
        return Err("B-cover differs from the A-cover of the swapped cut".into());
    }
    Ok(())
}

/// Cover monotonicity for one tripartition A, B, X.
pub fn check_tripartition(graph: &Graph, a: &[usize], b: &[usize], x: &[usize]) -> Result<(), String> {
    let bx: Vec<usize> = b.iter().chain(x).copied().collect();
    let ax: Vec<usize> = a.iter().chain(x).copied().collect();
    let ca = konig_cover_a(&BipartiteCut::between(graph, a, &bx).unwrap()).into_vertices();
    let right = BipartiteCut::between(graph, &ax, b).unwrap();
    if right.vertices().len() > 16 {
        return Err("cut too large for the oracle".into());
    }
    let covers = enumerate_min_vertex_covers(&right).map_err(|e| e.to_string())?;
    let in_set = |s: &[usize], v: &usize| s.contains(v);
    for c in &covers {
        let a_c: Vec<usize> = c.iter().copied().filter(|v| in_set(a, v)).collect();
        let a_ca: Vec<usize> = ca.iter().copied().filter(|v| in_set(a, v)).collect();
        let b_c: Vec<usize> = c.iter().copied().filter(|v| in_set(b, v)).collect();
        let b_ca: Vec<usize> = ca.iter().copied().filter(|v| in_set(b, v)).collect();
        if !subset(&a_c, &a_ca) {
            return Err(format!("A∩C = {a_c:?} not inside A∩C_A = {a_ca:?}"));
        }
        if !subset(&b_ca, &b_c) {
            return Err(format!("B∩C = {b_c:?} does not contain B∩C_A = {b_ca:?}"));
        }
    }
    Ok(())
}

/// Cover containment at every non-root node `v`: a vertex in covers both strictly
/// below `v` and outside the subtree of `v` is in the cover of `v`'s edge.
pub fn check_cover_containment(graph: &Graph, d: &RootedBranchDecomposition) -> Result<(), String> {
    let rep = build_subtrees(graph, d).map_err(|e| e.to_string())?;
    for v in d.edge_children() {
        let mut inside = Vec::new();
        let mut outside = Vec::new();
        for x in d.edge_children() {
            if x == v {
                continue;
            }
            let cover = rep.edge_cover(x).unwrap();
            if d.is_ancestor(v, x) {
                inside.extend_from_slice(cover);
            } else {
                outside.extend_from_slice(cover);
            }
        }
        let own = rep.edge_cover(v).unwrap();
        if let Some(w) = inside.iter().find(|w| outside.contains(w) && !own.contains(w)) {
            return Err(format!("vertex {w} crosses node {v} but is not in its cover {own:?}"));
        }
    }
    Ok(())
}

/// Subtree representation and derived tree decomposition for a connected
/// graph: the verifier reports, condition i along leaf-to-leaf paths, and
/// bag bounds against `width_of`.
pub fn check_subtree_representation(graph: &Graph, d: &RootedBranchDecomposition) -> Result<(), String> {
    let k = width_of(graph, d).map_err(|e| e.to_string())?;
    let rep = build_subtrees(graph, d).map_err(|e| e.to_string())?;
    let report = verify_representation(graph, &rep, k);
    if !report.passed() {
        return Err(format!("representation: {report}"));
    }
    for (u, v) in graph.edges() {
        let path = d.path_nodes(d.leaf_of(u), d.leaf_of(v));
        let lca = path.iter().copied().find(|&w| d.is_ancestor(w, d.leaf_of(u)) && d.is_ancestor(w, d.leaf_of(v))).unwrap();
        for e in path.into_iter().filter(|&e| e != lca) {
            let cover = rep.edge_cover(e).unwrap();
            if !cover.contains(&u) && !cover.contains(&v) {
                return Err(format!("edge {u}{v}: cover of tree edge {e} holds neither end"));
            }
        }
    }
    let td = build_tree_decomposition(&rep);
    let report = verify_tree_decomposition(graph, &td, k);
    if !report.passed() {
        return Err(format!("tree decomposition: {report}"));
    }
    let max_cover = d.edge_children().map(|u| rep.edge_cover(u).unwrap().len()).max().unwrap_or(0);
    let max_edge_bag = td
        .nodes
        .iter()
        .filter(|t| matches!(t.kind, BagKind::Edge(_)))
        .map(|t| t.bag.len())
        .max()
        .unwrap_or(0);
    if max_edge_bag != max_cover || max_cover > k {
        return Err(format!("edge bags {max_edge_bag}, covers {max_cover}, width {k}"));
    }
    Ok(())
}
