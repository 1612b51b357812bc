//! Minimum dominating set by dynamic programming over the tree
//! decomposition derived from a branch decomposition of mm-width `k`.
//!
//! A coloring of a bag assigns every vertex one of
//!
//! * `1`: the vertex is in the dominating set,
//! * `0`: the vertex is dominated,
//! * `*`: no constraint.
//!
//! `T[t, f]` is the fewest dominators inside the part of the graph below
//! `t` that dominate every forgotten vertex and agree with `f` on the bag.
//! Each internal host-tree node `x` with parent edge bag `A` and child edge
//! bags `B`, `C` turns `T[b, ·]` and `T[c, ·]` into `T[a, ·]` in six steps
//! without ever materialising a table over all `3^|X|` colorings of
//! `X = A ∪ B ∪ C`: only the shared vertices `L = (A∩B) ∪ (A∩C) ∪ (B∩C)`
//! may keep color `1` through the join, which bounds every intermediate
//! table by `3^|L| · 2^|X \ L|` entries.

use thiserror::Error;

use crate::convolution::{add, convolve_fast, ConvolutionError, MinSumTable, Value, INFINITY};
use crate::decomposition::{DecompositionError, RootedBranchDecomposition};
use crate::graph::Graph;
use crate::representation::{build_subtrees, build_tree_decomposition, BagKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error("table contract violated: {0}")]
    Contract(String),
    #[error(transparent)]
    Convolution(#[from] ConvolutionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    One,
    Zero,
    Star,
}

impl Color {
    pub fn symbol(self) -> char {
        match self {
            Color::One => '1',
            Color::Zero => '0',
            Color::Star => '*',
        }
    }
}

/// Colors a table position may take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Alphabet {
    /// `{1, 0, *}` as digits `0, 1, 2`.
    Full,
    /// `{0, *}` as digits `0, 1`.
    ZeroStar,
}

impl Alphabet {
    pub fn radix(self) -> usize {
        match self {
            Alphabet::Full => 3,
            Alphabet::ZeroStar => 2,
        }
    }

    pub fn digit(self, color: Color) -> Option<usize> {
        match (self, color) {
            (Alphabet::Full, Color::One) => Some(0),
            (Alphabet::Full, Color::Zero) => Some(1),
            (Alphabet::Full, Color::Star) => Some(2),
            (Alphabet::ZeroStar, Color::One) => None,
            (Alphabet::ZeroStar, Color::Zero) => Some(0),
            (Alphabet::ZeroStar, Color::Star) => Some(1),
        }
    }

    pub fn color(self, digit: usize) -> Color {
        match (self, digit) {
            (Alphabet::Full, 0) => Color::One,
            (Alphabet::Full, 1) | (Alphabet::ZeroStar, 0) => Color::Zero,
            _ => Color::Star,
        }
    }
}

/// Dense map from colorings of a bag to extended naturals.
///
/// Bag vertices are sorted ascending; a coloring is stored at the
/// mixed-radix index `Σ digit(p) · stride(p)` with position 0 least
/// significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringTable {
    bag: Vec<usize>,
    alphabets: Vec<Alphabet>,
    strides: Vec<usize>,
    values: Vec<Value>,
}

impl ColoringTable {
    /// Table over `bag` (sorted) with the given alphabets, all entries
    /// `value`.
    pub fn filled(bag: Vec<usize>, alphabets: Vec<Alphabet>, value: Value) -> Self {
        assert_eq!(bag.len(), alphabets.len());
        debug_assert!(bag.windows(2).all(|w| w[0] < w[1]), "bag must be sorted");
        let mut strides = Vec::with_capacity(bag.len());
        let mut size = 1usize;
        for a in &alphabets {
            strides.push(size);
            size *= a.radix();
        }
        Self {
            bag,
            alphabets,
            strides,
            values: vec![value; size],
        }
    }

    /// Table over `bag` where every position takes all three colors.
    pub fn full(bag: Vec<usize>, value: Value) -> Self {
        let alphabets = vec![Alphabet::Full; bag.len()];
        Self::filled(bag, alphabets, value)
    }

    pub fn bag(&self) -> &[usize] {
        &self.bag
    }

    pub fn alphabets(&self) -> &[Alphabet] {
        &self.alphabets
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Value] {
        &mut self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn position(&self, vertex: usize) -> Option<usize> {
        self.bag.binary_search(&vertex).ok()
    }

    /// Index of a coloring given per position, `None` if some color is
    /// outside its position's alphabet.
    pub fn index_of(&self, colors: &[Color]) -> Option<usize> {
        assert_eq!(colors.len(), self.bag.len());
        colors
            .iter()
            .zip(&self.alphabets)
            .zip(&self.strides)
            .try_fold(0usize, |acc, ((&c, a), &s)| a.digit(c).map(|d| acc + d * s))
    }

    /// Writes the coloring stored at `index` into `out`.
    pub fn decode_into(&self, mut index: usize, out: &mut Vec<Color>) {
        out.clear();
        for a in &self.alphabets {
            out.push(a.color(index % a.radix()));
            index /= a.radix();
        }
    }

    pub fn colors_at(&self, index: usize) -> Vec<Color> {
        let mut out = Vec::with_capacity(self.bag.len());
        self.decode_into(index, &mut out);
        out
    }

    pub fn get(&self, colors: &[Color]) -> Option<Value> {
        self.index_of(colors).map(|i| self.values[i])
    }

    pub fn set(&mut self, colors: &[Color], value: Value) {
        let i = self.index_of(colors).expect("coloring outside the table's alphabets");
        self.values[i] = value;
    }

    /// Iterates `(coloring, value)` pairs in index order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<Color>, Value)> + '_ {
        (0..self.len()).map(move |i| (self.colors_at(i), self.values[i]))
    }
}

/// The three edge bags around a degree-3 host node and the derived sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JoinContext {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub c: Vec<usize>,
    /// `A ∪ B ∪ C`
    pub x: Vec<usize>,
    /// `(A∩B) ∪ (A∩C) ∪ (B∩C)`
    pub l: Vec<usize>,
}

impl JoinContext {
    pub fn new(a: &[usize], b: &[usize], c: &[usize]) -> Self {
        let sorted = |s: &[usize]| {
            let mut v = s.to_vec();
            v.sort_unstable();
            v.dedup();
            v
        };
        let (a, b, c) = (sorted(a), sorted(b), sorted(c));
        let mut x: Vec<usize> = a.iter().chain(&b).chain(&c).copied().collect();
        x.sort_unstable();
        x.dedup();
        let l = x
            .iter()
            .copied()
            .filter(|v| {
                let count = [&a, &b, &c].iter().filter(|s| s.binary_search(v).is_ok()).count();
                count >= 2
            })
            .collect();
        Self { a, b, c, x, l }
    }

    fn in_l(&self, v: usize) -> bool {
        self.l.binary_search(&v).is_ok()
    }

    /// Entries of a stage-(4)/(5) table: `3^|L| · 2^|X \ L|`.
    pub fn join_table_size(&self) -> usize {
        3usize.pow(self.l.len() as u32) * 2usize.pow((self.x.len() - self.l.len()) as u32)
    }

    /// Alphabets over `X` letting only `own ∩ L` take color `1`.
    fn alphabets_for(&self, own: &[usize]) -> Vec<Alphabet> {
        self.x
            .iter()
            .map(|v| {
                if self.in_l(*v) && own.binary_search(v).is_ok() {
                    Alphabet::Full
                } else {
                    Alphabet::ZeroStar
                }
            })
            .collect()
    }
}

/// `T[ℓ, ·]` for the leaf edge of vertex `v`: `1 -> 1`, `0 -> ∞`, `* -> 0`.
pub fn leaf_table(v: usize) -> ColoringTable {
    let mut t = ColoringTable::full(vec![v], INFINITY);
    t.set(&[Color::One], 1);
    t.set(&[Color::Zero], INFINITY);
    t.set(&[Color::Star], 0);
    t
}

/// Monotone closure: afterwards `T[f] <= T[f']` whenever `f` arises from
/// `f'` by recoloring one vertex `1 -> 0` or `0 -> *` (and so `1 -> *`).
///
/// Recolorings `1 -> 0` are pushed from colorings with the most `1`s
/// downwards, then `0 -> *` from colorings with the most `0`s downwards.
pub fn extend_table(table: &ColoringTable) -> ColoringTable {
    let mut out = table.clone();
    let width = out.bag.len();
    let mut colors = Vec::with_capacity(width);
    let mut ones = vec![0u8; out.len()];
    let mut zeros = vec![0u8; out.len()];
    for i in 0..out.len() {
        out.decode_into(i, &mut colors);
        ones[i] = colors.iter().filter(|&&c| c == Color::One).count() as u8;
        zeros[i] = colors.iter().filter(|&&c| c == Color::Zero).count() as u8;
    }
    let by_count_desc = |counts: &[u8]| {
        let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); width + 1];
        for (i, &c) in counts.iter().enumerate() {
            buckets[c as usize].push(i);
        }
        buckets
    };
    // 1 -> 0: in a Full position the digit goes 0 -> 1, i.e. + stride.
    let buckets = by_count_desc(&ones);
    for q in (1..=width).rev() {
        for &i in &buckets[q] {
            let value = out.values[i];
            if value == INFINITY {
                continue;
            }
            out.decode_into(i, &mut colors);
            for p in 0..width {
                if colors[p] == Color::One {
                    let target = i + out.strides[p];
                    out.values[target] = out.values[target].min(value);
                }
            }
        }
    }
    // 0 -> *: + stride in either alphabet.
    let buckets = by_count_desc(&zeros);
    for q in (1..=width).rev() {
        for &i in &buckets[q] {
            let value = out.values[i];
            if value == INFINITY {
                continue;
            }
            out.decode_into(i, &mut colors);
            for p in 0..width {
                if colors[p] == Color::Zero {
                    let target = i + out.strides[p];
                    out.values[target] = out.values[target].min(value);
                }
            }
        }
    }
    out
}

/// Colorings of `X` listed one per entry, as produced by step (1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialTable {
    /// The child bag the entries came from.
    pub source: Vec<usize>,
    /// `X`, sorted.
    pub bag: Vec<usize>,
    /// Row-major colorings, `bag.len()` colors per entry.
    colors: Vec<Color>,
    values: Vec<Value>,
}

impl PartialTable {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[Color], Value)> + '_ {
        let width = self.bag.len().max(1);
        (0..self.values.len()).map(move |i| {
            let colors = if self.bag.is_empty() {
                &self.colors[0..0]
            } else {
                &self.colors[i * width..(i + 1) * width]
            };
            (colors, self.values[i])
        })
    }
}

/// Step (1): lifts each coloring `f` of a child bag to the unique coloring
/// of `X` that colors vertices outside the child bag `0` when a `1` of `f`
/// is adjacent to them and `*` otherwise.
pub fn step1_extend(child: &ColoringTable, ctx: &JoinContext, graph: &Graph) -> PartialTable {
    let width = ctx.x.len();
    let source = child.bag.clone();
    let child_pos: Vec<Option<usize>> = ctx.x.iter().map(|&v| child.position(v)).collect();
    let mut colors = Vec::with_capacity(child.len() * width);
    let mut values = Vec::with_capacity(child.len());
    let mut f = Vec::with_capacity(source.len());
    for i in 0..child.len() {
        child.decode_into(i, &mut f);
        for (p, &v) in ctx.x.iter().enumerate() {
            let color = match child_pos[p] {
                Some(q) => f[q],
                None => {
                    let dominated = source
                        .iter()
                        .zip(&f)
                        .any(|(&u, &c)| c == Color::One && graph.has_edge(u, v));
                    if dominated {
                        Color::Zero
                    } else {
                        Color::Star
                    }
                }
            };
            colors.push(color);
        }
        values.push(child.values[i]);
    }
    PartialTable {
        source,
        bag: ctx.x.clone(),
        colors,
        values,
    }
}

/// Step (2): demotes `1` to `0` on child-bag vertices outside `L` and
/// min-merges colliding entries into a dense table whose `1`s are confined
/// to `child ∩ L`. Missing entries are ∞.
pub fn step2_project(partial: &PartialTable, ctx: &JoinContext) -> Result<ColoringTable, SolveError> {
    let own = &partial.source;
    let mut table = ColoringTable::filled(ctx.x.clone(), ctx.alphabets_for(own), INFINITY);
    let demote: Vec<bool> = ctx
        .x
        .iter()
        .map(|v| own.binary_search(v).is_ok() && !ctx.in_l(*v))
        .collect();
    let mut g = Vec::with_capacity(ctx.x.len());
    for (f, value) in partial.entries() {
        g.clear();
        g.extend(f.iter().zip(&demote).map(|(&c, &d)| if d && c == Color::One { Color::Zero } else { c }));
        let index = table.index_of(&g).ok_or_else(|| {
            SolveError::Contract("step (2) produced a 1 outside the child's shared vertices".into())
        })?;
        table.values[index] = table.values[index].min(value);
    }
    Ok(table)
}

fn check_child_domain(table: &ColoringTable, ctx: &JoinContext, own: &[usize], name: &str) -> Result<(), SolveError> {
    if table.bag != ctx.x || table.alphabets != ctx.alphabets_for(own) {
        return Err(SolveError::Contract(format!(
            "{name} table is not over X with 1s confined to {name} ∩ L"
        )));
    }
    Ok(())
}

/// Step (4): for each dominator set `D ⊆ L`, one min-sum subset convolution
/// over `X \ D` combines the two closed child tables; vertices of `D` in
/// both child bags were paid for twice and are refunded once.
pub fn step4_join(
    tb: &ColoringTable,
    tc: &ColoringTable,
    ctx: &JoinContext,
    bound: Value,
) -> Result<ColoringTable, SolveError> {
    check_child_domain(tb, ctx, &ctx.b, "B")?;
    check_child_domain(tc, ctx, &ctx.c, "C")?;
    let alphabets: Vec<Alphabet> = ctx
        .x
        .iter()
        .map(|&v| if ctx.in_l(v) { Alphabet::Full } else { Alphabet::ZeroStar })
        .collect();
    let mut out = ColoringTable::filled(ctx.x.clone(), alphabets, INFINITY);
    let l_pos: Vec<usize> = ctx.l.iter().map(|&v| ctx.x.binary_search(&v).unwrap()).collect();
    let in_b: Vec<bool> = ctx.x.iter().map(|v| ctx.b.binary_search(v).is_ok()).collect();
    let in_c: Vec<bool> = ctx.x.iter().map(|v| ctx.c.binary_search(v).is_ok()).collect();
    let normalise = |v: Value| if v > bound { INFINITY } else { v };

    for d_mask in 0..1usize << l_pos.len() {
        let mut is_d = vec![false; ctx.x.len()];
        for (i, &p) in l_pos.iter().enumerate() {
            if d_mask >> i & 1 == 1 {
                is_d[p] = true;
            }
        }
        let ground: Vec<usize> = (0..ctx.x.len()).filter(|&p| !is_d[p]).collect();
        let refund = (0..ctx.x.len()).filter(|&p| is_d[p] && in_b[p] && in_c[p]).count() as Value;
        // index of the coloring with 1 on `D ∩ side` (or on `D` for the
        // output) and * elsewhere; setting a ground element to 0 lowers
        // its digit by one, i.e. subtracts its stride.
        let base = |table: &ColoringTable, side: Option<&[bool]>| -> usize {
            let colors: Vec<Color> = (0..ctx.x.len())
                .map(|p| {
                    if is_d[p] && side.is_none_or(|s| s[p]) {
                        Color::One
                    } else {
                        Color::Star
                    }
                })
                .collect();
            table.index_of(&colors).expect("1s only on shared vertices of the side")
        };
        let subset_indices = |table: &ColoringTable, start: usize| -> Vec<usize> {
            let mut idx = vec![start; 1 << ground.len()];
            for s in 1..idx.len() {
                let low = s.trailing_zeros() as usize;
                idx[s] = idx[s & (s - 1)] - table.strides[ground[low]];
            }
            idx
        };
        let b_idx = subset_indices(tb, base(tb, Some(&in_b)));
        let c_idx = subset_indices(tc, base(tc, Some(&in_c)));
        let out_idx = subset_indices(&out, base(&out, None));
        let g = MinSumTable::new(
            ground.iter().map(|&p| ctx.x[p]).collect(),
            b_idx.iter().map(|&i| normalise(tb.values[i])).collect(),
        )?;
        let h = MinSumTable::new(
            g.ground().to_vec(),
            c_idx.iter().map(|&i| normalise(tc.values[i])).collect(),
        )?;
        let conv = convolve_fast(&g, &h, bound)?;
        for (s, &i) in out_idx.iter().enumerate() {
            let v = conv.get(s);
            out.values[i] = if v == INFINITY { INFINITY } else { v.saturating_sub(refund) };
        }
    }
    Ok(out)
}

/// Step (6): reads `T[a, f]` for every coloring `f` of `A` from the closed
/// join table. Dominators of `f` outside `L` are new and paid for here;
/// vertices they dominate need nothing from below, every other `0` of `f`
/// and every forgotten vertex must already be dominated from below.
pub fn step6_forget(t2sc: &ColoringTable, ctx: &JoinContext, graph: &Graph) -> Result<ColoringTable, SolveError> {
    let mut out = ColoringTable::full(ctx.a.clone(), INFINITY);
    let a_pos: Vec<Option<usize>> = ctx.x.iter().map(|v| ctx.a.binary_search(v).ok()).collect();
    let in_l: Vec<bool> = ctx.x.iter().map(|&v| ctx.in_l(v)).collect();
    let mut f = Vec::with_capacity(ctx.a.len());
    let mut lifted = Vec::with_capacity(ctx.x.len());
    for i in 0..out.len() {
        out.decode_into(i, &mut f);
        let dominators: Vec<usize> = ctx
            .a
            .iter()
            .zip(&f)
            .filter(|(_, &c)| c == Color::One)
            .map(|(&v, _)| v)
            .collect();
        let fresh = dominators.iter().filter(|&&v| !ctx.in_l(v)).count() as Value;
        lifted.clear();
        for (p, &v) in ctx.x.iter().enumerate() {
            let dominated_above = || dominators.iter().any(|&u| graph.has_edge(u, v));
            let color = match a_pos[p] {
                Some(q) if in_l[p] && f[q] == Color::One => Color::One,
                Some(q) if f[q] == Color::Zero && !dominated_above() => Color::Zero,
                None if !dominated_above() => Color::Zero,
                _ => Color::Star,
            };
            lifted.push(color);
        }
        let below = t2sc
            .get(&lifted)
            .ok_or_else(|| SolveError::Contract("step (6) looked up a coloring outside the join table".into()))?;
        out.values[i] = add(below, fresh);
    }
    Ok(out)
}

/// Which child a per-child stage belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Child {
    B,
    C,
}

/// Dense tables materialised during one join, in order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    /// Step (2).
    Project(Child),
    /// Step (3).
    ChildClosure(Child),
    /// Step (4).
    Convolve,
    /// Step (5).
    JoinClosure,
    /// Step (6).
    Forget,
}

/// Hooks into the join pipeline. Tables may be inspected or mutated.
pub trait JoinObserver {
    fn lifted(&mut self, _child: Child, _ctx: &JoinContext, _entries: usize) {}
    fn table(&mut self, _stage: Stage, _ctx: &JoinContext, _table: &mut ColoringTable) {}
}

pub struct NoObserver;

impl JoinObserver for NoObserver {}

/// Steps (1) to (6) for one host node.
pub fn join(
    tb: &ColoringTable,
    tc: &ColoringTable,
    ctx: &JoinContext,
    graph: &Graph,
    bound: Value,
    observer: &mut dyn JoinObserver,
) -> Result<ColoringTable, SolveError> {
    let mut closed = Vec::with_capacity(2);
    for (child, table) in [(Child::B, tb), (Child::C, tc)] {
        let lifted = step1_extend(table, ctx, graph);
        observer.lifted(child, ctx, lifted.len());
        let mut projected = step2_project(&lifted, ctx)?;
        observer.table(Stage::Project(child), ctx, &mut projected);
        let mut closure = extend_table(&projected);
        observer.table(Stage::ChildClosure(child), ctx, &mut closure);
        closed.push(closure);
    }
    let mut joined = step4_join(&closed[0], &closed[1], ctx, bound)?;
    observer.table(Stage::Convolve, ctx, &mut joined);
    let mut joined = extend_table(&joined);
    observer.table(Stage::JoinClosure, ctx, &mut joined);
    let mut forgotten = step6_forget(&joined, ctx, graph)?;
    observer.table(Stage::Forget, ctx, &mut forgotten);
    Ok(forgotten)
}

/// Size of a minimum dominating set of `graph`, computed over `d`.
pub fn solve(graph: &Graph, d: &RootedBranchDecomposition) -> Result<usize, SolveError> {
    solve_observed(graph, d, &mut NoObserver)
}

/// [`solve`] with every join reported to `observer`. Disconnected graphs are
/// solved per component on the restricted decomposition; single-vertex
/// components contribute one.
pub fn solve_observed(
    graph: &Graph,
    d: &RootedBranchDecomposition,
    observer: &mut dyn JoinObserver,
) -> Result<usize, SolveError> {
    d.check_graph(graph)?;
    let mut total = 0;
    for component in graph.connected_components() {
        if component.len() == 1 {
            total += 1;
            continue;
        }
        let sub = graph.induced_subgraph(&component);
        let sub_d = d.restrict(&component)?;
        total += solve_connected(&sub, &sub_d, observer)?;
    }
    Ok(total)
}

/// The DP proper, for a connected graph on at least two vertices.
pub fn solve_connected(
    graph: &Graph,
    d: &RootedBranchDecomposition,
    observer: &mut dyn JoinObserver,
) -> Result<usize, SolveError> {
    d.check_graph(graph)?;
    let rep = build_subtrees(graph, d)?;
    let td = build_tree_decomposition(&rep);
    let mut edge_bags: Vec<Vec<usize>> = vec![Vec::new(); d.node_count()];
    for node in &td.nodes {
        if let BagKind::Edge(u) = node.kind {
            edge_bags[u] = node.bag.clone();
        }
    }
    let sets = d.vertex_sets();
    let bound = graph.vertex_count() as Value;
    let ordered_children = |u: usize| -> (usize, usize) {
        let ch = d.children(u);
        let (y, z) = (ch[0], ch[1]);
        if sets[y][0] <= sets[z][0] {
            (y, z)
        } else {
            (z, y)
        }
    };
    let mut tables: Vec<Option<ColoringTable>> = vec![None; d.node_count()];
    for u in d.post_order() {
        if u == d.root() {
            break;
        }
        let table = match d.leaf_vertex(u) {
            Some(v) => {
                if edge_bags[u] != [v] {
                    return Err(SolveError::Contract(format!(
                        "leaf edge of vertex {} has bag {:?}",
                        v + 1,
                        edge_bags[u]
                    )));
                }
                leaf_table(v)
            }
            None => {
                let (y, z) = ordered_children(u);
                let ctx = JoinContext::new(&edge_bags[u], &edge_bags[y], &edge_bags[z]);
                let tb = tables[y].take().expect("children come first in post-order");
                let tc = tables[z].take().expect("children come first in post-order");
                join(&tb, &tc, &ctx, graph, bound, observer)?
            }
        };
        tables[u] = Some(table);
    }
    // The root joins its two edges under an empty parent bag; step (6) then
    // asks for every vertex of the root bag to be dominated.
    let (y, z) = ordered_children(d.root());
    let ctx = JoinContext::new(&[], &edge_bags[y], &edge_bags[z]);
    let tb = tables[y].take().expect("root children are processed");
    let tc = tables[z].take().expect("root children are processed");
    let top = join(&tb, &tc, &ctx, graph, bound, observer)?;
    match top.values[0] {
        INFINITY => Err(SolveError::Contract("root table has no finite entry".into())),
        v => Ok(v as usize),
    }
}

/// Observer that checks every join table against the size bounds: child
/// stages have exactly `3^|B∩L| · 2^|X \ (B∩L)|` entries, join stages
/// exactly `3^|L| · 2^|X \ L|`, and no table exceeds the larger of that bound
/// and the edge tables `3^|A|`, `3^|B|`, `3^|C|`.
#[derive(Debug, Default, Clone)]
pub struct TableAudit {
    pub joins: usize,
    pub tables: usize,
    pub largest: usize,
    pub violations: Vec<String>,
}

impl TableAudit {
    fn note(&mut self, what: &str, size: usize, expected: Option<usize>, cap: usize) {
        self.largest = self.largest.max(size);
        if let Some(e) = expected {
            if size != e {
                self.violations.push(format!("{what}: {size} entries, expected {e}"));
            }
        }
        if size > cap {
            self.violations.push(format!("{what}: {size} entries exceed {cap}"));
        }
    }
}

fn pow3(k: usize) -> usize {
    3usize.pow(k as u32)
}

impl JoinObserver for TableAudit {
    fn lifted(&mut self, child: Child, ctx: &JoinContext, entries: usize) {
        let own = if child == Child::B { &ctx.b } else { &ctx.c };
        self.note("step (1)", entries, Some(pow3(own.len())), pow3(own.len()));
    }

    fn table(&mut self, stage: Stage, ctx: &JoinContext, table: &mut ColoringTable) {
        self.tables += 1;
        let join_bound = ctx.join_table_size();
        let cap = join_bound
            .max(pow3(ctx.a.len()))
            .max(pow3(ctx.b.len()))
            .max(pow3(ctx.c.len()));
        match stage {
            Stage::Project(child) | Stage::ChildClosure(child) => {
                let own = if child == Child::B { &ctx.b } else { &ctx.c };
                let shared = own.iter().filter(|v| ctx.in_l(**v)).count();
                let expected = pow3(shared) * 2usize.pow((ctx.x.len() - shared) as u32);
                self.note(&format!("{stage:?}"), table.len(), Some(expected), join_bound);
            }
            Stage::Convolve | Stage::JoinClosure => {
                self.note(&format!("{stage:?}"), table.len(), Some(join_bound), join_bound);
            }
            Stage::Forget => {
                self.joins += 1;
                self.note("Forget", table.len(), Some(pow3(ctx.a.len())), cap);
            }
        }
    }
}
