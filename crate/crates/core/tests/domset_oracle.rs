mod common;

use common::*;
use rand::Rng;

use mmw::decomposition::heuristic_decomposition;
use mmw::domset::{
    extend_table, solve, solve_observed, Alphabet, Child, Color, ColoringTable, JoinContext, SolveError, Stage,
};
use mmw::oracle::brute_force_domset;
use mmw::{Graph, RootedBranchDecomposition};

#[test]
fn named_graphs() {
    let cases = [
        (Graph::path(3), 1),
        (Graph::complete(4), 1),
        (Graph::cycle(5), 2),
        (petersen(), 3),
        (Graph::cycle(6), 2),
        (Graph::empty(4), 4),
    ];
    let mut r = rng(1);
    for (g, expected) in cases {
        assert_eq!(brute_force_domset(&g).unwrap(), expected);
        let n = g.vertex_count();
        let caterpillar = RootedBranchDecomposition::caterpillar(&(0..n).collect::<Vec<_>>()).unwrap();
        assert_eq!(solve(&g, &caterpillar).unwrap(), expected);
        assert_eq!(solve(&g, &heuristic_decomposition(&g, 0).unwrap()).unwrap(), expected);
        for _ in 0..5 {
            assert_eq!(solve(&g, &random_decomposition(n, &mut r)).unwrap(), expected);
        }
    }
}

#[test]
fn decomposition_independence() {
    let mut r = rng(2);
    for _ in 0..15 {
        let n = r.gen_range(4..=10);
        let g = gnp(n, 0.4, &mut r);
        let mut answers = Vec::new();
        for seed in 0..3 {
            answers.push(solve(&g, &heuristic_decomposition(&g, seed).unwrap()).unwrap());
        }
        for _ in 0..4 {
            answers.push(solve(&g, &random_decomposition(n, &mut r)).unwrap());
        }
        let order: Vec<usize> = (0..n).rev().collect();
        answers.push(solve(&g, &RootedBranchDecomposition::caterpillar(&order).unwrap()).unwrap());
        assert!(answers.iter().all(|&a| a == answers[0]), "{answers:?}");
        assert_eq!(answers[0], brute_force_domset(&g).unwrap());
    }
}

#[test]
fn invalid_decomposition_is_rejected() {
    let g = Graph::path(4);
    let d = RootedBranchDecomposition::caterpillar(&[0, 1, 2]).unwrap();
    assert!(matches!(solve(&g, &d), Err(SolveError::Decomposition(_))));
}

#[test]
fn single_vertex_and_empty_graph() {
    // a two-leaf decomposition restricted per component
    let g = Graph::empty(2);
    let d = RootedBranchDecomposition::caterpillar(&[1, 0]).unwrap();
    assert_eq!(solve(&g, &d).unwrap(), 2);
}

/// `T[a, ·]` produced at every edge, closed under Extend-Table, equals the
/// table defined from dominating sets of `G_a`; the raw table is never
/// below it.
#[test]
fn edge_tables_match_definition() {
    let mut r = rng(3);
    for case in 0..40 {
        let n = r.gen_range(3..=9);
        let p = [0.2, 0.5, 0.8][case % 3];
        let g = connected_gnp(n, p, &mut r);
        let d = random_decomposition(n, &mut r);
        let td = tree_decomposition(&g, &d);
        let mut rec = Recorder::default();
        let answer = solve_observed(&g, &d, &mut rec).unwrap();
        assert_eq!(answer, brute_force_domset(&g).unwrap());
        let order = join_order(&d);
        assert_eq!(order.len(), rec.joins.len());
        for ((u, y, z), join) in order.iter().zip(&rec.joins) {
            if *u == d.root() {
                continue;
            }
            assert_eq!(join.ctx, JoinContext::new(&edge_bag(&td, *u), &edge_bag(&td, *y), &edge_bag(&td, *z)));
            let raw = join.stage(Stage::Forget);
            let expected = definitional_edge_table(&g, &td, *u);
            assert_eq!(extend_table(raw).values(), expected.values(), "case {case}, edge {u}");
            for (a, b) in raw.values().iter().zip(expected.values()) {
                assert!(a >= b);
            }
        }
    }
}

/// Child tables after step (3) and join tables after step (5) hold the
/// least number of dominators taken from the child subtrees only.
#[test]
fn intermediate_tables_match_definition() {
    let mut r = rng(4);
    for case in 0..30 {
        let n = r.gen_range(3..=8);
        let g = connected_gnp(n, [0.3, 0.6][case % 2], &mut r);
        let d = random_decomposition(n, &mut r);
        let td = tree_decomposition(&g, &d);
        let mut rec = Recorder::default();
        solve_observed(&g, &d, &mut rec).unwrap();
        for ((_, y, z), join) in join_order(&d).iter().zip(&rec.joins) {
            let x = &join.ctx.x;
            let below = |u: usize| td.vertices_below(td.edge_bag_index(u).unwrap());
            let outside = |vs: &[usize]| -> Vec<usize> {
                vs.iter().copied().filter(|v| x.binary_search(v).is_err()).collect()
            };
            for (child, node) in [(Child::B, *y), (Child::C, *z)] {
                let vb = below(node);
                let expected = definitional_table(&g, x, &vb, &outside(&vb));
                let table = join.stage(Stage::ChildClosure(child));
                assert_eq!(table.values(), &restrict_to_domain(&expected, table)[..], "case {case}");
            }
            let mut both = below(*y);
            both.extend(below(*z));
            both.sort_unstable();
            both.dedup();
            let expected = definitional_table(&g, x, &both, &outside(&both));
            let table = join.stage(Stage::JoinClosure);
            assert_eq!(table.values(), &restrict_to_domain(&expected, table)[..], "case {case}");
        }
    }
}

/// Step (4) against a join that pairs every two child colorings and keeps
/// the pairs allowed by the combination rules.
#[test]
fn convolution_join_matches_pairwise_join() {
    let mut r = rng(5);
    let mut checked = 0;
    for case in 0..40 {
        let n = r.gen_range(3..=10);
        let g = gnp(n, [0.2, 0.5, 0.8][case % 3], &mut r);
        let d = heuristic_decomposition(&g, case as u64).unwrap();
        let mut rec = Recorder::default();
        solve_observed(&g, &d, &mut rec).unwrap();
        for join in &rec.joins {
            let ctx = &join.ctx;
            let tb = join.stage(Stage::ChildClosure(Child::B));
            let tc = join.stage(Stage::ChildClosure(Child::C));
            if tb.len() * tc.len() > 200_000 {
                continue;
            }
            let joined = join.stage(Stage::Convolve);
            let mut expected = ColoringTable::filled(joined.bag().to_vec(), joined.alphabets().to_vec(), INF);
            let in_b: Vec<bool> = ctx.x.iter().map(|v| ctx.b.binary_search(v).is_ok()).collect();
            let in_c: Vec<bool> = ctx.x.iter().map(|v| ctx.c.binary_search(v).is_ok()).collect();
            let mut f = vec![Color::Star; ctx.x.len()];
            for i in 0..tb.len() {
                let fb = tb.colors_at(i);
                for j in 0..tc.len() {
                    let fc = tc.colors_at(j);
                    let mut ok = true;
                    let mut refund = 0;
                    for p in 0..ctx.x.len() {
                        f[p] = match (fb[p], fc[p]) {
                            (Color::Zero, Color::Star) | (Color::Star, Color::Zero) => Color::Zero,
                            (Color::Star, Color::Star) => Color::Star,
                            (Color::One, Color::One) if in_b[p] && in_c[p] => {
                                refund += 1;
                                Color::One
                            }
                            (Color::One, Color::Star) if in_b[p] && !in_c[p] => Color::One,
                            (Color::Star, Color::One) if in_c[p] && !in_b[p] => Color::One,
                            _ => {
                                ok = false;
                                break;
                            }
                        };
                    }
                    if !ok {
                        continue;
                    }
                    let (vb, vc) = (tb.values()[i], tc.values()[j]);
                    if vb == INF || vc == INF {
                        continue;
                    }
                    let idx = expected.index_of(&f).expect("1s only on L");
                    let v = &mut expected.values_mut()[idx];
                    *v = (*v).min(vb + vc - refund);
                }
            }
            assert_eq!(joined.values(), expected.values(), "case {case}");
            checked += 1;
        }
    }
    assert!(checked > 100, "only {checked} joins compared");
}

fn closure_oracle(t: &ColoringTable) -> Vec<u32> {
    (0..t.len())
        .map(|i| {
            let f = t.colors_at(i);
            (0..t.len())
                .filter(|&j| dominated_by(&t.colors_at(j), &f))
                .map(|j| t.values()[j])
                .min()
                .unwrap()
        })
        .collect()
}

#[test]
fn extend_table_is_the_monotone_closure() {
    let mut r = rng(6);
    for _ in 0..300 {
        let size = r.gen_range(0..=4);
        let alphabets: Vec<Alphabet> = (0..size)
            .map(|_| if r.gen_bool(0.6) { Alphabet::Full } else { Alphabet::ZeroStar })
            .collect();
        let mut t = ColoringTable::filled((0..size).map(|v| v * 2).collect(), alphabets, 0);
        for v in t.values_mut() {
            *v = if r.gen_bool(0.2) { INF } else { r.gen_range(0..9) };
        }
        let closed = extend_table(&t);
        assert_eq!(closed.values(), &closure_oracle(&t)[..]);
        assert!(is_monotone(&closed));
        assert_eq!(extend_table(&closed), closed);
    }
}

#[test]
fn closed_stages_are_monotone() {
    let mut r = rng(7);
    let mut checked = 0;
    for _ in 0..40 {
        let n = r.gen_range(2..=10);
        let g = gnp(n, r.gen_range(0.1..0.9), &mut r);
        let d = random_decomposition(n, &mut r);
        let mut rec = Recorder::default();
        solve_observed(&g, &d, &mut rec).unwrap();
        for join in &rec.joins {
            for (stage, table) in &join.tables {
                let closed = matches!(stage, Stage::ChildClosure(_) | Stage::JoinClosure);
                if closed && table.bag().len() <= 6 {
                    assert!(is_monotone(table), "{stage:?} over {:?}", table.bag());
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 100);
}
