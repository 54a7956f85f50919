use std::collections::BTreeSet;

use ncparam::hupoly::hu;
use ncparam::polyring::{rat, Monomial, Poly, Var};
use ncparam::ribbon::{admissible_sets, dual_graph, random_orientable, trace_faces, LineId, RibbonGraph};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

fn connects(nodes: usize, edges: impl Iterator<Item = (usize, usize)>) -> bool {
    let mut parent: Vec<usize> = (0..nodes).collect();
    let mut parts = nodes;
    for (a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            parts -= 1;
        }
    }
    parts <= 1
}

/// Every subset of lines tested against both tree conditions.
fn brute_force_admissible(g: &RibbonGraph) -> Vec<BTreeSet<LineId>> {
    let topo = trace_faces(g);
    let dual = dual_graph(g, &topo);
    let l = g.num_lines();
    let mut out = Vec::new();
    for mask in 0u32..1 << l {
        let inside = |id: LineId| mask >> (id - 1) & 1 == 1;
        let dual_ok = connects(
            dual.num_faces,
            dual.edges.iter().filter(|e| inside(e.0)).map(|&(_, a, b)| (a, b)),
        );
        let direct_ok = connects(
            g.num_vertices(),
            g.line_ids().filter(|&id| !inside(id)).map(|id| {
                let ends = g.line(id);
                (ends.head.vertex, ends.tail.vertex)
            }),
        );
        if dual_ok && direct_ok {
            out.push(g.line_ids().filter(|&id| inside(id)).collect());
        }
    }
    out.sort();
    out
}

fn random_graph(rng: &mut ChaCha8Rng) -> RibbonGraph {
    let n = rng.gen_range(1..=4);
    let l = rng.gen_range(n - 1..=(2 * n).min(6));
    random_orientable(rng, n, l)
}

#[test]
fn euler_and_admissible_bounds_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for k in 0..200 {
        let g = random_graph(&mut rng);
        let t = trace_faces(&g);
        assert_eq!(
            t.n as i64 - t.l as i64 + t.f as i64,
            2 - 2 * t.g as i64,
            "graph {k}: {g}"
        );
        let d = dual_graph(&g, &t);
        let sets = admissible_sets(&g, &t, &d);
        assert!(sets.iter().any(|a| a.leading), "graph {k}: no leading set");
        for a in &sets {
            let j = a.j0.len();
            assert!(t.f - 1 <= j && j <= t.f - 1 + 2 * t.g, "graph {k}: |J0| = {j}");
            assert_eq!(a.k_i, a.complement.len() as i64 - t.l as i64 - t.f as i64 + 1);
            assert!(2 * t.g as i64 - a.k_i >= 0);
            assert_eq!(a.dual_tree.len(), t.f - 1);
            assert!(a.dual_tree.is_subset(&a.j0));
            assert_eq!(a.direct_tree.tree_lines.len(), t.n - 1);
            assert!(a.direct_tree.tree_lines.is_subset(&a.complement));
        }
        let mut got: Vec<BTreeSet<LineId>> = sets.into_iter().map(|a| a.j0).collect();
        got.sort();
        assert_eq!(got, brute_force_admissible(&g), "graph {k}: {g}");
    }
}

fn var() -> impl Strategy<Value = Var> {
    prop_oneof![
        (1u32..=4).prop_map(Var::T),
        Just(Var::S),
        Just(Var::Omega),
    ]
}

fn poly() -> impl Strategy<Value = Poly> {
    let term = (
        -20i64..=20,
        1i64..=9,
        prop::collection::vec((var(), 1u32..=3), 0..4),
    );
    prop::collection::vec(term, 0..6).prop_map(|terms| {
        terms
            .into_iter()
            .map(|(n, d, vars)| {
                let m: Poly = vars
                    .into_iter()
                    .map(|(v, e)| Poly::term(rat(1, 1), Monomial::var(v, e)))
                    .product();
                m.scale(&rat(n, d))
            })
            .sum()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_string_round_trips(p in poly()) {
        let back: Poly = p.canonical_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn rotating_non_root_vertices_keeps_hu(seed in 0u64..5_000, n in 2usize..=3, extra in 0usize..=2) {
        let l = (n - 1 + extra).min(2 * n);
        let g = random_orientable(&mut ChaCha8Rng::seed_from_u64(seed), n, l);
        prop_assume!(g.num_externals() > 0);
        let h = hu(&g).unwrap().hu;
        for v in g.non_root_vertices() {
            prop_assert_eq!(&hu(&g.rotate_vertex(v, 2).unwrap()).unwrap().hu, &h);
        }
    }

    #[test]
    fn relabeling_lines_permutes_hu(seed in 0u64..5_000, n in 1usize..=3, extra in 0usize..=2, shift in 1u32..4) {
        let l = (n - 1 + extra).min(2 * n);
        let g = random_orientable(&mut ChaCha8Rng::seed_from_u64(seed), n, l);
        prop_assume!(g.num_externals() > 0 && l > 0);
        let perm = |i: LineId| (i - 1 + shift) % l as LineId + 1;
        let r = g.relabel_lines(perm).unwrap();
        prop_assert_eq!(hu(&r).unwrap().hu, hu(&g).unwrap().hu.rename_lines(perm));
    }
}
