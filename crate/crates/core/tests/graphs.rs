use diffeo::graphs::{
    bubble, cut_ledger, enumerate_graphs, isomorphic, minimal_cuts, sunset, symmetry_factor,
    symmetry_factor_brute_force, triangle, verify_gluing, verify_gluing_family, GraphBuilder, HalfEdgeGraph,
    PieceShape,
};
use proptest::prelude::*;
use std::collections::BTreeMap;

/// Random graph: `v` vertices, edges between random endpoints, legs
/// `1..=legs` on random vertices, each vertex given at least one half-edge.
fn graph_strategy() -> impl Strategy<Value = HalfEdgeGraph> {
    (1usize..=4).prop_flat_map(|v| {
        (
            Just(v),
            prop::collection::vec((0..v, 0..v), 0..=4),
            prop::collection::vec(0..v, 0..=3),
        )
            .prop_map(|(v, edges, legs)| {
                let mut b = GraphBuilder::new(v);
                let mut touched = vec![false; v];
                for (x, y) in edges {
                    touched[x] = true;
                    touched[y] = true;
                    b = b.edge(x, y);
                }
                let mut label = 1;
                for at in legs {
                    touched[at] = true;
                    b = b.leg(at, label);
                    label += 1;
                }
                for (u, t) in touched.iter().enumerate() {
                    if !t {
                        b = b.leg(u, label);
                        label += 1;
                    }
                }
                b.build().unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn text_round_trip(g in graph_strategy()) {
        let back = HalfEdgeGraph::from_text(&g.to_text()).unwrap();
        prop_assert_eq!(&back, &g);
    }

    #[test]
    fn symmetry_matches_permutation_oracle(g in graph_strategy()) {
        prop_assert_eq!(symmetry_factor(&g), symmetry_factor_brute_force(&g));
    }

    #[test]
    fn isomorphism_is_reflexive_under_relabelling(g in graph_strategy(), rot in 0usize..4) {
        let v = g.n_vertices();
        let text = g.to_text();
        let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
        let incidence: Vec<String> = lines[1]
            .split_whitespace()
            .skip(1)
            .map(|w| ((w.parse::<usize>().unwrap() + rot) % v).to_string())
            .collect();
        lines[1] = format!("incidence {}", incidence.join(" "));
        let moved = HalfEdgeGraph::from_text(&(lines.join("\n") + "\n")).unwrap();
        prop_assert!(isomorphic(&g, &moved));
        prop_assert_eq!(symmetry_factor(&g), symmetry_factor(&moved));
    }
}

#[test]
fn gluing_of_named_graphs() {
    for g in [bubble(), sunset(), triangle()] {
        for cut in minimal_cuts(&g).unwrap() {
            let r = verify_gluing(&g, &cut, g.n_vertices()).unwrap();
            assert!(r.is_pass(), "{g}: {r}");
        }
    }
}

#[test]
fn gluing_identity_on_small_families() {
    for (n, l) in [(2, 1), (3, 1), (2, 2)] {
        let r = verify_gluing_family(n, l, 4).unwrap();
        assert!(r.is_pass(), "{r}");
    }
}

#[test]
fn one_loop_cuts_through_the_cycle_are_complete() {
    for n in 2..=4 {
        let ledger = cut_ledger(n, 1).unwrap();
        assert!(ledger.incomplete_cycle_cuts.is_empty(), "{:?}", ledger.incomplete_cycle_cuts);
        assert!(ledger.unresolved.is_empty(), "{:?}", ledger.unresolved);
    }
}

#[test]
fn enumeration_is_free_of_duplicates() {
    let shape = PieceShape {
        n_vertices: 2,
        n_edges: 2,
        legs: vec![1, 2],
        cuts: BTreeMap::new(),
        min_valence: 3,
    };
    let graphs = enumerate_graphs(&shape);
    for (i, a) in graphs.iter().enumerate() {
        for b in &graphs[i + 1..] {
            assert!(!isomorphic(a, b), "{a} ~ {b}");
        }
    }
    assert!(!graphs.is_empty());
}
