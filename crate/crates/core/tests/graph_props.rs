use hyperlab::graph::{
    ball, binomial, breadth_first_tree, connected_components, is_tree, sample_hypergraph, ParseFormat,
    SamplingMethod,
};
use hyperlab::rng::derive_seed;
use hyperlab::RGraph;
use proptest::prelude::*;

#[test]
fn mean_edge_count() {
    for method in [SamplingMethod::Direct, SamplingMethod::Skip] {
        let counts: Vec<f64> = (0..1000u64)
            .map(|s| sample_hypergraph(30, 3, 0.1, derive_seed(s, 1), method).unwrap().edge_count() as f64)
            .collect();
        let mean = counts.iter().sum::<f64>() / 1000.0;
        let expect = binomial(30, 3) as f64 * 0.1;
        let se = (expect * 0.9 / 1000.0).sqrt();
        assert!((mean - expect).abs() <= 3.0 * se, "{method:?}: {mean} vs {expect}");
    }
}

#[test]
fn sampling_is_deterministic() {
    for method in [SamplingMethod::Direct, SamplingMethod::Skip, SamplingMethod::Auto] {
        let a = sample_hypergraph(25, 4, 0.05, 77, method).unwrap();
        let b = sample_hypergraph(25, 4, 0.05, 77, method).unwrap();
        assert_eq!(a.edges(), b.edges());
    }
}

fn arb_graph() -> impl Strategy<Value = RGraph> {
    (3usize..=5, 8u32..=14, 0.2f64..3.0, any::<u64>()).prop_map(|(r, n, d, seed)| {
        let p = (d / (n - (r as u32 - 1)) as f64).min(1.0);
        sample_hypergraph(n, r, p, seed, SamplingMethod::Auto).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn codegrees_sum_to_r_times_edges(g in arb_graph()) {
        let idx = g.codegree_index();
        let total: usize = idx.iter().map(|(_, nb)| nb.len()).sum();
        prop_assert_eq!(total, g.r() * g.edge_count());
        prop_assert_eq!(idx.shadow_len(), g.shadow().len());
    }

    #[test]
    fn balls_grow_and_stay_in_component(g in arb_graph()) {
        if let Some(e) = g.edges().first() {
            let rho = &e[..g.r() - 1];
            let comp = connected_components(&g)
                .into_iter()
                .find(|c| c.contains_edge(e))
                .unwrap();
            let mut prev = 0;
            for gamma in 0..4 {
                let b = ball(&g, rho, gamma).unwrap();
                prop_assert!(b.edge_count() >= prev);
                prop_assert!(b.edges().iter().all(|f| comp.contains_edge(f)));
                prev = b.edge_count();
            }
        }
    }

    #[test]
    fn bfs_tree_is_a_tree_inside_the_graph(g in arb_graph()) {
        if let Some(e) = g.edges().first() {
            let rho = &e[..g.r() - 1];
            let (tree, trace) = breadth_first_tree(&g, rho, None).unwrap();
            let tg = tree.to_graph();
            prop_assert!(tg.edges().iter().all(|f| g.contains_edge(f)));
            prop_assert!(is_tree(&tg, rho));
            prop_assert_eq!(tree.vertex_count(), g.r() - 1 + tree.edge_count());
            prop_assert!(trace.edges.windows(2).all(|w| w[0] <= w[1]));
            // A tree component is recovered in full.
            let comp = connected_components(&g).into_iter().find(|c| c.contains_edge(e)).unwrap();
            if is_tree(&comp, rho) {
                prop_assert_eq!(tg.edge_count(), comp.edge_count());
            }
        }
    }

    #[test]
    fn text_and_json_round_trip(g in arb_graph()) {
        let t = RGraph::parse(&g.to_text(), ParseFormat::Text).unwrap();
        prop_assert_eq!(t.edges(), g.edges());
        let j = RGraph::from_json(&g.to_json()).unwrap();
        prop_assert_eq!(j.edges(), g.edges());
    }
}

#[test]
fn cycle_is_not_a_tree() {
    // Tight cycle on six vertices.
    let edges: Vec<[u32; 3]> = (0..6u32).map(|i| [i, (i + 1) % 6, (i + 2) % 6]).collect();
    let g = RGraph::new(6, 3, edges).unwrap();
    assert!(!is_tree(&g, &[0, 1]));
    let path = RGraph::new(5, 3, [[0, 1, 2], [1, 2, 3], [2, 3, 4]]).unwrap();
    assert!(is_tree(&path, &[0, 1]));
}
