mod common;

use std::collections::HashSet;

use proptest::prelude::*;
use rgc_core::families::{enumerate_heaps, HeapEnumConfig};
use rgc_core::heap_sat::{extract_heap, graph_cleanup, sat_over_heaps};
use rgc_core::hom::{check_hom, find_hom};
use rgc_core::Graph;

use common::*;

#[test]
fn oracle_canonical_heaps_cover_labelled_heaps() {
    for k in 0..=2 {
        let from_labelled: HashSet<CompactHeap> =
            labelled_heaps(k).iter().map(CompactHeap::canonical).collect();
        let canonical: Vec<CompactHeap> = canonical_heaps(k);
        let as_set: HashSet<CompactHeap> = canonical.iter().cloned().collect();
        assert_eq!(as_set.len(), canonical.len(), "size {k}: duplicates");
        assert_eq!(as_set, from_labelled, "size {k}");
    }
}

#[test]
fn library_enumeration_matches_oracle() {
    let heaps: Vec<Graph> = enumerate_heaps(HeapEnumConfig { max_nodes: 3, dedupe: true }).collect();
    for k in 0..=3 {
        let ours: Vec<CompactHeap> = heaps
            .iter()
            .filter(|h| h.non_special_count() == k)
            .map(CompactHeap::from_graph)
            .collect();
        let set: HashSet<CompactHeap> = ours.iter().cloned().collect();
        assert_eq!(set.len(), ours.len(), "size {k}: isomorphic duplicates");
        let expected: HashSet<CompactHeap> = canonical_heaps(k).into_iter().collect();
        assert_eq!(set, expected, "size {k}");
    }
    // sizes never decrease along the stream
    assert!(heaps.windows(2).all(|w| w[0].non_special_count() <= w[1].non_special_count()));
}

#[test]
fn labelled_enumeration_matches_oracle() {
    for k in 0..=2 {
        let ours: Vec<Graph> = enumerate_heaps(HeapEnumConfig { max_nodes: k, dedupe: false })
            .filter(|h| h.non_special_count() == k)
            .collect();
        assert!(ours.iter().all(Graph::is_heap));
        assert_eq!(ours.len(), labelled_heaps(k).len(), "size {k}");
    }
}

fn graph_strategy(max_k: usize) -> impl Strategy<Value = Graph> {
    (any::<u64>(), 0..=max_k, 0.1f64..0.6).prop_map(|(seed, k, p)| random_graph(&mut rng(seed), k..=k, p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(250))]

    #[test]
    fn sat_matches_bounded_oracle(g in graph_strategy(3)) {
        let heaps = canonical_heaps_upto(3);
        let res = sat_over_heaps(&g);
        prop_assert_eq!(res.satisfiable, sat_oracle(&g, &heaps));
        if let Some(w) = &res.witness {
            prop_assert!(w.is_heap());
            let h = find_hom(w, &g);
            prop_assert!(h.is_some_and(|h| check_hom(w, &g, &h).unwrap()));
            prop_assert!(w.non_special_count() <= g.non_special_count());
        }
    }

    #[test]
    fn images_of_heaps_are_satisfiable(seed in any::<u64>(), k in 0usize..=4, m in 1usize..=3) {
        let mut r = rng(seed);
        let h = random_heap(&mut r, k..=k);
        let g = image_target(&mut r, &h, m..=m, 0.2);
        prop_assert!(sat_over_heaps(&g).satisfiable);
    }

    #[test]
    fn cleanup_output_is_extractable(g in graph_strategy(4)) {
        let c = graph_cleanup(&g);
        match c.graph {
            Some(clean) => {
                let w = extract_heap(&clean).unwrap();
                prop_assert!(w.is_heap());
                prop_assert!(find_hom(&w, &g).is_some());
            }
            None => prop_assert!(!sat_over_heaps(&g).satisfiable),
        }
    }

    #[test]
    fn every_heap_satisfies_itself(seed in any::<u64>(), k in 0usize..=5) {
        let h = random_heap(&mut rng(seed), k..=k);
        let res = sat_over_heaps(&h);
        prop_assert!(res.satisfiable);
        prop_assert!(res.cleanup_trace.is_empty());
    }
}
