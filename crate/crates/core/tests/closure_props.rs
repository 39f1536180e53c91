mod common;

use proptest::prelude::*;
use rgc_core::closure::{product, sum};
use rgc_core::format::{parse, serialize};
use rgc_core::hom::find_hom;
use rgc_core::Graph;

use common::*;

fn heap_strategy(max_k: usize) -> impl Strategy<Value = Graph> {
    (any::<u64>(), 0..=max_k).prop_map(|(seed, k)| random_heap(&mut rng(seed), k..=k))
}

fn graph_strategy(max_k: usize) -> impl Strategy<Value = Graph> {
    (any::<u64>(), 0..=max_k, 0.2f64..0.7).prop_map(|(seed, k, p)| random_graph(&mut rng(seed), k..=k, p))
}

fn orable_strategy(max_k: usize) -> impl Strategy<Value = Graph> {
    (any::<u64>(), 0..=max_k, 0.2f64..0.7)
        .prop_map(|(seed, k, p)| random_orable(&mut rng(seed), k..=k, p, false))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn product_is_conjunction(h in heap_strategy(4), g1 in graph_strategy(2), g2 in graph_strategy(2)) {
        let p = product(&g1, &g2);
        let expected = brute_hom_exists(&h, &g1) && brute_hom_exists(&h, &g2);
        prop_assert_eq!(find_hom(&h, &p).is_some(), expected);
    }

    #[test]
    fn product_conjunction_holds_for_arbitrary_graphs(g in graph_strategy(2), g1 in graph_strategy(2), g2 in graph_strategy(2)) {
        let p = product(&g1, &g2);
        let expected = brute_hom_exists(&g, &g1) && brute_hom_exists(&g, &g2);
        prop_assert_eq!(brute_hom_exists(&g, &p), expected);
    }

    #[test]
    fn product_projects_onto_factors(g1 in graph_strategy(3), g2 in graph_strategy(3)) {
        let p = product(&g1, &g2);
        prop_assert!(find_hom(&p, &g1).is_some());
        prop_assert!(find_hom(&p, &g2).is_some());
    }

    #[test]
    fn sum_is_disjunction(seed in any::<u64>(), k in 0usize..=4, g1 in orable_strategy(2), g2 in orable_strategy(2)) {
        let h = random_orable_heap(&mut rng(seed), k..=k);
        let s = sum(&g1, &g2).unwrap();
        let expected = brute_hom_exists(&h, &g1) || brute_hom_exists(&h, &g2);
        prop_assert_eq!(find_hom(&h, &s).is_some(), expected);
    }

    #[test]
    fn closures_preserve_orability(g1 in orable_strategy(3), g2 in orable_strategy(3)) {
        prop_assert!(product(&g1, &g2).is_orable());
        let s = sum(&g1, &g2).unwrap();
        prop_assert!(s.is_orable());
        prop_assert_eq!(s.node_count(), g1.node_count() + g2.node_count() - 2);
        prop_assert_eq!(parse(&serialize(&s)).unwrap(), s);
    }

    #[test]
    fn product_node_count(g1 in graph_strategy(3), g2 in graph_strategy(3)) {
        let p = product(&g1, &g2);
        prop_assert_eq!(p.non_special_count(), g1.non_special_count() * g2.non_special_count());
    }
}
