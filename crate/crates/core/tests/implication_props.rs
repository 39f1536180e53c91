mod common;

use proptest::prelude::*;
use rgc_core::closure::product;
use rgc_core::hom::find_hom;
use rgc_core::implication::{
    apply_assignment, check_implication, equiv_bounded, implies_over_graphs, implies_sufficient,
    invariant_gadget, search_counterexample, AssignValue, Assignment, ImplicationVerdict,
    REGEX_POOL,
};
use rgc_core::paths::{has_slice_matching, is_slice, slice_matching, Regex};
use rgc_core::Graph;

use common::*;

fn graph_strategy(max_k: usize) -> impl Strategy<Value = Graph> {
    (any::<u64>(), 0..=max_k, 0.2f64..0.7).prop_map(|(seed, k, p)| random_graph(&mut rng(seed), k..=k, p))
}

fn orable_strategy(max_k: usize) -> impl Strategy<Value = Graph> {
    (any::<u64>(), 0..=max_k, 0.3f64..0.7)
        .prop_map(|(seed, k, p)| random_orable(&mut rng(seed), k..=k, p, true))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn bounded_search_matches_oracle(g1 in graph_strategy(3), g2 in graph_strategy(3)) {
        let heaps = canonical_heaps_upto(2);
        let brute = brute_counterexample(&heaps, &g1, &g2);
        let ours = search_counterexample(&g1, &g2, 2);
        prop_assert_eq!(ours.is_some(), brute.is_some());
        if let Some(c) = ours {
            prop_assert!(c.heap.is_heap());
            prop_assert!(find_hom(&c.heap, &g1).is_some());
            prop_assert!(find_hom(&c.heap, &g2).is_none());
            if let Some(cert) = &c.slice {
                let e = Regex::parse(&cert.regex).unwrap();
                prop_assert!(!has_slice_matching(&g2, &e));
                prop_assert!(has_slice_matching(&c.heap, &e));
            }
        }
    }

    #[test]
    fn over_all_graphs_implication_is_a_homomorphism(g1 in graph_strategy(2), g2 in graph_strategy(2)) {
        prop_assert_eq!(implies_over_graphs(&g1, &g2), brute_hom_exists(&g1, &g2));
    }

    #[test]
    fn sufficient_test_is_sound(g1 in graph_strategy(3), seed in any::<u64>()) {
        let g2 = image_target(&mut rng(seed), &g1, 1..=3, 0.2);
        prop_assert!(implies_sufficient(&g1, &g2));
        prop_assert!(matches!(check_implication(&g1, &g2, 2), ImplicationVerdict::ValidSufficient(_)));
        prop_assert!(brute_counterexample(&canonical_heaps_upto(2), &g1, &g2).is_none());
    }

    #[test]
    fn product_identity(g1 in graph_strategy(2), g2 in graph_strategy(2)) {
        let eq = equiv_bounded(&g1, &product(&g1, &g2), 2).is_equivalent();
        prop_assert_eq!(eq, search_counterexample(&g1, &g2, 2).is_none());
    }

    #[test]
    fn gadget_shape(g1 in orable_strategy(2), g2 in orable_strategy(2)) {
        let g = invariant_gadget(&g1, &g2).unwrap();
        prop_assert_eq!(g.node_count(), g1.node_count() + g2.node_count() + 2);
        prop_assert!(g.is_orable());
    }

    #[test]
    fn assignment_keeps_heaps_and_sets_the_field(seed in any::<u64>(), k in 0usize..=5, to_root in any::<bool>()) {
        let h = random_heap(&mut rng(seed), k..=k);
        let a = Assignment {
            value: if to_root { AssignValue::Root } else { AssignValue::Null },
            ..Assignment::statement()
        };
        let out = apply_assignment(&h, &a).unwrap();
        prop_assert!(out.heap.is_heap());
        prop_assert!(out.heap.non_special_count() <= h.non_special_count());
        let g = &out.heap;
        let y = g.heap_succ(a.path[0], g.root());
        if y != g.null() {
            let want = if to_root { g.root() } else { g.null() };
            prop_assert_eq!(g.heap_succ(a.field, y), want);
        }
        let text = a.to_string();
        prop_assert_eq!(Assignment::parse(&text).unwrap(), a);
    }
}

#[test]
fn gadget_rejects_bad_inputs() {
    let non_orable = rgc_core::format::parse("s1 root null\ns2 root root\n").unwrap();
    assert!(invariant_gadget(&non_orable, &Graph::minimal_heap()).is_err());
    let into_root = rgc_core::format::parse("s1 root a\ns1 a root\ns2 root null\n").unwrap();
    assert!(invariant_gadget(&Graph::minimal_heap(), &into_root).is_err());
}

#[test]
fn counterexample_slices_are_real() {
    // g2 has no slice in 1*, while the minimal heap, a model of g1, has one
    let g1 = Graph::minimal_heap();
    let g2 = rgc_core::format::parse("s1 root b\ns1 b b\ns2 root null\ns2 b null\n").unwrap();
    let c = search_counterexample(&g1, &g2, 2).unwrap();
    let cert = c.slice.expect("g2 misses a pool language");
    assert!(REGEX_POOL.contains(&cert.regex.as_str()));
    assert_eq!(cert.regex, "1*");
    let e = Regex::parse(&cert.regex).unwrap();
    let p = slice_matching(&c.heap, &e).unwrap();
    assert!(is_slice(&c.heap, &p).unwrap());
    assert!(!has_slice_matching(&g2, &e));
}
