//! Conjunction by Cartesian product and disjunction by sum of orable graphs.

use std::collections::HashSet;

use thiserror::Error;

use crate::graph::{Graph, NodeId, Rel, NULL, ROOT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureError {
    #[error("{which} operand of the sum is not orable (root has an s2 edge to a node other than null)")]
    NotOrable { which: &'static str },
}

/// Product node id for a pair of ordinary nodes.
pub fn pair_name(a: &str, b: &str) -> String {
    format!("⟨{a}|{b}⟩")
}

/// `g1 × g2`: the graph whose heap (indeed, all) models are exactly the
/// common models of both factors.
///
/// Nodes are the paired constants plus all pairs of ordinary nodes; pairs
/// with exactly one special component are not nodes, and edges into them
/// are dropped.
pub fn product(g1: &Graph, g2: &Graph) -> Graph {
    let ord1: Vec<NodeId> = g1.nodes().filter(|&x| !g1.is_special(x)).collect();
    let ord2: Vec<NodeId> = g2.nodes().filter(|&x| !g2.is_special(x)).collect();
    let n2 = g2.node_count();
    // index of pair (x1, x2) in the product, if it is a product node
    let mut slot = vec![usize::MAX; g1.node_count() * n2];
    let mut names = vec![ROOT.to_string(), NULL.to_string()];
    let mut members = vec![(g1.root(), g2.root()), (g1.null(), g2.null())];
    slot[g1.root().index() * n2 + g2.root().index()] = 0;
    slot[g1.null().index() * n2 + g2.null().index()] = 1;
    for &a in &ord1 {
        for &b in &ord2 {
            slot[a.index() * n2 + b.index()] = names.len();
            names.push(pair_name(g1.name(a), g2.name(b)));
            members.push((a, b));
        }
    }
    let edges = Rel::ALL.map(|rel| {
        let mut list = Vec::new();
        for (i, &(a, b)) in members.iter().enumerate() {
            for ya in g1.succ(rel, a) {
                for yb in g2.succ(rel, b) {
                    let j = slot[ya.index() * n2 + yb.index()];
                    if j != usize::MAX {
                        list.push((i, j));
                    }
                }
            }
        }
        list
    });
    Graph::assemble(names, 0, 1, edges).expect("product of valid graphs is valid")
}

/// `g1 + g2` for orable graphs: disjoint union sharing root and null.
///
/// Ordinary node names present in both operands are renamed with `#1` and
/// `#2` suffixes.
pub fn sum(g1: &Graph, g2: &Graph) -> Result<Graph, ClosureError> {
    if !g1.is_orable() {
        return Err(ClosureError::NotOrable { which: "first" });
    }
    if !g2.is_orable() {
        return Err(ClosureError::NotOrable { which: "second" });
    }
    let ordinary = |g: &Graph| -> HashSet<String> {
        g.nodes()
            .filter(|&x| !g.is_special(x))
            .map(|x| g.name(x).to_string())
            .collect()
    };
    let names1 = ordinary(g1);
    let names2 = ordinary(g2);
    let mut taken: HashSet<String> = names1.union(&names2).cloned().collect();
    taken.insert(ROOT.to_string());
    taken.insert(NULL.to_string());

    let mut names = vec![ROOT.to_string(), NULL.to_string()];
    let mut edges: [Vec<(usize, usize)>; 2] = [Vec::new(), Vec::new()];
    for (g, suffix) in [(g1, "#1"), (g2, "#2")] {
        let mut local = vec![usize::MAX; g.node_count()];
        local[g.root().index()] = 0;
        local[g.null().index()] = 1;
        for x in g.nodes().filter(|&x| !g.is_special(x)) {
            let name = g.name(x);
            let fresh = if names1.contains(name) && names2.contains(name) {
                let mut candidate = format!("{name}{suffix}");
                while taken.contains(&candidate) {
                    candidate.push_str(suffix);
                }
                taken.insert(candidate.clone());
                candidate
            } else {
                name.to_string()
            };
            local[x.index()] = names.len();
            names.push(fresh);
        }
        for rel in Rel::ALL {
            for (a, b) in g.edges(rel) {
                edges[rel.index()].push((local[a.index()], local[b.index()]));
            }
        }
    }
    Ok(Graph::assemble(names, 0, 1, edges).expect("sum of valid graphs is valid"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::{parse, serialize};
    use crate::heap_sat::sat_over_heaps;
    use crate::hom::{check_hom, find_hom, Homomorphism};

    fn g1() -> Graph {
        parse("s1 root null\ns2 root root\n").unwrap()
    }
    fn g2() -> Graph {
        parse("s1 root root\ns2 root null\n").unwrap()
    }

    #[test]
    fn product_of_non_orable_pair_is_unsat() {
        let p = product(&g1(), &g2());
        assert_eq!(p.node_count(), 2);
        assert_eq!(p.edge_count(Rel::S1), 0);
        assert_eq!(p.edge_count(Rel::S2), 0);
        assert!(!sat_over_heaps(&p).satisfiable);
    }

    #[test]
    fn product_drops_mixed_pairs() {
        let a = parse("s1 root x\ns1 x null\ns2 root null\ns2 x x\n").unwrap();
        let b = parse("s1 root null\ns1 root y\ns1 y y\ns2 root null\ns2 y null\n").unwrap();
        let p = product(&a, &b);
        // root->x in a with root->null in b would be a mixed pair
        assert_eq!(p.node_count(), 3);
        let xy = p.id("⟨x|y⟩").unwrap();
        assert!(p.has_edge(Rel::S1, p.root(), xy));
        assert!(!p.has_edge(Rel::S1, xy, p.null()));
        assert!(!p.has_edge(Rel::S2, xy, p.null()));
        assert!(!p.has_edge(Rel::S1, p.root(), p.null()));
    }

    #[test]
    fn product_with_self_is_satisfiable_iff_factor_is() {
        for text in [
            "s1 root null\ns2 root null\n",
            "s1 root a\ns2 root null\ns1 a null\n",
            "s1 root a\ns1 a a\ns2 root null\ns2 a root\n",
        ] {
            let g = parse(text).unwrap();
            assert_eq!(
                sat_over_heaps(&product(&g, &g)).satisfiable,
                sat_over_heaps(&g).satisfiable
            );
        }
    }

    #[test]
    fn sum_rejects_non_orable() {
        assert_eq!(
            sum(&g1(), &Graph::minimal_heap()).unwrap_err(),
            ClosureError::NotOrable { which: "first" }
        );
        assert_eq!(
            sum(&Graph::minimal_heap(), &g1()).unwrap_err(),
            ClosureError::NotOrable { which: "second" }
        );
    }

    #[test]
    fn sum_renames_collisions_and_embeds_summands() {
        let a = parse("s1 root x\ns1 x null\ns2 root null\ns2 x x\n").unwrap();
        let b = parse("node x\nnode y\ns1 root x\ns1 x x\ns2 root null\ns2 x null\ns1 y null\n").unwrap();
        let s = sum(&a, &b).unwrap();
        assert!(s.is_orable());
        assert!(s.id("x#1").is_some() && s.id("x#2").is_some() && s.id("y").is_some());
        assert_eq!(s.node_count(), a.node_count() + b.node_count() - 2);
        assert_eq!(parse(&serialize(&s)).unwrap(), s);
        for (part, suffix) in [(&a, "#1"), (&b, "#2")] {
            let pairs: Vec<(String, String)> = part
                .nodes()
                .map(|x| {
                    let n = part.name(x);
                    let m = if n == "x" {
                        format!("{n}{suffix}")
                    } else {
                        n.to_string()
                    };
                    (n.to_string(), m)
                })
                .collect();
            let h = Homomorphism::from_names(part, &s, &pairs).unwrap();
            assert!(check_hom(part, &s, &h).unwrap());
        }
        assert!(find_hom(&a, &s).is_some());
    }
}
