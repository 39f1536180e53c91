//! Generators and brute-force oracles shared by the integration tests.
//!
//! Oracles here deliberately avoid the library's search code: they use
//! only graph accessors and exhaustive enumeration.

#![allow(dead_code)]

use std::collections::HashSet;

use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rgc_core::format::serialize;
use rgc_core::graph::{Graph, NodeId, Rel};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Names: index 0 root, 1 null, then `n1..nk`.
fn names(k: usize) -> Vec<String> {
    let mut v = vec!["root".to_string(), "null".to_string()];
    v.extend((1..=k).map(|i| format!("n{i}")));
    v
}

fn positional_index(i: usize) -> usize {
    // positional order is [root, null, n1..]; sources skip null
    if i == 0 {
        0
    } else {
        i + 1
    }
}

/// Random graph with a size drawn from `sizes`; each possible edge is
/// present with probability `p`.
pub fn random_graph(rng: &mut impl Rng, sizes: RangeInclusive<usize>, p: f64) -> Graph {
    let k = rng.gen_range(sizes);
    let mut edges: [Vec<(usize, usize)>; 2] = [Vec::new(), Vec::new()];
    for list in edges.iter_mut() {
        for s in 0..=k {
            let from = positional_index(s);
            for to in 0..k + 2 {
                if rng.gen_bool(p) {
                    list.push((from, to));
                }
            }
        }
    }
    Graph::assemble(names(k), 0, 1, edges).unwrap()
}

/// Random orable graph; with `no_root_in`, no edge targets root.
pub fn random_orable(rng: &mut impl Rng, sizes: RangeInclusive<usize>, p: f64, no_root_in: bool) -> Graph {
    let k = rng.gen_range(sizes);
    let mut edges: [Vec<(usize, usize)>; 2] = [Vec::new(), Vec::new()];
    for (r, list) in edges.iter_mut().enumerate() {
        for s in 0..=k {
            let from = positional_index(s);
            if r == 1 && from == 0 {
                list.push((0, 1));
                continue;
            }
            for to in 0..k + 2 {
                if no_root_in && to == 0 {
                    continue;
                }
                if rng.gen_bool(p) {
                    list.push((from, to));
                }
            }
        }
    }
    Graph::assemble(names(k), 0, 1, edges).unwrap()
}

/// Random heap: random successor functions over `k` ordinary nodes, then
/// everything unreachable from root dropped.
pub fn random_heap(rng: &mut impl Rng, sizes: RangeInclusive<usize>) -> Graph {
    let k = rng.gen_range(sizes);
    let mut edges: [Vec<(usize, usize)>; 2] = [Vec::new(), Vec::new()];
    for list in edges.iter_mut() {
        for s in 0..=k {
            list.push((positional_index(s), rng.gen_range(0..k + 2)));
        }
    }
    let g = Graph::assemble(names(k), 0, 1, edges).unwrap();
    let mut keep = g.reachable_from(g.root());
    keep.insert(g.null().index());
    g.induced(&keep)
}

/// A target that `g` maps into by construction: ordinary nodes are sent
/// to `m` ordinary nodes at random, with `m` drawn from `sizes`, the image edges are kept, and extra
/// edges are added with probability `p`.
pub fn image_target(rng: &mut impl Rng, g: &Graph, sizes: RangeInclusive<usize>, p: f64) -> Graph {
    let m = rng.gen_range(sizes).max(1);
    let mut image = vec![0usize; g.node_count()];
    for x in g.nodes() {
        image[x.index()] = if x == g.root() {
            0
        } else if x == g.null() {
            1
        } else {
            rng.gen_range(2..m + 2)
        };
    }
    let mut edges: [Vec<(usize, usize)>; 2] = [Vec::new(), Vec::new()];
    for rel in Rel::ALL {
        let list = &mut edges[rel.index()];
        for (x, y) in g.edges(rel) {
            list.push((image[x.index()], image[y.index()]));
        }
        for from in (0..m + 2).filter(|&i| i != 1) {
            for to in 0..m + 2 {
                if rng.gen_bool(p) {
                    list.push((from, to));
                }
            }
        }
    }
    Graph::assemble(names(m), 0, 1, edges).unwrap()
}

/// Distinct (by serialization) graphs from `make`, up to `count` of them.
pub fn distinct(count: usize, mut make: impl FnMut() -> Graph) -> Vec<Graph> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < count * 50 {
        attempts += 1;
        let g = make();
        if seen.insert(serialize(&g)) {
            out.push(g);
        }
    }
    out
}

/// Mixed pool of graphs with at most `max_k` ordinary nodes.
pub fn graph_pool(seed: u64, count: usize, max_k: usize) -> Vec<Graph> {
    let mut r = rng(seed);
    let densities = [0.15, 0.3, 0.5, 0.7];
    distinct(count, || {
        let p = *densities.choose(&mut r).unwrap();
        random_graph(&mut r, 0..=max_k, p)
    })
}

fn edges_preserved(g: &Graph, t: &Graph, map: &[NodeId]) -> bool {
    Rel::ALL.iter().all(|&rel| {
        g.edges(rel)
            .all(|(x, y)| t.has_edge(rel, map[x.index()], map[y.index()]))
    })
}

/// Every homomorphism `g -> t`, found by trying all maps that send root
/// to root, null to null, and every other node to an ordinary node.
pub fn brute_homs(g: &Graph, t: &Graph) -> Vec<Vec<NodeId>> {
    let ordinary: Vec<NodeId> = g.nodes().filter(|&x| !g.is_special(x)).collect();
    let targets: Vec<NodeId> = t.nodes().filter(|&y| !t.is_special(y)).collect();
    let mut map = vec![NodeId(0); g.node_count()];
    map[g.root().index()] = t.root();
    map[g.null().index()] = t.null();
    let mut out = Vec::new();
    if !ordinary.is_empty() && targets.is_empty() {
        return out;
    }
    let mut digits = vec![0usize; ordinary.len()];
    loop {
        for (x, &d) in ordinary.iter().zip(&digits) {
            map[x.index()] = targets[d];
        }
        if edges_preserved(g, t, &map) {
            out.push(map.clone());
        }
        let mut pos = 0;
        loop {
            if pos == digits.len() {
                out.sort();
                return out;
            }
            digits[pos] += 1;
            if digits[pos] < targets.len() {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

pub fn brute_hom_exists(g: &Graph, t: &Graph) -> bool {
    !brute_homs(g, t).is_empty()
}

/// Heap as successor arrays: node 0 is root, `NULL_REF` is null.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompactHeap {
    pub succ: Vec<[u8; 2]>,
}

pub const NULL_REF: u8 = u8::MAX;

impl CompactHeap {
    pub fn to_graph(&self) -> Graph {
        let k = self.succ.len() - 1;
        let mut edges: [Vec<(usize, usize)>; 2] = [Vec::new(), Vec::new()];
        for (i, s) in self.succ.iter().enumerate() {
            for r in 0..2 {
                let to = if s[r] == NULL_REF {
                    1
                } else {
                    positional_index(s[r] as usize)
                };
                edges[r].push((positional_index(i), to));
            }
        }
        Graph::assemble(names(k), 0, 1, edges).unwrap()
    }

    /// Whether this heap maps into `g`: nodes are visited in numbering
    /// order, and each node's image is chosen when it is first referenced.
    pub fn maps_into(&self, g: &Graph) -> bool {
        let mut image: Vec<Option<NodeId>> = vec![None; self.succ.len()];
        image[0] = Some(g.root());
        self.extend(g, &mut image, 0)
    }

    fn extend(&self, g: &Graph, image: &mut Vec<Option<NodeId>>, slot: usize) -> bool {
        if slot == 2 * self.succ.len() {
            return true;
        }
        let (node, r) = (slot / 2, slot % 2);
        let rel = Rel::ALL[r];
        let from = image[node].expect("numbered nodes are referenced before their slots");
        let to = self.succ[node][r];
        if to == NULL_REF {
            return g.has_edge(rel, from, g.null()) && self.extend(g, image, slot + 1);
        }
        match image[to as usize] {
            Some(y) => g.has_edge(rel, from, y) && self.extend(g, image, slot + 1),
            None => {
                let candidates: Vec<NodeId> =
                    g.succ(rel, from).filter(|&y| !g.is_special(y)).collect();
                for y in candidates {
                    image[to as usize] = Some(y);
                    if self.extend(g, image, slot + 1) {
                        return true;
                    }
                }
                image[to as usize] = None;
                false
            }
        }
    }

    /// Breadth-first renumbering from root, s1 before s2.
    pub fn canonical(&self) -> CompactHeap {
        let mut order = vec![0usize];
        let mut number = vec![usize::MAX; self.succ.len()];
        number[0] = 0;
        let mut i = 0;
        while i < order.len() {
            for r in 0..2 {
                let t = self.succ[order[i]][r];
                if t != NULL_REF && number[t as usize] == usize::MAX {
                    number[t as usize] = order.len();
                    order.push(t as usize);
                }
            }
            i += 1;
        }
        let succ = order
            .iter()
            .map(|&x| {
                self.succ[x].map(|t| if t == NULL_REF { NULL_REF } else { number[t as usize] as u8 })
            })
            .collect();
        CompactHeap { succ }
    }

    pub fn reachable(&self) -> bool {
        self.canonical().succ.len() == self.succ.len()
    }
}

/// All labelled heaps with exactly `k` ordinary nodes.
pub fn labelled_heaps(k: usize) -> Vec<CompactHeap> {
    let choices = k + 2;
    let slots = 2 * (k + 1);
    let total = choices.pow(slots as u32);
    let mut out = Vec::new();
    for mut code in 0..total {
        let mut succ = vec![[0u8; 2]; k + 1];
        for s in 0..slots {
            let v = code % choices;
            code /= choices;
            succ[s / 2][s % 2] = if v == k + 1 { NULL_REF } else { v as u8 };
        }
        let h = CompactHeap { succ };
        if h.reachable() {
            out.push(h);
        }
    }
    out
}

/// One heap per isomorphism class with exactly `k` ordinary nodes, built
/// by depth-first search over breadth-first numberings.
pub fn canonical_heaps(k: usize) -> Vec<CompactHeap> {
    fn go(k: usize, slot: usize, numbered: usize, succ: &mut Vec<[u8; 2]>, out: &mut Vec<CompactHeap>) {
        if slot == 2 * (k + 1) {
            out.push(CompactHeap { succ: succ.clone() });
            return;
        }
        if slot / 2 >= numbered {
            return;
        }
        let mut options: Vec<(u8, usize)> = vec![(NULL_REF, numbered)];
        options.extend((0..numbered).map(|j| (j as u8, numbered)));
        if numbered <= k {
            options.push((numbered as u8, numbered + 1));
        }
        for (v, next) in options {
            succ[slot / 2][slot % 2] = v;
            go(k, slot + 1, next, succ, out);
        }
    }
    let mut out = Vec::new();
    go(k, 0, 1, &mut vec![[0u8; 2]; k + 1], &mut out);
    out
}

/// Satisfiability oracle: some heap with at most `|V(g)|` ordinary nodes
/// maps into `g`. The bound suffices since a model's image, with one
/// chosen successor per relation, is itself such a heap.
pub fn sat_oracle(g: &Graph, heaps_by_size: &[Vec<CompactHeap>]) -> bool {
    let bound = g.non_special_count();
    heaps_by_size
        .iter()
        .take(bound + 1)
        .flatten()
        .any(|h| h.maps_into(g))
}

/// Words of length at most `max_len` over {1,2}.
pub fn all_words(max_len: usize) -> Vec<Vec<Rel>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for rel in Rel::ALL {
                let mut w2: Vec<Rel> = w.clone();
                w2.push(rel);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Whether `g` has a slice with word `w`, by walking node sets.
pub fn has_slice_with_word(g: &Graph, w: &[Rel]) -> bool {
    let mut cur: HashSet<NodeId> = HashSet::from([g.root()]);
    for &rel in w {
        cur = cur.iter().flat_map(|&x| g.succ(rel, x)).collect();
    }
    cur.contains(&g.null())
}

/// Drops edges into root and root's `s2` edges other than the one to
/// null, then adds that one. The result is orable with no edge into root.
pub fn restrict_orable(g: &Graph) -> Graph {
    let (root, null) = (g.root(), g.null());
    let mut edges = g.index_edges();
    for (r, list) in edges.iter_mut().enumerate() {
        list.retain(|&(a, b)| b != root.index() && !(r == 1 && a == root.index()));
    }
    edges[1].push((root.index(), null.index()));
    Graph::assemble(g.names().to_vec(), root.index(), null.index(), edges).unwrap()
}

/// Random heap whose root has its `s2` field set to null.
pub fn random_orable_heap(rng: &mut impl Rng, sizes: RangeInclusive<usize>) -> Graph {
    let g = random_heap(rng, sizes);
    let mut edges = g.index_edges();
    for e in edges[1].iter_mut() {
        if e.0 == g.root().index() {
            e.1 = g.null().index();
        }
    }
    let g = Graph::assemble(g.names().to_vec(), g.root().index(), g.null().index(), edges).unwrap();
    let mut keep = g.reachable_from(g.root());
    keep.insert(g.null().index());
    g.induced(&keep)
}

/// Canonical heaps with at most `max_k` ordinary nodes, grouped by size.
pub fn canonical_heaps_upto(max_k: usize) -> Vec<Vec<CompactHeap>> {
    (0..=max_k).map(canonical_heaps).collect()
}

/// First heap in the pool mapping into `g1` but not into `g2`.
pub fn brute_counterexample<'a>(
    heaps_by_size: &'a [Vec<CompactHeap>],
    g1: &Graph,
    g2: &Graph,
) -> Option<&'a CompactHeap> {
    heaps_by_size
        .iter()
        .flatten()
        .find(|h| h.maps_into(g1) && !h.maps_into(g2))
}

impl CompactHeap {
    /// Reads a heap graph; the result is in canonical numbering.
    pub fn from_graph(g: &Graph) -> CompactHeap {
        assert!(g.is_heap());
        let ordinary: Vec<NodeId> = std::iter::once(g.root())
            .chain(g.nodes().filter(|&x| !g.is_special(x)))
            .collect();
        let number = |y: NodeId| {
            if y == g.null() {
                NULL_REF
            } else {
                ordinary.iter().position(|&z| z == y).unwrap() as u8
            }
        };
        let succ = ordinary
            .iter()
            .map(|&x| Rel::ALL.map(|rel| number(g.heap_succ(rel, x))))
            .collect();
        CompactHeap { succ }.canonical()
    }
}
