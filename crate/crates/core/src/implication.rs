//! Implication and equivalence of constraint graphs.
//!
//! Over all graphs, `g1` implies `g2` exactly when `g1 -> g2`. Over heaps
//! that test is only sufficient, and no complete procedure exists, so the
//! heap side is a bounded search for a heap that maps into `g1` but not
//! into `g2`. Bounds count ordinary nodes (root and null excluded).

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::closure::product;
use crate::families::{enumerate_heaps, HeapEnumConfig};
use crate::graph::{Graph, GraphBuilder, Rel, NULL, ROOT};
use crate::hom::{find_hom, Homomorphism};
use crate::paths::{has_slice_matching, slice_matching, Regex};

/// Regular expressions tried as cheap non-homomorphism certificates.
pub const REGEX_POOL: [&str; 6] = ["(1|2)*", "1*", "2*", "121*", "1221*", "12(21)*"];

/// `g1 ⇝ g2` over all graphs.
pub fn implies_over_graphs(g1: &Graph, g2: &Graph) -> bool {
    find_hom(g1, g2).is_some()
}

/// Sound but incomplete test for `g1 ⇝ g2` over heaps: a homomorphism
/// `g1 -> g2` composes with every model of `g1`. A `false` answer says
/// nothing.
pub fn implies_sufficient(g1: &Graph, g2: &Graph) -> bool {
    find_hom(g1, g2).is_some()
}

/// A slice of the counterexample heap in a language the second graph has
/// no slice in; by the regular expression test this rules out `H -> g2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceCertificate {
    pub regex: String,
    pub path: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub heap: Graph,
    /// `heap -> g1`
    pub model: Homomorphism,
    pub slice: Option<SliceCertificate>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ImplicationVerdict {
    /// `g1 -> g2` exists, so the implication holds over heaps.
    ValidSufficient(Homomorphism),
    Counterexample(Counterexample),
    /// No counterexample with at most `bound` ordinary nodes.
    Unknown { bound: usize },
}

/// Largest bound whose heaps are kept in memory across searches.
const CACHED_BOUND: usize = 3;

fn cached_heaps() -> &'static [Graph] {
    static CACHE: OnceLock<Vec<Graph>> = OnceLock::new();
    CACHE.get_or_init(|| {
        enumerate_heaps(HeapEnumConfig {
            max_nodes: CACHED_BOUND,
            dedupe: true,
        })
        .collect()
    })
}

/// First result of `f` over heaps up to `max_nodes` ordinary nodes, in
/// enumeration order. Work is split into chunks searched in parallel;
/// the earliest hit wins, so the answer does not depend on thread count.
pub fn first_heap<T, F>(max_nodes: usize, f: F) -> Option<T>
where
    T: Send,
    F: Fn(&Graph) -> Option<T> + Sync,
{
    const CHUNK: usize = 4096;
    if max_nodes <= CACHED_BOUND {
        let all = cached_heaps();
        let end = all
            .iter()
            .position(|h| h.non_special_count() > max_nodes)
            .unwrap_or(all.len());
        return all[..end]
            .par_chunks(CHUNK)
            .find_map_first(|chunk| chunk.iter().find_map(&f));
    }
    let mut heaps = enumerate_heaps(HeapEnumConfig {
        max_nodes,
        dedupe: true,
    });
    loop {
        let chunk: Vec<Graph> = heaps.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            return None;
        }
        if let Some(hit) = chunk.par_iter().find_map_first(&f) {
            return Some(hit);
        }
    }
}

/// Pool expressions in which `g` has no slice.
fn missing_languages(g: &Graph) -> Vec<(&'static str, Regex)> {
    REGEX_POOL
        .iter()
        .map(|s| (*s, Regex::parse(s).expect("pool expressions parse")))
        .filter(|(_, e)| !has_slice_matching(g, e))
        .collect()
}

/// First heap (in enumeration order) with at most `max_nodes` ordinary
/// nodes that maps into `g1` but not into `g2`.
pub fn search_counterexample(g1: &Graph, g2: &Graph, max_nodes: usize) -> Option<Counterexample> {
    let missing = missing_languages(g2);
    first_heap(max_nodes, |h| {
        let model = find_hom(h, g1)?;
        for (text, e) in &missing {
            if let Some(p) = slice_matching(h, e) {
                return Some(Counterexample {
                    heap: h.clone(),
                    model,
                    slice: Some(SliceCertificate {
                        regex: text.to_string(),
                        path: p.render(h),
                    }),
                });
            }
        }
        find_hom(h, g2).is_none().then(|| Counterexample {
            heap: h.clone(),
            model,
            slice: None,
        })
    })
}

pub fn find_heap_counterexample(g1: &Graph, g2: &Graph, max_nodes: usize) -> Option<Graph> {
    search_counterexample(g1, g2, max_nodes).map(|c| c.heap)
}

/// Sufficient test first, then the bounded search.
pub fn check_implication(g1: &Graph, g2: &Graph, max_nodes: usize) -> ImplicationVerdict {
    if let Some(h) = find_hom(g1, g2) {
        return ImplicationVerdict::ValidSufficient(h);
    }
    match search_counterexample(g1, g2, max_nodes) {
        Some(c) => ImplicationVerdict::Counterexample(c),
        None => ImplicationVerdict::Unknown { bound: max_nodes },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// a model of the first graph that is not a model of the second
    FirstToSecond,
    SecondToFirst,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivVerdict {
    EquivalentUpTo { bound: usize },
    Counterexample {
        direction: Direction,
        counterexample: Counterexample,
    },
}

impl EquivVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, EquivVerdict::EquivalentUpTo { .. })
    }
}

/// Heap equivalence up to the bound, checking `g1 ⇝ g2` first.
pub fn equiv_bounded(g1: &Graph, g2: &Graph, max_nodes: usize) -> EquivVerdict {
    for (direction, a, b) in [
        (Direction::FirstToSecond, g1, g2),
        (Direction::SecondToFirst, g2, g1),
    ] {
        if let Some(counterexample) = search_counterexample(a, b, max_nodes) {
            return EquivVerdict::Counterexample {
                direction,
                counterexample,
            };
        }
    }
    EquivVerdict::EquivalentUpTo { bound: max_nodes }
}

/// Counterexample search for `(g × p) ⇝ q`.
pub fn reduction_counterexample(g: &Graph, p: &Graph, q: &Graph, max_nodes: usize) -> Option<Counterexample> {
    search_counterexample(&product(g, p), q, max_nodes)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("{which} graph is not orable")]
    NotOrable { which: &'static str },
    #[error("{which} graph has an edge into its root from `{from}`")]
    EdgeIntoRoot { which: &'static str, from: String },
}

/// Name of node `x` of the first (`p_`) or second (`q_`) embedded graph.
pub fn gadget_name(prefix: char, name: &str) -> String {
    format!("{prefix}_{name}")
}

/// The invariant graph: root's `s1` edges lead to fresh nodes `a` and `b`;
/// `a` has `s2` back to root and `s1` to the first graph's root, `b` has
/// `s2` to null and `s1` to the second graph's root. Both embedded roots
/// become ordinary nodes; null is shared.
pub fn invariant_gadget(g1: &Graph, g2: &Graph) -> Result<Graph, GadgetError> {
    for (which, g) in [("first", g1), ("second", g2)] {
        if !g.is_orable() {
            return Err(GadgetError::NotOrable { which });
        }
        for rel in Rel::ALL {
            if let Some(x) = g.pred(rel, g.root()).next() {
                return Err(GadgetError::EdgeIntoRoot {
                    which,
                    from: g.name(x).to_string(),
                });
            }
        }
    }
    let mut b = GraphBuilder::new();
    b.edge(Rel::S1, ROOT, "a")
        .edge(Rel::S1, ROOT, "b")
        .edge(Rel::S1, "a", &gadget_name('p', ROOT))
        .edge(Rel::S1, "b", &gadget_name('q', ROOT))
        .edge(Rel::S2, ROOT, NULL)
        .edge(Rel::S2, "a", ROOT)
        .edge(Rel::S2, "b", NULL);
    for (prefix, g) in [('p', g1), ('q', g2)] {
        let name = |x| {
            if x == g.null() {
                NULL.to_string()
            } else {
                gadget_name(prefix, g.name(x))
            }
        };
        for x in g.nodes().filter(|&x| x != g.null()) {
            b.node(&name(x));
        }
        for rel in Rel::ALL {
            for (x, y) in g.edges(rel) {
                if x != g.null() {
                    b.edge(rel, &name(x), &name(y));
                }
            }
        }
    }
    Ok(b.build().expect("gadget is valid"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AssignValue {
    Null,
    Root,
}

/// `root.<path>.<field> := <value>` on a heap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub path: Vec<Rel>,
    pub field: Rel,
    pub value: AssignValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssignmentError {
    #[error("cannot parse assignment `{0}` (expected e.g. `root.1.2 := null`)")]
    Syntax(String),
    #[error("assignments apply to heaps only")]
    NotAHeap,
}

impl Assignment {
    /// `root.1.2 := null`: field 2 of root's s1-successor becomes null.
    pub fn statement() -> Assignment {
        Assignment {
            path: vec![Rel::S1],
            field: Rel::S2,
            value: AssignValue::Null,
        }
    }

    pub fn parse(text: &str) -> Result<Assignment, AssignmentError> {
        let err = || AssignmentError::Syntax(text.to_string());
        let (lhs, rhs) = text.split_once(":=").ok_or_else(err)?;
        let value = match rhs.trim() {
            NULL => AssignValue::Null,
            ROOT => AssignValue::Root,
            _ => return Err(err()),
        };
        let mut parts = lhs.trim().split('.');
        if parts.next() != Some(ROOT) {
            return Err(err());
        }
        let mut rels = parts
            .map(|p| {
                let mut cs = p.chars();
                match (cs.next().and_then(Rel::from_label), cs.next()) {
                    (Some(r), None) => Ok(r),
                    _ => Err(err()),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let field = rels.pop().ok_or_else(err)?;
        Ok(Assignment {
            path: rels,
            field,
            value,
        })
    }
}

impl std::fmt::Display for Assignment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(ROOT)?;
        for r in self.path.iter().chain(std::iter::once(&self.field)) {
            write!(f, ".{r}")?;
        }
        let v = match self.value {
            AssignValue::Null => NULL,
            AssignValue::Root => ROOT,
        };
        write!(f, " := {v}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentOutcome {
    pub heap: Graph,
    /// false when the updated node is null (immutable) or the field
    /// already held the value
    pub changed: bool,
}

/// Runs the assignment and drops nodes no longer reachable from root.
pub fn apply_assignment(h: &Graph, a: &Assignment) -> Result<AssignmentOutcome, AssignmentError> {
    if !h.is_heap() {
        return Err(AssignmentError::NotAHeap);
    }
    let mut x = h.root();
    for &rel in &a.path {
        x = h.heap_succ(rel, x);
    }
    let target = match a.value {
        AssignValue::Null => h.null(),
        AssignValue::Root => h.root(),
    };
    if x == h.null() || h.heap_succ(a.field, x) == target {
        return Ok(AssignmentOutcome {
            heap: h.clone(),
            changed: false,
        });
    }
    let mut edges = h.index_edges();
    for e in edges[a.field.index()].iter_mut() {
        if e.0 == x.index() {
            e.1 = target.index();
        }
    }
    let updated = Graph::assemble(
        h.names().to_vec(),
        h.root().index(),
        h.null().index(),
        edges,
    )
    .expect("updated heap is valid");
    let mut keep = updated.reachable_from(updated.root());
    keep.insert(updated.null().index());
    Ok(AssignmentOutcome {
        heap: updated.induced(&keep),
        changed: true,
    })
}

/// First heap `H` with `H -> g` but `apply(H) ↛ g`: a state satisfying the
/// invariant before the assignment and violating it afterwards.
pub fn assignment_counterexample(g: &Graph, a: &Assignment, max_nodes: usize) -> Option<Graph> {
    first_heap(max_nodes, |h| {
        find_hom(h, g)?;
        let after = apply_assignment(h, a).expect("enumerated graphs are heaps");
        find_hom(&after.heap, g).is_none().then(|| h.clone())
    })
}
