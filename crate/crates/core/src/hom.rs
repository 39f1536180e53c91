//! Graph homomorphisms: checking, search, enumeration and composition.
//!
//! A homomorphism `h : G -> G'` preserves both edge relations and maps
//! exactly the root to the root and exactly null to null. Search is a
//! backtracking CSP over source nodes in node-id (lexicographic) order,
//! values tried in target node-id order, with arc consistency maintained
//! after every assignment. Propagation only removes values that cannot
//! extend to a solution, so solutions are produced in lexicographic order
//! of the mapping vector; [`find_hom`] returns the first of
//! [`enumerate_homs`].

use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, NodeId, Rel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomError {
    #[error("mapping covers {got} nodes but the source graph has {expected}")]
    NotTotal { expected: usize, got: usize },
    #[error("image {0} is outside the target graph")]
    OutOfRange(u32),
    #[error("cannot compose: first codomain has {first} nodes, second domain has {second}")]
    Mismatch { first: usize, second: usize },
    #[error("unknown node `{0}`")]
    UnknownNode(String),
}

/// A total node map from a source graph into a target graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Homomorphism {
    map: Vec<NodeId>,
    codomain: usize,
}

impl Homomorphism {
    pub fn new(map: Vec<NodeId>, codomain: usize) -> Self {
        Homomorphism { map, codomain }
    }

    pub fn identity(g: &Graph) -> Self {
        Homomorphism::new(g.nodes().collect(), g.node_count())
    }

    /// Builds a mapping from `(source name, target name)` pairs.
    pub fn from_names<S: AsRef<str>>(
        src: &Graph,
        tgt: &Graph,
        pairs: &[(S, S)],
    ) -> Result<Self, HomError> {
        let mut map = vec![None; src.node_count()];
        for (a, b) in pairs {
            let x = src
                .id(a.as_ref())
                .ok_or_else(|| HomError::UnknownNode(a.as_ref().to_string()))?;
            let y = tgt
                .id(b.as_ref())
                .ok_or_else(|| HomError::UnknownNode(b.as_ref().to_string()))?;
            map[x.index()] = Some(y);
        }
        let got = map.iter().filter(|m| m.is_some()).count();
        if got != map.len() {
            return Err(HomError::NotTotal {
                expected: map.len(),
                got,
            });
        }
        Ok(Homomorphism::new(
            map.into_iter().map(Option::unwrap).collect(),
            tgt.node_count(),
        ))
    }

    #[inline]
    pub fn image(&self, x: NodeId) -> NodeId {
        self.map[x.index()]
    }

    pub fn as_slice(&self) -> &[NodeId] {
        &self.map
    }

    pub fn domain_len(&self) -> usize {
        self.map.len()
    }

    pub fn codomain_len(&self) -> usize {
        self.codomain
    }

    /// `<source-id> -> <target-id>` lines sorted by source id.
    pub fn render(&self, src: &Graph, tgt: &Graph) -> String {
        let mut out = String::new();
        for x in src.nodes() {
            let _ = writeln!(out, "{} -> {}", src.name(x), tgt.name(self.image(x)));
        }
        out
    }

    /// Name pairs in source order.
    pub fn named_pairs(&self, src: &Graph, tgt: &Graph) -> Vec<(String, String)> {
        src.nodes()
            .map(|x| (src.name(x).to_string(), tgt.name(self.image(x)).to_string()))
            .collect()
    }
}

/// Verifies the three homomorphism conditions. An incomplete mapping is an
/// error, not a negative answer.
pub fn check_hom(g: &Graph, t: &Graph, h: &Homomorphism) -> Result<bool, HomError> {
    if h.map.len() != g.node_count() {
        return Err(HomError::NotTotal {
            expected: g.node_count(),
            got: h.map.len(),
        });
    }
    if let Some(bad) = h.map.iter().find(|y| y.index() >= t.node_count()) {
        return Err(HomError::OutOfRange(bad.0));
    }
    for x in g.nodes() {
        let hx = h.image(x);
        if (hx == t.root()) != (x == g.root()) || (hx == t.null()) != (x == g.null()) {
            return Ok(false);
        }
        for rel in Rel::ALL {
            if g.succ(rel, x).any(|y| !t.has_edge(rel, hx, h.image(y))) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn find_hom(g: &Graph, t: &Graph) -> Option<Homomorphism> {
    enumerate_homs(g, t, 1).into_iter().next()
}

pub fn exists_hom(g: &Graph, t: &Graph) -> bool {
    find_hom(g, t).is_some()
}

/// All homomorphisms up to `limit`, in lexicographic order of the mapping.
pub fn enumerate_homs(g: &Graph, t: &Graph, limit: usize) -> Vec<Homomorphism> {
    let mut out = Vec::new();
    if limit == 0 {
        return out;
    }
    let mut search = Search::new(g, t);
    if let Some(domains) = search.initial_domains() {
        search.dfs(domains, 0, limit, &mut out);
    }
    out
}

/// `h2 ∘ h1`.
pub fn compose(h1: &Homomorphism, h2: &Homomorphism) -> Result<Homomorphism, HomError> {
    if h1.codomain != h2.map.len() {
        return Err(HomError::Mismatch {
            first: h1.codomain,
            second: h2.map.len(),
        });
    }
    Ok(Homomorphism::new(
        h1.map.iter().map(|&y| h2.image(y)).collect(),
        h2.codomain,
    ))
}

/// A constraint arc: the domain of `node` must find support in the domain
/// of `other` along `rel`, in the given direction.
#[derive(Clone, Copy)]
struct Arc {
    other: usize,
    rel: Rel,
    /// true: `node -> other` is an edge of the source graph
    forward: bool,
}

struct Search<'a> {
    g: &'a Graph,
    t: &'a Graph,
    /// arcs[x] = constraints whose domain to revise is x's
    arcs: Vec<Vec<Arc>>,
    /// watchers[y] = nodes whose arcs use y as the supporter
    watchers: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, t: &'a Graph) -> Self {
        let n = g.node_count();
        let mut arcs = vec![Vec::new(); n];
        let mut watchers = vec![Vec::new(); n];
        for rel in Rel::ALL {
            for (x, y) in g.edges(rel) {
                let (x, y) = (x.index(), y.index());
                arcs[x].push(Arc {
                    other: y,
                    rel,
                    forward: true,
                });
                arcs[y].push(Arc {
                    other: x,
                    rel,
                    forward: false,
                });
                watchers[y].push(x);
                watchers[x].push(y);
            }
        }
        for w in &mut watchers {
            w.sort_unstable();
            w.dedup();
        }
        Search {
            g,
            t,
            arcs,
            watchers,
        }
    }

    fn initial_domains(&self) -> Option<Vec<FixedBitSet>> {
        let m = self.t.node_count();
        let mut ordinary = FixedBitSet::with_capacity(m);
        ordinary.insert_range(..);
        ordinary.set(self.t.root().index(), false);
        ordinary.set(self.t.null().index(), false);
        let mut domains: Vec<FixedBitSet> = self
            .g
            .nodes()
            .map(|x| {
                let mut d = FixedBitSet::with_capacity(m);
                if x == self.g.root() {
                    d.insert(self.t.root().index());
                } else if x == self.g.null() {
                    d.insert(self.t.null().index());
                } else {
                    d = ordinary.clone();
                }
                d
            })
            .collect();
        let all: Vec<usize> = (0..domains.len()).collect();
        self.propagate(&mut domains, all).then_some(domains)
    }

    /// Revises `x` against one arc; returns whether the domain shrank.
    fn revise(&self, domains: &mut [FixedBitSet], x: usize, arc: Arc) -> bool {
        let support = &domains[arc.other];
        let mut removed = Vec::new();
        for c in domains[x].ones() {
            let c_id = NodeId::from(c);
            let neighbours = if arc.forward {
                self.t.succ_set(arc.rel, c_id)
            } else {
                self.t.pred_set(arc.rel, c_id)
            };
            if neighbours.is_disjoint(support) {
                removed.push(c);
            }
        }
        for &c in &removed {
            domains[x].set(c, false);
        }
        !removed.is_empty()
    }

    /// AC-3 from the given dirty nodes. Returns false on a domain wipeout.
    fn propagate(&self, domains: &mut [FixedBitSet], dirty: Vec<usize>) -> bool {
        let n = domains.len();
        let mut queued = FixedBitSet::with_capacity(n);
        let mut queue = std::collections::VecDeque::new();
        // Every node adjacent to a dirty node needs revision, and so does the
        // dirty node itself against its neighbours.
        for d in dirty {
            for x in std::iter::once(d).chain(self.watchers[d].iter().copied()) {
                if !queued.put(x) {
                    queue.push_back(x);
                }
            }
        }
        while let Some(x) = queue.pop_front() {
            queued.set(x, false);
            let mut changed = false;
            for &arc in &self.arcs[x] {
                changed |= self.revise(domains, x, arc);
            }
            if domains[x].is_clear() {
                return false;
            }
            if changed {
                for &w in &self.watchers[x] {
                    if !queued.put(w) {
                        queue.push_back(w);
                    }
                }
            }
        }
        true
    }

    fn dfs(
        &mut self,
        domains: Vec<FixedBitSet>,
        var: usize,
        limit: usize,
        out: &mut Vec<Homomorphism>,
    ) {
        if var == domains.len() {
            let map = domains
                .iter()
                .map(|d| NodeId::from(d.minimum().expect("assigned")))
                .collect();
            out.push(Homomorphism::new(map, self.t.node_count()));
            return;
        }
        let values: Vec<usize> = domains[var].ones().collect();
        if values.len() == 1 {
            self.dfs(domains, var + 1, limit, out);
            return;
        }
        for c in values {
            if out.len() >= limit {
                return;
            }
            let mut next = domains.clone();
            next[var].clear();
            next[var].insert(c);
            if self.propagate(&mut next, vec![var]) {
                self.dfs(next, var + 1, limit, out);
            }
        }
    }
}
