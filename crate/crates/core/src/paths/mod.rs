//! Labelled paths, slices, and the slice-language test.
//!
//! A path `x0, l0, x1, ..., x_n` requires `<x_i, x_{i+1}>` to be an edge of
//! the relation named by label `l_i`. A slice runs from root to null and
//! may pass through null's self-loops.

pub mod regex;

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{Graph, NodeId, Rel};
use crate::hom::Homomorphism;

pub use regex::{parse_word, word_string, Nfa, Regex, RegexError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("a path needs at least one node")]
    Empty,
    #[error("{nodes} nodes need {expected} labels, got {labels}")]
    LabelCount {
        nodes: usize,
        expected: usize,
        labels: usize,
    },
    #[error("step {step}: no s{label} edge {from} -> {to}")]
    MissingEdge {
        step: usize,
        label: char,
        from: String,
        to: String,
    },
    #[error("node #{0} is not in the graph")]
    UnknownNode(u32),
    #[error("unknown node `{0}`")]
    UnknownName(String),
    #[error("`{0}` is not a label (expected 1 or 2)")]
    BadLabel(char),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    nodes: Vec<NodeId>,
    labels: Vec<Rel>,
}

impl Path {
    /// Builds a path and checks every step against `g`.
    pub fn new(g: &Graph, nodes: Vec<NodeId>, labels: Vec<Rel>) -> Result<Path, PathError> {
        let p = Path { nodes, labels };
        p.check(g)?;
        Ok(p)
    }

    /// Builds a path from names, e.g. `["root", "C0", "U0"]` with labels "12".
    pub fn from_names(g: &Graph, nodes: &[&str], labels: &str) -> Result<Path, PathError> {
        let ids = nodes
            .iter()
            .map(|n| g.id(n).ok_or_else(|| PathError::UnknownName(n.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let labels = labels
            .chars()
            .map(|c| Rel::from_label(c).ok_or(PathError::BadLabel(c)))
            .collect::<Result<Vec<_>, _>>()?;
        Path::new(g, ids, labels)
    }

    pub fn check(&self, g: &Graph) -> Result<(), PathError> {
        if self.nodes.is_empty() {
            return Err(PathError::Empty);
        }
        if self.labels.len() + 1 != self.nodes.len() {
            return Err(PathError::LabelCount {
                nodes: self.nodes.len(),
                expected: self.nodes.len() - 1,
                labels: self.labels.len(),
            });
        }
        if let Some(bad) = self.nodes.iter().find(|x| !g.contains(**x)) {
            return Err(PathError::UnknownNode(bad.0));
        }
        for (i, (w, &rel)) in self.nodes.windows(2).zip(&self.labels).enumerate() {
            if !g.has_edge(rel, w[0], w[1]) {
                return Err(PathError::MissingEdge {
                    step: i,
                    label: rel.label(),
                    from: g.name(w[0]).to_string(),
                    to: g.name(w[1]).to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn labels(&self) -> &[Rel] {
        &self.labels
    }

    pub fn start(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn end(&self) -> NodeId {
        *self.nodes.last().expect("paths are nonempty")
    }

    /// `x0,l0,x1,...` with node names.
    pub fn render(&self, g: &Graph) -> String {
        let mut out = g.name(self.nodes[0]).to_string();
        for (x, l) in self.nodes[1..].iter().zip(&self.labels) {
            out.push(',');
            out.push(l.label());
            out.push(',');
            out.push_str(g.name(*x));
        }
        out
    }
}

/// Label word of a path; empty for a single-node path.
pub fn word(p: &Path) -> String {
    word_string(&p.labels)
}

pub fn is_slice(g: &Graph, p: &Path) -> Result<bool, PathError> {
    p.check(g)?;
    Ok(p.start() == g.root() && p.end() == g.null())
}

/// Node-wise image of a path; labels are unchanged.
pub fn map_path(h: &Homomorphism, p: &Path) -> Path {
    Path {
        nodes: p.nodes.iter().map(|&x| h.image(x)).collect(),
        labels: p.labels.clone(),
    }
}

/// The graph read as an automaton: states are nodes, root initial, null
/// accepting, an `i`-transition per `s_i` edge.
pub struct SliceNfa<'a> {
    g: &'a Graph,
}

impl<'a> SliceNfa<'a> {
    pub fn new(g: &'a Graph) -> Self {
        SliceNfa { g }
    }

    pub fn accepts(&self, word: &[Rel]) -> bool {
        let g = self.g;
        let mut cur = fixedbitset::FixedBitSet::with_capacity(g.node_count());
        cur.insert(g.root().index());
        for &rel in word {
            let mut next = fixedbitset::FixedBitSet::with_capacity(g.node_count());
            for x in cur.ones() {
                next.union_with(g.succ_set(rel, NodeId::from(x)));
            }
            cur = next;
        }
        cur.contains(g.null().index())
    }
}

/// Some slice of `g` whose word is in `L(e)`, found by breadth-first search
/// over the product of the graph automaton with the Thompson NFA of `e`.
pub fn slice_matching(g: &Graph, e: &Regex) -> Option<Path> {
    let nfa = Nfa::thompson(e);
    let q = nfa.state_count();
    let n = g.node_count();
    let key = |x: usize, s: usize| x * q + s;
    // parent[(x, s)] = previous product state and the graph step taken
    // (None for epsilon moves)
    let mut parent: Vec<Option<(usize, Option<Rel>)>> = vec![None; n * q];
    let mut seen = vec![false; n * q];
    let start = key(g.root().index(), nfa.start);
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    let goal = key(g.null().index(), nfa.accept);
    let mut found = false;
    while let Some(cur) = queue.pop_front() {
        if cur == goal {
            found = true;
            break;
        }
        let (x, s) = (cur / q, cur % q);
        for &(label, t) in &nfa.transitions[s] {
            match label {
                None => {
                    let next = key(x, t);
                    if !seen[next] {
                        seen[next] = true;
                        parent[next] = Some((cur, None));
                        queue.push_back(next);
                    }
                }
                Some(rel) => {
                    for y in g.succ(rel, NodeId::from(x)) {
                        let next = key(y.index(), t);
                        if !seen[next] {
                            seen[next] = true;
                            parent[next] = Some((cur, Some(rel)));
                            queue.push_back(next);
                        }
                    }
                }
            }
        }
    }
    if !found {
        return None;
    }
    let mut nodes = vec![g.null()];
    let mut labels = Vec::new();
    let mut cur = goal;
    while let Some((prev, step)) = parent[cur] {
        if let Some(rel) = step {
            labels.push(rel);
            nodes.push(NodeId::from(prev / q));
        }
        cur = prev;
    }
    nodes.reverse();
    labels.reverse();
    let p = Path { nodes, labels };
    debug_assert!(p.check(g).is_ok());
    Some(p)
}

pub fn has_slice_matching(g: &Graph, e: &Regex) -> bool {
    slice_matching(g, e).is_some()
}

/// Words of all slices with at most `max_len` labels, sorted and deduplicated.
pub fn slice_words(g: &Graph, max_len: usize) -> Vec<Vec<Rel>> {
    let mut out = Vec::new();
    let mut stack: Vec<(NodeId, Vec<Rel>)> = vec![(g.root(), Vec::new())];
    while let Some((x, w)) = stack.pop() {
        if x == g.null() && !w.is_empty() {
            out.push(w.clone());
        }
        if w.len() == max_len {
            continue;
        }
        for rel in Rel::ALL {
            for y in g.succ(rel, x) {
                let mut w2 = w.clone();
                w2.push(rel);
                stack.push((y, w2));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}
