//! The two-relation rooted graph model.
//!
//! A [`Graph`] has a finite node set, two edge relations `s1` and `s2`, and
//! two distinguished nodes `root` and `null`. The null node carries exactly
//! one outgoing edge per relation, a self-loop, which [`Graph::assemble`]
//! inserts on its own.
//!
//! Nodes are stored densely and sorted by name, so the order of [`NodeId`]
//! values is the lexicographic order of node names. Every algorithm in the
//! crate that needs a deterministic order relies on this.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Reserved name of the root node.
pub const ROOT: &str = "root";
/// Reserved name of the null node.
pub const NULL: &str = "null";

/// Dense node index. Index order equals lexicographic name order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for NodeId {
    fn from(i: usize) -> Self {
        NodeId(i as u32)
    }
}

/// Edge relation selector; doubles as the path label alphabet `{1, 2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rel {
    S1,
    S2,
}

impl Rel {
    pub const ALL: [Rel; 2] = [Rel::S1, Rel::S2];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Rel::S1 => 0,
            Rel::S2 => 1,
        }
    }

    pub fn label(self) -> char {
        match self {
            Rel::S1 => '1',
            Rel::S2 => '2',
        }
    }

    pub fn from_label(c: char) -> Option<Rel> {
        match c {
            '1' => Some(Rel::S1),
            '2' => Some(Rel::S2),
            _ => None,
        }
    }
}

impl fmt::Display for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("root and null must be distinct nodes")]
    RootIsNull,
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("edge endpoint `{0}` is not a node of the graph")]
    UnknownNode(String),
    #[error("null may only self-loop (found s{rel} edge null -> {target})")]
    NullEdge { rel: char, target: String },
    #[error("`{0}` is a reserved node name")]
    ReservedName(String),
    #[error("node `{0}` is not in the graph")]
    NotInGraph(String),
}

/// A candidate structure before validation. Root and null may carry any
/// name here; validation renames them to `root` and `null`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawGraph {
    pub nodes: Vec<String>,
    pub root: String,
    pub null: String,
    pub s1: Vec<(String, String)>,
    pub s2: Vec<(String, String)>,
}

/// Checks a candidate structure against the graph invariants.
///
/// The null self-loops are added when absent. Nodes named in edges or as
/// root/null must appear in `nodes`.
pub fn validate(raw: &RawGraph) -> Result<Graph, GraphError> {
    if raw.root == raw.null {
        return Err(GraphError::RootIsNull);
    }
    let mut index: HashMap<&str, usize> = HashMap::with_capacity(raw.nodes.len());
    for (i, n) in raw.nodes.iter().enumerate() {
        if index.insert(n.as_str(), i).is_some() {
            return Err(GraphError::DuplicateNode(n.clone()));
        }
    }
    let lookup = |n: &str| {
        index
            .get(n)
            .copied()
            .ok_or_else(|| GraphError::UnknownNode(n.to_string()))
    };
    let root = lookup(&raw.root)?;
    let null = lookup(&raw.null)?;
    let mut edges: [Vec<(usize, usize)>; 2] = [Vec::new(), Vec::new()];
    for (rel, list) in [(Rel::S1, &raw.s1), (Rel::S2, &raw.s2)] {
        for (a, b) in list {
            edges[rel.index()].push((lookup(a)?, lookup(b)?));
        }
    }
    Graph::assemble(raw.nodes.clone(), root, null, edges)
}

/// Structural class membership flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub is_heap: bool,
    pub is_tree: bool,
    pub is_list: bool,
    pub is_orable: bool,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, NodeId>,
    root: NodeId,
    null: NodeId,
    succ: [Vec<FixedBitSet>; 2],
    pred: [Vec<FixedBitSet>; 2],
}

impl Graph {
    /// Builds a graph from positional parts.
    ///
    /// `root` and `null` index into `names`; they are renamed to the
    /// reserved names. Null self-loops are inserted, duplicate edges
    /// collapse, and node indices are re-sorted by name.
    pub fn assemble(
        mut names: Vec<String>,
        root: usize,
        null: usize,
        edges: [Vec<(usize, usize)>; 2],
    ) -> Result<Graph, GraphError> {
        let n = names.len();
        if root == null {
            return Err(GraphError::RootIsNull);
        }
        if root >= n || null >= n {
            return Err(GraphError::UnknownNode(format!("#{}", root.max(null))));
        }
        for (i, name) in names.iter().enumerate() {
            if i != root && name == ROOT || i != null && name == NULL {
                return Err(GraphError::ReservedName(name.clone()));
            }
        }
        names[root] = ROOT.to_string();
        names[null] = NULL.to_string();

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| names[a].cmp(&names[b]));
        for w in order.windows(2) {
            if names[w[0]] == names[w[1]] {
                return Err(GraphError::DuplicateNode(names[w[0]].clone()));
            }
        }
        let mut remap = vec![0usize; n];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }

        let mut succ = [vec![FixedBitSet::with_capacity(n); n], vec![FixedBitSet::with_capacity(n); n]];
        let mut pred = succ.clone();
        let new_null = remap[null];
        for rel in Rel::ALL {
            let r = rel.index();
            for &(a, b) in &edges[r] {
                if a >= n || b >= n {
                    return Err(GraphError::UnknownNode(format!("#{}", a.max(b))));
                }
                let (a, b) = (remap[a], remap[b]);
                if a == new_null && b != new_null {
                    return Err(GraphError::NullEdge {
                        rel: rel.label(),
                        target: names[order[b]].clone(),
                    });
                }
                succ[r][a].insert(b);
                pred[r][b].insert(a);
            }
            succ[r][new_null].insert(new_null);
            pred[r][new_null].insert(new_null);
        }

        let mut sorted_names = Vec::with_capacity(n);
        for &old in &order {
            sorted_names.push(std::mem::take(&mut names[old]));
        }
        let index = sorted_names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), NodeId::from(i)))
            .collect();
        Ok(Graph {
            names: sorted_names,
            index,
            root: NodeId::from(remap[root]),
            null: NodeId::from(new_null),
            succ,
            pred,
        })
    }

    /// Builds a graph from named edges over the implicit `root`/`null`.
    /// Nodes mentioned only in edges are created on the fly.
    pub fn from_named_edges<S: AsRef<str>>(
        nodes: &[S],
        s1: &[(S, S)],
        s2: &[(S, S)],
    ) -> Result<Graph, GraphError> {
        let mut b = GraphBuilder::new();
        for n in nodes {
            b.node(n.as_ref());
        }
        for (x, y) in s1 {
            b.edge(Rel::S1, x.as_ref(), y.as_ref());
        }
        for (x, y) in s2 {
            b.edge(Rel::S2, x.as_ref(), y.as_ref());
        }
        b.build()
    }

    /// The graph with only `root` and `null`, both root edges into null.
    pub fn minimal_heap() -> Graph {
        let mut b = GraphBuilder::new();
        b.edge(Rel::S1, ROOT, NULL).edge(Rel::S2, ROOT, NULL);
        b.build().expect("minimal heap is valid")
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    /// Number of nodes other than root and null.
    pub fn non_special_count(&self) -> usize {
        self.names.len() - 2
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.names.len()).map(NodeId::from)
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn null(&self) -> NodeId {
        self.null
    }

    pub fn is_special(&self, x: NodeId) -> bool {
        x == self.root || x == self.null
    }

    pub fn name(&self, x: NodeId) -> &str {
        &self.names[x.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id(&self, name: &str) -> Option<NodeId> {
        self.index.get(name).copied()
    }

    pub fn contains(&self, x: NodeId) -> bool {
        x.index() < self.names.len()
    }

    pub fn succ_set(&self, rel: Rel, x: NodeId) -> &FixedBitSet {
        &self.succ[rel.index()][x.index()]
    }

    pub fn pred_set(&self, rel: Rel, x: NodeId) -> &FixedBitSet {
        &self.pred[rel.index()][x.index()]
    }

    pub fn succ(&self, rel: Rel, x: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.succ[rel.index()][x.index()].ones().map(NodeId::from)
    }

    pub fn pred(&self, rel: Rel, x: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.pred[rel.index()][x.index()].ones().map(NodeId::from)
    }

    /// The least successor, if any. Used where a deterministic pick is needed.
    pub fn first_succ(&self, rel: Rel, x: NodeId) -> Option<NodeId> {
        self.succ(rel, x).next()
    }

    pub fn has_edge(&self, rel: Rel, x: NodeId, y: NodeId) -> bool {
        self.succ[rel.index()][x.index()].contains(y.index())
    }

    /// All edges of `rel` in source-then-target order, null self-loop included.
    pub fn edges(&self, rel: Rel) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes()
            .flat_map(move |x| self.succ(rel, x).map(move |y| (x, y)))
    }

    /// Edge list in positional form, for rebuilding with [`Graph::assemble`].
    pub fn index_edges(&self) -> [Vec<(usize, usize)>; 2] {
        Rel::ALL.map(|rel| {
            self.edges(rel)
                .map(|(a, b)| (a.index(), b.index()))
                .collect()
        })
    }

    /// Edge count excluding the null self-loop.
    pub fn edge_count(&self, rel: Rel) -> usize {
        self.edges(rel).filter(|&(a, _)| a != self.null).count()
    }

    /// Nodes reachable from `from` along either relation (including `from`).
    pub fn reachable_from(&self, from: NodeId) -> FixedBitSet {
        let mut seen = FixedBitSet::with_capacity(self.node_count());
        let mut queue = VecDeque::from([from]);
        seen.insert(from.index());
        while let Some(x) = queue.pop_front() {
            for rel in Rel::ALL {
                for y in self.succ(rel, x) {
                    if !seen.put(y.index()) {
                        queue.push_back(y);
                    }
                }
            }
        }
        seen
    }

    /// The subgraph induced by `keep`. Root and null must be kept.
    pub fn induced(&self, keep: &FixedBitSet) -> Graph {
        debug_assert!(keep.contains(self.root.index()) && keep.contains(self.null.index()));
        let mut remap = vec![usize::MAX; self.node_count()];
        let mut names = Vec::new();
        for i in keep.ones() {
            remap[i] = names.len();
            names.push(self.names[i].clone());
        }
        let edges = Rel::ALL.map(|rel| {
            self.edges(rel)
                .filter(|(a, b)| keep.contains(a.index()) && keep.contains(b.index()))
                .map(|(a, b)| (remap[a.index()], remap[b.index()]))
                .collect()
        });
        Graph::assemble(names, remap[self.root.index()], remap[self.null.index()], edges)
            .expect("induced subgraph of a valid graph is valid")
    }

    /// `|{y | exists i. <y,x> in s_i}|`: distinct sources, counted once
    /// even when both relations contribute. With `exclude_null_loops`,
    /// null does not count as its own source.
    pub fn in_degree(&self, x: NodeId, exclude_null_loops: bool) -> Result<usize, GraphError> {
        if !self.contains(x) {
            return Err(GraphError::NotInGraph(format!("#{}", x.0)));
        }
        let mut sources = self.pred[0][x.index()].clone();
        sources.union_with(&self.pred[1][x.index()]);
        if exclude_null_loops && x == self.null {
            sources.set(self.null.index(), false);
        }
        Ok(sources.count_ones(..))
    }

    pub fn is_heap(&self) -> bool {
        let total = self.nodes().all(|x| {
            Rel::ALL
                .iter()
                .all(|&rel| self.succ_set(rel, x).count_ones(..) == 1)
        });
        if !total {
            return false;
        }
        let reach = self.reachable_from(self.root);
        self.nodes()
            .all(|x| x == self.null || reach.contains(x.index()))
    }

    pub fn is_orable(&self) -> bool {
        let s2 = self.succ_set(Rel::S2, self.root);
        s2.count_ones(..) == 1 && s2.contains(self.null.index())
    }

    /// Every node reachable from root, no directed cycle other than the
    /// null self-loops, and in-degree at most one for every node except null.
    pub fn is_tree(&self) -> bool {
        let reach = self.reachable_from(self.root);
        if reach.count_ones(..) != self.node_count() {
            return false;
        }
        let indeg_ok = self
            .nodes()
            .filter(|&x| x != self.null)
            .all(|x| self.in_degree(x, true).map(|d| d <= 1).unwrap_or(false));
        indeg_ok && self.is_acyclic_except_null()
    }

    /// A tree in which every node has at most one non-null outgoing edge.
    pub fn is_list(&self) -> bool {
        self.is_tree()
            && self.nodes().all(|x| {
                let non_null: usize = Rel::ALL
                    .iter()
                    .map(|&rel| self.succ(rel, x).filter(|&y| y != self.null).count())
                    .sum();
                non_null <= 1
            })
    }

    fn is_acyclic_except_null(&self) -> bool {
        // Kahn's algorithm on the graph with the null node removed; null is
        // a sink apart from its self-loops.
        let n = self.node_count();
        let mut indeg = vec![0usize; n];
        for rel in Rel::ALL {
            for (a, b) in self.edges(rel) {
                if a != self.null && b != self.null {
                    indeg[b.index()] += 1;
                }
            }
        }
        let mut queue: VecDeque<NodeId> = self
            .nodes()
            .filter(|&x| x != self.null && indeg[x.index()] == 0)
            .collect();
        let mut seen = 0;
        while let Some(x) = queue.pop_front() {
            seen += 1;
            for rel in Rel::ALL {
                for y in self.succ(rel, x) {
                    if y != self.null {
                        indeg[y.index()] -= 1;
                        if indeg[y.index()] == 0 {
                            queue.push_back(y);
                        }
                    }
                }
            }
        }
        seen == n - 1
    }

    pub fn classify(&self) -> Classification {
        let is_tree = self.is_tree();
        Classification {
            is_heap: self.is_heap(),
            is_tree,
            is_list: is_tree && self.is_list(),
            is_orable: self.is_orable(),
        }
    }

    /// Successor of `x` in a heap. Panics if the relation is not a function at `x`.
    pub fn heap_succ(&self, rel: Rel, x: NodeId) -> NodeId {
        let set = self.succ_set(rel, x);
        debug_assert_eq!(set.count_ones(..), 1, "not a function at {}", self.name(x));
        NodeId::from(set.minimum().expect("heap relations are total"))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph {{ {} }}", crate::format::serialize(self).replace('\n', "; "))
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::format::serialize(self))
    }
}

/// Incremental construction by name over the implicit `root` and `null`.
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: [Vec<(usize, usize)>; 2],
}

impl Default for GraphBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl GraphBuilder {
    pub fn new() -> Self {
        let mut b = GraphBuilder {
            names: Vec::new(),
            index: HashMap::new(),
            edges: [Vec::new(), Vec::new()],
        };
        b.intern(ROOT);
        b.intern(NULL);
        b
    }

    fn intern(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        i
    }

    pub fn has_node(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn node(&mut self, name: &str) -> &mut Self {
        self.intern(name);
        self
    }

    pub fn edge(&mut self, rel: Rel, from: &str, to: &str) -> &mut Self {
        let a = self.intern(from);
        let b = self.intern(to);
        self.edges[rel.index()].push((a, b));
        self
    }

    pub fn build(&self) -> Result<Graph, GraphError> {
        Graph::assemble(self.names.clone(), 0, 1, self.edges.clone())
    }
}
