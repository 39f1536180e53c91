//! Generators for grids, corresponder graphs and lists, and a bounded
//! enumerator of heaps.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphBuilder, Rel, NULL, ROOT};
use crate::paths::regex::parse_word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("grid dimensions must be at least 1 (got {0}x{1})")]
    GridSize(usize, usize),
    #[error("corresponder graphs need n >= 2 and k >= 2 (got n={n}, k={k})")]
    TooSmall { n: usize, k: usize },
    #[error("expected {expected} split points in `{which}`, got {got}")]
    SplitCount {
        which: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("split points in `{which}` must satisfy 0 < {which}_1 < ... < n (got {values:?})")]
    SplitOrder { which: &'static str, values: Vec<usize> },
    #[error("`{0}` is not a word over {{1,2}}")]
    BadWord(String),
}

/// Parameters `(n, k, u_1..u_{k-1}, l_1..l_{k-1})` of a corresponder graph.
/// `u_0 = l_0 = 0` are implicit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CorresponderParams {
    pub n: usize,
    pub k: usize,
    pub u: Vec<usize>,
    pub l: Vec<usize>,
}

impl CorresponderParams {
    pub fn new(n: usize, k: usize, u: Vec<usize>, l: Vec<usize>) -> Result<Self, FamilyError> {
        if n < 2 || k < 2 {
            return Err(FamilyError::TooSmall { n, k });
        }
        for (which, v) in [("u", &u), ("l", &l)] {
            if v.len() != k - 1 {
                return Err(FamilyError::SplitCount {
                    which,
                    expected: k - 1,
                    got: v.len(),
                });
            }
            let ascending = std::iter::once(&0)
                .chain(v.iter())
                .zip(v.iter().chain(std::iter::once(&n)))
                .all(|(a, b)| a < b);
            if !ascending {
                return Err(FamilyError::SplitOrder {
                    which,
                    values: v.clone(),
                });
            }
        }
        Ok(CorresponderParams { n, k, u, l })
    }

    /// `u_0..u_{k-1}` with the implicit `u_0 = 0`.
    pub fn u_full(&self) -> Vec<usize> {
        std::iter::once(0).chain(self.u.iter().copied()).collect()
    }

    /// `l_0..l_{k-1}` with the implicit `l_0 = 0`.
    pub fn l_full(&self) -> Vec<usize> {
        std::iter::once(0).chain(self.l.iter().copied()).collect()
    }

    /// Every parameter tuple with `n <= n_max`, `k <= k_max`, ordered by
    /// ascending `n`, then `k`, then `(u, l)` lexicographically.
    pub fn all(n_max: usize, k_max: usize) -> Vec<CorresponderParams> {
        let mut out = Vec::new();
        for n in 2..=n_max {
            for k in 2..=k_max.min(n) {
                let splits = combinations(1, n - 1, k - 1);
                for u in &splits {
                    for l in &splits {
                        out.push(CorresponderParams {
                            n,
                            k,
                            u: u.clone(),
                            l: l.clone(),
                        });
                    }
                }
            }
        }
        out
    }
}

impl std::fmt::Display for CorresponderParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let all: Vec<String> = [self.n, self.k]
            .iter()
            .chain(&self.u)
            .chain(&self.l)
            .map(|x| x.to_string())
            .collect();
        write!(f, "CG({})", all.join(","))
    }
}

/// Ascending `r`-subsets of `lo..=hi` in lexicographic order.
fn combinations(lo: usize, hi: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, hi: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for x in start..=hi {
            if hi + 1 - x < r - cur.len() {
                break;
            }
            cur.push(x);
            go(x + 1, hi, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if r == 0 {
        out.push(Vec::new());
    } else if hi >= lo {
        go(lo, hi, r, &mut Vec::new(), &mut out);
    }
    out
}

/// Name of grid cell `(i, j)`; cell `(1, 1)` is the root.
pub fn grid_cell(i: usize, j: usize) -> String {
    if (i, j) == (1, 1) {
        ROOT.to_string()
    } else {
        format!("g{i}_{j}")
    }
}

/// The `m × n` grid: `s1` steps right, `s2` steps down, the last column
/// and last row point to null, and the top-left cell is the root.
pub fn gen_grid(m: usize, n: usize) -> Result<Graph, FamilyError> {
    if m == 0 || n == 0 {
        return Err(FamilyError::GridSize(m, n));
    }
    let mut b = GraphBuilder::new();
    for i in 1..=m {
        for j in 1..=n {
            let here = grid_cell(i, j);
            let right = if j < n { grid_cell(i, j + 1) } else { NULL.to_string() };
            let down = if i < m { grid_cell(i + 1, j) } else { NULL.to_string() };
            b.edge(Rel::S1, &here, &right).edge(Rel::S2, &here, &down);
        }
    }
    Ok(b.build().expect("grid is valid"))
}

pub fn gen_cg(p: &CorresponderParams) -> Graph {
    let (n, k) = (p.n, p.k);
    let c = |i: usize| format!("C{i}");
    let u = |i: usize| format!("U{i}");
    let l = |i: usize| format!("L{i}");
    let us = p.u_full();
    let ls = p.l_full();
    let mut b = GraphBuilder::new();

    b.edge(Rel::S1, ROOT, &c(0));
    for i in 0..2 * k - 1 {
        b.edge(Rel::S1, &c(i), &c(i + 1));
    }
    b.edge(Rel::S1, &c(2 * k - 1), NULL);
    for i in 0..2 * n - 1 {
        b.edge(Rel::S1, &u(i), &u(i + 1));
        b.edge(Rel::S1, &l(i), &l(i + 1));
    }
    b.edge(Rel::S1, &u(2 * n - 1), NULL);
    b.edge(Rel::S1, &l(2 * n - 1), NULL);

    b.edge(Rel::S2, ROOT, NULL);
    for i in 0..k {
        b.edge(Rel::S2, &c(2 * i), &u(2 * us[i]));
        b.edge(Rel::S2, &c(2 * i + 1), &l(2 * ls[i] + 1));
    }
    for i in 0..n {
        b.edge(Rel::S2, &u(2 * i), &l(2 * i));
        b.edge(Rel::S2, &l(2 * i + 1), &u(2 * i + 1));
        let u_target = if ls.contains(&i) { ROOT } else { NULL };
        b.edge(Rel::S2, &u(2 * i + 1), u_target);
        let l_target = if us.contains(&i) { ROOT } else { NULL };
        b.edge(Rel::S2, &l(2 * i), l_target);
    }
    b.build().expect("corresponder graph is valid")
}

/// The list spelling `word`: root, then one node per further letter, the
/// last letter's edge into null, and every unused edge into null.
pub fn gen_list(word: &str) -> Result<Graph, FamilyError> {
    let letters = parse_word(word).ok_or_else(|| FamilyError::BadWord(word.to_string()))?;
    let mut b = GraphBuilder::new();
    if letters.is_empty() {
        b.edge(Rel::S1, ROOT, NULL).edge(Rel::S2, ROOT, NULL);
        return Ok(b.build().expect("minimal heap"));
    }
    let name = |i: usize| if i == 0 { ROOT.to_string() } else { format!("x{i}") };
    for (i, &rel) in letters.iter().enumerate() {
        let here = name(i);
        let next = if i + 1 == letters.len() {
            NULL.to_string()
        } else {
            name(i + 1)
        };
        for r in Rel::ALL {
            let target = if r == rel { next.as_str() } else { NULL };
            b.edge(r, &here, target);
        }
    }
    Ok(b.build().expect("list is valid"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeapEnumConfig {
    /// Upper bound on nodes other than root and null.
    pub max_nodes: usize,
    /// Yield one heap per isomorphism class.
    pub dedupe: bool,
}

/// Streams heaps in order of ascending size.
///
/// With `dedupe`, each isomorphism class appears once: a heap is generated
/// in the unique numbering given by a breadth-first traversal from root
/// (s1 before s2), so every edge targets null, an already numbered node, or
/// the next fresh one. Without `dedupe`, every labelled heap over the
/// node names `n1..nk` is produced.
///
/// Ordinary nodes are named `n1`, `n2`, ... in both modes.
pub fn enumerate_heaps(cfg: HeapEnumConfig) -> HeapEnumerator {
    HeapEnumerator {
        cfg,
        size: 0,
        current: SizeEnum::new(0, cfg.dedupe),
    }
}

pub struct HeapEnumerator {
    cfg: HeapEnumConfig,
    size: usize,
    current: SizeEnum,
}

impl Iterator for HeapEnumerator {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        loop {
            if let Some(g) = self.current.next() {
                return Some(g);
            }
            if self.size >= self.cfg.max_nodes {
                return None;
            }
            self.size += 1;
            self.current = SizeEnum::new(self.size, self.cfg.dedupe);
        }
    }
}

/// Heaps with exactly `m` ordinary nodes.
///
/// Slots are the `2(m+1)` edges of root and `n1..nm` in order
/// (node-major, s1 before s2). A slot value of 0 means null; value `v > 0`
/// means node `v-1`, where node 0 is root.
pub struct SizeEnum {
    m: usize,
    dedupe: bool,
    choices: Vec<usize>,
    /// canonical mode: number of numbered nodes after each slot
    created: Vec<usize>,
    started: bool,
    done: bool,
}

impl SizeEnum {
    pub fn new(m: usize, dedupe: bool) -> Self {
        SizeEnum {
            m,
            dedupe,
            choices: Vec::new(),
            created: Vec::new(),
            started: false,
            done: false,
        }
    }

    fn slots(&self) -> usize {
        2 * (self.m + 1)
    }

    fn created_before(&self, slot: usize) -> usize {
        if slot == 0 {
            1
        } else {
            self.created[slot - 1]
        }
    }

    fn max_value(&self, slot: usize) -> usize {
        if self.dedupe {
            let cr = self.created_before(slot);
            if cr < self.m + 1 {
                cr + 1
            } else {
                cr
            }
        } else {
            self.m + 1
        }
    }

    fn push(&mut self, v: usize) {
        let slot = self.choices.len();
        let cr = self.created_before(slot);
        let fresh = self.dedupe && v == cr + 1;
        self.choices.push(v);
        self.created.push(cr + fresh as usize);
    }

    fn pop(&mut self) -> Option<usize> {
        self.created.pop();
        self.choices.pop()
    }

    /// Replaces the deepest choice with its successor, popping exhausted
    /// slots. Returns false when the space is exhausted.
    fn bump(&mut self) -> bool {
        while let Some(v) = self.pop() {
            let slot = self.choices.len();
            if v < self.max_value(slot) {
                self.push(v + 1);
                return true;
            }
        }
        false
    }

    /// Fills remaining slots with the least value. Fails if a canonical
    /// slot belongs to a node not yet numbered.
    fn fill(&mut self) -> bool {
        while self.choices.len() < self.slots() {
            let slot = self.choices.len();
            if self.dedupe && slot / 2 >= self.created_before(slot) {
                return false;
            }
            self.push(0);
        }
        true
    }

    fn node_index(v: usize) -> usize {
        // names are [root, null, n1, ..., nm]
        match v {
            0 => 1,
            1 => 0,
            v => v,
        }
    }

    fn build(&self) -> Graph {
        let mut names = vec![ROOT.to_string(), NULL.to_string()];
        names.extend((1..=self.m).map(|i| format!("n{i}")));
        let mut edges: [Vec<(usize, usize)>; 2] = [Vec::new(), Vec::new()];
        for (slot, &v) in self.choices.iter().enumerate() {
            let node = slot / 2;
            let from = if node == 0 { 0 } else { node + 1 };
            edges[slot % 2].push((from, Self::node_index(v)));
        }
        Graph::assemble(names, 0, 1, edges).expect("enumerated heap is valid")
    }

    fn reachable(&self) -> bool {
        let n = self.m + 1;
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for r in 0..2 {
                let v = self.choices[2 * x + r];
                if v > 0 && !seen[v - 1] {
                    seen[v - 1] = true;
                    stack.push(v - 1);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

impl Iterator for SizeEnum {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        if self.done {
            return None;
        }
        let mut advance = self.started;
        self.started = true;
        loop {
            if advance && !self.bump() {
                self.done = true;
                return None;
            }
            advance = true;
            if !self.fill() {
                continue;
            }
            if self.dedupe || self.reachable() {
                return Some(self.build());
            }
        }
    }
}
