//! Post correspondence instances, the graph `G` whose corresponder-graph
//! models encode their solutions, and witness builders in both directions.
//!
//! Node names of the reduction graph: `c{i}` for the pair nodes,
//! `a{i}_{j}_{α}` for position `j` of `v_i`'s node list with flag `α`, and
//! `b{i}_{j}_{α}` likewise for `w_i`.

use std::collections::VecDeque;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::families::{gen_cg, CorresponderParams};
use crate::graph::{Graph, GraphBuilder, NodeId, Rel, NULL, ROOT};
use crate::hom::{check_hom, find_hom, HomError, Homomorphism};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PcpError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("an instance needs at least one pair")]
    NoPairs,
    #[error("pair {0} has an empty word")]
    EmptyWord(usize),
    #[error("index {index} is out of range for {pairs} pairs")]
    IndexOutOfRange { index: usize, pairs: usize },
    #[error("a solution needs at least one index")]
    EmptySolution,
    #[error("the concatenations differ: `{top}` vs `{bottom}`")]
    NotASolution { top: String, bottom: String },
    #[error("malformed witness: {0}")]
    MalformedWitness(String),
    #[error(transparent)]
    Hom(#[from] HomError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PcpInstance {
    pairs: Vec<(Vec<char>, Vec<char>)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PcpSolution {
    pub indices: Vec<usize>,
}

impl fmt::Display for PcpSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl PcpInstance {
    pub fn new<S: AsRef<str>>(pairs: &[(S, S)]) -> Result<Self, PcpError> {
        if pairs.is_empty() {
            return Err(PcpError::NoPairs);
        }
        let pairs: Vec<(Vec<char>, Vec<char>)> = pairs
            .iter()
            .map(|(v, w)| (v.as_ref().chars().collect(), w.as_ref().chars().collect()))
            .collect();
        if let Some(i) = pairs.iter().position(|(v, w)| v.is_empty() || w.is_empty()) {
            return Err(PcpError::EmptyWord(i));
        }
        Ok(PcpInstance { pairs })
    }

    /// Reads `pair <v> <w>` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, PcpError> {
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["pair", v, w] => pairs.push((v.to_string(), w.to_string())),
                _ => {
                    return Err(PcpError::Syntax {
                        line: i + 1,
                        msg: format!("expected `pair <v> <w>`, found `{line}`"),
                    })
                }
            }
        }
        PcpInstance::new(&pairs)
    }

    pub fn render(&self) -> String {
        self.pairs
            .iter()
            .map(|(v, w)| {
                format!(
                    "pair {} {}\n",
                    v.iter().collect::<String>(),
                    w.iter().collect::<String>()
                )
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn top(&self, i: usize) -> &[char] {
        &self.pairs[i].0
    }

    pub fn bottom(&self, i: usize) -> &[char] {
        &self.pairs[i].1
    }

    /// The instance the reduction is built from: single-pair instances get
    /// the pair duplicated, since the construction assumes two pairs.
    pub fn padded(&self) -> PcpInstance {
        let mut pairs = self.pairs.clone();
        if pairs.len() == 1 {
            pairs.push(pairs[0].clone());
        }
        PcpInstance { pairs }
    }

    /// Both concatenations of an index sequence.
    pub fn concat(&self, indices: &[usize]) -> Result<(String, String), PcpError> {
        let mut top = String::new();
        let mut bottom = String::new();
        for &i in indices {
            if i >= self.len() {
                return Err(PcpError::IndexOutOfRange {
                    index: i,
                    pairs: self.len(),
                });
            }
            top.extend(self.top(i));
            bottom.extend(self.bottom(i));
        }
        Ok((top, bottom))
    }

    pub fn check_solution(&self, sol: &PcpSolution) -> Result<(), PcpError> {
        if sol.indices.is_empty() {
            return Err(PcpError::EmptySolution);
        }
        let (top, bottom) = self.concat(&sol.indices)?;
        if top != bottom {
            return Err(PcpError::NotASolution { top, bottom });
        }
        Ok(())
    }
}

/// Shortest solution with at most `max_len` indices, ties broken
/// lexicographically. Sequences whose concatenations already disagree are
/// pruned.
pub fn brute_solve_pcp(inst: &PcpInstance, max_len: usize) -> Option<PcpSolution> {
    // (indices, unmatched suffix, true if the suffix belongs to the top row)
    let mut queue: VecDeque<(Vec<usize>, Vec<char>, bool)> = VecDeque::new();
    queue.push_back((Vec::new(), Vec::new(), true));
    while let Some((seq, rest, top_ahead)) = queue.pop_front() {
        if seq.len() == max_len {
            continue;
        }
        for i in 0..inst.len() {
            let (mut ahead, mut behind) = if top_ahead {
                (rest.clone(), Vec::new())
            } else {
                (Vec::new(), rest.clone())
            };
            ahead.extend_from_slice(inst.top(i));
            behind.extend_from_slice(inst.bottom(i));
            // ahead is the top row's surplus, behind the bottom row's
            let (long, short, top_long) = if ahead.len() >= behind.len() {
                (ahead, behind, true)
            } else {
                (behind, ahead, false)
            };
            if !long.starts_with(&short) {
                continue;
            }
            let mut next = seq.clone();
            next.push(i);
            let surplus = long[short.len()..].to_vec();
            if surplus.is_empty() {
                return Some(PcpSolution { indices: next });
            }
            queue.push_back((next, surplus, top_long));
        }
    }
    None
}

fn c(i: usize) -> String {
    format!("c{i}")
}

fn a(i: usize, j: usize, alpha: usize) -> String {
    format!("a{i}_{j}_{alpha}")
}

fn b(i: usize, j: usize, alpha: usize) -> String {
    format!("b{i}_{j}_{alpha}")
}

/// The reduction graph for the (padded) instance.
pub fn build_reduction(inst: &PcpInstance) -> Graph {
    let inst = inst.padded();
    let m = inst.len();
    let p: Vec<usize> = (0..m).map(|i| inst.top(i).len()).collect();
    let q: Vec<usize> = (0..m).map(|i| inst.bottom(i).len()).collect();
    let mut g = GraphBuilder::new();
    for i in 0..2 * m {
        g.node(&c(i));
    }
    for i in 0..m {
        for j in 0..2 * p[i] {
            g.node(&a(i, j, 0));
        }
        for j in 0..2 * q[i] {
            g.node(&b(i, j, 0));
        }
        for j in 0..q[i] {
            g.node(&b(i, 2 * j, 1));
        }
        for j in 0..p[i] {
            g.node(&a(i, 2 * j + 1, 1));
        }
    }

    let s1 = Rel::S1;
    for i in 0..m {
        g.edge(s1, ROOT, &c(2 * i));
        g.edge(s1, &c(2 * i), &c(2 * i + 1));
        for j in 0..m {
            g.edge(s1, &c(2 * i + 1), &c(2 * j));
        }
        g.edge(s1, &c(2 * i + 1), NULL);
    }
    for i in 0..m {
        for alpha in 0..2 {
            for j in 0..p[i] {
                g.edge(s1, &a(i, 2 * j, 0), &a(i, 2 * j + 1, alpha));
            }
            for j in 0..p[i] - 1 {
                g.edge(s1, &a(i, 2 * j + 1, alpha), &a(i, 2 * j + 2, 0));
            }
            for k in 0..m {
                g.edge(s1, &a(i, 2 * p[i] - 1, alpha), &a(k, 0, 0));
            }
            g.edge(s1, &a(i, 2 * p[i] - 1, alpha), NULL);

            for j in 0..q[i] {
                g.edge(s1, &b(i, 2 * j, alpha), &b(i, 2 * j + 1, 0));
            }
            for j in 0..q[i] - 1 {
                g.edge(s1, &b(i, 2 * j + 1, 0), &b(i, 2 * j + 2, alpha));
            }
            for k in 0..m {
                g.edge(s1, &b(i, 2 * q[i] - 1, 0), &b(k, 0, alpha));
            }
        }
        g.edge(s1, &b(i, 2 * q[i] - 1, 0), NULL);
    }

    let s2 = Rel::S2;
    g.edge(s2, ROOT, NULL);
    for i in 0..m {
        g.edge(s2, &c(2 * i), &a(i, 0, 0));
        g.edge(s2, &c(2 * i + 1), &b(i, 1, 0));
    }
    for i in 0..m {
        for k in 0..m {
            for l in 0..q[k] {
                if inst.top(i)[0] == inst.bottom(k)[l] {
                    g.edge(s2, &a(i, 0, 0), &b(k, 2 * l, 1));
                }
                for j in 1..p[i] {
                    if inst.top(i)[j] == inst.bottom(k)[l] {
                        g.edge(s2, &a(i, 2 * j, 0), &b(k, 2 * l, 0));
                    }
                }
            }
        }
    }
    for k in 0..m {
        for l in 0..q[k] {
            g.edge(s2, &b(k, 2 * l, 0), NULL);
            g.edge(s2, &b(k, 2 * l, 1), ROOT);
        }
    }
    for k in 0..m {
        for i in 0..m {
            for j in 0..p[i] {
                // first position of w_k; the free index reads as l = 0
                if inst.top(i)[j] == inst.bottom(k)[0] {
                    g.edge(s2, &b(k, 1, 0), &a(i, 2 * j + 1, 1));
                }
                for l in 1..q[k] {
                    if inst.top(i)[j] == inst.bottom(k)[l] {
                        g.edge(s2, &b(k, 2 * l + 1, 0), &a(i, 2 * j + 1, 0));
                    }
                }
            }
        }
    }
    for i in 0..m {
        for j in 0..p[i] {
            g.edge(s2, &a(i, 2 * j + 1, 0), NULL);
            g.edge(s2, &a(i, 2 * j + 1, 1), ROOT);
        }
    }
    g.build().expect("reduction graph is valid")
}

/// Corresponder graph parameters and homomorphism into the reduction graph
/// that encode a solution.
///
/// The mapping follows the construction in the correctness argument, with
/// the word index taken from the solution (`t_i` for the `i`-th block) and
/// the L-spine split at the `l` offsets:
/// `U_{2f} ↦ a_{t_i}^{2(f-u_i),0}`, `U_{2f+1} ↦ a_{t_i}^{2(f-u_i)+1,[f∈l]}`
/// with `i` the block of `f` among the `u` offsets, and
/// `L_{2f+1} ↦ b_{t_i}^{2(f-l_i)+1,0}`, `L_{2f} ↦ b_{t_i}^{2(f-l_i),[f∈u]}`
/// with `i` the block of `f` among the `l` offsets.
pub fn witness_from_solution(
    inst: &PcpInstance,
    sol: &PcpSolution,
) -> Result<(CorresponderParams, Graph, Homomorphism), PcpError> {
    inst.check_solution(sol)?;
    let padded = inst.padded();
    // corresponder graphs need at least two blocks
    let t: Vec<usize> = if sol.indices.len() == 1 {
        vec![sol.indices[0]; 2]
    } else {
        sol.indices.clone()
    };
    let k = t.len();
    let n: usize = t.iter().map(|&i| padded.top(i).len()).sum();
    let prefix = |word: &dyn Fn(usize) -> usize| -> Vec<usize> {
        let mut acc = 0;
        let mut out = vec![0];
        for &i in &t[..k - 1] {
            acc += word(i);
            out.push(acc);
        }
        out
    };
    let us = prefix(&|i| padded.top(i).len());
    let ls = prefix(&|i| padded.bottom(i).len());
    let params = CorresponderParams::new(n, k, us[1..].to_vec(), ls[1..].to_vec())
        .map_err(|e| PcpError::MalformedWitness(e.to_string()))?;
    let cg = gen_cg(&params);
    let target = build_reduction(inst);

    let block = |offsets: &[usize], f: usize| offsets.iter().rposition(|&o| o <= f).unwrap();
    let mut pairs: Vec<(String, String)> = vec![
        (ROOT.into(), ROOT.into()),
        (NULL.into(), NULL.into()),
    ];
    for (j, &tj) in t.iter().enumerate() {
        pairs.push((format!("C{}", 2 * j), c(2 * tj)));
        pairs.push((format!("C{}", 2 * j + 1), c(2 * tj + 1)));
    }
    for f in 0..n {
        let i = block(&us, f);
        let alpha_l = ls.contains(&f) as usize;
        pairs.push((format!("U{}", 2 * f), a(t[i], 2 * (f - us[i]), 0)));
        pairs.push((format!("U{}", 2 * f + 1), a(t[i], 2 * (f - us[i]) + 1, alpha_l)));
        let i = block(&ls, f);
        let alpha_u = us.contains(&f) as usize;
        pairs.push((format!("L{}", 2 * f), b(t[i], 2 * (f - ls[i]), alpha_u)));
        pairs.push((format!("L{}", 2 * f + 1), b(t[i], 2 * (f - ls[i]) + 1, 0)));
    }
    let h = Homomorphism::from_names(&cg, &target, &pairs)?;
    if !check_hom(&cg, &target, &h)? {
        return Err(PcpError::MalformedWitness(
            "constructed map is not a homomorphism".into(),
        ));
    }
    Ok((params, cg, h))
}

/// Reads the solution off the images of the even C-nodes and re-verifies it
/// against the instance. Indices introduced by padding are folded back.
pub fn solution_from_witness(
    inst: &PcpInstance,
    cg: &Graph,
    h: &Homomorphism,
) -> Result<PcpSolution, PcpError> {
    let target = build_reduction(inst);
    if !check_hom(cg, &target, h)? {
        return Err(PcpError::MalformedWitness("map is not a homomorphism".into()));
    }
    let mut indices = Vec::new();
    for j in 0.. {
        let Some(x) = cg.id(&format!("C{}", 2 * j)) else {
            break;
        };
        let image = target.name(h.image(x));
        let i = image
            .strip_prefix('c')
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|i| i % 2 == 0)
            .ok_or_else(|| {
                PcpError::MalformedWitness(format!("C{} maps to `{image}`", 2 * j))
            })?;
        indices.push((i / 2) % inst.len());
    }
    let sol = PcpSolution { indices };
    inst.check_solution(&sol)?;
    Ok(sol)
}

/// First corresponder graph, in ascending `(n, k, u, l)` order, that maps
/// into the reduction graph.
pub fn bounded_cg_search(
    inst: &PcpInstance,
    n_max: usize,
    k_max: usize,
) -> Option<(CorresponderParams, Homomorphism)> {
    let target = build_reduction(inst);
    CorresponderParams::all(n_max, k_max)
        .par_iter()
        .find_map_first(|p| find_hom(&gen_cg(p), &target).map(|h| (p.clone(), h)))
}

/// Whether `x` is one of the pair nodes `c{i}`.
pub fn is_c_node(g: &Graph, x: NodeId) -> bool {
    g.name(x)
        .strip_prefix('c')
        .is_some_and(|s| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()))
}
