//! Satisfiability of a constraint graph over the class of heaps.
//!
//! Cleanup repeatedly drops nodes that no heap node can map to: nodes
//! unreachable from root, and nodes lacking an `s1` or `s2` successor. If
//! anything survives, marking from root while keeping one successor per
//! relation yields a heap that is a subgraph of the input, hence a model.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, NodeId, Rel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RemovalReason {
    Unreachable,
    MissingS1,
    MissingS2,
}

impl std::fmt::Display for RemovalReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RemovalReason::Unreachable => "unreachable",
            RemovalReason::MissingS1 => "missing-s1",
            RemovalReason::MissingS2 => "missing-s2",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Removal {
    pub node: String,
    pub reason: RemovalReason,
}

/// Cleanup outcome. `graph` is `None` when every node was removed.
#[derive(Debug, Clone)]
pub struct Cleanup {
    pub graph: Option<Graph>,
    pub trace: Vec<Removal>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("node `{0}` has no {1} successor; run cleanup first")]
    MissingSuccessor(String, Rel),
    #[error("node `{0}` is unreachable from root; run cleanup first")]
    Unreachable(String),
}

#[derive(Debug, Clone)]
pub struct SatResult {
    pub satisfiable: bool,
    pub witness: Option<Graph>,
    pub cleanup_trace: Vec<Removal>,
}

/// Runs the two removal rules to a fixpoint.
///
/// Null is exempt from the reachability rule while root is present: no
/// node other than null may map to null, and null always maps there, so
/// dropping it cannot be justified by the absence of preimages.
pub fn graph_cleanup(g: &Graph) -> Cleanup {
    let n = g.node_count();
    let mut alive = FixedBitSet::with_capacity(n);
    alive.insert_range(..);
    let mut trace = Vec::new();
    let mut remove = |alive: &mut FixedBitSet, x: usize, reason| {
        alive.set(x, false);
        trace.push(Removal {
            node: g.name(NodeId::from(x)).to_string(),
            reason,
        });
    };
    loop {
        let mut changed = false;

        let reach = if alive.contains(g.root().index()) {
            reachable_within(g, &alive)
        } else {
            FixedBitSet::with_capacity(n)
        };
        let root_alive = alive.contains(g.root().index());
        let unreachable: Vec<usize> = alive
            .ones()
            .filter(|&x| !reach.contains(x) && !(root_alive && x == g.null().index()))
            .collect();
        for x in unreachable {
            remove(&mut alive, x, RemovalReason::Unreachable);
            changed = true;
        }

        for x in 0..n {
            if !alive.contains(x) {
                continue;
            }
            let id = NodeId::from(x);
            if g.succ_set(Rel::S1, id).is_disjoint(&alive) {
                remove(&mut alive, x, RemovalReason::MissingS1);
                changed = true;
            } else if g.succ_set(Rel::S2, id).is_disjoint(&alive) {
                remove(&mut alive, x, RemovalReason::MissingS2);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let graph = alive.contains(g.root().index()).then(|| g.induced(&alive));
    Cleanup { graph, trace }
}

fn reachable_within(g: &Graph, alive: &FixedBitSet) -> FixedBitSet {
    let mut seen = FixedBitSet::with_capacity(g.node_count());
    let mut queue = VecDeque::from([g.root()]);
    seen.insert(g.root().index());
    while let Some(x) = queue.pop_front() {
        for rel in Rel::ALL {
            for y in g.succ(rel, x) {
                if alive.contains(y.index()) && !seen.put(y.index()) {
                    queue.push_back(y);
                }
            }
        }
    }
    seen
}

/// Marks from root keeping the least successor of each marked node per
/// relation, and returns the subgraph of marked nodes and selected edges.
pub fn extract_heap(g: &Graph) -> Result<Graph, SatError> {
    let reach = g.reachable_from(g.root());
    for x in g.nodes() {
        for rel in Rel::ALL {
            if g.succ_set(rel, x).is_clear() {
                return Err(SatError::MissingSuccessor(g.name(x).to_string(), rel));
            }
        }
        if x != g.null() && !reach.contains(x.index()) {
            return Err(SatError::Unreachable(g.name(x).to_string()));
        }
    }

    let n = g.node_count();
    let mut marked = FixedBitSet::with_capacity(n);
    let mut selected: [Vec<(usize, usize)>; 2] = [Vec::new(), Vec::new()];
    let mut stack = vec![g.root()];
    while let Some(x) = stack.pop() {
        if marked.put(x.index()) {
            continue;
        }
        let y = g.first_succ(Rel::S1, x).expect("checked above");
        let z = g.first_succ(Rel::S2, x).expect("checked above");
        selected[0].push((x.index(), y.index()));
        selected[1].push((x.index(), z.index()));
        // push z first so the s1 branch is explored first, as in a
        // recursive mark
        stack.push(z);
        stack.push(y);
    }
    marked.insert(g.null().index());

    let mut remap = vec![usize::MAX; n];
    let mut names = Vec::new();
    for i in marked.ones() {
        remap[i] = names.len();
        names.push(g.name(NodeId::from(i)).to_string());
    }
    let edges = selected.map(|list| {
        list.into_iter()
            .map(|(a, b)| (remap[a], remap[b]))
            .collect()
    });
    Ok(
        Graph::assemble(names, remap[g.root().index()], remap[g.null().index()], edges)
            .expect("subgraph of a valid graph"),
    )
}

pub fn sat_over_heaps(g: &Graph) -> SatResult {
    let Cleanup { graph, trace } = graph_cleanup(g);
    match graph {
        None => SatResult {
            satisfiable: false,
            witness: None,
            cleanup_trace: trace,
        },
        Some(cleaned) => {
            let witness = extract_heap(&cleaned).expect("cleanup output satisfies the mark precondition");
            SatResult {
                satisfiable: true,
                witness: Some(witness),
                cleanup_trace: trace,
            }
        }
    }
}
