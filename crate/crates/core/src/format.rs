//! Line-oriented text format for graphs.
//!
//! ```text
//! # comment
//! node a
//! s1 root a
//! s1 a null
//! s2 root null
//! s2 a null
//! ```
//!
//! `root` and `null` always exist. Null self-loops are implicit and never
//! written. If a file declares any `node` lines, every non-special edge
//! endpoint must be declared; otherwise endpoints are created on first use.
//! [`serialize`] output is canonical: declarations sorted by name, then
//! `s1` edges, then `s2` edges, each sorted by (source, target).

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Graph, GraphBuilder, GraphError, Rel, NULL, ROOT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: duplicate node declaration `{name}`")]
    DuplicateNode { line: usize, name: String },
    #[error("line {line}: unknown node `{name}` in edge")]
    UnknownNode { line: usize, name: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub fn parse(text: &str) -> Result<Graph, ParseError> {
    struct Edge<'a> {
        line: usize,
        rel: Rel,
        from: &'a str,
        to: &'a str,
    }
    let mut declared: Vec<(usize, &str)> = Vec::new();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = strip_comment(raw);
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            ["node", id] => declared.push((line, id)),
            [kw @ ("s1" | "s2"), from, to] => edges.push(Edge {
                line,
                rel: if *kw == "s1" { Rel::S1 } else { Rel::S2 },
                from,
                to,
            }),
            [kw, ..] => {
                let msg = match *kw {
                    "node" => "expected `node <id>`".to_string(),
                    "s1" | "s2" => format!("expected `{kw} <from> <to>`"),
                    other => format!("unknown directive `{other}`"),
                };
                return Err(ParseError::Syntax { line, msg });
            }
        }
    }

    let mut b = GraphBuilder::new();
    for &(line, name) in &declared {
        if b.has_node(name) {
            return Err(ParseError::DuplicateNode {
                line,
                name: name.to_string(),
            });
        }
        b.node(name);
    }
    let strict = !declared.is_empty();
    for e in &edges {
        for name in [e.from, e.to] {
            if strict && !b.has_node(name) {
                return Err(ParseError::UnknownNode {
                    line: e.line,
                    name: name.to_string(),
                });
            }
        }
        if e.from == NULL && e.to == NULL {
            continue;
        }
        b.edge(e.rel, e.from, e.to);
    }
    b.build().map_err(|err| match err {
        GraphError::NullEdge { .. } => {
            let line = edges
                .iter()
                .find(|e| e.from == NULL && e.to != NULL)
                .map(|e| e.line)
                .unwrap_or(0);
            ParseError::Syntax {
                line,
                msg: err.to_string(),
            }
        }
        other => ParseError::Graph(other),
    })
}

pub fn serialize(g: &Graph) -> String {
    let mut out = String::new();
    for x in g.nodes().filter(|&x| !g.is_special(x)) {
        let _ = writeln!(out, "node {}", g.name(x));
    }
    for rel in Rel::ALL {
        for (a, b) in g.edges(rel).filter(|&(a, _)| a != g.null()) {
            let _ = writeln!(out, "s{} {} {}", rel.label(), g.name(a), g.name(b));
        }
    }
    out
}

/// Rejects identifiers the line format cannot carry.
/// A `#` opens a comment only at the start of a token, so ids such as
/// `x#1` survive.
fn strip_comment(line: &str) -> &str {
    let mut prev_space = true;
    for (i, c) in line.char_indices() {
        if c == '#' && prev_space {
            return &line[..i];
        }
        prev_space = c.is_whitespace();
    }
    line
}

pub fn is_valid_id(id: &str) -> bool {
    !id.is_empty() && !id.starts_with('#') && !id.chars().any(char::is_whitespace)
        && id != ROOT
        && id != NULL
}
