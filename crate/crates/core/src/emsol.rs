//! Existential monadic second-order encodings of graph constraints.
//!
//! The normal form states that the nodes can be partitioned into colour
//! classes `X0..X{k-1}`, one per target node, with `X0 = {null}` and
//! `X1 = {root}`, such that every `s_i` edge leaving class `j` lands in a
//! class allowed by the target's `s_i` edges out of node `j`. It is true of
//! a graph exactly when the graph maps homomorphically into the target.
//!
//! The flexible form drops the partition requirement and allows arbitrary
//! propositional clauses per relation, provided the edge atom occurs only
//! negatively. It is emitted and read back, never evaluated.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, NodeId, Rel};

/// Environment variable capping the number of ordinary nodes handed to
/// exhaustive evaluators.
pub const MAX_EVAL_ENV: &str = "RGC_MAX_EVAL_NODES";
pub const DEFAULT_MAX_EVAL_NODES: usize = 6;

pub fn max_eval_nodes() -> usize {
    std::env::var(MAX_EVAL_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_EVAL_NODES)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmsolError {
    #[error("graph has {nodes} ordinary nodes, above the evaluation cap of {cap}")]
    TooLarge { nodes: usize, cap: usize },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("formula needs at least 2 colours, got {0}")]
    TooFewColours(usize),
    #[error("colour X{colour} is out of range for {k} colours")]
    ColourOutOfRange { colour: usize, k: usize },
    #[error("edge atom occurs positively in a B{0} clause")]
    PositiveEdge(char),
}

/// Normal-form formula for a fixed target graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmsolFormula {
    /// Target node name per colour; colour 0 is null, colour 1 is root.
    pub names: Vec<String>,
    /// `allowed[i][j]`: colours an `s_{i+1}` edge out of colour `j` may
    /// reach, ascending.
    pub allowed: [Vec<Vec<usize>>; 2],
}

impl EmsolFormula {
    pub fn colour_count(&self) -> usize {
        self.names.len()
    }

    fn validate(&self) -> Result<(), EmsolError> {
        let k = self.colour_count();
        if k < 2 {
            return Err(EmsolError::TooFewColours(k));
        }
        for table in &self.allowed {
            if table.len() != k {
                return Err(EmsolError::ColourOutOfRange {
                    colour: table.len(),
                    k,
                });
            }
            if let Some(&colour) = table.iter().flatten().find(|&&c| c >= k) {
                return Err(EmsolError::ColourOutOfRange { colour, k });
            }
        }
        Ok(())
    }
}

/// Colour order of a target: null, root, then ordinary nodes by id.
pub fn colour_order(t: &Graph) -> Vec<NodeId> {
    let mut order = vec![t.null(), t.root()];
    order.extend(t.nodes().filter(|&x| !t.is_special(x)));
    order
}

pub fn emit_formula(t: &Graph) -> EmsolFormula {
    let order = colour_order(t);
    let mut colour = vec![0; t.node_count()];
    for (c, x) in order.iter().enumerate() {
        colour[x.index()] = c;
    }
    let allowed = Rel::ALL.map(|rel| {
        order
            .iter()
            .map(|&x| {
                let mut cs: Vec<usize> = t.succ(rel, x).map(|y| colour[y.index()]).collect();
                cs.sort_unstable();
                cs
            })
            .collect()
    });
    EmsolFormula {
        names: order.iter().map(|&x| t.name(x).to_string()).collect(),
        allowed,
    }
}

fn var_list(k: usize) -> String {
    (0..k).map(|j| format!("X{j}")).collect::<Vec<_>>().join(", ")
}

/// ASCII text of the normal form, one clause per line in a fixed order.
pub fn render_formula(f: &EmsolFormula) -> String {
    let k = f.colour_count();
    let mut out = String::new();
    for (j, name) in f.names.iter().enumerate() {
        out += &format!("# X{j} = {name}\n");
    }
    out += &format!("EXISTS {}.\n", var_list(k));
    out += &format!("  partit({}) AND singl(X0, null) AND singl(X1, root)\n", var_list(k));
    out += "  AND FORALL x.\n";
    for j in 0..k {
        let lead = if j == 0 { "   " } else { "AND" };
        out += &format!("    {lead} (X{j}(x) => P{j}(x))\n");
    }
    out += "WHERE\n";
    for j in 0..k {
        out += &format!("  P{j}(x) = P{j}_1(x) AND P{j}_2(x)\n");
    }
    for (i, table) in f.allowed.iter().enumerate() {
        for (j, targets) in table.iter().enumerate() {
            let rhs = if targets.is_empty() {
                "FALSE".to_string()
            } else {
                targets
                    .iter()
                    .map(|l| format!("X{l}(y)"))
                    .collect::<Vec<_>>()
                    .join(" OR ")
            };
            out += &format!("  P{j}_{n}(x) = FORALL y. s{n}(x,y) => {rhs}\n", n = i + 1);
        }
    }
    out
}

/// Reads text produced by [`render_formula`]. Lines other than the `P`
/// clauses must match the rendering of the parsed formula exactly, up to
/// surrounding whitespace.
pub fn parse_formula(text: &str) -> Result<EmsolFormula, EmsolError> {
    let syntax = |line: usize, msg: String| EmsolError::Syntax { line, msg };
    let mut names: Vec<(usize, String)> = Vec::new();
    let mut k = None;
    let mut clauses: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let ln = n + 1;
        if let Some(rest) = line.strip_prefix("# X") {
            let (j, name) = rest
                .split_once(" = ")
                .ok_or_else(|| syntax(ln, "expected `# Xj = name`".into()))?;
            let j = j.parse().map_err(|_| syntax(ln, format!("bad colour `{j}`")))?;
            names.push((j, name.to_string()));
        } else if let Some(rest) = line.strip_prefix("EXISTS ") {
            let vars = rest
                .strip_suffix('.')
                .ok_or_else(|| syntax(ln, "missing `.` after the variable list".into()))?;
            let count = vars.split(',').count();
            if vars.trim() != var_list(count) {
                return Err(syntax(ln, format!("expected `{}`", var_list(count))));
            }
            k = Some(count);
        } else if let Some((lhs, rhs)) = line.split_once("(x) = FORALL y. ") {
            let (j, i) = lhs
                .strip_prefix('P')
                .and_then(|s| s.split_once('_'))
                .and_then(|(j, i)| Some((j.parse::<usize>().ok()?, i.parse::<usize>().ok()?)))
                .ok_or_else(|| syntax(ln, format!("bad clause name `{lhs}`")))?;
            if !(1..=2).contains(&i) {
                return Err(syntax(ln, format!("no relation s{i}")));
            }
            let body = rhs
                .strip_prefix(&format!("s{i}(x,y) => "))
                .ok_or_else(|| syntax(ln, format!("expected `s{i}(x,y) => ...`")))?;
            let targets = if body == "FALSE" {
                Vec::new()
            } else {
                body.split(" OR ")
                    .map(|atom| {
                        atom.strip_prefix('X')
                            .and_then(|s| s.strip_suffix("(y)"))
                            .and_then(|s| s.parse().ok())
                            .ok_or_else(|| syntax(ln, format!("bad atom `{atom}`")))
                    })
                    .collect::<Result<Vec<usize>, _>>()?
            };
            clauses.push((i - 1, j, targets));
        }
    }
    let k = k.ok_or_else(|| syntax(0, "missing EXISTS line".into()))?;
    let mut allowed: [Vec<Option<Vec<usize>>>; 2] = [vec![None; k], vec![None; k]];
    for (i, j, targets) in clauses {
        if j >= k {
            return Err(EmsolError::ColourOutOfRange { colour: j, k });
        }
        allowed[i][j] = Some(targets);
    }
    let allowed = allowed.map(|table| table.into_iter().collect::<Option<Vec<_>>>());
    let [Some(a1), Some(a2)] = allowed else {
        return Err(syntax(0, "missing P clauses".into()));
    };
    let mut label = vec![None; k];
    for (j, name) in names {
        if j >= k {
            return Err(EmsolError::ColourOutOfRange { colour: j, k });
        }
        label[j] = Some(name);
    }
    let f = EmsolFormula {
        names: label
            .into_iter()
            .enumerate()
            .map(|(j, n)| n.unwrap_or_else(|| format!("X{j}")))
            .collect(),
        allowed: [a1, a2],
    };
    f.validate()?;
    // the fixed lines must agree with the parsed formula
    let skeleton = |s: &str| -> Vec<String> {
        s.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .filter(|l| !l.contains("(x) = FORALL y. "))
            .map(String::from)
            .collect()
    };
    let expected = skeleton(&render_formula(&f));
    let got = skeleton(text);
    if expected != got {
        let at = expected
            .iter()
            .zip(&got)
            .position(|(a, b)| a != b)
            .unwrap_or(expected.len().min(got.len()));
        return Err(syntax(
            0,
            format!(
                "formula skeleton differs at clause {}: expected `{}`",
                at + 1,
                expected.get(at).map(String::as_str).unwrap_or("<end>")
            ),
        ));
    }
    Ok(f)
}

/// Decides the formula on `g` by trying every colouring of the ordinary
/// nodes. The cap comes from [`max_eval_nodes`].
pub fn eval_formula(g: &Graph, f: &EmsolFormula) -> Result<bool, EmsolError> {
    eval_formula_capped(g, f, max_eval_nodes())
}

pub fn eval_formula_capped(g: &Graph, f: &EmsolFormula, cap: usize) -> Result<bool, EmsolError> {
    f.validate()?;
    let ordinary: Vec<NodeId> = g.nodes().filter(|&x| !g.is_special(x)).collect();
    if ordinary.len() > cap {
        return Err(EmsolError::TooLarge {
            nodes: ordinary.len(),
            cap,
        });
    }
    let k = f.colour_count();
    let mut colour = vec![0usize; g.node_count()];
    colour[g.null().index()] = 0;
    colour[g.root().index()] = 1;
    if ordinary.is_empty() {
        return Ok(satisfies(g, f, &colour));
    }
    if k == 2 {
        // singletons leave no colour for ordinary nodes
        return Ok(false);
    }
    for &x in &ordinary {
        colour[x.index()] = 2;
    }
    loop {
        if satisfies(g, f, &colour) {
            return Ok(true);
        }
        // odometer over colours 2..k
        let mut pos = 0;
        loop {
            if pos == ordinary.len() {
                return Ok(false);
            }
            let c = &mut colour[ordinary[pos].index()];
            if *c + 1 < k {
                *c += 1;
                break;
            }
            *c = 2;
            pos += 1;
        }
    }
}

fn satisfies(g: &Graph, f: &EmsolFormula, colour: &[usize]) -> bool {
    Rel::ALL.iter().all(|&rel| {
        g.edges(rel).all(|(x, y)| {
            f.allowed[rel.index()][colour[x.index()]].contains(&colour[y.index()])
        })
    })
}

/// Which endpoint a membership atom talks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    X,
    Y,
}

/// Propositional clause body of the flexible form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Prop {
    True,
    False,
    /// `s_i(x,y)` for the relation of the enclosing clause list.
    Edge,
    /// `X_j(x)` or `X_j(y)`.
    In(usize, Var),
    Not(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
    Implies(Box<Prop>, Box<Prop>),
}

impl Prop {
    pub fn not(p: Prop) -> Prop {
        Prop::Not(Box::new(p))
    }
    pub fn and(a: Prop, b: Prop) -> Prop {
        Prop::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Prop, b: Prop) -> Prop {
        Prop::Or(Box::new(a), Box::new(b))
    }
    pub fn implies(a: Prop, b: Prop) -> Prop {
        Prop::Implies(Box::new(a), Box::new(b))
    }

    fn precedence(&self) -> u8 {
        match self {
            Prop::Implies(..) => 0,
            Prop::Or(..) => 1,
            Prop::And(..) => 2,
            Prop::Not(..) => 3,
            _ => 4,
        }
    }

    /// Whether every edge atom sits under an odd number of negations
    /// (antecedents count as one).
    pub fn edge_only_negative(&self) -> bool {
        fn go(p: &Prop, positive: bool) -> bool {
            match p {
                Prop::Edge => !positive,
                Prop::True | Prop::False | Prop::In(..) => true,
                Prop::Not(a) => go(a, !positive),
                Prop::And(a, b) | Prop::Or(a, b) => go(a, positive) && go(b, positive),
                Prop::Implies(a, b) => go(a, !positive) && go(b, positive),
            }
        }
        go(self, true)
    }

    fn max_colour(&self) -> Option<usize> {
        match self {
            Prop::In(j, _) => Some(*j),
            Prop::Not(a) => a.max_colour(),
            Prop::And(a, b) | Prop::Or(a, b) | Prop::Implies(a, b) => {
                a.max_colour().max(b.max_colour())
            }
            _ => None,
        }
    }

    fn write(&self, out: &mut String, rel: char) {
        let child = |out: &mut String, p: &Prop, parens: bool| {
            if parens {
                out.push('(');
                p.write(out, rel);
                out.push(')');
            } else {
                p.write(out, rel);
            }
        };
        let prec = self.precedence();
        match self {
            Prop::True => out.push_str("TRUE"),
            Prop::False => out.push_str("FALSE"),
            Prop::Edge => out.push_str(&format!("s{rel}(x,y)")),
            Prop::In(j, v) => out.push_str(&format!(
                "X{j}({})",
                if *v == Var::X { 'x' } else { 'y' }
            )),
            Prop::Not(a) => {
                out.push_str("NOT ");
                child(out, a, a.precedence() < prec);
            }
            Prop::And(a, b) | Prop::Or(a, b) => {
                let op = if matches!(self, Prop::And(..)) { " AND " } else { " OR " };
                child(out, a, a.precedence() < prec);
                out.push_str(op);
                child(out, b, b.precedence() <= prec);
            }
            Prop::Implies(a, b) => {
                child(out, a, a.precedence() <= prec);
                out.push_str(" => ");
                child(out, b, b.precedence() < prec);
            }
        }
    }
}

/// Flexible-form description: colour count and the conjuncts of `B1`
/// (over `s1`) and `B2` (over `s2`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlexibleFormula {
    pub colours: usize,
    #[serde(default)]
    pub b1: Vec<Prop>,
    #[serde(default)]
    pub b2: Vec<Prop>,
}

impl FlexibleFormula {
    pub fn validate(&self) -> Result<(), EmsolError> {
        if self.colours < 2 {
            return Err(EmsolError::TooFewColours(self.colours));
        }
        for (rel, list) in [('1', &self.b1), ('2', &self.b2)] {
            for p in list {
                if let Some(colour) = p.max_colour().filter(|&c| c >= self.colours) {
                    return Err(EmsolError::ColourOutOfRange {
                        colour,
                        k: self.colours,
                    });
                }
                if !p.edge_only_negative() {
                    return Err(EmsolError::PositiveEdge(rel));
                }
            }
        }
        Ok(())
    }

    /// The formula stating that root has in-degree 0 over heaps: `X2` holds
    /// null and everything reachable from root along `s1`, is disjoint from
    /// `X1`, and no `s2` edge enters root.
    pub fn root_in_degree_zero() -> FlexibleFormula {
        let x = |j| Prop::In(j, Var::X);
        let y = |j| Prop::In(j, Var::Y);
        FlexibleFormula {
            colours: 3,
            b1: vec![
                Prop::not(Prop::and(x(1), x(2))),
                Prop::implies(x(0), x(2)),
                Prop::implies(
                    Prop::Edge,
                    Prop::and(Prop::implies(x(1), y(2)), Prop::implies(x(2), y(2))),
                ),
            ],
            b2: vec![Prop::implies(Prop::Edge, Prop::not(y(1)))],
        }
    }
}

impl fmt::Display for FlexibleFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "EXISTS {}.", var_list(self.colours))?;
        writeln!(f, "  singl(X0, null) AND singl(X1, root)")?;
        if self.b1.is_empty() && self.b2.is_empty() {
            return Ok(());
        }
        writeln!(f, "  AND FORALL x. FORALL y.")?;
        for (rel, list) in [('1', &self.b1), ('2', &self.b2)] {
            for p in list {
                let mut body = String::new();
                p.write(&mut body, rel);
                writeln!(f, "    B{rel}: {body}")?;
            }
        }
        Ok(())
    }
}

pub fn emit_flexible(desc: &FlexibleFormula) -> Result<String, EmsolError> {
    desc.validate()?;
    Ok(desc.to_string())
}

/// Reads text produced by [`emit_flexible`].
pub fn parse_flexible(text: &str) -> Result<FlexibleFormula, EmsolError> {
    let syntax = |line: usize, msg: String| EmsolError::Syntax { line, msg };
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let mut it = lines.into_iter();
    let (ln, head) = it.next().ok_or_else(|| syntax(1, "empty input".into()))?;
    let vars = head
        .strip_prefix("EXISTS ")
        .and_then(|s| s.strip_suffix('.'))
        .ok_or_else(|| syntax(ln, "expected `EXISTS X0, ..., Xk-1.`".into()))?;
    let colours = vars.split(',').count();
    if vars != var_list(colours) {
        return Err(syntax(ln, format!("expected `{}`", var_list(colours))));
    }
    match it.next() {
        Some((_, "singl(X0, null) AND singl(X1, root)")) => {}
        Some((ln, _)) => return Err(syntax(ln, "expected the singl constraints".into())),
        None => return Err(syntax(ln + 1, "missing the singl constraints".into())),
    }
    let mut out = FlexibleFormula {
        colours,
        b1: Vec::new(),
        b2: Vec::new(),
    };
    if let Some((ln, quant)) = it.next() {
        if quant != "AND FORALL x. FORALL y." {
            return Err(syntax(ln, "expected `AND FORALL x. FORALL y.`".into()));
        }
        for (ln, line) in it {
            let (rel, body) = if let Some(b) = line.strip_prefix("B1: ") {
                ('1', b)
            } else if let Some(b) = line.strip_prefix("B2: ") {
                ('2', b)
            } else {
                return Err(syntax(ln, "expected `B1:` or `B2:`".into()));
            };
            let p = PropParser::new(body, rel)
                .parse()
                .map_err(|msg| syntax(ln, msg))?;
            if rel == '1' {
                out.b1.push(p);
            } else {
                out.b2.push(p);
            }
        }
    }
    out.validate()?;
    Ok(out)
}

struct PropParser {
    tokens: Vec<String>,
    pos: usize,
    rel: char,
}

impl PropParser {
    fn new(text: &str, rel: char) -> Self {
        let mut tokens = Vec::new();
        let mut chars = text.chars().peekable();
        while let Some(&c) = chars.peek() {
            if c.is_whitespace() {
                chars.next();
            } else if c == '(' || c == ')' {
                tokens.push(c.to_string());
                chars.next();
            } else if c == '=' {
                chars.next();
                let mut t = String::from("=");
                if chars.peek() == Some(&'>') {
                    t.push('>');
                    chars.next();
                }
                tokens.push(t);
            } else {
                let mut t = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' {
                        t.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                if t.is_empty() {
                    t.push(c);
                    chars.next();
                }
                tokens.push(t);
            }
        }
        PropParser { tokens, pos: 0, rel }
    }

    fn peek(&self) -> Option<&str> {
        self.tokens.get(self.pos).map(String::as_str)
    }

    fn expect(&mut self, t: &str) -> Result<(), String> {
        match self.peek() {
            Some(s) if s == t => {
                self.pos += 1;
                Ok(())
            }
            other => Err(format!("expected `{t}`, found `{}`", other.unwrap_or("<end>"))),
        }
    }

    fn parse(mut self) -> Result<Prop, String> {
        let p = self.implies()?;
        match self.peek() {
            None => Ok(p),
            Some(t) => Err(format!("unexpected `{t}`")),
        }
    }

    fn implies(&mut self) -> Result<Prop, String> {
        let left = self.or()?;
        if self.peek() == Some("=>") {
            self.pos += 1;
            let right = self.implies()?;
            return Ok(Prop::implies(left, right));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Prop, String> {
        let mut left = self.and()?;
        while self.peek() == Some("OR") {
            self.pos += 1;
            left = Prop::or(left, self.and()?);
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Prop, String> {
        let mut left = self.unary()?;
        while self.peek() == Some("AND") {
            self.pos += 1;
            left = Prop::and(left, self.unary()?);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Prop, String> {
        let Some(tok) = self.peek().map(String::from) else {
            return Err("unexpected end of clause".into());
        };
        self.pos += 1;
        match tok.as_str() {
            "NOT" => Ok(Prop::not(self.unary()?)),
            "TRUE" => Ok(Prop::True),
            "FALSE" => Ok(Prop::False),
            "(" => {
                let p = self.implies()?;
                self.expect(")")?;
                Ok(p)
            }
            t if t.starts_with('s') => {
                if t != format!("s{}", self.rel) {
                    return Err(format!("B{} clauses may only use s{}", self.rel, self.rel));
                }
                for want in ["(", "x", ",", "y", ")"] {
                    self.expect(want)?;
                }
                Ok(Prop::Edge)
            }
            t if t.starts_with('X') => {
                let j = t[1..]
                    .parse()
                    .map_err(|_| format!("bad set variable `{t}`"))?;
                self.expect("(")?;
                let v = match self.peek() {
                    Some("x") => Var::X,
                    Some("y") => Var::Y,
                    other => return Err(format!("expected x or y, found `{}`", other.unwrap_or("<end>"))),
                };
                self.pos += 1;
                self.expect(")")?;
                Ok(Prop::In(j, v))
            }
            t => Err(format!("unexpected `{t}`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse;
    use crate::hom::exists_hom;

    fn g1() -> Graph {
        parse("s1 root null\ns2 root root\n").unwrap()
    }

    #[test]
    fn minimal_heap_formula() {
        let f = emit_formula(&Graph::minimal_heap());
        assert_eq!(f.colour_count(), 2);
        assert_eq!(f.allowed[0][1], vec![0]);
        assert_eq!(f.allowed[1][1], vec![0]);
        assert_eq!(f.allowed[0][0], vec![0]);
    }

    #[test]
    fn root_self_loop_formula() {
        let f = emit_formula(&g1());
        assert_eq!(f.allowed[1][1], vec![1]);
        assert!(!eval_formula_capped(&Graph::minimal_heap(), &f, 6).unwrap());
        let own = emit_formula(&Graph::minimal_heap());
        assert!(eval_formula_capped(&Graph::minimal_heap(), &own, 6).unwrap());
    }

    #[test]
    fn render_has_header_and_round_trips() {
        let t = parse("s1 root a\ns1 a a\ns2 root null\ns2 a root\ns1 b null\ns2 b null\n").unwrap();
        let f = emit_formula(&t);
        let text = render_formula(&f);
        assert!(text.contains("partit(X0, X1, X2, X3)"));
        assert!(text.contains("singl(X0, null) AND singl(X1, root)"));
        assert!(text.contains("P3_1(x) = FORALL y. s1(x,y) => X0(y)"));
        assert!(text.contains("P0_2(x) = FORALL y. s2(x,y) => X0(y)"));
        assert_eq!(parse_formula(&text).unwrap(), f);
    }

    #[test]
    fn reader_rejects_tampered_skeleton() {
        let text = render_formula(&emit_formula(&g1()));
        let bad = text.replace("partit(X0, X1)", "partit(X0)");
        assert!(parse_formula(&bad).is_err());
        let missing: String = text
            .lines()
            .filter(|l| !l.contains("P1_2(x) = FORALL"))
            .map(|l| format!("{l}\n"))
            .collect();
        assert!(parse_formula(&missing).is_err());
    }

    #[test]
    fn eval_matches_hom_on_small_pairs() {
        let graphs = [
            Graph::minimal_heap(),
            g1(),
            parse("s1 root a\ns1 a null\ns2 root null\ns2 a a\n").unwrap(),
            parse("s1 root a\ns1 a root\ns2 root null\ns2 a null\n").unwrap(),
        ];
        for g in &graphs {
            for t in &graphs {
                let f = emit_formula(t);
                assert_eq!(eval_formula_capped(g, &f, 6).unwrap(), exists_hom(g, t));
            }
        }
    }

    #[test]
    fn size_cap() {
        let g = parse("s1 root a\ns1 a b\ns1 b null\ns2 root null\ns2 a null\ns2 b null\n").unwrap();
        let f = emit_formula(&g);
        assert_eq!(
            eval_formula_capped(&g, &f, 1),
            Err(EmsolError::TooLarge { nodes: 2, cap: 1 })
        );
    }

    #[test]
    fn in_degree_example_golden() {
        let text = emit_flexible(&FlexibleFormula::root_in_degree_zero()).unwrap();
        let expected = "\
EXISTS X0, X1, X2.
  singl(X0, null) AND singl(X1, root)
  AND FORALL x. FORALL y.
    B1: NOT (X1(x) AND X2(x))
    B1: X0(x) => X2(x)
    B1: s1(x,y) => (X1(x) => X2(y)) AND (X2(x) => X2(y))
    B2: s2(x,y) => NOT X1(y)
";
        assert_eq!(text, expected);
        assert_eq!(parse_flexible(&text).unwrap(), FlexibleFormula::root_in_degree_zero());
    }

    #[test]
    fn empty_flexible_is_header_only() {
        let f = FlexibleFormula {
            colours: 2,
            b1: vec![],
            b2: vec![],
        };
        let text = emit_flexible(&f).unwrap();
        assert_eq!(text, "EXISTS X0, X1.\n  singl(X0, null) AND singl(X1, root)\n");
        assert_eq!(parse_flexible(&text).unwrap(), f);
    }

    #[test]
    fn positive_edge_rejected() {
        let f = FlexibleFormula {
            colours: 2,
            b1: vec![Prop::and(Prop::Edge, Prop::In(0, Var::Y))],
            b2: vec![],
        };
        assert_eq!(emit_flexible(&f), Err(EmsolError::PositiveEdge('1')));
        let text = "EXISTS X0, X1.\n  singl(X0, null) AND singl(X1, root)\n  AND FORALL x. FORALL y.\n    B2: s1(x,y) => X0(y)\n";
        assert!(parse_flexible(text).is_err());
    }
}
