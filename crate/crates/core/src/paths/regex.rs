//! Regular expressions over the label alphabet `{1, 2}` and their
//! Thompson automata.
//!
//! Concrete syntax: `1`, `2`, `ε` (empty word), `∅` (empty language),
//! juxtaposition or `·` for concatenation, `|` for union, postfix `*`,
//! and parentheses. Whitespace is ignored.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::Rel;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Regex {
    Empty,
    Epsilon,
    Lit(Rel),
    Concat(Box<Regex>, Box<Regex>),
    Union(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegexError {
    #[error("unexpected `{found}` at position {pos}")]
    Unexpected { pos: usize, found: char },
    #[error("unexpected end of expression")]
    UnexpectedEnd,
    #[error("unbalanced parenthesis at position {0}")]
    Unbalanced(usize),
}

impl Regex {
    pub fn lit(rel: Rel) -> Regex {
        Regex::Lit(rel)
    }

    pub fn concat(a: Regex, b: Regex) -> Regex {
        Regex::Concat(Box::new(a), Box::new(b))
    }

    pub fn union(a: Regex, b: Regex) -> Regex {
        Regex::Union(Box::new(a), Box::new(b))
    }

    pub fn star(a: Regex) -> Regex {
        Regex::Star(Box::new(a))
    }

    pub fn parse(s: &str) -> Result<Regex, RegexError> {
        let chars: Vec<(usize, char)> = s
            .chars()
            .enumerate()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        let mut p = Parser { chars, pos: 0 };
        let r = p.union()?;
        match p.peek() {
            None => Ok(r),
            Some((i, ')')) => Err(RegexError::Unbalanced(i)),
            Some((i, c)) => Err(RegexError::Unexpected { pos: i, found: c }),
        }
    }

    /// Membership by simulating the Thompson automaton.
    pub fn matches(&self, word: &[Rel]) -> bool {
        Nfa::thompson(self).accepts(word)
    }

    fn precedence(&self) -> u8 {
        match self {
            Regex::Union(..) => 0,
            Regex::Concat(..) => 1,
            Regex::Star(..) => 2,
            _ => 3,
        }
    }
}

impl FromStr for Regex {
    type Err = RegexError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Regex::parse(s)
    }
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, r: &Regex, min: u8| {
            if r.precedence() < min {
                write!(f, "({r})")
            } else {
                write!(f, "{r}")
            }
        };
        match self {
            Regex::Empty => f.write_str("∅"),
            Regex::Epsilon => f.write_str("ε"),
            Regex::Lit(rel) => write!(f, "{rel}"),
            Regex::Concat(a, b) => {
                // concatenation chains nest to the right when parsed
                wrap(f, a, 2)?;
                wrap(f, b, 1)
            }
            Regex::Union(a, b) => {
                wrap(f, a, 0)?;
                f.write_str("|")?;
                wrap(f, b, 1)
            }
            Regex::Star(a) => {
                wrap(f, a, 3)?;
                f.write_str("*")
            }
        }
    }
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<(usize, char)> {
        self.chars.get(self.pos).copied()
    }

    fn union(&mut self) -> Result<Regex, RegexError> {
        let mut left = self.concat()?;
        while let Some((_, '|')) = self.peek() {
            self.pos += 1;
            let right = self.concat()?;
            left = Regex::union(left, right);
        }
        Ok(left)
    }

    fn concat(&mut self) -> Result<Regex, RegexError> {
        let mut items = Vec::new();
        loop {
            match self.peek() {
                Some((_, '·')) => {
                    if items.is_empty() {
                        let (i, c) = self.peek().unwrap();
                        return Err(RegexError::Unexpected { pos: i, found: c });
                    }
                    self.pos += 1;
                    if matches!(self.peek(), None | Some((_, '|' | ')' | '·'))) {
                        return match self.peek() {
                            None => Err(RegexError::UnexpectedEnd),
                            Some((i, c)) => Err(RegexError::Unexpected { pos: i, found: c }),
                        };
                    }
                }
                Some((_, '1' | '2' | 'ε' | '∅' | '(')) => items.push(self.starred()?),
                _ => break,
            }
        }
        let mut iter = items.into_iter().rev();
        let Some(last) = iter.next() else {
            return match self.peek() {
                None => Err(RegexError::UnexpectedEnd),
                Some((i, c)) => Err(RegexError::Unexpected { pos: i, found: c }),
            };
        };
        Ok(iter.fold(last, |acc, r| Regex::concat(r, acc)))
    }

    fn starred(&mut self) -> Result<Regex, RegexError> {
        let mut base = self.atom()?;
        while let Some((_, '*')) = self.peek() {
            self.pos += 1;
            base = Regex::star(base);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Regex, RegexError> {
        let Some((i, c)) = self.peek() else {
            return Err(RegexError::UnexpectedEnd);
        };
        self.pos += 1;
        match c {
            '1' => Ok(Regex::Lit(Rel::S1)),
            '2' => Ok(Regex::Lit(Rel::S2)),
            'ε' => Ok(Regex::Epsilon),
            '∅' => Ok(Regex::Empty),
            '(' => {
                let inner = self.union()?;
                match self.peek() {
                    Some((_, ')')) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(RegexError::Unbalanced(i)),
                }
            }
            other => Err(RegexError::Unexpected { pos: i, found: other }),
        }
    }
}

/// Thompson NFA with a single start and a single accepting state.
#[derive(Debug, Clone)]
pub struct Nfa {
    /// transitions[q] = (label or epsilon, target)
    pub transitions: Vec<Vec<(Option<Rel>, usize)>>,
    pub start: usize,
    pub accept: usize,
}

impl Nfa {
    pub fn thompson(r: &Regex) -> Nfa {
        let mut nfa = Nfa {
            transitions: Vec::new(),
            start: 0,
            accept: 0,
        };
        let (s, a) = nfa.build(r);
        nfa.start = s;
        nfa.accept = a;
        nfa
    }

    fn state(&mut self) -> usize {
        self.transitions.push(Vec::new());
        self.transitions.len() - 1
    }

    fn build(&mut self, r: &Regex) -> (usize, usize) {
        match r {
            Regex::Empty => {
                let s = self.state();
                let a = self.state();
                (s, a)
            }
            Regex::Epsilon => {
                let s = self.state();
                let a = self.state();
                self.transitions[s].push((None, a));
                (s, a)
            }
            Regex::Lit(rel) => {
                let s = self.state();
                let a = self.state();
                self.transitions[s].push((Some(*rel), a));
                (s, a)
            }
            Regex::Concat(x, y) => {
                let (s1, a1) = self.build(x);
                let (s2, a2) = self.build(y);
                self.transitions[a1].push((None, s2));
                (s1, a2)
            }
            Regex::Union(x, y) => {
                let s = self.state();
                let (s1, a1) = self.build(x);
                let (s2, a2) = self.build(y);
                let a = self.state();
                self.transitions[s].push((None, s1));
                self.transitions[s].push((None, s2));
                self.transitions[a1].push((None, a));
                self.transitions[a2].push((None, a));
                (s, a)
            }
            Regex::Star(x) => {
                let s = self.state();
                let (s1, a1) = self.build(x);
                let a = self.state();
                self.transitions[s].push((None, s1));
                self.transitions[s].push((None, a));
                self.transitions[a1].push((None, s1));
                self.transitions[a1].push((None, a));
                (s, a)
            }
        }
    }

    pub fn state_count(&self) -> usize {
        self.transitions.len()
    }

    /// Epsilon closure of a state set, in place.
    pub fn close(&self, set: &mut [bool]) {
        let mut stack: Vec<usize> = (0..set.len()).filter(|&q| set[q]).collect();
        while let Some(q) = stack.pop() {
            for &(label, t) in &self.transitions[q] {
                if label.is_none() && !set[t] {
                    set[t] = true;
                    stack.push(t);
                }
            }
        }
    }

    pub fn accepts(&self, word: &[Rel]) -> bool {
        let mut cur = vec![false; self.state_count()];
        cur[self.start] = true;
        self.close(&mut cur);
        for &c in word {
            let mut next = vec![false; self.state_count()];
            for q in (0..cur.len()).filter(|&q| cur[q]) {
                for &(label, t) in &self.transitions[q] {
                    if label == Some(c) {
                        next[t] = true;
                    }
                }
            }
            self.close(&mut next);
            cur = next;
        }
        cur[self.accept]
    }
}

/// Parses a word over `{1, 2}`.
pub fn parse_word(s: &str) -> Option<Vec<Rel>> {
    s.chars().map(Rel::from_label).collect()
}

pub fn word_string(w: &[Rel]) -> String {
    w.iter().map(|r| r.label()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Vec<Rel> {
        parse_word(s).unwrap()
    }

    #[test]
    fn parse_and_match_basics() {
        let r = Regex::parse("12(21)*").unwrap();
        assert!(r.matches(&w("12")));
        assert!(r.matches(&w("122121")));
        assert!(r.matches(&w("1221")));
        assert!(!r.matches(&w("121")));
        let dot = Regex::parse("2·1").unwrap();
        assert!(dot.matches(&w("21")) && !dot.matches(&w("1")));
        let eps = Regex::parse("ε").unwrap();
        assert!(eps.matches(&[]) && !eps.matches(&w("1")));
        let empty = Regex::parse("∅").unwrap();
        assert!(!empty.matches(&[]));
        let u = Regex::parse("1|22").unwrap();
        assert!(u.matches(&w("1")) && u.matches(&w("22")) && !u.matches(&w("2")));
    }

    #[test]
    fn star_binds_tighter_than_concat() {
        let r = Regex::parse("121*").unwrap();
        assert!(r.matches(&w("12")) && r.matches(&w("1211")));
        assert!(!r.matches(&w("1212")));
    }

    #[test]
    fn parse_errors() {
        assert_eq!(Regex::parse("(1"), Err(RegexError::Unbalanced(0)));
        assert_eq!(Regex::parse("1)"), Err(RegexError::Unbalanced(1)));
        assert_eq!(Regex::parse(""), Err(RegexError::UnexpectedEnd));
        assert_eq!(
            Regex::parse("13"),
            Err(RegexError::Unexpected { pos: 1, found: '3' })
        );
        assert!(Regex::parse("1|").is_err());
        assert!(Regex::parse("*").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["1*", "121*", "1221*", "12(21)*", "(1|2)*2", "ε|1", "∅", "(12)*|2"] {
            let r = Regex::parse(s).unwrap();
            assert_eq!(Regex::parse(&r.to_string()).unwrap(), r, "{s} -> {r}");
        }
    }
}
