//! Linear temporal logic over a named proposition alphabet.
//!
//! Formulas are plain immutable trees. The module provides concrete-syntax
//! parsing and printing, negation normal form, a syntactic implication check
//! shared by the simplifier and the tableau compiler, and [`holds_on_lasso`],
//! the reference semantics every other component is tested against.

mod implication;
mod nnf;
mod parse;
mod semantics;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use implication::implies;
pub use nnf::{is_nnf, nnf};
pub use parse::{parse, parse_with, ParseError, ParseOptions};
pub use semantics::holds_on_lasso;

/// An atomic proposition name, e.g. `a`, `b_0`, `g_y`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Proposition(Arc<str>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid proposition name {0:?}: expected [a-z][a-z0-9_]*")]
pub struct InvalidProposition(pub String);

impl Proposition {
    pub fn new(name: &str) -> Result<Self, InvalidProposition> {
        if is_valid_name(name) && !is_keyword(name) {
            Ok(Proposition(Arc::from(name)))
        } else {
            Err(InvalidProposition(name.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

pub(crate) fn is_keyword(name: &str) -> bool {
    matches!(name, "true" | "false")
}

impl TryFrom<String> for Proposition {
    type Error = InvalidProposition;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        Proposition::new(&value)
    }
}

impl From<Proposition> for String {
    fn from(p: Proposition) -> String {
        p.0.to_string()
    }
}

impl fmt::Debug for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Shorthand for tests and builders. Panics on an invalid name.
pub fn prop(name: &str) -> Proposition {
    Proposition::new(name).expect("valid proposition name")
}

/// Set of propositions true at one step.
pub type LabelSet = BTreeSet<Proposition>;

/// Builds a label set from names. Panics on an invalid name.
pub fn labels<'a>(names: impl IntoIterator<Item = &'a str>) -> LabelSet {
    names.into_iter().map(prop).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Proposition),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Eventually(Box<Formula>),
    Always(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(prop(name))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn next(f: Formula) -> Formula {
        Formula::Next(Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Formula {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn eventually(f: Formula) -> Formula {
        Formula::Eventually(Box::new(f))
    }

    pub fn always(f: Formula) -> Formula {
        Formula::Always(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// Right-nested conjunction of `parts`; `True` when empty.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut parts: Vec<Formula> = parts.into_iter().collect();
        let Some(mut acc) = parts.pop() else {
            return Formula::True;
        };
        while let Some(p) = parts.pop() {
            acc = Formula::and(p, acc);
        }
        acc
    }

    /// Right-nested disjunction of `parts`; `False` when empty.
    pub fn disjunction(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut parts: Vec<Formula> = parts.into_iter().collect();
        let Some(mut acc) = parts.pop() else {
            return Formula::False;
        };
        while let Some(p) = parts.pop() {
            acc = Formula::or(p, acc);
        }
        acc
    }

    /// Atoms occurring in the formula.
    pub fn alphabet(&self) -> BTreeSet<Proposition> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Proposition>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(p) => {
                out.insert(p.clone());
            }
            Formula::Not(a) | Formula::Next(a) | Formula::Eventually(a) | Formula::Always(a) => {
                a.collect_atoms(out)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Until(a, b) | Formula::Implies(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Node count.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 1,
            Formula::Not(a) | Formula::Next(a) | Formula::Eventually(a) | Formula::Always(a) => {
                1 + a.size()
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Until(a, b) | Formula::Implies(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 0,
            Formula::Not(a) | Formula::Next(a) | Formula::Eventually(a) | Formula::Always(a) => {
                1 + a.depth()
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Until(a, b) | Formula::Implies(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    /// No temporal operator anywhere in the tree.
    pub fn is_propositional(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => true,
            Formula::Not(a) => a.is_propositional(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_propositional() && b.is_propositional()
            }
            Formula::Next(_) | Formula::Until(..) | Formula::Eventually(_) | Formula::Always(_) => {
                false
            }
        }
    }

    pub fn contains_next(&self) -> bool {
        match self {
            Formula::Next(_) => true,
            Formula::True | Formula::False | Formula::Atom(_) => false,
            Formula::Not(a) | Formula::Eventually(a) | Formula::Always(a) => a.contains_next(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Until(a, b) | Formula::Implies(a, b) => {
                a.contains_next() || b.contains_next()
            }
        }
    }

    /// Syntactically co-safe: after NNF no `Always` occurs.
    pub fn is_co_safe(&self) -> bool {
        fn no_always(f: &Formula) -> bool {
            match f {
                Formula::Always(_) => false,
                Formula::True | Formula::False | Formula::Atom(_) => true,
                Formula::Not(a) | Formula::Next(a) | Formula::Eventually(a) => no_always(a),
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::Until(a, b)
                | Formula::Implies(a, b) => no_always(a) && no_always(b),
            }
        }
        no_always(&nnf(self))
    }

    /// Evaluates a propositional formula on one label set. Temporal nodes
    /// are rejected with `None`.
    pub fn eval_propositional(&self, sigma: &LabelSet) -> Option<bool> {
        Some(match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(p) => sigma.contains(p),
            Formula::Not(a) => !a.eval_propositional(sigma)?,
            Formula::And(a, b) => a.eval_propositional(sigma)? && b.eval_propositional(sigma)?,
            Formula::Or(a, b) => a.eval_propositional(sigma)? || b.eval_propositional(sigma)?,
            Formula::Implies(a, b) => !a.eval_propositional(sigma)? || b.eval_propositional(sigma)?,
            _ => return None,
        })
    }

    /// Re-associates every And/Or chain to the right, leaving other nodes alone.
    pub fn normalize(&self) -> Formula {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => self.clone(),
            Formula::Not(a) => Formula::not(a.normalize()),
            Formula::Next(a) => Formula::next(a.normalize()),
            Formula::Eventually(a) => Formula::eventually(a.normalize()),
            Formula::Always(a) => Formula::always(a.normalize()),
            Formula::Until(a, b) => Formula::until(a.normalize(), b.normalize()),
            Formula::Implies(a, b) => Formula::implies(a.normalize(), b.normalize()),
            Formula::And(..) => {
                let mut parts = Vec::new();
                self.flatten_and(&mut parts);
                Formula::conjunction(parts.into_iter().map(Formula::normalize))
            }
            Formula::Or(..) => {
                let mut parts = Vec::new();
                self.flatten_or(&mut parts);
                Formula::disjunction(parts.into_iter().map(Formula::normalize))
            }
        }
    }

    pub(crate) fn flatten_and<'a>(&'a self, out: &mut Vec<&'a Formula>) {
        match self {
            Formula::And(a, b) => {
                a.flatten_and(out);
                b.flatten_and(out);
            }
            other => out.push(other),
        }
    }

    pub(crate) fn flatten_or<'a>(&'a self, out: &mut Vec<&'a Formula>) {
        match self {
            Formula::Or(a, b) => {
                a.flatten_or(out);
                b.flatten_or(out);
            }
            other => out.push(other),
        }
    }
}

impl From<&Formula> for Formula {
    fn from(f: &Formula) -> Formula {
        f.clone()
    }
}

/// Fully parenthesized canonical text. Associative And/Or chains are printed
/// as one group, so `parse(format(f))` yields `f.normalize()`.
pub fn format(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, &mut out);
    out
}

fn write_formula(f: &Formula, out: &mut String) {
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Atom(p) => out.push_str(p.as_str()),
        Formula::Not(a) => write_unary("!", a, out),
        Formula::Next(a) => write_unary("X", a, out),
        Formula::Eventually(a) => write_unary("F", a, out),
        Formula::Always(a) => write_unary("G", a, out),
        Formula::Until(a, b) => write_binary(" U ", a, b, out),
        Formula::Implies(a, b) => write_binary(" -> ", a, b, out),
        Formula::And(..) => {
            let mut parts = Vec::new();
            f.flatten_and(&mut parts);
            write_chain(" & ", &parts, out);
        }
        Formula::Or(..) => {
            let mut parts = Vec::new();
            f.flatten_or(&mut parts);
            write_chain(" | ", &parts, out);
        }
    }
}

fn write_unary(op: &str, a: &Formula, out: &mut String) {
    out.push('(');
    out.push_str(op);
    out.push(' ');
    write_formula(a, out);
    out.push(')');
}

fn write_binary(op: &str, a: &Formula, b: &Formula, out: &mut String) {
    out.push('(');
    write_formula(a, out);
    out.push_str(op);
    write_formula(b, out);
    out.push(')');
}

fn write_chain(op: &str, parts: &[&Formula], out: &mut String) {
    out.push('(');
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            out.push_str(op);
        }
        write_formula(p, out);
    }
    out.push(')');
}

/// Serialized as its concrete-syntax text.
impl Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(self))
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format(self))
    }
}

/// Finite representation of the infinite word `prefix · loop^ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LassoTrace {
    prefix: Vec<LabelSet>,
    cycle: Vec<LabelSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("lasso loop must contain at least one symbol")]
pub struct EmptyLoop;

impl LassoTrace {
    pub fn new(prefix: Vec<LabelSet>, cycle: Vec<LabelSet>) -> Result<Self, EmptyLoop> {
        if cycle.is_empty() {
            return Err(EmptyLoop);
        }
        Ok(LassoTrace { prefix, cycle })
    }

    pub fn prefix(&self) -> &[LabelSet] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[LabelSet] {
        &self.cycle
    }

    /// Number of distinct positions: `|prefix| + |loop|`.
    pub fn positions(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    /// Symbol at an unrolled position index in `0..positions()`.
    pub fn symbol(&self, pos: usize) -> &LabelSet {
        if pos < self.prefix.len() {
            &self.prefix[pos]
        } else {
            &self.cycle[pos - self.prefix.len()]
        }
    }

    /// Successor position, wrapping the last loop position back to the loop start.
    pub fn successor(&self, pos: usize) -> usize {
        if pos + 1 < self.positions() {
            pos + 1
        } else {
            self.prefix.len()
        }
    }

    /// Symbol at step `i` of the infinite word.
    pub fn at(&self, i: usize) -> &LabelSet {
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// The word with its first symbol prepended.
    pub fn prepend(&self, sigma: LabelSet) -> LassoTrace {
        let mut prefix = Vec::with_capacity(self.prefix.len() + 1);
        prefix.push(sigma);
        prefix.extend(self.prefix.iter().cloned());
        LassoTrace { prefix, cycle: self.cycle.clone() }
    }

    /// Every lasso word over the power set of `alphabet` with
    /// `|prefix| <= max_prefix` and `1 <= |loop| <= max_loop`.
    pub fn enumerate(alphabet: &BTreeSet<Proposition>, max_prefix: usize, max_loop: usize) -> Vec<LassoTrace> {
        let symbols = power_set(alphabet);
        let words = |len: usize| -> Vec<Vec<LabelSet>> {
            let mut acc: Vec<Vec<LabelSet>> = vec![Vec::new()];
            for _ in 0..len {
                acc = acc
                    .into_iter()
                    .flat_map(|w| {
                        symbols.iter().map(move |s| {
                            let mut w = w.clone();
                            w.push(s.clone());
                            w
                        })
                    })
                    .collect();
            }
            acc
        };
        let mut out = Vec::new();
        for p in 0..=max_prefix {
            let prefixes = words(p);
            for l in 1..=max_loop {
                let loops = words(l);
                for pre in &prefixes {
                    for lp in &loops {
                        out.push(LassoTrace { prefix: pre.clone(), cycle: lp.clone() });
                    }
                }
            }
        }
        out
    }
}

/// All subsets of `alphabet`, in binary-counter order.
pub fn power_set(alphabet: &BTreeSet<Proposition>) -> Vec<LabelSet> {
    let atoms: Vec<&Proposition> = alphabet.iter().collect();
    assert!(atoms.len() < 24, "power set of {} atoms is too large", atoms.len());
    (0u32..(1 << atoms.len()))
        .map(|mask| {
            atoms
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, p)| (*p).clone())
                .collect()
        })
        .collect()
}
