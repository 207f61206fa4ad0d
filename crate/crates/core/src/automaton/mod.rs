//! Büchi automata compiled from LTL by tableau construction.
//!
//! States carry the residual obligation set they were built from plus a
//! degeneralization counter. Edges carry literal-conjunction guards.

mod analysis;
mod monitor;
mod subgoal;
mod tableau;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ltl::{Formula, LabelSet, Proposition};

pub use analysis::{accepts, nonempty_states};
pub use monitor::{step_monitor, Monitor, MonitorStatus, MonitorStep};
pub use subgoal::{
    extract_subgoal_sequences, AssignmentDomain, NoAcceptingPath, SubgoalPath, SubgoalPlanner, SubgoalStep,
    TargetKind,
};
pub use tableau::{compile, compile_with, CompileError, CompileOptions, DEFAULT_STATE_CAP};

pub type StateId = usize;

/// Conjunction of literals; atoms absent from both sets are unconstrained.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Guard {
    pub pos: BTreeSet<Proposition>,
    pub neg: BTreeSet<Proposition>,
}

impl Guard {
    pub fn new(pos: BTreeSet<Proposition>, neg: BTreeSet<Proposition>) -> Self {
        Guard { pos, neg }
    }

    /// The guard that requires exactly `sigma` within `alphabet`.
    pub fn minterm(sigma: &LabelSet, alphabet: &BTreeSet<Proposition>) -> Self {
        Guard {
            pos: alphabet.intersection(sigma).cloned().collect(),
            neg: alphabet.difference(sigma).cloned().collect(),
        }
    }

    pub fn is_true(&self) -> bool {
        self.pos.is_empty() && self.neg.is_empty()
    }

    pub fn is_satisfiable(&self) -> bool {
        self.pos.is_disjoint(&self.neg)
    }

    pub fn matches(&self, sigma: &LabelSet) -> bool {
        self.pos.iter().all(|p| sigma.contains(p)) && self.neg.iter().all(|p| !sigma.contains(p))
    }

    /// `self` is at least as permissive as `other`.
    pub fn subsumes(&self, other: &Guard) -> bool {
        self.pos.is_subset(&other.pos) && self.neg.is_subset(&other.neg)
    }

    pub fn literals(&self) -> Vec<String> {
        let mut lits: Vec<(String, bool)> = self
            .pos
            .iter()
            .map(|p| (p.to_string(), false))
            .chain(self.neg.iter().map(|p| (p.to_string(), true)))
            .collect();
        lits.sort();
        lits.into_iter().map(|(n, negated)| if negated { format!("!{n}") } else { n }).collect()
    }

    pub fn to_formula(&self) -> Formula {
        Formula::conjunction(
            self.pos
                .iter()
                .map(|p| Formula::Atom(p.clone()))
                .chain(self.neg.iter().map(|p| Formula::not(Formula::Atom(p.clone())))),
        )
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_true() {
            return f.write_str("true");
        }
        f.write_str(&self.literals().join(" & "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuardedEdge {
    pub source: StateId,
    pub target: StateId,
    pub guard: Guard,
}

/// Residual obligations of a state and its degeneralization counter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateLabel {
    pub obligations: Vec<Formula>,
    pub level: usize,
}

impl StateLabel {
    pub fn residual(&self) -> Formula {
        Formula::conjunction(self.obligations.iter().cloned())
    }
}

#[derive(Debug, Clone)]
pub struct BuchiAutomaton {
    formula: Formula,
    alphabet: BTreeSet<Proposition>,
    states: Vec<StateLabel>,
    initial: Vec<StateId>,
    edges: Vec<GuardedEdge>,
    outgoing: Vec<Vec<usize>>,
    accepting: BTreeSet<StateId>,
    dead: BTreeSet<StateId>,
    sat_sink: BTreeSet<StateId>,
    acceptance_sets: usize,
}

impl BuchiAutomaton {
    pub(crate) fn assemble(
        formula: Formula,
        states: Vec<StateLabel>,
        initial: Vec<StateId>,
        mut edges: Vec<GuardedEdge>,
        accepting: BTreeSet<StateId>,
        acceptance_sets: usize,
    ) -> Self {
        edges.sort_by(|a, b| (a.source, a.target, &a.guard).cmp(&(b.source, b.target, &b.guard)));
        edges.dedup();
        let mut outgoing = vec![Vec::new(); states.len()];
        for (i, e) in edges.iter().enumerate() {
            outgoing[e.source].push(i);
        }
        let sat_sink = states
            .iter()
            .enumerate()
            .filter(|(_, s)| s.obligations.is_empty())
            .map(|(i, _)| i)
            .collect();
        let mut a = BuchiAutomaton {
            alphabet: formula.alphabet(),
            formula,
            states,
            initial,
            edges,
            outgoing,
            accepting,
            dead: BTreeSet::new(),
            sat_sink,
            acceptance_sets,
        };
        let live = nonempty_states(&a);
        a.dead = (0..a.states.len()).filter(|s| !live.contains(s)).collect();
        a
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn alphabet(&self) -> &BTreeSet<Proposition> {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, id: StateId) -> &StateLabel {
        &self.states[id]
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn edges(&self) -> &[GuardedEdge] {
        &self.edges
    }

    pub fn outgoing(&self, s: StateId) -> impl Iterator<Item = &GuardedEdge> {
        self.outgoing[s].iter().map(move |&i| &self.edges[i])
    }

    /// Targets of guard-consistent edges from `s` on `sigma`.
    pub fn successors<'a>(&'a self, s: StateId, sigma: &'a LabelSet) -> impl Iterator<Item = StateId> + 'a {
        self.outgoing(s).filter(move |e| e.guard.matches(sigma)).map(|e| e.target)
    }

    pub fn accepting(&self) -> &BTreeSet<StateId> {
        &self.accepting
    }

    pub fn is_accepting(&self, s: StateId) -> bool {
        self.accepting.contains(&s)
    }

    pub fn dead(&self) -> &BTreeSet<StateId> {
        &self.dead
    }

    pub fn is_dead(&self, s: StateId) -> bool {
        self.dead.contains(&s)
    }

    pub fn sat_sink(&self) -> &BTreeSet<StateId> {
        &self.sat_sink
    }

    /// Number of generalized acceptance sets before degeneralization.
    pub fn acceptance_sets(&self) -> usize {
        self.acceptance_sets
    }

    pub fn language_is_empty(&self) -> bool {
        self.initial.iter().all(|s| self.dead.contains(s))
    }

    /// Text dump: `state <id> [accepting] [dead] [sink]` lines followed by
    /// `edge <src> <dst> <literals...>` lines, ordered by id.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for id in 0..self.states.len() {
            out.push_str(&format!("state {id}"));
            if self.accepting.contains(&id) {
                out.push_str(" accepting");
            }
            if self.dead.contains(&id) {
                out.push_str(" dead");
            }
            if self.sat_sink.contains(&id) {
                out.push_str(" sink");
            }
            out.push('\n');
        }
        for e in &self.edges {
            out.push_str(&format!("edge {} {}", e.source, e.target));
            for lit in e.guard.literals() {
                out.push(' ');
                out.push_str(&lit);
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::labels;

    #[test]
    fn guard_matching() {
        let g = Guard::new(labels(["a"]), labels(["b"]));
        assert!(g.matches(&labels(["a", "c"])));
        assert!(!g.matches(&labels(["a", "b"])));
        assert!(!g.matches(&labels([])));
        assert_eq!(g.literals(), vec!["a", "!b"]);
        assert!(Guard::default().subsumes(&g));
        assert!(!g.subsumes(&Guard::default()));
        assert_eq!(Guard::minterm(&labels(["a", "z"]), &labels(["a", "b"])), g);
    }
}
