use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use super::{BuchiAutomaton, Guard, GuardedEdge, StateId, StateLabel};
use crate::ltl::{implies, nnf, Formula, Proposition};
use crate::progression::simplify;

pub const DEFAULT_STATE_CAP: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("automaton exceeds the state cap of {cap}")]
    CompileBudgetExceeded { cap: usize },
}

#[derive(Debug, Clone, Copy)]
pub struct CompileOptions {
    pub state_cap: usize,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions { state_cap: DEFAULT_STATE_CAP }
    }
}

pub fn compile(f: &Formula) -> Result<BuchiAutomaton, CompileError> {
    compile_with(f, CompileOptions::default())
}

/// Tableau construction followed by counter-based degeneralization.
///
/// The input is normalized with `simplify(nnf(f))` first, so callers may pass
/// any formula. Each eventuality (Until or Eventually subformula) contributes
/// one acceptance set; a transition belongs to it unless that eventuality was
/// postponed on it.
pub fn compile_with(f: &Formula, options: CompileOptions) -> Result<BuchiAutomaton, CompileError> {
    let root = simplify(&nnf(f));
    let mut eventualities = Vec::new();
    collect_eventualities(&root, &mut eventualities);
    eventualities.sort();
    eventualities.dedup();
    let m = eventualities.len();
    let index: HashMap<Formula, usize> = eventualities.iter().cloned().enumerate().map(|(i, u)| (u, i)).collect();
    let goals: Vec<Formula> = eventualities
        .iter()
        .map(|u| match u {
            Formula::Until(_, b) => b.as_ref().clone(),
            Formula::Eventually(a) => a.as_ref().clone(),
            _ => unreachable!(),
        })
        .collect();

    let mut states: Vec<StateLabel> = Vec::new();
    let mut ids: HashMap<(Vec<Formula>, usize), StateId> = HashMap::new();
    let mut covers_of: HashMap<Vec<Formula>, Vec<Cover>> = HashMap::new();
    let mut edges = Vec::new();
    let mut queue = VecDeque::new();

    let init = obligations(std::iter::once(root.clone()));
    states.push(StateLabel { obligations: init.clone(), level: 0 });
    ids.insert((init, 0), 0);
    queue.push_back(0);

    while let Some(s) = queue.pop_front() {
        let StateLabel { obligations: obl, level } = states[s].clone();
        let covers = covers_of
            .entry(obl.clone())
            .or_insert_with(|| expand(&obl, &index, &goals))
            .clone();
        for cover in covers {
            let mut next_level = if level == m { 0 } else { level };
            while next_level < m && cover.marks[next_level] {
                next_level += 1;
            }
            let key = (cover.next.clone(), next_level);
            let t = match ids.get(&key) {
                Some(&t) => t,
                None => {
                    if states.len() >= options.state_cap {
                        return Err(CompileError::CompileBudgetExceeded { cap: options.state_cap });
                    }
                    let t = states.len();
                    states.push(StateLabel { obligations: cover.next.clone(), level: next_level });
                    ids.insert(key, t);
                    queue.push_back(t);
                    t
                }
            };
            edges.push(GuardedEdge { source: s, target: t, guard: cover.guard });
        }
    }

    let accepting = states.iter().enumerate().filter(|(_, st)| st.level == m).map(|(i, _)| i).collect();
    let edges = drop_subsumed_edges(edges);
    Ok(BuchiAutomaton::assemble(root, states, vec![0], edges, accepting, m))
}

fn collect_eventualities(f: &Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => {}
        Formula::Not(a) | Formula::Next(a) | Formula::Always(a) => collect_eventualities(a, out),
        Formula::Eventually(a) => {
            out.push(f.clone());
            collect_eventualities(a, out);
        }
        Formula::Until(a, b) => {
            out.push(f.clone());
            collect_eventualities(a, out);
            collect_eventualities(b, out);
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_eventualities(a, out);
            collect_eventualities(b, out);
        }
    }
}

/// Canonical obligation set: conjunctions flattened, `true` dropped, and
/// operands implied by another operand removed.
fn obligations(parts: impl IntoIterator<Item = Formula>) -> Vec<Formula> {
    let mut flat = Vec::new();
    for p in parts {
        let mut conj = Vec::new();
        p.flatten_and(&mut conj);
        flat.extend(conj.into_iter().cloned());
    }
    if flat.contains(&Formula::False) {
        return vec![Formula::False];
    }
    flat.retain(|p| *p != Formula::True);
    flat.sort();
    flat.dedup();
    let mut keep = vec![true; flat.len()];
    for i in 0..flat.len() {
        if (0..flat.len()).any(|j| j != i && keep[j] && implies(&flat[j], &flat[i])) {
            keep[i] = false;
        }
    }
    flat.into_iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p).collect()
}

#[derive(Debug, Clone)]
struct Cover {
    guard: Guard,
    next: Vec<Formula>,
    marks: Vec<bool>,
}

#[derive(Clone, Default)]
struct Node {
    todo: Vec<Formula>,
    old: BTreeSet<Formula>,
    pos: BTreeSet<Proposition>,
    neg: BTreeSet<Proposition>,
    next: Vec<Formula>,
    postponed: BTreeSet<usize>,
}

fn expand(obl: &[Formula], index: &HashMap<Formula, usize>, goals: &[Formula]) -> Vec<Cover> {
    let mut done = Vec::new();
    let mut stack = vec![Node { todo: obl.iter().rev().cloned().collect(), ..Node::default() }];
    while let Some(mut node) = stack.pop() {
        let Some(f) = node.todo.pop() else {
            done.push(node);
            continue;
        };
        if !node.old.insert(f.clone()) {
            stack.push(node);
            continue;
        }
        match &f {
            Formula::True => stack.push(node),
            Formula::False => {}
            Formula::Atom(p) => {
                if !node.neg.contains(p) {
                    node.pos.insert(p.clone());
                    stack.push(node);
                }
            }
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Atom(p) => {
                    if !node.pos.contains(p) {
                        node.neg.insert(p.clone());
                        stack.push(node);
                    }
                }
                _ => {
                    node.todo.push(nnf(&f));
                    stack.push(node);
                }
            },
            Formula::Implies(..) => {
                node.todo.push(nnf(&f));
                stack.push(node);
            }
            Formula::And(a, b) => {
                node.todo.push(b.as_ref().clone());
                node.todo.push(a.as_ref().clone());
                stack.push(node);
            }
            Formula::Or(a, b) => {
                let mut second = node.clone();
                second.todo.push(b.as_ref().clone());
                // Exclusive branches keep guards disjoint where possible.
                if a.is_propositional() {
                    second.todo.push(nnf(&Formula::not(a.as_ref().clone())));
                }
                node.todo.push(a.as_ref().clone());
                stack.push(second);
                stack.push(node);
            }
            Formula::Until(a, b) => {
                let mut later = node.clone();
                later.todo.push(a.as_ref().clone());
                if b.is_propositional() {
                    later.todo.push(nnf(&Formula::not(b.as_ref().clone())));
                }
                later.next.push(f.clone());
                later.postponed.insert(index[&f]);
                node.todo.push(b.as_ref().clone());
                stack.push(later);
                stack.push(node);
            }
            Formula::Eventually(a) => {
                let mut later = node.clone();
                if a.is_propositional() {
                    later.todo.push(nnf(&Formula::not(a.as_ref().clone())));
                }
                later.next.push(f.clone());
                later.postponed.insert(index[&f]);
                node.todo.push(a.as_ref().clone());
                stack.push(later);
                stack.push(node);
            }
            Formula::Always(a) => {
                node.todo.push(a.as_ref().clone());
                node.next.push(f.clone());
                stack.push(node);
            }
            Formula::Next(a) => {
                node.next.push(a.as_ref().clone());
                stack.push(node);
            }
        }
    }

    let mut covers: Vec<Cover> = done
        .into_iter()
        .map(|n| {
            let marks = (0..goals.len()).map(|i| !n.postponed.contains(&i) || n.old.contains(&goals[i])).collect();
            Cover { guard: Guard::new(n.pos, n.neg), next: obligations(n.next), marks }
        })
        .filter(|c| c.next != [Formula::False])
        .collect();
    // A cover whose guard is weaker, successor identical and marks no fewer
    // makes the other one redundant.
    let mut keep = vec![true; covers.len()];
    for i in 0..covers.len() {
        for j in 0..covers.len() {
            if i != j
                && keep[j]
                && covers[j].next == covers[i].next
                && covers[j].guard.subsumes(&covers[i].guard)
                && covers[j].marks.iter().zip(&covers[i].marks).all(|(mj, mi)| *mj || !*mi)
                && (covers[j].guard != covers[i].guard || covers[j].marks != covers[i].marks || j < i)
            {
                keep[i] = false;
                break;
            }
        }
    }
    covers = covers.into_iter().zip(keep).filter(|(_, k)| *k).map(|(c, _)| c).collect();
    covers
}

fn drop_subsumed_edges(edges: Vec<GuardedEdge>) -> Vec<GuardedEdge> {
    let mut by_pair: HashMap<(StateId, StateId), Vec<Guard>> = HashMap::new();
    for e in edges {
        by_pair.entry((e.source, e.target)).or_default().push(e.guard);
    }
    let mut out = Vec::new();
    for ((source, target), mut guards) in by_pair {
        guards.sort();
        guards.dedup();
        let kept: Vec<Guard> = guards
            .iter()
            .filter(|g| !guards.iter().any(|h| h != *g && h.subsumes(g)))
            .cloned()
            .collect();
        out.extend(kept.into_iter().map(|guard| GuardedEdge { source, target, guard }));
    }
    out
}
