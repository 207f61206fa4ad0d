use std::collections::{BTreeSet, HashMap};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::visit::{Dfs, Reversed};

use super::{BuchiAutomaton, StateId};
use crate::ltl::LassoTrace;

/// States from which some accepting cycle is reachable.
pub fn nonempty_states(a: &BuchiAutomaton) -> BTreeSet<StateId> {
    let mut g = DiGraph::<StateId, ()>::new();
    let nodes: Vec<NodeIndex> = (0..a.state_count()).map(|s| g.add_node(s)).collect();
    for e in a.edges() {
        if e.guard.is_satisfiable() {
            g.add_edge(nodes[e.source], nodes[e.target], ());
        }
    }
    live_nodes(&g, |n| a.is_accepting(g[n])).into_iter().map(|n| g[n]).collect()
}

/// Nodes that reach a cycle through a node satisfying `good`.
fn live_nodes<N>(g: &DiGraph<N, ()>, good: impl Fn(NodeIndex) -> bool) -> Vec<NodeIndex> {
    let mut seeds = Vec::new();
    for scc in tarjan_scc(g) {
        let cyclic = scc.len() > 1 || g.contains_edge(scc[0], scc[0]);
        if cyclic && scc.iter().any(|&n| good(n)) {
            seeds.extend(scc);
        }
    }
    let rev = Reversed(g);
    let mut live = vec![false; g.node_count()];
    for s in seeds {
        if live[s.index()] {
            continue;
        }
        let mut dfs = Dfs::new(rev, s);
        while let Some(n) = dfs.next(rev) {
            live[n.index()] = true;
        }
    }
    g.node_indices().filter(|n| live[n.index()]).collect()
}

/// Büchi acceptance of a lasso word, via the product of the word's positions
/// with the automaton.
pub fn accepts(a: &BuchiAutomaton, w: &LassoTrace) -> bool {
    let mut g = DiGraph::<(usize, StateId), ()>::new();
    let mut ids: HashMap<(usize, StateId), NodeIndex> = HashMap::new();
    let mut stack = Vec::new();
    for &s in a.initial() {
        let n = g.add_node((0, s));
        ids.insert((0, s), n);
        stack.push(n);
    }
    while let Some(n) = stack.pop() {
        let (pos, s) = g[n];
        let next = w.successor(pos);
        for t in a.successors(s, w.symbol(pos)) {
            let m = *ids.entry((next, t)).or_insert_with(|| {
                let m = g.add_node((next, t));
                stack.push(m);
                m
            });
            g.update_edge(n, m, ());
        }
    }
    let live = live_nodes(&g, |n| a.is_accepting(g[n].1));
    a.initial().iter().any(|&s| live.contains(&ids[&(0, s)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::compile;
    use crate::ltl::{labels, parse, LabelSet};

    fn lasso(prefix: &[&[&str]], cycle: &[&[&str]]) -> LassoTrace {
        let sets = |v: &[&[&str]]| v.iter().map(|s| labels(s.iter().copied())).collect::<Vec<LabelSet>>();
        LassoTrace::new(sets(prefix), sets(cycle)).unwrap()
    }

    /// Plain recursive search, independent of the SCC code path.
    fn brute_live(a: &BuchiAutomaton) -> BTreeSet<StateId> {
        let succ = |s: StateId| a.outgoing(s).map(|e| e.target).collect::<Vec<_>>();
        let reach_from = |s: StateId| {
            let mut seen = BTreeSet::new();
            let mut stack = succ(s);
            while let Some(t) = stack.pop() {
                if seen.insert(t) {
                    stack.extend(succ(t));
                }
            }
            seen
        };
        let on_cycle: Vec<StateId> =
            a.accepting().iter().copied().filter(|&q| reach_from(q).contains(&q)).collect();
        (0..a.state_count())
            .filter(|&s| {
                let r = reach_from(s);
                on_cycle.iter().any(|&q| q == s || r.contains(&q))
            })
            .collect()
    }

    #[test]
    fn examples() {
        let fa = compile(&parse("F a").unwrap()).unwrap();
        assert!(accepts(&fa, &lasso(&[&["a"]], &[&[]])));
        let ga = compile(&parse("G a").unwrap()).unwrap();
        assert!(!accepts(&ga, &lasso(&[&["a"]], &[&[]])));
        let rec = compile(&parse("G F b & G F g & G !(y | m)").unwrap()).unwrap();
        assert!(accepts(&rec, &lasso(&[], &[&["b"], &["g"]])));
        assert!(!accepts(&rec, &lasso(&[], &[&["b"], &["g", "y"]])));
        assert_eq!(nonempty_states(&fa).len(), fa.state_count());
        assert!(nonempty_states(&compile(&parse("false").unwrap()).unwrap()).is_empty());
    }

    #[test]
    fn dead_set_matches_brute_force() {
        for text in [
            "a & (!a U b)",
            "(!a U b) & G !b",
            "F a & G !a",
            "!(a | b) U (c & (!(d | e) U f))",
            "(F b) & (!(c | d) U (e & F f))",
            "G F a & G (a -> (F (b & F c) & (!d U e))) & G !(f | g)",
            "F G a & G !b",
            "X a & G !a",
        ] {
            let a = compile(&parse(text).unwrap()).unwrap();
            assert_eq!(nonempty_states(&a), brute_live(&a), "{text}");
            let dead: BTreeSet<StateId> = (0..a.state_count()).filter(|s| !brute_live(&a).contains(s)).collect();
            assert_eq!(a.dead(), &dead, "{text}");
        }
    }
}
