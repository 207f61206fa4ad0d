use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{BuchiAutomaton, Guard, StateId};
use crate::ltl::{LabelSet, Proposition};

const EXPANSION_CAP: usize = 200_000;

/// Which label sets an environment can actually produce in one step.
///
/// Letters and non-overlapping zones make at most one proposition true at a
/// time; multi-agent zones make at most one true per agent. Restricting the
/// planner to these assignments keeps it from planning through symbols the
/// environment never emits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AssignmentDomain {
    Any,
    AtMostOne,
    AtMostOnePerAgent,
    /// Arm labels: at most one gripper literal `g_c`, any set of arm
    /// literals `a_c`, and `g_c` implies `a_c` when both exist.
    AtMostOneGripper,
}

impl AssignmentDomain {
    pub fn assignments(self, alphabet: &BTreeSet<Proposition>) -> Vec<LabelSet> {
        match self {
            AssignmentDomain::Any => crate::ltl::power_set(alphabet),
            AssignmentDomain::AtMostOne => std::iter::once(LabelSet::new())
                .chain(alphabet.iter().map(|p| LabelSet::from([p.clone()])))
                .collect(),
            AssignmentDomain::AtMostOneGripper => {
                let grippers = |p: &Proposition| p.as_str().starts_with("g_");
                let arm_of = |p: &Proposition| crate::ltl::prop(&format!("a_{}", &p.as_str()[2..]));
                let others: BTreeSet<Proposition> = alphabet.iter().filter(|p| !grippers(p)).cloned().collect();
                let mut out = Vec::new();
                for base in crate::ltl::power_set(&others) {
                    out.push(base.clone());
                    for g in alphabet.iter().filter(|p| grippers(p)) {
                        let a = arm_of(g);
                        if alphabet.contains(&a) && !base.contains(&a) {
                            continue;
                        }
                        let mut s = base.clone();
                        s.insert(g.clone());
                        out.push(s);
                    }
                }
                out.sort();
                out
            }
            AssignmentDomain::AtMostOnePerAgent => {
                let mut groups: BTreeMap<Option<&str>, Vec<&Proposition>> = BTreeMap::new();
                for p in alphabet {
                    groups.entry(agent_suffix(p.as_str())).or_default().push(p);
                }
                let mut out = vec![LabelSet::new()];
                for members in groups.values() {
                    let mut grown = Vec::with_capacity(out.len() * (members.len() + 1));
                    for base in &out {
                        grown.push(base.clone());
                        for p in members {
                            let mut s = base.clone();
                            s.insert((*p).clone());
                            grown.push(s);
                        }
                    }
                    out = grown;
                }
                out.sort();
                out
            }
        }
    }
}

fn agent_suffix(name: &str) -> Option<&str> {
    let (_, idx) = name.rsplit_once('_')?;
    (!idx.is_empty() && idx.bytes().all(|b| b.is_ascii_digit())).then_some(idx)
}

/// One reach-avoid stage. `reach` advances along the planned path, `avoid`
/// leads only to dead states. Both are given as guard disjunctions and as the
/// underlying assignment lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgoalStep {
    pub from: StateId,
    pub to: StateId,
    pub reach: Vec<Guard>,
    pub avoid: Vec<Guard>,
    pub reach_assignments: Vec<LabelSet>,
    pub avoid_assignments: Vec<LabelSet>,
}

impl SubgoalStep {
    pub fn is_reach(&self, sigma: &LabelSet) -> bool {
        self.reach.iter().any(|g| g.matches(sigma))
    }

    pub fn is_avoid(&self, sigma: &LabelSet) -> bool {
        self.avoid.iter().any(|g| g.matches(sigma))
    }

    /// Propositions that occur positively in some reach guard.
    pub fn reach_props(&self) -> BTreeSet<Proposition> {
        self.reach.iter().flat_map(|g| g.pos.iter().cloned()).collect()
    }

    /// Propositions that occur positively in some avoid guard.
    pub fn avoid_props(&self) -> BTreeSet<Proposition> {
        self.avoid.iter().flat_map(|g| g.pos.iter().cloned()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TargetKind {
    SatSink,
    AcceptingCycle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgoalPath {
    pub states: Vec<StateId>,
    pub steps: Vec<SubgoalStep>,
    /// Stage that keeps the final accepting state, if one exists.
    pub hold: Option<SubgoalStep>,
    pub target: TargetKind,
}

impl SubgoalPath {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no accepting path is reachable from the initial state")]
pub struct NoAcceptingPath;

pub fn extract_subgoal_sequences(
    a: &BuchiAutomaton,
    max_paths: usize,
    domain: AssignmentDomain,
) -> Result<Vec<SubgoalPath>, NoAcceptingPath> {
    let planner = SubgoalPlanner::new(Arc::new(a.clone()), domain);
    let start = *a.initial().first().ok_or(NoAcceptingPath)?;
    let paths = planner.paths_from(start, max_paths);
    if paths.is_empty() {
        Err(NoAcceptingPath)
    } else {
        Ok(paths)
    }
}

/// Shortest-path planner over the automaton restricted to one assignment
/// domain. Successor sets are tabulated once per (state, assignment).
#[derive(Debug, Clone)]
pub struct SubgoalPlanner {
    automaton: Arc<BuchiAutomaton>,
    domain: AssignmentDomain,
    assignments: Vec<LabelSet>,
    succ: Vec<Vec<Vec<StateId>>>,
    adjacency: Vec<Vec<StateId>>,
    target_kind: TargetKind,
    targets: BTreeSet<StateId>,
    distance: Vec<Option<usize>>,
}

impl SubgoalPlanner {
    pub fn new(automaton: Arc<BuchiAutomaton>, domain: AssignmentDomain) -> Self {
        let a = &automaton;
        let assignments = domain.assignments(a.alphabet());
        let succ: Vec<Vec<Vec<StateId>>> = (0..a.state_count())
            .map(|s| {
                assignments
                    .iter()
                    .map(|sigma| {
                        let mut t: Vec<StateId> = a.successors(s, sigma).filter(|t| !a.is_dead(*t)).collect();
                        t.sort_unstable();
                        t.dedup();
                        t
                    })
                    .collect()
            })
            .collect();
        let adjacency: Vec<Vec<StateId>> = succ
            .iter()
            .map(|row| {
                let set: BTreeSet<StateId> = row.iter().flatten().copied().collect();
                set.into_iter().collect()
            })
            .collect();

        let reachable = reach_set(&adjacency, a.initial());
        let sinks: BTreeSet<StateId> =
            a.sat_sink().iter().copied().filter(|s| !a.is_dead(*s) && reachable.contains(s)).collect();
        let (target_kind, targets) = if !sinks.is_empty() {
            (TargetKind::SatSink, sinks)
        } else {
            let acc = a.accepting().iter().copied().filter(|s| !a.is_dead(*s)).collect();
            (TargetKind::AcceptingCycle, acc)
        };
        let distance = distances(&adjacency, &targets);
        SubgoalPlanner {
            automaton,
            domain,
            assignments,
            succ,
            adjacency,
            target_kind,
            targets,
            distance,
        }
    }

    pub fn automaton(&self) -> &BuchiAutomaton {
        &self.automaton
    }

    pub fn domain(&self) -> AssignmentDomain {
        self.domain
    }

    pub fn assignments(&self) -> &[LabelSet] {
        &self.assignments
    }

    pub fn target_kind(&self) -> TargetKind {
        self.target_kind
    }

    pub fn targets(&self) -> &BTreeSet<StateId> {
        &self.targets
    }

    /// Hops from `s` to the target set, if reachable.
    pub fn distance(&self, s: StateId) -> Option<usize> {
        self.distance.get(s).copied().flatten()
    }

    /// Reach-avoid stage for the hop `from -> to`.
    pub fn step(&self, from: StateId, to: StateId) -> SubgoalStep {
        let mut reach = Vec::new();
        let mut avoid = Vec::new();
        for (k, sigma) in self.assignments.iter().enumerate() {
            let t = &self.succ[from][k];
            if t.is_empty() {
                avoid.push(sigma.clone());
            } else if t.binary_search(&to).is_ok() {
                reach.push(sigma.clone());
            }
        }
        let alphabet = self.automaton.alphabet();
        SubgoalStep {
            from,
            to,
            reach: guards_for(&reach, alphabet, self.domain, self.assignments.len()),
            avoid: guards_for(&avoid, alphabet, self.domain, self.assignments.len()),
            reach_assignments: reach,
            avoid_assignments: avoid,
        }
    }

    fn hold(&self, s: StateId) -> Option<SubgoalStep> {
        if self.target_kind == TargetKind::AcceptingCycle && self.adjacency[s].binary_search(&s).is_ok() {
            Some(self.step(s, s))
        } else {
            None
        }
    }

    /// Loop-free paths from `start` into the target set, shortest first.
    pub fn paths_from(&self, start: StateId, max_paths: usize) -> Vec<SubgoalPath> {
        let mut out = Vec::new();
        let mut queue = VecDeque::from([vec![start]]);
        let mut expanded = 0;
        while let Some(path) = queue.pop_front() {
            if out.len() >= max_paths || expanded >= EXPANSION_CAP {
                break;
            }
            expanded += 1;
            let last = *path.last().unwrap();
            if self.targets.contains(&last) {
                out.push(self.materialize(path));
                continue;
            }
            for &t in &self.adjacency[last] {
                if !path.contains(&t) && self.distance(t).is_some() {
                    let mut p = path.clone();
                    p.push(t);
                    queue.push_back(p);
                }
            }
        }
        out
    }

    fn materialize(&self, states: Vec<StateId>) -> SubgoalPath {
        let steps = states.windows(2).map(|w| self.step(w[0], w[1])).collect();
        let hold = self.hold(*states.last().unwrap());
        SubgoalPath { states, steps, hold, target: self.target_kind }
    }

    /// Frontier state closest to the targets (lowest id on ties).
    pub fn best_state(&self, frontier: &BTreeSet<StateId>) -> Option<StateId> {
        frontier.iter().copied().filter_map(|s| self.distance(s).map(|d| (d, s))).min().map(|(_, s)| s)
    }

    /// Shortest path from `s` to the targets; for accepting-cycle targets a
    /// target state plans a non-empty path back into the target set.
    pub fn shortest_path(&self, s: StateId) -> Option<Vec<StateId>> {
        let cycle = self.target_kind == TargetKind::AcceptingCycle && self.targets.contains(&s);
        if self.targets.contains(&s) && !cycle {
            return Some(vec![s]);
        }
        let mut parent: Vec<Option<StateId>> = vec![None; self.adjacency.len()];
        let mut seen = vec![false; self.adjacency.len()];
        let mut queue = VecDeque::new();
        seen[s] = !cycle;
        for &t in &self.adjacency[s] {
            if cycle && t == s {
                return Some(vec![s, s]);
            }
            if !seen[t] {
                seen[t] = true;
                parent[t] = Some(s);
                queue.push_back(t);
            }
        }
        while let Some(u) = queue.pop_front() {
            if self.targets.contains(&u) {
                let mut path = vec![u];
                let mut cur = u;
                while let Some(p) = parent[cur] {
                    path.push(p);
                    if p == s {
                        break;
                    }
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            for &t in &self.adjacency[u] {
                if !seen[t] {
                    seen[t] = true;
                    parent[t] = Some(u);
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// The stage to pursue next from the current monitor frontier; `None`
    /// once a satisfying sink is reached or no target is reachable.
    pub fn next_step(&self, frontier: &BTreeSet<StateId>) -> Option<SubgoalStep> {
        let s = self.best_state(frontier)?;
        let path = self.shortest_path(s)?;
        (path.len() >= 2).then(|| self.step(path[0], path[1]))
    }
}

fn reach_set(adjacency: &[Vec<StateId>], from: &[StateId]) -> BTreeSet<StateId> {
    let mut seen: BTreeSet<StateId> = from.iter().copied().collect();
    let mut stack: Vec<StateId> = from.to_vec();
    while let Some(s) = stack.pop() {
        for &t in &adjacency[s] {
            if seen.insert(t) {
                stack.push(t);
            }
        }
    }
    seen
}

/// Multi-source BFS on reversed edges.
fn distances(adjacency: &[Vec<StateId>], targets: &BTreeSet<StateId>) -> Vec<Option<usize>> {
    let mut rev = vec![Vec::new(); adjacency.len()];
    for (s, ts) in adjacency.iter().enumerate() {
        for &t in ts {
            rev[t].push(s);
        }
    }
    let mut dist = vec![None; adjacency.len()];
    let mut queue = VecDeque::new();
    for &t in targets {
        dist[t] = Some(0);
        queue.push_back(t);
    }
    while let Some(u) = queue.pop_front() {
        let d = dist[u].unwrap();
        for &p in &rev[u] {
            if dist[p].is_none() {
                dist[p] = Some(d + 1);
                queue.push_back(p);
            }
        }
    }
    dist
}

/// Compact guard disjunction covering `sets`.
fn guards_for(
    sets: &[LabelSet],
    alphabet: &BTreeSet<Proposition>,
    domain: AssignmentDomain,
    domain_size: usize,
) -> Vec<Guard> {
    if sets.is_empty() {
        return Vec::new();
    }
    if sets.len() == domain_size {
        return vec![Guard::default()];
    }
    if domain == AssignmentDomain::AtMostOne {
        return sets
            .iter()
            .map(|s| {
                if s.is_empty() {
                    Guard::new(BTreeSet::new(), alphabet.clone())
                } else {
                    Guard::new(s.clone(), BTreeSet::new())
                }
            })
            .collect();
    }
    prime_implicants(sets.iter().map(|s| Guard::minterm(s, alphabet)).collect())
}

/// Quine-McCluskey merging of minterms into prime implicants.
fn prime_implicants(minterms: Vec<Guard>) -> Vec<Guard> {
    let mut current: HashSet<Guard> = minterms.into_iter().collect();
    let mut primes = BTreeSet::new();
    while !current.is_empty() {
        let mut merged_any = HashSet::new();
        let mut next = HashSet::new();
        for g in &current {
            for p in &g.pos {
                let mut partner = g.clone();
                partner.pos.remove(p);
                partner.neg.insert(p.clone());
                if current.contains(&partner) {
                    let mut m = g.clone();
                    m.pos.remove(p);
                    next.insert(m);
                    merged_any.insert(g.clone());
                    merged_any.insert(partner);
                }
            }
        }
        for g in &current {
            if !merged_any.contains(g) {
                primes.insert(g.clone());
            }
        }
        current = next;
    }
    primes.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::compile;
    use crate::ltl::{labels, parse};

    fn paths(text: &str, domain: AssignmentDomain) -> Vec<SubgoalPath> {
        extract_subgoal_sequences(&compile(&parse(text).unwrap()).unwrap(), 5, domain).unwrap()
    }

    #[test]
    fn domains() {
        let ab = labels(["a", "b"]);
        assert_eq!(AssignmentDomain::Any.assignments(&ab).len(), 4);
        assert_eq!(AssignmentDomain::AtMostOne.assignments(&ab).len(), 3);
        let multi = labels(["b_0", "g_0", "b_1"]);
        // (none | b_0 | g_0) x (none | b_1)
        assert_eq!(AssignmentDomain::AtMostOnePerAgent.assignments(&multi).len(), 6);
        let arm = labels(["g_b", "g_m", "a_b", "a_m"]);
        let sets = AssignmentDomain::AtMostOneGripper.assignments(&arm);
        // four arm subsets, plus g_b or g_m wherever the matching a_ is present
        assert_eq!(sets.len(), 4 + 2 + 2);
        assert!(!sets.contains(&labels(["g_b", "g_m", "a_b", "a_m"])));
        assert!(!sets.contains(&labels(["g_b"])));
    }

    #[test]
    fn sequenced_reach() {
        let p = &paths("F (a & F l)", AssignmentDomain::AtMostOne)[0];
        assert_eq!(p.len(), 2);
        assert_eq!(p.steps[0].reach_assignments, vec![labels(["a"])]);
        assert_eq!(p.steps[1].reach_assignments, vec![labels(["l"])]);
        assert!(p.steps.iter().all(|s| s.avoid.is_empty()));
    }

    #[test]
    fn sequenced_reach_avoid() {
        let p = &paths("!a U (b & (!c U d))", AssignmentDomain::AtMostOne)[0];
        assert_eq!(p.len(), 2);
        assert_eq!(p.steps[0].reach_props(), labels(["b"]));
        assert_eq!(p.steps[0].avoid_props(), labels(["a"]));
        assert_eq!(p.steps[1].reach_props(), labels(["d"]));
        assert_eq!(p.steps[1].avoid_props(), labels(["c"]));
    }

    #[test]
    fn safety_holds_at_initial() {
        let all = paths("G a", AssignmentDomain::Any);
        let p = &all[0];
        assert_eq!(p.len(), 0);
        assert_eq!(p.target, TargetKind::AcceptingCycle);
        let hold = p.hold.as_ref().unwrap();
        assert_eq!(hold.avoid.iter().map(|g| g.to_string()).collect::<Vec<_>>(), vec!["!a"]);
        assert_eq!(hold.reach.iter().map(|g| g.to_string()).collect::<Vec<_>>(), vec!["a"]);
    }

    #[test]
    fn empty_language_has_no_path() {
        let a = compile(&parse("F a & G !a").unwrap()).unwrap();
        assert_eq!(extract_subgoal_sequences(&a, 3, AssignmentDomain::Any), Err(NoAcceptingPath));
    }

    #[test]
    fn prime_implicants_merge() {
        let ab = labels(["a", "b"]);
        let g = guards_for(&[labels(["a"]), labels(["a", "b"])], &ab, AssignmentDomain::Any, 4);
        assert_eq!(g, vec![Guard::new(labels(["a"]), BTreeSet::new())]);
    }

    #[test]
    fn planner_cycles_through_recurrence() {
        let a = Arc::new(compile(&parse("G F a & G F b").unwrap()).unwrap());
        let planner = SubgoalPlanner::new(a.clone(), AssignmentDomain::AtMostOne);
        let mut frontier: BTreeSet<StateId> = a.initial().iter().copied().collect();
        let mut visits = 0;
        for _ in 0..8 {
            let step = planner.next_step(&frontier).unwrap();
            let sigma = step.reach_assignments[0].clone();
            let out = crate::automaton::step_monitor(&a, &frontier, &sigma);
            visits += out.accepting_hit as usize;
            frontier = out.frontier;
        }
        assert!(visits >= 3);
    }
}
