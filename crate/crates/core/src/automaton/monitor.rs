use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{BuchiAutomaton, StateId};
use crate::ltl::LabelSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonitorStatus {
    Violated,
    Open,
    SatisfiedSink,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonitorStep {
    pub frontier: BTreeSet<StateId>,
    pub accepting_hit: bool,
    pub status: MonitorStatus,
}

fn status_of(a: &BuchiAutomaton, frontier: &BTreeSet<StateId>) -> MonitorStatus {
    if frontier.is_empty() {
        MonitorStatus::Violated
    } else if frontier.iter().any(|s| a.sat_sink().contains(s)) {
        MonitorStatus::SatisfiedSink
    } else {
        MonitorStatus::Open
    }
}

/// Subset-tracking step: guard-consistent successors with dead states pruned.
pub fn step_monitor(a: &BuchiAutomaton, frontier: &BTreeSet<StateId>, sigma: &LabelSet) -> MonitorStep {
    let next: BTreeSet<StateId> =
        frontier.iter().flat_map(|&s| a.successors(s, sigma)).filter(|t| !a.is_dead(*t)).collect();
    MonitorStep {
        accepting_hit: next.iter().any(|&t| a.is_accepting(t)),
        status: status_of(a, &next),
        frontier: next,
    }
}

/// Per-episode monitor state. Once violated the frontier stays empty.
#[derive(Debug, Clone)]
pub struct Monitor {
    frontier: BTreeSet<StateId>,
    status: MonitorStatus,
    accepting_visits: usize,
    steps: usize,
}

impl Monitor {
    pub fn new(a: &BuchiAutomaton) -> Self {
        let frontier: BTreeSet<StateId> = a.initial().iter().copied().filter(|s| !a.is_dead(*s)).collect();
        Monitor { status: status_of(a, &frontier), frontier, accepting_visits: 0, steps: 0 }
    }

    pub fn frontier(&self) -> &BTreeSet<StateId> {
        &self.frontier
    }

    pub fn status(&self) -> MonitorStatus {
        self.status
    }

    pub fn accepting_visits(&self) -> usize {
        self.accepting_visits
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn step(&mut self, a: &BuchiAutomaton, sigma: &LabelSet) -> MonitorStep {
        let out = step_monitor(a, &self.frontier, sigma);
        self.steps += 1;
        if out.accepting_hit {
            self.accepting_visits += 1;
        }
        self.frontier = out.frontier.clone();
        self.status = out.status;
        out
    }
}
