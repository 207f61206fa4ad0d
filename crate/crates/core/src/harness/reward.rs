//! Subgoal reward: +1 on reaching the current stage, -1 on entering its
//! avoid set, 0 otherwise. The base environments always reward 0.

use std::collections::BTreeSet;

use crate::automaton::{AssignmentDomain, SubgoalStep};
use crate::envs::{Action, ActionSpace, EnvError, Environment, LayoutSlice, Observation, StepResult};
use crate::ltl::{LabelSet, Proposition};

pub fn subgoal_reward(step: &SubgoalStep, sigma: &LabelSet) -> f64 {
    if step.is_reach(sigma) {
        1.0
    } else if step.is_avoid(sigma) {
        -1.0
    } else {
        0.0
    }
}

/// Environment adapter that replaces the reward with [`subgoal_reward`] for
/// the stage set by [`RewardWrapper::set_subgoal`].
pub struct RewardWrapper<E> {
    inner: E,
    subgoal: Option<SubgoalStep>,
}

impl<E: Environment> RewardWrapper<E> {
    pub fn new(inner: E) -> Self {
        RewardWrapper { inner, subgoal: None }
    }

    pub fn set_subgoal(&mut self, subgoal: Option<SubgoalStep>) {
        self.subgoal = subgoal;
    }

    pub fn inner(&self) -> &E {
        &self.inner
    }

    pub fn into_inner(self) -> E {
        self.inner
    }
}

impl<E: Environment> Environment for RewardWrapper<E> {
    fn id(&self) -> &'static str {
        self.inner.id()
    }

    fn alphabet(&self) -> BTreeSet<Proposition> {
        self.inner.alphabet()
    }

    fn assignment_domain(&self) -> AssignmentDomain {
        self.inner.assignment_domain()
    }

    fn action_space(&self) -> ActionSpace {
        self.inner.action_space()
    }

    fn horizon(&self) -> usize {
        self.inner.horizon()
    }

    fn n_agents(&self) -> usize {
        self.inner.n_agents()
    }

    fn layout(&self) -> Vec<LayoutSlice> {
        self.inner.layout()
    }

    fn reset(&mut self, seed: u64) -> Result<(Vec<Observation>, LabelSet), EnvError> {
        self.inner.reset(seed)
    }

    fn step(&mut self, action: &Action) -> Result<StepResult, EnvError> {
        let mut out = self.inner.step(action)?;
        out.reward += self.subgoal.as_ref().map_or(0.0, |s| subgoal_reward(s, &out.propositions));
        Ok(out)
    }

    fn labels(&self) -> LabelSet {
        self.inner.labels()
    }

    fn observe(&self) -> Vec<Observation> {
        self.inner.observe()
    }

    fn raw_state(&self) -> serde_json::Value {
        self.inner.raw_state()
    }

    fn step_index(&self) -> usize {
        self.inner.step_index()
    }

    fn set_truncation(&mut self, enabled: bool) {
        self.inner.set_truncation(enabled)
    }
}
