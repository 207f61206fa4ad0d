//! Episode execution: an environment, a monitored specification and an agent.
//!
//! Each step the agent acts, the environment steps, and the post-step label
//! set is fed to both a progression monitor (verdicts) and the compiled
//! automaton (accepting visits, violation by empty frontier).

mod agents;
mod metrics;
mod oracle;
mod reward;

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automaton::{compile, BuchiAutomaton, CompileError, Monitor, MonitorStatus, StateId, SubgoalPlanner, SubgoalStep};
use crate::envs::{Action, ActionSpace, EnvError, Environment, Observation};
use crate::ltl::{Formula, LabelSet};
use crate::progression::{Progressor, Verdict};
use crate::spec_gen::SpecRecord;

pub use agents::{AgentKind, BfsPlanner, GreedyField, RandomAgent, ScriptedAgent, UnknownAgent};
pub use metrics::{evaluate, mix64, EpisodeRecord, EvalConfig, EvalReport, MeanStd, SeedRow, SpecSummary};
pub use oracle::{optimal_steps_letter, OptimalSteps, Unreachable};
pub use reward::{subgoal_reward, RewardWrapper};

/// Infinite-horizon rollouts default to this multiple of the env horizon.
pub const EVAL_HORIZON_FACTOR: usize = 10;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("spec {spec} uses propositions {missing:?} that environment {env} never emits")]
    AlphabetMismatch { spec: String, env: String, missing: Vec<String> },
    #[error("eval horizon {eval_horizon} is shorter than the environment horizon {horizon}")]
    EvalHorizon { eval_horizon: usize, horizon: usize },
    #[error("evaluation needs at least one seed and one episode")]
    EmptyEvaluation,
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Compile(#[from] CompileError),
}

/// A specification compiled once and shared across episodes.
#[derive(Debug, Clone)]
pub struct CompiledSpec {
    pub record: SpecRecord,
    pub automaton: Arc<BuchiAutomaton>,
    pub planner: Arc<SubgoalPlanner>,
}

impl CompiledSpec {
    pub fn new(record: SpecRecord, env: &dyn Environment) -> Result<Self, HarnessError> {
        check_alphabet(&record, env)?;
        let automaton = Arc::new(compile(&record.formula)?);
        let planner = Arc::new(SubgoalPlanner::new(automaton.clone(), env.assignment_domain()));
        Ok(CompiledSpec { record, automaton, planner })
    }
}

fn check_alphabet(record: &SpecRecord, env: &dyn Environment) -> Result<(), HarnessError> {
    let env_alphabet = env.alphabet();
    let missing: Vec<String> =
        record.formula.alphabet().difference(&env_alphabet).map(|p| p.to_string()).collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(HarnessError::AlphabetMismatch { spec: record.id.clone(), env: env.id().to_string(), missing })
    }
}

/// What an agent knows about the specification at the current step.
pub struct SpecContext<'a> {
    /// The progressed obligation.
    pub formula: &'a Formula,
    pub automaton: &'a BuchiAutomaton,
    pub planner: &'a SubgoalPlanner,
    pub frontier: &'a BTreeSet<StateId>,
    /// Stage to pursue next, if any target is still reachable.
    pub subgoal: Option<&'a SubgoalStep>,
}

pub struct AgentView<'a> {
    pub obs: &'a [Observation],
    pub labels: &'a LabelSet,
    pub raw_state: &'a serde_json::Value,
    pub action_space: &'a ActionSpace,
    pub step: usize,
    pub spec: SpecContext<'a>,
}

/// A policy. Agents may keep state within an episode; `reset` starts a new one.
pub trait Agent: Send {
    fn name(&self) -> &str;
    fn reset(&mut self, seed: u64);
    fn act(&mut self, view: &AgentView<'_>) -> Action;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpisodeOutcome {
    pub verdict: Verdict,
    /// Step at which the verdict was decided.
    pub steps_to_decision: Option<usize>,
    /// Steps whose frontier held an accepting state, counted while not violated.
    pub accepting_visits: usize,
    pub trace_len: usize,
}

/// One recorded step of a trajectory. Step 0 is the reset state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub raw_state: serde_json::Value,
    pub propositions: LabelSet,
    pub monitor: MonitorStatus,
    pub verdict: Verdict,
    pub accepting_hit: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EpisodeConfig {
    /// Step budget for infinite-horizon specs; `None` means
    /// `EVAL_HORIZON_FACTOR` times the env horizon.
    pub eval_horizon: Option<usize>,
    pub record: bool,
}

/// Step budget for `spec` in `env`.
pub fn episode_limit(env: &dyn Environment, spec: &SpecRecord, eval_horizon: Option<usize>) -> Result<usize, HarnessError> {
    let horizon = env.horizon();
    if !spec.is_infinite() {
        return Ok(horizon);
    }
    let eval = eval_horizon.unwrap_or(EVAL_HORIZON_FACTOR * horizon);
    if eval < horizon {
        return Err(HarnessError::EvalHorizon { eval_horizon: eval, horizon });
    }
    Ok(eval)
}

pub fn run_episode(
    env: &mut dyn Environment,
    spec: &CompiledSpec,
    agent: &mut dyn Agent,
    seed: u64,
    config: &EpisodeConfig,
) -> Result<(EpisodeOutcome, Vec<StepRecord>), HarnessError> {
    check_alphabet(&spec.record, env)?;
    let limit = episode_limit(env, &spec.record, config.eval_horizon)?;
    let automaton = spec.automaton.as_ref();
    let action_space = env.action_space();
    env.set_truncation(!spec.record.is_infinite());
    let (mut obs, mut labels) = env.reset(seed)?;
    agent.reset(seed);

    let mut progressor = Progressor::new(&spec.record.formula);
    let mut monitor = Monitor::new(automaton);
    let mut verdict = match (progressor.verdict(), monitor.status()) {
        (Verdict::Open, MonitorStatus::Violated) => Verdict::Violated,
        (v, _) => v,
    };
    let mut trace = Vec::new();
    if config.record {
        trace.push(StepRecord {
            step: 0,
            raw_state: env.raw_state(),
            propositions: labels.clone(),
            monitor: monitor.status(),
            verdict,
            accepting_hit: false,
        });
    }
    let mut outcome = EpisodeOutcome {
        verdict,
        steps_to_decision: verdict.is_decided().then_some(0),
        accepting_visits: 0,
        trace_len: 0,
    };
    if verdict.is_decided() {
        return Ok((outcome, trace));
    }

    let mut t = 0;
    while t < limit {
        let subgoal = spec.planner.next_step(monitor.frontier());
        let raw = env.raw_state();
        let action = agent.act(&AgentView {
            obs: &obs,
            labels: &labels,
            raw_state: &raw,
            action_space: &action_space,
            step: t,
            spec: SpecContext {
                formula: progressor.formula(),
                automaton,
                planner: &spec.planner,
                frontier: monitor.frontier(),
                subgoal: subgoal.as_ref(),
            },
        });
        let result = env.step(&action)?;
        t += 1;
        obs = result.obs;
        labels = result.propositions;
        let pv = progressor.step(&labels);
        let ms = monitor.step(automaton, &labels);
        verdict = if pv == Verdict::Violated || ms.status == MonitorStatus::Violated { Verdict::Violated } else { pv };
        if ms.accepting_hit && verdict != Verdict::Violated {
            outcome.accepting_visits += 1;
        }
        if config.record {
            trace.push(StepRecord {
                step: t,
                raw_state: env.raw_state(),
                propositions: labels.clone(),
                monitor: ms.status,
                verdict,
                accepting_hit: ms.accepting_hit,
            });
        }
        if verdict.is_decided() {
            outcome.steps_to_decision = Some(t);
            break;
        }
        if result.terminal {
            break;
        }
    }
    outcome.verdict = verdict;
    outcome.trace_len = t;
    Ok((outcome, trace))
}
