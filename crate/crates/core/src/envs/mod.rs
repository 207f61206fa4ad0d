//! Seedable environments with proposition labeling.
//!
//! Every environment exposes the same [`Environment`] interface: `reset`
//! draws a layout from the seed, `step` applies dynamics and recomputes the
//! label set, and `raw_state` dumps the full state as JSON for replay and
//! independent label checks.

pub mod arm;
pub mod geometry;
pub mod letter;
pub mod zone;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automaton::AssignmentDomain;
use crate::ltl::{LabelSet, Proposition};

pub use arm::{ArmConfig, ArmLayout, ArmMode, ArmReach, Region};
pub use letter::{LetterLayout, LetterWorld, LetterWorldConfig, MOVES};
pub use zone::{Pose, Robot, Zone, ZoneConfig, ZoneEnv, ZoneLayout};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnvError {
    #[error("action out of range: {0}")]
    ActionOutOfRange(String),
    #[error("step called after the episode terminated")]
    SteppedAfterTerminal,
    #[error("placement failed after {attempts} attempts")]
    PlacementFailure { attempts: usize },
    #[error("step called before reset")]
    NotReset,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Action {
    Discrete(usize),
    Continuous(Vec<f64>),
    Joint(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActionSpace {
    Discrete { n: usize },
    Box { dim: usize, low: f64, high: f64 },
    Joint { agents: usize, dim: usize, low: f64, high: f64 },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub s_ap: Vec<f64>,
    pub s_not_ap: Vec<f64>,
}

impl Observation {
    pub fn flat(&self) -> Vec<f64> {
        self.s_ap.iter().chain(&self.s_not_ap).copied().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObsPart {
    Ap,
    NotAp,
}

/// Named slice of an observation vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutSlice {
    pub name: String,
    pub part: ObsPart,
    pub offset: usize,
    pub len: usize,
    pub unit: String,
}

pub(crate) fn build_layout(parts: &[(&str, ObsPart, usize, &str)]) -> Vec<LayoutSlice> {
    let mut ap = 0;
    let mut ego = 0;
    parts
        .iter()
        .map(|&(name, part, len, unit)| {
            let cursor = if part == ObsPart::Ap { &mut ap } else { &mut ego };
            let s = LayoutSlice { name: name.to_string(), part, offset: *cursor, len, unit: unit.to_string() };
            *cursor += len;
            s
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepResult {
    /// One observation per agent.
    pub obs: Vec<Observation>,
    pub reward: f64,
    pub terminal: bool,
    pub timeout: bool,
    pub propositions: LabelSet,
    pub step: usize,
}

pub trait Environment: Send {
    fn id(&self) -> &'static str;
    fn alphabet(&self) -> BTreeSet<Proposition>;
    /// Label sets this environment can emit in one step.
    fn assignment_domain(&self) -> AssignmentDomain;
    fn action_space(&self) -> ActionSpace;
    fn horizon(&self) -> usize;
    fn n_agents(&self) -> usize {
        1
    }
    fn layout(&self) -> Vec<LayoutSlice>;
    fn reset(&mut self, seed: u64) -> Result<(Vec<Observation>, LabelSet), EnvError>;
    fn step(&mut self, action: &Action) -> Result<StepResult, EnvError>;
    fn labels(&self) -> LabelSet;
    fn observe(&self) -> Vec<Observation>;
    fn raw_state(&self) -> serde_json::Value;
    fn step_index(&self) -> usize;
    /// When disabled, reaching the horizon reports `timeout` but does not end
    /// the episode, so long evaluation rollouts can continue past it.
    fn set_truncation(&mut self, enabled: bool);
}

/// Step counter shared by the environments.
#[derive(Debug, Clone)]
pub(crate) struct Clock {
    pub horizon: usize,
    pub t: usize,
    pub truncate: bool,
    pub terminal: bool,
    pub started: bool,
}

impl Clock {
    pub fn new(horizon: usize) -> Self {
        Clock { horizon, t: 0, truncate: true, terminal: false, started: false }
    }

    pub fn reset(&mut self) {
        self.t = 0;
        self.terminal = false;
        self.started = true;
    }

    pub fn check(&self) -> Result<(), EnvError> {
        if !self.started {
            Err(EnvError::NotReset)
        } else if self.terminal {
            Err(EnvError::SteppedAfterTerminal)
        } else {
            Ok(())
        }
    }

    /// Advances and returns `(terminal, timeout)`.
    pub fn tick(&mut self) -> (bool, bool) {
        self.t += 1;
        let timeout = self.t == self.horizon;
        if timeout && self.truncate {
            self.terminal = true;
        }
        (self.terminal, timeout)
    }
}

pub(crate) fn check_unit_box(values: &[f64], expected: usize) -> Result<(), EnvError> {
    if values.len() != expected {
        return Err(EnvError::ActionOutOfRange(format!("expected {expected} components, got {}", values.len())));
    }
    if let Some(v) = values.iter().find(|v| !(-1.0..=1.0).contains(*v)) {
        return Err(EnvError::ActionOutOfRange(format!("component {v} outside [-1, 1]")));
    }
    Ok(())
}

/// Registry of environment ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EnvKind {
    Letter,
    ZonePoint,
    ZoneCar,
    ZoneMulti,
    ArmGrippers,
    ArmFull,
}

impl EnvKind {
    pub const ALL: [EnvKind; 6] =
        [EnvKind::Letter, EnvKind::ZonePoint, EnvKind::ZoneCar, EnvKind::ZoneMulti, EnvKind::ArmGrippers, EnvKind::ArmFull];

    pub fn id(self) -> &'static str {
        match self {
            EnvKind::Letter => "letter",
            EnvKind::ZonePoint => "zone-point",
            EnvKind::ZoneCar => "zone-car",
            EnvKind::ZoneMulti => "zone-multi",
            EnvKind::ArmGrippers => "arm-grippers",
            EnvKind::ArmFull => "arm-full",
        }
    }

    pub fn make(self) -> Box<dyn Environment> {
        self.make_with(&serde_json::Value::Null).expect("default configs are valid")
    }

    /// Builds the environment with `overrides` (a JSON object of config
    /// fields) applied over this id's default configuration.
    pub fn make_with(self, overrides: &serde_json::Value) -> Result<Box<dyn Environment>, EnvError> {
        fn merged<C: Serialize + serde::de::DeserializeOwned>(base: C, overrides: &serde_json::Value) -> Result<C, EnvError> {
            let mut v = serde_json::to_value(base).expect("configs serialize");
            match overrides {
                serde_json::Value::Null => {}
                serde_json::Value::Object(o) => {
                    let target = v.as_object_mut().expect("configs are objects");
                    for (k, val) in o {
                        if !target.contains_key(k) {
                            return Err(EnvError::InvalidConfig(format!("unknown config field `{k}`")));
                        }
                        target.insert(k.clone(), val.clone());
                    }
                }
                other => return Err(EnvError::InvalidConfig(format!("config overrides must be an object, got {other}"))),
            }
            serde_json::from_value(v).map_err(|e| EnvError::InvalidConfig(e.to_string()))
        }
        let zone = |base: ZoneConfig| -> Result<Box<dyn Environment>, EnvError> {
            Ok(Box::new(ZoneEnv::new(merged(base, overrides)?)?))
        };
        let arm = |base: ArmConfig| -> Result<Box<dyn Environment>, EnvError> {
            Ok(Box::new(ArmReach::new(merged(base, overrides)?)?))
        };
        match self {
            EnvKind::Letter => Ok(Box::new(LetterWorld::new(merged(LetterWorldConfig::default(), overrides)?)?)),
            EnvKind::ZonePoint => zone(ZoneConfig::default()),
            EnvKind::ZoneCar => zone(ZoneConfig { robot: Robot::Car, ..ZoneConfig::default() }),
            EnvKind::ZoneMulti => zone(ZoneConfig { n_agents: 2, ..ZoneConfig::default() }),
            EnvKind::ArmGrippers => arm(ArmConfig::default()),
            EnvKind::ArmFull => arm(ArmConfig { mode: ArmMode::GrippersArm, ..ArmConfig::default() }),
        }
    }
}

impl fmt::Display for EnvKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown environment id `{0}`")]
pub struct UnknownEnv(pub String);

impl FromStr for EnvKind {
    type Err = UnknownEnv;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EnvKind::ALL.into_iter().find(|k| k.id() == s).ok_or_else(|| UnknownEnv(s.to_string()))
    }
}
