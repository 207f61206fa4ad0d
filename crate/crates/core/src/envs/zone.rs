//! Planar robots among colored circular zones.

use std::collections::BTreeSet;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::geometry::{dist2, lidar, reflect, Vec2};
use super::{
    build_layout, check_unit_box, Action, ActionSpace, Clock, EnvError, Environment, LayoutSlice, ObsPart,
    Observation, StepResult,
};
use crate::automaton::AssignmentDomain;
use crate::ltl::{prop, LabelSet, Proposition};

pub const PLACEMENT_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Robot {
    Point,
    Car,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZoneConfig {
    pub half_extent: f64,
    pub colors: Vec<Proposition>,
    pub zones_per_color: usize,
    pub zone_radius: f64,
    pub robot: Robot,
    pub lidar_bins: usize,
    pub lidar_range: f64,
    pub dt: f64,
    pub horizon: usize,
    pub dynamic_zones: usize,
    pub zone_speed: f64,
    pub n_agents: usize,
    /// Radius of an agent as seen by other agents' LiDAR.
    pub agent_radius: f64,
    pub max_speed: f64,
    pub max_turn_rate: f64,
    pub track_width: f64,
}

impl Default for ZoneConfig {
    fn default() -> Self {
        ZoneConfig {
            half_extent: 2.5,
            colors: ["b", "g", "m", "y"].into_iter().map(prop).collect(),
            zones_per_color: 2,
            zone_radius: 0.3,
            robot: Robot::Point,
            lidar_bins: 16,
            lidar_range: 3.0,
            dt: 0.1,
            horizon: 1000,
            dynamic_zones: 0,
            zone_speed: 0.2,
            n_agents: 1,
            agent_radius: 0.1,
            max_speed: 1.0,
            max_turn_rate: 2.0,
            track_width: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Zone {
    pub color: Proposition,
    pub center: Vec2,
    pub radius: f64,
    pub velocity: Vec2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub position: Vec2,
    pub heading: f64,
}

/// Complete physical state: zones and agent poses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZoneLayout {
    pub zones: Vec<Zone>,
    pub agents: Vec<Pose>,
}

/// Moves every zone with nonzero velocity, reflecting off `±bound`.
/// Zones may overlap each other while moving.
pub fn advance_dynamic_zones(zones: &mut [Zone], dt: f64, half_extent: f64) {
    for z in zones.iter_mut().filter(|z| z.velocity != [0.0, 0.0]) {
        let bound = half_extent - z.radius;
        let (x, vx) = reflect(z.center[0], z.velocity[0], dt, bound);
        let (y, vy) = reflect(z.center[1], z.velocity[1], dt, bound);
        z.center = [x, y];
        z.velocity = [vx, vy];
    }
}

#[derive(Debug, Clone)]
pub struct ZoneEnv {
    config: ZoneConfig,
    clock: Clock,
    state: Option<ZoneLayout>,
    /// Last commanded linear and angular velocity per agent.
    velocities: Vec<[f64; 2]>,
}

impl ZoneEnv {
    pub fn new(config: ZoneConfig) -> Result<Self, EnvError> {
        if config.n_agents == 0 || config.colors.is_empty() || config.lidar_bins == 0 {
            return Err(EnvError::InvalidConfig("need at least one agent, color and lidar bin".into()));
        }
        if config.dynamic_zones > config.colors.len() * config.zones_per_color {
            return Err(EnvError::InvalidConfig("more dynamic zones than zones".into()));
        }
        let horizon = config.horizon;
        Ok(ZoneEnv { config, clock: Clock::new(horizon), state: None, velocities: Vec::new() })
    }

    pub fn config(&self) -> &ZoneConfig {
        &self.config
    }

    pub fn state(&self) -> Option<&ZoneLayout> {
        self.state.as_ref()
    }

    /// Proposition for `color` observed by agent `i`.
    pub fn prop_for(&self, color: &Proposition, agent: usize) -> Proposition {
        if self.config.n_agents > 1 {
            prop(&format!("{color}_{agent}"))
        } else {
            color.clone()
        }
    }

    /// Rejection-samples zones and agent poses. Placement and zone motion use
    /// separate streams of the same seed.
    pub fn sample_layout(config: &ZoneConfig, seed: u64) -> Result<ZoneLayout, EnvError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut motion = ChaCha8Rng::seed_from_u64(seed);
        motion.set_stream(1);
        let r = config.zone_radius;
        let zone_bound = config.half_extent - r;
        let mut zones: Vec<Zone> = Vec::new();
        for color in &config.colors {
            for _ in 0..config.zones_per_color {
                let center = (0..PLACEMENT_ATTEMPTS)
                    .map(|_| [rng.random_range(-zone_bound..=zone_bound), rng.random_range(-zone_bound..=zone_bound)])
                    .find(|c| zones.iter().all(|z| dist2(*c, z.center) >= 2.0 * r))
                    .ok_or(EnvError::PlacementFailure { attempts: PLACEMENT_ATTEMPTS })?;
                zones.push(Zone { color: color.clone(), center, radius: r, velocity: [0.0, 0.0] });
            }
        }
        for z in zones.iter_mut().take(config.dynamic_zones) {
            let angle = motion.random_range(0.0..TAU);
            z.velocity = [config.zone_speed * angle.cos(), config.zone_speed * angle.sin()];
        }
        let agent_bound = config.half_extent - config.agent_radius;
        let mut agents = Vec::new();
        for _ in 0..config.n_agents {
            let position = (0..PLACEMENT_ATTEMPTS)
                .map(|_| [rng.random_range(-agent_bound..=agent_bound), rng.random_range(-agent_bound..=agent_bound)])
                .find(|p| zones.iter().all(|z| dist2(*p, z.center) > z.radius))
                .ok_or(EnvError::PlacementFailure { attempts: PLACEMENT_ATTEMPTS })?;
            agents.push(Pose { position, heading: rng.random_range(0.0..TAU) });
        }
        Ok(ZoneLayout { zones, agents })
    }

    pub fn reset_with_layout(&mut self, layout: ZoneLayout) -> Result<(Vec<Observation>, LabelSet), EnvError> {
        if layout.agents.len() != self.config.n_agents {
            return Err(EnvError::InvalidConfig(format!(
                "layout has {} agents, config {}",
                layout.agents.len(),
                self.config.n_agents
            )));
        }
        self.velocities = vec![[0.0, 0.0]; layout.agents.len()];
        self.state = Some(layout);
        self.clock.reset();
        Ok((self.observe(), self.labels()))
    }

    fn move_agent(&self, pose: &mut Pose, u: &[f64]) -> [f64; 2] {
        let c = &self.config;
        let (v, omega) = match c.robot {
            Robot::Point => (u[1] * c.max_speed, u[0] * c.max_turn_rate),
            Robot::Car => ((u[0] + u[1]) / 2.0 * c.max_speed, (u[1] - u[0]) / c.track_width * c.max_speed),
        };
        pose.heading = (pose.heading + omega * c.dt).rem_euclid(TAU);
        let b = c.half_extent;
        pose.position = [
            (pose.position[0] + v * c.dt * pose.heading.cos()).clamp(-b, b),
            (pose.position[1] + v * c.dt * pose.heading.sin()).clamp(-b, b),
        ];
        [v, omega]
    }

    fn agent_labels(&self, state: &ZoneLayout, i: usize) -> LabelSet {
        let p = state.agents[i].position;
        state
            .zones
            .iter()
            .filter(|z| dist2(p, z.center) <= z.radius)
            .map(|z| self.prop_for(&z.color, i))
            .collect()
    }
}

impl Environment for ZoneEnv {
    fn id(&self) -> &'static str {
        match (self.config.n_agents > 1, self.config.robot) {
            (true, _) => "zone-multi",
            (false, Robot::Point) => "zone-point",
            (false, Robot::Car) => "zone-car",
        }
    }

    fn alphabet(&self) -> BTreeSet<Proposition> {
        (0..self.config.n_agents).flat_map(|i| self.config.colors.iter().map(move |c| self.prop_for(c, i))).collect()
    }

    fn assignment_domain(&self) -> AssignmentDomain {
        if self.config.dynamic_zones > 0 {
            AssignmentDomain::Any
        } else if self.config.n_agents > 1 {
            AssignmentDomain::AtMostOnePerAgent
        } else {
            AssignmentDomain::AtMostOne
        }
    }

    fn action_space(&self) -> ActionSpace {
        if self.config.n_agents > 1 {
            ActionSpace::Joint { agents: self.config.n_agents, dim: 2, low: -1.0, high: 1.0 }
        } else {
            ActionSpace::Box { dim: 2, low: -1.0, high: 1.0 }
        }
    }

    fn horizon(&self) -> usize {
        self.config.horizon
    }

    fn n_agents(&self) -> usize {
        self.config.n_agents
    }

    fn layout(&self) -> Vec<LayoutSlice> {
        let b = self.config.lidar_bins;
        let names: Vec<String> = self.config.colors.iter().map(|c| format!("lidar_{c}")).collect();
        let mut parts: Vec<(&str, ObsPart, usize, &str)> =
            names.iter().map(|n| (n.as_str(), ObsPart::Ap, b, "1 - d/range")).collect();
        if self.config.n_agents > 1 {
            parts.push(("lidar_agents", ObsPart::Ap, b, "1 - d/range"));
        }
        parts.push(("velocity", ObsPart::NotAp, 1, "m/s"));
        parts.push(("angular_velocity", ObsPart::NotAp, 1, "rad/s"));
        parts.push(("heading_cos_sin", ObsPart::NotAp, 2, "unit"));
        build_layout(&parts)
    }

    fn reset(&mut self, seed: u64) -> Result<(Vec<Observation>, LabelSet), EnvError> {
        let layout = Self::sample_layout(&self.config, seed)?;
        self.reset_with_layout(layout)
    }

    fn step(&mut self, action: &Action) -> Result<StepResult, EnvError> {
        self.clock.check()?;
        let n = self.config.n_agents;
        let controls: Vec<&[f64]> = match (action, n) {
            (Action::Continuous(u), 1) => vec![u.as_slice()],
            (Action::Joint(us), _) if us.len() == n => us.iter().map(Vec::as_slice).collect(),
            _ => return Err(EnvError::ActionOutOfRange(format!("expected {n} agent control(s), got {action:?}"))),
        };
        for u in &controls {
            check_unit_box(u, 2)?;
        }
        let mut state = self.state.take().ok_or(EnvError::NotReset)?;
        for (i, u) in controls.iter().enumerate() {
            self.velocities[i] = self.move_agent(&mut state.agents[i], u);
        }
        advance_dynamic_zones(&mut state.zones, self.config.dt, self.config.half_extent);
        self.state = Some(state);
        let (terminal, timeout) = self.clock.tick();
        Ok(StepResult {
            obs: self.observe(),
            reward: 0.0,
            terminal,
            timeout,
            propositions: self.labels(),
            step: self.clock.t,
        })
    }

    fn labels(&self) -> LabelSet {
        let Some(state) = &self.state else {
            return LabelSet::new();
        };
        (0..state.agents.len()).flat_map(|i| self.agent_labels(state, i)).collect()
    }

    fn observe(&self) -> Vec<Observation> {
        let Some(state) = &self.state else {
            return vec![Observation::default(); self.config.n_agents];
        };
        let c = &self.config;
        (0..state.agents.len())
            .map(|i| {
                let pose = state.agents[i];
                let mut s_ap = Vec::new();
                for color in &c.colors {
                    let discs: Vec<(Vec2, f64)> =
                        state.zones.iter().filter(|z| &z.color == color).map(|z| (z.center, z.radius)).collect();
                    s_ap.extend(lidar(pose.position, pose.heading, &discs, c.lidar_bins, c.lidar_range));
                }
                if c.n_agents > 1 {
                    let others: Vec<(Vec2, f64)> = state
                        .agents
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .map(|(_, a)| (a.position, c.agent_radius))
                        .collect();
                    s_ap.extend(lidar(pose.position, pose.heading, &others, c.lidar_bins, c.lidar_range));
                }
                let [v, w] = self.velocities[i];
                Observation { s_ap, s_not_ap: vec![v, w, pose.heading.cos(), pose.heading.sin()] }
            })
            .collect()
    }

    fn raw_state(&self) -> serde_json::Value {
        serde_json::json!({
            "env": self.id(),
            "step": self.clock.t,
            "state": self.state,
        })
    }

    fn step_index(&self) -> usize {
        self.clock.t
    }

    fn set_truncation(&mut self, enabled: bool) {
        self.clock.truncate = enabled;
    }
}
