//! End-effector reaching among colored spheres.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::geometry::{closest_on_segment, norm3, point_in_sphere, range_bearing, segment_hits_sphere, sub3, Vec3};
use super::zone::PLACEMENT_ATTEMPTS;
use super::{
    build_layout, check_unit_box, Action, ActionSpace, Clock, EnvError, Environment, LayoutSlice, ObsPart,
    Observation, StepResult,
};
use crate::automaton::AssignmentDomain;
use crate::ltl::{prop, LabelSet, Proposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArmMode {
    GrippersOnly,
    GrippersArm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmConfig {
    pub half_extent: f64,
    pub colors: Vec<Proposition>,
    pub region_radius: f64,
    pub mode: ArmMode,
    pub base: Vec3,
    pub max_step: f64,
    pub horizon: usize,
}

impl Default for ArmConfig {
    fn default() -> Self {
        ArmConfig {
            half_extent: 0.5,
            colors: ["b", "g", "m", "y"].into_iter().map(prop).collect(),
            region_radius: 0.08,
            mode: ArmMode::GrippersOnly,
            base: [0.0, 0.0, -0.5],
            max_step: 0.05,
            horizon: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub color: Proposition,
    pub center: Vec3,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmLayout {
    pub regions: Vec<Region>,
    pub base: Vec3,
    pub ee: Vec3,
}

/// Labels of an arm state: `g_c` when the end effector is inside region `c`,
/// `a_c` when the base-to-effector segment touches it. Grippers-only mode
/// uses the bare color names for the end-effector test.
pub fn arm_labels(layout: &ArmLayout, mode: ArmMode) -> LabelSet {
    let mut out = LabelSet::new();
    for r in &layout.regions {
        let inside = point_in_sphere(layout.ee, r.center, r.radius);
        match mode {
            ArmMode::GrippersOnly => {
                if inside {
                    out.insert(r.color.clone());
                }
            }
            ArmMode::GrippersArm => {
                if inside {
                    out.insert(prop(&format!("g_{}", r.color)));
                }
                if segment_hits_sphere(layout.base, layout.ee, r.center, r.radius) {
                    out.insert(prop(&format!("a_{}", r.color)));
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct ArmReach {
    config: ArmConfig,
    clock: Clock,
    state: Option<ArmLayout>,
}

impl ArmReach {
    pub fn new(config: ArmConfig) -> Result<Self, EnvError> {
        if config.colors.is_empty() {
            return Err(EnvError::InvalidConfig("no regions".into()));
        }
        let horizon = config.horizon;
        Ok(ArmReach { config, clock: Clock::new(horizon), state: None })
    }

    pub fn config(&self) -> &ArmConfig {
        &self.config
    }

    pub fn state(&self) -> Option<&ArmLayout> {
        self.state.as_ref()
    }

    pub fn sample_layout(config: &ArmConfig, seed: u64) -> Result<ArmLayout, EnvError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = config.region_radius;
        let h = config.half_extent;
        let mut draw = |bound: f64| -> Vec3 {
            [rng.random_range(-bound..=bound), rng.random_range(-bound..=bound), rng.random_range(-bound..=bound)]
        };
        let mut regions: Vec<Region> = Vec::new();
        for color in &config.colors {
            let center = (0..PLACEMENT_ATTEMPTS)
                .map(|_| draw(h - r))
                .find(|c| regions.iter().all(|q| norm3(sub3(*c, q.center)) >= 2.0 * r))
                .ok_or(EnvError::PlacementFailure { attempts: PLACEMENT_ATTEMPTS })?;
            regions.push(Region { color: color.clone(), center, radius: r });
        }
        let mut layout = ArmLayout { regions, base: config.base, ee: [0.0; 3] };
        let ee = (0..PLACEMENT_ATTEMPTS)
            .map(|_| draw(h))
            .find(|e| {
                layout.ee = *e;
                arm_labels(&layout, ArmMode::GrippersArm).is_empty()
            })
            .ok_or(EnvError::PlacementFailure { attempts: PLACEMENT_ATTEMPTS })?;
        layout.ee = ee;
        Ok(layout)
    }

    pub fn reset_with_layout(&mut self, layout: ArmLayout) -> Result<(Vec<Observation>, LabelSet), EnvError> {
        self.state = Some(layout);
        self.clock.reset();
        Ok((self.observe(), self.labels()))
    }
}

impl Environment for ArmReach {
    fn id(&self) -> &'static str {
        match self.config.mode {
            ArmMode::GrippersOnly => "arm-grippers",
            ArmMode::GrippersArm => "arm-full",
        }
    }

    fn alphabet(&self) -> BTreeSet<Proposition> {
        match self.config.mode {
            ArmMode::GrippersOnly => self.config.colors.iter().cloned().collect(),
            ArmMode::GrippersArm => self
                .config
                .colors
                .iter()
                .flat_map(|c| [prop(&format!("g_{c}")), prop(&format!("a_{c}"))])
                .collect(),
        }
    }

    fn assignment_domain(&self) -> AssignmentDomain {
        match self.config.mode {
            ArmMode::GrippersOnly => AssignmentDomain::AtMostOne,
            ArmMode::GrippersArm => AssignmentDomain::AtMostOneGripper,
        }
    }

    fn action_space(&self) -> ActionSpace {
        ActionSpace::Box { dim: 3, low: -1.0, high: 1.0 }
    }

    fn horizon(&self) -> usize {
        self.config.horizon
    }

    fn layout(&self) -> Vec<LayoutSlice> {
        let k = self.config.colors.len();
        let mut parts = vec![("gripper_range_bearing", ObsPart::Ap, 4 * k, "[m, unit x, unit y, unit z] per region")];
        if self.config.mode == ArmMode::GrippersArm {
            parts.push(("arm_range_bearing", ObsPart::Ap, 4 * k, "[m, unit x, unit y, unit z] per region"));
        }
        parts.push(("ee_position", ObsPart::NotAp, 3, "m"));
        build_layout(&parts)
    }

    fn reset(&mut self, seed: u64) -> Result<(Vec<Observation>, LabelSet), EnvError> {
        let layout = Self::sample_layout(&self.config, seed)?;
        self.reset_with_layout(layout)
    }

    fn step(&mut self, action: &Action) -> Result<StepResult, EnvError> {
        self.clock.check()?;
        let Action::Continuous(u) = action else {
            return Err(EnvError::ActionOutOfRange(format!("expected a 3-vector, got {action:?}")));
        };
        check_unit_box(u, 3)?;
        let h = self.config.half_extent;
        let s = self.config.max_step;
        let state = self.state.as_mut().ok_or(EnvError::NotReset)?;
        for (x, d) in state.ee.iter_mut().zip(u) {
            *x = (*x + s * d).clamp(-h, h);
        }
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
        self.state.as_ref().map(|s| arm_labels(s, self.config.mode)).unwrap_or_default()
    }

    fn observe(&self) -> Vec<Observation> {
        let Some(state) = &self.state else {
            return vec![Observation::default()];
        };
        let mut s_ap = Vec::new();
        for r in &state.regions {
            let (d, u) = range_bearing(state.ee, r.center);
            s_ap.extend([d, u[0], u[1], u[2]]);
        }
        if self.config.mode == ArmMode::GrippersArm {
            for r in &state.regions {
                let (d, u) = range_bearing(closest_on_segment(state.base, state.ee, r.center), r.center);
                s_ap.extend([d, u[0], u[1], u[2]]);
            }
        }
        vec![Observation { s_ap, s_not_ap: state.ee.to_vec() }]
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::labels;

    fn layout(ee: Vec3) -> ArmLayout {
        ArmLayout {
            regions: vec![Region { color: prop("b"), center: [0.2, 0.0, 0.0], radius: 0.08 }],
            base: [0.0, 0.0, -0.5],
            ee,
        }
    }

    #[test]
    fn gripper_inside_region() {
        let l = layout([0.27, 0.0, 0.0]);
        assert_eq!(arm_labels(&l, ArmMode::GrippersArm), labels(["g_b", "a_b"]));
        assert_eq!(arm_labels(&l, ArmMode::GrippersOnly), labels(["b"]));
    }

    #[test]
    fn arm_crosses_region_without_gripper() {
        let l = layout([0.4, 0.0, 0.5]);
        assert_eq!(arm_labels(&l, ArmMode::GrippersArm), labels(["a_b"]));
        assert!(arm_labels(&l, ArmMode::GrippersOnly).is_empty());
    }

    #[test]
    fn reset_keeps_regions_in_box_and_spawns_unlabeled() {
        for mode in [ArmMode::GrippersOnly, ArmMode::GrippersArm] {
            let mut env = ArmReach::new(ArmConfig { mode, ..ArmConfig::default() }).unwrap();
            for seed in 0..20 {
                let (_, l) = env.reset(seed).unwrap();
                assert!(l.is_empty());
                for r in &env.state().unwrap().regions {
                    assert!(r.center.iter().all(|x| x.abs() <= 0.5 - 0.08));
                }
            }
        }
    }

    #[test]
    fn end_effector_moves_by_scaled_delta() {
        let mut env = ArmReach::new(ArmConfig::default()).unwrap();
        env.reset_with_layout(layout([0.0, 0.0, 0.0])).unwrap();
        env.step(&Action::Continuous(vec![1.0, -0.5, 0.0])).unwrap();
        assert_eq!(env.state().unwrap().ee, [0.05, -0.025, 0.0]);
        assert!(matches!(env.step(&Action::Continuous(vec![2.0, 0.0, 0.0])), Err(EnvError::ActionOutOfRange(_))));
    }
}
