//! Reference agents: uniform random, a stage-aware BFS planner for
//! LetterWorld, and a greedy steering agent for every environment.

use std::collections::VecDeque;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Agent, AgentView};
use crate::automaton::{step_monitor, SubgoalStep};
use crate::envs::{Action, ActionSpace, ArmLayout, LetterLayout, ZoneLayout, MOVES};
use crate::ltl::{LabelSet, Proposition};

/// Clearance kept around avoid zones, in zone radii.
pub const CLEARANCE: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AgentKind {
    Random,
    Bfs,
    Greedy,
}

impl AgentKind {
    pub const ALL: [AgentKind; 3] = [AgentKind::Random, AgentKind::Bfs, AgentKind::Greedy];

    pub fn name(self) -> &'static str {
        match self {
            AgentKind::Random => "random",
            AgentKind::Bfs => "bfs",
            AgentKind::Greedy => "greedy",
        }
    }

    pub fn make(self) -> Box<dyn Agent> {
        match self {
            AgentKind::Random => Box::new(RandomAgent::default()),
            AgentKind::Bfs => Box::new(BfsPlanner),
            AgentKind::Greedy => Box::new(GreedyField),
        }
    }

    /// Whether the agent can drive the environment with this id.
    pub fn supports(self, env_id: &str) -> bool {
        self != AgentKind::Bfs || env_id == "letter"
    }
}

impl fmt::Display for AgentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown agent `{0}` (expected random, bfs or greedy)")]
pub struct UnknownAgent(pub String);

impl FromStr for AgentKind {
    type Err = UnknownAgent;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" => Ok(AgentKind::Random),
            "bfs" | "bfs_planner" => Ok(AgentKind::Bfs),
            "greedy" | "greedy_field" => Ok(AgentKind::Greedy),
            _ => Err(UnknownAgent(s.to_string())),
        }
    }
}

fn zero_action(space: &ActionSpace) -> Action {
    match space {
        ActionSpace::Discrete { .. } => Action::Discrete(0),
        ActionSpace::Box { dim, .. } => Action::Continuous(vec![0.0; *dim]),
        ActionSpace::Joint { agents, dim, .. } => Action::Joint(vec![vec![0.0; *dim]; *agents]),
    }
}

#[derive(Debug, Clone)]
pub struct RandomAgent {
    rng: ChaCha8Rng,
}

impl Default for RandomAgent {
    fn default() -> Self {
        RandomAgent { rng: ChaCha8Rng::seed_from_u64(0) }
    }
}

impl Agent for RandomAgent {
    fn name(&self) -> &str {
        "random"
    }

    fn reset(&mut self, seed: u64) {
        self.rng = ChaCha8Rng::seed_from_u64(seed);
        self.rng.set_stream(2);
    }

    fn act(&mut self, view: &AgentView<'_>) -> Action {
        let rng = &mut self.rng;
        match *view.action_space {
            ActionSpace::Discrete { n } => Action::Discrete(rng.random_range(0..n)),
            ActionSpace::Box { dim, low, high } => {
                Action::Continuous((0..dim).map(|_| rng.random_range(low..=high)).collect())
            }
            ActionSpace::Joint { agents, dim, low, high } => Action::Joint(
                (0..agents).map(|_| (0..dim).map(|_| rng.random_range(low..=high)).collect()).collect(),
            ),
        }
    }
}

/// Replays a fixed action list, cycling.
#[derive(Debug, Clone)]
pub struct ScriptedAgent {
    actions: Vec<Action>,
    next: usize,
}

impl ScriptedAgent {
    pub fn new(actions: Vec<Action>) -> Self {
        assert!(!actions.is_empty(), "script needs at least one action");
        ScriptedAgent { actions, next: 0 }
    }
}

impl Agent for ScriptedAgent {
    fn name(&self) -> &str {
        "scripted"
    }

    fn reset(&mut self, _seed: u64) {
        self.next = 0;
    }

    fn act(&mut self, _view: &AgentView<'_>) -> Action {
        let a = self.actions[self.next % self.actions.len()].clone();
        self.next += 1;
        a
    }
}

fn letter_layout(raw: &serde_json::Value) -> Option<LetterLayout> {
    serde_json::from_value(raw.get("layout")?.clone()).ok()
}

fn cell_labels(layout: &LetterLayout) -> Vec<LabelSet> {
    layout.cell_map().into_iter().map(|p| p.into_iter().collect()).collect()
}

fn neighbor(n: usize, cell: usize, m: usize) -> usize {
    let (dr, dc) = MOVES[m];
    let r = crate::envs::geometry::wrap(cell / n, dr, n);
    let c = crate::envs::geometry::wrap(cell % n, dc, n);
    r * n + c
}

/// Move index starting a shortest route through `stages`: entering a cell
/// whose label reaches the current stage advances it, avoid cells are
/// blocked, anything else keeps the stage.
pub(crate) fn plan_letter_move(layout: &LetterLayout, stages: &[SubgoalStep]) -> Option<usize> {
    if stages.is_empty() {
        return None;
    }
    let n = layout.grid_size;
    let labels = cell_labels(layout);
    let k = stages.len();
    let start = layout.agent[0] * n + layout.agent[1];
    let mut first: Vec<Option<usize>> = vec![None; n * n * (k + 1)];
    let mut queue = VecDeque::new();
    let mut seen = vec![false; n * n * (k + 1)];
    seen[start * (k + 1)] = true;
    queue.push_back((start, 0usize));
    while let Some((cell, stage)) = queue.pop_front() {
        for m in 0..MOVES.len() {
            let next = neighbor(n, cell, m);
            let sigma = &labels[next];
            let s = &stages[stage];
            let next_stage = if s.is_reach(sigma) {
                stage + 1
            } else if s.is_avoid(sigma) {
                continue;
            } else {
                stage
            };
            let idx = next * (k + 1) + next_stage;
            if seen[idx] {
                continue;
            }
            seen[idx] = true;
            let fm = first[cell * (k + 1) + stage].unwrap_or(m);
            if next_stage == k {
                return Some(fm);
            }
            first[idx] = Some(fm);
            queue.push_back((next, next_stage));
        }
    }
    None
}

/// First move whose label keeps some automaton run alive.
fn safe_letter_move(view: &AgentView<'_>, layout: &LetterLayout) -> usize {
    let n = layout.grid_size;
    let labels = cell_labels(layout);
    let start = layout.agent[0] * n + layout.agent[1];
    (0..MOVES.len())
        .find(|&m| {
            let sigma = &labels[neighbor(n, start, m)];
            !step_monitor(view.spec.automaton, view.spec.frontier, sigma).frontier.is_empty()
        })
        .unwrap_or(0)
}

/// Remaining stages from the monitor's best frontier state.
fn current_stages(view: &AgentView<'_>) -> Vec<SubgoalStep> {
    let planner = view.spec.planner;
    planner
        .best_state(view.spec.frontier)
        .and_then(|s| planner.shortest_path(s))
        .map(|path| path.windows(2).map(|w| planner.step(w[0], w[1])).collect())
        .unwrap_or_default()
}

/// Full-observability LetterWorld planner. Replans every step from the
/// current monitor frontier with a breadth-first search over (cell, stage).
#[derive(Debug, Clone, Copy, Default)]
pub struct BfsPlanner;

impl Agent for BfsPlanner {
    fn name(&self) -> &str {
        "bfs"
    }

    fn reset(&mut self, _seed: u64) {}

    fn act(&mut self, view: &AgentView<'_>) -> Action {
        let Some(layout) = letter_layout(view.raw_state) else {
            return zero_action(view.action_space);
        };
        let stages = current_stages(view);
        let m = plan_letter_move(&layout, &stages).unwrap_or_else(|| safe_letter_move(view, &layout));
        Action::Discrete(m)
    }
}

/// Steers toward the nearest entity that satisfies the current reach stage,
/// keeping a clearance margin around entities in the avoid set.
#[derive(Debug, Clone, Copy, Default)]
pub struct GreedyField;

impl Agent for GreedyField {
    fn name(&self) -> &str {
        "greedy"
    }

    fn reset(&mut self, _seed: u64) {}

    fn act(&mut self, view: &AgentView<'_>) -> Action {
        let env = view.raw_state.get("env").and_then(|v| v.as_str()).unwrap_or_default();
        let state = view.raw_state.get("state").cloned().unwrap_or_default();
        let action = match env {
            "letter" => letter_layout(view.raw_state).map(|l| greedy_letter(view, &l)),
            "zone-point" | "zone-car" | "zone-multi" => serde_json::from_value::<ZoneLayout>(state)
                .ok()
                .map(|l| greedy_zone(view, &l, env == "zone-car")),
            "arm-grippers" | "arm-full" => {
                serde_json::from_value::<ArmLayout>(state).ok().map(|l| greedy_arm(view, &l))
            }
            _ => None,
        };
        action.unwrap_or_else(|| zero_action(view.action_space))
    }
}

fn greedy_letter(view: &AgentView<'_>, layout: &LetterLayout) -> Action {
    let n = layout.grid_size;
    let labels = cell_labels(layout);
    let start = layout.agent[0] * n + layout.agent[1];
    let Some(step) = view.spec.subgoal else {
        return Action::Discrete(safe_letter_move(view, layout));
    };
    let targets: Vec<usize> = (0..n * n).filter(|&c| step.is_reach(&labels[c])).collect();
    let wrapped = |a: usize, b: usize| {
        let d = a.abs_diff(b);
        d.min(n - d)
    };
    let dist = |c: usize| {
        targets
            .iter()
            .map(|&t| wrapped(c / n, t / n) + wrapped(c % n, t % n))
            .min()
            .unwrap_or(usize::MAX)
    };
    (0..MOVES.len())
        .filter(|&m| !step.is_avoid(&labels[neighbor(n, start, m)]))
        .min_by_key(|&m| (dist(neighbor(n, start, m)), m))
        .map(Action::Discrete)
        .unwrap_or_else(|| Action::Discrete(safe_letter_move(view, layout)))
}

/// Splits `b_1` into (`b`, 1) when the environment indexes agents.
fn owner(p: &Proposition, n_agents: usize) -> (String, usize) {
    let name = p.as_str();
    if n_agents > 1 {
        if let Some((c, i)) = name.rsplit_once('_') {
            if let Ok(i) = i.parse() {
                return (c.to_string(), i);
            }
        }
    }
    (name.to_string(), 0)
}

/// For arm labels `g_c` and `a_c` both refer to region `c`.
fn arm_color(p: &Proposition) -> String {
    let name = p.as_str();
    name.strip_prefix("g_").or_else(|| name.strip_prefix("a_")).unwrap_or(name).to_string()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Attraction to `target` plus repulsion and a sideways push around every
/// obstacle closer than twice its clearance.
fn field(pos: &[f64], target: Option<&[f64]>, obstacles: &[(Vec<f64>, f64)]) -> Vec<f64> {
    let dim = pos.len();
    let mut dir = vec![0.0; dim];
    let goal: Option<Vec<f64>> = target.map(|t| t.iter().zip(pos).map(|(a, b)| a - b).collect());
    if let Some(g) = &goal {
        let d = norm(g);
        if d > 1e-9 {
            dir.iter_mut().zip(g).for_each(|(x, gi)| *x += gi / d);
        }
    }
    for (center, radius) in obstacles {
        let clear = CLEARANCE * radius;
        let away: Vec<f64> = pos.iter().zip(center).map(|(a, b)| a - b).collect();
        let d = norm(&away);
        if d >= 2.0 * clear || d < 1e-9 {
            continue;
        }
        let w = 2.0 * ((2.0 * clear - d) / clear).powi(2);
        dir.iter_mut().zip(&away).for_each(|(x, a)| *x += w * a / d);
        if dim == 2 {
            let side = match &goal {
                Some(g) if away[0] * g[1] - away[1] * g[0] < 0.0 => -1.0,
                _ => 1.0,
            };
            dir[0] += side * w * -away[1] / d;
            dir[1] += side * w * away[0] / d;
        }
    }
    dir
}

fn wrap_angle(a: f64) -> f64 {
    (a + PI).rem_euclid(2.0 * PI) - PI
}

fn greedy_zone(view: &AgentView<'_>, layout: &ZoneLayout, car: bool) -> Action {
    let n = layout.agents.len();
    let step = view.spec.subgoal;
    let nearest = |i: usize, color: &str| {
        let p = layout.agents[i].position;
        layout
            .zones
            .iter()
            .filter(|z| z.color.as_str() == color)
            .map(|z| (((z.center[0] - p[0]).powi(2) + (z.center[1] - p[1]).powi(2)).sqrt(), z.center))
            .min_by(|a, b| a.0.total_cmp(&b.0))
    };
    // Cheapest reach assignment: one target color per agent.
    let mut goals: Vec<Option<String>> = vec![None; n];
    if let Some(step) = step {
        let mut best = f64::INFINITY;
        for sigma in &step.reach_assignments {
            let mut wanted: Vec<Option<String>> = vec![None; n];
            for p in sigma {
                let (c, i) = owner(p, n);
                if i < n && wanted[i].is_none() {
                    wanted[i] = Some(c);
                }
            }
            let cost: f64 = wanted
                .iter()
                .enumerate()
                .filter_map(|(i, c)| c.as_ref().map(|c| nearest(i, c).map_or(f64::INFINITY, |x| x.0)))
                .sum();
            if cost < best {
                best = cost;
                goals = wanted;
            }
        }
    }
    let mut avoid: Vec<Vec<String>> = vec![Vec::new(); n];
    if let Some(step) = step {
        for p in step.avoid_props() {
            let (c, i) = owner(&p, n);
            if i < n {
                avoid[i].push(c);
            }
        }
    }
    let controls: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let pose = layout.agents[i];
            let target = goals[i].as_ref().and_then(|c| nearest(i, c)).map(|x| x.1);
            let obstacles: Vec<(Vec<f64>, f64)> = layout
                .zones
                .iter()
                .filter(|z| avoid[i].contains(&z.color.as_str().to_string()))
                .map(|z| (z.center.to_vec(), z.radius))
                .collect();
            let dir = field(&pose.position, target.as_ref().map(|t| t.as_slice()), &obstacles);
            if norm(&dir) < 1e-9 {
                return vec![0.0, 0.0];
            }
            let err = wrap_angle(dir[1].atan2(dir[0]) - pose.heading);
            let forward = err.cos().max(0.0);
            if car {
                let turn = (0.5 * err).clamp(-0.5, 0.5);
                let base = 0.5 * forward;
                vec![(base - turn).clamp(-1.0, 1.0), (base + turn).clamp(-1.0, 1.0)]
            } else {
                vec![(2.0 * err).clamp(-1.0, 1.0), forward]
            }
        })
        .collect();
    match view.action_space {
        ActionSpace::Joint { .. } => Action::Joint(controls),
        _ => Action::Continuous(controls.into_iter().next().unwrap_or_else(|| vec![0.0, 0.0])),
    }
}

fn greedy_arm(view: &AgentView<'_>, layout: &ArmLayout) -> Action {
    let ee = layout.ee;
    let center_of = |c: &str| layout.regions.iter().find(|r| r.color.as_str() == c).map(|r| r.center);
    let mut target = None;
    let mut obstacles = Vec::new();
    if let Some(step) = view.spec.subgoal {
        let mut best = f64::INFINITY;
        // aim for the gripper literal of each reach guard, else any positive one
        for guard in &step.reach {
            let Some(p) = guard.pos.iter().find(|p| p.as_str().starts_with("g_")).or(guard.pos.iter().next())
            else {
                continue;
            };
            if let Some(c) = center_of(&arm_color(p)) {
                let d = norm(&[c[0] - ee[0], c[1] - ee[1], c[2] - ee[2]]);
                if d < best {
                    best = d;
                    target = Some(c);
                }
            }
        }
        for p in step.avoid_props() {
            let c = arm_color(&p);
            obstacles.extend(
                layout.regions.iter().filter(|r| r.color.as_str() == c).map(|r| (r.center.to_vec(), r.radius)),
            );
        }
    }
    let dir = field(&ee, target.as_ref().map(|t| t.as_slice()), &obstacles);
    let d = norm(&dir);
    if d < 1e-9 {
        return Action::Continuous(vec![0.0; 3]);
    }
    let remaining = target.map_or(1.0, |t| norm(&[t[0] - ee[0], t[1] - ee[1], t[2] - ee[2]]));
    let speed = (remaining / 0.05).min(1.0);
    Action::Continuous(dir.iter().map(|x| (x / d * speed).clamp(-1.0, 1.0)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envs::{EnvKind, Environment};
    use crate::harness::{run_episode, CompiledSpec, EpisodeConfig};
    use crate::ltl::{parse, prop};
    use crate::progression::Verdict;
    use crate::spec_gen::{Family, SpecRecord};

    #[test]
    fn names_round_trip() {
        for k in AgentKind::ALL {
            assert_eq!(k.name().parse::<AgentKind>().unwrap(), k);
        }
        assert!("ppo".parse::<AgentKind>().is_err());
        assert!(!AgentKind::Bfs.supports("zone-point"));
    }

    #[test]
    fn random_agent_is_seeded() {
        let mut env = EnvKind::ZonePoint.make();
        let spec = CompiledSpec::new(
            SpecRecord::new("s", parse("F b").unwrap(), Family::Custom, None),
            env.as_ref(),
        )
        .unwrap();
        let cfg = EpisodeConfig { record: true, ..Default::default() };
        let run = |env: &mut Box<dyn Environment>| {
            run_episode(env.as_mut(), &spec, &mut RandomAgent::default(), 5, &cfg).unwrap().1
        };
        assert_eq!(run(&mut env), run(&mut env));
    }

    #[test]
    fn plan_respects_avoid_cells() {
        let layout = LetterLayout {
            grid_size: 5,
            letters: vec![(prop("a"), [0, 2]), (prop("y"), [0, 1])],
            agent: [0, 0],
        };
        let a = crate::automaton::compile(&parse("!y U a").unwrap()).unwrap();
        let planner = crate::automaton::SubgoalPlanner::new(
            std::sync::Arc::new(a),
            crate::automaton::AssignmentDomain::AtMostOne,
        );
        let path = planner.shortest_path(0).unwrap();
        let stages: Vec<SubgoalStep> = path.windows(2).map(|w| planner.step(w[0], w[1])).collect();
        // going right passes y; left wraps around in three steps
        assert_eq!(plan_letter_move(&layout, &stages), Some(2));
    }

    #[test]
    fn greedy_reaches_zones_and_arm_regions() {
        for (kind, text) in [(EnvKind::ZonePoint, "F b"), (EnvKind::ZoneCar, "F g"), (EnvKind::ArmGrippers, "F m")] {
            let mut env = kind.make();
            let spec = CompiledSpec::new(
                SpecRecord::new(text, parse(text).unwrap(), Family::Custom, None),
                env.as_ref(),
            )
            .unwrap();
            let wins = (0..10)
                .filter(|&seed| {
                    let (out, _) =
                        run_episode(env.as_mut(), &spec, &mut GreedyField, seed, &EpisodeConfig::default()).unwrap();
                    out.verdict == Verdict::Satisfied
                })
                .count();
            assert!(wins >= 8, "{kind}: {wins}/10");
        }
    }
}
