//! Wrapped grid world with letter propositions.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::geometry::wrap;
use super::{build_layout, Action, ActionSpace, Clock, EnvError, Environment, LayoutSlice, ObsPart, Observation, StepResult};
use crate::automaton::AssignmentDomain;
use crate::ltl::{prop, LabelSet, Proposition};

pub const MOVES: [(i64, i64); 4] = [(-1, 0), (1, 0), (0, -1), (0, 1)];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LetterWorldConfig {
    pub grid_size: usize,
    pub letters: Vec<Proposition>,
    pub copies_per_letter: usize,
    pub horizon: usize,
    pub partial_obs: bool,
    pub view_radius: usize,
}

impl Default for LetterWorldConfig {
    fn default() -> Self {
        LetterWorldConfig {
            grid_size: 7,
            letters: "abcdefghijkl".chars().map(|c| prop(&c.to_string())).collect(),
            copies_per_letter: 2,
            horizon: 75,
            partial_obs: false,
            view_radius: 2,
        }
    }
}

/// Letter placements and agent cell, as `(row, col)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LetterLayout {
    pub grid_size: usize,
    pub letters: Vec<(Proposition, [usize; 2])>,
    pub agent: [usize; 2],
}

impl LetterLayout {
    pub fn letter_at(&self, cell: [usize; 2]) -> Option<&Proposition> {
        self.letters.iter().find(|(_, c)| *c == cell).map(|(p, _)| p)
    }

    /// Grid of letter indices into `letters`, row-major.
    pub fn cell_map(&self) -> Vec<Option<Proposition>> {
        let n = self.grid_size;
        let mut grid = vec![None; n * n];
        for (p, [r, c]) in &self.letters {
            grid[r * n + c] = Some(p.clone());
        }
        grid
    }
}

#[derive(Debug, Clone)]
pub struct LetterWorld {
    config: LetterWorldConfig,
    clock: Clock,
    layout: Option<LetterLayout>,
    grid: Vec<Option<usize>>,
}

impl LetterWorld {
    pub fn new(config: LetterWorldConfig) -> Result<Self, EnvError> {
        let n = config.grid_size;
        let window = 2 * config.view_radius + 1;
        if n == 0 || config.letters.is_empty() {
            return Err(EnvError::InvalidConfig("empty grid or alphabet".into()));
        }
        if config.partial_obs && window * window > n * n {
            return Err(EnvError::InvalidConfig("view window larger than grid".into()));
        }
        let horizon = config.horizon;
        Ok(LetterWorld { config, clock: Clock::new(horizon), layout: None, grid: Vec::new() })
    }

    pub fn config(&self) -> &LetterWorldConfig {
        &self.config
    }

    pub fn layout_state(&self) -> Option<&LetterLayout> {
        self.layout.as_ref()
    }

    /// Draws a layout: distinct cells for every letter copy and the agent.
    pub fn sample_layout(config: &LetterWorldConfig, seed: u64) -> Result<LetterLayout, EnvError> {
        let n = config.grid_size;
        let needed = config.letters.len() * config.copies_per_letter + 1;
        if needed > n * n {
            return Err(EnvError::PlacementFailure { attempts: 0 });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cells: Vec<usize> = sample(&mut rng, n * n, needed).into_vec();
        let cell = |i: usize| [i / n, i % n];
        let letters = config
            .letters
            .iter()
            .flat_map(|p| std::iter::repeat_n(p.clone(), config.copies_per_letter))
            .zip(cells.iter().map(|&i| cell(i)))
            .collect();
        Ok(LetterLayout { grid_size: n, letters, agent: cell(cells[needed - 1]) })
    }

    /// Starts an episode from a fixed layout.
    pub fn reset_with_layout(&mut self, layout: LetterLayout) -> Result<(Vec<Observation>, LabelSet), EnvError> {
        let n = self.config.grid_size;
        if layout.grid_size != n {
            return Err(EnvError::InvalidConfig(format!("layout grid {} != {}", layout.grid_size, n)));
        }
        let mut grid = vec![None; n * n];
        for (p, [r, c]) in &layout.letters {
            let idx = self
                .config
                .letters
                .iter()
                .position(|q| q == p)
                .ok_or_else(|| EnvError::InvalidConfig(format!("letter {p} not in alphabet")))?;
            if *r >= n || *c >= n || grid[r * n + c].is_some() {
                return Err(EnvError::InvalidConfig(format!("bad letter cell ({r}, {c})")));
            }
            grid[r * n + c] = Some(idx);
        }
        if layout.agent[0] >= n || layout.agent[1] >= n {
            return Err(EnvError::InvalidConfig("agent outside grid".into()));
        }
        self.grid = grid;
        self.layout = Some(layout);
        self.clock.reset();
        Ok((self.observe(), self.labels()))
    }

    fn agent(&self) -> [usize; 2] {
        self.layout.as_ref().map_or([0, 0], |l| l.agent)
    }

    fn letter_channels(&self) -> usize {
        self.config.letters.len()
    }
}

impl Environment for LetterWorld {
    fn id(&self) -> &'static str {
        "letter"
    }

    fn alphabet(&self) -> BTreeSet<Proposition> {
        self.config.letters.iter().cloned().collect()
    }

    fn assignment_domain(&self) -> AssignmentDomain {
        AssignmentDomain::AtMostOne
    }

    fn action_space(&self) -> ActionSpace {
        ActionSpace::Discrete { n: 4 }
    }

    fn horizon(&self) -> usize {
        self.config.horizon
    }

    fn layout(&self) -> Vec<LayoutSlice> {
        let n = self.config.grid_size;
        let k = self.letter_channels();
        if self.config.partial_obs {
            let w = 2 * self.config.view_radius + 1;
            build_layout(&[("letter_window", ObsPart::Ap, k * w * w, "one-hot[letter][dr][dc]")])
        } else {
            build_layout(&[
                ("letter_map", ObsPart::Ap, k * n * n, "one-hot[letter][row][col]"),
                ("agent_map", ObsPart::NotAp, n * n, "one-hot[row][col]"),
            ])
        }
    }

    fn reset(&mut self, seed: u64) -> Result<(Vec<Observation>, LabelSet), EnvError> {
        let layout = Self::sample_layout(&self.config, seed)?;
        self.reset_with_layout(layout)
    }

    fn step(&mut self, action: &Action) -> Result<StepResult, EnvError> {
        self.clock.check()?;
        let a = match action {
            Action::Discrete(a) if *a < 4 => *a,
            other => return Err(EnvError::ActionOutOfRange(format!("{other:?} is not one of 0..4"))),
        };
        let n = self.config.grid_size;
        let (dr, dc) = MOVES[a];
        let layout = self.layout.as_mut().ok_or(EnvError::NotReset)?;
        layout.agent = [wrap(layout.agent[0], dr, n), wrap(layout.agent[1], dc, n)];
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
        let [r, c] = self.agent();
        let n = self.config.grid_size;
        self.grid
            .get(r * n + c)
            .copied()
            .flatten()
            .map(|i| LabelSet::from([self.config.letters[i].clone()]))
            .unwrap_or_default()
    }

    fn observe(&self) -> Vec<Observation> {
        let n = self.config.grid_size;
        let k = self.letter_channels();
        let [ar, ac] = self.agent();
        if self.grid.is_empty() {
            return vec![Observation::default()];
        }
        let obs = if self.config.partial_obs {
            let r = self.config.view_radius as i64;
            let w = (2 * r + 1) as usize;
            let mut s_ap = vec![0.0; k * w * w];
            for dr in -r..=r {
                for dc in -r..=r {
                    let cell = wrap(ar, dr, n) * n + wrap(ac, dc, n);
                    if let Some(l) = self.grid[cell] {
                        s_ap[l * w * w + (dr + r) as usize * w + (dc + r) as usize] = 1.0;
                    }
                }
            }
            Observation { s_ap, s_not_ap: Vec::new() }
        } else {
            let mut s_ap = vec![0.0; k * n * n];
            for (cell, l) in self.grid.iter().enumerate() {
                if let Some(l) = l {
                    s_ap[l * n * n + cell] = 1.0;
                }
            }
            let mut s_not_ap = vec![0.0; n * n];
            s_not_ap[ar * n + ac] = 1.0;
            Observation { s_ap, s_not_ap }
        };
        vec![obs]
    }

    fn raw_state(&self) -> serde_json::Value {
        serde_json::json!({
            "env": "letter",
            "step": self.clock.t,
            "layout": self.layout,
        })
    }

    fn step_index(&self) -> usize {
        self.clock.t
    }

    fn set_truncation(&mut self, enabled: bool) {
        self.clock.truncate = enabled;
    }
}
