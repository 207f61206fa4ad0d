//! Optimal step counts for LetterWorld subgoal sequences.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automaton::SubgoalStep;
use crate::envs::geometry::wrap;
use crate::envs::{LetterLayout, MOVES};
use crate::ltl::LabelSet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalSteps {
    pub steps: usize,
    /// Steps per subgoal stage; 0 for an empty sequence.
    pub normalized: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("stage {stage} cannot be completed: avoid cells disconnect its targets")]
pub struct Unreachable {
    pub stage: usize,
}

/// Dijkstra over (cell, stage) on the wrapped grid. Moving onto a cell whose
/// label satisfies the stage's reach set advances the stage; cells in the
/// avoid set are removed from that stage's graph. Ties pop by cost, then
/// cell index.
pub fn optimal_steps_letter(layout: &LetterLayout, stages: &[SubgoalStep]) -> Result<OptimalSteps, Unreachable> {
    let k = stages.len();
    if k == 0 {
        return Ok(OptimalSteps { steps: 0, normalized: 0.0 });
    }
    let n = layout.grid_size;
    let labels: Vec<LabelSet> = layout.cell_map().into_iter().map(|p| p.into_iter().collect()).collect();
    let idx = |cell: usize, stage: usize| stage * n * n + cell;
    let mut dist = vec![usize::MAX; n * n * (k + 1)];
    let start = layout.agent[0] * n + layout.agent[1];
    dist[idx(start, 0)] = 0;
    let mut heap = BinaryHeap::from([Reverse((0usize, start, 0usize))]);
    let mut furthest = 0;
    while let Some(Reverse((d, cell, stage))) = heap.pop() {
        if d > dist[idx(cell, stage)] {
            continue;
        }
        if stage == k {
            return Ok(OptimalSteps { steps: d, normalized: d as f64 / k as f64 });
        }
        furthest = furthest.max(stage);
        for (dr, dc) in MOVES {
            let next = wrap(cell / n, dr, n) * n + wrap(cell % n, dc, n);
            let sigma = &labels[next];
            let s = &stages[stage];
            let next_stage = if s.is_reach(sigma) {
                stage + 1
            } else if s.is_avoid(sigma) {
                continue;
            } else {
                stage
            };
            let i = idx(next, next_stage);
            if d + 1 < dist[i] {
                dist[i] = d + 1;
                heap.push(Reverse((d + 1, next, next_stage)));
            }
        }
    }
    Err(Unreachable { stage: furthest })
}
