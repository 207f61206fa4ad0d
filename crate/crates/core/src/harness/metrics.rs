//! Evaluation over seeds and episodes, and the per-seed report rows.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{run_episode, Agent, CompiledSpec, EpisodeConfig, EpisodeOutcome, HarnessError, StepRecord};
use crate::envs::Environment;
use crate::progression::Verdict;
use crate::spec_gen::SpecRecord;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Episode seed: SplitMix64 chained over the base, seed index and episode index.
pub fn mix64(base: u64, seed_index: u64, episode_index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(base) ^ seed_index) ^ episode_index)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub n_seeds: usize,
    pub n_episodes: usize,
    pub seed_base: u64,
    pub eval_horizon: Option<usize>,
    pub record_trajectories: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { n_seeds: 5, n_episodes: 100, seed_base: 0, eval_horizon: None, record_trajectories: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRecord {
    pub spec_id: String,
    pub seed: usize,
    pub episode: usize,
    pub episode_seed: u64,
    pub outcome: EpisodeOutcome,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trajectory: Vec<StepRecord>,
}

/// Counts for one (spec, seed) pair. Rates are exact ratios of counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRow {
    pub spec_id: String,
    pub family: String,
    pub seed: usize,
    pub n_episodes: u64,
    pub satisfied: u64,
    pub violated: u64,
    pub other: u64,
    /// Sum of decision steps over satisfied episodes.
    pub satisfied_steps: u64,
    /// Sum of accepting visits over non-violated episodes.
    pub accepting_visits: u64,
}

impl SeedRow {
    pub fn from_outcomes(spec_id: &str, family: &str, seed: usize, outcomes: &[EpisodeOutcome]) -> Self {
        let mut row = SeedRow {
            spec_id: spec_id.to_string(),
            family: family.to_string(),
            seed,
            n_episodes: outcomes.len() as u64,
            satisfied: 0,
            violated: 0,
            other: 0,
            satisfied_steps: 0,
            accepting_visits: 0,
        };
        for o in outcomes {
            match o.verdict {
                Verdict::Satisfied => {
                    row.satisfied += 1;
                    row.satisfied_steps += o.steps_to_decision.unwrap_or(0) as u64;
                }
                Verdict::Violated => row.violated += 1,
                Verdict::Open => row.other += 1,
            }
            if o.verdict != Verdict::Violated {
                row.accepting_visits += o.accepting_visits as u64;
            }
        }
        row
    }

    pub fn eta_s(&self) -> Ratio<u64> {
        Ratio::new(self.satisfied, self.n_episodes)
    }

    pub fn eta_v(&self) -> Ratio<u64> {
        Ratio::new(self.violated, self.n_episodes)
    }

    pub fn eta_o(&self) -> Ratio<u64> {
        Ratio::new(self.other, self.n_episodes)
    }

    /// Mean steps over satisfied episodes; `None` when there are none.
    pub fn mu(&self) -> Option<Ratio<u64>> {
        (self.satisfied > 0).then(|| Ratio::new(self.satisfied_steps, self.satisfied))
    }

    /// Mean accepting visits over non-violated episodes.
    pub fn mu_acc(&self) -> Option<Ratio<u64>> {
        let kept = self.n_episodes - self.violated;
        (kept > 0).then(|| Ratio::new(self.accepting_visits, kept))
    }
}

pub(crate) fn to_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Mean and sample standard deviation across seeds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
    pub n: usize,
}

impl MeanStd {
    pub fn of(xs: &[f64]) -> Option<MeanStd> {
        if xs.is_empty() {
            return None;
        }
        let n = xs.len();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let std = if n > 1 {
            (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Some(MeanStd { mean, std, n })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecSummary {
    pub spec_id: String,
    pub family: String,
    pub eta_s: MeanStd,
    pub eta_v: MeanStd,
    pub eta_o: MeanStd,
    /// Over the seeds where μ is defined.
    pub mu: Option<MeanStd>,
    pub mu_acc: Option<MeanStd>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub rows: Vec<SeedRow>,
    /// Every episode; trajectories are present only when recorded.
    pub episodes: Vec<EpisodeRecord>,
}

fn opt(x: Option<Ratio<u64>>) -> String {
    x.map_or_else(|| "none".to_string(), |r| to_f64(r).to_string())
}

impl EvalReport {
    pub const CSV_HEADER: [&'static str; 9] =
        ["spec_id", "family", "seed", "n_episodes", "eta_s", "eta_v", "eta_o", "mu", "mu_acc"];

    /// Rows in input order; μ and μ_acc are `none` when undefined.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(Self::CSV_HEADER).unwrap();
        for r in &self.rows {
            w.write_record([
                r.spec_id.clone(),
                r.family.clone(),
                r.seed.to_string(),
                r.n_episodes.to_string(),
                to_f64(r.eta_s()).to_string(),
                to_f64(r.eta_v()).to_string(),
                to_f64(r.eta_o()).to_string(),
                opt(r.mu()),
                opt(r.mu_acc()),
            ])
            .unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }

    pub fn summaries(&self) -> Vec<SpecSummary> {
        let mut order: Vec<&str> = Vec::new();
        for r in &self.rows {
            if !order.contains(&r.spec_id.as_str()) {
                order.push(&r.spec_id);
            }
        }
        order
            .into_iter()
            .map(|id| {
                let rows: Vec<&SeedRow> = self.rows.iter().filter(|r| r.spec_id == id).collect();
                let col = |f: &dyn Fn(&SeedRow) -> Option<Ratio<u64>>| {
                    rows.iter().filter_map(|r| f(r)).map(to_f64).collect::<Vec<f64>>()
                };
                SpecSummary {
                    spec_id: id.to_string(),
                    family: rows[0].family.clone(),
                    eta_s: MeanStd::of(&col(&|r| Some(r.eta_s()))).unwrap(),
                    eta_v: MeanStd::of(&col(&|r| Some(r.eta_v()))).unwrap(),
                    eta_o: MeanStd::of(&col(&|r| Some(r.eta_o()))).unwrap(),
                    mu: MeanStd::of(&col(&|r| r.mu())),
                    mu_acc: MeanStd::of(&col(&|r| r.mu_acc())),
                }
            })
            .collect()
    }

    /// One JSON object per episode, in (spec, seed, episode) order.
    pub fn trajectories_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.episodes {
            out.push_str(&serde_json::to_string(e).unwrap());
            out.push('\n');
        }
        out
    }
}

/// Runs every spec for `n_seeds × n_episodes` episodes. Episodes run in
/// parallel on the current rayon pool; each worker owns its environment and
/// agent, and results are reduced in a fixed order.
pub fn evaluate(
    env_factory: &(dyn Fn() -> Box<dyn Environment> + Sync),
    specs: &[SpecRecord],
    agent_factory: &(dyn Fn() -> Box<dyn Agent> + Sync),
    config: &EvalConfig,
) -> Result<EvalReport, HarnessError> {
    if config.n_seeds == 0 || config.n_episodes == 0 {
        return Err(HarnessError::EmptyEvaluation);
    }
    let probe = env_factory();
    let compiled: Vec<CompiledSpec> =
        specs.iter().map(|s| CompiledSpec::new(s.clone(), probe.as_ref())).collect::<Result<_, _>>()?;
    for spec in specs {
        super::episode_limit(probe.as_ref(), spec, config.eval_horizon)?;
    }
    let episode_config = EpisodeConfig { eval_horizon: config.eval_horizon, record: config.record_trajectories };
    let tasks: Vec<(usize, usize, usize)> = (0..compiled.len())
        .flat_map(|s| (0..config.n_seeds).flat_map(move |k| (0..config.n_episodes).map(move |e| (s, k, e))))
        .collect();
    let episodes: Vec<EpisodeRecord> = tasks
        .par_iter()
        .map_init(
            || (env_factory(), agent_factory()),
            |(env, agent), &(s, k, e)| {
                let episode_seed = mix64(config.seed_base, k as u64, e as u64);
                let spec = &compiled[s];
                let (outcome, trajectory) =
                    run_episode(env.as_mut(), spec, agent.as_mut(), episode_seed, &episode_config)?;
                Ok(EpisodeRecord {
                    spec_id: spec.record.id.clone(),
                    seed: k,
                    episode: e,
                    episode_seed,
                    outcome,
                    trajectory,
                })
            },
        )
        .collect::<Result<_, HarnessError>>()?;

    let mut rows = Vec::with_capacity(compiled.len() * config.n_seeds);
    for (chunk, spec) in episodes.chunks(config.n_seeds * config.n_episodes).zip(&compiled) {
        for (k, seed_chunk) in chunk.chunks(config.n_episodes).enumerate() {
            let outcomes: Vec<EpisodeOutcome> = seed_chunk.iter().map(|e| e.outcome).collect();
            rows.push(SeedRow::from_outcomes(&spec.record.id, spec.record.family.name(), k, &outcomes));
        }
    }
    Ok(EvalReport { rows, episodes })
}
