//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use specbench::automaton::{accepts, compile, extract_subgoal_sequences, AssignmentDomain, Monitor, MonitorStatus};
use specbench::envs::geometry::{bin_of, lidar, reflect, segment_hits_sphere, wrap};
use specbench::envs::{
    Action, ActionSpace, EnvKind, Environment, LetterLayout, LetterWorld, LetterWorldConfig, MOVES,
};
use specbench::harness::{evaluate, optimal_steps_letter, AgentKind, EpisodeOutcome, EvalConfig, SeedRow};
use specbench::ltl::{format, holds_on_lasso, labels, parse, power_set, prop, LabelSet, LassoTrace, Proposition};
use specbench::progression::{progress, Progressor, Verdict};
use specbench::spec_gen::{
    all_fixed, corpus_by_name, random_nnf_formula, sample_reach_avoid, sample_reach_only, AtomReuse,
};

// Tolerances.
const LIDAR_TOL: f64 = 1e-9;
const REFLECT_TOL: f64 = 1e-12;
const SEMANTICS_BUDGET_SECS: f64 = 300.0;
const PLANNER_EQUALITY_RATE: f64 = 0.95;
const LABEL_STEPS: usize = 100_000;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn abc() -> Vec<Proposition> {
    ["a", "b", "c"].map(prop).to_vec()
}

fn letters() -> Vec<Proposition> {
    "abcdefghijkl".chars().map(|c| prop(&c.to_string())).collect()
}

fn semantics() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let words = LassoTrace::enumerate(&labels(["a", "b", "c"]), 2, 2);
    let mut checked = 0usize;
    for _ in 0..300 {
        let f = random_nnf_formula(&abc(), 4, &mut rng);
        let a = compile(&f).map_err(|e| format!("{}: {e}", format(&f)))?;
        for w in &words {
            ensure(accepts(&a, w) == holds_on_lasso(&f, w), || format!("{} disagrees on {w:?}", format(&f)))?;
            checked += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < SEMANTICS_BUDGET_SECS, || format!("took {secs:.1}s"))?;
    Ok(format!("300 formulas x {} lassos, {checked} agreements, {secs:.1}s", words.len()))
}

fn progression() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let alphabet = labels(["a", "b", "c"]);
    let words = LassoTrace::enumerate(&alphabet, 2, 2);
    let symbols = power_set(&alphabet);
    for _ in 0..500 {
        let f = random_nnf_formula(&abc(), 4, &mut rng);
        let sigma = &symbols[rng.random_range(0..symbols.len())];
        let rest = progress(&f, sigma);
        for w in &words {
            ensure(holds_on_lasso(&f, &w.prepend(sigma.clone())) == holds_on_lasso(&rest, w), || {
                format!("progress({}, {sigma:?}) wrong on {w:?}", format(&f))
            })?;
        }
    }

    let corpus = all_fixed();
    let mut steps = 0usize;
    for rec in &corpus {
        let a = compile(&rec.formula).map_err(|e| e.to_string())?;
        let atoms: Vec<Proposition> = rec.formula.alphabet().into_iter().collect();
        for _ in 0..1000 {
            let len = rng.random_range(1..=25);
            let trace: Vec<LabelSet> = (0..len)
                .map(|_| {
                    if rng.random_bool(0.5) {
                        atoms.iter().filter(|_| rng.random_bool(0.15)).cloned().collect()
                    } else if rng.random_bool(0.3) {
                        LabelSet::new()
                    } else {
                        LabelSet::from([atoms[rng.random_range(0..atoms.len())].clone()])
                    }
                })
                .collect();
            let mut m = Monitor::new(&a);
            let mut p = Progressor::new(&rec.formula);
            for sigma in &trace {
                m.step(&a, sigma);
                let v = p.step(sigma);
                steps += 1;
                let expected = match v {
                    Verdict::Satisfied => MonitorStatus::SatisfiedSink,
                    Verdict::Violated => MonitorStatus::Violated,
                    Verdict::Open => MonitorStatus::Open,
                };
                ensure(m.status() == expected, || format!("{}: monitor {:?} vs {v:?}", rec.id, m.status()))?;
                if v.is_decided() {
                    break;
                }
            }
        }
    }
    Ok(format!("500 one-step pairs exact; {} corpus formulas x 1000 traces, {steps} steps agree", corpus.len()))
}

fn corpus_integrity() -> Check {
    let corpus = all_fixed();
    let mut max_states = 0;
    for rec in &corpus {
        ensure(parse(&format(&rec.formula)).ok() == Some(rec.formula.normalize()), || format!("{} does not round-trip", rec.id))?;
        let a = compile(&rec.formula).map_err(|e| format!("{}: {e}", rec.id))?;
        ensure(!a.language_is_empty(), || format!("{} has empty language", rec.id))?;
        max_states = max_states.max(a.state_count());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut samples = 0;
    for n_seq in [2, 4, 6, 8, 10] {
        for n_disj in [0, 1, 2] {
            for _ in 0..3 {
                for rec in [
                    sample_reach_avoid(n_seq, n_disj, &letters(), AtomReuse::AcrossStages, &mut rng),
                    sample_reach_only(n_seq, n_disj, &letters(), AtomReuse::AcrossStages, &mut rng),
                ] {
                    let rec = rec.map_err(|e| format!("({n_seq},{n_disj}): {e}"))?;
                    let a = compile(&rec.formula).map_err(|e| format!("{}: {e}", format(&rec.formula)))?;
                    ensure(!a.language_is_empty(), || format!("{} empty", format(&rec.formula)))?;
                    samples += 1;
                }
            }
        }
    }
    Ok(format!("{} fixed formulas (max {max_states} states), {samples} grid samples compile nonempty", corpus.len()))
}

fn metric_identities() -> Check {
    let specs: Vec<_> = corpus_by_name("letter").map_err(|e| e.to_string())?.into_iter().take(10).collect();
    ensure(specs.len() == 10, || "letter corpus has fewer than 10 specs".into())?;
    let mut rows = 0;
    for agent in AgentKind::ALL {
        let cfg = EvalConfig { n_seeds: 2, n_episodes: 10, eval_horizon: Some(150), ..EvalConfig::default() };
        let report = evaluate(&|| EnvKind::Letter.make(), &specs, &|| agent.make(), &cfg).map_err(|e| e.to_string())?;
        for r in &report.rows {
            let sum = r.eta_s() + r.eta_v() + r.eta_o();
            ensure(sum.is_integer() && sum.to_integer() == 1, || format!("{} {agent}: rates sum to {sum}", r.spec_id))?;
            ensure(r.satisfied + r.violated + r.other == r.n_episodes, || format!("{} counts", r.spec_id))?;
            rows += 1;
        }
    }

    // Fixture with known counts; satisfied episodes take 1..=7 steps,
    // the others carry large step counts that must not leak into mu.
    let sat_steps: Vec<usize> = (0..60).map(|i| i % 7 + 1).collect();
    let mut outs: Vec<EpisodeOutcome> = sat_steps
        .iter()
        .map(|&s| EpisodeOutcome { verdict: Verdict::Satisfied, steps_to_decision: Some(s), accepting_visits: 1, trace_len: s })
        .collect();
    outs.extend((0..15).map(|_| EpisodeOutcome {
        verdict: Verdict::Violated,
        steps_to_decision: Some(500),
        accepting_visits: 0,
        trace_len: 500,
    }));
    outs.extend((0..25).map(|_| EpisodeOutcome { verdict: Verdict::Open, steps_to_decision: None, accepting_visits: 0, trace_len: 75 }));
    let row = SeedRow::from_outcomes("fixture", "ind", 0, &outs);
    let eta = row.eta_s();
    ensure((*eta.numer(), *eta.denom()) == (3, 5), || format!("eta_s = {eta}, want 3/5"))?;
    let total: usize = sat_steps.iter().sum();
    let mu = row.mu().ok_or("mu undefined")?;
    ensure(*mu.numer() * 60 == total as u64 * *mu.denom(), || format!("mu = {mu}, want {total}/60"))?;
    let csv = specbench::harness::EvalReport { rows: vec![row], episodes: vec![] }.to_csv();
    let line = csv.lines().nth(1).unwrap_or_default();
    ensure(line.starts_with("fixture,ind,0,100,0.6,0.15,0.25,"), || format!("csv row {line}"))?;
    Ok(format!("{rows} rows sum to 1 exactly; fixture eta_s = 3/5, mu = {total}/60"))
}

fn planner_ceiling() -> Check {
    let specs: Vec<_> = corpus_by_name("letter_reach_only")
        .map_err(|e| e.to_string())?
        .into_iter()
        .filter(|r| r.params.is_some_and(|p| p.n_seq <= 4 && p.n_disj <= 1))
        .collect();
    ensure(!specs.is_empty(), || "no reach-only specs in range".into())?;
    let cfg = EvalConfig { n_seeds: 5, n_episodes: 100, ..EvalConfig::default() };
    let report = evaluate(&|| EnvKind::Letter.make(), &specs, &|| AgentKind::Bfs.make(), &cfg).map_err(|e| e.to_string())?;
    for r in &report.rows {
        ensure(r.satisfied == r.n_episodes && r.violated == 0, || {
            format!("{} seed {}: {} of {} satisfied", r.spec_id, r.seed, r.satisfied, r.n_episodes)
        })?;
    }
    let config = LetterWorldConfig::default();
    let mut equal = 0;
    for e in &report.episodes {
        let spec = specs.iter().find(|s| s.id == e.spec_id).unwrap();
        let a = compile(&spec.formula).map_err(|e| e.to_string())?;
        let layout = LetterWorld::sample_layout(&config, e.episode_seed).map_err(|e| e.to_string())?;
        let oracle = extract_subgoal_sequences(&a, 8, AssignmentDomain::AtMostOne)
            .map_err(|e| e.to_string())?
            .iter()
            .filter_map(|p| optimal_steps_letter(&layout, &p.steps).ok())
            .map(|o| o.steps)
            .min()
            .ok_or_else(|| format!("{}: oracle found no path", e.spec_id))?;
        let steps = e.outcome.steps_to_decision.ok_or("satisfied episode without decision step")?;
        ensure(steps >= oracle, || format!("{} episode seed {}: {steps} < optimal {oracle}", e.spec_id, e.episode_seed))?;
        equal += usize::from(steps == oracle);
    }
    let rate = equal as f64 / report.episodes.len() as f64;
    ensure(rate >= PLANNER_EQUALITY_RATE, || format!("equality rate {rate:.4}"))?;
    Ok(format!("{} specs x 5 seeds x 100 episodes: eta_s = 1, eta_v = 0, optimal on {:.2}%", specs.len(), rate * 100.0))
}

fn random_action(space: &ActionSpace, rng: &mut ChaCha8Rng) -> Action {
    match *space {
        ActionSpace::Discrete { n } => Action::Discrete(rng.random_range(0..n)),
        ActionSpace::Box { dim, low, high } => Action::Continuous((0..dim).map(|_| rng.random_range(low..=high)).collect()),
        ActionSpace::Joint { agents, dim, low, high } => {
            Action::Joint((0..agents).map(|_| (0..dim).map(|_| rng.random_range(low..=high)).collect()).collect())
        }
    }
}

fn vec_of(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Labels recomputed from the raw-state dump alone.
fn labels_from_raw(raw: &Value) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    match raw["env"].as_str().unwrap() {
        "letter" => {
            let layout = &raw["layout"];
            for entry in layout["letters"].as_array().unwrap() {
                if entry[1] == layout["agent"] {
                    out.insert(entry[0].as_str().unwrap().to_string());
                }
            }
        }
        env @ ("zone-point" | "zone-car" | "zone-multi") => {
            for (i, a) in raw["state"]["agents"].as_array().unwrap().iter().enumerate() {
                let p = vec_of(&a["position"]);
                for z in raw["state"]["zones"].as_array().unwrap() {
                    if dist(&p, &vec_of(&z["center"])) <= z["radius"].as_f64().unwrap() {
                        let c = z["color"].as_str().unwrap();
                        out.insert(if env == "zone-multi" { format!("{c}_{i}") } else { c.to_string() });
                    }
                }
            }
        }
        env @ ("arm-grippers" | "arm-full") => {
            let ee = vec_of(&raw["state"]["ee"]);
            let base = vec_of(&raw["state"]["base"]);
            for r in raw["state"]["regions"].as_array().unwrap() {
                let c = vec_of(&r["center"]);
                let radius = r["radius"].as_f64().unwrap();
                let color = r["color"].as_str().unwrap();
                let inside = dist(&ee, &c) <= radius;
                if env == "arm-grippers" {
                    if inside {
                        out.insert(color.to_string());
                    }
                    continue;
                }
                if inside {
                    out.insert(format!("g_{color}"));
                }
                let d: Vec<f64> = ee.iter().zip(&base).map(|(e, b)| e - b).collect();
                let len2: f64 = d.iter().map(|x| x * x).sum();
                let t = if len2 == 0.0 {
                    0.0
                } else {
                    (c.iter().zip(&base).zip(&d).map(|((ci, bi), di)| (ci - bi) * di).sum::<f64>() / len2).clamp(0.0, 1.0)
                };
                let q: Vec<f64> = base.iter().zip(&d).map(|(b, di)| b + t * di).collect();
                if dist(&q, &c) <= radius {
                    out.insert(format!("a_{color}"));
                }
            }
        }
        other => panic!("unknown env {other}"),
    }
    out
}

fn geometry() -> Check {
    // LiDAR: a disc centred on bin k's ray at distance D reads 1 - (D - r) / range.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (bins, range, r) = (16, 3.0, 0.3);
    let mut worst: f64 = 0.0;
    for _ in 0..2000 {
        let origin = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
        let heading = rng.random_range(-PI..PI);
        let k = rng.random_range(0..bins);
        let d = rng.random_range(r + 0.05..range);
        let bearing = heading + TAU * (k as f64 + 0.5) / bins as f64;
        let c = [origin[0] + d * bearing.cos(), origin[1] + d * bearing.sin()];
        let reading = lidar(origin, heading, &[(c, r)], bins, range);
        let err = (reading[k] - (1.0 - (d - r) / range)).abs();
        worst = worst.max(err);
        ensure(err <= LIDAR_TOL, || format!("lidar bin {k} off by {err:e}"))?;
    }
    let behind = lidar([0.0, 0.0], 0.7, &[([-(0.7f64.cos()), -(0.7f64.sin())], 0.3)], bins, range);
    ensure(behind[bin_of(PI, bins)] > 0.0 && behind[0] == 0.0 && behind[bins - 1] == 0.0, || {
        format!("rear disc read {behind:?}")
    })?;
    ensure(lidar([0.0, 0.0], 0.0, &[], bins, range).iter().all(|&x| x == 0.0), || "empty lidar nonzero".into())?;

    // Wrap, on the bare function and through a LetterWorld step.
    ensure(wrap(0, -1, 7) == 6 && wrap(6, 1, 7) == 0 && wrap(3, 1, 7) == 4, || "wrap".into())?;
    let left = MOVES.iter().position(|&m| m == (0, -1)).ok_or("no left move")?;
    let mut lw = LetterWorld::new(LetterWorldConfig::default()).map_err(|e| e.to_string())?;
    lw.reset_with_layout(LetterLayout { grid_size: 7, letters: vec![], agent: [3, 0] }).map_err(|e| e.to_string())?;
    lw.step(&Action::Discrete(left)).map_err(|e| e.to_string())?;
    let agent = lw.layout_state().ok_or("no layout")?.agent;
    ensure(agent == [3, 6], || format!("left from column 0 landed at {agent:?}"))?;

    // Reflection off the wall.
    let bound = 2.2;
    let (x, v) = reflect(bound - 0.01, 0.2, 0.1, bound);
    ensure(v == -0.2 && (x - (bound - 0.01)).abs() <= REFLECT_TOL, || format!("reflect gave ({x}, {v})"))?;
    let (x, v) = reflect(-bound + 0.01, -0.2, 0.1, bound);
    ensure(v == 0.2 && (x - (-bound + 0.01)).abs() <= REFLECT_TOL, || format!("reflect gave ({x}, {v})"))?;

    // Segment against sphere.
    let (o, e) = ([0.0, 0.0, 0.0], [1.0, 0.0, 0.0]);
    for (center, radius, hit) in [
        ([0.5, 0.05, 0.0], 0.08, true),
        ([0.5, 0.1, 0.0], 0.08, false),
        ([1.05, 0.0, 0.0], 0.08, true),
        ([1.1, 0.0, 0.0], 0.08, false),
        ([-0.07, 0.0, 0.0], 0.08, true),
    ] {
        ensure(segment_hits_sphere(o, e, center, radius) == hit, || format!("segment vs {center:?}"))?;
    }

    // Label soundness.
    for kind in EnvKind::ALL {
        let mut env = kind.make();
        let space = env.action_space();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut seed = 0;
        env.reset(seed).map_err(|e| e.to_string())?;
        for i in 0..LABEL_STEPS {
            let out = env.step(&random_action(&space, &mut rng)).map_err(|e| e.to_string())?;
            let got: BTreeSet<String> = out.propositions.iter().map(|p| p.to_string()).collect();
            let raw = env.raw_state();
            ensure(got == labels_from_raw(&raw), || format!("{kind} step {i}: {got:?} at {raw}"))?;
            if out.terminal {
                seed += 1;
                env.reset(seed).map_err(|e| e.to_string())?;
            }
        }
    }
    Ok(format!("lidar worst error {worst:.1e}; wrap, reflect, segment cases exact; labels sound over {LABEL_STEPS} steps x {} envs", EnvKind::ALL.len()))
}

fn determinism() -> Check {
    let dirs = [tempfile::tempdir().map_err(|e| e.to_string())?, tempfile::tempdir().map_err(|e| e.to_string())?];
    for (dir, jobs) in dirs.iter().zip(["1", "4"]) {
        let status = Command::new(env!("CARGO_BIN_EXE_specbench"))
            .env_remove("SPECBENCH_SEED")
            .args(["eval", "--env", "letter", "--specs", "corpus:letter", "--agent", "random", "--seeds", "5"])
            .args(["--episodes", "20", "--trajectories", "--jobs", jobs, "--out"])
            .arg(dir.path())
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.success(), || String::from_utf8_lossy(&status.stderr).into_owned())?;
    }
    let mut bytes = 0;
    for f in ["manifest.json", "report.csv", "trajectories.jsonl"] {
        let a = fs::read(dirs[0].path().join(f)).map_err(|e| e.to_string())?;
        let b = fs::read(dirs[1].path().join(f)).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("{f} differs"))?;
        bytes += a.len();
    }
    Ok(format!("two eval runs (1 and 4 threads) byte-identical, {bytes} bytes compared"))
}

mod cycler {
    use std::collections::BTreeSet;

    use specbench::automaton::AssignmentDomain;
    use specbench::envs::{
        Action, ActionSpace, EnvError, Environment, LayoutSlice, Observation, Pose, StepResult, Zone, ZoneConfig, ZoneEnv,
        ZoneLayout,
    };
    use specbench::harness::ScriptedAgent;
    use specbench::ltl::{prop, LabelSet, Proposition};

    /// Zone env pinned to one layout regardless of seed.
    pub struct Pinned(pub ZoneEnv, pub ZoneLayout);

    impl Environment for Pinned {
        fn id(&self) -> &'static str {
            self.0.id()
        }
        fn alphabet(&self) -> BTreeSet<Proposition> {
            self.0.alphabet()
        }
        fn assignment_domain(&self) -> AssignmentDomain {
            self.0.assignment_domain()
        }
        fn action_space(&self) -> ActionSpace {
            self.0.action_space()
        }
        fn horizon(&self) -> usize {
            self.0.horizon()
        }
        fn layout(&self) -> Vec<LayoutSlice> {
            self.0.layout()
        }
        fn reset(&mut self, _seed: u64) -> Result<(Vec<Observation>, LabelSet), EnvError> {
            self.0.reset_with_layout(self.1.clone())
        }
        fn step(&mut self, action: &Action) -> Result<StepResult, EnvError> {
            self.0.step(action)
        }
        fn labels(&self) -> LabelSet {
            self.0.labels()
        }
        fn observe(&self) -> Vec<Observation> {
            self.0.observe()
        }
        fn raw_state(&self) -> serde_json::Value {
            self.0.raw_state()
        }
        fn step_index(&self) -> usize {
            self.0.step_index()
        }
        fn set_truncation(&mut self, enabled: bool) {
            self.0.set_truncation(enabled)
        }
    }

    /// b spans x <= -0.25, g spans x >= 0.25; the agent starts at x = -0.5.
    pub fn two_zone_env() -> Pinned {
        let zone = |c: &str, x: f64| Zone { color: prop(c), center: [x, 0.0], radius: 0.3, velocity: [0.0, 0.0] };
        let layout = ZoneLayout {
            zones: vec![zone("b", -0.55), zone("g", 0.55), zone("y", 1.5), zone("m", -1.9)],
            agents: vec![Pose { position: [-0.5, 0.0], heading: 0.0 }],
        };
        Pinned(ZoneEnv::new(ZoneConfig::default()).unwrap(), layout)
    }

    /// Ten steps forward at 0.1 per step, then ten back: period 20.
    pub fn shuttle() -> ScriptedAgent {
        let fwd = Action::Continuous(vec![0.0, 1.0]);
        let back = Action::Continuous(vec![0.0, -1.0]);
        ScriptedAgent::new([vec![fwd; 10], vec![back; 10]].concat())
    }

    /// x(t) = -0.5 + 0.1 * min(t mod 20, 20 - t mod 20). b is seen at t = 1,
    /// g is first entered at t = 8 (x = 0.3), and each later period repeats
    /// b (t = 18, 19, 20, ...) before g (t = 28, ...), so one visit per period.
    pub fn closed_form(horizon: usize) -> usize {
        if horizon < 8 {
            0
        } else {
            (horizon - 8) / 20 + 1
        }
    }
}

fn infinite_horizon() -> Check {
    let record = corpus_by_name("zone_rec")
        .map_err(|e| e.to_string())?
        .into_iter()
        .find(|r| r.formula == parse("G F b & G F g & G !(y | m)").unwrap())
        .ok_or("recurrence formula missing from the zone corpus")?;
    let mut lines = Vec::new();
    for horizon in [1000, 10_000] {
        let cfg = EvalConfig { n_seeds: 2, n_episodes: 3, eval_horizon: Some(horizon), ..EvalConfig::default() };
        let report = evaluate(
            &|| Box::new(cycler::two_zone_env()),
            std::slice::from_ref(&record),
            &|| Box::new(cycler::shuttle()),
            &cfg,
        )
        .map_err(|e| e.to_string())?;
        let want = cycler::closed_form(horizon) as u64;
        for row in &report.rows {
            ensure(row.other == row.n_episodes, || format!("H={horizon}: not all episodes open"))?;
            let m = row.mu_acc().ok_or("mu_acc undefined")?;
            ensure(m.is_integer() && m.to_integer() == want, || format!("H={horizon}: mu_acc {m}, closed form {want}"))?;
        }
        lines.push(format!("H={horizon}: mu_acc = {want}"));
    }
    Ok(lines.join(", "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("semantics", semantics),
        ("progression", progression),
        ("corpus-integrity", corpus_integrity),
        ("metric-identities", metric_identities),
        ("planner-ceiling", planner_ceiling),
        ("geometry", geometry),
        ("determinism", determinism),
        ("infinite-horizon", infinite_horizon),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match result {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
