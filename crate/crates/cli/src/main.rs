//! `specbench` command-line interface.

mod serve;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use specbench::automaton::{compile, extract_subgoal_sequences, AssignmentDomain, SubgoalStep};
use specbench::envs::{EnvKind, LetterLayout};
use specbench::harness::{evaluate, optimal_steps_letter, AgentKind, EvalConfig, EvalReport, HarnessError, MeanStd};
use specbench::ltl::{parse, prop, Proposition};
use specbench::spec_gen::{
    all_fixed, corpus_by_name, corpus_names, parse_spec_file, sample_reach_avoid, sample_reach_only, write_spec_file,
    AtomReuse, SpecRecord,
};

const SEED_ENV: &str = "SPECBENCH_SEED";

#[derive(Debug)]
enum CliError {
    Config(String),
    Runtime(String),
    Unreachable(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
            CliError::Unreachable(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Runtime(m) => write!(f, "runtime error: {m}"),
            CliError::Unreachable(m) => write!(f, "unreachable: {m}"),
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Env(_) | HarnessError::Compile(_) => CliError::Runtime(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(name = "specbench", version, about = "LTL specification benchmark engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an agent on a set of specifications.
    Eval(EvalArgs),
    /// Compile a formula and summarize the automaton.
    Compile(CompileArgs),
    /// Optimal step count for a LetterWorld layout and specification.
    Oracle(OracleArgs),
    /// List or export the fixed specification corpora.
    #[command(subcommand)]
    Corpus(CorpusCommand),
    /// Sample reach-only or reach-avoid specifications.
    Sample(SampleArgs),
    /// Evaluate the letter complexity grid and write plot data.
    FigureData(FigureArgs),
    /// Serve one environment over a JSON-lines protocol on stdin/stdout.
    Serve(ServeArgs),
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    env: String,
    /// Spec file path, or `corpus:NAME`.
    #[arg(long)]
    specs: String,
    #[arg(long, default_value = "random")]
    agent: String,
    #[arg(long, default_value_t = 5)]
    seeds: usize,
    #[arg(long, default_value_t = 100)]
    episodes: usize,
    /// Base of the episode seed derivation; the SPECBENCH_SEED variable takes precedence.
    #[arg(long, default_value_t = 0)]
    seed_base: u64,
    #[arg(long)]
    out: PathBuf,
    /// Also write per-step trajectories as JSONL.
    #[arg(long)]
    trajectories: bool,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Step budget for infinite-horizon specs (default 10x the env horizon).
    #[arg(long)]
    eval_horizon: Option<usize>,
    /// JSON object of environment config overrides.
    #[arg(long)]
    config: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainArg {
    Any,
    AtMostOne,
    PerAgent,
    Gripper,
}

impl From<DomainArg> for AssignmentDomain {
    fn from(d: DomainArg) -> Self {
        match d {
            DomainArg::Any => AssignmentDomain::Any,
            DomainArg::AtMostOne => AssignmentDomain::AtMostOne,
            DomainArg::PerAgent => AssignmentDomain::AtMostOnePerAgent,
            DomainArg::Gripper => AssignmentDomain::AtMostOneGripper,
        }
    }
}

#[derive(Args)]
struct CompileArgs {
    #[arg(long)]
    formula: String,
    /// Print the automaton dump, or write it to PATH.
    #[arg(long, num_args = 0..=1, value_name = "PATH")]
    dump: Option<Option<PathBuf>>,
    /// Label sets the subgoal planner may assume.
    #[arg(long, value_enum, default_value = "any")]
    domain: DomainArg,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, default_value = "letter")]
    env: String,
    /// Raw-state dump (or bare layout) as JSON.
    #[arg(long)]
    layout: PathBuf,
    #[arg(long)]
    spec: String,
}

#[derive(Subcommand)]
enum CorpusCommand {
    /// Print the available corpus names.
    List,
    /// Write a corpus in spec-file format.
    Export {
        /// Corpus name; all fixed formulas when omitted.
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleFamily {
    ReachOnly,
    ReachAvoid,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReuseArg {
    Never,
    AcrossStages,
}

impl From<ReuseArg> for AtomReuse {
    fn from(r: ReuseArg) -> Self {
        match r {
            ReuseArg::Never => AtomReuse::Never,
            ReuseArg::AcrossStages => AtomReuse::AcrossStages,
        }
    }
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, value_enum)]
    family: SampleFamily,
    #[arg(long)]
    n_seq: usize,
    #[arg(long, default_value_t = 0)]
    n_disj: usize,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "never")]
    reuse: ReuseArg,
    /// Comma-separated atoms; the twelve letters by default.
    #[arg(long, default_value = "a,b,c,d,e,f,g,h,i,j,k,l")]
    alphabet: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FigureArgs {
    #[arg(long, default_value = "bfs")]
    agent: String,
    #[arg(long, default_value_t = 5)]
    seeds: usize,
    #[arg(long, default_value_t = 100)]
    episodes: usize,
    /// Sampled specs per grid cell.
    #[arg(long, default_value_t = 3)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long)]
    env: String,
    /// JSON object of environment config overrides.
    #[arg(long)]
    config: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Compile(a) => cmd_compile(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Corpus(c) => cmd_corpus(c),
        Command::Sample(a) => cmd_sample(a),
        Command::FigureData(a) => cmd_figure_data(a),
        Command::Serve(a) => serve::run(&a.env, a.config.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("specbench: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn env_kind(id: &str) -> Result<EnvKind> {
    id.parse().map_err(|e: specbench::envs::UnknownEnv| CliError::Config(e.to_string()))
}

fn config_overrides(text: Option<&str>) -> Result<Value> {
    match text {
        None => Ok(Value::Null),
        Some(t) => serde_json::from_str(t).map_err(|e| CliError::Config(format!("--config: {e}"))),
    }
}

fn load_specs(source: &str) -> Result<Vec<SpecRecord>> {
    if let Some(name) = source.strip_prefix("corpus:") {
        return corpus_by_name(name).map_err(|e| CliError::Config(e.to_string()));
    }
    let text = fs::read_to_string(source).map_err(|e| CliError::Config(format!("{source}: {e}")))?;
    let specs = parse_spec_file(&text, &Default::default()).map_err(|e| CliError::Config(format!("{source}: {e}")))?;
    if specs.is_empty() {
        return Err(CliError::Config(format!("{source}: no specifications")));
    }
    Ok(specs)
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| CliError::Runtime(e.to_string()))
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
}

fn seed_base(flag: u64) -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Config(format!("{SEED_ENV}={v} is not an unsigned integer"))),
        Err(_) => Ok(flag),
    }
}

fn summary_csv(report: &EvalReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let cell = |m: Option<MeanStd>| m.map_or(["none".to_string(), "none".to_string()], |m| [m.mean.to_string(), m.std.to_string()]);
    w.write_record([
        "spec_id", "family", "n_seeds", "eta_s", "eta_s_std", "eta_v", "eta_v_std", "eta_o", "eta_o_std", "mu", "mu_std",
        "mu_acc", "mu_acc_std",
    ])
    .unwrap();
    for s in report.summaries() {
        let mut rec = vec![s.spec_id, s.family, s.eta_s.n.to_string()];
        for m in [Some(s.eta_s), Some(s.eta_v), Some(s.eta_o), s.mu, s.mu_acc] {
            rec.extend(cell(m));
        }
        w.write_record(rec).unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

fn cmd_eval(a: EvalArgs) -> Result<()> {
    let kind = env_kind(&a.env)?;
    let agent: AgentKind = a.agent.parse().map_err(|e: specbench::harness::UnknownAgent| CliError::Config(e.to_string()))?;
    if !agent.supports(kind.id()) {
        return Err(CliError::Config(format!("agent {agent} cannot drive {kind}")));
    }
    let overrides = config_overrides(a.config.as_deref())?;
    kind.make_with(&overrides).map_err(|e| CliError::Config(e.to_string()))?;
    let specs = load_specs(&a.specs)?;
    let config = EvalConfig {
        n_seeds: a.seeds,
        n_episodes: a.episodes,
        seed_base: seed_base(a.seed_base)?,
        eval_horizon: a.eval_horizon,
        record_trajectories: a.trajectories,
    };
    let env_factory = || kind.make_with(&overrides).expect("validated above");
    let report = pool(a.jobs)?.install(|| evaluate(&env_factory, &specs, &|| agent.make(), &config))?;

    fs::create_dir_all(&a.out).map_err(|e| CliError::Runtime(format!("{}: {e}", a.out.display())))?;
    let mut artifacts = serde_json::Map::new();
    let mut outputs = vec![("report.csv", report.to_csv()), ("summary.csv", summary_csv(&report))];
    if a.trajectories {
        outputs.push(("trajectories.jsonl", report.trajectories_jsonl()));
    }
    for (name, text) in &outputs {
        write_file(&a.out.join(name), text)?;
        artifacts.insert(name.to_string(), json!(sha256_hex(text.as_bytes())));
    }
    let manifest = json!({
        "tool": "specbench",
        "version": env!("CARGO_PKG_VERSION"),
        "command": "eval",
        "config": {
            "env": kind.id(),
            "env_config": overrides,
            "specs": a.specs,
            "specs_sha256": sha256_hex(write_spec_file(&specs).as_bytes()),
            "agent": agent.name(),
            "seeds": config.n_seeds,
            "episodes": config.n_episodes,
            "eval_horizon": config.eval_horizon,
            "trajectories": a.trajectories,
        },
        "seed_derivation": "splitmix64(splitmix64(splitmix64(seed_base) ^ seed_index) ^ episode_index)",
        "seed_base": config.seed_base,
        "seed_indices": (0..config.n_seeds).collect::<Vec<_>>(),
        "artifacts": artifacts,
    });
    write_file(&a.out.join("manifest.json"), &(serde_json::to_string_pretty(&manifest).unwrap() + "\n"))?;
    for s in report.summaries() {
        let mu = s.mu.map_or("none".to_string(), |m| format!("{:.2}", m.mean));
        println!("{}\teta_s {:.3} ± {:.3}\teta_v {:.3}\tmu {mu}", s.spec_id, s.eta_s.mean, s.eta_s.std, s.eta_v.mean);
    }
    Ok(())
}

fn describe_step(step: &SubgoalStep) -> String {
    let show = |gs: &[specbench::automaton::Guard]| {
        if gs.is_empty() {
            "-".to_string()
        } else {
            gs.iter().map(|g| format!("({g})")).collect::<Vec<_>>().join(" | ")
        }
    };
    format!("{} -> {}: reach {} avoid {}", step.from, step.to, show(&step.reach), show(&step.avoid))
}

fn cmd_compile(a: CompileArgs) -> Result<()> {
    let f = parse(&a.formula).map_err(|e| CliError::Config(format!("parse: {e}")))?;
    let aut = compile(&f).map_err(|e| CliError::Config(e.to_string()))?;
    println!("states: {}, accepting: {}, dead: {}", aut.state_count(), aut.accepting().len(), aut.dead().len());
    println!("edges: {}", aut.edges().len());
    let ids = |s: &std::collections::BTreeSet<usize>| s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
    println!("initial: {}", aut.initial().iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" "));
    println!("accepting states: {}", ids(aut.accepting()));
    println!("dead states: {}", ids(aut.dead()));
    if aut.language_is_empty() {
        println!("language: empty");
    } else {
        match extract_subgoal_sequences(&aut, 1, a.domain.into()) {
            Ok(paths) => {
                let p = &paths[0];
                println!("subgoal path: {} stage(s), target {:?}", p.len(), p.target);
                for (i, s) in p.steps.iter().enumerate() {
                    println!("  {}. {}", i + 1, describe_step(s));
                }
                if let Some(h) = &p.hold {
                    println!("  hold. {}", describe_step(h));
                }
            }
            Err(e) => println!("subgoal path: none ({e})"),
        }
    }
    match a.dump {
        Some(Some(path)) => write_file(&path, &aut.dump())?,
        Some(None) => print!("{}", aut.dump()),
        None => {}
    }
    Ok(())
}

fn read_layout(path: &Path) -> Result<LetterLayout> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let inner = v
        .get("raw_state")
        .and_then(|r| r.get("layout"))
        .or_else(|| v.get("layout"))
        .unwrap_or(&v);
    serde_json::from_value(inner.clone()).map_err(|e| CliError::Config(format!("{}: not a letter layout: {e}", path.display())))
}

fn cmd_oracle(a: OracleArgs) -> Result<()> {
    if env_kind(&a.env)? != EnvKind::Letter {
        return Err(CliError::Config("the optimal-steps oracle supports only the letter environment".into()));
    }
    let layout = read_layout(&a.layout)?;
    let f = parse(&a.spec).map_err(|e| CliError::Config(format!("parse: {e}")))?;
    let aut = compile(&f).map_err(|e| CliError::Config(e.to_string()))?;
    let paths = extract_subgoal_sequences(&aut, 8, AssignmentDomain::AtMostOne)
        .map_err(|e| CliError::Unreachable(e.to_string()))?;
    let mut last_err = None;
    let best = paths
        .iter()
        .filter_map(|p| optimal_steps_letter(&layout, &p.steps).map_err(|e| last_err = Some(e)).ok())
        .min_by_key(|o| o.steps);
    match best {
        Some(o) => {
            println!("steps: {}", o.steps);
            println!("normalized: {}", o.normalized);
            Ok(())
        }
        None => Err(CliError::Unreachable(last_err.map_or("no subgoal sequence".into(), |e| e.to_string()))),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_corpus(c: CorpusCommand) -> Result<()> {
    match c {
        CorpusCommand::List => {
            for n in corpus_names() {
                println!("{n}");
            }
            Ok(())
        }
        CorpusCommand::Export { name, out } => {
            let specs = match name {
                Some(n) => corpus_by_name(&n).map_err(|e| CliError::Config(e.to_string()))?,
                None => all_fixed(),
            };
            emit(out.as_deref(), &write_spec_file(&specs))
        }
    }
}

fn alphabet_arg(text: &str) -> Result<Vec<Proposition>> {
    let atoms: Vec<Proposition> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).map(prop).collect();
    if atoms.is_empty() {
        return Err(CliError::Config("empty alphabet".into()));
    }
    Ok(atoms)
}

fn sample_specs(
    family: SampleFamily,
    n_seq: usize,
    n_disj: usize,
    count: usize,
    alphabet: &[Proposition],
    reuse: AtomReuse,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<SpecRecord>> {
    (1..=count)
        .map(|i| {
            let mut r = match family {
                SampleFamily::ReachOnly => sample_reach_only(n_seq, n_disj, alphabet, reuse, rng),
                SampleFamily::ReachAvoid => sample_reach_avoid(n_seq, n_disj, alphabet, reuse, rng),
            }
            .map_err(|e| CliError::Config(e.to_string()))?;
            r.id = format!("{}/{i}", r.id);
            Ok(r)
        })
        .collect()
}

fn cmd_sample(a: SampleArgs) -> Result<()> {
    let alphabet = alphabet_arg(&a.alphabet)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let specs = sample_specs(a.family, a.n_seq, a.n_disj, a.count, &alphabet, a.reuse.into(), &mut rng)?;
    emit(a.out.as_deref(), &write_spec_file(&specs))
}

/// Long-format plot data: one row per (family, n_seq, n_disj, metric).
fn cmd_figure_data(a: FigureArgs) -> Result<()> {
    let agent: AgentKind = a.agent.parse().map_err(|e: specbench::harness::UnknownAgent| CliError::Config(e.to_string()))?;
    let letters = alphabet_arg("a,b,c,d,e,f,g,h,i,j,k,l")?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let config = EvalConfig { n_seeds: a.seeds, n_episodes: a.episodes, seed_base: seed_base(a.seed)?, ..EvalConfig::default() };
    let pool = pool(a.jobs)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["family", "n_seq", "n_disj", "metric", "mean", "std", "n"]).unwrap();
    for family in [SampleFamily::ReachOnly, SampleFamily::ReachAvoid] {
        for n_seq in [2, 4, 6, 8, 10] {
            for n_disj in [0, 1, 2] {
                let specs = sample_specs(family, n_seq, n_disj, a.samples, &letters, AtomReuse::AcrossStages, &mut rng)?;
                let report = pool.install(|| evaluate(&|| EnvKind::Letter.make(), &specs, &|| agent.make(), &config))?;
                let rows = &report.rows;
                let rate = |f: &dyn Fn(&specbench::harness::SeedRow) -> u64| {
                    rows.iter().map(|r| f(r) as f64 / r.n_episodes as f64).collect::<Vec<f64>>()
                };
                let mus: Vec<f64> =
                    rows.iter().filter_map(|r| r.mu()).map(|m| *m.numer() as f64 / *m.denom() as f64).collect();
                let per_stage: Vec<f64> = mus.iter().map(|m| m / n_seq as f64).collect();
                let name = match family {
                    SampleFamily::ReachOnly => "reach_only",
                    SampleFamily::ReachAvoid => "reach_avoid",
                };
                for (metric, xs) in [
                    ("eta_s", rate(&|r| r.satisfied)),
                    ("eta_v", rate(&|r| r.violated)),
                    ("eta_o", rate(&|r| r.other)),
                    ("mu", mus),
                    ("mu_per_stage", per_stage),
                ] {
                    let (mean, std, n) =
                        MeanStd::of(&xs).map_or(("none".into(), "none".into(), 0), |m| (m.mean.to_string(), m.std.to_string(), m.n));
                    w.write_record([name.to_string(), n_seq.to_string(), n_disj.to_string(), metric.into(), mean, std, n.to_string()])
                        .unwrap();
                }
            }
        }
    }
    write_file(&a.out, &String::from_utf8(w.into_inner().unwrap()).unwrap())
}
