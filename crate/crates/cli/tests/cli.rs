use std::fs;
use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use specbench::envs::{Action, EnvKind};
use specbench::ltl::format;
use specbench::spec_gen::all_fixed;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_specbench"));
    c.env_remove("SPECBENCH_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn help_and_unknown_flags() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["eval", "--help"]).status.code(), Some(0));
    assert_eq!(run(&["--no-such-flag"]).status.code(), Some(2));
    assert_eq!(run(&["compile", "--formula", "F a", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
}

#[test]
fn compile_eventually() {
    let o = run(&["compile", "--formula", "F a"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("states: 2, accepting: 1, dead: 0"));
    assert!(text.contains("reach (a)"), "{text}");
}

#[test]
fn compile_false_reports_empty_language() {
    let o = run(&["compile", "--formula", "false"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("language: empty"));
    assert_eq!(run(&["compile", "--formula", "F (a"]).status.code(), Some(2));
}

#[test]
fn compile_dump_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.txt");
    let o = run(&["compile", "--formula", "G !y & F b", "--dump", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let dump = fs::read_to_string(&path).unwrap();
    assert!(dump.lines().all(|l| l.starts_with("state ") || l.starts_with("edge ")));
    assert!(dump.contains(" accepting"));
}

#[test]
fn compile_every_fixed_formula() {
    for r in all_fixed() {
        let o = run(&["compile", "--formula", &format(&r.formula)]);
        assert_eq!(o.status.code(), Some(0), "{}", r.id);
        let first = stdout(&o).lines().next().unwrap().to_string();
        let states: usize = first.strip_prefix("states: ").unwrap().split(',').next().unwrap().parse().unwrap();
        assert!(states < 200, "{}: {states}", r.id);
    }
}

#[test]
fn eval_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let code = |args: &[&str]| run(&[&["eval", "--out", out][..], args].concat()).status.code();
    assert_eq!(code(&["--env", "letter", "--specs", "missing.txt"]), Some(2));
    assert_eq!(code(&["--env", "letter", "--specs", "corpus:nope"]), Some(2));
    assert_eq!(code(&["--env", "mars", "--specs", "corpus:letter"]), Some(2));
    assert_eq!(code(&["--env", "zone-point", "--specs", "corpus:letter_ind"]), Some(2));
    assert_eq!(code(&["--env", "zone-point", "--specs", "corpus:zone_ind", "--agent", "bfs"]), Some(2));
    assert_eq!(code(&["--env", "letter", "--specs", "corpus:letter_ind", "--config", "{\"grid\": 3}"]), Some(2));
}

fn eval_into(dir: &std::path::Path, jobs: &str) -> Output {
    run(&[
        "eval", "--env", "letter", "--specs", "corpus:letter_ind", "--agent", "bfs", "--seeds", "2", "--episodes", "5",
        "--trajectories", "--jobs", jobs, "--out", dir.to_str().unwrap(),
    ])
}

#[test]
fn eval_outputs_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(eval_into(a.path(), "1").status.code(), Some(0));
    assert_eq!(eval_into(b.path(), "3").status.code(), Some(0));
    for f in ["report.csv", "summary.csv", "trajectories.jsonl", "manifest.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    let csv = fs::read_to_string(a.path().join("report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 5 * 2);
    assert_eq!(csv.lines().next().unwrap(), "spec_id,family,seed,n_episodes,eta_s,eta_v,eta_o,mu,mu_acc");
    let manifest: Value = serde_json::from_slice(&fs::read(a.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["agent"], "bfs");
    assert_eq!(manifest["seed_indices"], serde_json::json!([0, 1]));
    assert_eq!(manifest["artifacts"].as_object().unwrap().len(), 3);
}

#[test]
fn seed_variable_overrides_flag() {
    let dirs: Vec<_> = (0..3).map(|_| tempfile::tempdir().unwrap()).collect();
    let go = |d: &tempfile::TempDir, base: &str, var: Option<&str>| {
        let mut c = bin();
        c.args(["eval", "--env", "letter", "--specs", "corpus:letter_ind", "--agent", "random", "--seeds", "1"]);
        c.args(["--episodes", "3", "--seed-base", base, "--out", d.path().to_str().unwrap()]);
        if let Some(v) = var {
            c.env("SPECBENCH_SEED", v);
        }
        assert!(c.output().unwrap().status.success());
        fs::read_to_string(d.path().join("report.csv")).unwrap()
    };
    let seven = go(&dirs[0], "7", None);
    assert_eq!(go(&dirs[1], "0", Some("7")), seven);
    assert_ne!(go(&dirs[2], "0", None), seven);
}

#[test]
fn oracle_command() {
    let dir = tempfile::tempdir().unwrap();
    let layout = dir.path().join("layout.json");
    fs::write(
        &layout,
        r#"{"env":"letter","step":0,"layout":{"grid_size":5,"agent":[0,0],"letters":[["a",[0,3]],["b",[2,2]]]}}"#,
    )
    .unwrap();
    let l = layout.to_str().unwrap();
    let o = run(&["oracle", "--env", "letter", "--layout", l, "--spec", "F (a & F b)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "steps: 5\nnormalized: 2.5\n");
    assert_eq!(run(&["oracle", "--env", "letter", "--layout", l, "--spec", "F c"]).status.code(), Some(4));
    assert_eq!(run(&["oracle", "--env", "letter", "--layout", "nope.json", "--spec", "F a"]).status.code(), Some(2));
}

#[test]
fn corpus_and_sample_round_trip() {
    let o = run(&["corpus", "export", "--name", "letter_ind"]);
    assert_eq!(o.status.code(), Some(0));
    let parsed = specbench::spec_gen::parse_spec_file(&stdout(&o), &Default::default()).unwrap();
    assert_eq!(parsed.len(), 5);
    let s1 = stdout(&run(&["sample", "--family", "reach-avoid", "--n-seq", "3", "--n-disj", "1", "--count", "4", "--seed", "9"]));
    let s2 = stdout(&run(&["sample", "--family", "reach-avoid", "--n-seq", "3", "--n-disj", "1", "--count", "4", "--seed", "9"]));
    assert_eq!(s1, s2);
    assert_eq!(specbench::spec_gen::parse_spec_file(&s1, &Default::default()).unwrap().len(), 4);
    let too_many = run(&["sample", "--family", "reach-only", "--n-seq", "10", "--n-disj", "2"]);
    assert_eq!(too_many.status.code(), Some(2));
}

/// Serve stream against the in-process environment, bit for bit.
#[test]
fn serve_matches_native_engine() {
    let mut child = bin()
        .args(["serve", "--env", "letter"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let actions: Vec<usize> = (0..75).map(|i| (i * 7 + i / 3) % 4).collect();
    {
        let mut stdin = child.stdin.take().unwrap();
        writeln!(stdin, r#"{{"op":"spec"}}"#).unwrap();
        writeln!(stdin, r#"{{"op":"reset","payload":{{"seed":42}}}}"#).unwrap();
        for a in &actions {
            writeln!(stdin, r#"{{"op":"step","payload":{{"action":{a}}}}}"#).unwrap();
        }
        writeln!(stdin, r#"{{"op":"step","payload":{{"action":0}}}}"#).unwrap();
        writeln!(stdin, r#"{{"op":"close"}}"#).unwrap();
    }
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let lines: Vec<Value> =
        String::from_utf8(out.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 1 + 1 + 1 + 75 + 1 + 1);
    assert_eq!(lines[0]["protocol"], 1);
    assert_eq!(lines[1]["env"], "letter");

    let bits = |v: &Value| v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap().to_bits()).collect::<Vec<_>>();
    let native_bits = |xs: &[f64]| xs.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
    let mut env = EnvKind::Letter.make();
    let (obs, labels) = env.reset(42).unwrap();
    assert_eq!(bits(&lines[2]["obs"]["s_ap"]), native_bits(&obs[0].s_ap));
    assert_eq!(lines[2]["propositions"], serde_json::json!(labels));
    for (i, a) in actions.iter().enumerate() {
        let r = env.step(&Action::Discrete(*a)).unwrap();
        let w = &lines[3 + i];
        assert_eq!(bits(&w["obs"]["s_ap"]), native_bits(&r.obs[0].s_ap), "step {i}");
        assert_eq!(bits(&w["obs"]["s_not_ap"]), native_bits(&r.obs[0].s_not_ap));
        assert_eq!(w["propositions"], serde_json::json!(r.propositions));
        assert_eq!((w["terminal"].as_bool(), w["timeout"].as_bool()), (Some(r.terminal), Some(r.timeout)));
        assert_eq!(w["step"], i + 1);
    }
    assert_eq!(lines[78]["ok"], false);
    assert_eq!(lines[79]["closed"], true);
}

#[test]
fn figure_data_covers_the_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig.csv");
    let o = run(&["figure-data", "--seeds", "1", "--episodes", "2", "--samples", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("family,n_seq,n_disj,metric,mean,std,n"));
    // 2 families x 5 n_seq x 3 n_disj x 5 metrics
    assert_eq!(lines.count(), 150);
    assert!(text.contains("reach_avoid,10,2,eta_s,"));
}
