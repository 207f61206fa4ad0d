//! JSON-lines environment server.
//!
//! One request per input line, exactly one reply line per request:
//! `{"op": "spec"}`, `{"op": "reset", "payload": {"seed": 7}}`,
//! `{"op": "step", "payload": {"action": ...}}`, `{"op": "close"}`.
//! Failed requests reply `{"ok": false, "error": ...}` and the session continues.

use std::io::{self, BufRead, Write};

use serde::Deserialize;
use serde_json::{json, Value};

use specbench::envs::{Action, Environment, Observation};

use crate::{config_overrides, env_kind, CliError};

pub const PROTOCOL_VERSION: u32 = 1;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope {
    op: String,
    #[serde(default)]
    payload: Value,
}

#[derive(Deserialize)]
struct ResetPayload {
    seed: u64,
}

#[derive(Deserialize)]
struct StepPayload {
    action: Action,
}

enum Request {
    Spec,
    Reset(u64),
    Step(Action),
    Close,
}

fn parse_request(line: &str) -> Result<Request, String> {
    let env: Envelope = serde_json::from_str(line).map_err(|e| format!("bad request: {e}"))?;
    let bad = |e: serde_json::Error| format!("bad {} payload: {e}", env.op);
    match env.op.as_str() {
        "spec" => Ok(Request::Spec),
        "close" => Ok(Request::Close),
        "reset" => serde_json::from_value::<ResetPayload>(env.payload.clone()).map(|p| Request::Reset(p.seed)).map_err(bad),
        "step" => serde_json::from_value::<StepPayload>(env.payload.clone()).map(|p| Request::Step(p.action)).map_err(bad),
        other => Err(format!("unknown op {other:?}")),
    }
}

fn obs_json(obs: &[Observation]) -> Value {
    if obs.len() == 1 {
        json!(obs[0])
    } else {
        Value::Object(obs.iter().enumerate().map(|(i, o)| (i.to_string(), json!(o))).collect())
    }
}

fn spec_reply(env: &dyn Environment) -> Value {
    json!({
        "ok": true,
        "protocol": PROTOCOL_VERSION,
        "env": env.id(),
        "alphabet": env.alphabet(),
        "action_space": env.action_space(),
        "observation_layout": env.layout(),
        "horizon": env.horizon(),
        "n_agents": env.n_agents(),
    })
}

/// Handles one request line; `None` once the client closes.
pub fn handle(env: &mut dyn Environment, line: &str) -> Option<Value> {
    let req = match parse_request(line) {
        Ok(r) => r,
        Err(e) => return Some(json!({"ok": false, "error": e})),
    };
    let reply = match req {
        Request::Spec => Ok(spec_reply(env)),
        Request::Reset(seed) => env.reset(seed).map(|(obs, labels)| {
            json!({
                "ok": true,
                "obs": obs_json(&obs),
                "reward": 0.0,
                "terminal": false,
                "timeout": false,
                "propositions": labels,
                "step": 0,
            })
        }),
        Request::Step(action) => env.step(&action).map(|r| {
            json!({
                "ok": true,
                "obs": obs_json(&r.obs),
                "reward": r.reward,
                "terminal": r.terminal,
                "timeout": r.timeout,
                "propositions": r.propositions,
                "step": r.step,
            })
        }),
        Request::Close => return None,
    };
    Some(reply.unwrap_or_else(|e| json!({"ok": false, "error": e.to_string()})))
}

pub fn run(env_id: &str, config: Option<&str>) -> Result<(), CliError> {
    let kind = env_kind(env_id)?;
    let mut env = kind.make_with(&config_overrides(config)?).map_err(|e| CliError::Config(e.to_string()))?;
    let stdin = io::stdin();
    let mut out = io::stdout().lock();
    let io_err = |e: io::Error| CliError::Runtime(e.to_string());
    let hello = json!({"hello": "specbench", "protocol": PROTOCOL_VERSION, "version": env!("CARGO_PKG_VERSION"), "env": kind.id()});
    writeln!(out, "{hello}").and_then(|_| out.flush()).map_err(io_err)?;
    for line in stdin.lock().lines() {
        let line = line.map_err(io_err)?;
        if line.trim().is_empty() {
            continue;
        }
        match handle(env.as_mut(), &line) {
            Some(reply) => writeln!(out, "{reply}").and_then(|_| out.flush()).map_err(io_err)?,
            None => {
                writeln!(out, "{}", json!({"ok": true, "closed": true})).and_then(|_| out.flush()).map_err(io_err)?;
                break;
            }
        }
    }
    Ok(())
}
