use std::io::Write;
use std::process::ExitCode;
use std::time::Duration;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Everything a command read, in order, for the inputs digest.
#[derive(Debug, Default)]
pub struct Inputs {
    items: Vec<(String, Vec<u8>)>,
}

impl Inputs {
    pub fn read_file(&mut self, label: &str, path: &str) -> Result<String, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("cannot read `{path}`: {e}")))?;
        self.items.push((format!("{label}:{path}"), text.as_bytes().to_vec()));
        Ok(text)
    }

    pub fn record(&mut self, label: &str, text: &str) {
        self.items.push((label.to_owned(), text.as_bytes().to_vec()));
    }

    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for (label, bytes) in &self.items {
            h.update(label.as_bytes());
            h.update([0]);
            h.update((bytes.len() as u64).to_le_bytes());
            h.update(bytes);
        }
        hex::encode(h.finalize())
    }
}

/// One named verification result.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub counterexample: Option<Value>,
}

impl Check {
    pub fn to_json(&self) -> Value {
        json!({"name": self.name, "passed": self.passed, "counterexample": self.counterexample})
    }
}

/// What a command produced on success.
#[derive(Debug)]
pub struct Outcome {
    pub results: Value,
    pub checks: Vec<Check>,
    /// Exit code 0 or 1 before failed checks are taken into account.
    pub code: u8,
    pub human: Vec<String>,
}

impl Outcome {
    pub fn new(results: Value) -> Outcome {
        Outcome {
            results,
            checks: Vec::new(),
            code: 0,
            human: Vec::new(),
        }
    }
}

pub struct Report {
    body: Value,
    code: u8,
    human: Vec<String>,
}

impl Report {
    pub fn new(command: Vec<String>, inputs: &Inputs, outcome: Result<Outcome, CliError>, wall: Option<Duration>) -> Report {
        let mut body = Map::new();
        body.insert("command".into(), json!(command));
        body.insert("inputs_digest".into(), json!(inputs.digest()));
        let (code, human) = match outcome {
            Ok(o) => {
                let failed = o.checks.iter().any(|c| !c.passed);
                let code = if failed { 1 } else { o.code };
                body.insert("results".into(), o.results);
                body.insert("verification".into(), Value::Array(o.checks.iter().map(Check::to_json).collect()));
                let mut human = o.human;
                for c in o.checks.iter().filter(|c| !c.passed) {
                    human.push(format!("FAILED {}", c.name));
                }
                (code, human)
            }
            Err(e) => {
                body.insert("error".into(), json!({"kind": e.kind(), "message": e.to_string()}));
                (e.exit_code() as u8, vec![format!("error: {e}")])
            }
        };
        body.insert("exit_code".into(), json!(code));
        if let Some(w) = wall {
            body.insert("wall_time_ms".into(), json!(w.as_millis() as u64));
        }
        Report {
            body: Value::Object(body),
            code,
            human,
        }
    }

    pub fn emit(self) -> ExitCode {
        for line in &self.human {
            eprintln!("{line}");
        }
        let text = serde_json::to_string_pretty(&self.body).expect("plain data");
        // a closed pipe on stdout is not an error of the command itself
        let _ = writeln!(std::io::stdout().lock(), "{text}");
        ExitCode::from(self.code)
    }
}
