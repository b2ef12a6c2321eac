use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::{CmdResult, Failure, Mode};

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Record of one run: what was asked, on which inputs, and how it ended.
pub struct Manifest {
    pub argv: Vec<String>,
    pub mode: Mode,
    pub tol: f64,
    pub seed: u64,
    pub elapsed_ms: f64,
    inputs: Vec<(String, String)>,
    outputs: Vec<(String, String)>,
    outcome: Value,
}

impl Manifest {
    pub fn new(argv: Vec<String>, mode: Mode, tol: f64) -> Self {
        Manifest { argv, mode, tol, seed: 0, elapsed_ms: 0.0, inputs: vec![], outputs: vec![], outcome: Value::Null }
    }

    pub fn add_input(&mut self, name: &str, bytes: &[u8]) {
        self.inputs.push((name.to_string(), sha256_hex(bytes)));
    }

    pub fn add_output(&mut self, name: &str, bytes: &[u8]) {
        self.outputs.push((name.to_string(), sha256_hex(bytes)));
    }

    pub fn set_outcome(&mut self, r: &CmdResult, code: u8) {
        self.outcome = match r {
            Ok(o) => json!({"status": "ok", "exit_code": code, "summary": o.summary}),
            Err(Failure::Input(m)) => json!({"status": "input-error", "exit_code": code, "message": m}),
            Err(Failure::Invariant { message, witness }) => {
                json!({"status": "invariant-failure", "exit_code": code, "message": message, "witness": witness})
            }
        };
    }

    pub fn to_json(&self) -> Value {
        let pairs = |v: &[(String, String)]| -> Vec<Value> {
            v.iter().map(|(n, d)| json!({"name": n, "sha256": d})).collect()
        };
        json!({
            "tool": "conflab",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.argv.iter().skip(1).cloned().collect::<Vec<_>>().join(" "),
            "argv": self.argv,
            "mode": self.mode.name(),
            "tol": self.tol,
            "seed": self.seed,
            "inputs": pairs(&self.inputs),
            "outputs": pairs(&self.outputs),
            "elapsed_ms": self.elapsed_ms,
            "outcome": self.outcome,
        })
    }
}
