//! Command reports: a digest of the inputs, structured results and a
//! plain-text rendering.

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub results: Value,
    pub lines: Vec<String>,
    pub exit_code: i32,
}

/// SHA-256 over the inputs, each prefixed by its length.
pub fn digest(inputs: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for i in inputs {
        h.update((i.len() as u64).to_le_bytes());
        h.update(i);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

impl Report {
    pub fn new(command: &str, inputs: &[&[u8]]) -> Report {
        Report {
            command: command.into(),
            inputs_digest: digest(inputs),
            results: Value::Object(Default::default()),
            lines: Vec::new(),
            exit_code: 0,
        }
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.results.as_object_mut().expect("results object").insert(key.into(), value);
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn to_json(&self) -> String {
        let v = json!({
            "command": self.command,
            "inputs_digest": self.inputs_digest,
            "exact": true,
            "results": self.results,
        });
        serde_json::to_string_pretty(&v).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} (inputs {})\n", self.command, &self.inputs_digest[..16]);
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        out
    }
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
