//! Structured run reports with a stable key order: identical inputs and
//! flags produce byte-identical text, except for the one volatile header
//! line carrying the timestamp and timings. The JSON form carries the same
//! data with the volatile parts under `meta`.

use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::postnikov::{StepStatus, StepVerdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

impl From<StepStatus> for Status {
    fn from(s: StepStatus) -> Status {
        match s {
            StepStatus::Pass => Status::Pass,
            StepStatus::Fail => Status::Fail,
            StepStatus::Skipped => Status::Skipped,
        }
    }
}

#[derive(Debug)]
pub struct Verdict {
    pub step: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug)]
pub struct Section {
    pub title: String,
    pub lines: Vec<(String, String)>,
}

#[derive(Debug)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<(String, String)>,
    pub sections: Vec<Section>,
    pub verdicts: Vec<Verdict>,
    pub timings_ms: Vec<(String, u128)>,
    pub generated_unix: u64,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        let generated_unix =
            SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        RunReport {
            command: command.into(),
            inputs: Vec::new(),
            sections: Vec::new(),
            verdicts: Vec::new(),
            timings_ms: Vec::new(),
            generated_unix,
        }
    }

    pub fn add_input(&mut self, path: &str, bytes: &[u8]) {
        let mut hasher = Sha256::new();
        hasher.update(bytes);
        let digest = hasher.finalize();
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.inputs.push((path.to_string(), hex));
    }

    pub fn begin_section(&mut self, title: impl Into<String>) {
        self.sections.push(Section { title: title.into(), lines: Vec::new() });
    }

    pub fn kv(&mut self, key: impl Into<String>, value: impl Into<String>) {
        if self.sections.is_empty() {
            self.begin_section("summary");
        }
        self.sections.last_mut().unwrap().lines.push((key.into(), value.into()));
    }

    pub fn verdict(&mut self, step: impl Into<String>, status: Status, detail: impl Into<String>) {
        self.verdicts.push(Verdict { step: step.into(), status, detail: detail.into() });
    }

    pub fn check(&mut self, step: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.verdict(step, if ok { Status::Pass } else { Status::Fail }, detail);
    }

    pub fn absorb_steps(&mut self, steps: &[StepVerdict]) {
        for s in steps {
            self.verdict(s.name.clone(), s.status.into(), s.detail.clone());
        }
    }

    pub fn timing(&mut self, step: impl Into<String>, millis: u128) {
        self.timings_ms.push((step.into(), millis));
    }

    pub fn overall(&self) -> Status {
        if self.verdicts.iter().any(|v| v.status == Status::Fail) {
            Status::Fail
        } else {
            Status::Pass
        }
    }

    /// 0 on pass (skips allowed), 1 on any failed verdict.
    pub fn exit_code(&self) -> i32 {
        match self.overall() {
            Status::Fail => 1,
            _ => 0,
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        // the single volatile line
        let timings: Vec<String> =
            self.timings_ms.iter().map(|(k, v)| format!("{k}={v}ms")).collect();
        out.push_str(&format!(
            "# generated unix:{} {}\n",
            self.generated_unix,
            timings.join(" ")
        ));
        out.push_str(&format!("command: {}\n", self.command));
        for (path, digest) in &self.inputs {
            out.push_str(&format!("input: {path} sha256={digest}\n"));
        }
        for section in &self.sections {
            out.push_str(&format!("== {}\n", section.title));
            for (k, v) in &section.lines {
                out.push_str(&format!("{k}: {v}\n"));
            }
        }
        for v in &self.verdicts {
            out.push_str(&format!("step {}: {}", v.step, v.status.as_str()));
            if !v.detail.is_empty() {
                out.push_str(&format!(" ({})", v.detail));
            }
            out.push('\n');
        }
        out.push_str(&format!("verdict: {}\n", self.overall().as_str()));
        out
    }

    pub fn to_json(&self) -> Value {
        let mut timings = Map::new();
        for (k, v) in &self.timings_ms {
            timings.insert(k.clone(), json!(v));
        }
        let sections: Vec<Value> = self
            .sections
            .iter()
            .map(|s| {
                let mut lines = Map::new();
                for (k, v) in &s.lines {
                    lines.insert(k.clone(), json!(v));
                }
                json!({ "title": s.title, "data": Value::Object(lines) })
            })
            .collect();
        let verdicts: Vec<Value> = self
            .verdicts
            .iter()
            .map(|v| json!({ "step": v.step, "status": v.status.as_str(), "detail": v.detail }))
            .collect();
        json!({
            "command": self.command,
            "inputs": self.inputs.iter().map(|(p, d)| json!({"path": p, "sha256": d})).collect::<Vec<_>>(),
            "meta": { "generated_unix": self.generated_unix, "timings_ms": Value::Object(timings) },
            "sections": sections,
            "verdicts": verdicts,
            "verdict": self.overall().as_str(),
        })
    }
}
