//! Reports: a command echo, a deterministic summary, per-check verdicts
//! with witnesses, and timing. Text output is human-first; the JSON output
//! mirrors the fields exactly.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

#[derive(Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Serialize)]
pub struct Report {
    pub command: String,
    pub summary: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    pub elapsed_ms: u128,
    pub budget_used: u64,
    #[serde(skip)]
    started: Option<Instant>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            summary: BTreeMap::new(),
            checks: Vec::new(),
            elapsed_ms: 0,
            budget_used: 0,
            started: Some(Instant::now()),
        }
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.summary.insert(key.to_string(), value.to_string());
    }

    pub fn check(&mut self, name: &str, passed: bool, witness: Option<String>) {
        self.checks.push(Check { name: name.to_string(), passed, witness });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn finish(&mut self, budget_used: u64) {
        self.budget_used = budget_used;
        if let Some(t) = self.started.take() {
            self.elapsed_ms = t.elapsed().as_millis();
        }
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(self).expect("report serializes");
            s.push('\n');
            return s;
        }
        let mut out = format!("# {}\n", self.command);
        for (k, v) in &self.summary {
            out.push_str(&format!("{k}: {v}\n"));
        }
        for c in &self.checks {
            let verdict = if c.passed { "ok  " } else { "FAIL" };
            out.push_str(&format!("{verdict} {}", c.name));
            if let Some(w) = &c.witness {
                out.push_str(&format!("  [{w}]"));
            }
            out.push('\n');
        }
        let verdict = if self.passed() { "pass" } else { "fail" };
        out.push_str(&format!(
            "result: {verdict} ({} checks, {} tuple evaluations, {} ms)\n",
            self.checks.len(),
            self.budget_used,
            self.elapsed_ms
        ));
        out
    }
}
