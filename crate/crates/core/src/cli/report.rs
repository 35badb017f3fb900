use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Map, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IMPOSSIBLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "reason", rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail(String),
    Skipped(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub name: String,
    pub statement: String,
    #[serde(flatten)]
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip)]
    pub elapsed_ms: u128,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug)]
pub struct Report {
    pub command: String,
    pub context: Option<Value>,
    pub entries: Vec<Entry>,
    pub result: Map<String, Value>,
    /// Overrides the default exit code (1 iff some entry failed).
    pub exit: Option<i32>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report { command: command.into(), context: None, entries: Vec::new(), result: Map::new(), exit: None }
    }

    /// Runs `check` and records its outcome with the elapsed time.
    pub fn check(&mut self, name: &str, statement: &str, check: impl FnOnce() -> (Status, Option<String>)) -> &Status {
        let start = Instant::now();
        let (status, witness) = check();
        self.entries.push(Entry {
            name: name.into(),
            statement: statement.into(),
            status,
            witness,
            elapsed_ms: start.elapsed().as_millis(),
        });
        &self.entries.last().expect("just pushed").status
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.result.insert(key.into(), value.into());
    }

    pub fn failed(&self) -> bool {
        self.entries.iter().any(|e| matches!(e.status, Status::Fail(_)))
    }

    pub fn exit_code(&self) -> i32 {
        // a failure always wins over whatever the command asked for
        if self.failed() {
            return EXIT_IMPOSSIBLE.max(self.exit.unwrap_or(EXIT_IMPOSSIBLE));
        }
        self.exit.unwrap_or(EXIT_OK)
    }

    pub fn render(&self, format: Format, canonical: bool) -> String {
        match format {
            Format::Json => {
                let mut v = json!({
                    "command": self.command,
                    "context": self.context,
                    "entries": self.entries,
                    "result": self.result,
                    "exit_code": self.exit_code(),
                });
                if !canonical {
                    let timing: Map<String, Value> =
                        self.entries.iter().map(|e| (e.name.clone(), json!(e.elapsed_ms))).collect();
                    v["elapsed_ms"] = Value::Object(timing);
                }
                let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Text => self.render_text(canonical),
        }
    }

    fn render_text(&self, canonical: bool) -> String {
        let mut out = String::new();
        writeln!(out, "mrdkit {}", self.command).unwrap();
        if let Some(ctx) = &self.context {
            writeln!(out, "context  {}", ctx).unwrap();
        }
        let width = self.entries.iter().map(|e| e.name.len()).max().unwrap_or(0);
        for e in &self.entries {
            let (tag, reason) = match &e.status {
                Status::Pass => ("PASS", None),
                Status::Fail(r) => ("FAIL", Some(r)),
                Status::Skipped(r) => ("SKIP", Some(r)),
            };
            write!(out, "{tag}  {:width$}  {}", e.name, e.statement).unwrap();
            if let Some(r) = reason {
                write!(out, "  [{r}]").unwrap();
            }
            if let Some(w) = &e.witness {
                write!(out, "  ({w})").unwrap();
            }
            out.push('\n');
        }
        for (k, v) in &self.result {
            match v {
                Value::String(s) => writeln!(out, "{k}: {s}").unwrap(),
                other => writeln!(out, "{k}: {other}").unwrap(),
            }
        }
        writeln!(out, "exit {}", self.exit_code()).unwrap();
        if !canonical && !self.entries.is_empty() {
            let timing: Vec<String> = self.entries.iter().map(|e| format!("{}={}", e.name, e.elapsed_ms)).collect();
            writeln!(out, "elapsed-ms {}", timing.join(" ")).unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let mut r = Report::new("x");
        assert_eq!(r.exit_code(), 0);
        r.check("a", "s", || (Status::Skipped("cap".into()), None));
        assert_eq!(r.exit_code(), 0);
        r.exit = Some(EXIT_CAP);
        assert_eq!(r.exit_code(), 3);
        r.check("b", "s", || (Status::Fail("no".into()), None));
        assert_eq!(r.exit_code(), 3);
        r.exit = None;
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn canonical_output_has_no_timing() {
        let mut r = Report::new("x");
        r.check("a", "s", || (Status::Pass, Some("w".into())));
        for fmt in [Format::Text, Format::Json] {
            assert!(!r.render(fmt, true).contains("elapsed"));
            assert!(r.render(fmt, false).contains("elapsed"));
        }
        let v: Value = serde_json::from_str(&r.render(Format::Json, true)).unwrap();
        assert_eq!(v["entries"][0]["status"], "pass");
        assert_eq!(v["entries"][0]["witness"], "w");
    }
}
