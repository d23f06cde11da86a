//! Line-delimited JSON reports. Every record carries `record` and
//! `schema_version`; the only time-dependent value is the header's
//! `timestamp` field, so reruns with the same config differ nowhere else.

use std::io::{self, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use pentagon::identities::defaults::{DEFAULTS_VERSION, REPORT_SCHEMA_VERSION};
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: line {line}: {message}")]
    Input { path: String, line: usize, message: String },
    #[error("{0}")]
    Engine(#[from] pentagon::Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Input { .. } => "input",
            CliError::Engine(_) => "engine",
            CliError::Io(_) => "io",
        }
    }

    /// The machine-readable form written when a run aborts.
    pub fn record(&self) -> Value {
        let mut v = json!({
            "record": "failure",
            "schema_version": REPORT_SCHEMA_VERSION,
            "kind": self.kind(),
            "message": self.to_string(),
            "pass": false,
        });
        if let CliError::Input { line, .. } = self {
            v["line"] = json!(line);
        }
        v
    }
}

pub struct Report {
    lines: Vec<String>,
}

impl Report {
    pub fn new(command: &str, config: Value) -> Self {
        let ms = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_millis() as u64)
            .unwrap_or(0);
        let mut r = Report { lines: Vec::new() };
        r.push(
            "header",
            json!({
                "command": command,
                "tool_version": env!("CARGO_PKG_VERSION"),
                "defaults_version": DEFAULTS_VERSION,
                "config": config,
                "timestamp": { "started_unix_ms": ms },
            }),
        );
        r
    }

    /// Appends one record; `body` must serialize to a JSON object.
    pub fn push<T: Serialize>(&mut self, record: &str, body: T) {
        let mut map = match serde_json::to_value(body) {
            Ok(Value::Object(m)) => m,
            Ok(other) => {
                let mut m = Map::new();
                m.insert("value".into(), other);
                m
            }
            Err(e) => {
                let mut m = Map::new();
                m.insert("serialization_error".into(), json!(e.to_string()));
                m
            }
        };
        map.insert("record".into(), json!(record));
        map.insert("schema_version".into(), json!(REPORT_SCHEMA_VERSION));
        self.lines.push(Value::Object(map).to_string());
    }

    /// Writes every line to `path`, or to standard output when there is none.
    /// With a path, the last line (the summary) is also echoed to stdout.
    pub fn write(&self, path: Option<&Path>) -> io::Result<()> {
        let mut text = self.lines.join("\n");
        text.push('\n');
        match path {
            Some(p) => {
                std::fs::write(p, &text)?;
                if let Some(last) = self.lines.last() {
                    println!("{last}");
                }
            }
            None => io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct Stats {
    pub count: usize,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

/// Population statistics; `None` for an empty sample.
pub fn stats(xs: &[f64]) -> Option<Stats> {
    if xs.is_empty() {
        return None;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    Some(Stats {
        count: xs.len(),
        mean,
        std: var.sqrt(),
        min: xs.iter().copied().fold(f64::INFINITY, f64::min),
        max: xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}
