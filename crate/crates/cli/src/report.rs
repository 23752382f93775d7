use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

use crate::source::FieldEcho;

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Serialize)]
pub struct Outcome {
    pub exit_code: u8,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Wall-clock data; the only part of a report that varies between runs.
#[derive(Debug, Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub report_version: u32,
    pub tool: Tool,
    pub command: &'static str,
    pub field: FieldEcho,
    pub config: Value,
    pub payload: Value,
    pub warnings: Vec<String>,
    pub outcome: Outcome,
    pub timing: Timing,
}

impl Report {
    pub fn new(command: &'static str, field: FieldEcho, config: Value) -> Self {
        Report {
            report_version: REPORT_VERSION,
            tool: Tool {
                name: "presnov",
                version: env!("CARGO_PKG_VERSION"),
            },
            command,
            field,
            config,
            payload: Value::Null,
            warnings: Vec::new(),
            outcome: Outcome {
                exit_code: 0,
                status: "ok",
                error: None,
            },
            timing: Timing { elapsed_ms: 0.0 },
        }
    }

    pub fn fail(&mut self, exit_code: u8, status: &'static str, error: Option<String>) {
        if self.outcome.exit_code == 0 {
            self.outcome = Outcome {
                exit_code,
                status,
                error,
            };
        }
    }

    pub fn write(&self, out: Option<&Path>) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        match out {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                Ok(stdout.flush()?)
            }
        }
    }
}
