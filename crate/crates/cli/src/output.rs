use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::ValueEnum;
use flatspan::io::Provenance;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A failed run: message for stderr plus the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn mismatch(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<flatspan::Error> for Failure {
    fn from(e: flatspan::Error) -> Self {
        use flatspan::Error as E;
        let code = match e {
            E::Invariant(_) | E::GeneratorExhausted { .. } => 1,
            _ => 2,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::input(e.to_string())
    }
}

pub type CliResult<T = ()> = Result<T, Failure>;

pub struct Sink {
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Sink {
    /// Writes `text` to `--out` if given, else to stdout.
    pub fn write(&self, text: &str) -> CliResult {
        match &self.out {
            Some(path) => fs::write(path, text)
                .map_err(|e| Failure::input(format!("{}: {e}", path.display()))),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                stdout.flush()?;
                Ok(())
            }
        }
    }

    pub fn table<R: Serialize>(
        &self,
        provenance: &Provenance,
        rows: &[R],
        summary: Value,
    ) -> CliResult {
        let text = match self.format {
            Format::Json => {
                let doc = json!({
                    "schema_version": provenance.schema_version,
                    "provenance": provenance,
                    "rows": rows,
                    "summary": summary,
                });
                let mut s = serde_json::to_string_pretty(&doc)?;
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = provenance.csv_header();
                s.push_str(&format!("# summary={summary}\n"));
                s.push_str(&csv_rows(rows)?);
                s
            }
        };
        self.write(&text)
    }

    /// A single JSON document (CSV output renders it as one row).
    pub fn record<R: Serialize>(&self, provenance: &Provenance, record: &R) -> CliResult {
        match self.format {
            Format::Json => {
                let mut doc = serde_json::to_value(record)?;
                if let Value::Object(map) = &mut doc {
                    map.insert("schema_version".into(), json!(provenance.schema_version));
                    map.insert("provenance".into(), serde_json::to_value(provenance)?);
                }
                let mut s = serde_json::to_string_pretty(&doc)?;
                s.push('\n');
                self.write(&s)
            }
            Format::Csv => {
                let mut s = provenance.csv_header();
                s.push_str(&csv_rows(std::slice::from_ref(record))?);
                self.write(&s)
            }
        }
    }
}

pub fn csv_rows<R: Serialize>(rows: &[R]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::input(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::input(e.to_string()))
}
