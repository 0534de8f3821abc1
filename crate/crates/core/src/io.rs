//! Point-set files and run metadata.
//!
//! A point-set file holds one point per line, coordinates separated by commas
//! or whitespace, each an integer or `p/q`. Blank lines and lines starting
//! with `#` are ignored.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{format_rational, parse_rational, Point};

pub fn parse_points(text: &str) -> Result<Vec<Point>> {
    let mut points: Vec<Point> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let coords = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        if coords.is_empty() {
            return Err(Error::Parse(format!("line {}: no coordinates", lineno + 1)));
        }
        if let Some(first) = points.first() {
            if first.dim() != coords.len() {
                return Err(Error::Parse(format!(
                    "line {}: expected {} coordinates, found {}",
                    lineno + 1,
                    first.dim(),
                    coords.len()
                )));
            }
        }
        points.push(Point::new(coords));
    }
    Ok(points)
}

pub fn read_points(path: &Path) -> Result<Vec<Point>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_points(&text)
}

pub fn format_points(points: &[Point]) -> String {
    let mut out = String::new();
    for p in points {
        let row: Vec<String> = p.coords().iter().map(format_rational).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Parameters that make a run reproducible, written alongside every table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub seed: Option<u64>,
    pub params: serde_json::Value,
}

impl Provenance {
    pub fn new(command: &str, seed: Option<u64>, params: serde_json::Value) -> Self {
        Self {
            schema_version: crate::experiments::SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            seed,
            params,
        }
    }

    /// `#`-prefixed header lines for CSV output.
    pub fn csv_header(&self) -> String {
        let mut out = format!(
            "# schema_version={} tool_version={} command={}\n",
            self.schema_version, self.tool_version, self.command
        );
        if let Some(seed) = self.seed {
            out.push_str(&format!("# seed={seed}\n"));
        }
        out.push_str(&format!("# params={}\n", self.params));
        out
    }
}
