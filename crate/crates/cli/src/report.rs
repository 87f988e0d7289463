//! Deterministic report rendering: a sorted config echo plus one or more row
//! sections, emitted as commented CSV or one JSON object. Identical config
//! and seed produce identical bytes, so runs can be diffed.

use std::fmt::Display;
use std::fs;
use std::path::PathBuf;

use serde_json::{Map, Value};

use crate::CliError;

#[derive(Clone, Copy, PartialEq, Eq, Debug, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

struct Section {
    title: &'static str,
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

pub struct Report {
    config: Vec<(String, String)>,
    notes: Vec<(String, String)>,
    sections: Vec<Section>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut report = Self {
            config: Vec::new(),
            notes: Vec::new(),
            sections: Vec::new(),
        };
        report.config("command", command);
        report.config("version", env!("CARGO_PKG_VERSION"));
        report
    }

    /// Input echo; rendered as sorted `# key=value` comments / a JSON map.
    pub fn config(&mut self, key: &str, value: impl Display) {
        self.config.push((key.to_string(), value.to_string()));
    }

    /// Computed scalar result, kept apart from the input echo.
    pub fn note(&mut self, key: impl Display, value: impl Display) {
        self.notes.push((key.to_string(), value.to_string()));
    }

    pub fn section(
        &mut self,
        title: &'static str,
        columns: Vec<&'static str>,
        rows: Vec<Vec<String>>,
    ) {
        self.sections.push(Section {
            title,
            columns,
            rows,
        });
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.render_csv(),
            OutputFormat::Json => self.render_json(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in sorted(&self.config) {
            out.push_str(&format!("# {k}={v}\n"));
        }
        for (k, v) in sorted(&self.notes) {
            out.push_str(&format!("# {k}={v}\n"));
        }
        for s in &self.sections {
            if self.sections.len() > 1 {
                out.push_str(&format!("# table={}\n", s.title));
            }
            out.push_str(&s.columns.join(","));
            out.push('\n');
            for row in &s.rows {
                let line: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
        }
        out
    }

    fn render_json(&self) -> String {
        let mut root = Map::new();
        let mut config = Map::new();
        for (k, v) in sorted(&self.config) {
            config.insert(k, Value::String(v));
        }
        root.insert("config".to_string(), Value::Object(config));
        if !self.notes.is_empty() {
            let mut results = Map::new();
            for (k, v) in sorted(&self.notes) {
                results.insert(k, Value::String(v));
            }
            root.insert("results".to_string(), Value::Object(results));
        }
        for s in &self.sections {
            let rows: Vec<Value> = s
                .rows
                .iter()
                .map(|row| {
                    let mut obj = Map::new();
                    for (col, cell) in s.columns.iter().zip(row) {
                        obj.insert(col.to_string(), Value::String(cell.clone()));
                    }
                    Value::Object(obj)
                })
                .collect();
            root.insert(s.title.to_string(), Value::Array(rows));
        }
        let mut text = serde_json::to_string_pretty(&Value::Object(root)).expect("json render");
        text.push('\n');
        text
    }

    pub fn deliver(&self, format: OutputFormat, out: &Option<PathBuf>) -> Result<(), CliError> {
        let text = self.render(format);
        match out {
            Some(path) => fs::write(path, text)
                .map_err(|e| CliError::Config(format!("writing {}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn sorted(pairs: &[(String, String)]) -> Vec<(String, String)> {
    let mut v = pairs.to_vec();
    v.sort();
    v
}

fn csv_cell(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
