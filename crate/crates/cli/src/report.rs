use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub observed: Value,
    pub expected: Value,
    pub tolerance: Value,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        passed: bool,
        observed: impl Serialize,
        expected: impl Serialize,
        tolerance: impl Serialize,
    ) -> Self {
        Self {
            name: name.into(),
            status: if passed { Status::Pass } else { Status::Fail },
            observed: to_value(observed),
            expected: to_value(expected),
            tolerance: to_value(tolerance),
        }
    }

    /// `|observed - expected| < tolerance`.
    pub fn close(name: impl Into<String>, observed: f64, expected: f64, tolerance: f64) -> Self {
        Self::new(
            name,
            (observed - expected).abs() < tolerance,
            observed,
            expected,
            tolerance,
        )
    }

    pub fn exact<T: Serialize + PartialEq>(name: impl Into<String>, observed: T, expected: T) -> Self {
        let ok = observed == expected;
        Self::new(name, ok, observed, expected, "exact")
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn prefixed(mut self, prefix: &str) -> Self {
        self.name = format!("{prefix}.{}", self.name);
        self
    }
}

fn to_value(v: impl Serialize) -> Value {
    // Non-finite floats serialize as null.
    serde_json::to_value(v).unwrap_or(Value::Null)
}

/// A named table exported as `<name>.csv` or `<name>.json`.
#[derive(Clone, Debug)]
pub struct Table {
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&'static str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn write(&self, dir: &Path, format: Format) -> anyhow::Result<PathBuf> {
        match format {
            Format::Csv => {
                let path = dir.join(format!("{}.csv", self.name));
                let mut w =
                    csv::Writer::from_path(&path).with_context(|| format!("cannot write {}", path.display()))?;
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(cell))?;
                }
                w.flush()?;
                Ok(path)
            }
            Format::Json => {
                let path = dir.join(format!("{}.json", self.name));
                let records: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .columns
                            .iter()
                            .map(|c| c.to_string())
                            .zip(row.iter().cloned())
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                write_json(&path, &Value::Array(records))?;
                Ok(path)
            }
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[derive(Debug, Default)]
pub struct SuiteOutput {
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
    pub params: Map<String, Value>,
}

impl SuiteOutput {
    pub fn extend(&mut self, prefix: &str, other: SuiteOutput) {
        self.checks.extend(other.checks.into_iter().map(|c| c.prefixed(prefix)));
        self.tables.extend(other.tables.into_iter().map(|mut t| {
            t.name = format!("{prefix}_{}", t.name);
            t
        }));
        self.params.insert(prefix.to_string(), Value::Object(other.params));
    }
}

fn write_json(path: &Path, value: &Value) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

/// Writes `<output_dir>/<command>.json` plus the suite's tables and returns
/// the report path.
pub fn write_report(
    command: &str,
    output: &SuiteOutput,
    config: &RunConfig,
    elapsed_seconds: f64,
) -> anyhow::Result<PathBuf> {
    fs::create_dir_all(&config.output_dir)
        .with_context(|| format!("cannot create output directory {}", config.output_dir.display()))?;
    for table in &output.tables {
        table.write(&config.output_dir, config.format)?;
    }
    let mut cfg = serde_json::to_value(config)?;
    if let Value::Object(map) = &mut cfg {
        map.insert("params".into(), Value::Object(output.params.clone()));
    }
    let report = json!({
        "command": command,
        "config": cfg,
        "checks": output.checks,
        "timing": {
            "elapsed_seconds": elapsed_seconds,
            "workers": config.workers,
        },
    });
    let path = config.output_dir.join(format!("{}.json", command.replace(' ', "-")));
    write_json(&path, &report)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_constructors() {
        assert!(Check::close("a", 1.0, 1.05, 0.1).passed());
        assert!(!Check::close("a", 1.0, 1.2, 0.1).passed());
        assert!(!Check::close("nan", f64::NAN, 0.0, 1.0).passed());
        assert!(Check::exact("b", "x", "x").passed());
        assert_eq!(Check::exact("b", 1, 2).prefixed("suite").name, "suite.b");
    }

    #[test]
    fn csv_header_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let mut t = Table::new("moments", &["t", "norm", "mean", "variance"]);
        t.push(vec![json!(0.0), json!(1.0), json!(0.0), json!(0.5)]);
        let path = t.write(dir.path(), Format::Csv).unwrap();
        let text = fs::read_to_string(path).unwrap();
        assert_eq!(text.lines().next().unwrap(), "t,norm,mean,variance");
        assert_eq!(text.lines().nth(1).unwrap(), "0.0,1.0,0.0,0.5");
    }
}
