use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use serde_json::json;

use crate::check::CheckReport;
use crate::error::Result;

use super::config::{Format, RunConfig, Suite};

/// Identifier of the random generator, embedded in every report header.
pub const RNG_ID: &str = "ChaCha20 (rand_chacha), seed_from_u64(seed), stream=(suite_id<<32)|trial";

/// Column order of CSV reports.
pub const COLUMNS: [&str; 8] = [
    "suite", "check", "seed", "trial", "margin", "tolerance", "passed", "details",
];

/// One report row: a check result and where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub suite: Suite,
    pub seed: u64,
    /// 0 for fixtures, `1..=trials` for random draws.
    pub trial: usize,
    pub report: CheckReport,
}

#[derive(Serialize)]
struct Details<'a> {
    normative: bool,
    inputs: &'a BTreeMap<String, String>,
    diagnostics: &'a BTreeMap<String, f64>,
}

impl Row {
    fn details(&self) -> Details<'_> {
        Details {
            normative: self.report.normative,
            inputs: &self.report.inputs,
            diagnostics: &self.report.diagnostics,
        }
    }

    /// True when the row counts against the exit status.
    pub fn is_normative_failure(&self) -> bool {
        self.report.normative && !self.report.passed
    }
}

fn list(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

fn header_fields(config: &RunConfig) -> Vec<(&'static str, String)> {
    let tolerances = config
        .tolerances
        .iter()
        .map(|(k, v)| format!("{k}:{v:e}"))
        .collect::<Vec<_>>()
        .join(",");
    vec![
        ("qepi", env!("CARGO_PKG_VERSION").to_string()),
        ("suite", config.suite.to_string()),
        ("seed", config.seed.to_string()),
        ("trials", config.trials.to_string()),
        ("cutoff", config.cutoff.to_string()),
        ("lambda_grid", list(&config.lambda_grid)),
        ("t_grid", list(&config.t_grid)),
        ("tolerances", tolerances),
        ("rng", RNG_ID.to_string()),
    ]
}

enum Sink<W: Write> {
    Csv(csv::Writer<W>),
    Jsonl(W),
}

/// Streams rows to CSV or JSON lines. The header depends only on the configuration, so equal
/// configurations give equal bytes.
pub struct ReportWriter<W: Write> {
    sink: Sink<W>,
}

impl<W: Write> ReportWriter<W> {
    pub fn new(mut out: W, config: &RunConfig) -> Result<Self> {
        let fields = header_fields(config);
        let sink = match config.format {
            Format::Csv => {
                let line: Vec<String> = fields.iter().map(|(k, v)| format!("{k}={v}")).collect();
                writeln!(out, "# {}", line.join(" "))?;
                let mut writer = csv::Writer::from_writer(out);
                writer.write_record(COLUMNS)?;
                Sink::Csv(writer)
            }
            Format::Jsonl => {
                let header: serde_json::Map<String, serde_json::Value> =
                    fields.into_iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
                serde_json::to_writer(&mut out, &header)?;
                out.write_all(b"\n")?;
                Sink::Jsonl(out)
            }
        };
        Ok(ReportWriter { sink })
    }

    pub fn write(&mut self, row: &Row) -> Result<()> {
        let r = &row.report;
        match &mut self.sink {
            Sink::Csv(writer) => {
                writer.write_record([
                    row.suite.name(),
                    &r.name,
                    &row.seed.to_string(),
                    &row.trial.to_string(),
                    &format!("{:e}", r.margin),
                    &format!("{:e}", r.tolerance),
                    if r.passed { "true" } else { "false" },
                    &serde_json::to_string(&row.details())?,
                ])?;
            }
            Sink::Jsonl(out) => {
                let value = json!({
                    "suite": row.suite.name(),
                    "check": r.name,
                    "seed": row.seed,
                    "trial": row.trial,
                    "margin": r.margin,
                    "tolerance": r.tolerance,
                    "passed": r.passed,
                    "details": row.details(),
                });
                serde_json::to_writer(&mut *out, &value)?;
                out.write_all(b"\n")?;
            }
        }
        Ok(())
    }

    pub fn flush(&mut self) -> Result<()> {
        match &mut self.sink {
            Sink::Csv(writer) => writer.flush()?,
            Sink::Jsonl(out) => out.flush()?,
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row() -> Row {
        Row {
            suite: Suite::Fisher,
            seed: 3,
            trial: 1,
            report: CheckReport::new("stam", -2e-7, 1e-6)
                .input("x", "thermal(1)")
                .diag("fisher_out", 1.5),
        }
    }

    #[test]
    fn csv_layout() {
        let config = RunConfig {
            suite: Suite::Fisher,
            seed: 3,
            ..RunConfig::default()
        };
        let mut buf = Vec::new();
        let mut w = ReportWriter::new(&mut buf, &config).unwrap();
        w.write(&row()).unwrap();
        w.flush().unwrap();
        drop(w);
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# qepi=") && lines[0].contains("suite=fisher seed=3"));
        assert!(lines[0].contains("ChaCha20"));
        assert_eq!(lines[1], COLUMNS.join(","));
        assert!(lines[2].starts_with("fisher,stam,3,1,-2e-7,1e-6,true,"), "{}", lines[2]);
        assert!(lines[2].contains(r#"""normative"":true"#));
    }

    #[test]
    fn jsonl_layout() {
        let config = RunConfig {
            format: Format::Jsonl,
            ..RunConfig::default()
        };
        let mut buf = Vec::new();
        let mut w = ReportWriter::new(&mut buf, &config).unwrap();
        w.write(&row()).unwrap();
        drop(w);
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(lines[0]["suite"], "all");
        assert_eq!(lines[1]["check"], "stam");
        assert_eq!(lines[1]["details"]["inputs"]["x"], "thermal(1)");
        assert_eq!(lines[1]["details"]["diagnostics"]["fisher_out"], 1.5);
    }
}
