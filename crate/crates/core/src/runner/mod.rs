//! Seeded experiment runs that write one report row per check.

mod config;
mod report;
mod state_spec;
mod suites;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use rayon::prelude::*;

use crate::error::Result;

pub use config::{Format, RunConfig, Suite};
pub use report::{ReportWriter, Row, COLUMNS, RNG_ID};
pub use state_spec::{describe_state, Factor, StateSpec};
pub use suites::{jobs, run_job, trial_rng, Job, THERMAL_FISHER_TOL};

/// Environment variable naming the directory of reports without an explicit path.
pub const OUT_DIR_VAR: &str = "QEPI_OUT_DIR";

/// Row counts of a finished run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunSummary {
    pub rows: usize,
    pub normative_failures: usize,
}

impl RunSummary {
    pub fn all_passed(&self) -> bool {
        self.normative_failures == 0
    }
}

/// Report path: the configured output, else `$QEPI_OUT_DIR/{suite}-seed{seed}.{ext}`.
pub fn output_path(config: &RunConfig) -> PathBuf {
    config.output.clone().unwrap_or_else(|| {
        let dir = std::env::var_os(OUT_DIR_VAR).map_or_else(|| PathBuf::from("."), PathBuf::from);
        dir.join(format!(
            "{}-seed{}.{}",
            config.suite,
            config.seed,
            config.format.extension()
        ))
    })
}

/// Runs every job of the configured suite and streams rows into `out` in job order.
///
/// Jobs run in parallel batches. When a job fails, the rows of earlier jobs are flushed before
/// the error is returned.
pub fn run_to_writer<W: Write>(config: &RunConfig, out: W) -> Result<RunSummary> {
    config.validate()?;
    let mut writer = ReportWriter::new(out, config)?;
    let mut summary = RunSummary::default();
    let batch = 4 * rayon::current_num_threads();
    for suite in config.suite.expand() {
        let all = jobs(suite, config);
        for chunk in all.chunks(batch) {
            let results: Vec<_> = chunk
                .par_iter()
                .map(|&job| run_job(suite, config, job).map(|r| (job, r)))
                .collect();
            for result in results {
                let (job, reports) = match result {
                    Ok(done) => done,
                    Err(e) => {
                        writer.flush()?;
                        return Err(e);
                    }
                };
                for report in reports {
                    let row = Row {
                        suite,
                        seed: config.seed,
                        trial: job.trial(),
                        report,
                    };
                    summary.rows += 1;
                    summary.normative_failures += row.is_normative_failure() as usize;
                    writer.write(&row)?;
                }
            }
            writer.flush()?;
        }
    }
    Ok(summary)
}

/// Validates the configuration, then writes the report to [`output_path`].
pub fn run_suite(config: &RunConfig) -> Result<(PathBuf, RunSummary)> {
    config.validate()?;
    let path = output_path(config);
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    let summary = run_to_writer(config, BufWriter::new(File::create(&path)?))?;
    Ok((path, summary))
}
