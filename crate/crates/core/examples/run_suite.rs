//! Runs a small Fisher-information ensemble and streams the CSV report to stdout.

use qepi::runner::{run_to_writer, RunConfig};

fn main() -> qepi::Result<()> {
    let config = RunConfig::parse(
        "suite = fisher\n\
         seed = 5\n\
         trials = 3\n\
         tolerance.stam = 1e-5\n",
    )?;
    let summary = run_to_writer(&config, std::io::stdout().lock())?;
    eprintln!("{} rows, {} failures", summary.rows, summary.normative_failures);
    Ok(())
}
