//! `run`: execute one or more servo scenarios and print the outcome table.
//!
//! Exit code 0 only when every scenario aligned; a timeout in any row
//! yields 2 and a divergence aborts with 3.

use super::{check_format, emit, write_output};
use crate::errors::{CliResult, EXIT_NOT_ALIGNED, EXIT_OK};
use crate::report::{render_table, RunRow};
use crate::scenario::load_scenario;
use servobench_core::plant::trajectory_csv;
use std::io::Write;
use std::path::PathBuf;

#[derive(Debug, clap::Args)]
pub struct RunArgs {
    /// Scenario config; repeat the flag to build a multi-row report.
    #[arg(long = "config", required = true)]
    pub configs: Vec<PathBuf>,
    /// Directory for per-scenario <stem>_trajectory.csv files.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    pub format: String,
}

pub fn cmd_run(args: &RunArgs, out: &mut dyn Write) -> CliResult<i32> {
    check_format(&args.format)?;
    let mut rows = Vec::new();
    let mut all_aligned = true;
    for path in &args.configs {
        let scenario = load_scenario(path)?;
        let result = scenario.run()?;
        if let Some(dir) = &args.out {
            write_output(
                dir,
                &format!("{}_trajectory.csv", scenario.stem),
                trajectory_csv(&result.trajectory).as_bytes(),
            )?;
        }
        all_aligned &= result.aligned;
        rows.push(RunRow::new(&scenario.label, &scenario.environment, &result));
    }
    emit(out, &render_table(&rows))?;
    Ok(if all_aligned { EXIT_OK } else { EXIT_NOT_ALIGNED })
}
