//! `fig6`: sweep design functions over transport-delay and dead-zone grids,
//! writing one decay curve per cell plus a residual summary.
//!
//! Output layout under --out:
//!   curve_<df>_tau<t>_m<m>.csv   per-cell |e_x|(t) series
//!   summary.csv                  measured vs predicted residuals
//! The stdout table adds a PASS/FAIL verdict per cell.

use super::{check_format, emit, write_output};
use crate::errors::{CliError, CliResult, EXIT_OK};
use crate::scenario::load_scenario;
use servobench_core::sweep::{cell_csv, df_tag, summary_csv, sweep_error_curves, SweepCell, SweepGrid};
use std::io::Write;
use std::path::PathBuf;

/// Sub-centimeter requirement with 2x margin: a cell passes only when the
/// measured residual stays below 0.005 m.
pub const PASS_RESIDUAL: f64 = 0.005;

#[derive(Debug, clap::Args)]
pub struct Fig6Args {
    /// Scenario config with a [sweep] section; defaults to the full grid.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Directory receiving the CSV bundle.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value = "csv")]
    pub format: String,
}

pub(crate) fn parse_threads(raw: Option<&str>) -> CliResult<Option<usize>> {
    let Some(v) = raw else { return Ok(None) };
    let n: usize = v.trim().parse().map_err(|_| {
        CliError::usage(format!(
            "SERVOBENCH_THREADS must be a positive integer, got {v:?}"
        ))
    })?;
    if n == 0 {
        return Err(CliError::usage(
            "SERVOBENCH_THREADS must be a positive integer, got \"0\"".to_owned(),
        ));
    }
    Ok(Some(n))
}

fn cell_file_name(cell: &SweepCell) -> String {
    format!(
        "curve_{}_tau{}_m{}.csv",
        df_tag(&cell.df),
        cell.tau,
        cell.dead_zone
    )
}

fn verdict_table(cells: &[SweepCell]) -> String {
    let mut out = String::from("df     tau    dead_zone  measured  predicted  verdict\n");
    let mut passed = 0usize;
    for c in cells {
        let pass = c.measured_residual < PASS_RESIDUAL;
        passed += pass as usize;
        out.push_str(&format!(
            "{:<5}  {:<5.3}  {:<9.3}  {:<8.6}  {:<9.6}  {}\n",
            df_tag(&c.df),
            c.tau,
            c.dead_zone,
            c.measured_residual,
            c.predicted_residual,
            if pass { "PASS" } else { "FAIL" },
        ));
    }
    out.push_str(&format!("passed {passed}/{} cells\n", cells.len()));
    out
}

pub fn cmd_fig6(args: &Fig6Args, out: &mut dyn Write) -> CliResult<i32> {
    check_format(&args.format)?;
    let grid = match &args.config {
        Some(path) => {
            let scenario = load_scenario(path)?;
            scenario.sweep.ok_or_else(|| {
                CliError::usage(format!("{}: missing [sweep] section", path.display()))
            })?
        }
        None => SweepGrid::default(),
    };
    let threads = match std::env::var("SERVOBENCH_THREADS") {
        Ok(v) => parse_threads(Some(&v))?,
        Err(std::env::VarError::NotPresent) => None,
        Err(e) => return Err(CliError::usage(format!("SERVOBENCH_THREADS: {e}"))),
    };

    let cells = sweep_error_curves(&grid, threads)?;
    for cell in &cells {
        write_output(&args.out, &cell_file_name(cell), cell_csv(cell).as_bytes())?;
    }
    write_output(&args.out, "summary.csv", summary_csv(&cells).as_bytes())?;
    emit(out, &verdict_table(&cells))?;
    Ok(EXIT_OK)
}
