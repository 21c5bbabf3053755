//! Subcommand implementations. Each takes its parsed arguments plus a
//! writer standing in for stdout and returns the process exit code.

pub mod analytic;
pub mod enhance;
pub mod fig6;
pub mod filter;
pub mod run;

pub use analytic::{cmd_analytic, AnalyticArgs};
pub use enhance::{cmd_enhance, EnhanceArgs};
pub use fig6::{cmd_fig6, Fig6Args};
pub use filter::{cmd_filter, FilterArgs};
pub use run::{cmd_run, RunArgs};

use crate::errors::{CliError, CliResult};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Writes one output file under `dir`, creating the directory if needed.
pub(crate) fn write_output(dir: &Path, name: &str, contents: &[u8]) -> CliResult<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| CliError::usage(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    Ok(path)
}

pub(crate) fn emit(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::usage(format!("stdout: {e}")))
}

/// CSV is the only interchange format; reject anything else up front.
pub(crate) fn check_format(format: &str) -> CliResult<()> {
    if format == "csv" {
        Ok(())
    } else {
        Err(CliError::usage(format!(
            "unsupported format {format:?}; only \"csv\" is available"
        )))
    }
}

pub(crate) fn read_to_string(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

pub(crate) fn read_bytes(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}
