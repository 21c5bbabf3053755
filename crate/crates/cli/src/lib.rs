//! Command-line front end for the servo benchmark library: scenario config
//! parsing, run reports, sweep orchestration, and the perception utilities.

pub mod commands;
pub mod errors;
pub mod report;
pub mod scenario;
