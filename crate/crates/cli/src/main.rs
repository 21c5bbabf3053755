use clap::Parser;
use servobench::commands::{
    cmd_analytic, cmd_enhance, cmd_fig6, cmd_filter, cmd_run, AnalyticArgs, EnhanceArgs, Fig6Args,
    FilterArgs, RunArgs,
};
use servobench::errors::{EXIT_OK, EXIT_USAGE};
use std::io;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "servobench",
    version,
    about = "Deterministic servo-alignment benchmark: analytic error curves, \
             plant simulations, parameter sweeps, and pose-stream filtering"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Subcommand)]
enum Command {
    /// Print the closed-form error curve and steady-state prediction.
    Analytic(AnalyticArgs),
    /// Run servo scenarios and print the outcome table.
    Run(RunArgs),
    /// Sweep design functions over delay/dead-zone grids.
    Fig6(Fig6Args),
    /// Smooth a pose estimate stream and report precision metrics.
    Filter(FilterArgs),
    /// Apply the red-emphasis feature map to a P6 image.
    Enhance(EnhanceArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version land here too; only real parse
            // errors take the usage exit code.
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let mut stdout = io::stdout().lock();
    let result = match &cli.command {
        Command::Analytic(args) => cmd_analytic(args, &mut stdout),
        Command::Run(args) => cmd_run(args, &mut stdout),
        Command::Fig6(args) => cmd_fig6(args, &mut stdout),
        Command::Filter(args) => cmd_filter(args, &mut stdout),
        Command::Enhance(args) => cmd_enhance(args, &mut stdout),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
