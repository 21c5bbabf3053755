//! `filter`: smooth a pose estimate stream and report scatter metrics
//! before and after. The stream is either synthesized (config/defaults plus
//! seed) or read from an existing CSV via --input.

use super::{check_format, emit, read_to_string, write_output};
use crate::errors::{CliError, CliResult, EXIT_OK};
use crate::scenario::{default_filter, load_scenario};
use servobench_core::csvfmt::sig9;
use servobench_core::perception::stream::{filter_stream, synth_stream, EstimateStream};
use servobench_core::perception::{precision_metrics, PrecisionMetrics};
use std::io::Write;
use std::path::PathBuf;

#[derive(Debug, clap::Args)]
pub struct FilterArgs {
    /// Scenario config with a [filter] section.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Existing estimate-stream CSV; replaces synthesis.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Directory for stream_raw.csv and stream_filtered.csv.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// RNG seed for synthesis; overrides the config seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = "csv")]
    pub format: String,
}

fn metric_lines(raw: &PrecisionMetrics, filtered: &PrecisionMetrics) -> String {
    format!(
        "s_pos_raw={}\ns_att_raw={}\ns_pos_filtered={}\ns_att_filtered={}\n",
        sig9(raw.s_pos),
        sig9(raw.s_att),
        sig9(filtered.s_pos),
        sig9(filtered.s_att),
    )
}

pub fn cmd_filter(args: &FilterArgs, out: &mut dyn Write) -> CliResult<i32> {
    check_format(&args.format)?;
    let (cfg_filter, cfg_seed) = match &args.config {
        Some(path) => {
            let scenario = load_scenario(path)?;
            (scenario.filter, scenario.seed)
        }
        None => (None, None),
    };
    let fcfg = cfg_filter.unwrap_or_else(default_filter);

    let raw = match &args.input {
        Some(path) => {
            let text = read_to_string(path)?;
            EstimateStream::from_csv(&text)
                .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?
        }
        None => {
            let seed = args.seed.or(cfg_seed).unwrap_or(0);
            synth_stream(&fcfg.synth, seed)?
        }
    };
    let filtered = filter_stream(&raw, fcfg.a, fcfg.max_hold)?;
    let metrics_raw = precision_metrics(&raw.detected_poses())?;
    let metrics_filtered = precision_metrics(&filtered.detected_poses())?;

    if let Some(dir) = &args.out {
        write_output(dir, "stream_raw.csv", raw.to_csv().as_bytes())?;
        write_output(dir, "stream_filtered.csv", filtered.to_csv().as_bytes())?;
    }
    emit(
        out,
        &format!(
            "detections_raw={}\ndetections_filtered={}\n",
            raw.detection_count(),
            filtered.detection_count()
        ),
    )?;
    emit(out, &metric_lines(&metrics_raw, &metrics_filtered))?;
    Ok(EXIT_OK)
}
