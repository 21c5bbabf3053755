//! `enhance`: apply the red-emphasis feature map to a binary P6 pixmap and
//! write the result as a binary P5 graymap.

use super::{emit, read_bytes, write_output};
use crate::errors::{CliError, CliResult, EXIT_OK};
use servobench_core::perception::{enhance, EnhancementParams, RgbImage};
use std::io::Write;
use std::path::PathBuf;

#[derive(Debug, clap::Args)]
pub struct EnhanceArgs {
    /// Input image, binary portable pixmap (P6, maxval 255).
    #[arg(long)]
    pub input: PathBuf,
    /// Output directory for <stem>.pgm; defaults to the current directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Red-excess gain k.
    #[arg(long, default_value_t = 1.0)]
    pub gain: f64,
}

pub fn cmd_enhance(args: &EnhanceArgs, out: &mut dyn Write) -> CliResult<i32> {
    let bytes = read_bytes(&args.input)?;
    let img = RgbImage::from_p6(&bytes)
        .map_err(|e| CliError::usage(format!("{}: {e}", args.input.display())))?;
    let params = EnhancementParams::new(args.gain)?;
    let gray = enhance(&img, &params);

    let stem = args
        .input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "enhanced".to_owned());
    let dir = args.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let path = write_output(&dir, &format!("{stem}.pgm"), &gray.to_p5())?;
    emit(out, &format!("wrote {}\n", path.display()))?;
    Ok(EXIT_OK)
}
