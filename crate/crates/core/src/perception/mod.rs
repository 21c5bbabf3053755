//! Perception-side processing: color-feature extraction for workpiece
//! segmentation, recognition gating, temporal pose smoothing, and the
//! repeatability metrics used to compare raw and filtered estimates.

pub mod classify;
pub mod image;
pub mod metrics;
pub mod smoothing;
pub mod stream;

pub use classify::{reject, Classification, DEFAULT_ACCEPT_THRESHOLD};
pub use image::{enhance, vanilla_grayscale, EnhancementParams, GrayImage, RgbImage};
pub use metrics::{precision_metrics, PrecisionMetrics};
pub use smoothing::{SmoothedTrack, DEFAULT_MAX_HOLD, DEFAULT_SMOOTHING};
pub use stream::{filter_stream, synth_stream, EstimateStream, StreamSample, SynthParams};
