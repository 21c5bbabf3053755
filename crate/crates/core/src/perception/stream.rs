//! Timestamped pose-estimate streams: seeded synthesis, CSV transport,
//! and offline smoothing with the same track logic the live system uses.

use crate::csvfmt::sig9;
use crate::error::{Error, Result};
use crate::kinematics::{normalize_angle, Pose2};
use crate::perception::smoothing::SmoothedTrack;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// One camera frame: a detection with its estimated pose, or a miss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreamSample {
    pub t: f64,
    pub pose: Option<Pose2>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EstimateStream {
    pub samples: Vec<StreamSample>,
}

impl EstimateStream {
    /// Poses of the frames that carried one.
    pub fn detected_poses(&self) -> Vec<Pose2> {
        self.samples.iter().filter_map(|s| s.pose).collect()
    }

    pub fn detection_count(&self) -> usize {
        self.samples.iter().filter(|s| s.pose.is_some()).count()
    }

    /// Serializes with header `t,x,y,theta,detected`; missed frames leave
    /// the pose columns empty and set `detected` to 0.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x,y,theta,detected\n");
        for s in &self.samples {
            match &s.pose {
                Some(p) => out.push_str(&format!(
                    "{},{},{},{},1\n",
                    sig9(s.t),
                    sig9(p.x),
                    sig9(p.y),
                    sig9(p.theta)
                )),
                None => out.push_str(&format!("{},,,,0\n", sig9(s.t))),
            }
        }
        out
    }

    /// Parses the format written by [`EstimateStream::to_csv`]. Errors
    /// carry 1-based line numbers (the header is line 1).
    pub fn from_csv(text: &str) -> Result<EstimateStream> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, "t,x,y,theta,detected")) => {}
            Some((_, other)) => {
                return Err(malformed(format!(
                    "line 1: expected header t,x,y,theta,detected, got {other:?}"
                )))
            }
            None => return Err(malformed("empty input".to_owned())),
        }
        let mut samples = Vec::new();
        for (idx, line) in lines {
            let row = idx + 1;
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 5 {
                return Err(malformed(format!(
                    "line {row}: expected 5 fields, got {}",
                    fields.len()
                )));
            }
            let t = parse_num(fields[0], row, "t")?;
            let pose = match fields[4] {
                "1" => Some(Pose2::new(
                    parse_num(fields[1], row, "x")?,
                    parse_num(fields[2], row, "y")?,
                    parse_num(fields[3], row, "theta")?,
                )),
                "0" => {
                    if fields[1..4].iter().any(|f| !f.is_empty()) {
                        return Err(malformed(format!(
                            "line {row}: undetected rows must leave pose fields empty"
                        )));
                    }
                    None
                }
                other => {
                    return Err(malformed(format!(
                        "line {row}: detected flag must be 0 or 1, got {other:?}"
                    )))
                }
            };
            samples.push(StreamSample { t, pose });
        }
        Ok(EstimateStream { samples })
    }
}

fn parse_num(field: &str, row: usize, name: &str) -> Result<f64> {
    let v: f64 = field
        .parse()
        .map_err(|_| malformed(format!("line {row}: {name} is not a number: {field:?}")))?;
    if !v.is_finite() {
        return Err(malformed(format!("line {row}: {name} must be finite")));
    }
    Ok(v)
}

fn malformed(reason: String) -> Error {
    Error::MalformedData {
        format: "estimate CSV",
        reason,
    }
}

/// Synthetic measurement model around a fixed true pose.
#[derive(Debug, Clone, Copy)]
pub struct SynthParams {
    pub true_pose: Pose2,
    /// Per-axis position noise, meters (standard deviation).
    pub sigma_pos: f64,
    /// Heading noise, radians (standard deviation).
    pub sigma_att: f64,
    /// Probability a frame carries no detection.
    pub dropout: f64,
    pub frames: usize,
    /// Frame spacing, seconds.
    pub frame_dt: f64,
}

impl SynthParams {
    pub fn validate(&self) -> Result<()> {
        if !self.true_pose.is_finite() {
            return Err(Error::NonFinite {
                context: "synth_stream: true pose",
            });
        }
        for (name, v) in [("sigma_pos", self.sigma_pos), ("sigma_att", self.sigma_att)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::invalid(format!("{name} must be >= 0, got {v}")));
            }
        }
        if !(0.0..=1.0).contains(&self.dropout) {
            return Err(Error::invalid(format!(
                "dropout must be in [0, 1], got {}",
                self.dropout
            )));
        }
        if self.frames == 0 {
            return Err(Error::invalid("frames must be >= 1".to_owned()));
        }
        if !self.frame_dt.is_finite() || self.frame_dt <= 0.0 {
            return Err(Error::invalid(format!(
                "frame_dt must be > 0, got {}",
                self.frame_dt
            )));
        }
        Ok(())
    }
}

/// Draws a noisy, gappy estimate stream. The same seed always produces the
/// same stream: per frame the dropout coin is tossed first, then (for kept
/// frames only) the x, y, theta noises in that order.
pub fn synth_stream(params: &SynthParams, seed: u64) -> Result<EstimateStream> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise_pos = Normal::new(0.0, params.sigma_pos)
        .map_err(|e| Error::invalid(format!("position noise: {e}")))?;
    let noise_att = Normal::new(0.0, params.sigma_att)
        .map_err(|e| Error::invalid(format!("attitude noise: {e}")))?;

    let mut samples = Vec::with_capacity(params.frames);
    for i in 0..params.frames {
        let t = i as f64 * params.frame_dt;
        let dropped = rng.random_bool(params.dropout);
        let pose = if dropped {
            None
        } else {
            let dx = noise_pos.sample(&mut rng);
            let dy = noise_pos.sample(&mut rng);
            let dth = noise_att.sample(&mut rng);
            Some(Pose2::new(
                params.true_pose.x + dx,
                params.true_pose.y + dy,
                normalize_angle(params.true_pose.theta + dth),
            ))
        };
        samples.push(StreamSample { t, pose });
    }
    Ok(EstimateStream { samples })
}

/// Runs the smoothing track over a stream.
///
/// The first detection seeds the track at the observed pose. From then on
/// every frame yields an estimate (blended on detections, held on misses)
/// until the hold budget runs out; the gap then stays empty until the next
/// detection seeds a fresh track.
pub fn filter_stream(stream: &EstimateStream, a: f64, max_hold: u32) -> Result<EstimateStream> {
    let mut track: Option<SmoothedTrack> = None;
    let mut samples = Vec::with_capacity(stream.samples.len());
    for s in &stream.samples {
        let estimate = match (&mut track, &s.pose) {
            (None, None) => None,
            (None, Some(obs)) => {
                track = Some(SmoothedTrack::new(a, max_hold, *obs)?);
                Some(*obs)
            }
            (Some(tr), obs) => match tr.update(obs.as_ref()) {
                Ok(est) => Some(est),
                Err(Error::StaleTrack { .. }) => {
                    track = None;
                    None
                }
                Err(other) => return Err(other),
            },
        };
        samples.push(StreamSample {
            t: s.t,
            pose: estimate,
        });
    }
    Ok(EstimateStream { samples })
}
