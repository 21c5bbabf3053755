//! Repeatability statistics over repeated pose measurements of one target.
//!
//! Positions use the pooled two-axis sample deviation; headings deviate
//! from their circular mean along the shortest arc, so clusters straddling
//! the angle cut are scored correctly.

use crate::error::{Error, Result};
use crate::kinematics::{angle_diff, Pose2};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionMetrics {
    /// `sqrt( sum(dx^2 + dy^2) / (n - 1) )`, meters.
    pub s_pos: f64,
    /// `sqrt( sum(dtheta^2) / (n - 1) )` about the circular mean, radians.
    pub s_att: f64,
}

/// Computes both spreads; needs at least two measurements.
pub fn precision_metrics(poses: &[Pose2]) -> Result<PrecisionMetrics> {
    if poses.len() < 2 {
        return Err(Error::InsufficientData {
            required: 2,
            actual: poses.len(),
        });
    }
    for p in poses {
        if !p.is_finite() {
            return Err(Error::NonFinite {
                context: "precision_metrics: pose",
            });
        }
    }
    let n = poses.len() as f64;
    let mean_x = poses.iter().map(|p| p.x).sum::<f64>() / n;
    let mean_y = poses.iter().map(|p| p.y).sum::<f64>() / n;
    let pos_ss = poses
        .iter()
        .map(|p| (p.x - mean_x).powi(2) + (p.y - mean_y).powi(2))
        .sum::<f64>();

    let sin_sum = poses.iter().map(|p| p.theta.sin()).sum::<f64>();
    let cos_sum = poses.iter().map(|p| p.theta.cos()).sum::<f64>();
    if sin_sum.hypot(cos_sum) < n * 1e-12 {
        // Headings that cancel out have no usable mean direction.
        return Err(Error::invalid(
            "heading set has no defined circular mean".to_owned(),
        ));
    }
    let mean_theta = sin_sum.atan2(cos_sum);
    let att_ss = poses
        .iter()
        .map(|p| angle_diff(p.theta, mean_theta).powi(2))
        .sum::<f64>();

    Ok(PrecisionMetrics {
        s_pos: (pos_ss / (n - 1.0)).sqrt(),
        s_att: (att_ss / (n - 1.0)).sqrt(),
    })
}
