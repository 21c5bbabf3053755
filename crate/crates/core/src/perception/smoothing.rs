//! First-order temporal smoothing of pose estimates.
//!
//! Each accepted frame blends into the running estimate as
//! `p <- a * p + (1 - a) * p_obs`; the heading channel blends along the
//! shortest arc so estimates straddling the branch cut do not fly through
//! zero. Frames with no accepted detection hold the previous estimate, up
//! to a bounded number of consecutive misses; beyond that the track is
//! invalidated and must be re-seeded by the caller.

use crate::error::{Error, Result};
use crate::kinematics::{angle_diff, normalize_angle, Pose2};

/// Fraction of the previous estimate kept per frame.
pub const DEFAULT_SMOOTHING: f64 = 0.8;

/// Consecutive misses tolerated before the track goes stale.
pub const DEFAULT_MAX_HOLD: u32 = 15;

#[derive(Debug, Clone)]
pub struct SmoothedTrack {
    a: f64,
    max_hold: u32,
    estimate: Pose2,
    missed: u32,
    stale: bool,
}

impl SmoothedTrack {
    /// Seeds a track at its first accepted observation. `a` must lie in
    /// `[0, 1]`: `0` passes observations through, `1` freezes the seed.
    pub fn new(a: f64, max_hold: u32, initial: Pose2) -> Result<SmoothedTrack> {
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::invalid(format!(
                "smoothing factor must be in [0, 1], got {a}"
            )));
        }
        if !initial.is_finite() {
            return Err(Error::NonFinite {
                context: "SmoothedTrack::new: initial pose",
            });
        }
        Ok(SmoothedTrack {
            a,
            max_hold,
            estimate: initial,
            missed: 0,
            stale: false,
        })
    }

    pub fn estimate(&self) -> &Pose2 {
        &self.estimate
    }

    pub fn missed(&self) -> u32 {
        self.missed
    }

    pub fn is_stale(&self) -> bool {
        self.stale
    }

    /// Feeds one frame. `Some` blends the observation in and resets the
    /// miss counter; `None` holds the estimate. Exceeding `max_hold`
    /// consecutive misses invalidates the track, and every update after
    /// that (including the offending one) fails with
    /// [`Error::StaleTrack`].
    pub fn update(&mut self, observation: Option<&Pose2>) -> Result<Pose2> {
        if self.stale {
            return Err(Error::StaleTrack {
                missed: self.missed,
                max_hold: self.max_hold,
            });
        }
        match observation {
            Some(obs) => {
                if !obs.is_finite() {
                    return Err(Error::NonFinite {
                        context: "SmoothedTrack::update: observation",
                    });
                }
                self.missed = 0;
                self.estimate = Pose2 {
                    x: self.a * self.estimate.x + (1.0 - self.a) * obs.x,
                    y: self.a * self.estimate.y + (1.0 - self.a) * obs.y,
                    theta: normalize_angle(
                        self.estimate.theta
                            + (1.0 - self.a) * angle_diff(obs.theta, self.estimate.theta),
                    ),
                };
                Ok(self.estimate)
            }
            None => {
                self.missed += 1;
                if self.missed > self.max_hold {
                    self.stale = true;
                    return Err(Error::StaleTrack {
                        missed: self.missed,
                        max_hold: self.max_hold,
                    });
                }
                Ok(self.estimate)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn pose(x: f64, y: f64, theta: f64) -> Pose2 {
        Pose2::new(x, y, theta)
    }

    #[test]
    fn blend_contracts_toward_the_observation() {
        let mut track = SmoothedTrack::new(0.8, 15, pose(1.0, -1.0, 0.0)).unwrap();
        let obs = pose(2.0, 1.0, 0.0);
        let mut prev = *track.estimate();
        for _ in 0..40 {
            let est = track.update(Some(&obs)).unwrap();
            // Distance to the observation shrinks by exactly a per frame.
            let before = ((prev.x - obs.x).powi(2) + (prev.y - obs.y).powi(2)).sqrt();
            let after = ((est.x - obs.x).powi(2) + (est.y - obs.y).powi(2)).sqrt();
            assert_relative_eq!(after, 0.8 * before, max_relative = 1e-12);
            prev = est;
        }
        assert!((track.estimate().x - 2.0).abs() < 2e-4);
    }

    #[test]
    fn degenerate_factors_are_bit_exact() {
        let obs = pose(0.3, 0.7, 1.1);
        let mut pass = SmoothedTrack::new(0.0, 15, pose(9.0, 9.0, -2.0)).unwrap();
        let est = pass.update(Some(&obs)).unwrap();
        assert_eq!((est.x, est.y), (obs.x, obs.y));

        let mut frozen = SmoothedTrack::new(1.0, 15, pose(9.0, 9.0, -2.0)).unwrap();
        let est = frozen.update(Some(&obs)).unwrap();
        assert_eq!((est.x, est.y, est.theta), (9.0, 9.0, -2.0));
    }

    #[test]
    fn heading_blends_across_the_branch_cut() {
        // Previous estimate at 3.0 rad, observation at -3.0 rad: the short
        // way round is +0.283 rad, so the blend moves past +pi rather than
        // swinging through zero.
        let mut track = SmoothedTrack::new(0.8, 15, pose(0.0, 0.0, 3.0)).unwrap();
        let est = track.update(Some(&pose(0.0, 0.0, -3.0))).unwrap();
        let expected = 3.0 + 0.2 * (2.0 * PI - 6.0);
        assert_relative_eq!(est.theta, expected, max_relative = 1e-12);
        assert!(est.theta > 3.0 && est.theta <= PI);
    }

    #[test]
    fn misses_hold_the_estimate() {
        let mut track = SmoothedTrack::new(0.8, 3, pose(1.0, 2.0, 0.5)).unwrap();
        for i in 1..=3 {
            let est = track.update(None).unwrap();
            assert_eq!(est, pose(1.0, 2.0, 0.5));
            assert_eq!(track.missed(), i);
        }
        // A detection within the hold window resets the counter.
        track.update(Some(&pose(1.0, 2.0, 0.5))).unwrap();
        assert_eq!(track.missed(), 0);
    }

    #[test]
    fn too_many_misses_invalidate_the_track() {
        let mut track = SmoothedTrack::new(0.8, 2, pose(0.0, 0.0, 0.0)).unwrap();
        track.update(None).unwrap();
        track.update(None).unwrap();
        let err = track.update(None).unwrap_err();
        assert!(matches!(
            err,
            Error::StaleTrack {
                missed: 3,
                max_hold: 2
            }
        ));
        assert!(track.is_stale());
        // Stale is terminal: even a fresh observation is refused.
        assert!(track.update(Some(&pose(0.0, 0.0, 0.0))).is_err());
    }

    #[test]
    fn factor_domain() {
        assert!(SmoothedTrack::new(-0.1, 15, Pose2::ZERO).is_err());
        assert!(SmoothedTrack::new(1.1, 15, Pose2::ZERO).is_err());
        assert!(SmoothedTrack::new(f64::NAN, 15, Pose2::ZERO).is_err());
        assert!(SmoothedTrack::new(0.8, 0, Pose2::ZERO).is_ok());
    }
}
