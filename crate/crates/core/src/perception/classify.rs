//! Recognition gating over the fixed workpiece class set.
//!
//! A score vector carries one template-match score per class. The best
//! class wins only if its score clears the acceptance threshold; anything
//! weaker is rejected outright, because servoing onto a misrecognized
//! workpiece costs far more than skipping a frame.

use crate::error::{Error, Result};

/// Number of workpiece classes the matcher is trained on.
pub const CLASS_COUNT: usize = 9;

/// Minimum winning score; below this the frame is discarded.
pub const DEFAULT_ACCEPT_THRESHOLD: f64 = 12.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Classification {
    Accepted { class: usize, score: f64 },
    Rejected { best_class: usize, best_score: f64 },
}

/// Applies the acceptance gate to one score vector.
///
/// Ties resolve to the lowest class index; the threshold itself is
/// accepting (`score >= threshold` passes).
pub fn reject(scores: &[f64; CLASS_COUNT], threshold: f64) -> Result<Classification> {
    if !threshold.is_finite() {
        return Err(Error::NonFinite {
            context: "reject: threshold",
        });
    }
    let mut best = 0usize;
    for (i, s) in scores.iter().enumerate() {
        if !s.is_finite() {
            return Err(Error::NonFinite {
                context: "reject: score",
            });
        }
        if *s > scores[best] {
            best = i;
        }
    }
    let best_score = scores[best];
    Ok(if best_score >= threshold {
        Classification::Accepted {
            class: best,
            score: best_score,
        }
    } else {
        Classification::Rejected {
            best_class: best,
            best_score,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strong_match_is_accepted() {
        let mut scores = [3.0; CLASS_COUNT];
        scores[4] = 15.5;
        assert_eq!(
            reject(&scores, DEFAULT_ACCEPT_THRESHOLD).unwrap(),
            Classification::Accepted {
                class: 4,
                score: 15.5
            }
        );
    }

    #[test]
    fn weak_frames_are_rejected() {
        let mut scores = [0.0; CLASS_COUNT];
        scores[2] = 11.9;
        assert_eq!(
            reject(&scores, DEFAULT_ACCEPT_THRESHOLD).unwrap(),
            Classification::Rejected {
                best_class: 2,
                best_score: 11.9
            }
        );
    }

    #[test]
    fn threshold_is_inclusive() {
        let mut scores = [0.0; CLASS_COUNT];
        scores[7] = 12.0;
        assert!(matches!(
            reject(&scores, 12.0).unwrap(),
            Classification::Accepted { class: 7, .. }
        ));
    }

    #[test]
    fn ties_pick_the_lowest_index() {
        let mut scores = [1.0; CLASS_COUNT];
        scores[3] = 20.0;
        scores[6] = 20.0;
        assert!(matches!(
            reject(&scores, 12.0).unwrap(),
            Classification::Accepted { class: 3, .. }
        ));
        // An all-equal vector below threshold rejects with class 0.
        let flat = [5.0; CLASS_COUNT];
        assert_eq!(
            reject(&flat, 12.0).unwrap(),
            Classification::Rejected {
                best_class: 0,
                best_score: 5.0
            }
        );
    }

    #[test]
    fn non_finite_input_is_an_error() {
        let mut scores = [0.0; CLASS_COUNT];
        scores[1] = f64::NAN;
        assert!(reject(&scores, 12.0).is_err());
        assert!(reject(&[0.0; CLASS_COUNT], f64::INFINITY).is_err());
    }
}
