//! Comparison policies: an open-loop velocity replay and a decoupled
//! position-only PID. Both deliberately ignore parts of the feedback the
//! coupled controller uses; they exist to quantify what the closed design
//! buys under actuation nonlinearities.

use crate::controller::ControlPolicy;
use crate::error::{Error, Result};
use crate::kinematics::{Pose2, TrackingError, VelocityCmd};

/// Straight-line velocity schedule toward the initial error, cruising at a
/// fixed speed and ramping linearly to zero at the end.
///
/// The schedule's ideal displacement equals the initial position error
/// exactly, so on a clean plant it parks on target; any dead zone silently
/// swallows the ramp tail, which is precisely the failure mode this
/// baseline is meant to expose. The heading channel is not commanded at
/// all. With `ramp_time = 0` the plan degenerates to cruise-then-stop.
#[derive(Debug, Clone, Copy)]
pub struct OpenLoopPlan {
    vx: f64,
    vy: f64,
    cruise_end: f64,
    ramp_end: f64,
}

impl OpenLoopPlan {
    /// Plans a move canceling `initial_error` at `cruise_speed` m/s with a
    /// terminal ramp of at most `ramp_time` seconds (shortened for moves
    /// too small to fit it).
    pub fn toward(
        initial_error: &TrackingError,
        cruise_speed: f64,
        ramp_time: f64,
    ) -> Result<OpenLoopPlan> {
        if !cruise_speed.is_finite() || cruise_speed <= 0.0 {
            return Err(Error::invalid(format!(
                "cruise speed must be > 0, got {cruise_speed}"
            )));
        }
        if !ramp_time.is_finite() || ramp_time < 0.0 {
            return Err(Error::invalid(format!(
                "ramp time must be >= 0, got {ramp_time}"
            )));
        }
        let dist = initial_error.position_norm();
        if !dist.is_finite() {
            return Err(Error::NonFinite {
                context: "OpenLoopPlan::toward: initial error",
            });
        }
        if dist == 0.0 {
            return Ok(OpenLoopPlan {
                vx: 0.0,
                vy: 0.0,
                cruise_end: 0.0,
                ramp_end: 0.0,
            });
        }
        // Ramp displacement is v*ramp/2; keep total displacement == dist.
        let ramp = ramp_time.min(2.0 * dist / cruise_speed);
        let cruise_dur = dist / cruise_speed - ramp / 2.0;
        Ok(OpenLoopPlan {
            vx: -cruise_speed * initial_error.x / dist,
            vy: -cruise_speed * initial_error.y / dist,
            cruise_end: cruise_dur,
            ramp_end: cruise_dur + ramp,
        })
    }

    /// Scheduled command at time `t >= 0`.
    pub fn command_at(&self, t: f64) -> VelocityCmd {
        if t < self.cruise_end {
            VelocityCmd::new(self.vx, self.vy, 0.0)
        } else if t < self.ramp_end {
            let scale = (self.ramp_end - t) / (self.ramp_end - self.cruise_end);
            VelocityCmd::new(self.vx * scale, self.vy * scale, 0.0)
        } else {
            VelocityCmd::ZERO
        }
    }

    pub fn duration(&self) -> f64 {
        self.ramp_end
    }
}

impl ControlPolicy for OpenLoopPlan {
    fn command(
        &mut self,
        _pose: &Pose2,
        _error: &TrackingError,
        t: f64,
        _dt: f64,
    ) -> Result<VelocityCmd> {
        Ok(self.command_at(t))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PidGains {
    pub kp: f64,
    pub ki: f64,
    pub kd: f64,
}

/// Independent PID loops on the two position errors; the heading error is
/// left uncontrolled (`omega = 0`), so any rotational coupling goes
/// uncompensated. Integral channels use the same gating and clamping as
/// the coupled controller.
#[derive(Debug, Clone)]
pub struct DecoupledPid {
    gains: PidGains,
    separation_threshold: f64,
    integral_clamp: f64,
    integrals: [f64; 2],
    prev: Option<[f64; 2]>,
}

impl DecoupledPid {
    pub fn new(gains: PidGains, separation_threshold: f64) -> Result<DecoupledPid> {
        if !gains.kp.is_finite() || gains.kp <= 0.0 {
            return Err(Error::invalid(format!("kp must be > 0, got {}", gains.kp)));
        }
        for (name, v) in [("ki", gains.ki), ("kd", gains.kd)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::invalid(format!("{name} must be >= 0, got {v}")));
            }
        }
        if separation_threshold.is_nan() || separation_threshold <= 0.0 {
            return Err(Error::invalid(format!(
                "separation threshold must be > 0, got {separation_threshold}"
            )));
        }
        Ok(DecoupledPid {
            gains,
            separation_threshold,
            integral_clamp: f64::INFINITY,
            integrals: [0.0; 2],
            prev: None,
        })
    }

    pub fn with_integral_clamp(mut self, clamp: f64) -> Result<DecoupledPid> {
        if clamp.is_nan() || clamp <= 0.0 {
            return Err(Error::invalid(format!(
                "integral clamp must be > 0, got {clamp}"
            )));
        }
        self.integral_clamp = clamp;
        Ok(self)
    }
}

impl ControlPolicy for DecoupledPid {
    fn command(
        &mut self,
        _pose: &Pose2,
        error: &TrackingError,
        _t: f64,
        dt: f64,
    ) -> Result<VelocityCmd> {
        if !dt.is_finite() || dt <= 0.0 {
            return Err(Error::invalid(format!("tick dt must be > 0, got {dt}")));
        }
        let e = [error.x, error.y];
        let mut u = [0.0; 2];
        for i in 0..2 {
            if self.gains.ki > 0.0 && e[i].abs() < self.separation_threshold {
                self.integrals[i] += e[i] * dt;
            }
            self.integrals[i] = self.integrals[i].clamp(-self.integral_clamp, self.integral_clamp);
            let deriv = match self.prev {
                Some(prev) => (e[i] - prev[i]) / dt,
                None => 0.0,
            };
            u[i] = -(self.gains.kp * e[i]
                + self.gains.ki * self.integrals[i]
                + self.gains.kd * deriv);
        }
        self.prev = Some(e);
        Ok(VelocityCmd::new(u[0], u[1], 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn err(x: f64, y: f64, theta: f64) -> TrackingError {
        TrackingError { x, y, theta }
    }

    #[test]
    fn plan_with_no_ramp_is_cruise_then_stop() {
        // 0.3 m at 0.15 m/s: two seconds flat out, then silence.
        let plan = OpenLoopPlan::toward(&err(0.3, 0.0, 0.0), 0.15, 0.0).unwrap();
        assert_eq!(plan.duration(), 2.0);
        let c = plan.command_at(1.0);
        assert_relative_eq!(c.vx, -0.15, max_relative = 1e-15);
        assert_eq!(c.vy, 0.0);
        assert_eq!(c.omega, 0.0);
        assert_eq!(plan.command_at(2.0), VelocityCmd::ZERO);
        assert_eq!(plan.command_at(5.0), VelocityCmd::ZERO);
    }

    #[test]
    fn trapezoid_keeps_total_displacement() {
        let plan = OpenLoopPlan::toward(&err(0.3, 0.0, 0.0), 0.15, 2.0).unwrap();
        // cruise 1 s, ramp 2 s: 0.15 + 0.15*2/2 = 0.3 m.
        assert_relative_eq!(plan.cruise_end, 1.0, max_relative = 1e-12);
        assert_relative_eq!(plan.ramp_end, 3.0, max_relative = 1e-12);
        assert_relative_eq!(plan.command_at(2.0).vx, -0.075, max_relative = 1e-12);
        // Tail speeds fall below any practical dead zone before stopping.
        assert!(plan.command_at(2.9).vx.abs() < 0.01);
    }

    #[test]
    fn short_moves_shrink_the_ramp() {
        let plan = OpenLoopPlan::toward(&err(0.01, 0.0, 0.0), 0.15, 2.0).unwrap();
        // Pure triangle: ramp = 2*dist/v = 0.1333 s, no cruise phase.
        assert_relative_eq!(plan.cruise_end, 0.0, epsilon = 1e-12);
        assert_relative_eq!(plan.ramp_end, 2.0 / 15.0, max_relative = 1e-12);
    }

    #[test]
    fn plan_direction_opposes_the_error() {
        let plan = OpenLoopPlan::toward(&err(-0.3, 0.4, 0.0), 0.1, 0.0).unwrap();
        let c = plan.command_at(0.0);
        // Unit direction (0.6, -0.8) times the cruise speed.
        assert_relative_eq!(c.vx, 0.06, max_relative = 1e-12);
        assert_relative_eq!(c.vy, -0.08, max_relative = 1e-12);
        assert_relative_eq!(plan.duration(), 5.0, max_relative = 1e-12);
    }

    #[test]
    fn zero_error_plans_nothing() {
        let plan = OpenLoopPlan::toward(&err(0.0, 0.0, 0.5), 0.1, 1.0).unwrap();
        assert_eq!(plan.duration(), 0.0);
        assert_eq!(plan.command_at(0.0), VelocityCmd::ZERO);
    }

    #[test]
    fn plan_ignores_feedback() {
        let mut plan = OpenLoopPlan::toward(&err(0.3, 0.0, 0.0), 0.15, 0.0).unwrap();
        let wild = err(99.0, -99.0, 3.0);
        let c = plan
            .command(&Pose2::new(5.0, 5.0, 1.0), &wild, 1.0, 0.01)
            .unwrap();
        assert_eq!(c, plan.command_at(1.0));
    }

    #[test]
    fn pid_first_tick_is_proportional() {
        let gains = PidGains {
            kp: 4.0,
            ki: 2.0,
            kd: 0.0,
        };
        let mut pid = DecoupledPid::new(gains, 0.1).unwrap();
        let c = pid
            .command(&Pose2::new(0.5, 0.3, 0.4), &err(0.5, 0.3, 0.4), 0.0, 0.01)
            .unwrap();
        assert_relative_eq!(c.vx, -2.0, max_relative = 1e-15);
        assert_relative_eq!(c.vy, -1.2, max_relative = 1e-15);
        // Heading is never commanded.
        assert_eq!(c.omega, 0.0);
    }

    #[test]
    fn pid_derivative_uses_backward_difference() {
        let gains = PidGains {
            kp: 1.0,
            ki: 0.0,
            kd: 0.5,
        };
        let mut pid = DecoupledPid::new(gains, 0.1).unwrap();
        let pose = Pose2::ZERO;
        let c1 = pid.command(&pose, &err(0.5, 0.0, 0.0), 0.0, 0.1).unwrap();
        assert_relative_eq!(c1.vx, -0.5, max_relative = 1e-15);
        let c2 = pid.command(&pose, &err(0.4, 0.0, 0.0), 0.1, 0.1).unwrap();
        // -(0.4 + 0.5 * (0.4 - 0.5)/0.1)
        assert_relative_eq!(c2.vx, 0.1, max_relative = 1e-12);
    }

    #[test]
    fn pid_integral_gate_and_clamp() {
        let gains = PidGains {
            kp: 1.0,
            ki: 1.0,
            kd: 0.0,
        };
        let mut pid = DecoupledPid::new(gains, 0.1)
            .unwrap()
            .with_integral_clamp(0.02)
            .unwrap();
        let pose = Pose2::ZERO;
        // Outside the gate: pure P.
        let c = pid.command(&pose, &err(0.5, 0.0, 0.0), 0.0, 0.1).unwrap();
        assert_relative_eq!(c.vx, -0.5, max_relative = 1e-15);
        // Inside: integral accumulates until the clamp stops it.
        for i in 0..10 {
            let t = 0.1 * (i + 1) as f64;
            pid.command(&pose, &err(0.05, 0.0, 0.0), t, 0.1).unwrap();
        }
        assert_eq!(pid.integrals[0], 0.02);
    }

    #[test]
    fn parameter_validation() {
        assert!(OpenLoopPlan::toward(&err(0.1, 0.0, 0.0), 0.0, 0.0).is_err());
        assert!(OpenLoopPlan::toward(&err(0.1, 0.0, 0.0), 0.1, -1.0).is_err());
        let gains = PidGains {
            kp: 0.0,
            ki: 0.0,
            kd: 0.0,
        };
        assert!(DecoupledPid::new(gains, 0.1).is_err());
        let gains = PidGains {
            kp: 1.0,
            ki: -0.1,
            kd: 0.0,
        };
        assert!(DecoupledPid::new(gains, 0.1).is_err());
    }
}
