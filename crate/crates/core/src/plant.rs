//! Fixed-step closed-loop execution against an imperfect actuator.
//!
//! The plant advances the relative pose with the exact one-step flow from
//! [`crate::kinematics`], at `plant_dt` resolution. A [`ControlPolicy`] is
//! sampled every `controller_period` (quantized to whole plant steps and
//! held between ticks), and its command passes through the actuation chain
//! in this order:
//!
//! 1. saturation (symmetric clamp),
//! 2. dead zone (commands at or below the half-width produce nothing),
//! 3. transport delay (whole plant steps, zero until the first arrival).
//!
//! Alignment is declared when every error component has stayed inside its
//! tolerance for the full dwell, continuously; the reported aligning time
//! is the moment the error *entered* tolerance for good, so the dwell
//! itself is not billed to the controller.

use crate::controller::ControlPolicy;
use crate::error::{Error, Result};
use crate::kinematics::{
    exact_step, tracking_error, Pose2, TrackingError, VelocityCmd, DIVERGENCE_LIMIT,
};
use std::collections::VecDeque;

pub const DEFAULT_CONTROLLER_PERIOD: f64 = 0.01;
pub const DEFAULT_PLANT_DT: f64 = 0.001;
pub const DEFAULT_TIMEOUT: f64 = 30.0;
/// Default dead zone on the spin axis, rad/s.
pub const DEFAULT_OMEGA_DEAD_ZONE: f64 = 0.05;
/// Default saturation on the spin axis, rad/s.
pub const DEFAULT_OMEGA_SATURATION: f64 = 1.0;

/// Actuation imperfections applied to every issued command.
///
/// Saturations use `INFINITY` for "none"; a zero dead zone swallows
/// nothing; a zero delay applies commands the same plant step.
#[derive(Debug, Clone, Copy)]
pub struct NonlinearityConfig {
    /// Linear-axis dead zone half-width, m/s.
    pub dead_zone: f64,
    /// Spin-axis dead zone half-width, rad/s.
    pub dead_zone_omega: f64,
    /// Linear-axis clamp, m/s.
    pub saturation: f64,
    /// Spin-axis clamp, rad/s.
    pub saturation_omega: f64,
    /// Transport delay, seconds; quantized to `round(tau / plant_dt)` steps.
    pub delay_tau: f64,
}

impl NonlinearityConfig {
    /// A clean actuator: nothing clipped, nothing swallowed, no delay.
    pub const fn none() -> NonlinearityConfig {
        NonlinearityConfig {
            dead_zone: 0.0,
            dead_zone_omega: 0.0,
            saturation: f64::INFINITY,
            saturation_omega: f64::INFINITY,
            delay_tau: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("dead_zone", self.dead_zone),
            ("dead_zone_omega", self.dead_zone_omega),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::invalid(format!("{name} must be >= 0, got {v}")));
            }
        }
        for (name, sat, dz) in [
            ("saturation", self.saturation, self.dead_zone),
            (
                "saturation_omega",
                self.saturation_omega,
                self.dead_zone_omega,
            ),
        ] {
            if sat.is_nan() || sat <= dz {
                // Equal bounds would leave the axis unable to move at all.
                return Err(Error::invalid(format!(
                    "{name} = {sat} must exceed the matching dead zone ({dz})"
                )));
            }
        }
        if !self.delay_tau.is_finite() || self.delay_tau < 0.0 {
            return Err(Error::invalid(format!(
                "delay_tau must be >= 0, got {}",
                self.delay_tau
            )));
        }
        Ok(())
    }
}

impl Default for NonlinearityConfig {
    fn default() -> NonlinearityConfig {
        NonlinearityConfig::none()
    }
}

/// Zeroes commands of magnitude `m` or below (boundary inclusive).
pub fn apply_dead_zone(v: f64, m: f64) -> f64 {
    if v.abs() <= m {
        0.0
    } else {
        v
    }
}

/// Symmetric clamp to `[-limit, limit]`.
pub fn apply_saturation(v: f64, limit: f64) -> f64 {
    v.clamp(-limit, limit)
}

/// The static part of the actuation chain: saturation, then dead zone.
pub fn shape_command(cmd: &VelocityCmd, nl: &NonlinearityConfig) -> VelocityCmd {
    VelocityCmd {
        vx: apply_dead_zone(apply_saturation(cmd.vx, nl.saturation), nl.dead_zone),
        vy: apply_dead_zone(apply_saturation(cmd.vy, nl.saturation), nl.dead_zone),
        omega: apply_dead_zone(
            apply_saturation(cmd.omega, nl.saturation_omega),
            nl.dead_zone_omega,
        ),
    }
}

/// Transport delay as a FIFO of whole plant steps, preloaded with zeros so
/// the plant coasts until the first real command arrives.
#[derive(Debug, Clone)]
pub struct DelayLine {
    buf: VecDeque<VelocityCmd>,
}

impl DelayLine {
    /// `steps = round(tau / dt)`, half-steps rounding away from zero.
    pub fn new(tau: f64, dt: f64) -> Result<DelayLine> {
        if !tau.is_finite() || tau < 0.0 {
            return Err(Error::invalid(format!("delay must be >= 0, got {tau}")));
        }
        if !dt.is_finite() || dt <= 0.0 {
            return Err(Error::invalid(format!("delay step must be > 0, got {dt}")));
        }
        let steps = (tau / dt).round() as usize;
        Ok(DelayLine {
            buf: VecDeque::from(vec![VelocityCmd::ZERO; steps]),
        })
    }

    pub fn steps(&self) -> usize {
        self.buf.len()
    }

    /// Feeds the command issued this plant step, returns the one taking
    /// effect now.
    pub fn advance(&mut self, issued: VelocityCmd) -> VelocityCmd {
        if self.buf.is_empty() {
            return issued;
        }
        self.buf.push_back(issued);
        self.buf.pop_front().expect("delay FIFO is non-empty")
    }
}

/// Loop rates: the policy runs every `controller_period`, the plant steps
/// at `plant_dt`. The period is quantized to `round(period / dt)` plant
/// steps and the policy is told the effective (quantized) period.
#[derive(Debug, Clone, Copy)]
pub struct SimTiming {
    pub controller_period: f64,
    pub plant_dt: f64,
}

impl SimTiming {
    pub fn new(controller_period: f64, plant_dt: f64) -> Result<SimTiming> {
        let t = SimTiming {
            controller_period,
            plant_dt,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("controller_period", self.controller_period),
            ("plant_dt", self.plant_dt),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::invalid(format!("{name} must be > 0, got {v}")));
            }
        }
        if self.controller_period < self.plant_dt {
            return Err(Error::invalid(format!(
                "controller_period ({}) must not beat the plant step ({})",
                self.controller_period, self.plant_dt
            )));
        }
        Ok(())
    }

    /// Plant steps per controller tick, at least 1.
    pub fn ticks_per_update(&self) -> usize {
        (self.controller_period / self.plant_dt).round() as usize
    }

    /// The period the policy actually experiences.
    pub fn effective_period(&self) -> f64 {
        self.ticks_per_update() as f64 * self.plant_dt
    }
}

impl Default for SimTiming {
    fn default() -> SimTiming {
        SimTiming {
            controller_period: DEFAULT_CONTROLLER_PERIOD,
            plant_dt: DEFAULT_PLANT_DT,
        }
    }
}

/// Alignment window: all three error components inside tolerance,
/// continuously, for `dwell` seconds.
#[derive(Debug, Clone, Copy)]
pub struct TerminationSpec {
    /// Per-axis position tolerance, meters.
    pub pos_tolerance: f64,
    /// Heading tolerance, radians.
    pub angle_tolerance: f64,
    /// Required continuous in-tolerance time, seconds.
    pub dwell: f64,
}

impl TerminationSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("pos_tolerance", self.pos_tolerance),
            ("angle_tolerance", self.angle_tolerance),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::invalid(format!("{name} must be > 0, got {v}")));
            }
        }
        if !self.dwell.is_finite() || self.dwell < 0.0 {
            return Err(Error::invalid(format!(
                "dwell must be >= 0, got {}",
                self.dwell
            )));
        }
        Ok(())
    }

    fn holds(&self, e: &TrackingError) -> bool {
        e.x.abs() <= self.pos_tolerance
            && e.y.abs() <= self.pos_tolerance
            && e.theta.abs() <= self.angle_tolerance
    }
}

impl Default for TerminationSpec {
    fn default() -> TerminationSpec {
        TerminationSpec {
            pos_tolerance: 0.015,
            angle_tolerance: 0.05,
            dwell: 2.0,
        }
    }
}

/// One controller-tick record of the run.
#[derive(Debug, Clone, Copy)]
pub struct TrajectorySample {
    pub t: f64,
    pub error: TrackingError,
    /// Command as computed by the policy.
    pub raw: VelocityCmd,
    /// Velocity actually moving the plant this step (shaped and delayed).
    pub actuated: VelocityCmd,
}

/// When the error settled into tolerance for good; the dwell that follows
/// is not included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AligningTime {
    Seconds(f64),
    Timeout,
}

impl AligningTime {
    pub fn is_timeout(&self) -> bool {
        matches!(self, AligningTime::Timeout)
    }
}

/// Outcome of a [`run_servo`] session.
#[derive(Debug, Clone)]
pub struct ServoRunResult {
    pub aligned: bool,
    pub aligning_time: AligningTime,
    /// Error at the moment the run ended (alignment or timeout).
    pub final_error: TrackingError,
    /// Wall-clock length of the run in simulated seconds.
    pub elapsed: f64,
    /// Per-tick history.
    pub trajectory: Vec<TrajectorySample>,
}

impl ServoRunResult {
    /// Final error in report units: centimeters and degrees.
    pub fn final_error_cm_deg(&self) -> (f64, f64, f64) {
        (
            self.final_error.x * 100.0,
            self.final_error.y * 100.0,
            self.final_error.theta.to_degrees(),
        )
    }
}

/// Runs the loop until alignment or `timeout` seconds.
pub fn run_servo(
    initial: &Pose2,
    desired: &Pose2,
    policy: &mut dyn ControlPolicy,
    nonlin: &NonlinearityConfig,
    termination: &TerminationSpec,
    timeout: f64,
    timing: &SimTiming,
) -> Result<ServoRunResult> {
    termination.validate()?;
    if !timeout.is_finite() || timeout <= 0.0 {
        return Err(Error::invalid(format!(
            "timeout must be > 0, got {timeout}"
        )));
    }
    drive(
        initial,
        desired,
        policy,
        nonlin,
        timing,
        timeout,
        Some(termination),
    )
}

/// Runs the loop for a fixed horizon, ignoring alignment.
pub fn simulate_horizon(
    initial: &Pose2,
    desired: &Pose2,
    policy: &mut dyn ControlPolicy,
    nonlin: &NonlinearityConfig,
    timing: &SimTiming,
    horizon: f64,
) -> Result<Vec<TrajectorySample>> {
    if !horizon.is_finite() || horizon <= 0.0 {
        return Err(Error::invalid(format!(
            "horizon must be > 0, got {horizon}"
        )));
    }
    let result = drive(initial, desired, policy, nonlin, timing, horizon, None)?;
    Ok(result.trajectory)
}

fn drive(
    initial: &Pose2,
    desired: &Pose2,
    policy: &mut dyn ControlPolicy,
    nonlin: &NonlinearityConfig,
    timing: &SimTiming,
    t_end: f64,
    termination: Option<&TerminationSpec>,
) -> Result<ServoRunResult> {
    if !initial.is_finite() || !desired.is_finite() {
        return Err(Error::NonFinite {
            context: "servo loop: poses",
        });
    }
    nonlin.validate()?;
    timing.validate()?;

    let dt = timing.plant_dt;
    let ticks_per = timing.ticks_per_update();
    let tick_dt = timing.effective_period();
    let max_steps = (t_end / dt + 1e-6).floor() as usize;
    // Continuous in-tolerance steps needed on top of the entry sample.
    let dwell_steps = termination
        .map(|term| ((term.dwell / dt) - 1e-6).ceil().max(0.0) as usize)
        .unwrap_or(usize::MAX);

    let mut delay = DelayLine::new(nonlin.delay_tau, dt)?;
    let mut pose = *initial;
    let mut raw = VelocityCmd::ZERO;
    let mut issued = VelocityCmd::ZERO;
    let mut trajectory = Vec::with_capacity(max_steps / ticks_per + 2);
    let mut entered_at: Option<usize> = None;

    for k in 0..=max_steps {
        let t = k as f64 * dt;
        let error = tracking_error(&pose, desired);

        if let Some(term) = termination {
            if term.holds(&error) {
                let k0 = *entered_at.get_or_insert(k);
                if k - k0 >= dwell_steps {
                    return Ok(ServoRunResult {
                        aligned: true,
                        aligning_time: AligningTime::Seconds(k0 as f64 * dt),
                        final_error: error,
                        elapsed: t,
                        trajectory,
                    });
                }
            } else {
                entered_at = None;
            }
        }

        if k == max_steps {
            return Ok(ServoRunResult {
                aligned: false,
                aligning_time: AligningTime::Timeout,
                final_error: error,
                elapsed: t,
                trajectory,
            });
        }

        let is_tick = k % ticks_per == 0;
        if is_tick {
            raw = policy.command(&pose, &error, t, tick_dt)?;
            if !raw.is_finite() {
                return Err(Error::NonFinite {
                    context: "servo loop: policy command",
                });
            }
            issued = shape_command(&raw, nonlin);
        }
        let actuated = delay.advance(issued);
        if is_tick {
            trajectory.push(TrajectorySample {
                t,
                error,
                raw,
                actuated,
            });
        }

        pose = exact_step(&pose, &actuated, dt)?;
        for (axis, v) in [("x", pose.x), ("y", pose.y)] {
            if v.abs() > DIVERGENCE_LIMIT {
                return Err(Error::Diverged {
                    t: (k + 1) as f64 * dt,
                    axis,
                    value: v.abs(),
                    limit: DIVERGENCE_LIMIT,
                });
            }
        }
    }
    unreachable!("loop returns at or before max_steps");
}

/// Serializes per-tick samples with a fixed column set; numbers use the
/// nine-significant-digit fixed-decimal form from [`crate::csvfmt`].
pub fn trajectory_csv(samples: &[TrajectorySample]) -> String {
    use crate::csvfmt::sig9;
    let mut out =
        String::from("t,ex,ey,etheta,vx_raw,vy_raw,omega_raw,vx_act,vy_act,omega_act\n");
    for s in samples {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            sig9(s.t),
            sig9(s.error.x),
            sig9(s.error.y),
            sig9(s.error.theta),
            sig9(s.raw.vx),
            sig9(s.raw.vy),
            sig9(s.raw.omega),
            sig9(s.actuated.vx),
            sig9(s.actuated.vy),
            sig9(s.actuated.omega),
        ));
    }
    out
}
