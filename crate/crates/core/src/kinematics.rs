//! Pose types and the relative-pose kinematics of a velocity-controlled
//! omnidirectional chassis.
//!
//! The state tracked everywhere in this crate is the workpiece (target) pose
//! expressed in the chassis frame. With the chassis commanded at body
//! velocities `(vx, vy)` and spin `omega`, that relative pose evolves as
//!
//! ```text
//! x'     = vx - y * omega
//! y'     = vy + x * omega
//! theta' = -omega
//! ```
//!
//! [`exact_step`] integrates this system exactly over one interval of
//! constant command, so a fixed-step plant built on it has no integration
//! error at all; [`integrate_ode`] provides a classical Runge-Kutta
//! reference for time-varying command schedules.

use crate::error::{Error, Result};

/// Planar pose: position in meters, heading in radians.
///
/// `theta` is kept in `(-pi, pi]` by every operation that returns a `Pose2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose2 {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

/// Velocity command in the chassis frame: m/s, m/s, rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityCmd {
    pub vx: f64,
    pub vy: f64,
    pub omega: f64,
}

impl Pose2 {
    pub const ZERO: Pose2 = Pose2 {
        x: 0.0,
        y: 0.0,
        theta: 0.0,
    };

    /// Builds a pose, normalizing the heading into `(-pi, pi]`.
    pub fn new(x: f64, y: f64, theta: f64) -> Pose2 {
        Pose2 {
            x,
            y,
            theta: normalize_angle(theta),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.theta.is_finite()
    }
}

impl VelocityCmd {
    pub const ZERO: VelocityCmd = VelocityCmd {
        vx: 0.0,
        vy: 0.0,
        omega: 0.0,
    };

    pub fn new(vx: f64, vy: f64, omega: f64) -> VelocityCmd {
        VelocityCmd { vx, vy, omega }
    }

    pub fn is_finite(&self) -> bool {
        self.vx.is_finite() && self.vy.is_finite() && self.omega.is_finite()
    }
}

/// Offset of the current target pose from the desired grasp pose,
/// componentwise, with the heading taken along the shortest arc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackingError {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl TrackingError {
    /// Euclidean position error in meters.
    pub fn position_norm(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// Error of `pose` relative to `desired`.
pub fn tracking_error(pose: &Pose2, desired: &Pose2) -> TrackingError {
    TrackingError {
        x: pose.x - desired.x,
        y: pose.y - desired.y,
        theta: angle_diff(pose.theta, desired.theta),
    }
}

/// Fixed integration step for [`integrate_ode`].
#[derive(Debug, Clone, Copy)]
pub struct StepParams {
    dt: f64,
}

impl StepParams {
    /// `dt` must be finite and strictly positive.
    pub fn new(dt: f64) -> Result<StepParams> {
        if !dt.is_finite() {
            return Err(Error::NonFinite {
                context: "StepParams::new: dt",
            });
        }
        if dt <= 0.0 {
            return Err(Error::invalid(format!("step dt must be > 0, got {dt}")));
        }
        Ok(StepParams { dt })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }
}

/// Positions beyond this magnitude mean the loop is unstable; integrators
/// stop and report divergence instead of marching into float overflow.
pub const DIVERGENCE_LIMIT: f64 = 1e6;

/// Maps any finite angle into `(-pi, pi]`.
pub fn normalize_angle(a: f64) -> f64 {
    use std::f64::consts::PI;
    // In-range angles pass through untouched; the wrap formula below costs
    // half an ulp even when it has nothing to do.
    if -PI < a && a <= PI {
        return a;
    }
    // rem_euclid keeps the result in [0, 2*pi), which lands the output in
    // (-pi, pi] with the boundary mapped to +pi.
    PI - (PI - a).rem_euclid(2.0 * PI)
}

/// Minimal signed difference `a - b`, wrapped into `(-pi, pi]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    normalize_angle(a - b)
}

/// Instantaneous rate of the target pose in the chassis frame.
pub fn state_derivative(pose: &Pose2, cmd: &VelocityCmd) -> Result<(f64, f64, f64)> {
    if !pose.is_finite() {
        return Err(Error::NonFinite {
            context: "state_derivative: pose",
        });
    }
    if !cmd.is_finite() {
        return Err(Error::NonFinite {
            context: "state_derivative: cmd",
        });
    }
    Ok((
        cmd.vx - pose.y * cmd.omega,
        cmd.vy + pose.x * cmd.omega,
        -cmd.omega,
    ))
}

/// Advances the relative pose by `dt` seconds of constant command.
///
/// This is the closed-form flow of the system in the module docs, not a
/// one-step approximation: composing two half steps reproduces a full step
/// to machine precision, and subdividing converges to nothing new.
pub fn exact_step(pose: &Pose2, cmd: &VelocityCmd, dt: f64) -> Result<Pose2> {
    if !pose.is_finite() {
        return Err(Error::NonFinite {
            context: "exact_step: pose",
        });
    }
    if !cmd.is_finite() {
        return Err(Error::NonFinite {
            context: "exact_step: cmd",
        });
    }
    if !dt.is_finite() {
        return Err(Error::NonFinite {
            context: "exact_step: dt",
        });
    }

    let phi = cmd.omega * dt;
    let (s, c) = phi.sin_cos();
    // a = sin(phi)/phi, b = (1 - cos(phi))/phi; series below ~1e-4 keeps
    // full precision where the direct quotients start cancelling.
    let (a, b) = if phi.abs() < 1e-4 {
        let p2 = phi * phi;
        (1.0 - p2 / 6.0, phi / 2.0 - p2 * phi / 24.0)
    } else {
        ((s / phi), (1.0 - c) / phi)
    };

    let x = c * pose.x - s * pose.y + dt * (a * cmd.vx - b * cmd.vy);
    let y = s * pose.x + c * pose.y + dt * (b * cmd.vx + a * cmd.vy);
    Ok(Pose2::new(x, y, pose.theta - phi))
}

/// Integrates a time-varying command schedule with fixed-step RK4.
///
/// Returns `floor(horizon / dt) + 1` samples including the initial state at
/// `t = 0`; no partial step is taken at the end. Errors with
/// [`Error::Diverged`] the moment `|x|` or `|y|` leaves
/// [`DIVERGENCE_LIMIT`].
pub fn integrate_ode<F>(
    pose: &Pose2,
    schedule: F,
    horizon: f64,
    step: StepParams,
) -> Result<Vec<(f64, Pose2)>>
where
    F: Fn(f64) -> VelocityCmd,
{
    if !pose.is_finite() {
        return Err(Error::NonFinite {
            context: "integrate_ode: pose",
        });
    }
    if !horizon.is_finite() || horizon <= 0.0 {
        return Err(Error::invalid(format!(
            "integration horizon must be finite and > 0, got {horizon}"
        )));
    }
    let dt = step.dt();
    if dt > horizon {
        return Err(Error::invalid(format!(
            "step dt = {dt} exceeds horizon = {horizon}"
        )));
    }

    // Slack absorbs the quotient's representation error for horizons that
    // are exact multiples of dt; deliberate fractional horizons lose only
    // their final partial step.
    let n_steps = (horizon / dt + 1e-6).floor() as usize;

    let eval = |t: f64, x: f64, y: f64| -> Result<(f64, f64, f64)> {
        let cmd = schedule(t);
        if !cmd.is_finite() {
            return Err(Error::NonFinite {
                context: "integrate_ode: schedule output",
            });
        }
        Ok((
            cmd.vx - y * cmd.omega,
            cmd.vy + x * cmd.omega,
            -cmd.omega,
        ))
    };

    let mut out = Vec::with_capacity(n_steps + 1);
    let (mut x, mut y, mut th) = (pose.x, pose.y, pose.theta);
    out.push((0.0, Pose2::new(x, y, th)));

    for i in 0..n_steps {
        let t = i as f64 * dt;
        let h = dt;

        let k1 = eval(t, x, y)?;
        let k2 = eval(t + h / 2.0, x + h / 2.0 * k1.0, y + h / 2.0 * k1.1)?;
        let k3 = eval(t + h / 2.0, x + h / 2.0 * k2.0, y + h / 2.0 * k2.1)?;
        let k4 = eval(t + h, x + h * k3.0, y + h * k3.1)?;

        x += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        y += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        th += h / 6.0 * (k1.2 + 2.0 * k2.2 + 2.0 * k3.2 + k4.2);

        let t_next = (i + 1) as f64 * dt;
        for (axis, v) in [("x", x), ("y", y)] {
            if v.abs() > DIVERGENCE_LIMIT {
                return Err(Error::Diverged {
                    t: t_next,
                    axis,
                    value: v.abs(),
                    limit: DIVERGENCE_LIMIT,
                });
            }
        }
        out.push((t_next, Pose2::new(x, y, th)));
    }
    Ok(out)
}
