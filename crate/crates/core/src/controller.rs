//! The coupled chassis control law.
//!
//! Each axis of the tracking error is shaped by its own
//! [`DesignFunctionSpec`] to a desired error rate `f = (f1, f2, f3)`. The
//! chassis velocities that realize exactly those rates through the
//! relative-pose kinematics are
//!
//! ```text
//! vx    = f1 - y * f3
//! vy    = f2 + x * f3
//! omega = -f3
//! ```
//!
//! with `(x, y)` the current target position in the chassis frame. The
//! rotational coupling cancels identically, so in continuous time the three
//! error channels behave as independent scalar loops no matter how the
//! chassis spins.
//!
//! The integral channel of a type III axis is gated and bounded: it only
//! accumulates once the error magnitude drops below the axis separation
//! threshold, and it is clamped so a long stall cannot wind it up.

use crate::design_function::{DesignFunctionSpec, ScalarErrorState};
use crate::error::{Error, Result};
use crate::kinematics::{normalize_angle, Pose2, TrackingError, VelocityCmd};

pub const DEFAULT_KP: f64 = 4.0;
pub const DEFAULT_KI: f64 = 2.0;
/// Position integral gate, meters.
pub const DEFAULT_SEPARATION_THRESHOLD: f64 = 0.1;
/// Heading integral gate, radians.
pub const DEFAULT_ANGULAR_SEPARATION_THRESHOLD: f64 = 0.2;

/// Per-axis control parameters.
#[derive(Debug, Clone, Copy)]
pub struct AxisConfig {
    pub df: DesignFunctionSpec,
    /// Integral accumulates only while `|e|` is strictly below this.
    pub separation_threshold: f64,
    /// Bound on `|integral|`; `INFINITY` disables the clamp.
    pub integral_clamp: f64,
}

impl AxisConfig {
    pub fn new(df: DesignFunctionSpec, separation_threshold: f64) -> Result<AxisConfig> {
        let cfg = AxisConfig {
            df,
            separation_threshold,
            integral_clamp: f64::INFINITY,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_integral_clamp(mut self, clamp: f64) -> Result<AxisConfig> {
        self.integral_clamp = clamp;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        self.df.validate()?;
        if self.separation_threshold.is_nan() || self.separation_threshold <= 0.0 {
            return Err(Error::invalid(format!(
                "separation threshold must be > 0, got {}",
                self.separation_threshold
            )));
        }
        if self.integral_clamp.is_nan() || self.integral_clamp <= 0.0 {
            return Err(Error::invalid(format!(
                "integral clamp must be > 0, got {}",
                self.integral_clamp
            )));
        }
        Ok(())
    }
}

/// Full controller parameterization, one axis config per error channel.
#[derive(Debug, Clone, Copy)]
pub struct ControllerConfig {
    pub x: AxisConfig,
    pub y: AxisConfig,
    pub theta: AxisConfig,
}

impl ControllerConfig {
    /// Same law on every axis, with the default integral gates.
    pub fn uniform(df: DesignFunctionSpec) -> Result<ControllerConfig> {
        Ok(ControllerConfig {
            x: AxisConfig::new(df, DEFAULT_SEPARATION_THRESHOLD)?,
            y: AxisConfig::new(df, DEFAULT_SEPARATION_THRESHOLD)?,
            theta: AxisConfig::new(df, DEFAULT_ANGULAR_SEPARATION_THRESHOLD)?,
        })
    }

    /// The type III tuning used throughout: `kp = 4`, `ki = 2`.
    pub fn default_type3() -> ControllerConfig {
        let df = DesignFunctionSpec::TypeIII {
            kp: DEFAULT_KP,
            ki: DEFAULT_KI,
        };
        ControllerConfig::uniform(df).expect("default gains are valid")
    }

    pub fn validate(&self) -> Result<()> {
        self.x.validate()?;
        self.y.validate()?;
        self.theta.validate()
    }

    fn axes(&self) -> [&AxisConfig; 3] {
        [&self.x, &self.y, &self.theta]
    }
}

/// The three scalar loop states of the controller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorState3 {
    pub ex: f64,
    pub ey: f64,
    pub etheta: f64,
    /// Integral accumulators in `[x, y, theta]` order.
    pub integrals: [f64; 3],
    /// Errors at loop start, for normalized reporting.
    pub e0: [f64; 3],
}

impl ErrorState3 {
    /// Fresh state at loop start: integrals are zero, `e0` records the
    /// entry errors. The heading component is wrapped to the shortest arc.
    pub fn new(ex: f64, ey: f64, etheta: f64) -> ErrorState3 {
        let etheta = normalize_angle(etheta);
        ErrorState3 {
            ex,
            ey,
            etheta,
            integrals: [0.0; 3],
            e0: [ex, ey, etheta],
        }
    }

    /// Replaces the error measurements, keeping integrals and `e0`.
    pub fn set_measurement(&mut self, error: &TrackingError) {
        self.ex = error.x;
        self.ey = error.y;
        self.etheta = normalize_angle(error.theta);
    }

    fn errors(&self) -> [f64; 3] {
        [self.ex, self.ey, self.etheta]
    }
}

/// One integration step of the gated, clamped integral channels.
///
/// Accumulation uses the current error sample (`integral += e * dt`), is
/// skipped entirely for axes whose law has no integral term, is gated on
/// `|e| < separation_threshold` (strict), and is clamped to the axis bound
/// afterwards. `dt` must be positive and finite.
pub fn update_integrals(state: &ErrorState3, config: &ControllerConfig, dt: f64) -> ErrorState3 {
    let mut next = *state;
    for (i, (axis, e)) in config.axes().iter().zip(state.errors()).enumerate() {
        if !axis.df.uses_integral() {
            continue;
        }
        if e.abs() < axis.separation_threshold {
            next.integrals[i] += e * dt;
        }
        next.integrals[i] = next.integrals[i].clamp(-axis.integral_clamp, axis.integral_clamp);
    }
    next
}

/// Chassis velocities that make the tracking error follow the rates `f`.
pub fn linearize(f: [f64; 3], target_in_chassis: &Pose2) -> VelocityCmd {
    VelocityCmd {
        vx: f[0] - target_in_chassis.y * f[2],
        vy: f[1] + target_in_chassis.x * f[2],
        omega: -f[2],
    }
}

/// One full controller tick: integrate the gated integral channels, shape
/// each axis error, and couple the result into a chassis command.
///
/// `state` carries the freshly measured errors; it is updated in place with
/// the new integrals. `target_in_chassis` is the current target pose used
/// for the rotational coupling terms.
pub fn control_law(
    state: &mut ErrorState3,
    target_in_chassis: &Pose2,
    config: &ControllerConfig,
    dt: f64,
) -> Result<VelocityCmd> {
    if !target_in_chassis.is_finite() {
        return Err(Error::NonFinite {
            context: "control_law: target pose",
        });
    }
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::invalid(format!("tick dt must be > 0, got {dt}")));
    }

    *state = update_integrals(state, config, dt);

    let mut f = [0.0; 3];
    for (i, (axis, e)) in config.axes().iter().zip(state.errors()).enumerate() {
        let scalar = ScalarErrorState {
            e,
            integral: state.integrals[i],
            e0: state.e0[i],
        };
        f[i] = axis.df.df_value(&scalar);
    }
    let cmd = linearize(f, target_in_chassis);
    if !cmd.is_finite() {
        return Err(Error::NonFinite {
            context: "control_law: command",
        });
    }
    Ok(cmd)
}

/// A policy queried once per controller tick by the closed-loop runner.
pub trait ControlPolicy {
    /// `pose` is the current target pose in the chassis frame, `error` its
    /// offset from the desired grasp pose, `t` the tick time.
    fn command(
        &mut self,
        pose: &Pose2,
        error: &TrackingError,
        t: f64,
        dt: f64,
    ) -> Result<VelocityCmd>;
}

/// Stateful wrapper tying a [`ControllerConfig`] to its [`ErrorState3`].
#[derive(Debug, Clone)]
pub struct ServoController {
    config: ControllerConfig,
    state: ErrorState3,
}

impl ServoController {
    pub fn new(config: ControllerConfig, initial_error: &TrackingError) -> Result<ServoController> {
        config.validate()?;
        Ok(ServoController {
            config,
            state: ErrorState3::new(initial_error.x, initial_error.y, initial_error.theta),
        })
    }

    pub fn state(&self) -> &ErrorState3 {
        &self.state
    }

    pub fn config(&self) -> &ControllerConfig {
        &self.config
    }
}

impl ControlPolicy for ServoController {
    fn command(
        &mut self,
        pose: &Pose2,
        error: &TrackingError,
        _t: f64,
        dt: f64,
    ) -> Result<VelocityCmd> {
        self.state.set_measurement(error);
        control_law(&mut self.state, pose, &self.config, dt)
    }
}
