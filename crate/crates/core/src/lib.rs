//! Deterministic simulation library for a velocity-controlled omnidirectional
//! chassis servoing onto a workpiece pose, plus the perception-side filters
//! that produce that pose.
//!
//! The crate is split along the signal path:
//!
//! * [`kinematics`] - rigid-body pose types and the exact discrete map of the
//!   target pose expressed in the chassis frame.
//! * [`design_function`] - the scalar error-shaping laws (proportional,
//!   fractional-power, proportional-integral) together with their closed-form
//!   solutions and dead-zone steady-state predictions.
//! * [`controller`] - the coupled control law that turns per-axis shaping
//!   outputs into chassis velocity commands, with integral separation and
//!   anti-windup.
//! * [`baseline`] - open-loop replay and decoupled PID policies used as
//!   comparison points.
//! * [`plant`] - actuation nonlinearities (dead zone, saturation, transport
//!   delay), the fixed-step closed-loop runner, and parameter sweeps.
//! * [`perception`] - color-feature extraction, recognition gating, pose
//!   smoothing, and repeatability metrics.
//!
//! Everything is fixed-step and seedable; given the same inputs, every
//! function in this crate produces bit-identical outputs on every run.

pub mod baseline;
pub mod controller;
pub mod csvfmt;
pub mod design_function;
pub mod error;
pub mod kinematics;
pub mod perception;
pub mod plant;
pub mod sweep;

pub use error::{Error, Result};
