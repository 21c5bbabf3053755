//! Scenario files: a TOML schema describing one servo run (policy,
//! actuator imperfections, geometry, termination), plus optional sweep and
//! filter sections for the batch subcommands.
//!
//! Parsing is strict: unknown keys are rejected with the TOML position,
//! and semantic violations come back prefixed with the file path.

use crate::errors::{CliError, CliResult};
use serde::Deserialize;
use servobench_core::baseline::{DecoupledPid, OpenLoopPlan, PidGains};
use servobench_core::controller::{
    AxisConfig, ControlPolicy, ControllerConfig, ServoController,
    DEFAULT_ANGULAR_SEPARATION_THRESHOLD, DEFAULT_KI, DEFAULT_KP, DEFAULT_SEPARATION_THRESHOLD,
};
use servobench_core::design_function::DesignFunctionSpec;
use servobench_core::kinematics::{tracking_error, Pose2};
use servobench_core::perception::stream::SynthParams;
use servobench_core::perception::{DEFAULT_MAX_HOLD, DEFAULT_SMOOTHING};
use servobench_core::plant::{
    run_servo, NonlinearityConfig, ServoRunResult, SimTiming, TerminationSpec, DEFAULT_TIMEOUT,
};
use servobench_core::sweep::SweepGrid;
use std::fs;
use std::path::Path;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    label: Option<String>,
    environment: Option<String>,
    seed: Option<u64>,
    controller: Option<ControllerSection>,
    nonlinearity: Option<NonlinearitySection>,
    initial: Option<PoseSection>,
    desired: Option<PoseSection>,
    termination: Option<TerminationSection>,
    timing: Option<TimingSection>,
    sweep: Option<SweepSection>,
    filter: Option<FilterSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ControllerSection {
    #[serde(rename = "type")]
    kind: String,
    kp: Option<f64>,
    ki: Option<f64>,
    alpha: Option<f64>,
    kd: Option<f64>,
    separation_threshold: Option<f64>,
    angular_separation_threshold: Option<f64>,
    integral_clamp: Option<f64>,
    cruise_speed: Option<f64>,
    ramp_time: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct NonlinearitySection {
    dead_zone: Option<f64>,
    dead_zone_omega: Option<f64>,
    saturation: Option<f64>,
    saturation_omega: Option<f64>,
    delay: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PoseSection {
    x: Option<f64>,
    y: Option<f64>,
    theta: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TerminationSection {
    pos_tolerance: Option<f64>,
    angle_tolerance: Option<f64>,
    dwell: Option<f64>,
    timeout: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TimingSection {
    controller_period: Option<f64>,
    plant_dt: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSection {
    types: Option<Vec<String>>,
    type1_kp: Option<f64>,
    type2_kp: Option<f64>,
    type2_alpha: Option<f64>,
    type3_kp: Option<f64>,
    type3_ki: Option<f64>,
    taus: Option<Vec<f64>>,
    dead_zones: Option<Vec<f64>>,
    initial_error: Option<f64>,
    horizon: Option<f64>,
    saturation: Option<f64>,
    settle_fraction: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FilterSection {
    x: Option<f64>,
    y: Option<f64>,
    theta: Option<f64>,
    sigma_pos: Option<f64>,
    sigma_att: Option<f64>,
    dropout: Option<f64>,
    frames: Option<usize>,
    fps: Option<f64>,
    a: Option<f64>,
    max_hold: Option<u32>,
}

/// Which policy drives the loop.
#[derive(Debug, Clone)]
pub enum PolicyKind {
    DesignFunction(ControllerConfig),
    Pid {
        gains: PidGains,
        separation_threshold: f64,
        integral_clamp: f64,
    },
    OpenLoop {
        cruise_speed: f64,
        ramp_time: f64,
    },
}

/// Fully validated scenario, ready to run.
#[derive(Debug, Clone)]
pub struct Scenario {
    /// Config file stem; names the per-run output files.
    pub stem: String,
    pub label: String,
    pub environment: String,
    pub seed: Option<u64>,
    pub policy: PolicyKind,
    pub nonlin: NonlinearityConfig,
    pub initial: Pose2,
    pub desired: Pose2,
    pub termination: TerminationSpec,
    pub timeout: f64,
    pub timing: SimTiming,
    pub sweep: Option<SweepGrid>,
    pub filter: Option<FilterScenario>,
}

/// Synthetic stream plus smoothing parameters for the filter subcommand.
#[derive(Debug, Clone, Copy)]
pub struct FilterScenario {
    pub synth: SynthParams,
    pub a: f64,
    pub max_hold: u32,
}

pub fn load_scenario(path: &Path) -> CliResult<Scenario> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    parse_scenario(&text, path)
}

pub fn parse_scenario(text: &str, path: &Path) -> CliResult<Scenario> {
    let at = |msg: String| CliError::usage(format!("{}: {msg}", path.display()));
    let file: ScenarioFile = toml::from_str(text).map_err(|e| at(e.to_string()))?;

    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".to_owned());

    let policy = build_policy_kind(file.controller.as_ref(), file.nonlinearity.as_ref())
        .map_err(|e| at(e.to_string()))?;

    let nonlin = build_nonlin(file.nonlinearity.as_ref());
    nonlin.validate().map_err(|e| at(e.to_string()))?;

    let initial = build_pose(file.initial.as_ref());
    let desired = build_pose(file.desired.as_ref());

    let term = file.termination.as_ref();
    let termination = TerminationSpec {
        pos_tolerance: term
            .and_then(|t| t.pos_tolerance)
            .unwrap_or(TerminationSpec::default().pos_tolerance),
        angle_tolerance: term
            .and_then(|t| t.angle_tolerance)
            .unwrap_or(TerminationSpec::default().angle_tolerance),
        dwell: term
            .and_then(|t| t.dwell)
            .unwrap_or(TerminationSpec::default().dwell),
    };
    termination.validate().map_err(|e| at(e.to_string()))?;
    let timeout = term.and_then(|t| t.timeout).unwrap_or(DEFAULT_TIMEOUT);
    if !timeout.is_finite() || timeout <= 0.0 {
        return Err(at(format!("timeout must be > 0, got {timeout}")));
    }

    let timing = SimTiming {
        controller_period: file
            .timing
            .as_ref()
            .and_then(|t| t.controller_period)
            .unwrap_or(SimTiming::default().controller_period),
        plant_dt: file
            .timing
            .as_ref()
            .and_then(|t| t.plant_dt)
            .unwrap_or(SimTiming::default().plant_dt),
    };
    timing.validate().map_err(|e| at(e.to_string()))?;

    let sweep = file
        .sweep
        .as_ref()
        .map(|s| build_sweep(s, &timing))
        .transpose()
        .map_err(|e| at(e.to_string()))?;
    if let Some(grid) = &sweep {
        grid.validate().map_err(|e| at(e.to_string()))?;
    }

    let filter = file
        .filter
        .as_ref()
        .map(build_filter)
        .transpose()
        .map_err(|e| at(e.to_string()))?;
    if let Some(f) = &filter {
        f.synth.validate().map_err(|e| at(e.to_string()))?;
        if !(0.0..=1.0).contains(&f.a) {
            return Err(at(format!(
                "filter smoothing factor must be in [0, 1], got {}",
                f.a
            )));
        }
    }

    Ok(Scenario {
        stem,
        label: file.label.unwrap_or_else(|| default_label(&policy)),
        environment: file.environment.unwrap_or_else(|| "custom".to_owned()),
        seed: file.seed,
        policy,
        nonlin,
        initial,
        desired,
        termination,
        timeout,
        timing,
        sweep,
        filter,
    })
}

impl Scenario {
    /// Instantiates the policy against this scenario's initial error.
    pub fn build_policy(&self) -> CliResult<Box<dyn ControlPolicy>> {
        let initial_error = tracking_error(&self.initial, &self.desired);
        Ok(match &self.policy {
            PolicyKind::DesignFunction(config) => {
                Box::new(ServoController::new(*config, &initial_error)?)
            }
            PolicyKind::Pid {
                gains,
                separation_threshold,
                integral_clamp,
            } => Box::new(
                DecoupledPid::new(*gains, *separation_threshold)?
                    .with_integral_clamp(*integral_clamp)?,
            ),
            PolicyKind::OpenLoop {
                cruise_speed,
                ramp_time,
            } => Box::new(OpenLoopPlan::toward(
                &initial_error,
                *cruise_speed,
                *ramp_time,
            )?),
        })
    }

    /// Runs the scenario's servo loop to completion.
    pub fn run(&self) -> CliResult<ServoRunResult> {
        let mut policy = self.build_policy()?;
        Ok(run_servo(
            &self.initial,
            &self.desired,
            policy.as_mut(),
            &self.nonlin,
            &self.termination,
            self.timeout,
            &self.timing,
        )?)
    }
}

fn default_label(policy: &PolicyKind) -> String {
    match policy {
        PolicyKind::DesignFunction(_) => "design-function servo".to_owned(),
        PolicyKind::Pid { .. } => "decoupled PID".to_owned(),
        PolicyKind::OpenLoop { .. } => "open-loop replay".to_owned(),
    }
}

fn build_pose(section: Option<&PoseSection>) -> Pose2 {
    Pose2::new(
        section.and_then(|p| p.x).unwrap_or(0.0),
        section.and_then(|p| p.y).unwrap_or(0.0),
        section.and_then(|p| p.theta).unwrap_or(0.0),
    )
}

fn build_nonlin(section: Option<&NonlinearitySection>) -> NonlinearityConfig {
    let none = NonlinearityConfig::none();
    match section {
        None => none,
        Some(s) => NonlinearityConfig {
            dead_zone: s.dead_zone.unwrap_or(none.dead_zone),
            dead_zone_omega: s.dead_zone_omega.unwrap_or(none.dead_zone_omega),
            saturation: s.saturation.unwrap_or(none.saturation),
            saturation_omega: s.saturation_omega.unwrap_or(none.saturation_omega),
            delay_tau: s.delay.unwrap_or(none.delay_tau),
        },
    }
}

/// Integral bound that keeps the integral term alone inside saturation.
fn default_clamp(ki: f64, saturation: f64) -> f64 {
    if ki > 0.0 && saturation.is_finite() {
        saturation / ki
    } else {
        f64::INFINITY
    }
}

fn reject_irrelevant(kind: &str, fields: &[(&str, bool)]) -> CliResult<()> {
    for (name, present) in fields {
        if *present {
            return Err(CliError::usage(format!(
                "controller type {kind:?} does not use `{name}`"
            )));
        }
    }
    Ok(())
}

fn build_policy_kind(
    section: Option<&ControllerSection>,
    nonlin: Option<&NonlinearitySection>,
) -> CliResult<PolicyKind> {
    let saturation = nonlin
        .and_then(|n| n.saturation)
        .unwrap_or(f64::INFINITY);
    let saturation_omega = nonlin
        .and_then(|n| n.saturation_omega)
        .unwrap_or(f64::INFINITY);

    let Some(c) = section else {
        // No [controller] section: the deployed type III tuning.
        return df_policy(
            DesignFunctionSpec::TypeIII {
                kp: DEFAULT_KP,
                ki: DEFAULT_KI,
            },
            DEFAULT_SEPARATION_THRESHOLD,
            DEFAULT_ANGULAR_SEPARATION_THRESHOLD,
            None,
            saturation,
            saturation_omega,
        );
    };

    let sep = c
        .separation_threshold
        .unwrap_or(DEFAULT_SEPARATION_THRESHOLD);
    let sep_ang = c
        .angular_separation_threshold
        .unwrap_or(DEFAULT_ANGULAR_SEPARATION_THRESHOLD);
    let require = |name: &str, v: Option<f64>| {
        v.ok_or_else(|| {
            CliError::usage(format!(
                "controller type {:?} requires `{name}`",
                c.kind
            ))
        })
    };

    match c.kind.as_str() {
        "type1" => {
            reject_irrelevant(
                &c.kind,
                &[
                    ("ki", c.ki.is_some()),
                    ("alpha", c.alpha.is_some()),
                    ("kd", c.kd.is_some()),
                    ("cruise_speed", c.cruise_speed.is_some()),
                    ("ramp_time", c.ramp_time.is_some()),
                ],
            )?;
            let kp = require("kp", c.kp)?;
            df_policy(
                DesignFunctionSpec::TypeI { kp },
                sep,
                sep_ang,
                c.integral_clamp,
                saturation,
                saturation_omega,
            )
        }
        "type2" => {
            reject_irrelevant(
                &c.kind,
                &[
                    ("ki", c.ki.is_some()),
                    ("kd", c.kd.is_some()),
                    ("cruise_speed", c.cruise_speed.is_some()),
                    ("ramp_time", c.ramp_time.is_some()),
                ],
            )?;
            let kp = require("kp", c.kp)?;
            let alpha = require("alpha", c.alpha)?;
            df_policy(
                DesignFunctionSpec::TypeII { kp, alpha },
                sep,
                sep_ang,
                c.integral_clamp,
                saturation,
                saturation_omega,
            )
        }
        "type3" => {
            reject_irrelevant(
                &c.kind,
                &[
                    ("alpha", c.alpha.is_some()),
                    ("kd", c.kd.is_some()),
                    ("cruise_speed", c.cruise_speed.is_some()),
                    ("ramp_time", c.ramp_time.is_some()),
                ],
            )?;
            let kp = c.kp.unwrap_or(DEFAULT_KP);
            let ki = c.ki.unwrap_or(DEFAULT_KI);
            df_policy(
                DesignFunctionSpec::TypeIII { kp, ki },
                sep,
                sep_ang,
                c.integral_clamp,
                saturation,
                saturation_omega,
            )
        }
        "pid" => {
            reject_irrelevant(
                &c.kind,
                &[
                    ("alpha", c.alpha.is_some()),
                    ("angular_separation_threshold", c.angular_separation_threshold.is_some()),
                    ("cruise_speed", c.cruise_speed.is_some()),
                    ("ramp_time", c.ramp_time.is_some()),
                ],
            )?;
            let gains = PidGains {
                kp: c.kp.unwrap_or(DEFAULT_KP),
                ki: c.ki.unwrap_or(DEFAULT_KI),
                kd: c.kd.unwrap_or(0.0),
            };
            let clamp = c
                .integral_clamp
                .unwrap_or_else(|| default_clamp(gains.ki, saturation));
            Ok(PolicyKind::Pid {
                gains,
                separation_threshold: sep,
                integral_clamp: clamp,
            })
        }
        "open-loop" => {
            reject_irrelevant(
                &c.kind,
                &[
                    ("kp", c.kp.is_some()),
                    ("ki", c.ki.is_some()),
                    ("alpha", c.alpha.is_some()),
                    ("kd", c.kd.is_some()),
                    ("separation_threshold", c.separation_threshold.is_some()),
                    (
                        "angular_separation_threshold",
                        c.angular_separation_threshold.is_some(),
                    ),
                    ("integral_clamp", c.integral_clamp.is_some()),
                ],
            )?;
            Ok(PolicyKind::OpenLoop {
                cruise_speed: c.cruise_speed.unwrap_or(0.15),
                ramp_time: c.ramp_time.unwrap_or(2.0),
            })
        }
        other => Err(CliError::usage(format!(
            "unknown controller type {other:?}; expected type1, type2, type3, pid, or open-loop"
        ))),
    }
}

fn df_policy(
    df: DesignFunctionSpec,
    sep: f64,
    sep_ang: f64,
    clamp_override: Option<f64>,
    saturation: f64,
    saturation_omega: f64,
) -> CliResult<PolicyKind> {
    let (clamp_lin, clamp_ang) = match df {
        DesignFunctionSpec::TypeIII { ki, .. } => (
            clamp_override.unwrap_or_else(|| default_clamp(ki, saturation)),
            clamp_override.unwrap_or_else(|| default_clamp(ki, saturation_omega)),
        ),
        _ => (f64::INFINITY, f64::INFINITY),
    };
    let config = ControllerConfig {
        x: AxisConfig::new(df, sep)?.with_integral_clamp(clamp_lin)?,
        y: AxisConfig::new(df, sep)?.with_integral_clamp(clamp_lin)?,
        theta: AxisConfig::new(df, sep_ang)?.with_integral_clamp(clamp_ang)?,
    };
    Ok(PolicyKind::DesignFunction(config))
}

fn build_sweep(section: &SweepSection, timing: &SimTiming) -> CliResult<SweepGrid> {
    let defaults = SweepGrid::default();
    let names = section
        .types
        .clone()
        .unwrap_or_else(|| vec!["type1".to_owned(), "type2".to_owned(), "type3".to_owned()]);
    let dfs = names
        .iter()
        .map(|name| match name.as_str() {
            // Per-type comparison tunings; override via typeN_* keys.
            "type1" => Ok(DesignFunctionSpec::TypeI {
                kp: section.type1_kp.unwrap_or(1.0),
            }),
            "type2" => Ok(DesignFunctionSpec::TypeII {
                kp: section.type2_kp.unwrap_or(1.0),
                alpha: section.type2_alpha.unwrap_or(2.0 / 3.0),
            }),
            "type3" => Ok(DesignFunctionSpec::TypeIII {
                kp: section.type3_kp.unwrap_or(DEFAULT_KP),
                ki: section.type3_ki.unwrap_or(DEFAULT_KI),
            }),
            other => Err(CliError::usage(format!("unknown sweep type {other:?}"))),
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(SweepGrid {
        dfs,
        taus: section.taus.clone().unwrap_or(defaults.taus),
        dead_zones: section.dead_zones.clone().unwrap_or(defaults.dead_zones),
        initial_error: section.initial_error.unwrap_or(defaults.initial_error),
        horizon: section.horizon.unwrap_or(defaults.horizon),
        saturation: section.saturation.unwrap_or(defaults.saturation),
        timing: *timing,
        settle_fraction: section.settle_fraction.unwrap_or(defaults.settle_fraction),
    })
}

/// Stand-in for an absent [filter] section: 300 frames at 30 fps around a
/// fixed pose, camera-like noise, one dropped frame in ten.
pub fn default_filter() -> FilterScenario {
    FilterScenario {
        synth: SynthParams {
            true_pose: Pose2::ZERO,
            sigma_pos: 0.013,
            sigma_att: 0.02,
            dropout: 0.1,
            frames: 300,
            frame_dt: 1.0 / 30.0,
        },
        a: DEFAULT_SMOOTHING,
        max_hold: DEFAULT_MAX_HOLD,
    }
}

fn build_filter(section: &FilterSection) -> CliResult<FilterScenario> {
    let fps = section.fps.unwrap_or(30.0);
    if !fps.is_finite() || fps <= 0.0 {
        return Err(CliError::usage(format!("fps must be > 0, got {fps}")));
    }
    let base = default_filter();
    Ok(FilterScenario {
        synth: SynthParams {
            true_pose: Pose2::new(
                section.x.unwrap_or(0.0),
                section.y.unwrap_or(0.0),
                section.theta.unwrap_or(0.0),
            ),
            sigma_pos: section.sigma_pos.unwrap_or(base.synth.sigma_pos),
            sigma_att: section.sigma_att.unwrap_or(base.synth.sigma_att),
            dropout: section.dropout.unwrap_or(base.synth.dropout),
            frames: section.frames.unwrap_or(base.synth.frames),
            frame_dt: 1.0 / fps,
        },
        a: section.a.unwrap_or(base.a),
        max_hold: section.max_hold.unwrap_or(base.max_hold),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn parse(text: &str) -> CliResult<Scenario> {
        parse_scenario(text, &PathBuf::from("test.toml"))
    }

    #[test]
    fn minimal_config_gets_all_defaults() {
        let s = parse("").unwrap();
        assert!(matches!(s.policy, PolicyKind::DesignFunction(_)));
        assert_eq!(s.termination.pos_tolerance, 0.015);
        assert_eq!(s.termination.angle_tolerance, 0.05);
        assert_eq!(s.termination.dwell, 2.0);
        assert_eq!(s.timeout, 30.0);
        assert_eq!(s.timing.controller_period, 0.01);
        assert_eq!(s.timing.plant_dt, 0.001);
        assert_eq!(s.nonlin.dead_zone, 0.0);
        assert_eq!(s.nonlin.saturation, f64::INFINITY);
        assert_eq!(s.initial, Pose2::ZERO);
    }

    #[test]
    fn unknown_keys_are_flagged_with_position() {
        let err = parse("[controller]\ntype = \"type3\"\nkpp = 4.0\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("test.toml"), "{msg}");
        assert!(msg.contains("kpp"), "{msg}");
        assert!(msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn type_mismatch_is_flagged() {
        let err = parse("[initial]\nx = \"half a meter\"\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn missing_required_gains_are_usage_errors() {
        let err = parse("[controller]\ntype = \"type1\"\n").unwrap_err();
        assert!(err.to_string().contains("requires `kp`"), "{err}");
        let err = parse("[controller]\ntype = \"type2\"\nkp = 1.0\n").unwrap_err();
        assert!(err.to_string().contains("requires `alpha`"), "{err}");
    }

    #[test]
    fn irrelevant_gains_are_rejected() {
        let err = parse("[controller]\ntype = \"type1\"\nkp = 1.0\nki = 2.0\n").unwrap_err();
        assert!(err.to_string().contains("does not use `ki`"), "{err}");
        let err =
            parse("[controller]\ntype = \"type3\"\nkp = 4.0\nki = 2.0\nalpha = 0.5\n").unwrap_err();
        assert!(err.to_string().contains("does not use `alpha`"), "{err}");
    }

    #[test]
    fn unknown_controller_type() {
        let err = parse("[controller]\ntype = \"fuzzy\"\n").unwrap_err();
        assert!(err.to_string().contains("unknown controller type"), "{err}");
    }

    #[test]
    fn semantic_violations_carry_the_path() {
        let err = parse("[termination]\npos_tolerance = -0.01\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.starts_with("test.toml:"), "{msg}");
        assert!(msg.contains("pos_tolerance"), "{msg}");

        let err = parse("[nonlinearity]\ndead_zone = 0.4\nsaturation = 0.3\n").unwrap_err();
        assert!(err.to_string().contains("saturation"), "{err}");
    }

    #[test]
    fn type3_clamp_defaults_to_saturation_over_ki() {
        let s = parse(
            "[controller]\ntype = \"type3\"\nkp = 4.0\nki = 2.0\n\
             [nonlinearity]\nsaturation = 0.3\nsaturation_omega = 1.0\n",
        )
        .unwrap();
        let PolicyKind::DesignFunction(config) = s.policy else {
            panic!("expected a design-function policy");
        };
        assert_eq!(config.x.integral_clamp, 0.15);
        assert_eq!(config.theta.integral_clamp, 0.5);
    }

    #[test]
    fn open_loop_section_parses() {
        let s = parse(
            "[controller]\ntype = \"open-loop\"\ncruise_speed = 0.15\nramp_time = 2.0\n\
             [initial]\nx = 0.5\ny = 0.3\n",
        )
        .unwrap();
        assert!(matches!(
            s.policy,
            PolicyKind::OpenLoop {
                cruise_speed: c,
                ramp_time: r,
            } if c == 0.15 && r == 2.0
        ));
        let mut policy = s.build_policy().unwrap();
        // Sanity: the plan moves against the initial error.
        let cmd = policy
            .command(
                &s.initial,
                &tracking_error(&s.initial, &s.desired),
                0.0,
                0.01,
            )
            .unwrap();
        assert!(cmd.vx < 0.0 && cmd.vy < 0.0);
    }

    #[test]
    fn sweep_section_with_custom_grid() {
        let s = parse(
            "[sweep]\ntypes = [\"type1\", \"type3\"]\ntaus = [0.05]\n\
             dead_zones = [0.04, 0.06]\ntype1_kp = 2.0\n",
        )
        .unwrap();
        let grid = s.sweep.unwrap();
        assert_eq!(grid.dfs.len(), 2);
        assert!(
            matches!(grid.dfs[0], DesignFunctionSpec::TypeI { kp } if kp == 2.0),
            "type1_kp override should apply"
        );
        assert!(matches!(
            grid.dfs[1],
            DesignFunctionSpec::TypeIII { kp: 4.0, ki: 2.0 }
        ));
        assert_eq!(grid.taus, vec![0.05]);
        assert_eq!(grid.dead_zones, vec![0.04, 0.06]);
        assert_eq!(grid.horizon, 20.0);
    }

    #[test]
    fn sweep_rejects_unknown_type_name() {
        let err = parse("[sweep]\ntypes = [\"type4\"]\n").unwrap_err();
        assert!(err.to_string().contains("unknown sweep type"), "{err}");
    }

    #[test]
    fn filter_section_defaults() {
        let s = parse("[filter]\nx = 1.2\ny = -0.4\ntheta = 0.3\n").unwrap();
        let f = s.filter.unwrap();
        assert_eq!(f.a, 0.8);
        assert_eq!(f.max_hold, 15);
        assert_eq!(f.synth.frames, 300);
        assert_eq!(f.synth.sigma_pos, 0.013);
        assert!((f.synth.frame_dt - 1.0 / 30.0).abs() < 1e-15);
    }

    #[test]
    fn filter_rejects_bad_smoothing() {
        let err = parse("[filter]\na = 1.5\n").unwrap_err();
        assert!(err.to_string().contains("smoothing factor"), "{err}");
        let err = parse("[filter]\nfps = 0.0\n").unwrap_err();
        assert!(err.to_string().contains("fps"), "{err}");
    }
}
