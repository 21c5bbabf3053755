//! `analytic`: closed-form error curve plus steady-state prediction for a
//! single design function, straight from command-line gains.

use super::{check_format, emit, write_output};
use crate::errors::{CliError, CliResult, EXIT_OK};
use servobench_core::csvfmt::sig9;
use servobench_core::design_function::DesignFunctionSpec;
use std::io::Write;
use std::path::PathBuf;

#[derive(Debug, clap::Args)]
pub struct AnalyticArgs {
    /// Design function family: type1, type2, or type3.
    #[arg(long = "type")]
    pub kind: String,
    /// Proportional gain (required for type1 and type2).
    #[arg(long)]
    pub kp: Option<f64>,
    /// Integral gain (type3 only).
    #[arg(long)]
    pub ki: Option<f64>,
    /// Power-law exponent in (0, 1) (type2 only).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Initial scalar error, meters.
    #[arg(long, default_value_t = 1.0)]
    pub e0: f64,
    /// Velocity dead zone used for the steady-state trailer, m/s.
    #[arg(long, default_value_t = 0.0)]
    pub m: f64,
    /// Curve length, seconds.
    #[arg(long, default_value_t = 10.0)]
    pub horizon: f64,
    /// Sample spacing, seconds.
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    /// Directory for analytic.csv; the curve always goes to stdout too.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    pub format: String,
}

pub(crate) fn df_from_parts(
    kind: &str,
    kp: Option<f64>,
    ki: Option<f64>,
    alpha: Option<f64>,
) -> CliResult<DesignFunctionSpec> {
    let require = |name: &str, v: Option<f64>| {
        v.ok_or_else(|| CliError::usage(format!("{kind} requires --{name}")))
    };
    let reject = |name: &str, v: Option<f64>| {
        if v.is_some() {
            Err(CliError::usage(format!("{kind} does not use --{name}")))
        } else {
            Ok(())
        }
    };
    let df = match kind {
        "type1" => {
            reject("ki", ki)?;
            reject("alpha", alpha)?;
            DesignFunctionSpec::TypeI {
                kp: require("kp", kp)?,
            }
        }
        "type2" => {
            reject("ki", ki)?;
            DesignFunctionSpec::TypeII {
                kp: require("kp", kp)?,
                alpha: require("alpha", alpha)?,
            }
        }
        "type3" => {
            reject("alpha", alpha)?;
            DesignFunctionSpec::TypeIII {
                kp: require("kp", kp)?,
                ki: require("ki", ki)?,
            }
        }
        other => {
            return Err(CliError::usage(format!(
                "unknown design function type {other:?}; expected type1, type2, or type3"
            )))
        }
    };
    df.validate()?;
    Ok(df)
}

pub fn cmd_analytic(args: &AnalyticArgs, out: &mut dyn Write) -> CliResult<i32> {
    check_format(&args.format)?;
    let df = df_from_parts(&args.kind, args.kp, args.ki, args.alpha)?;
    if !args.horizon.is_finite() || args.horizon < 0.0 {
        return Err(CliError::usage(format!(
            "--horizon must be >= 0, got {}",
            args.horizon
        )));
    }
    if !args.dt.is_finite() || args.dt <= 0.0 {
        return Err(CliError::usage(format!(
            "--dt must be > 0, got {}",
            args.dt
        )));
    }

    // Integer tick count keeps sample times exact across platforms.
    let n = (args.horizon / args.dt + 1e-9).floor() as usize;
    let mut csv = String::from("t,e\n");
    for k in 0..=n {
        let t = k as f64 * args.dt;
        let e = df.closed_form_error(args.e0, t)?;
        csv.push_str(&sig9(t));
        csv.push(',');
        csv.push_str(&sig9(e));
        csv.push('\n');
    }
    let e_ss = df.steady_state_error(args.m)?;

    if let Some(dir) = &args.out {
        write_output(dir, "analytic.csv", csv.as_bytes())?;
    }
    emit(out, &csv)?;
    emit(out, &format!("e_ss={}\n", sig9(e_ss)))?;
    Ok(EXIT_OK)
}
