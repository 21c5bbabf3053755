//! Deterministic grids of single-axis servo runs across actuation
//! imperfections, used to map how each error-shaping law degrades with
//! transport delay and dead-zone width.
//!
//! Every cell is an independent fixed-step simulation, so cells can run on
//! a thread pool; results are collected by grid index and are bitwise
//! identical whatever the worker count.

use crate::controller::{
    AxisConfig, ControlPolicy, ControllerConfig, ServoController,
    DEFAULT_ANGULAR_SEPARATION_THRESHOLD, DEFAULT_SEPARATION_THRESHOLD,
};
use crate::csvfmt::sig9;
use crate::design_function::DesignFunctionSpec;
use crate::error::{Error, Result};
use crate::kinematics::{tracking_error, Pose2};
use crate::plant::{
    simulate_horizon, NonlinearityConfig, SimTiming, DEFAULT_OMEGA_DEAD_ZONE,
    DEFAULT_OMEGA_SATURATION,
};
use rayon::prelude::*;

/// Cartesian sweep: every law against every delay and dead-zone width.
#[derive(Debug, Clone)]
pub struct SweepGrid {
    pub dfs: Vec<DesignFunctionSpec>,
    /// Transport delays, seconds.
    pub taus: Vec<f64>,
    /// Dead-zone half-widths, m/s.
    pub dead_zones: Vec<f64>,
    /// Starting error on the single exercised axis, meters.
    pub initial_error: f64,
    /// Simulated length per cell, seconds.
    pub horizon: f64,
    /// Linear-axis saturation, m/s.
    pub saturation: f64,
    pub timing: SimTiming,
    /// Residuals average over the trailing `1 - settle_fraction` of the run.
    pub settle_fraction: f64,
}

impl SweepGrid {
    pub fn validate(&self) -> Result<()> {
        if self.dfs.is_empty() || self.taus.is_empty() || self.dead_zones.is_empty() {
            return Err(Error::invalid(
                "sweep grid needs at least one law, delay, and dead zone".to_owned(),
            ));
        }
        for df in &self.dfs {
            df.validate()?;
        }
        for &tau in &self.taus {
            if !tau.is_finite() || tau < 0.0 {
                return Err(Error::invalid(format!("sweep tau must be >= 0, got {tau}")));
            }
        }
        for &m in &self.dead_zones {
            if !m.is_finite() || m < 0.0 {
                return Err(Error::invalid(format!(
                    "sweep dead zone must be >= 0, got {m}"
                )));
            }
            if m >= self.saturation {
                return Err(Error::invalid(format!(
                    "sweep dead zone {m} would reach the saturation {}",
                    self.saturation
                )));
            }
        }
        if !self.initial_error.is_finite() || self.initial_error == 0.0 {
            return Err(Error::invalid(format!(
                "initial error must be finite and nonzero, got {}",
                self.initial_error
            )));
        }
        if !self.horizon.is_finite() || self.horizon <= 0.0 {
            return Err(Error::invalid(format!(
                "horizon must be > 0, got {}",
                self.horizon
            )));
        }
        if !self.saturation.is_finite() || self.saturation <= 0.0 {
            return Err(Error::invalid(format!(
                "saturation must be > 0, got {}",
                self.saturation
            )));
        }
        if !(0.0..1.0).contains(&self.settle_fraction) {
            return Err(Error::invalid(format!(
                "settle fraction must be in [0, 1), got {}",
                self.settle_fraction
            )));
        }
        self.timing.validate()
    }
}

impl Default for SweepGrid {
    /// The full comparison grid: three laws, delays 50/75/100 ms, dead
    /// zones 0.04/0.06/0.08 m/s, 0.5 m start, 0.3 m/s saturation.
    fn default() -> SweepGrid {
        SweepGrid {
            dfs: vec![
                DesignFunctionSpec::TypeI { kp: 1.0 },
                DesignFunctionSpec::TypeII {
                    kp: 1.0,
                    alpha: 2.0 / 3.0,
                },
                DesignFunctionSpec::TypeIII { kp: 4.0, ki: 2.0 },
            ],
            taus: vec![0.05, 0.075, 0.1],
            dead_zones: vec![0.04, 0.06, 0.08],
            initial_error: 0.5,
            horizon: 20.0,
            saturation: 0.3,
            timing: SimTiming::default(),
            settle_fraction: 0.8,
        }
    }
}

/// One simulated grid point.
#[derive(Debug, Clone)]
pub struct SweepCell {
    pub df: DesignFunctionSpec,
    pub tau: f64,
    pub dead_zone: f64,
    /// `(t, |e|)` at controller ticks.
    pub series: Vec<(f64, f64)>,
    /// Mean `|e|` over the settling tail.
    pub measured_residual: f64,
    /// The law's own dead-zone prediction.
    pub predicted_residual: f64,
}

fn run_cell(grid: &SweepGrid, df: &DesignFunctionSpec, tau: f64, m: f64) -> Result<SweepCell> {
    let nl = NonlinearityConfig {
        dead_zone: m,
        dead_zone_omega: DEFAULT_OMEGA_DEAD_ZONE,
        saturation: grid.saturation,
        saturation_omega: DEFAULT_OMEGA_SATURATION,
        delay_tau: tau,
    };
    // Bound the integral so its term alone cannot exceed saturation.
    let clamp = match *df {
        DesignFunctionSpec::TypeIII { ki, .. } => grid.saturation / ki,
        _ => f64::INFINITY,
    };
    let config = ControllerConfig {
        x: AxisConfig::new(*df, DEFAULT_SEPARATION_THRESHOLD)?.with_integral_clamp(clamp)?,
        y: AxisConfig::new(*df, DEFAULT_SEPARATION_THRESHOLD)?.with_integral_clamp(clamp)?,
        theta: AxisConfig::new(*df, DEFAULT_ANGULAR_SEPARATION_THRESHOLD)?
            .with_integral_clamp(clamp)?,
    };

    let initial = Pose2::new(grid.initial_error, 0.0, 0.0);
    let desired = Pose2::ZERO;
    let mut policy: Box<dyn ControlPolicy> = Box::new(ServoController::new(
        config,
        &tracking_error(&initial, &desired),
    )?);
    let traj = simulate_horizon(&initial, &desired, policy.as_mut(), &nl, &grid.timing, grid.horizon)?;

    let series: Vec<(f64, f64)> = traj.iter().map(|s| (s.t, s.error.x.abs())).collect();
    let tail_start = grid.settle_fraction * grid.horizon;
    let tail: Vec<f64> = series
        .iter()
        .filter(|(t, _)| *t >= tail_start)
        .map(|(_, e)| *e)
        .collect();
    if tail.is_empty() {
        return Err(Error::InsufficientData {
            required: 1,
            actual: 0,
        });
    }
    Ok(SweepCell {
        df: *df,
        tau,
        dead_zone: m,
        series,
        measured_residual: tail.iter().sum::<f64>() / tail.len() as f64,
        predicted_residual: df.steady_state_error(m)?,
    })
}

/// Runs the whole grid, optionally capping rayon workers. Cell order is
/// `dfs` outermost, then `taus`, then `dead_zones`, independent of the
/// worker count.
pub fn sweep_error_curves(grid: &SweepGrid, threads: Option<usize>) -> Result<Vec<SweepCell>> {
    grid.validate()?;
    let mut points = Vec::new();
    for df in &grid.dfs {
        for &tau in &grid.taus {
            for &m in &grid.dead_zones {
                points.push((df, tau, m));
            }
        }
    }
    let run_all = || {
        points
            .par_iter()
            .map(|&(df, tau, m)| run_cell(grid, df, tau, m))
            .collect::<Result<Vec<SweepCell>>>()
    };
    match threads {
        Some(n) => {
            if n == 0 {
                return Err(Error::invalid("thread cap must be >= 1".to_owned()));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
            pool.install(run_all)
        }
        None => run_all(),
    }
}

/// Short tag used in filenames and summary rows.
pub fn df_tag(df: &DesignFunctionSpec) -> &'static str {
    match df {
        DesignFunctionSpec::TypeI { .. } => "type1",
        DesignFunctionSpec::TypeII { .. } => "type2",
        DesignFunctionSpec::TypeIII { .. } => "type3",
    }
}

/// Serializes one cell's attenuation curve.
pub fn cell_csv(cell: &SweepCell) -> String {
    let mut out = String::from("t,abs_e\n");
    for (t, e) in &cell.series {
        out.push_str(&sig9(*t));
        out.push(',');
        out.push_str(&sig9(*e));
        out.push('\n');
    }
    out
}

/// Serializes the residual summary for the whole grid.
pub fn summary_csv(cells: &[SweepCell]) -> String {
    let mut out = String::from("df,tau,dead_zone,measured_residual,predicted_residual\n");
    for c in cells {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            df_tag(&c.df),
            sig9(c.tau),
            sig9(c.dead_zone),
            sig9(c.measured_residual),
            sig9(c.predicted_residual),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_grid() -> SweepGrid {
        SweepGrid {
            dfs: vec![
                DesignFunctionSpec::TypeI { kp: 1.0 },
                DesignFunctionSpec::TypeIII { kp: 4.0, ki: 2.0 },
            ],
            taus: vec![0.0, 0.05],
            dead_zones: vec![0.06],
            initial_error: 0.5,
            horizon: 12.0,
            saturation: 0.3,
            timing: SimTiming::default(),
            settle_fraction: 0.8,
        }
    }

    #[test]
    fn grid_order_is_row_major() {
        let cells = sweep_error_curves(&small_grid(), Some(2)).unwrap();
        assert_eq!(cells.len(), 4);
        assert_eq!(df_tag(&cells[0].df), "type1");
        assert_eq!(cells[0].tau, 0.0);
        assert_eq!(cells[1].tau, 0.05);
        assert_eq!(df_tag(&cells[2].df), "type3");
    }

    #[test]
    fn residuals_follow_the_law_predictions() {
        let cells = sweep_error_curves(&small_grid(), None).unwrap();
        // Proportional stalls near m/kp; the integral law digs through.
        let t1 = &cells[0];
        assert!(
            (t1.measured_residual - t1.predicted_residual).abs() / t1.predicted_residual < 0.1,
            "type1 residual {} vs predicted {}",
            t1.measured_residual,
            t1.predicted_residual
        );
        let t3 = &cells[2];
        assert!(t3.measured_residual < 0.005, "type3 residual {}", t3.measured_residual);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let grid = small_grid();
        let a = sweep_error_curves(&grid, Some(1)).unwrap();
        let b = sweep_error_curves(&grid, Some(4)).unwrap();
        assert_eq!(summary_csv(&a), summary_csv(&b));
        for (ca, cb) in a.iter().zip(&b) {
            assert_eq!(cell_csv(ca), cell_csv(cb));
        }
    }

    #[test]
    fn grid_validation() {
        let mut g = small_grid();
        g.dead_zones = vec![0.4];
        assert!(sweep_error_curves(&g, None).is_err());
        let mut g = small_grid();
        g.dfs.clear();
        assert!(sweep_error_curves(&g, None).is_err());
        let mut g = small_grid();
        g.settle_fraction = 1.0;
        assert!(sweep_error_curves(&g, None).is_err());
        assert!(sweep_error_curves(&small_grid(), Some(0)).is_err());
    }
}
