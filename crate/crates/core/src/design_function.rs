//! Scalar error-shaping laws.
//!
//! The control layer reduces each chassis axis to a scalar error `e` whose
//! commanded rate is `e' = f(e)`. Three shapes of `f` are supported, each
//! with a closed-form trajectory used to validate the numeric loop, and a
//! prediction of the residual error left by an actuator dead zone of
//! half-width `m`:
//!
//! | law      | f(e)                          | dead-zone residual  |
//! |----------|-------------------------------|---------------------|
//! | type I   | `-kp * e`                     | `m / kp`            |
//! | type II  | `-kp * sign(e) * |e|^alpha`   | `(m / kp)^(1/alpha)`|
//! | type III | `-kp * e - ki * integral(e)`  | `0`                 |
//!
//! Type II (`0 < alpha < 1`) reaches zero in finite time
//! `t* = |e0|^(1-alpha) / ((1-alpha) * kp)` and stays there. Type III is
//! second order; its two modes come from `l^2 + kp*l + ki = 0` and must be
//! distinct for the closed form used here.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Parameters of one scalar error-shaping law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DesignFunctionSpec {
    /// Proportional: exponential decay, finite dead-zone residual.
    TypeI { kp: f64 },
    /// Fractional power: finite-time extinction, shrunken residual.
    TypeII { kp: f64, alpha: f64 },
    /// Proportional-integral: overshoots once, no residual.
    TypeIII { kp: f64, ki: f64 },
}

/// Scalar loop state carried between controller ticks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarErrorState {
    /// Current error.
    pub e: f64,
    /// Accumulated integral of the error (only type III reads it).
    pub integral: f64,
    /// Error at loop start, kept for normalized reporting.
    pub e0: f64,
}

impl ScalarErrorState {
    pub fn initial(e0: f64) -> ScalarErrorState {
        ScalarErrorState {
            e: e0,
            integral: 0.0,
            e0,
        }
    }
}

/// The two modes of the type III error dynamics, `lambda_1` being the one
/// with the more negative real part (they are complex conjugates when
/// `kp^2 < 4 ki`, with `lambda_1` taking the negative imaginary part).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Type3Modes {
    pub lambda_1: Complex64,
    pub lambda_2: Complex64,
}

impl DesignFunctionSpec {
    pub fn type_i(kp: f64) -> Result<DesignFunctionSpec> {
        let spec = DesignFunctionSpec::TypeI { kp };
        spec.validate()?;
        Ok(spec)
    }

    pub fn type_ii(kp: f64, alpha: f64) -> Result<DesignFunctionSpec> {
        let spec = DesignFunctionSpec::TypeII { kp, alpha };
        spec.validate()?;
        Ok(spec)
    }

    pub fn type_iii(kp: f64, ki: f64) -> Result<DesignFunctionSpec> {
        let spec = DesignFunctionSpec::TypeIII { kp, ki };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks the parameter domain; deserialized specs must pass through
    /// here before use.
    pub fn validate(&self) -> Result<()> {
        let finite_positive = |name: &str, v: f64| -> Result<()> {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::invalid(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
            Ok(())
        };
        match *self {
            DesignFunctionSpec::TypeI { kp } => finite_positive("kp", kp),
            DesignFunctionSpec::TypeII { kp, alpha } => {
                finite_positive("kp", kp)?;
                if !alpha.is_finite() || alpha <= 0.0 || alpha >= 1.0 {
                    return Err(Error::invalid(format!(
                        "alpha must lie strictly between 0 and 1, got {alpha}"
                    )));
                }
                Ok(())
            }
            DesignFunctionSpec::TypeIII { kp, ki } => {
                finite_positive("kp", kp)?;
                finite_positive("ki", ki)?;
                // A repeated mode needs a (t*exp) closed form this crate
                // does not carry; reject instead of silently mispredicting.
                type3_modes(kp, ki).map(|_| ())
            }
        }
    }

    /// True when the law integrates the error (and therefore needs
    /// anti-windup handling in the loop).
    pub fn uses_integral(&self) -> bool {
        matches!(self, DesignFunctionSpec::TypeIII { .. })
    }

    /// Evaluates `f` on the current scalar state.
    pub fn df_value(&self, state: &ScalarErrorState) -> f64 {
        match *self {
            DesignFunctionSpec::TypeI { kp } => -kp * state.e,
            DesignFunctionSpec::TypeII { kp, alpha } => {
                if state.e == 0.0 {
                    0.0
                } else {
                    -kp * state.e.signum() * state.e.abs().powf(alpha)
                }
            }
            DesignFunctionSpec::TypeIII { kp, ki } => -kp * state.e - ki * state.integral,
        }
    }

    /// Error at time `t >= 0` for the ideal continuous loop started at `e0`
    /// with zero integral.
    pub fn closed_form_error(&self, e0: f64, t: f64) -> Result<f64> {
        if !e0.is_finite() {
            return Err(Error::NonFinite {
                context: "closed_form_error: e0",
            });
        }
        if !t.is_finite() || t < 0.0 {
            return Err(Error::invalid(format!("time must be >= 0, got {t}")));
        }
        self.validate()?;
        Ok(match *self {
            DesignFunctionSpec::TypeI { kp } => e0 * (-kp * t).exp(),
            DesignFunctionSpec::TypeII { kp, alpha } => {
                // |e|^(1-alpha) decays linearly and pins at zero.
                let shrunk = e0.abs().powf(1.0 - alpha) - (1.0 - alpha) * kp * t;
                if shrunk <= 0.0 {
                    0.0
                } else {
                    e0.signum() * shrunk.powf(1.0 / (1.0 - alpha))
                }
            }
            DesignFunctionSpec::TypeIII { kp, ki } => {
                let Type3Modes { lambda_1, lambda_2 } = type3_modes(kp, ki)?;
                let num = -lambda_1 * (lambda_1 * t).exp() + lambda_2 * (lambda_2 * t).exp();
                // Conjugate modes leave only rounding in the imaginary part.
                (e0 * num / (lambda_2 - lambda_1)).re
            }
        })
    }

    /// Residual error once the loop stalls against an actuator dead zone of
    /// half-width `m >= 0`.
    pub fn steady_state_error(&self, dead_zone: f64) -> Result<f64> {
        if !dead_zone.is_finite() || dead_zone < 0.0 {
            return Err(Error::invalid(format!(
                "dead zone half-width must be >= 0, got {dead_zone}"
            )));
        }
        self.validate()?;
        Ok(match *self {
            DesignFunctionSpec::TypeI { kp } => dead_zone / kp,
            DesignFunctionSpec::TypeII { kp, alpha } => (dead_zone / kp).powf(1.0 / alpha),
            DesignFunctionSpec::TypeIII { .. } => 0.0,
        })
    }
}

/// Roots of `l^2 + kp*l + ki = 0`, ordered by real part (most negative
/// first). Fails with [`Error::UnsupportedConfiguration`] on a repeated
/// root (`kp^2 == 4 ki`).
pub fn type3_modes(kp: f64, ki: f64) -> Result<Type3Modes> {
    if !kp.is_finite() || !ki.is_finite() {
        return Err(Error::NonFinite {
            context: "type3_modes: gains",
        });
    }
    let disc = kp * kp - 4.0 * ki;
    if disc == 0.0 {
        return Err(Error::UnsupportedConfiguration(format!(
            "kp^2 == 4*ki (kp = {kp}, ki = {ki}) gives a repeated mode"
        )));
    }
    let root = Complex64::new(disc, 0.0).sqrt();
    Ok(Type3Modes {
        lambda_1: (Complex64::new(-kp, 0.0) - root) / 2.0,
        lambda_2: (Complex64::new(-kp, 0.0) + root) / 2.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    /// Reference integration of `e' = f(e)` (with the type III integral as
    /// a second state) on a fine RK4 grid; deliberately re-states the laws
    /// instead of calling `df_value`.
    fn ode_error(spec: &DesignFunctionSpec, e0: f64, t_end: f64, n: usize) -> f64 {
        let h = t_end / n as f64;
        let f = |e: f64, integ: f64| -> (f64, f64) {
            let de = match *spec {
                DesignFunctionSpec::TypeI { kp } => -kp * e,
                DesignFunctionSpec::TypeII { kp, alpha } => {
                    if e == 0.0 {
                        0.0
                    } else {
                        -kp * e.signum() * e.abs().powf(alpha)
                    }
                }
                DesignFunctionSpec::TypeIII { kp, ki } => -kp * e - ki * integ,
            };
            (de, e)
        };
        let (mut e, mut integ) = (e0, 0.0);
        for _ in 0..n {
            let k1 = f(e, integ);
            let k2 = f(e + h / 2.0 * k1.0, integ + h / 2.0 * k1.1);
            let k3 = f(e + h / 2.0 * k2.0, integ + h / 2.0 * k2.1);
            let k4 = f(e + h * k3.0, integ + h * k3.1);
            e += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
            integ += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        }
        e
    }

    /// Relative difference with a floor so comparisons stay meaningful when
    /// the trajectory passes through zero.
    fn rel_err(got: f64, want: f64, scale: f64) -> f64 {
        (got - want).abs() / want.abs().max(1e-3 * scale.abs())
    }

    #[test]
    fn type1_closed_form_is_exponential() {
        let spec = DesignFunctionSpec::type_i(1.0).unwrap();
        let e = spec.closed_form_error(1.0, 1.0).unwrap();
        assert_relative_eq!(e, (-1.0_f64).exp(), max_relative = 1e-15);
        assert_eq!(spec.closed_form_error(1.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn type2_closed_form_has_finite_extinction() {
        // kp = 1, alpha = 2/3: e(t) = (1 - t/3)^3 for e0 = 1, gone at t = 3.
        let spec = DesignFunctionSpec::type_ii(1.0, 2.0 / 3.0).unwrap();
        let e = spec.closed_form_error(1.0, 1.0).unwrap();
        assert_relative_eq!(e, 8.0 / 27.0, max_relative = 1e-12);
        assert_eq!(spec.closed_form_error(1.0, 3.0).unwrap(), 0.0);
        assert_eq!(spec.closed_form_error(1.0, 4.0).unwrap(), 0.0);
        // Odd in e0.
        let neg = spec.closed_form_error(-1.0, 1.0).unwrap();
        assert_relative_eq!(neg, -8.0 / 27.0, max_relative = 1e-12);
    }

    #[test]
    fn type3_closed_form_crosses_zero_once() {
        let spec = DesignFunctionSpec::type_iii(4.0, 2.0).unwrap();
        // Hand expansion with modes -2 +/- sqrt(2) puts the response near
        // -7.6% of e0 at t = 1 (single undershoot).
        let e = spec.closed_form_error(1.0, 1.0).unwrap();
        assert_abs_diff_eq!(e, -0.0756, epsilon = 5e-4);
        assert_eq!(spec.closed_form_error(1.0, 0.0).unwrap(), 1.0);
        // Decayed to nothing well inside the session horizon.
        assert!(spec.closed_form_error(1.0, 15.0).unwrap().abs() < 1e-3);
    }

    #[test]
    fn closed_forms_match_reference_integration() {
        let cases: Vec<(DesignFunctionSpec, f64)> = vec![
            (DesignFunctionSpec::type_i(0.5).unwrap(), 1.0),
            (DesignFunctionSpec::type_i(4.0).unwrap(), -0.3),
            (DesignFunctionSpec::type_ii(1.0, 2.0 / 3.0).unwrap(), 0.5),
            (DesignFunctionSpec::type_ii(2.0, 0.5).unwrap(), -0.8),
            (DesignFunctionSpec::type_iii(4.0, 2.0).unwrap(), 0.5),
            (DesignFunctionSpec::type_iii(1.0, 1.0).unwrap(), 1.0),
            (DesignFunctionSpec::type_iii(0.8, 3.0).unwrap(), -0.6),
        ];
        for (spec, e0) in cases {
            for t in [0.3, 1.0, 2.7, 6.0] {
                let want = ode_error(&spec, e0, t, 60_000);
                let got = spec.closed_form_error(e0, t).unwrap();
                // The reference integrator itself wobbles a few 1e-9 around
                // the type II extinction point, so do not ask for more.
                assert!(
                    rel_err(got, want, e0) < 1e-5,
                    "{spec:?} e0={e0} t={t}: closed {got} vs ode {want}"
                );
            }
        }
    }

    #[test]
    fn df_values_match_hand_calc() {
        let s = ScalarErrorState::initial(0.2);
        assert_eq!(DesignFunctionSpec::type_i(4.0).unwrap().df_value(&s), -0.8);

        let t2 = DesignFunctionSpec::type_ii(1.0, 2.0 / 3.0).unwrap();
        let s25 = ScalarErrorState::initial(0.25);
        // 0.25^(2/3) = 2^(-4/3)
        assert_relative_eq!(
            t2.df_value(&s25),
            -(2.0_f64.powf(-4.0 / 3.0)),
            max_relative = 1e-12
        );
        assert_eq!(t2.df_value(&ScalarErrorState::initial(0.0)), 0.0);
        let neg = t2.df_value(&ScalarErrorState::initial(-0.25));
        assert_eq!(neg, -t2.df_value(&s25));

        let t3 = DesignFunctionSpec::type_iii(4.0, 2.0).unwrap();
        let state = ScalarErrorState {
            e: 0.1,
            integral: 0.05,
            e0: 0.5,
        };
        assert_relative_eq!(t3.df_value(&state), -0.5, max_relative = 1e-15);
    }

    #[test]
    fn steady_state_predictions() {
        let t1 = DesignFunctionSpec::type_i(1.0).unwrap();
        assert_eq!(t1.steady_state_error(0.05).unwrap(), 0.05);
        assert_eq!(t1.steady_state_error(0.0).unwrap(), 0.0);

        let t2 = DesignFunctionSpec::type_ii(1.0, 2.0 / 3.0).unwrap();
        // 0.04^1.5 = 0.008 exactly; 0.05^1.5 and 0.08^1.5 by calculator.
        assert_relative_eq!(t2.steady_state_error(0.04).unwrap(), 0.008, max_relative = 1e-12);
        assert_relative_eq!(
            t2.steady_state_error(0.05).unwrap(),
            0.011180339887498949,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            t2.steady_state_error(0.08).unwrap(),
            0.022627416997969522,
            max_relative = 1e-12
        );

        let t3 = DesignFunctionSpec::type_iii(4.0, 2.0).unwrap();
        assert_eq!(t3.steady_state_error(0.08).unwrap(), 0.0);

        assert!(t1.steady_state_error(-0.01).is_err());
    }

    #[test]
    fn shrinking_power_beats_proportional_residual() {
        // Same kp, m < kp: the fractional law leaves less residual.
        let t1 = DesignFunctionSpec::type_i(1.0).unwrap();
        let t2 = DesignFunctionSpec::type_ii(1.0, 2.0 / 3.0).unwrap();
        for m in [0.04, 0.05, 0.06, 0.08] {
            assert!(
                t2.steady_state_error(m).unwrap() < t1.steady_state_error(m).unwrap(),
                "m = {m}"
            );
        }
    }

    #[test]
    fn modes_of_the_pi_law() {
        let m = type3_modes(4.0, 2.0).unwrap();
        assert_relative_eq!(m.lambda_1.re, -2.0 - 2.0_f64.sqrt(), max_relative = 1e-15);
        assert_eq!(m.lambda_1.im, 0.0);
        assert_relative_eq!(m.lambda_2.re, -2.0 + 2.0_f64.sqrt(), max_relative = 1e-15);

        let c = type3_modes(1.0, 1.0).unwrap();
        assert_relative_eq!(c.lambda_1.re, -0.5, max_relative = 1e-15);
        assert_relative_eq!(c.lambda_1.im, -(3.0_f64.sqrt()) / 2.0, max_relative = 1e-15);
        assert_eq!(c.lambda_2, c.lambda_1.conj());

        // Repeated root is refused, and so is a law carrying it.
        assert!(matches!(
            type3_modes(2.0, 1.0),
            Err(Error::UnsupportedConfiguration(_))
        ));
        assert!(DesignFunctionSpec::type_iii(2.0, 1.0).is_err());
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(DesignFunctionSpec::type_i(0.0).is_err());
        assert!(DesignFunctionSpec::type_i(-1.0).is_err());
        assert!(DesignFunctionSpec::type_i(f64::NAN).is_err());
        assert!(DesignFunctionSpec::type_ii(1.0, 0.0).is_err());
        assert!(DesignFunctionSpec::type_ii(1.0, 1.0).is_err());
        assert!(DesignFunctionSpec::type_ii(1.0, 1.3).is_err());
        assert!(DesignFunctionSpec::type_iii(1.0, 0.0).is_err());
        assert!(DesignFunctionSpec::type_ii(1.0, 0.5).is_ok());
    }

    proptest! {
        #[test]
        fn closed_forms_decay_and_stay_odd(
            kp in 0.2f64..5.0,
            e0 in 0.05f64..2.0,
            t in 0.0f64..8.0,
        ) {
            for spec in [
                DesignFunctionSpec::type_i(kp).unwrap(),
                DesignFunctionSpec::type_ii(kp, 2.0 / 3.0).unwrap(),
            ] {
                let e = spec.closed_form_error(e0, t).unwrap();
                // Monotone laws never overshoot or grow.
                prop_assert!((0.0..=e0).contains(&e));
                let mirrored = spec.closed_form_error(-e0, t).unwrap();
                prop_assert_eq!(mirrored, -e);
            }
        }

        #[test]
        fn type2_extinction_is_exact(
            kp in 0.2f64..5.0,
            alpha in 0.2f64..0.9,
            e0 in 0.05f64..2.0,
        ) {
            let spec = DesignFunctionSpec::type_ii(kp, alpha).unwrap();
            let t_star = e0.powf(1.0 - alpha) / ((1.0 - alpha) * kp);
            prop_assert_eq!(spec.closed_form_error(e0, t_star * 1.0001).unwrap(), 0.0);
            prop_assert!(spec.closed_form_error(e0, t_star * 0.99).unwrap() > 0.0);
        }

        #[test]
        fn residual_grows_with_dead_zone(
            kp in 0.2f64..5.0,
            m_lo in 0.0f64..0.1,
            bump in 0.001f64..0.1,
        ) {
            for spec in [
                DesignFunctionSpec::type_i(kp).unwrap(),
                DesignFunctionSpec::type_ii(kp, 0.5).unwrap(),
            ] {
                let lo = spec.steady_state_error(m_lo).unwrap();
                let hi = spec.steady_state_error(m_lo + bump).unwrap();
                prop_assert!(hi > lo);
            }
        }
    }
}
