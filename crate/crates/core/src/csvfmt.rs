//! Numeric formatting for emitted CSV.
//!
//! Values are printed in fixed decimal with nine significant digits so that
//! identical runs serialize to identical bytes on any IEEE-754 platform.
//! Scientific notation is avoided because downstream plotting scripts choke
//! on it.

/// Formats `v` with `max(0, 8 - floor(log10 |v|))` decimal places, which
/// keeps nine significant digits through the magnitudes this crate emits.
/// Zero (either sign) prints as `0.00000000`.
pub fn sig9(v: f64) -> String {
    debug_assert!(v.is_finite(), "refusing to serialize {v}");
    if v == 0.0 {
        return "0.00000000".to_owned();
    }
    let exp = v.abs().log10().floor() as i32;
    let decimals = (8 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits_across_magnitudes() {
        assert_eq!(sig9(0.0), "0.00000000");
        assert_eq!(sig9(-0.0), "0.00000000");
        assert_eq!(sig9(1.0), "1.00000000");
        assert_eq!(sig9(-1.0), "-1.00000000");
        assert_eq!(sig9(0.015), "0.0150000000");
        assert_eq!(sig9(-0.015), "-0.0150000000");
        assert_eq!(sig9(0.1234), "0.123400000");
        assert_eq!(sig9(123.456), "123.456000");
        assert_eq!(sig9(1234.5678), "1234.56780");
        assert_eq!(sig9(1e-4), "0.000100000000");
        assert_eq!(sig9(3.0e9), "3000000000");
    }

    #[test]
    fn rounding_is_stable() {
        assert_eq!(sig9(0.1), "0.100000000");
        assert_eq!(sig9(2.0 / 3.0), "0.666666667");
        assert_eq!(sig9(1.0 / 3.0), "0.333333333");
    }
}
