//! Fixed-precision number output for CSV and JSON reports.

/// Significant digits used in machine-readable output.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to `digits` significant decimal digits. Non-finite values and
/// zero pass through unchanged.
pub fn round_significant(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 || digits == 0 {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

/// Shortest decimal representation of `x` after rounding to
/// [`SIGNIFICANT_DIGITS`].
pub fn format_number(x: f64) -> String {
    let r = round_significant(x, SIGNIFICANT_DIGITS);
    if r == 0.0 {
        // Avoid "-0".
        return "0".to_owned();
    }
    format!("{r}")
}
