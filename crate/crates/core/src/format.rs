//! Stable number formatting for CSV and JSON output.

/// Significant digits kept in machine-readable output.
pub const SIG_DIGITS: usize = 12;

/// Rounds `x` to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .expect("scientific notation round-trips")
}

/// Shortest decimal string for `x` after rounding to [`SIG_DIGITS`].
pub fn fmt_num(x: f64) -> String {
    format!("{}", round_sig(x, SIG_DIGITS))
}

/// `serde_json` number rounded to [`SIG_DIGITS`]; non-finite values map to
/// `null`.
pub fn json_num(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(round_sig(x, SIG_DIGITS))
        .map(serde_json::Value::Number)
        .unwrap_or(serde_json::Value::Null)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_rounding() {
        assert_eq!(round_sig(0.123456789012345, 12), 0.123456789012);
        assert_eq!(round_sig(0.9 - 4e-16, 12), 0.9);
        assert_eq!(fmt_num(0.96), "0.96");
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(0.7 + 0.1), "0.8");
        assert_eq!(json_num(f64::INFINITY), serde_json::Value::Null);
        assert_eq!(json_num(0.25).to_string(), "0.25");
    }
}
