//! Shared numeric text formatting for CSV and report output.

/// `%.9e`-style formatting: nine fractional digits, sign on the
/// exponent, exponent padded to two digits. Deterministic across runs
/// and platforms for finite doubles.
pub fn format_exp9(v: f64) -> String {
    let raw = format!("{:.9e}", v);
    match raw.split_once('e') {
        Some((mantissa, exp)) => {
            let e: i32 = exp.parse().unwrap_or(0);
            let sign = if e < 0 { '-' } else { '+' };
            format!("{mantissa}e{sign}{:02}", e.abs())
        }
        None => raw,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_c_printf_style() {
        assert_eq!(format_exp9(2.0e-5), "2.000000000e-05");
        assert_eq!(format_exp9(-1.5), "-1.500000000e+00");
        assert_eq!(format_exp9(0.0), "0.000000000e+00");
        assert_eq!(format_exp9(3.14159265358979e12), "3.141592654e+12");
        assert_eq!(format_exp9(1e-123), "1.000000000e-123");
    }
}
