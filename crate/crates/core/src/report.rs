//! Number formatting shared by the text reports.

/// Shortest round-trip representation of `x` after rounding to `digits`
/// significant digits. Magnitudes below `1e-4` or from `1e16` up print in
/// exponent form. Non-finite values print as `inf`, `-inf`, `NaN`.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .expect("scientific notation round-trips");
    let mag = rounded.abs();
    if !(1e-4..1e16).contains(&mag) {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    }
}

/// Report formatting: nine significant digits.
pub fn fmt9(x: f64) -> String {
    fmt_sig(x, 9)
}
