//! Deterministic number formatting for CSV output.

/// Formats `v` with 17 significant digits in scientific notation, which
/// round-trips every finite `f64`.
pub fn sig17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Joins values into one CSV row using [`sig17`].
pub fn row(values: &[f64]) -> String {
    values.iter().map(|v| sig17(*v)).collect::<Vec<_>>().join(",")
}
