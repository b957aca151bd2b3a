//! Small numeric helpers shared across matching and ranking.

/// MinMax-normalize a slice onto `[0, 1]`.
///
/// The degenerate case (all values equal) maps everything to 1.0 when the
/// shared value is positive and to 0.0 otherwise, so a single strong
/// candidate keeps its full weight while an all-zero pool stays at zero.
pub fn min_max_normalize(values: &[f64]) -> Vec<f64> {
    if values.is_empty() {
        return Vec::new();
    }
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &v in values {
        min = min.min(v);
        max = max.max(v);
    }
    if max - min <= 0.0 {
        let fill = if max > 0.0 { 1.0 } else { 0.0 };
        return vec![fill; values.len()];
    }
    let span = max - min;
    values.iter().map(|&v| (v - min) / span).collect()
}
