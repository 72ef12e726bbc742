//! Number formatting for text reports.

/// Fixed `decimals` places with trailing zeros removed; `-0` prints as `0`.
pub fn trimmed(x: f64, decimals: usize) -> String {
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

/// Six decimals, trimmed.
pub fn num(x: f64) -> String {
    trimmed(x, 6)
}
