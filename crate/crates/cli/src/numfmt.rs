//! Locale-independent number formatting for report files.

/// Twelve significant digits in scientific notation, e.g. `3.14159265359e0`.
pub fn sig(x: f64) -> String {
    let s = format!("{x:.11e}");
    match s.strip_prefix('-') {
        Some(rest) if x == 0.0 => rest.to_string(),
        _ => s,
    }
}

/// Twelve decimals, used for the family parameter `v`.
pub fn fixed(x: f64) -> String {
    let s = format!("{x:.12}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        assert_eq!(sig(std::f64::consts::PI), "3.14159265359e0");
        assert_eq!(sig(-0.0), "0.00000000000e0");
        assert_eq!(sig(-2.5e-7), "-2.50000000000e-7");
        assert_eq!(fixed(0.0), "0.000000000000");
        assert_eq!(fixed(-1e-14), "0.000000000000");
        assert_eq!(fixed(-1.25), "-1.250000000000");
        assert_eq!(fixed(1.1569337787252438), "1.156933778725");
    }
}
