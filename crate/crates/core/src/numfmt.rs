/// Plain decimal rendering of `x` with `digits` significant digits.
pub fn sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return format!("{:.*}", digits.saturating_sub(1), 0.0);
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = digits as i64 - 1 - magnitude;
    if decimals >= 0 {
        let out = format!("{:.*}", decimals as usize, x);
        // Rounding can carry into a new leading digit (9.99.. -> 10.0..).
        let carried = out.trim_start_matches('-').split('.').next().unwrap_or("").len() as i64;
        if decimals > 0 && carried > magnitude.max(0) + 1 {
            return format!("{:.*}", (decimals - 1) as usize, x);
        }
        out
    } else {
        format!("{:.*e}", digits - 1, x)
    }
}

#[cfg(test)]
mod tests {
    use super::sig;

    #[test]
    fn significant_digits() {
        assert_eq!(sig(1.781072417990198, 12), "1.78107241799");
        assert_eq!(sig(0.000123456, 3), "0.000123");
        assert_eq!(sig(-2.5, 3), "-2.50");
        assert_eq!(sig(9.9996, 4), "10.00");
        assert_eq!(sig(0.0, 3), "0.00");
    }
}
