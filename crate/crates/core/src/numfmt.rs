//! Fixed-significance decimal formatting shared by the text file formats.

/// Formats `v` with `digits` significant digits, dropping trailing zeros.
///
/// Plain decimal notation is used for exponents in `[-5, digits)`, scientific
/// notation otherwise. `-0.0` prints as `0`.
pub fn format_sig(v: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        return format!("{}e{}", trim_zeros(mantissa), exp);
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, v)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(format_sig(0.0, 12), "0");
        assert_eq!(format_sig(-0.0, 12), "0");
        assert_eq!(format_sig(1.0, 12), "1");
        assert_eq!(format_sig(-1.0, 17), "-1");
        assert_eq!(format_sig(0.5, 12), "0.5");
        assert_eq!(format_sig(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(format_sig(2.0 / 3.0, 12), "0.666666666667");
        assert_eq!(format_sig(0.3, 17), "0.29999999999999999");
        assert_eq!(format_sig(-2.5, 17), "-2.5");
        assert_eq!(format_sig(1e-9, 12), "1e-9");
        assert_eq!(format_sig(123.25, 12), "123.25");
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for &v in &[0.1, 1.0 / 7.0, -0.987654321012345, 3.0e-7, 12345.678901234567] {
            let s = format_sig(v, 17);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
    }
}
