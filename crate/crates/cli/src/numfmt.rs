//! Fixed-width number text for CSV cells.

/// Nine significant digits with trailing zeros kept (C's `%#.9g` minus a bare
/// trailing point):
/// `10` is `10.0000000`, `0` is `0.00000000`, `1e-5` is `1.00000000e-05`.
pub fn sig9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0.00000000".into();
    }
    // The exponent after rounding to 9 digits decides the layout.
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        format!("{x:.*}", (8 - exp) as usize)
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::sig9;

    #[test]
    fn fixed_range() {
        assert_eq!(sig9(10.0), "10.0000000");
        assert_eq!(sig9(0.0), "0.00000000");
        assert_eq!(sig9(-0.0), "0.00000000");
        assert_eq!(sig9(-1e-3), "-0.00100000000");
        assert_eq!(sig9(123456789.0), "123456789");
        assert_eq!(sig9(0.5), "0.500000000");
    }

    #[test]
    fn exponent_range() {
        assert_eq!(sig9(1e-5), "1.00000000e-05");
        assert_eq!(sig9(1e9), "1.00000000e+09");
        assert_eq!(sig9(-2.5e-12), "-2.50000000e-12");
        assert_eq!(sig9(1e100), "1.00000000e+100");
    }

    #[test]
    fn rounding_crosses_a_decade() {
        assert_eq!(sig9(9.9999999999), "10.0000000");
        assert_eq!(sig9(0.000099999999999), "0.000100000000");
    }

    #[test]
    fn parses_back_to_nine_digits() {
        for x in [std::f64::consts::PI, -1234.5678e-7, 6.02214076e23, 1.0 / 3.0] {
            let y: f64 = sig9(x).parse().unwrap();
            assert!((x - y).abs() <= 5e-9 * x.abs());
        }
    }
}
