//! SPICE numeric literals with SI scale suffixes.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed value '{0}'")]
pub struct MalformedValue(pub String);

/// Suffix table, longest match first. `meg` must precede `m`.
const SUFFIXES: &[(&str, i32)] = &[
    ("meg", 6),
    ("f", -15),
    ("p", -12),
    ("n", -9),
    ("u", -6),
    ("m", -3),
    ("k", 3),
    ("g", 9),
    ("t", 12),
];

/// Parse a numeric token such as `10k`, `2meg`, `100uF` or `1.5e-3`.
///
/// Any alphabetic text after a recognised suffix (or after the number when
/// no suffix matches) is ignored, so `100uF` is `1e-4` and `5V` is `5`.
pub fn parse_value(token: &str) -> Result<f64, MalformedValue> {
    let bytes = token.as_bytes();
    let malformed = || MalformedValue(token.to_string());
    let mut i = 0;
    if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
        i += 1;
    }
    let int_start = i;
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
    }
    let mut digits = i - int_start;
    if i < bytes.len() && bytes[i] == b'.' {
        i += 1;
        let frac_start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        digits += i - frac_start;
    }
    if digits == 0 {
        return Err(malformed());
    }
    let mantissa_end = i;
    let mut exponent: i32 = 0;
    // Exponent only when followed by at least one digit.
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        let exp_start = j;
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        if j > exp_start {
            exponent = token[i + 1..j].parse().map_err(|_| malformed())?;
            i = j;
        }
    }

    let rest = token[i..].to_ascii_lowercase();
    if !rest.chars().all(|c| c.is_ascii_alphabetic()) {
        return Err(malformed());
    }
    let scale = SUFFIXES
        .iter()
        .find(|(s, _)| rest.starts_with(s))
        .map_or(0, |&(_, k)| k);
    // Re-join as one decimal literal so the result is correctly rounded
    // (100u is exactly 1e-4, not 100 * 1e-6).
    format!("{}e{}", &token[..mantissa_end], exponent.saturating_add(scale))
        .parse()
        .map_err(|_| malformed())
}

/// Format a value so that [`parse_value`] reads it back bit-exactly,
/// using an engineering suffix where the exponent allows one.
pub fn format_value(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    // Shortest round-trip digits, then move the decimal point by string
    // manipulation so no arithmetic rounding is introduced.
    let sci = format!("{x:e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let eng = exp.div_euclid(3) * 3;
    let suffix = match eng {
        0 => "",
        6 => "meg",
        _ => match SUFFIXES.iter().find(|&&(s, k)| k == eng && s != "meg") {
            Some(&(s, _)) => s,
            None => return sci,
        },
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mantissa),
    };
    let digits: String = digits.chars().filter(|c| *c != '.').collect();
    let int_len = (exp - eng) as usize + 1;
    let padded = format!("{digits:0<int_len$}");
    let (int_part, frac_part) = padded.split_at(int_len);
    if frac_part.is_empty() {
        format!("{sign}{int_part}{suffix}")
    } else {
        format!("{sign}{int_part}.{frac_part}{suffix}")
    }
}
