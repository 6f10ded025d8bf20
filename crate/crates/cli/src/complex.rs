//! Parsing and printing of complex numbers in `a+bi` form.

use num_complex::Complex64;

/// Parses `a`, `bi`, `i`, `a+bi`, `a-bi` (exponents allowed in either part).
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse complex number '{text}' (expected a+bi)");
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split =
        (1..bytes.len()).rev().find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    let re = re.parse::<f64>().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

/// Formats `v` with `digits` significant digits, trailing zeros removed.
pub fn format_real(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, v))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// `a+bi` or `a-bi`.
pub fn format_complex(z: Complex64, digits: usize) -> String {
    let re = format_real(z.re, digits);
    let im = format_real(z.im.abs(), digits);
    let sign = if z.im.is_sign_negative() && z.im != 0.0 { '-' } else { '+' };
    format!("{re}{sign}{im}i")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        assert_eq!(parse_complex("5").unwrap(), Complex64::new(5.0, 0.0));
        assert_eq!(parse_complex("2+1i").unwrap(), Complex64::new(2.0, 1.0));
        assert_eq!(parse_complex("2-i").unwrap(), Complex64::new(2.0, -1.0));
        assert_eq!(parse_complex("-3.5i").unwrap(), Complex64::new(0.0, -3.5));
        assert_eq!(parse_complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(parse_complex("1e-3-2e+2i").unwrap(), Complex64::new(1e-3, -200.0));
        assert_eq!(parse_complex(" -1 + 2i ").unwrap(), Complex64::new(-1.0, 2.0));
        assert_eq!(parse_complex("-2e3").unwrap(), Complex64::new(-2000.0, 0.0));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "abc", "1+2", "1+xi", "++1i"] {
            assert!(parse_complex(s).is_err(), "{s}");
        }
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_real(23.999999999999996, 10), "24");
        assert_eq!(format_real(1.6449340668482264, 10), "1.644934067");
        assert_eq!(format_real(1.6449340668482264, 4), "1.645");
        assert_eq!(format_real(-0.000123456789, 3), "-0.000123");
        assert_eq!(format_real(1.5e-9, 10), "1.5e-9");
        assert_eq!(format_real(6.02e23, 10), "6.02e23");
        assert_eq!(format_complex(Complex64::new(24.0, 0.0), 10), "24+0i");
        assert_eq!(format_complex(Complex64::new(1.0, -0.5), 10), "1-0.5i");
    }

    #[test]
    fn round_trip() {
        let z = Complex64::new(-0.123456789, 98765.4321);
        assert_eq!(parse_complex(&format_complex(z, 17)).unwrap(), z);
    }
}
