//! Complex literal parsing and formatting.
//!
//! The grammar used by the CLI and all emitted files is `a+bi` / `a-bi`
//! with decimal reals (e.g. `0+0.67i`); pure-imaginary `bi` and pure-real
//! `a` forms are also accepted.

use num_complex::Complex64;

/// Parse a complex literal.
///
/// Accepts `a+bi`, `a-bi`, `bi`, `a`, plus `i`/`-i` shorthands. Reals may
/// carry exponents (`1e-3+2i`).
pub fn parse_complex(input: &str) -> Result<Complex64, String> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty complex literal".into());
    }
    if let Some(body) = s.strip_suffix(['i', 'I']) {
        // Find the sign that splits real and imaginary terms: a '+'/'-'
        // that is neither leading nor part of an exponent.
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            let c = bytes[idx];
            if (c == b'+' || c == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
                split = Some(idx);
                break;
            }
        }
        let (re_str, im_str) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("0", body),
        };
        let re: f64 = re_str
            .parse()
            .map_err(|_| format!("bad real part in {input:?}"))?;
        let im: f64 = match im_str {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other
                .parse()
                .map_err(|_| format!("bad imaginary part in {input:?}"))?,
        };
        Ok(Complex64::new(re, im))
    } else {
        let re: f64 = s
            .parse()
            .map_err(|_| format!("bad real literal {input:?}"))?;
        Ok(Complex64::new(re, 0.0))
    }
}

/// Canonical `a+bi` rendering (always both parts, sign folded into `b`).
pub fn format_complex(z: Complex64) -> String {
    if z.im >= 0.0 || z.im.is_nan() {
        format!("{}+{}i", z.re, z.im)
    } else {
        format!("{}-{}i", z.re, -z.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_form() {
        assert_eq!(parse_complex("0+0.67i").unwrap(), Complex64::new(0.0, 0.67));
        assert_eq!(parse_complex("1.5-2i").unwrap(), Complex64::new(1.5, -2.0));
        assert_eq!(
            parse_complex("-1.25+0.5i").unwrap(),
            Complex64::new(-1.25, 0.5)
        );
    }

    #[test]
    fn parses_short_forms() {
        assert_eq!(parse_complex("0.67i").unwrap(), Complex64::new(0.0, 0.67));
        assert_eq!(parse_complex("-0.9i").unwrap(), Complex64::new(0.0, -0.9));
        assert_eq!(parse_complex("1.92").unwrap(), Complex64::new(1.92, 0.0));
        assert_eq!(parse_complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
    }

    #[test]
    fn parses_exponents() {
        assert_eq!(
            parse_complex("1e-3+2.5e2i").unwrap(),
            Complex64::new(1e-3, 2.5e2)
        );
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_complex("").is_err());
        assert!(parse_complex("1+2j").is_err());
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn round_trips() {
        for z in [
            Complex64::new(0.0, 0.67),
            Complex64::new(-1.4617539, 0.7738876),
            Complex64::new(3.0, 0.0),
            Complex64::new(0.0, -2.0),
        ] {
            assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
        }
    }
}
