use num_rational::Ratio;

use super::{Ext, Rational};
use crate::error::{FioError, Result};

fn bad(s: &str) -> FioError {
    FioError::InvalidExponent(format!("cannot read {s:?} as an exact rational"))
}

fn integer(s: &str) -> Result<i128> {
    s.parse::<i128>().map_err(|_| bad(s))
}

/// Reads `"3"`, `"-3/2"` or a terminating decimal such as `"0.75"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if let Some((a, b)) = t.split_once('/') {
        let den = integer(b.trim())?;
        if den == 0 {
            return Err(bad(s));
        }
        return Ok(Ratio::new(integer(a.trim())?, den));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) || frac.len() > 30 {
            return Err(bad(s));
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        let w = if whole_digits.is_empty() {
            0
        } else {
            integer(whole_digits)?
        };
        let scale = 10i128.pow(frac.len() as u32);
        let f = integer(frac)?;
        let mag = Ratio::new(w * scale + f, scale);
        return Ok(if negative { -mag } else { mag });
    }
    Ok(Ratio::from_integer(integer(t)?))
}

/// Reads an extended exponent: a rational or `inf`.
pub fn parse_exponent(s: &str) -> Result<Ext<Rational>> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" | "∞" => Ok(Ext::Infinite),
        _ => Ok(Ext::Finite(parse_rational(s)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!(parse_rational("3/2").unwrap(), Ratio::new(3, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), Ratio::new(-1, 4));
        assert_eq!(parse_rational(".5").unwrap(), Ratio::new(1, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), Ratio::from_integer(7));
        assert_eq!(parse_exponent("inf").unwrap(), Ext::Infinite);
        assert_eq!(parse_exponent("∞").unwrap(), Ext::Infinite);
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.").is_err());
    }
}
