//! Exact scalar arithmetic: arbitrary-precision rationals and Gaussian
//! rationals (complex numbers with rational parts).
//!
//! Everything in [`crate::operator`] runs on these types so that
//! normal-ordering identities can be checked by exact equality. There is no
//! overflow: `BigRational` grows as needed.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Complex scalar with exact rational real and imaginary parts.
pub type GaussRational = Complex<BigRational>;

/// Error for a malformed rational literal.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal `{text}`")]
pub struct RationalParseError {
    pub text: String,
}

/// Shorthand for `num/den` as an exact rational. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as an exact rational.
pub fn integer(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parse `-3`, `7/2`, or `0.25` into an exact rational.
///
/// Decimal literals are converted exactly (`0.25` becomes `1/4`).
/// Denominators must be positive, so `1/-2` is rejected.
pub fn parse_rational(text: &str) -> Result<BigRational, RationalParseError> {
    let err = || RationalParseError {
        text: text.to_owned(),
    };
    let t = text.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = t.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| err())?;
        let den = den.trim();
        if den.starts_with(['+', '-']) {
            return Err(err());
        }
        let den: BigInt = den.parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int_part, frac_part)) = t.split_once('.') {
        let (sign, int_digits) = match int_part.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, int_part.strip_prefix('+').unwrap_or(int_part)),
        };
        if !int_digits.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
            || (int_digits.is_empty() && frac_part.is_empty())
        {
            return Err(err());
        }
        let digits = format!("{int_digits}{frac_part}");
        let numer: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| err())?
        };
        let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
        return Ok(BigRational::new(BigInt::from(sign) * numer, denom));
    }
    let n: BigInt = t.parse().map_err(|_| err())?;
    Ok(BigRational::from_integer(n))
}

/// Render as `p/q`, or just `p` when the value is integral.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest double, `NaN` when out of range (it never is at the sizes used here).
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact conversion of a finite double (every finite double is dyadic).
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// The Gaussian rational `1`.
pub fn gauss_one() -> GaussRational {
    Complex::new(BigRational::one(), BigRational::zero())
}

/// Purely real Gaussian rational.
pub fn gauss_real(r: BigRational) -> GaussRational {
    Complex::new(r, BigRational::zero())
}

/// The Gaussian rational `-i`, the scalar carried by each momentum factor.
pub fn gauss_minus_i() -> GaussRational {
    Complex::new(BigRational::zero(), -BigRational::one())
}

/// Compact rendering: `5/9`, `-2`, `i`, `-i`, `(3/2)i`, `1+2i`, `1/2-(1/3)i`.
pub fn format_gauss(c: &GaussRational) -> String {
    fn imag_unit_part(im: &BigRational) -> String {
        if im.is_one() {
            "i".to_owned()
        } else if (-im).is_one() {
            "-i".to_owned()
        } else if im.is_integer() {
            format!("{}i", im.numer())
        } else if im.is_negative() {
            format!("-({})i", format_rational(&-im))
        } else {
            format!("({})i", format_rational(im))
        }
    }
    if c.im.is_zero() {
        format_rational(&c.re)
    } else if c.re.is_zero() {
        imag_unit_part(&c.im)
    } else {
        let im = imag_unit_part(&c.im.abs());
        let sign = if c.im.is_negative() { '-' } else { '+' };
        format!("{}{}{}", format_rational(&c.re), sign, im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_plain_integers_and_fractions() {
        assert_eq!(parse_rational("-3").unwrap(), integer(-3));
        assert_eq!(parse_rational("7/2").unwrap(), ratio(7, 2));
        assert_eq!(parse_rational("-1/2").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational(" 5 ").unwrap(), integer(5));
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("2.").unwrap(), integer(2));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "x", "1/0", "1/-2", "1.2.3", "--2", "1e3"] {
            assert!(parse_rational(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn formats_round_trip() {
        for text in ["-3", "7/2", "-1/2", "0"] {
            let r = parse_rational(text).unwrap();
            assert_eq!(format_rational(&r), *text);
        }
        // decimals normalize to fractions
        assert_eq!(format_rational(&parse_rational("0.25").unwrap()), "1/4");
    }

    #[test]
    fn gauss_formatting() {
        assert_eq!(format_gauss(&gauss_one()), "1");
        assert_eq!(format_gauss(&gauss_minus_i()), "-i");
        assert_eq!(format_gauss(&gauss_real(ratio(-5, 9))), "-5/9");
        let mixed = GaussRational::new(ratio(1, 2), ratio(-1, 3));
        assert_eq!(format_gauss(&mixed), "1/2-(1/3)i");
        let im_only = GaussRational::new(integer(0), ratio(3, 2));
        assert_eq!(format_gauss(&im_only), "(3/2)i");
        let im_int = GaussRational::new(integer(0), integer(2));
        assert_eq!(format_gauss(&im_int), "2i");
    }
}
