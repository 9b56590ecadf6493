//! Conversions between big rationals and floating point.
//!
//! Probabilities and deviations are carried as exact `BigRational`s for as
//! long as possible; these helpers do the final lossy step. They stay
//! accurate even when numerator and denominator individually overflow the
//! f64 range (e.g. ratios of binomials at large N).

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Natural log of a positive big integer, accurate to a few ulps.
pub fn ln_bigint(x: &BigInt) -> f64 {
    debug_assert!(x.is_positive());
    let bits = x.bits();
    if bits <= 1000 {
        // comfortably inside f64 range; to_f64 rounds to nearest
        x.to_f64().expect("positive BigInt within f64 range").ln()
    } else {
        // ln(x) = ln(x >> s) + s*ln(2); truncation error is < 2^-511 relative
        let shift = bits - 512;
        let top = x >> shift;
        top.to_f64().expect("512-bit value fits f64").ln() + (shift as f64) * std::f64::consts::LN_2
    }
}

/// Nearest-f64 value of a big rational, robust to huge numerators and
/// denominators. Overflow maps to +/-inf, extreme underflow to 0.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    let num = r.numer().abs();
    let den = r.denom().clone();
    let shift_n = (num.bits() as i64 - 512).max(0);
    let shift_d = (den.bits() as i64 - 512).max(0);
    let nf = (&num >> shift_n as u64).to_f64().expect("<= 512 bits");
    let df = (&den >> shift_d as u64).to_f64().expect("<= 512 bits");
    // scaling by a power of two is exact until it over/underflows
    sign * (nf / df) * 2f64.powi((shift_n - shift_d) as i32)
}

/// Natural log of a non-negative rational; zero maps to -inf.
pub fn ln_ratio(r: &BigRational) -> f64 {
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    debug_assert!(r.is_positive());
    ln_bigint(r.numer()) - ln_bigint(r.denom())
}

/// Canonical `num/den` rendering (denominator always positive, lowest terms).
pub fn format_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `a/b`, a plain integer, or a decimal like `0.125` into an exact
/// rational. Decimals are read digit-exactly (base 10), not via f64.
pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let bad = || Error::ParseRational(s.to_string());
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let (sign, int_digits) = match int_part.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, int_part.strip_prefix('+').unwrap_or(int_part)),
        };
        if !int_digits.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
            || (int_digits.is_empty() && frac_part.is_empty())
        {
            return Err(bad());
        }
        let digits = format!("{int_digits}{frac_part}");
        let num: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| bad())?
        };
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        return Ok(BigRational::new(BigInt::from(sign) * num, den));
    }
    let num: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(num))
}
