//! Exact rational arithmetic: the scalar type carrying every probability,
//! distance and slack value in this crate.

use alloc::string::{String, ToString};
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rat = num_rational::BigRational;

/// Shorthand constructor from machine integers.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// The rational zero.
pub fn zero() -> Rat {
    Rat::zero()
}

/// The rational one.
pub fn one() -> Rat {
    Rat::one()
}

/// `2^-k`, the dyadic tolerances used by bisection.
pub fn dyadic(k: u32) -> Rat {
    Rat::new(BigInt::one(), BigInt::one() << (k as usize))
}

/// True iff `r` lies in the closed unit interval.
pub fn in_unit_interval(r: &Rat) -> bool {
    !r.is_negative() && *r <= Rat::one()
}

/// Error produced when a probability or distance string cannot be read.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRatError {
    text: String,
    reason: &'static str,
}

impl ParseRatError {
    fn new(text: &str, reason: &'static str) -> Self {
        ParseRatError { text: text.to_string(), reason }
    }
}

impl fmt::Display for ParseRatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot parse {:?} as a rational: {}", self.text, self.reason)
    }
}

/// Parses a fraction string `p/q`, an integer `p`, or a finite decimal
/// such as `0.3`, into an exact rational.
pub fn parse_rat(text: &str) -> Result<Rat, ParseRatError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ParseRatError::new(text, "empty string"));
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1i32, rest),
        None => (1i32, s.strip_prefix('+').unwrap_or(s)),
    };
    if body.is_empty() {
        return Err(ParseRatError::new(text, "missing digits"));
    }
    let magnitude = if let Some((num, den)) = body.split_once('/') {
        let num = parse_digits(num).ok_or_else(|| ParseRatError::new(text, "bad numerator"))?;
        let den = parse_digits(den).ok_or_else(|| ParseRatError::new(text, "bad denominator"))?;
        if den.is_zero() {
            return Err(ParseRatError::new(text, "zero denominator"));
        }
        Rat::new(num, den)
    } else if let Some((int_part, frac_part)) = body.split_once('.') {
        let int_digits = if int_part.is_empty() { BigInt::zero() } else {
            parse_digits(int_part).ok_or_else(|| ParseRatError::new(text, "bad integer part"))?
        };
        if frac_part.is_empty() {
            return Err(ParseRatError::new(text, "missing fractional digits"));
        }
        let frac_digits =
            parse_digits(frac_part).ok_or_else(|| ParseRatError::new(text, "bad fractional part"))?;
        let scale = BigInt::from(10u8).pow(frac_part.len() as u32);
        Rat::from_integer(int_digits) + Rat::new(frac_digits, scale)
    } else {
        let n = parse_digits(body).ok_or_else(|| ParseRatError::new(text, "bad digits"))?;
        Rat::from_integer(n)
    };
    Ok(if sign < 0 { -magnitude } else { magnitude })
}

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse::<BigInt>().ok()
}

/// Renders a rational as `p/q`, or plain `p` when the denominator is one.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        let mut s = r.numer().to_string();
        s.push('/');
        s.push_str(&r.denom().to_string());
        s
    }
}
