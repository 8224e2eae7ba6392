//! Exact rational scalars.
//!
//! Every exact computation in this crate is generic over the integer type
//! backing [`Ratio`]: `BigInt` for arbitrary inputs, fixed-width integers
//! when the caller knows the denominators stay small (exhaustive checks over
//! short paths run an order of magnitude faster on `i64`).

use std::fmt::{Debug, Display};

use num_bigint::{BigInt, ToBigInt};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational.
pub type Rational = Ratio<BigInt>;

/// Integer types usable as the backing store of exact probabilities.
pub trait ExactInt:
    Integer
    + Signed
    + Clone
    + From<u32>
    + ToPrimitive
    + ToBigInt
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
}

impl<T> ExactInt for T where
    T: Integer
        + Signed
        + Clone
        + From<u32>
        + ToPrimitive
        + ToBigInt
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

#[inline]
pub fn int<T: ExactInt>(n: u64) -> Ratio<T> {
    let hi = (n >> 32) as u32;
    let lo = n as u32;
    let v = if hi == 0 {
        T::from(lo)
    } else {
        T::from(hi) * T::from(1u32 << 16) * T::from(1u32 << 16) + T::from(lo)
    };
    Ratio::from_integer(v)
}

pub fn to_f64<T: ExactInt>(r: &Ratio<T>) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `p/q`, an integer, or a finite decimal (`0.25`) into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: `{s}`"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Ratio::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10u32), frac.len());
        let r = Ratio::new(n, d);
        return Ok(if negative { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Ratio::from_integer(n))
}

/// Narrows an arbitrary-precision rational into a fixed-width backing type.
pub fn narrow<T: ExactInt + TryFrom<BigInt>>(r: &Rational) -> Option<Ratio<T>> {
    let n = T::try_from(r.numer().clone()).ok()?;
    let d = T::try_from(r.denom().clone()).ok()?;
    Some(Ratio::new(n, d))
}

/// Rising factorial `x (x+1) ... (x+n-1)`; empty product is one.
pub fn rising<T: ExactInt>(x: &Ratio<T>, n: u64) -> Ratio<T> {
    let mut acc = Ratio::one();
    let mut term = x.clone();
    for _ in 0..n {
        acc = acc * term.clone();
        term = term + Ratio::one();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(
            parse_rational("1/2").unwrap(),
            Ratio::new(1.into(), 2.into())
        );
        assert_eq!(
            parse_rational(" 3 ").unwrap(),
            Ratio::from_integer(3.into())
        );
        assert_eq!(
            parse_rational("0.25").unwrap(),
            Ratio::new(1.into(), 4.into())
        );
        assert_eq!(
            parse_rational("-1.5").unwrap(),
            Ratio::new((-3).into(), 2.into())
        );
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn rising_factorial() {
        let half: Ratio<i64> = Ratio::new(1, 2);
        assert_eq!(rising(&half, 0), Ratio::one());
        assert_eq!(rising(&half, 3), Ratio::new(15, 8));
    }

    #[test]
    fn int_handles_wide_values() {
        let big: Ratio<i128> = int(1u64 << 40);
        assert_eq!(*big.numer(), 1i128 << 40);
    }

    #[test]
    fn narrow_round_trip() {
        let r = parse_rational("7/12").unwrap();
        let n: Ratio<i64> = narrow(&r).unwrap();
        assert_eq!(n, Ratio::new(7, 12));
    }
}
