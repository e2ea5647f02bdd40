//! Helpers around [`BigRational`]: parsing, formatting, rounding and p-adic valuation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats as `"num/den"`, or just `"num"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("bad integer {t:?}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rational::new(parse_int(n)?, d))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

/// Nearest integer, ties going to the even neighbour.
pub fn round_half_even(r: &Rational) -> BigInt {
    let two = BigInt::from(2);
    let fl = r.floor().to_integer();
    let frac = r - Rational::from_integer(fl.clone());
    let half = Rational::new(BigInt::one(), two.clone());
    if frac < half {
        fl
    } else if frac > half {
        fl + 1
    } else if fl.is_even() {
        fl
    } else {
        fl + 1
    }
}

/// p-adic valuation of a nonzero integer.
pub fn int_valuation(n: &BigInt, p: &BigInt) -> u64 {
    debug_assert!(!n.is_zero());
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// p-adic valuation of a nonzero rational.
pub fn rat_valuation(r: &Rational, p: &BigInt) -> i64 {
    int_valuation(r.numer(), p) as i64 - int_valuation(r.denom(), p) as i64
}

pub fn lcm_of_denominators<'a>(it: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    it.into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_ties_to_even() {
        assert_eq!(round_half_even(&rat(1, 2)), BigInt::from(0));
        assert_eq!(round_half_even(&rat(3, 2)), BigInt::from(2));
        assert_eq!(round_half_even(&rat(-1, 2)), BigInt::from(0));
        assert_eq!(round_half_even(&rat(-3, 2)), BigInt::from(-2));
        assert_eq!(round_half_even(&rat(-5, 3)), BigInt::from(-2));
        assert_eq!(round_half_even(&rat(11, 6)), BigInt::from(2));
    }

    #[test]
    fn parse_and_format() {
        let r = parse_rational("-691/31452624").unwrap();
        assert_eq!(format_rational(&r), "-691/31452624");
        assert_eq!(format_rational(&parse_rational("6/3").unwrap()), "2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn valuations() {
        let r = rat(691, 31452624);
        assert_eq!(rat_valuation(&r, &BigInt::from(691)), 1);
        assert_eq!(rat_valuation(&r, &BigInt::from(2)), -4);
    }
}
