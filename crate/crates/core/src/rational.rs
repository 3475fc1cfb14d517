//! Exact arithmetic helpers shared by the combinatorial modules.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn from_bigint(value: BigInt) -> Rational {
    Rational::from_integer(value)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `(2l - 1)!! = 1 * 3 * ... * (2l - 1)`, with `(-1)!! = 1`.
pub fn odd_double_factorial(l: u64) -> BigInt {
    (1..=l).fold(BigInt::one(), |acc, i| acc * BigInt::from(2 * i - 1))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn pow(base: &Rational, exp: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        if value.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Serializes as `"p/q"`, always with an explicit denominator.
pub fn format(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn parse(text: &str) -> Result<Rational> {
    let text = text.trim();
    let parse_int = |s: &str| {
        s.trim()
            .parse::<BigInt>()
            .map_err(|e| Error::Parse(format!("bad rational {text:?}: {e}")))
    };
    match text.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {text:?}")));
            }
            Ok(Rational::new(parse_int(n)?, d))
        }
        None => Ok(Rational::from_integer(parse_int(text)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_factorial_matches_factorial_ratio() {
        for l in 0..12u64 {
            let expected = factorial(2 * l) / (BigInt::from(2).pow(l as u32) * factorial(l));
            assert_eq!(odd_double_factorial(l), expected);
        }
        assert_eq!(odd_double_factorial(4), BigInt::from(105));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(10, 0), BigInt::from(1));
        assert_eq!(binomial(3, 5), BigInt::from(0));
    }

    #[test]
    fn format_and_parse() {
        let r = ratio(-6, 4);
        assert_eq!(format(&r), "-3/2");
        assert_eq!(parse("-3/2").unwrap(), r);
        assert_eq!(parse("24").unwrap(), int(24));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }
}
