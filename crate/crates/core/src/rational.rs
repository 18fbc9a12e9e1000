//! Exact rationals used for slopes, jump indices and norm valuations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses "a", "-a" or "a/b".
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not a rational literal: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// "a" for integers, "a/b" otherwise.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// p-adic valuation of a nonzero integer.
pub fn val_int(n: &BigInt, p: u32) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut m = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

/// p-adic valuation of a rational; `None` for zero.
pub fn val_rat(q: &Rational, p: u32) -> Option<i64> {
    let vn = val_int(q.numer(), p)?;
    let vd = val_int(q.denom(), p).unwrap_or(0);
    Some(vn - vd)
}

/// Valuation of n! (Legendre).
pub fn val_factorial(n: u64, p: u32) -> i64 {
    let p = p as u64;
    let mut v = 0;
    let mut m = n / p;
    while m > 0 {
        v += m as i64;
        m /= p;
    }
    v
}

pub fn floor(q: &Rational) -> i64 {
    q.floor().to_integer().to_i64().expect("rational floor out of range")
}

pub fn ceil(q: &Rational) -> i64 {
    q.ceil().to_integer().to_i64().expect("rational ceil out of range")
}

pub fn is_small_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn zero() -> Rational {
    Rational::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(format_rational(&rat(-3, 2)), "-3/2");
        assert_eq!(format_rational(&int(7)), "7");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn valuations() {
        assert_eq!(val_rat(&int(50), 5), Some(2));
        assert_eq!(val_rat(&rat(3, 20), 2), Some(-2));
        assert_eq!(val_rat(&int(0), 2), None);
        assert_eq!(val_factorial(10, 2), 8);
        assert_eq!(val_factorial(4, 5), 0);
    }
}
