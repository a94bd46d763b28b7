//! Rational numbers.
//!
//! `Rat` is `num_rational::BigRational`: always reduced, denominator positive.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ArithError;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Fractional part in `[0, 1)`.
pub fn frac(t: &Rat) -> Rat {
    t - t.floor()
}

/// `B_2(<t>) = <t>^2 - <t> + 1/6`, evaluated on the fractional part of `t`.
pub fn bernoulli2(t: &Rat) -> Rat {
    let f = frac(t);
    &f * &f - &f + rat(1, 6)
}

/// Denominator of a reduced rational as a machine word.
pub fn den_u64(t: &Rat) -> u64 {
    t.denom().to_u64().expect("denominator fits in u64")
}

/// Numerator of `frac(t) * den(t)`, i.e. the residue class of `t` modulo 1 over its denominator.
pub fn frac_num_u64(t: &Rat) -> u64 {
    let f = frac(t);
    f.numer().to_u64().expect("numerator fits in u64")
}

pub fn bigint_lcm(a: &BigInt, b: &BigInt) -> BigInt {
    a.lcm(b)
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rat(s: &str) -> Result<Rat, ArithError> {
    let s = s.trim();
    let bad = || ArithError::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn rat_to_string(t: &Rat) -> String {
    if t.denom().is_one() {
        t.numer().to_string()
    } else {
        format!("{}/{}", t.numer(), t.denom())
    }
}

/// Removes every factor of the given primes from a nonzero integer, returning the absolute value.
pub fn strip_primes(n: &BigInt, primes: &[u64]) -> BigInt {
    let mut n = n.abs();
    for &p in primes {
        let p = BigInt::from(p);
        while !n.is_zero() && (&n % &p).is_zero() {
            n /= &p;
        }
    }
    n
}
