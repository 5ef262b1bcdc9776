//! Exact rationals and the `"num/den"` text format used on the wire.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders as `"num/den"`, always with an explicit denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `"num/den"` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Splits a nonzero rational as `p^v * u` with `u` a `p`-adic unit.
pub fn split_valuation(r: &Rational, p: u64) -> (i64, Rational) {
    debug_assert!(!r.is_zero());
    let pb = BigInt::from(p);
    let (mut n, mut d) = (r.numer().clone(), r.denom().clone());
    let mut v = 0i64;
    while (&n % &pb).is_zero() {
        n /= &pb;
        v += 1;
    }
    while (&d % &pb).is_zero() {
        d /= &pb;
        v -= 1;
    }
    (v, Rational::new(n, d))
}

pub fn valuation(r: &Rational, p: u64) -> i64 {
    split_valuation(r, p).0
}

/// Residue of a `p`-adic unit rational modulo `m` (where `m` is a power of `p`).
pub fn unit_residue(u: &Rational, m: u64) -> u64 {
    let mb = BigInt::from(m);
    let n = mod_u64(u.numer(), &mb);
    let d = mod_u64(u.denom(), &mb);
    let dinv = mod_inverse(d, m).expect("denominator must be a unit");
    mulmod(n, dinv, m)
}

fn mod_u64(x: &BigInt, m: &BigInt) -> u64 {
    let r = ((x % m) + m) % m;
    let (_, digits) = r.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

pub(crate) fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

pub(crate) fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

pub fn is_square_integer(x: &BigInt) -> bool {
    if x.is_negative() {
        return false;
    }
    let r = x.sqrt();
    &r * &r == *x
}

/// True if the rational is the square of a rational.
pub fn is_rational_square(r: &Rational) -> bool {
    !r.is_negative() && is_square_integer(r.numer()) && is_square_integer(r.denom())
}

pub fn sign_of(r: &Rational) -> i8 {
    if r.is_negative() {
        -1
    } else if r.is_zero() {
        0
    } else {
        1
    }
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
        assert_eq!(parse_rational("-6/4").unwrap(), frac(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(format_rational(&int(7)), "7/1");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn valuation_split() {
        let (v, u) = split_valuation(&frac(18, 5), 3);
        assert_eq!(v, 2);
        assert_eq!(u, frac(2, 5));
        assert_eq!(valuation(&frac(1, 8), 2), -3);
        assert_eq!(unit_residue(&frac(1, 3), 8), 3);
    }
}
