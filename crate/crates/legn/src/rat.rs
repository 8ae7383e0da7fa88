//! Exact rational scalars.
//!
//! All coefficients in the kernel are arbitrary-precision rationals in
//! canonical reduced form (positive denominator, gcd(|num|, den) = 1), which
//! `BigRational` maintains on construction.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Parse `"num/den"` or a plain integer string.
pub fn parse_rat(s: &str) -> Result<Rat> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|e| Error::Format(format!("bad rational {s:?}: {e}")))
}

/// Render in the wire format: integers as `"n"`, otherwise `"num/den"`.
pub fn rat_str(r: &Rat) -> String {
    r.to_string()
}

/// Exact `k`-th root if one exists over the rationals.
pub fn rat_nth_root(r: &Rat, k: u32) -> Option<Rat> {
    if k == 0 {
        return None;
    }
    if k == 1 {
        return Some(r.clone());
    }
    if r.is_zero() {
        return Some(Rat::zero());
    }
    if r.is_negative() && k % 2 == 0 {
        return None;
    }
    let sign = if r.is_negative() { -1 } else { 1 };
    let num = r.numer().abs();
    let den = r.denom().clone();
    let rn = num.nth_root(k);
    let rd = den.nth_root(k);
    if num::pow::pow(rn.clone(), k as usize) != num || num::pow::pow(rd.clone(), k as usize) != den {
        return None;
    }
    Some(Rat::new(rn * BigInt::from(sign), rd))
}

/// Rational power with integer exponent (negative exponents invert).
pub fn rat_pow(r: &Rat, e: i64) -> Rat {
    if e == 0 {
        return Rat::one();
    }
    let p = num::pow::pow(r.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render_round_trip() {
        for s in ["3/4", "-11/4", "7", "0", "-2"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(rat_str(&r), s);
        }
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn canonical_form() {
        assert_eq!(rat(6, -8), rat(-3, 4));
        assert_eq!(rat_str(&rat(6, -8)), "-3/4");
    }

    #[test]
    fn nth_roots() {
        assert_eq!(rat_nth_root(&rat(8, 27), 3), Some(rat(2, 3)));
        assert_eq!(rat_nth_root(&rat(-8, 27), 3), Some(rat(-2, 3)));
        assert_eq!(rat_nth_root(&rat(-4, 9), 2), None);
        assert_eq!(rat_nth_root(&rat(2, 1), 2), None);
        assert_eq!(rat_nth_root(&rat(16, 1), 4), Some(rat_int(2)));
    }

    #[test]
    fn powers() {
        assert_eq!(rat_pow(&rat(11, 4), 4), rat(14641, 256));
        assert_eq!(rat_pow(&rat(11, 4), -1), rat(4, 11));
        assert_eq!(rat_pow(&rat(5, 3), 0), rat_int(1));
    }
}
