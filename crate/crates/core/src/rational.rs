//! Exact rational helpers shared by every module.
//!
//! Everything analytic in this crate is computed over [`Rational`]
//! (arbitrary-precision numerator and denominator, always in lowest terms).
//! In machine-readable output a rational is always written as `"num/den"`.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{invalid, Result};

pub type Rational = BigRational;

pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

pub fn uint(n: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from_biguint(Sign::Plus, n.clone()))
}

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn pow(base: &Rational, exp: u32) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}

pub fn ceil_to_uint(x: &Rational) -> BigUint {
    let c = x.ceil().to_integer();
    if c.is_negative() {
        BigUint::zero()
    } else {
        c.to_biguint().unwrap()
    }
}

pub fn floor_to_uint(x: &Rational) -> BigUint {
    let f = x.floor().to_integer();
    if f.is_negative() {
        BigUint::zero()
    } else {
        f.to_biguint().unwrap()
    }
}

/// Decides `lhs <= base + coeff * sqrt(radicand)` exactly, for `coeff >= 0`
/// and `radicand >= 0`.
pub fn le_plus_sqrt(lhs: &Rational, base: &Rational, coeff: &Rational, radicand: &Rational) -> bool {
    debug_assert!(!coeff.is_negative() && !radicand.is_negative());
    let gap = lhs - base;
    if !gap.is_positive() {
        return true;
    }
    &gap * &gap <= coeff * coeff * radicand
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `"num/den"`, denominator always present.
pub fn format(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Accepts `"a/b"`, integers and finite decimals (`"0.25"`, `"-3.5"`, `"1e-3"` is not accepted).
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| invalid(format!("bad rational {s:?}")))?;
        let d = BigInt::from_str(d.trim()).map_err(|_| invalid(format!("bad rational {s:?}")))?;
        if d.is_zero() {
            return Err(invalid(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(invalid(format!("bad rational {s:?}")));
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        let digits = format!("{}{}", if whole_digits.is_empty() { "0" } else { whole_digits }, frac);
        let mut n = BigInt::from_str(&digits).map_err(|_| invalid(format!("bad rational {s:?}")))?;
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10u32), frac.len());
        return Ok(Rational::new(n, d));
    }
    let n = BigInt::from_str(s).map_err(|_| invalid(format!("bad rational {s:?}")))?;
    Ok(Rational::from_integer(n))
}

/// Smallest integer `>= x` as a `usize`, saturating.
pub fn ceil_usize(x: &Rational) -> usize {
    ceil_to_uint(x).to_usize().unwrap_or(usize::MAX)
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

pub fn gcd_uint(a: &BigUint, b: &BigUint) -> BigUint {
    a.gcd(b)
}

/// serde adapter writing a [`Rational`] as `"num/den"`.
pub mod as_string {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let raw = String::deserialize(d)?;
        parse(&raw).map_err(serde::de::Error::custom)
    }
}

pub mod vec_as_string {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&format(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter().map(|r| parse(r).map_err(serde::de::Error::custom)).collect()
    }
}

/// serde adapter writing a [`BigUint`] as a bare JSON integer of any size.
pub mod biguint_number {
    use super::*;
    use serde::Serialize;

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n: serde_json::Number = x.to_string().parse().map_err(serde::ser::Error::custom)?;
        n.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigUint, D::Error> {
        let n = serde_json::Number::deserialize(d)?;
        BigUint::from_str(&n.to_string()).map_err(|_| serde::de::Error::custom(format!("expected a nonnegative integer, got {n}")))
    }
}
