//! Exact rational scalars and their `[num, den]` wire form.

use num::bigint::BigInt;
use num::traits::{One, Signed, ToPrimitive, Zero};
use num::BigRational;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Decimal rendering for annotations; never used in comparisons.
pub fn approx(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// Integers on the wire: JSON numbers when they fit in i64, decimal strings otherwise.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WireInt {
    Small(i64),
    Big(String),
}

fn to_wire(v: &BigInt) -> WireInt {
    match v.to_i64() {
        Some(x) => WireInt::Small(x),
        None => WireInt::Big(v.to_string()),
    }
}

fn from_wire(w: WireInt) -> Result<BigInt, String> {
    match w {
        WireInt::Small(x) => Ok(BigInt::from(x)),
        WireInt::Big(s) => s.parse().map_err(|_| format!("bad integer {s:?}")),
    }
}

pub fn pair(r: &Rational) -> serde_json::Value {
    serde_json::to_value(RatPair::from(r)).expect("rational pair serializes")
}

/// `[num, den]` with `den > 0`, reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPair(pub Rational);

impl From<&Rational> for RatPair {
    fn from(r: &Rational) -> Self {
        RatPair(r.clone())
    }
}

impl Serialize for RatPair {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (to_wire(self.0.numer()), to_wire(self.0.denom())).serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatPair {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (n, dd): (WireInt, WireInt) = Deserialize::deserialize(d)?;
        let n = from_wire(n).map_err(D::Error::custom)?;
        let dd = from_wire(dd).map_err(D::Error::custom)?;
        if dd.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(RatPair(Rational::new(n, dd)))
    }
}

/// For `#[serde(with = "crate::rational::serde_pair")]`.
pub mod serde_pair {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        RatPair::from(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        RatPair::deserialize(d).map(|p| p.0)
    }
}

pub mod serde_pair_opt {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        r.as_ref().map(RatPair::from).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<RatPair>::deserialize(d).map(|p| p.map(|p| p.0))
    }
}

pub fn is_nonnegative(r: &Rational) -> bool {
    !r.is_negative()
}
