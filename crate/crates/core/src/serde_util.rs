//! JSON helpers: big integers travel as decimal strings, but plain JSON
//! integers are accepted on input.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::Deserialize;

#[derive(Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Int(i64),
    Str(String),
}

fn parse_int<E: de::Error>(r: IntRepr) -> Result<BigInt, E> {
    match r {
        IntRepr::Int(v) => Ok(BigInt::from(v)),
        IntRepr::Str(s) => {
            BigInt::from_str(s.trim()).map_err(|_| E::custom(format!("not an integer: {s:?}")))
        }
    }
}

pub fn ser_bigints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for c in v {
        seq.serialize_element(&c.to_string())?;
    }
    seq.end()
}

pub fn de_bigints<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
    let raw = Vec::<IntRepr>::deserialize(d)?;
    raw.into_iter().map(parse_int).collect()
}

pub fn ser_bigint<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn de_bigint<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    parse_int(IntRepr::deserialize(d)?)
}

/// Rationals as `"num/den"` (or `"num"` when the denominator is 1).
pub fn rational_to_string(q: &BigRational) -> String {
    if q.denom() == &BigInt::from(1) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d == BigInt::from(0) {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => BigInt::from_str(s).ok().map(BigRational::from_integer),
    }
}

pub fn ser_rational<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational_to_string(v))
}

pub fn de_rational<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
    let s = String::deserialize(d)?;
    parse_rational(&s).ok_or_else(|| de::Error::custom(format!("not a rational: {s:?}")))
}
