//! Exact rational scalars.
//!
//! `Rat` is an arbitrary-precision rational kept in lowest terms with a positive
//! denominator. Text form is `"p/q"`, or `"p"` when the denominator is one.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

pub fn is_pos(x: &Rat) -> bool {
    x.is_positive()
}

pub fn is_neg(x: &Rat) -> bool {
    x.is_negative()
}

pub fn parse(s: &str) -> Result<Rat> {
    let t = s.trim();
    let bad = |reason: &str| Error::Parse { what: "rational", reason: format!("{reason}: {t:?}") };
    if t.is_empty() {
        return Err(bad("empty string"));
    }
    let (num, den) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad("bad numerator"))?;
    let den: BigInt = den.parse().map_err(|_| bad("bad denominator"))?;
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rat::new(num, den))
}

/// Canonical text form; `Ratio` already normalises sign and gcd.
pub fn format(x: &Rat) -> String {
    x.to_string()
}

pub fn from_json(v: &serde_json::Value) -> Result<Rat> {
    match v {
        serde_json::Value::String(s) => parse(s),
        serde_json::Value::Number(n) if n.is_i64() => Ok(int(n.as_i64().unwrap_or_default())),
        other => Err(Error::Parse { what: "rational", reason: format!("expected string or integer, got {other}") }),
    }
}

pub fn to_json(x: &Rat) -> serde_json::Value {
    serde_json::Value::String(format(x))
}

pub fn vec_from_json(v: &serde_json::Value) -> Result<Vec<Rat>> {
    match v {
        serde_json::Value::Array(items) => items.iter().map(from_json).collect(),
        other => Err(Error::Parse { what: "rational vector", reason: format!("expected array, got {other}") }),
    }
}

pub fn vec_to_json(xs: &[Rat]) -> serde_json::Value {
    serde_json::Value::Array(xs.iter().map(to_json).collect())
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

/// `serde(with = ...)` adapter for a single `Rat`.
pub mod serde_rat {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        from_json(&v).map_err(D::Error::custom)
    }
}

/// `serde(with = ...)` adapter for `Vec<Rat>`.
pub mod serde_rat_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(xs: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&format(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rat>, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        vec_from_json(&v).map_err(D::Error::custom)
    }
}

/// `serde(with = ...)` adapter for `Vec<Vec<Rat>>`.
pub mod serde_rat_mat {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(rows: &[Vec<Rat>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(rows.len()))?;
        for r in rows {
            let strs: Vec<String> = r.iter().map(format).collect();
            seq.serialize_element(&strs)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Rat>>, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::Array(items) => items.iter().map(|r| vec_from_json(r).map_err(D::Error::custom)).collect(),
            other => Err(D::Error::custom(format!("expected array of rows, got {other}"))),
        }
    }
}
