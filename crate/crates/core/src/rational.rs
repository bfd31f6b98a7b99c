//! Arbitrary-precision rationals and their canonical text form.
//!
//! Every rational crosses a process boundary as the string `"p/q"` with
//! `q > 0` and `gcd(p, q) = 1`. Integers that are integers by type (ranks,
//! fiber degrees, `K`) are written as bare JSON numbers instead.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Q = BigRational;
pub type Z = BigInt;

pub fn q(n: i64) -> Q {
    Q::from_integer(Z::from(n))
}

/// `num / den`, reduced. Panics on a zero denominator.
pub fn qf(num: i64, den: i64) -> Q {
    Q::new(Z::from(num), Z::from(den))
}

pub fn qz(n: &Z) -> Q {
    Q::from_integer(n.clone())
}

pub fn half() -> Q {
    qf(1, 2)
}

/// Canonical `p/q` rendering; integers keep the `/1` suffix.
pub fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Accepts `p/q`, `p`, and a leading `+`. Whitespace around the parts is
/// tolerated; a zero denominator is rejected.
pub fn parse_q(text: &str) -> Result<Q> {
    let t = text.trim();
    let bad = || Error::Schema(format!("not an exact rational: {text:?}"));
    let parse_int = |s: &str| -> Result<Z> {
        let s = s.trim();
        let s = s.strip_prefix('+').unwrap_or(s);
        if s.is_empty() || !s.chars().enumerate().all(|(i, c)| c.is_ascii_digit() || (i == 0 && c == '-')) {
            return Err(bad());
        }
        Z::from_str(s).map_err(|_| bad())
    };
    match t.split_once('/') {
        Some((p, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(parse_int(p)?, den))
        }
        None => Ok(Q::from_integer(parse_int(t)?)),
    }
}

pub fn parse_z(text: &str) -> Result<Z> {
    let x = parse_q(text)?;
    if !x.is_integer() {
        return Err(Error::Schema(format!("expected an integer, got {text:?}")));
    }
    Ok(x.to_integer())
}

pub fn is_half_integer(x: &Q) -> bool {
    (x * q(2)).is_integer()
}

pub fn floor_z(x: &Q) -> Z {
    x.floor().to_integer()
}

pub fn ceil_z(x: &Q) -> Z {
    x.ceil().to_integer()
}

pub fn max_q(a: Q, b: Q) -> Q {
    if a >= b {
        a
    } else {
        b
    }
}

pub fn lcm(a: &Z, b: &Z) -> Z {
    a.lcm(b)
}

pub fn gcd(a: &Z, b: &Z) -> Z {
    a.gcd(b)
}

/// Lossy, display only.
pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn is_one(x: &Q) -> bool {
    x.is_one()
}

pub fn is_pos(x: &Q) -> bool {
    x.is_positive()
}

/// serde adapter: a `Q` field as a `"p/q"` string.
pub mod qstr {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        fmt_q(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let raw = String::deserialize(d)?;
        parse_q(&raw).map_err(serde::de::Error::custom)
    }
}

/// serde adapter: an optional `Q` as a `"p/q"` string or `null`.
pub mod qstr_opt {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
        x.as_ref().map(fmt_q).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Q>, D::Error> {
        let raw = Option::<String>::deserialize(d)?;
        raw.map(|r| parse_q(&r).map_err(serde::de::Error::custom)).transpose()
    }
}

/// serde adapter: a `Z` field as a bare JSON integer of any size.
pub mod zint {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Z, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = serde_json::Number::from_str(&x.to_string()).map_err(serde::ser::Error::custom)?;
        n.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Z, D::Error> {
        let n = serde_json::Number::deserialize(d)?;
        let text = n.to_string();
        Z::from_str(&text).map_err(|_| serde::de::Error::custom(format!("expected an integer, got {text}")))
    }
}
