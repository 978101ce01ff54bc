//! JSON helpers for arbitrary-precision integers.
//!
//! Integers that fit in an `i64` are written as plain JSON numbers; anything
//! larger is written as a decimal string. Both forms are accepted on input.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

/// A BigInt wrapper with the number-or-string JSON encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = JsonInt;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("an integer or a decimal string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonInt, E> {
                Ok(JsonInt(BigInt::from(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonInt, E> {
                Ok(JsonInt(BigInt::from(v)))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonInt, E> {
                v.trim()
                    .parse::<BigInt>()
                    .map(JsonInt)
                    .map_err(|_| E::custom(format!("not an integer: {v:?}")))
            }
        }
        d.deserialize_any(V)
    }
}

/// For `#[serde(with = "crate::bigint_serde")]` on `BigInt` fields.
pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    JsonInt(v.clone()).serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    JsonInt::deserialize(d).map(|j| j.0)
}
