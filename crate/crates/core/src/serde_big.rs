//! Serde adapters that carry big numbers as decimal strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().ok()?;
            let den: BigInt = den.trim().parse().ok()?;
            if den == BigInt::from(0) {
                return None;
            }
            Some(BigRational::new(num, den))
        }
        None => Some(BigRational::from_integer(s.trim().parse().ok()?)),
    }
}

pub(crate) mod rational_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| {
                parse_rational(s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}")))
            })
            .collect()
    }
}

pub(crate) mod opt_rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Vec<BigRational>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => super::rational_vec::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<Option<Vec<BigRational>>, D::Error> {
        let raw = Option::<Vec<String>>::deserialize(d)?;
        raw.map(|raw| {
            raw.iter()
                .map(|s| {
                    parse_rational(s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}")))
                })
                .collect()
        })
        .transpose()
    }
}
