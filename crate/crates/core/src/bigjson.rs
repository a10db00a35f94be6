//! JSON carriers for arbitrary-precision integers: plain numbers when they fit
//! in 64 bits, decimal strings otherwise.

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum BigIntJson {
    Small(i64),
    Unsigned(u64),
    Text(String),
}

impl From<&BigInt> for BigIntJson {
    fn from(x: &BigInt) -> Self {
        match x.to_i64() {
            Some(v) => BigIntJson::Small(v),
            None => BigIntJson::Text(x.to_string()),
        }
    }
}

impl BigIntJson {
    pub(crate) fn to_bigint(&self) -> Result<BigInt, String> {
        match self {
            BigIntJson::Small(v) => Ok(BigInt::from(*v)),
            BigIntJson::Unsigned(v) => Ok(BigInt::from(*v)),
            BigIntJson::Text(s) => s
                .trim()
                .parse::<BigInt>()
                .map_err(|_| format!("invalid integer {s:?}")),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum BigUintJson {
    Small(u64),
    Text(String),
}

impl From<&BigUint> for BigUintJson {
    fn from(x: &BigUint) -> Self {
        match x.to_u64() {
            Some(v) => BigUintJson::Small(v),
            None => BigUintJson::Text(x.to_string()),
        }
    }
}

impl BigUintJson {
    pub(crate) fn to_biguint(&self) -> Result<BigUint, String> {
        match self {
            BigUintJson::Small(v) => Ok(BigUint::from(*v)),
            BigUintJson::Text(s) => s
                .trim()
                .parse::<BigUint>()
                .map_err(|_| format!("invalid nonnegative integer {s:?}")),
        }
    }
}

/// `#[serde(with = "biguint")]` helper.
pub(crate) mod biguint {
    use super::BigUintJson;
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        BigUintJson::from(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        BigUintJson::deserialize(d)?
            .to_biguint()
            .map_err(serde::de::Error::custom)
    }
}

/// `#[serde(with = "bigint_vec")]` helper.
pub(crate) mod bigint_vec {
    use super::BigIntJson;
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        xs.iter().map(BigIntJson::from).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<BigIntJson>::deserialize(d)?
            .iter()
            .map(|x| x.to_bigint().map_err(serde::de::Error::custom))
            .collect()
    }
}
