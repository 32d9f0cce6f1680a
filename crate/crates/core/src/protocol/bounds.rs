use num_bigint::BigUint;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use crate::protocol::params::{PrivateParams, PublicParams};

/// Inputs of the two attack bounds: `m` terms per element and `r` elements
/// (private), exponent bound `k` and `n` variables (public).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackStats {
    pub m: Option<usize>,
    pub r: Option<usize>,
    pub k: u32,
    pub n: usize,
}

impl AttackStats {
    pub fn from_params(public: &PublicParams, private: Option<&PrivateParams>) -> Self {
        let basis = private.map(|p| p.universal_basis());
        AttackStats {
            m: basis.map(|b| b.elements().iter().map(|p| p.len()).max().unwrap_or(0)),
            r: basis.map(|b| b.len()),
            k: public.k_bound(),
            n: public.ring().num_vars(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackReport {
    pub stats: AttackStats,
    /// `m^r`, an upper bound on the number of keys.
    #[serde(with = "decimal_opt")]
    pub key_bound: Option<BigUint>,
    /// `log2` of the `2^(k^n)` key-space size faced without the basis.
    #[serde(with = "decimal")]
    pub log2_brute_force: BigUint,
    pub measured_keys: Option<usize>,
    pub within_bound: Option<bool>,
}

pub fn attack_bounds(stats: AttackStats, measured_keys: Option<usize>) -> AttackReport {
    let key_bound = match (stats.m, stats.r) {
        (Some(m), Some(r)) => Some(Pow::pow(BigUint::from(m), r)),
        _ => None,
    };
    let log2_brute_force = if stats.n == 0 {
        BigUint::one()
    } else {
        Pow::pow(BigUint::from(stats.k), stats.n)
    };
    let within_bound = match (&key_bound, measured_keys) {
        (Some(b), Some(n)) => Some(BigUint::from(n) <= *b),
        _ => None,
    };
    AttackReport {
        stats,
        key_bound,
        log2_brute_force,
        measured_keys,
        within_bound,
    }
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        use serde::de::Error as _;
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

mod decimal_opt {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_some(&v.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigUint>, D::Error> {
        use serde::de::Error as _;
        Option::<String>::deserialize(d)?
            .map(|t| t.parse().map_err(D::Error::custom))
            .transpose()
    }
}
