use serde::{Deserialize, Serialize};

use crate::digest;
use crate::error::{Error, Result};
use crate::monomial::Exponent;
use crate::monoset::{min_mono_gens, MonomialSet};

/// Bits per exponent entry for keys whose entries are all below `k_bound`.
pub fn entry_width(k_bound: u32) -> Result<u32> {
    if k_bound < 2 {
        return Err(Error::domain(format!("k_bound must be at least 2, got {k_bound}")));
    }
    Ok(32 - (k_bound - 1).leading_zeros())
}

/// An initial ideal turned into key material.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrobnerKey {
    gens: MonomialSet,
    eta_raw: String,
    key_bytes: [u8; 32],
}

impl GrobnerKey {
    pub fn gens(&self) -> &MonomialSet {
        &self.gens
    }

    pub fn eta_raw(&self) -> &str {
        &self.eta_raw
    }

    pub fn key_bytes(&self) -> &[u8; 32] {
        &self.key_bytes
    }

    pub fn key_hex(&self) -> String {
        hex::encode(self.key_bytes)
    }

    pub fn tau(&self) -> [u8; 32] {
        digest::tau(&self.key_bytes)
    }
}

/// Builds the canonical key of a monomial ideal: minimal generators sorted
/// descending lex, each exponent entry written as a fixed-width binary word.
pub fn canonical_key(gens: &MonomialSet, k_bound: u32) -> Result<GrobnerKey> {
    let width = entry_width(k_bound)? as usize;
    let gens = min_mono_gens(gens)?;
    let mut eta_raw = String::new();
    for m in gens.monomials() {
        for &e in m.as_slice() {
            if e >= k_bound {
                return Err(Error::domain(format!(
                    "exponent {e} is not below k_bound {k_bound}"
                )));
            }
            eta_raw.push_str(&format!("{e:0width$b}"));
        }
    }
    let key_bytes = digest::eta(&eta_raw);
    Ok(GrobnerKey {
        gens,
        eta_raw,
        key_bytes,
    })
}

/// All known keys of an ideal, in canonical order (descending by generator
/// list), each optionally certified by a weight vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyList {
    keys: Vec<GrobnerKey>,
    witness_weights: Vec<Option<Vec<u64>>>,
}

#[derive(Serialize, Deserialize)]
struct KeyEntryJson {
    gens: Vec<Exponent>,
    eta_raw: String,
    key_hex: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    witness_w: Option<Vec<u64>>,
}

impl KeyList {
    /// Dedupes by generator set (first witness wins) and sorts canonically.
    pub fn new(entries: Vec<(GrobnerKey, Option<Vec<u64>>)>) -> Self {
        let mut entries = entries;
        entries.sort_by(|a, b| b.0.gens.monomials().cmp(a.0.gens.monomials()));
        entries.dedup_by(|later, earlier| {
            if later.0.gens == earlier.0.gens {
                if earlier.1.is_none() {
                    earlier.1 = later.1.take();
                }
                true
            } else {
                false
            }
        });
        let (keys, witness_weights) = entries.into_iter().unzip();
        Self {
            keys,
            witness_weights,
        }
    }

    pub fn keys(&self) -> &[GrobnerKey] {
        &self.keys
    }

    pub fn witness(&self, i: usize) -> Option<&[u64]> {
        self.witness_weights.get(i).and_then(|w| w.as_deref())
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn position(&self, key: &GrobnerKey) -> Option<usize> {
        self.keys.iter().position(|k| k.gens == key.gens)
    }

    pub fn contains(&self, key: &GrobnerKey) -> bool {
        self.position(key).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GrobnerKey, Option<&[u64]>)> {
        self.keys
            .iter()
            .zip(self.witness_weights.iter().map(|w| w.as_deref()))
    }
}

impl Serialize for KeyList {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let entries: Vec<KeyEntryJson> = self
            .iter()
            .map(|(k, w)| KeyEntryJson {
                gens: k.gens.monomials().to_vec(),
                eta_raw: k.eta_raw.clone(),
                key_hex: k.key_hex(),
                witness_w: w.map(<[u64]>::to_vec),
            })
            .collect();
        entries.serialize(s)
    }
}

impl<'de> Deserialize<'de> for KeyList {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let entries = Vec::<KeyEntryJson>::deserialize(d)?;
        let mut out = Vec::with_capacity(entries.len());
        for e in entries {
            let gens = min_mono_gens(&MonomialSet::new(e.gens)).map_err(D::Error::custom)?;
            let entries_total: usize = gens.monomials().iter().map(Exponent::len).sum();
            if entries_total == 0 || e.eta_raw.len() % entries_total != 0 {
                return Err(D::Error::custom("eta_raw length does not match generators"));
            }
            let width = e.eta_raw.len() / entries_total;
            let k_bound = if width >= 32 { u32::MAX } else { 1u32 << width };
            let key = canonical_key(&gens, k_bound).map_err(D::Error::custom)?;
            if key.eta_raw != e.eta_raw || key.key_hex() != e.key_hex.to_ascii_lowercase() {
                return Err(D::Error::custom(format!(
                    "key entry {} is inconsistent with its generators",
                    e.eta_raw
                )));
            }
            out.push((key, e.witness_w));
        }
        Ok(KeyList::new(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(s: &str) -> Exponent {
        let mut v = vec![0; 7];
        for c in s.chars() {
            v[(c as u8 - b'a') as usize] += 1;
        }
        Exponent::new(v)
    }

    fn set(ms: &[&str]) -> MonomialSet {
        MonomialSet::new(ms.iter().map(|m| mono(m)).collect())
    }

    #[test]
    fn widths() {
        assert_eq!(entry_width(2).unwrap(), 1);
        assert_eq!(entry_width(3).unwrap(), 2);
        assert_eq!(entry_width(4).unwrap(), 2);
        assert_eq!(entry_width(5).unwrap(), 3);
        assert!(entry_width(1).is_err());
    }

    #[test]
    fn bitstrings() {
        assert_eq!(canonical_key(&set(&["ce", "bf"]), 2).unwrap().eta_raw(), "01000100010100");
        assert_eq!(
            canonical_key(&set(&["dg", "ag", "bdf"]), 2).unwrap().eta_raw(),
            "100000101010100001001"
        );
        assert!(canonical_key(&set(&["acce", "ag", "dg"]), 2).is_err());
        let wide = canonical_key(&set(&["acce", "ag", "dg"]), 4).unwrap();
        assert_eq!(wide.eta_raw().len(), 3 * 7 * 2);
        assert!(wide.eta_raw().starts_with("01001000010000"));
    }

    #[test]
    fn json_round_trip() {
        let list = KeyList::new(vec![
            (canonical_key(&set(&["bf", "ce"]), 2).unwrap(), Some(vec![0, 2, 1, 0, 1, 1, 0])),
            (canonical_key(&set(&["ag", "ce"]), 2).unwrap(), None),
            (canonical_key(&set(&["ce", "bf"]), 2).unwrap(), None),
        ]);
        assert_eq!(list.len(), 2);
        assert_eq!(list.keys()[0].eta_raw(), "10000010010100");
        let text = serde_json::to_string(&list).unwrap();
        let back: KeyList = serde_json::from_str(&text).unwrap();
        assert_eq!(back, list);

        let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
        v[0]["eta_raw"] = "10000010010101".into();
        assert!(serde_json::from_value::<KeyList>(v).is_err());
    }
}
