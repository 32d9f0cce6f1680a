use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::digest::{self, DIGEST_ID};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::{buchberger, leading_ideal, normal_form, GroebnerConfig};
use crate::keys::{canonical_key, entry_width, GrobnerKey, KeyList};
use crate::monomial::{Exponent, MonomialOrder};
use crate::monoset::MonomialSet;
use crate::poly::{PolySetJson, Polynomial};
use crate::ring::RingContext;
use crate::toric::script::{build_basis, BuildScript};
use crate::ugb::{enumerate_keys, sample_order, trim, EnumerationConfig, EnumerationMode, UniversalBasis};

pub const SCHEME_ID: &str = "xor-sha256-ctr";
pub const MARKER: &[u8; 8] = b"GBMARKER";
pub const TAU_DOMAIN_TAG: &str = "GBKE-TAU";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaSpec {
    pub k_bound: u32,
    pub entry_bit_width: u32,
    pub digest_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncSpec {
    pub scheme_id: String,
    pub marker_bytes: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TauSpec {
    Absent,
    Present { digest_id: String, domain_tag: String },
}

/// Everything Party B needs: the ring, the trimmed generators `R_I`, and the
/// fixed key-derivation, encryption and hint choices.
#[derive(Debug, Clone, PartialEq)]
pub struct PublicParams {
    ring: Arc<RingContext>,
    r_i: Vec<Polynomial>,
    eta: EtaSpec,
    enc: EncSpec,
    tau: TauSpec,
}

#[derive(Serialize, Deserialize)]
struct PublicJson {
    #[serde(flatten)]
    generators: PolySetJson,
    eta_spec: EtaSpec,
    enc_spec: EncSpec,
    tau_spec: TauSpec,
}

impl PublicParams {
    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.r_i
    }

    pub fn eta_spec(&self) -> &EtaSpec {
        &self.eta
    }

    pub fn enc_spec(&self) -> &EncSpec {
        &self.enc
    }

    pub fn tau_spec(&self) -> &TauSpec {
        &self.tau
    }

    pub fn k_bound(&self) -> u32 {
        self.eta.k_bound
    }

    pub fn tau_enabled(&self) -> bool {
        matches!(self.tau, TauSpec::Present { .. })
    }

    fn validate(&self) -> Result<()> {
        if self.r_i.is_empty() {
            return Err(Error::domain("public generator list is empty"));
        }
        if self.eta.entry_bit_width != entry_width(self.eta.k_bound)? || self.eta.digest_id != DIGEST_ID {
            return Err(Error::domain("unsupported eta specification"));
        }
        if self.enc.scheme_id != SCHEME_ID || self.enc.marker_bytes.as_bytes() != MARKER {
            return Err(Error::domain(format!(
                "unsupported encryption scheme `{}`",
                self.enc.scheme_id
            )));
        }
        if let TauSpec::Present { digest_id, domain_tag } = &self.tau {
            if digest_id != DIGEST_ID || domain_tag != TAU_DOMAIN_TAG {
                return Err(Error::domain("unsupported tau specification"));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl Serialize for PublicParams {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PublicJson {
            generators: PolySetJson::from_polys(&self.ring, &self.r_i),
            eta_spec: self.eta.clone(),
            enc_spec: self.enc.clone(),
            tau_spec: self.tau.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PublicParams {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = PublicJson::deserialize(d)?;
        let (ring, r_i) = j.generators.into_polys().map_err(D::Error::custom)?;
        let p = PublicParams {
            ring,
            r_i,
            eta: j.eta_spec,
            enc: j.enc_spec,
            tau: j.tau_spec,
        };
        p.validate().map_err(D::Error::custom)?;
        Ok(p)
    }
}

/// How the key list was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Coverage {
    Exact,
    /// Only keys hit by `count` random orders; decryption may fail.
    Sampled { count: usize, seed: u64 },
}

/// Party A's secrets: the universal basis, every key, and the optional
/// `tau -> key` index.
#[derive(Debug, Clone, PartialEq)]
pub struct PrivateParams {
    u_i: UniversalBasis,
    key_list: KeyList,
    coverage: Coverage,
    tau_table: Option<BTreeMap<[u8; 32], usize>>,
    build_script: Option<BuildScript>,
}

#[derive(Serialize, Deserialize)]
struct PrivateJson {
    u_i: UniversalBasis,
    key_list: KeyList,
    coverage: Coverage,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tau_table: Option<BTreeMap<String, usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    build_script: Option<BuildScript>,
}

fn tau_table(keys: &KeyList) -> BTreeMap<[u8; 32], usize> {
    keys.keys().iter().enumerate().map(|(i, k)| (k.tau(), i)).collect()
}

impl PrivateParams {
    pub fn universal_basis(&self) -> &UniversalBasis {
        &self.u_i
    }

    pub fn key_list(&self) -> &KeyList {
        &self.key_list
    }

    pub fn coverage(&self) -> Coverage {
        self.coverage
    }

    pub fn build_script(&self) -> Option<&BuildScript> {
        self.build_script.as_ref()
    }

    /// Adds the `tau -> key` index if it is missing.
    pub fn with_tau_table(mut self) -> Self {
        if self.tau_table.is_none() {
            self.tau_table = Some(tau_table(&self.key_list));
        }
        self
    }

    pub fn has_tau_table(&self) -> bool {
        self.tau_table.is_some()
    }

    /// Index of the key whose `tau` value is `t`. Falls back to a scan when
    /// no table was stored.
    pub fn lookup_tau(&self, t: &[u8; 32]) -> Option<usize> {
        match &self.tau_table {
            Some(table) => table.get(t).copied(),
            None => self.key_list.keys().iter().position(|k| &k.tau() == t),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl Serialize for PrivateParams {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PrivateJson {
            u_i: self.u_i.clone(),
            key_list: self.key_list.clone(),
            coverage: self.coverage,
            tau_table: self
                .tau_table
                .as_ref()
                .map(|t| t.iter().map(|(k, &v)| (hex::encode(k), v)).collect()),
            build_script: self.build_script.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PrivateParams {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = PrivateJson::deserialize(d)?;
        let tau_table = match j.tau_table {
            None => None,
            Some(raw) => {
                let mut table = BTreeMap::new();
                for (k, v) in raw {
                    let bytes: [u8; 32] = hex::decode(&k)
                        .ok()
                        .and_then(|b| b.try_into().ok())
                        .ok_or_else(|| D::Error::custom(format!("bad tau value `{k}`")))?;
                    table.insert(bytes, v);
                }
                if table != tau_table(&j.key_list) {
                    return Err(D::Error::custom("tau table does not match the key list"));
                }
                Some(table)
            }
        };
        Ok(PrivateParams {
            u_i: j.u_i,
            key_list: j.key_list,
            coverage: j.coverage,
            tau_table,
            build_script: j.build_script,
        })
    }
}

#[derive(Debug, Clone)]
pub struct InitOptions {
    pub field: Field,
    /// Exponent bound for keys; defaults to one more than the largest
    /// exponent in the basis (at least 2).
    pub k_bound: Option<u32>,
    pub tau: bool,
    pub mode: EnumerationMode,
    pub enumeration: EnumerationConfig,
    pub groebner: GroebnerConfig,
}

impl Default for InitOptions {
    fn default() -> Self {
        Self {
            field: Field::Prime(crate::field::DEFAULT_PRIME),
            k_bound: None,
            tau: false,
            mode: EnumerationMode::Exact,
            enumeration: EnumerationConfig::default(),
            groebner: GroebnerConfig::default(),
        }
    }
}

/// Party A's setup from a build script.
pub fn init(script: &BuildScript, opts: &InitOptions) -> Result<(PublicParams, PrivateParams)> {
    let (_, basis, _) = build_basis(script, opts.field)?;
    init_from_basis(basis, Some(script.clone()), opts)
}

/// Party A's setup from an explicit universal basis.
pub fn init_from_basis(
    u_i: UniversalBasis,
    script: Option<BuildScript>,
    opts: &InitOptions,
) -> Result<(PublicParams, PrivateParams)> {
    if u_i.is_empty() {
        return Err(Error::domain(
            "the ideal is zero (the graph has no closed even walk); there is nothing to key",
        ));
    }
    let k_bound = opts.k_bound.unwrap_or_else(|| u_i.default_k_bound());
    if k_bound <= u_i.max_exponent() {
        return Err(Error::domain(format!(
            "k_bound {k_bound} must exceed the largest exponent {} of the basis",
            u_i.max_exponent()
        )));
    }
    let width = entry_width(k_bound)?;
    let order = MonomialOrder::grevlex(u_i.ring().num_vars());
    let r_i = trim(&u_i, &order)?;
    for u in u_i.elements() {
        if !normal_form(u, &r_i, &order)?.is_zero() {
            return Err(Error::precondition(format!("`{u}` does not reduce to zero modulo the trimmed basis")));
        }
    }
    for r in &r_i {
        if !normal_form(r, u_i.elements(), &order)?.is_zero() {
            return Err(Error::precondition(format!(
                "`{r}` does not reduce to zero modulo the universal basis; it is not a Gröbner basis under grevlex"
            )));
        }
    }
    let mut cfg = opts.enumeration;
    cfg.k_bound = Some(k_bound);
    let key_list = enumerate_keys(&u_i, opts.mode, &cfg)?;
    let coverage = match opts.mode {
        EnumerationMode::Exact => Coverage::Exact,
        EnumerationMode::Sample { count, seed } => Coverage::Sampled { count, seed },
    };
    let public = PublicParams {
        ring: u_i.ring().clone(),
        r_i,
        eta: EtaSpec {
            k_bound,
            entry_bit_width: width,
            digest_id: DIGEST_ID.to_string(),
        },
        enc: EncSpec {
            scheme_id: SCHEME_ID.to_string(),
            marker_bytes: String::from_utf8_lossy(MARKER).into_owned(),
        },
        tau: if opts.tau {
            TauSpec::Present {
                digest_id: DIGEST_ID.to_string(),
                domain_tag: TAU_DOMAIN_TAG.to_string(),
            }
        } else {
            TauSpec::Absent
        },
    };
    let private = PrivateParams {
        tau_table: opts.tau.then(|| tau_table(&key_list)),
        u_i,
        key_list,
        coverage,
        build_script: script,
    };
    Ok((public, private))
}

/// Party B's secret order and the key it induces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Session {
    pub order: MonomialOrder,
    pub key: GrobnerKey,
}

#[derive(Serialize, Deserialize)]
struct SessionJson {
    order: MonomialOrder,
    gens: Vec<Exponent>,
    k_bound: u32,
    eta_raw: String,
}

impl Session {
    pub fn to_json(&self, k_bound: u32) -> Result<String> {
        Ok(serde_json::to_string_pretty(&SessionJson {
            order: self.order.clone(),
            gens: self.key.gens().monomials().to_vec(),
            k_bound,
            eta_raw: self.key.eta_raw().to_string(),
        })?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: SessionJson = serde_json::from_str(text)?;
        let key = canonical_key(&MonomialSet::new(j.gens), j.k_bound)?;
        if key.eta_raw() != j.eta_raw {
            return Err(Error::domain("session key is inconsistent with its generators"));
        }
        Ok(Session { order: j.order, key })
    }
}

/// Party B's key under a given order: one Buchberger run on the public
/// generators, then the canonical key of the initial ideal.
pub fn keygen_with_order(public: &PublicParams, order: MonomialOrder, cfg: &GroebnerConfig) -> Result<Session> {
    order.validate()?;
    if order.num_vars() != public.ring.num_vars() {
        return Err(Error::Dimension {
            expected: public.ring.num_vars(),
            found: order.num_vars(),
        });
    }
    let gb = buchberger(&public.r_i, &order, cfg)?;
    let gens = leading_ideal(&gb, &order)?;
    let key = canonical_key(&gens, public.eta.k_bound)?;
    Ok(Session { order, key })
}

/// Party B's key generation: a seeded random lex or weight order. Uses only
/// public data.
pub fn keygen(public: &PublicParams, seed: u64, cfg: &GroebnerConfig) -> Result<Session> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kind = rng.gen_range(0..2);
    let order = sample_order(public.ring.num_vars(), kind, &mut rng);
    keygen_with_order(public, order, cfg)
}

/// `eta` as fixed 32 bytes for `key`.
pub fn eta(key: &GrobnerKey) -> [u8; 32] {
    *key.key_bytes()
}

pub fn tau(key_bytes: &[u8; 32]) -> [u8; 32] {
    digest::tau(key_bytes)
}
