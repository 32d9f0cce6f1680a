//! XOR-keystream encryption with a plaintext marker, and the envelope that
//! carries it.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::digest::keystream_block;
use crate::error::{Error, Result};
use crate::protocol::params::{PrivateParams, PublicParams, Session, MARKER};

pub const MAGIC: &[u8; 4] = b"GBKE";
pub const VERSION: u8 = 0x01;
pub const MAX_PLAINTEXT: usize = (u32::MAX - 8) as usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    pub nonce: [u8; 12],
    /// Present exactly in mode 1.
    pub tau: Option<[u8; 32]>,
    pub payload: Vec<u8>,
}

impl Envelope {
    pub fn mode(&self) -> u8 {
        self.tau.is_some() as u8
    }

    /// `magic | version | mode | nonce | [tau] | len (u32 BE) | payload`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(54 + self.payload.len());
        out.extend_from_slice(MAGIC);
        out.push(VERSION);
        out.push(self.mode());
        out.extend_from_slice(&self.nonce);
        if let Some(t) = &self.tau {
            out.extend_from_slice(t);
        }
        out.extend_from_slice(&(self.payload.len() as u32).to_be_bytes());
        out.extend_from_slice(&self.payload);
        out
    }

    pub fn parse(bytes: &[u8]) -> Result<Self> {
        let mut rest = bytes;
        let mut take = |n: usize, what: &str| -> Result<&[u8]> {
            if rest.len() < n {
                return Err(Error::parse(format!("envelope truncated in {what}")));
            }
            let (head, tail) = rest.split_at(n);
            rest = tail;
            Ok(head)
        };
        if take(4, "magic")? != MAGIC {
            return Err(Error::parse("bad envelope magic"));
        }
        let version = take(1, "version")?[0];
        if version != VERSION {
            return Err(Error::parse(format!("unsupported envelope version {version}")));
        }
        let mode = take(1, "mode")?[0];
        if mode > 1 {
            return Err(Error::parse(format!("unknown envelope mode {mode}")));
        }
        let nonce: [u8; 12] = take(12, "nonce")?.try_into().unwrap();
        let tau = match mode {
            1 => Some(take(32, "tau")?.try_into().unwrap()),
            _ => None,
        };
        let len = u32::from_be_bytes(take(4, "length")?.try_into().unwrap()) as usize;
        let payload = take(len, "payload")?.to_vec();
        if !rest.is_empty() {
            return Err(Error::parse(format!("{} trailing bytes after payload", rest.len())));
        }
        Ok(Envelope { nonce, tau, payload })
    }
}

/// XORs the keystream starting at block 0 into `data`.
pub fn apply_keystream(key_bytes: &[u8; 32], nonce: &[u8; 12], data: &mut [u8]) {
    for (i, chunk) in data.chunks_mut(32).enumerate() {
        let block = keystream_block(key_bytes, nonce, i as u64);
        for (b, k) in chunk.iter_mut().zip(block) {
            *b ^= k;
        }
    }
}

pub fn nonce_from_seed(seed: u64) -> [u8; 12] {
    let mut nonce = [0u8; 12];
    ChaCha8Rng::seed_from_u64(seed).fill_bytes(&mut nonce);
    nonce
}

pub fn random_nonce() -> [u8; 12] {
    let mut nonce = [0u8; 12];
    rand::thread_rng().fill_bytes(&mut nonce);
    nonce
}

/// Encrypts under `key_bytes`; `with_tau` attaches the hint for mode 1.
pub fn encrypt_with_key(key_bytes: &[u8; 32], plaintext: &[u8], nonce: [u8; 12], with_tau: bool) -> Result<Envelope> {
    if plaintext.len() >= MAX_PLAINTEXT {
        return Err(Error::domain("plaintext too long for one envelope"));
    }
    let mut payload = Vec::with_capacity(MARKER.len() + plaintext.len());
    payload.extend_from_slice(MARKER);
    payload.extend_from_slice(plaintext);
    apply_keystream(key_bytes, &nonce, &mut payload);
    Ok(Envelope {
        nonce,
        tau: with_tau.then(|| crate::digest::tau(key_bytes)),
        payload,
    })
}

/// Party B's encryption; the mode follows the public tau setting.
pub fn encrypt(session: &Session, plaintext: &[u8], public: &PublicParams, nonce: [u8; 12]) -> Result<Envelope> {
    encrypt_with_key(session.key.key_bytes(), plaintext, nonce, public.tau_enabled())
}

/// Checks only the marker, which sits in the first keystream block.
pub fn marker_matches(key_bytes: &[u8; 32], env: &Envelope) -> bool {
    if env.payload.len() < MARKER.len() {
        return false;
    }
    let block = keystream_block(key_bytes, &env.nonce, 0);
    env.payload[..MARKER.len()]
        .iter()
        .zip(block)
        .zip(MARKER)
        .all(|((c, k), m)| c ^ k == *m)
}

/// Decrypts with one candidate key; `None` when the marker does not match.
pub fn decrypt_single(key_bytes: &[u8; 32], env: &Envelope) -> Option<Vec<u8>> {
    if !marker_matches(key_bytes, env) {
        return None;
    }
    let mut data = env.payload.clone();
    apply_keystream(key_bytes, &env.nonce, &mut data);
    Some(data.split_off(MARKER.len()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decrypted {
    pub plaintext: Vec<u8>,
    /// Keys tried, counting the successful one.
    pub attempts: usize,
    pub key_index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    Sequential,
    /// Parallel search whose winner is still the first matching key in list
    /// order.
    #[default]
    Parallel,
}

pub fn decrypt(private: &PrivateParams, env: &Envelope) -> Result<Decrypted> {
    decrypt_with(private, env, Strategy::default())
}

/// Mode 1 looks the key up by its tau value; mode 0 tries the key list in
/// canonical order.
pub fn decrypt_with(private: &PrivateParams, env: &Envelope, strategy: Strategy) -> Result<Decrypted> {
    let keys = private.key_list().keys();
    let fail = || {
        let hint = match private.coverage() {
            crate::protocol::params::Coverage::Exact => "the envelope is corrupt or was made for another key list",
            crate::protocol::params::Coverage::Sampled { .. } => {
                "the key list is sampled, so the sender's key may be missing from it"
            }
        };
        Error::Decryption(format!("no key matches the marker; {hint}"))
    };
    if let Some(t) = &env.tau {
        let index = private.lookup_tau(t).ok_or_else(fail)?;
        let plaintext = decrypt_single(keys[index].key_bytes(), env).ok_or_else(fail)?;
        return Ok(Decrypted {
            plaintext,
            attempts: 1,
            key_index: index,
        });
    }
    let index = match strategy {
        Strategy::Sequential => keys.iter().position(|k| marker_matches(k.key_bytes(), env)),
        Strategy::Parallel => keys.par_iter().position_first(|k| marker_matches(k.key_bytes(), env)),
    }
    .ok_or_else(fail)?;
    let plaintext = decrypt_single(keys[index].key_bytes(), env).ok_or_else(fail)?;
    Ok(Decrypted {
        plaintext,
        attempts: index + 1,
        key_index: index,
    })
}
