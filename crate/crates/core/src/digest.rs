//! SHA-256 based derivations: key bytes from a bitstring, the public tag
//! of a key, and keystream blocks.

use sha2::{Digest, Sha256};

pub const ETA_TAG: &[u8] = b"GBKE-ETA";
pub const TAU_TAG: &[u8] = b"GBKE-TAU";
pub const DIGEST_ID: &str = "sha256";

/// Packs a `0`/`1` string MSB-first into bytes, zero-padding the last byte.
pub fn pack_bits(bits: &str) -> Vec<u8> {
    let mut out = vec![0u8; bits.len().div_ceil(8)];
    for (i, b) in bits.bytes().enumerate() {
        if b == b'1' {
            out[i / 8] |= 0x80 >> (i % 8);
        }
    }
    out
}

pub fn eta(eta_raw: &str) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(ETA_TAG);
    h.update(pack_bits(eta_raw));
    h.finalize().into()
}

pub fn tau(key_bytes: &[u8; 32]) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(TAU_TAG);
    h.update(key_bytes);
    h.finalize().into()
}

pub fn keystream_block(key_bytes: &[u8; 32], nonce: &[u8; 12], index: u64) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(key_bytes);
    h.update(nonce);
    h.update(index.to_be_bytes());
    h.finalize().into()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packing() {
        assert_eq!(pack_bits("1"), vec![0x80]);
        assert_eq!(pack_bits("01000100010100"), vec![0b0100_0100, 0b0101_0000]);
        assert!(pack_bits("").is_empty());
    }

    #[test]
    fn sha256_known_answer() {
        let d: [u8; 32] = Sha256::digest(b"abc").into();
        assert_eq!(
            hex::encode(d),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn tags_separate_outputs() {
        let k = eta("01000100010100");
        assert_ne!(k, eta("01000100001001"));
        assert_ne!(tau(&k), k);
        assert_ne!(keystream_block(&k, &[0; 12], 0), keystream_block(&k, &[0; 12], 1));
    }
}
