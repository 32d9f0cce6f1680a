//! The two-party key-establishment protocol: Party A publishes trimmed
//! generators and keeps the universal basis, Party B derives a key from one
//! secret monomial order, and A recovers it by trying every possible key.

pub mod bench;
pub mod bounds;
pub mod cipher;
pub mod params;

pub use bench::{bench, BenchConfig, BenchReport};
pub use bounds::{attack_bounds, AttackReport, AttackStats};
pub use cipher::{decrypt, decrypt_single, decrypt_with, encrypt, Decrypted, Envelope, Strategy};
pub use params::{
    init, init_from_basis, keygen, keygen_with_order, Coverage, InitOptions, PrivateParams, PublicParams, Session,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::field::Field;
    use crate::keys::KeyList;
    use crate::monomial::MonomialOrder;
    use crate::poly::Polynomial;
    use crate::ring::RingContext;
    use crate::toric::script::{BuildScript, GraphSpec};
    use crate::ugb::UniversalBasis;

    fn example_basis() -> UniversalBasis {
        let r = RingContext::with_vars(&["a", "b", "c", "d", "e", "f", "g"]).unwrap().shared();
        let ps = ["a*g - b*f", "c*e - d*g", "a*c*e - b*d*f"]
            .iter()
            .map(|t| Polynomial::parse(&r, t).unwrap())
            .collect();
        UniversalBasis::new(ps, "example").unwrap()
    }

    fn setup(tau: bool) -> (PublicParams, PrivateParams) {
        let opts = InitOptions {
            tau,
            ..Default::default()
        };
        init_from_basis(example_basis(), None, &opts).unwrap()
    }

    #[test]
    fn init_trims_and_enumerates() {
        let (public, private) = setup(false);
        // monic under grevlex, so compare up to sign
        let mut texts: Vec<String> = public.generators().iter().map(|p| p.sign_normalized().to_string()).collect();
        texts.sort();
        assert_eq!(texts, ["a*g - b*f", "c*e - d*g"]);
        assert_eq!(private.key_list().len(), 5);
    }

    #[test]
    fn keygen_named_order() {
        let (public, private) = setup(false);
        let order = MonomialOrder::lex_by_names(
            public.ring().vars(),
            &["c", "d", "e", "f", "g", "b", "a"],
        )
        .unwrap();
        let s = keygen_with_order(&public, order, &Default::default()).unwrap();
        assert_eq!(s.key.eta_raw(), "01000100010100");
        assert!(private.key_list().contains(&s.key));
    }

    #[test]
    fn c4_has_two_keys() {
        let script = BuildScript {
            base: GraphSpec::Cycle { len: 4, vertex_ids: None, edge_ids: None, names: None },
            seed: 0,
            steps: vec![],
        };
        let (public, private) = init(&script, &InitOptions::default()).unwrap();
        assert_eq!(public.generators()[0].to_string(), "e0*e2 - e1*e3");
        assert_eq!(private.key_list().len(), 2);
    }

    #[test]
    fn round_trip_both_modes() {
        for tau in [false, true] {
            let (public, private) = setup(tau);
            for seed in 0..20 {
                let s = keygen(&public, seed, &Default::default()).unwrap();
                let msg = vec![seed as u8; seed as usize * 7];
                let env = encrypt(&s, &msg, &public, cipher::nonce_from_seed(seed)).unwrap();
                let back = Envelope::parse(&env.to_bytes()).unwrap();
                assert_eq!(back, env);
                let d = decrypt(&private, &back).unwrap();
                assert_eq!(d.plaintext, msg);
                if tau {
                    assert_eq!(d.attempts, 1);
                } else {
                    assert!(d.attempts <= 5);
                    let seq = decrypt_with(&private, &back, Strategy::Sequential).unwrap();
                    assert_eq!(seq, d);
                }
            }
        }
    }

    #[test]
    fn corrupted_payload_fails() {
        let (public, private) = setup(false);
        let s = keygen(&public, 1, &Default::default()).unwrap();
        let mut env = encrypt(&s, b"hello", &public, [7; 12]).unwrap();
        env.payload[0] ^= 1;
        assert!(matches!(decrypt(&private, &env), Err(Error::Decryption(_))));
    }

    #[test]
    fn empty_plaintext_is_marker_only() {
        let (public, private) = setup(false);
        let s = keygen(&public, 2, &Default::default()).unwrap();
        let env = encrypt(&s, b"", &public, [1; 12]).unwrap();
        assert_eq!(env.payload.len(), 8);
        assert!(decrypt(&private, &env).unwrap().plaintext.is_empty());
        let other = encrypt(&s, b"", &public, [2; 12]).unwrap();
        assert_ne!(other.payload, env.payload);
    }

    #[test]
    fn bundles_round_trip() {
        for tau in [false, true] {
            let (public, private) = setup(tau);
            let p2 = PublicParams::from_json(&public.to_json().unwrap()).unwrap();
            assert_eq!(p2, public);
            assert_eq!(p2.to_json().unwrap(), public.to_json().unwrap());
            let q2 = PrivateParams::from_json(&private.to_json().unwrap()).unwrap();
            assert_eq!(q2, private);
        }
    }

    #[test]
    fn session_round_trip() {
        let (public, _) = setup(false);
        let s = keygen(&public, 9, &Default::default()).unwrap();
        let back = Session::from_json(&s.to_json(public.k_bound()).unwrap()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn header_corruptions_rejected() {
        let (public, _) = setup(true);
        let s = keygen(&public, 3, &Default::default()).unwrap();
        let bytes = encrypt(&s, b"payload", &public, [5; 12]).unwrap().to_bytes();
        // magic, version, mode and the length field
        let len_at = 4 + 1 + 1 + 12 + 32;
        let header: Vec<usize> = (0..6).chain(len_at..len_at + 4).collect();
        for i in header {
            for v in 0..=255u8 {
                if v == bytes[i] {
                    continue;
                }
                let mut bad = bytes.clone();
                bad[i] = v;
                assert!(Envelope::parse(&bad).is_err(), "byte {i} -> {v}");
            }
        }
        assert!(Envelope::parse(&bytes[..bytes.len() - 1]).is_err());
    }

    #[test]
    fn key_list_json_round_trip() {
        let (_, private) = setup(false);
        let json = serde_json::to_string(private.key_list()).unwrap();
        let back: KeyList = serde_json::from_str(&json).unwrap();
        assert_eq!(&back, private.key_list());
        assert_eq!(private.universal_basis().ring().field(), Field::Prime(32003));
    }
}
