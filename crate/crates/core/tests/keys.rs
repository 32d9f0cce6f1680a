use std::collections::BTreeSet;
use std::sync::Arc;

use gbke_core::groebner::leading_ideal;
use gbke_core::protocol::params::{eta, tau};
use gbke_core::protocol::{init, init_from_basis, keygen, InitOptions};
use gbke_core::toric::random_script;
use gbke_core::ugb::{leading_key_gens, sample_order, witness_order};
use gbke_core::{
    buchberger, canonical_key, enumerate_keys, in_mk, selection_feasible, trim, EnumerationConfig, EnumerationMode,
    Exponent, GroebnerConfig, MonomialOrder, MonomialSet, Polynomial, RingContext, TermSelection, UniversalBasis,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ring() -> Arc<RingContext> {
    RingContext::with_vars(&["a", "b", "c", "d", "e", "f", "g"]).unwrap().shared()
}

fn basis() -> UniversalBasis {
    let r = ring();
    let ps = ["a*g - b*f", "c*e - d*g", "a*c*e - b*d*f"]
        .iter()
        .map(|t| Polynomial::parse(&r, t).unwrap())
        .collect();
    UniversalBasis::new(ps, "two squares").unwrap()
}

fn monos(r: &RingContext, texts: &[&str]) -> MonomialSet {
    MonomialSet::new(
        texts
            .iter()
            .map(|t| {
                let mut e = vec![0u32; r.num_vars()];
                for f in t.split('*') {
                    let (v, p) = f.split_once('^').unwrap_or((f, "1"));
                    e[r.var_index(v).unwrap()] += p.parse::<u32>().unwrap();
                }
                Exponent::new(e)
            })
            .collect(),
    )
}

#[test]
fn key_domain_examples() {
    let r = ring();
    assert!(in_mk(&monos(&r, &["b*f", "c*e"]), 2));
    assert!(in_mk(&monos(&r, &["a*c^2*e", "a*g", "d*g"]), 3));
    assert!(canonical_key(&monos(&r, &["a*c^2*e", "a*g", "d*g"]), 2).is_err());
    let wide = canonical_key(&monos(&r, &["a*c^2*e", "a*g", "d*g"]), 4).unwrap();
    assert_eq!(wide.eta_raw().len(), 3 * 7 * 2);
    assert_eq!(canonical_key(&monos(&r, &["b*d*f", "a*g", "d*g"]), 2).unwrap().eta_raw(), "100000101010100001001");
}

#[test]
fn eta_golden_vector() {
    let r = ring();
    let key = canonical_key(&monos(&r, &["c*e", "b*f"]), 2).unwrap();
    assert_eq!(key.eta_raw(), "01000100010100");
    // SHA-256 over the tag and the packed bits 0x44 0x50, computed outside this crate
    assert_eq!(key.key_hex(), "9da46c37a99f15835a8e72b798924e9074ae8f4bbfcfd0cd0dfa3428357f51d4");
    assert_eq!(
        hex::encode(tau(key.key_bytes())),
        "bc516e4222051a45075b4a295ee4228b093396b926ad8b0d4600a6aa54eb612e"
    );
}

#[test]
fn eta_and_tau_distinct_over_key_list() {
    let keys = enumerate_keys(&basis(), EnumerationMode::Exact, &EnumerationConfig::default()).unwrap();
    let etas: BTreeSet<[u8; 32]> = keys.keys().iter().map(eta).collect();
    let taus: BTreeSet<[u8; 32]> = keys.keys().iter().map(|k| tau(&eta(k))).collect();
    assert_eq!(etas.len(), 5);
    assert_eq!(taus.len(), 5);
}

#[test]
fn keygens_cover_the_key_list() {
    let (public, private) = init_from_basis(basis(), None, &InitOptions::default()).unwrap();
    let mut hit = BTreeSet::new();
    for seed in 0..200 {
        let s = keygen(&public, seed, &GroebnerConfig::default()).unwrap();
        hit.insert(private.key_list().position(&s.key).expect("key outside the list"));
    }
    assert_eq!(hit.len(), 5);
}

#[test]
fn single_key_ideal_ignores_seed() {
    // x^2*y is a multiple of x, so it leads under every order
    let r = RingContext::with_vars(&["x", "y"]).unwrap().shared();
    let u = UniversalBasis::new(vec![Polynomial::parse(&r, "x^2*y - x").unwrap()], "one key").unwrap();
    let (public, private) = init_from_basis(u, None, &InitOptions::default()).unwrap();
    assert_eq!(private.key_list().len(), 1);
    for seed in 0..20 {
        assert_eq!(&keygen(&public, seed, &Default::default()).unwrap().key, &private.key_list().keys()[0]);
    }
}

#[test]
fn leading_terms_of_basis_match_initial_ideal() {
    let u = basis();
    let r_i = trim(&u, &MonomialOrder::lex(7)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..300 {
        let kind = rng.gen_range(0..2);
        let order = sample_order(7, kind, &mut rng);
        let from_basis = leading_key_gens(&u, &order).unwrap();
        let gb = buchberger(&r_i, &order, &GroebnerConfig::default()).unwrap();
        assert_eq!(from_basis, leading_ideal(&gb, &order).unwrap());
    }
}

#[test]
fn every_selection_witness_reproduces_its_picks() {
    let u = basis();
    let mut feasible = 0;
    for picks in [[0, 0, 0], [0, 0, 1], [0, 1, 0], [0, 1, 1], [1, 0, 0], [1, 0, 1], [1, 1, 0], [1, 1, 1]] {
        let sel = TermSelection { picks: picks.to_vec() };
        if let Some(w) = selection_feasible(&u, &sel, 100_000).unwrap() {
            feasible += 1;
            let order = witness_order(&w);
            for (p, &k) in u.elements().iter().zip(&picks) {
                assert_eq!(p.leading_monomial(&order), Some(&p.terms()[k].exp));
            }
        }
    }
    // ag > bf and ce > dg force ace > bdf, and symmetrically
    assert_eq!(feasible, 6);
    for picks in [[0, 0, 1], [1, 1, 0]] {
        assert!(selection_feasible(&u, &TermSelection { picks: picks.to_vec() }, 100_000).unwrap().is_none());
    }
}

#[test]
fn dedupe_leaves_distinct_generator_sets() {
    for seed in 0..10 {
        let script = random_script(seed, 6, 10).unwrap();
        let Ok((_, private)) = init(&script, &InitOptions::default()) else { continue };
        let gens: BTreeSet<&str> = private.key_list().keys().iter().map(|k| k.eta_raw()).collect();
        assert_eq!(gens.len(), private.key_list().len());
        let product: u128 = private.universal_basis().elements().iter().map(|p| p.len() as u128).product();
        assert!((private.key_list().len() as u128) <= product);
    }
}
