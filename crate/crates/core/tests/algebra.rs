use std::sync::Arc;

use gbke_core::monomial::random_order;
use gbke_core::{
    buchberger, cmp_monomials, min_mono_gens, normal_form, s_polynomial, Exponent, Field,
    GroebnerConfig, MonomialOrder, MonomialSet, Polynomial, RingContext,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ring() -> Arc<RingContext> {
    RingContext::with_vars(&["x", "y", "z"]).unwrap().shared()
}

fn poly_strategy() -> impl Strategy<Value = Vec<(i64, Vec<u32>)>> {
    prop::collection::vec((-5i64..=5, prop::collection::vec(0u32..3, 3)), 1..4)
}

fn make(ring: &Arc<RingContext>, terms: &[(i64, Vec<u32>)]) -> Polynomial {
    let field = ring.field();
    let terms = terms
        .iter()
        .map(|(c, e)| (field.from_i64(*c), Exponent::new(e.clone())))
        .collect();
    Polynomial::from_terms(ring, terms).unwrap()
}

fn generators() -> impl Strategy<Value = Vec<Vec<(i64, Vec<u32>)>>> {
    prop::collection::vec(poly_strategy(), 1..4)
}

fn cfg() -> GroebnerConfig {
    GroebnerConfig {
        max_degree: 24,
        max_basis: 200,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn buchberger_is_a_reduced_basis_of_the_same_ideal(gens in generators(), seed in any::<u64>()) {
        let r = ring();
        let f: Vec<Polynomial> = gens.iter().map(|t| make(&r, t)).filter(|p| !p.is_zero()).collect();
        prop_assume!(!f.is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let order = random_order(3, &mut rng);
        let Ok(g) = buchberger(&f, &order, &cfg()) else { return Ok(()); };
        for a in &g {
            for b in &g {
                let s = s_polynomial(a, b, &order).unwrap();
                prop_assert!(normal_form(&s, &g, &order).unwrap().is_zero());
            }
        }
        for p in &f {
            prop_assert!(normal_form(p, &g, &order).unwrap().is_zero());
        }
        for (i, p) in g.iter().enumerate() {
            let others: Vec<Polynomial> = g.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, q)| q.clone()).collect();
            prop_assert_eq!(&normal_form(p, &others, &order).unwrap(), p);
            prop_assert_eq!(p.leading_term(&order).unwrap().coeff.clone(), r.field().one());
        }
        let mut shuffled = f.clone();
        shuffled.shuffle(&mut rng);
        prop_assert_eq!(buchberger(&shuffled, &order, &cfg()).unwrap(), g);
    }

    #[test]
    fn order_axioms(a in prop::collection::vec(0u32..6, 3), b in prop::collection::vec(0u32..6, 3),
                    c in prop::collection::vec(0u32..6, 3), seed in any::<u64>()) {
        let order = random_order(3, &mut ChaCha8Rng::seed_from_u64(seed));
        let (a, b, c) = (Exponent::new(a), Exponent::new(b), Exponent::new(c));
        let ab = cmp_monomials(&order, &a, &b).unwrap();
        prop_assert_eq!(ab.reverse(), cmp_monomials(&order, &b, &a).unwrap());
        prop_assert_eq!(ab, cmp_monomials(&order, &a.add(&c), &b.add(&c)).unwrap());
        prop_assert!(cmp_monomials(&order, &Exponent::zero(3), &a).unwrap().is_le());
        prop_assert_eq!(ab.is_eq(), a == b);
    }

    #[test]
    fn storage_ignores_construction_order(terms in poly_strategy()) {
        let r = ring();
        let mut rev = terms.clone();
        rev.reverse();
        prop_assert_eq!(make(&r, &terms), make(&r, &rev));
        let p = make(&r, &terms);
        prop_assert_eq!(Polynomial::parse(&r, &p.to_string()).unwrap(), p);
    }

    #[test]
    fn min_gens_idempotent(ms in prop::collection::vec(prop::collection::vec(0u32..3, 3), 1..8)) {
        let set = MonomialSet::new(ms.iter().cloned().map(Exponent::new).collect());
        let once = min_mono_gens(&set).unwrap();
        prop_assert_eq!(&min_mono_gens(&once).unwrap(), &once);
        let mut rev = ms.clone();
        rev.reverse();
        let other = min_mono_gens(&MonomialSet::new(rev.into_iter().map(Exponent::new).collect())).unwrap();
        prop_assert_eq!(other, once);
    }
}

#[test]
fn rationals_and_prime_field_agree_on_binomials() {
    let vars = ["a", "b", "c", "d", "e", "f", "g"];
    let fp = RingContext::with_vars(&vars).unwrap().shared();
    let q = RingContext::new(Field::Rationals, vars.iter().map(|s| s.to_string()).collect()).unwrap().shared();
    let order = MonomialOrder::grevlex(7);
    let gens = ["a*g - b*f", "c*e - d*g"];
    let over = |r: &Arc<RingContext>| -> Vec<String> {
        let f: Vec<Polynomial> = gens.iter().map(|t| Polynomial::parse(r, t).unwrap()).collect();
        buchberger(&f, &order, &GroebnerConfig::default()).unwrap().iter().map(|p| p.to_string()).collect()
    };
    assert_eq!(over(&fp), over(&q));
}
