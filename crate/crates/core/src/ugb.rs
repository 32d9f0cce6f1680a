//! Universal Gröbner bases: verification, trimming to a reduced basis, and
//! enumeration of every realizable initial ideal via term selections.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feasibility::{find_positive_weight, DEFAULT_MAX_ROWS};
use crate::groebner::{is_groebner_basis, reduce_groebner_basis, GroebnerConfig};
use crate::keys::{canonical_key, GrobnerKey, KeyList};
use crate::monomial::{Exponent, MonomialOrder};
use crate::monoset::MonomialSet;
use crate::poly::{PolySetJson, Polynomial};
use crate::ring::RingContext;

/// Default cap on the number of term selections visited by exact enumeration.
pub const DEFAULT_MAX_SELECTIONS: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalBasis {
    ring: Arc<RingContext>,
    elements: Vec<Polynomial>,
    provenance: String,
}

#[derive(Serialize, Deserialize)]
struct UniversalBasisJson {
    #[serde(flatten)]
    set: PolySetJson,
    #[serde(default)]
    provenance: String,
}

impl UniversalBasis {
    /// Wraps a list of polynomials, dropping exact duplicates. Elements must
    /// be nonzero and share one ring.
    pub fn new(elements: Vec<Polynomial>, provenance: impl Into<String>) -> Result<Self> {
        let Some(first) = elements.first() else {
            return Err(Error::domain("a universal basis needs at least one element"));
        };
        let ring = first.ring().clone();
        let mut out: Vec<Polynomial> = Vec::with_capacity(elements.len());
        for p in elements {
            if !(Arc::ptr_eq(&ring, p.ring()) || *ring == **p.ring()) {
                return Err(Error::RingMismatch);
            }
            if p.is_zero() {
                return Err(Error::domain("universal basis contains the zero polynomial"));
            }
            if !out.contains(&p) {
                out.push(p);
            }
        }
        Ok(Self {
            ring,
            elements: out,
            provenance: provenance.into(),
        })
    }

    pub fn with_ring(ring: &Arc<RingContext>, elements: Vec<Polynomial>, provenance: impl Into<String>) -> Result<Self> {
        if elements.is_empty() {
            return Ok(Self {
                ring: ring.clone(),
                elements,
                provenance: provenance.into(),
            });
        }
        let b = Self::new(elements, provenance)?;
        if *b.ring != **ring {
            return Err(Error::RingMismatch);
        }
        Ok(b)
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ring
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    /// Largest exponent entry over all terms.
    pub fn max_exponent(&self) -> u32 {
        self.elements
            .iter()
            .flat_map(|p| p.terms())
            .map(|t| t.exp.max_entry())
            .max()
            .unwrap_or(0)
    }

    /// Smallest key bound admitting every key this basis can produce.
    pub fn default_k_bound(&self) -> u32 {
        (self.max_exponent() + 1).max(2)
    }

    /// Product of term counts, i.e. the number of term selections.
    pub fn selection_count(&self) -> u128 {
        self.elements
            .iter()
            .map(|p| p.len() as u128)
            .try_fold(1u128, |acc, m| acc.checked_mul(m))
            .unwrap_or(u128::MAX)
    }

    /// Largest term count `m` and element count `r`.
    pub fn shape(&self) -> (usize, usize) {
        let m = self.elements.iter().map(Polynomial::len).max().unwrap_or(0);
        (m, self.elements.len())
    }

    /// Checks the shape expected of a toric basis: every element is a
    /// binomial with coprime, equal-degree monomials.
    pub fn check_toric_shape(&self) -> Result<()> {
        for p in &self.elements {
            let t = p.terms();
            let ok = t.len() == 2
                && t[0].exp.degree() == t[1].exp.degree()
                && t[0].exp.is_coprime(&t[1].exp);
            if !ok {
                return Err(Error::domain(format!("`{p}` is not a homogeneous pure binomial")));
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

impl Serialize for UniversalBasis {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        UniversalBasisJson {
            set: PolySetJson::from_polys(&self.ring, &self.elements),
            provenance: self.provenance.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for UniversalBasis {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = UniversalBasisJson::deserialize(d)?;
        let (ring, polys) = j.set.into_polys().map_err(D::Error::custom)?;
        Self::with_ring(&ring, polys, j.provenance).map_err(D::Error::custom)
    }
}

/// True iff `basis` is a Gröbner basis under `order` (all S-pairs reduce to 0).
pub fn verify_gb_under_order(
    basis: &UniversalBasis,
    order: &MonomialOrder,
    config: &GroebnerConfig,
) -> Result<bool> {
    if basis.is_empty() {
        return Err(Error::domain("cannot verify an empty basis"));
    }
    is_groebner_basis(basis.elements(), order, config)
}

/// Extracts the reduced Gröbner basis for `order` from a universal basis:
/// keep the elements whose leading monomials are minimal, then interreduce.
pub fn trim(basis: &UniversalBasis, order: &MonomialOrder) -> Result<Vec<Polynomial>> {
    let leads: Vec<Exponent> = basis
        .elements()
        .iter()
        .map(|p| p.leading_monomial(order).cloned().unwrap())
        .collect();
    let mut keep = Vec::new();
    for (i, li) in leads.iter().enumerate() {
        let redundant = leads
            .iter()
            .enumerate()
            .any(|(j, lj)| j != i && lj.divides(li) && (lj != li || j < i));
        if !redundant {
            keep.push(basis.elements()[i].clone());
        }
    }
    reduce_groebner_basis(&keep, order)
}

/// One term index per basis element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TermSelection {
    pub picks: Vec<usize>,
}

fn selection_diffs(basis: &UniversalBasis, picks: &[usize]) -> Result<Vec<Vec<i64>>> {
    let mut rows = Vec::new();
    for (p, &k) in basis.elements().iter().zip(picks) {
        let terms = p.terms();
        if k >= terms.len() {
            return Err(Error::domain(format!(
                "term index {k} out of range for `{p}`"
            )));
        }
        let a = terms[k].exp.as_slice();
        for (j, t) in terms.iter().enumerate() {
            if j != k {
                rows.push(
                    a.iter()
                        .zip(t.exp.as_slice())
                        .map(|(&x, &y)| x as i64 - y as i64)
                        .collect(),
                );
            }
        }
    }
    Ok(rows)
}

fn to_u64_weights(w: Vec<BigInt>) -> Result<Vec<u64>> {
    w.into_iter()
        .map(|x| {
            x.to_u64()
                .ok_or_else(|| Error::resource("witness weight does not fit in 64 bits"))
        })
        .collect()
}

/// A nonnegative integer weight vector under which every picked term
/// strictly beats the other terms of its element, or `None`.
pub fn selection_feasible(
    basis: &UniversalBasis,
    selection: &TermSelection,
    max_rows: usize,
) -> Result<Option<Vec<u64>>> {
    if selection.picks.len() != basis.len() {
        return Err(Error::Dimension {
            expected: basis.len(),
            found: selection.picks.len(),
        });
    }
    let diffs = selection_diffs(basis, &selection.picks)?;
    match find_positive_weight(&diffs, basis.ring().num_vars(), max_rows)? {
        Some(w) => Ok(Some(to_u64_weights(w)?)),
        None => Ok(None),
    }
}

/// Leading monomials of every basis element under `order`, minimalized.
pub fn leading_key_gens(basis: &UniversalBasis, order: &MonomialOrder) -> Result<MonomialSet> {
    crate::groebner::leading_ideal(basis.elements(), order)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum EnumerationMode {
    Exact,
    Sample { count: usize, seed: u64 },
}

impl std::str::FromStr for EnumerationMode {
    type Err = Error;

    /// `exact` or `sample:N` (seed supplied separately).
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(EnumerationMode::Exact),
            _ => {
                let n = s
                    .strip_prefix("sample:")
                    .and_then(|n| n.parse().ok())
                    .ok_or_else(|| Error::parse(format!("bad mode `{s}` (use exact or sample:N)")))?;
                Ok(EnumerationMode::Sample { count: n, seed: 0 })
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EnumerationConfig {
    pub k_bound: Option<u32>,
    pub max_selections: u128,
    pub max_rows: usize,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        Self {
            k_bound: None,
            max_selections: DEFAULT_MAX_SELECTIONS,
            max_rows: DEFAULT_MAX_ROWS,
        }
    }
}

/// Enumerates keys of the ideal generated by a universal basis.
///
/// Exact mode walks all term selections depth-first, pruning any prefix whose
/// constraints are already infeasible; each surviving leaf carries its weight
/// witness. Sample mode draws seeded random orders (alternating lex and
/// weight) and records the resulting keys, each certified afterwards.
pub fn enumerate_keys(
    basis: &UniversalBasis,
    mode: EnumerationMode,
    config: &EnumerationConfig,
) -> Result<KeyList> {
    if basis.is_empty() {
        return Err(Error::domain("cannot enumerate keys of an empty basis"));
    }
    let k_bound = config.k_bound.unwrap_or_else(|| basis.default_k_bound());
    match mode {
        EnumerationMode::Exact => enumerate_exact(basis, k_bound, config),
        EnumerationMode::Sample { count, seed } => enumerate_sample(basis, count, seed, k_bound, config),
    }
}

fn key_from_picks(basis: &UniversalBasis, picks: &[usize], k_bound: u32) -> Result<GrobnerKey> {
    let ms = basis
        .elements()
        .iter()
        .zip(picks)
        .map(|(p, &k)| p.terms()[k].exp.clone())
        .collect();
    canonical_key(&MonomialSet::new(ms), k_bound)
}

fn enumerate_exact(basis: &UniversalBasis, k_bound: u32, config: &EnumerationConfig) -> Result<KeyList> {
    let total = basis.selection_count();
    if total > config.max_selections {
        return Err(Error::resource(format!(
            "{total} term selections exceed the exact-enumeration cap of {}; use sample mode",
            config.max_selections
        )));
    }
    let found = descend(basis, &mut Vec::new(), None, k_bound, config.max_rows)?;
    Ok(KeyList::new(found))
}

/// Prefix depth below which sibling subtrees are explored in parallel.
const PARALLEL_DEPTH: usize = 6;

type Found = Vec<(GrobnerKey, Option<Vec<u64>>)>;

/// True when `w` already makes the last pick beat the other terms of its
/// element, so the extended prefix needs no new feasibility solve.
fn witness_extends(basis: &UniversalBasis, picks: &[usize], w: &[BigInt]) -> bool {
    let i = picks.len() - 1;
    let terms = basis.elements()[i].terms();
    let a = terms[picks[i]].exp.as_slice();
    terms.iter().enumerate().all(|(j, t)| {
        j == picks[i]
            || a.iter()
                .zip(t.exp.as_slice())
                .zip(w)
                .map(|((&x, &y), wi)| BigInt::from(x as i64 - y as i64) * wi)
                .sum::<BigInt>()
                > BigInt::from(0)
    })
}

fn descend(
    basis: &UniversalBasis,
    picks: &mut Vec<usize>,
    parent: Option<&[BigInt]>,
    k_bound: u32,
    max_rows: usize,
) -> Result<Found> {
    let w = match parent {
        Some(w) if witness_extends(basis, picks, w) => w.to_vec(),
        _ if picks.is_empty() => vec![BigInt::from(0); basis.ring().num_vars()],
        _ => {
            let diffs = selection_diffs(basis, picks)?;
            match find_positive_weight(&diffs, basis.ring().num_vars(), max_rows)? {
                Some(w) => w,
                None => return Ok(Vec::new()),
            }
        }
    };
    if picks.len() == basis.len() {
        return Ok(vec![(key_from_picks(basis, picks, k_bound)?, Some(to_u64_weights(w)?))]);
    }
    let width = basis.elements()[picks.len()].len();
    let parent = (!picks.is_empty()).then_some(w.as_slice());
    if picks.len() < PARALLEL_DEPTH {
        let branches = (0..width)
            .into_par_iter()
            .map(|k| {
                let mut p = picks.clone();
                p.push(k);
                descend(basis, &mut p, parent, k_bound, max_rows)
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(branches.into_iter().flatten().collect());
    }
    let mut found = Vec::new();
    for k in 0..width {
        picks.push(k);
        found.extend(descend(basis, picks, parent, k_bound, max_rows)?);
        picks.pop();
    }
    Ok(found)
}

/// Alternates random-permutation lex orders and weight orders with entries
/// uniform in `1..=1000`.
pub fn sample_order<R: Rng + ?Sized>(n: usize, i: usize, rng: &mut R) -> MonomialOrder {
    if i.is_multiple_of(2) {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        MonomialOrder::Lex { perm }
    } else {
        let weights = (0..n).map(|_| rng.gen_range(1..=1000u64)).collect();
        MonomialOrder::Weight {
            weights,
            tiebreak: (0..n).collect(),
        }
    }
}

fn enumerate_sample(
    basis: &UniversalBasis,
    count: usize,
    seed: u64,
    k_bound: u32,
    config: &EnumerationConfig,
) -> Result<KeyList> {
    let n = basis.ring().num_vars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = std::collections::HashMap::new();
    for i in 0..count {
        let order = sample_order(n, i, &mut rng);
        let picks: Vec<usize> = basis
            .elements()
            .iter()
            .map(|p| p.leading_index(&order).unwrap())
            .collect();
        let key = key_from_picks(basis, &picks, k_bound)?;
        seen.entry(key).or_insert(picks);
    }
    let mut entries: Vec<(GrobnerKey, Vec<usize>)> = seen.into_iter().collect();
    entries.sort_by(|a, b| b.0.gens().monomials().cmp(a.0.gens().monomials()));
    let certified = entries
        .into_par_iter()
        .map(|(key, picks)| {
            let w = selection_feasible(basis, &TermSelection { picks }, config.max_rows)?;
            Ok((key, w))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KeyList::new(certified))
}

/// The order a witness vector induces: weights first, identity lex tiebreak.
pub fn witness_order(w: &[u64]) -> MonomialOrder {
    MonomialOrder::weight(w.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring7() -> Arc<RingContext> {
        RingContext::with_vars(&["a", "b", "c", "d", "e", "f", "g"])
            .unwrap()
            .shared()
    }

    fn basis(r: &Arc<RingContext>, ps: &[&str]) -> UniversalBasis {
        UniversalBasis::new(
            ps.iter().map(|s| Polynomial::parse(r, s).unwrap()).collect(),
            "test",
        )
        .unwrap()
    }

    fn pick(b: &UniversalBasis, monos: &[&str]) -> TermSelection {
        let r = b.ring();
        TermSelection {
            picks: b
                .elements()
                .iter()
                .zip(monos)
                .map(|(p, m)| {
                    let e = Polynomial::parse(r, m).unwrap().terms()[0].exp.clone();
                    p.terms().iter().position(|t| t.exp == e).unwrap()
                })
                .collect(),
        }
    }

    #[test]
    fn verify_examples() {
        let r = ring7();
        let cfg = GroebnerConfig::default();
        let u = basis(&r, &["a*g - b*f", "c*e - d*g", "a*c*e - b*d*f"]);
        assert!(verify_gb_under_order(&u, &MonomialOrder::lex(7), &cfg).unwrap());
        let g = basis(&r, &["a*g - b*f", "c*e - d*g"]);
        let o = MonomialOrder::lex_by_names(r.vars(), &["d", "a", "b", "c", "e", "f", "g"]).unwrap();
        assert!(!verify_gb_under_order(&g, &o, &cfg).unwrap());
        let single = basis(&r, &["a*g - b*f"]);
        assert!(verify_gb_under_order(&single, &o, &cfg).unwrap());
    }

    #[test]
    fn trim_examples() {
        let r = ring7();
        let u = basis(&r, &["a*g - b*f", "c*e - d*g", "a*c*e - b*d*f"]);
        let t = trim(&u, &MonomialOrder::lex(7)).unwrap();
        let expected = basis(&r, &["a*g - b*f", "c*e - d*g"]);
        assert_eq!(t, expected.elements());
        let single = basis(&r, &["a*g - b*f"]);
        // grevlex prefers bf over ag, so the monic form flips the sign
        assert_eq!(trim(&single, &MonomialOrder::grevlex(7)).unwrap(), vec![single.elements()[0].neg()]);
    }

    #[test]
    fn feasibility_examples() {
        let r = ring7();
        let u = basis(&r, &["a*g - b*f", "c*e - d*g", "a*c*e - b*d*f"]);
        let sel = pick(&u, &["b*f", "c*e", "b*d*f"]);
        let w = selection_feasible(&u, &sel, 1000).unwrap().unwrap();
        let o = witness_order(&w);
        for (p, &k) in u.elements().iter().zip(&sel.picks) {
            assert_eq!(p.leading_index(&o), Some(k));
        }
        let bad = pick(&u, &["a*g", "c*e", "b*d*f"]);
        assert!(selection_feasible(&u, &bad, 1000).unwrap().is_none());

        let single = basis(&r, &["a*g - b*f"]);
        let w = selection_feasible(&single, &pick(&single, &["a*g"]), 1000)
            .unwrap()
            .unwrap();
        assert!(w[0] + w[6] > w[1] + w[5]);
    }

    #[test]
    fn exact_enumeration_small() {
        let r = ring7();
        let single = basis(&r, &["a*g - b*f"]);
        assert_eq!(
            enumerate_keys(&single, EnumerationMode::Exact, &EnumerationConfig::default())
                .unwrap()
                .len(),
            2
        );
        let u = basis(&r, &["a*g - b*f", "c*e - d*g", "a*c*e - b*d*f"]);
        let keys = enumerate_keys(&u, EnumerationMode::Exact, &EnumerationConfig::default()).unwrap();
        assert_eq!(keys.len(), 5);
        let sample = enumerate_keys(
            &u,
            EnumerationMode::Sample { count: 300, seed: 9 },
            &EnumerationConfig::default(),
        )
        .unwrap();
        for (k, w) in sample.iter() {
            assert!(keys.contains(k));
            assert!(w.is_some());
        }
    }

    #[test]
    fn cap_is_enforced() {
        let r = ring7();
        let u = basis(&r, &["a*g - b*f", "c*e - d*g", "a*c*e - b*d*f"]);
        let cfg = EnumerationConfig {
            max_selections: 7,
            ..Default::default()
        };
        assert!(matches!(
            enumerate_keys(&u, EnumerationMode::Exact, &cfg),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let r = ring7();
        let u = basis(&r, &["a*g - b*f", "c*e - d*g"]);
        let back = UniversalBasis::from_json(&u.to_json().unwrap()).unwrap();
        assert_eq!(back, u);
        assert_eq!(back.provenance(), "test");
    }
}
