use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::Exponent;
use crate::poly::Polynomial;
use crate::ring::RingContext;
use crate::toric::graph::LabeledGraph;

/// Edge multiset keyed by edge id.
pub type EdgeMonomial = BTreeMap<u32, u32>;

/// A binomial `plus - minus` in edge variables, stored by edge id so it
/// survives changes of the surrounding ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WalkBinomial {
    pub plus: EdgeMonomial,
    pub minus: EdgeMonomial,
}

fn mono_degree(m: &EdgeMonomial) -> u64 {
    m.values().map(|&e| e as u64).sum()
}

fn divides(a: &EdgeMonomial, b: &EdgeMonomial) -> bool {
    a.iter().all(|(id, e)| b.get(id).is_some_and(|f| e <= f))
}

impl WalkBinomial {
    pub fn new(plus: EdgeMonomial, minus: EdgeMonomial) -> Self {
        let clean = |m: EdgeMonomial| m.into_iter().filter(|&(_, e)| e > 0).collect();
        Self {
            plus: clean(plus),
            minus: clean(minus),
        }
    }

    /// From an exponent vector over edge ids: positive entries form `plus`,
    /// negative entries `minus`.
    pub fn from_signed(entries: impl IntoIterator<Item = (u32, i32)>) -> Self {
        let mut plus = BTreeMap::new();
        let mut minus = BTreeMap::new();
        for (id, z) in entries {
            if z > 0 {
                plus.insert(id, z as u32);
            } else if z < 0 {
                minus.insert(id, z.unsigned_abs());
            }
        }
        Self { plus, minus }
    }

    pub fn flipped(&self) -> Self {
        Self {
            plus: self.minus.clone(),
            minus: self.plus.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.plus == self.minus
    }

    /// Orientation whose `plus` side is larger in lex order with smaller
    /// edge ids more significant; matches the sign convention of
    /// [`Polynomial::sign_normalized`] when variables follow edge ids.
    pub fn canonical(&self) -> Self {
        let ids: BTreeSet<u32> = self.plus.keys().chain(self.minus.keys()).copied().collect();
        for id in ids {
            let a = self.plus.get(&id).copied().unwrap_or(0);
            let b = self.minus.get(&id).copied().unwrap_or(0);
            if a != b {
                return if a > b { self.clone() } else { self.flipped() };
            }
        }
        self.clone()
    }

    pub fn degrees(&self) -> (u64, u64) {
        (mono_degree(&self.plus), mono_degree(&self.minus))
    }

    pub fn support(&self) -> BTreeSet<u32> {
        self.plus.keys().chain(self.minus.keys()).copied().collect()
    }

    /// Total number of edge traversals, i.e. the length of the walk.
    pub fn walk_length(&self) -> u64 {
        let (a, b) = self.degrees();
        a + b
    }

    /// Exponent of `edge` on the side where it occurs, `+` for plus.
    pub fn signed_exponent(&self, edge: u32) -> i32 {
        self.plus.get(&edge).map(|&e| e as i32).unwrap_or(0)
            - self.minus.get(&edge).map(|&e| e as i32).unwrap_or(0)
    }

    /// Side-wise divisibility in the same orientation.
    pub fn divides_sidewise(&self, other: &WalkBinomial) -> bool {
        divides(&self.plus, &other.plus) && divides(&self.minus, &other.minus)
    }

    /// True when `self` divides `other` side-wise in either orientation
    /// and the two are different binomials up to sign.
    pub fn properly_divides(&self, other: &WalkBinomial) -> bool {
        let (a, b) = (self.canonical(), other.canonical());
        a != b && (a.divides_sidewise(&b) || a.flipped().divides_sidewise(&b))
    }

    /// Substitutes each edge id through `f`: `None` drops the variable
    /// (sets it to 1), `Some(m)` replaces it by the edge monomial `m`.
    pub fn substitute(&self, f: impl Fn(u32) -> Option<EdgeMonomial>) -> Self {
        let map = |m: &EdgeMonomial| {
            let mut out = EdgeMonomial::new();
            for (&id, &e) in m {
                if let Some(img) = f(id) {
                    for (j, k) in img {
                        *out.entry(j).or_insert(0) += k * e;
                    }
                }
            }
            out
        };
        Self::new(map(&self.plus), map(&self.minus))
    }

    /// Cancels common factors of the two sides.
    pub fn cancel_common(&self) -> Self {
        let mut plus = self.plus.clone();
        let mut minus = self.minus.clone();
        for (id, e) in self.plus.iter() {
            if let Some(f) = self.minus.get(id) {
                let c = (*e).min(*f);
                *plus.get_mut(id).unwrap() -= c;
                *minus.get_mut(id).unwrap() -= c;
            }
        }
        Self::new(plus, minus)
    }

    pub fn to_polynomial(&self, graph: &LabeledGraph, ring: &Arc<RingContext>) -> Result<Polynomial> {
        let to_exp = |m: &EdgeMonomial| -> Result<Exponent> {
            let mut v = vec![0u32; ring.num_vars()];
            for (&id, &e) in m {
                let i = graph
                    .var_index(id)
                    .ok_or_else(|| Error::domain(format!("unknown edge id {id}")))?;
                v[i] += e;
            }
            Ok(Exponent::new(v))
        };
        if ring.num_vars() != graph.num_edges() {
            return Err(Error::Dimension {
                expected: graph.num_edges(),
                found: ring.num_vars(),
            });
        }
        Polynomial::binomial(ring, to_exp(&self.plus)?, to_exp(&self.minus)?)
    }

    /// Reads a binomial `m1 - m2` (coefficients `1` and `-1`) over the edge
    /// ring of `graph`.
    pub fn from_polynomial(graph: &LabeledGraph, p: &Polynomial) -> Result<Self> {
        let ring = p.ring();
        if ring.num_vars() != graph.num_edges() {
            return Err(Error::Dimension {
                expected: graph.num_edges(),
                found: ring.num_vars(),
            });
        }
        let field: Field = ring.field();
        let t = p.terms();
        let minus_one = field.neg(&field.one());
        let (pos, neg) = match t {
            [a, b] if field.is_one(&a.coeff) && b.coeff == minus_one => (&a.exp, &b.exp),
            [a, b] if a.coeff == minus_one && field.is_one(&b.coeff) => (&b.exp, &a.exp),
            _ => return Err(Error::domain(format!("`{p}` is not a pure binomial m1 - m2"))),
        };
        let to_map = |e: &Exponent| -> EdgeMonomial {
            e.as_slice()
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| (graph.edge_of_var(i).unwrap(), x))
                .collect()
        };
        Ok(Self::new(to_map(pos), to_map(neg)))
    }

    pub fn display(&self, graph: &LabeledGraph) -> String {
        let side = |m: &EdgeMonomial| {
            if m.is_empty() {
                return "1".to_string();
            }
            m.iter()
                .map(|(&id, &e)| {
                    if e == 1 {
                        graph.edge_name(id)
                    } else {
                        format!("{}^{e}", graph.edge_name(id))
                    }
                })
                .collect::<Vec<_>>()
                .join("*")
        };
        format!("{} - {}", side(&self.plus), side(&self.minus))
    }
}

impl fmt::Display for WalkBinomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |m: &EdgeMonomial| {
            m.iter()
                .map(|(id, e)| format!("e{id}^{e}"))
                .collect::<Vec<_>>()
                .join("*")
        };
        write!(f, "{} - {}", side(&self.plus), side(&self.minus))
    }
}

/// `phi`-balance test: at every vertex the plus side and the minus side
/// cover the same number of edge ends.
pub fn is_toric_member(b: &WalkBinomial, graph: &LabeledGraph) -> Result<bool> {
    let mut balance: BTreeMap<u32, i64> = BTreeMap::new();
    for (m, sign) in [(&b.plus, 1i64), (&b.minus, -1i64)] {
        for (&id, &e) in m {
            let (u, v) = graph
                .edge(id)
                .ok_or_else(|| Error::domain(format!("unknown edge id {id}")))?;
            *balance.entry(u).or_insert(0) += sign * e as i64;
            *balance.entry(v).or_insert(0) += sign * e as i64;
        }
    }
    Ok(balance.values().all(|&x| x == 0))
}

/// Canonical orientation, sorted, duplicates removed.
pub fn normalize_set(bs: impl IntoIterator<Item = WalkBinomial>) -> Vec<WalkBinomial> {
    let set: BTreeSet<WalkBinomial> = bs
        .into_iter()
        .filter(|b| !b.is_zero())
        .map(|b| b.canonical())
        .collect();
    set.into_iter().collect()
}

/// Keeps only elements without a proper side-wise divisor in the set.
/// Exact as a primitivity filter whenever the set contains every primitive
/// binomial dividing one of its members.
pub fn primitive_filter(bs: impl IntoIterator<Item = WalkBinomial>) -> Vec<WalkBinomial> {
    let mut items = normalize_set(bs);
    items.sort_by_key(|b| (b.walk_length(), b.clone()));
    let mut kept: Vec<WalkBinomial> = Vec::new();
    for b in items {
        if !kept.iter().any(|k| k.properly_divides(&b)) {
            kept.push(b);
        }
    }
    kept.sort();
    kept
}
