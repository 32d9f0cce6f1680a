//! Exponent vectors and monomial orders.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent vector `α` of a monomial `x^α`.
///
/// The derived `Ord` is lexicographic with `x_1 > x_2 > ... > x_n`, which is
/// also the canonical storage order for polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn new(exps: Vec<u32>) -> Self {
        Exponent(exps)
    }

    pub fn zero(n: usize) -> Self {
        Exponent(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Exponent(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn max_entry(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// `self | other` (entrywise `<=`).
    pub fn divides(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, or `None` when `other` does not divide `self`.
    pub fn checked_sub(&self, other: &Exponent) -> Option<Exponent> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Exponent)
    }

    pub fn lcm(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn is_coprime(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn scale(&self, k: u32) -> Exponent {
        Exponent(self.0.iter().map(|e| e * k).collect())
    }
}

impl std::ops::Index<usize> for Exponent {
    type Output = u32;

    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl From<Vec<u32>> for Exponent {
    fn from(v: Vec<u32>) -> Self {
        Exponent(v)
    }
}

/// A monomial order on `K[x_1..x_n]`.
///
/// `perm` lists variable indices from most to least significant. Weight
/// orders compare `w · α` first and fall back to lex on `tiebreak`, so every
/// variant is a genuine (total, multiplicative, well-founded) monomial order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MonomialOrder {
    Lex { perm: Vec<usize> },
    Grevlex { perm: Vec<usize> },
    Weight { weights: Vec<u64>, tiebreak: Vec<usize> },
}

fn check_perm(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::Dimension {
            expected: n,
            found: perm.len(),
        });
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::domain(format!("{perm:?} is not a permutation of 0..{n}")));
        }
        seen[p] = true;
    }
    Ok(())
}

impl MonomialOrder {
    pub fn lex(n: usize) -> Self {
        MonomialOrder::Lex {
            perm: (0..n).collect(),
        }
    }

    pub fn grevlex(n: usize) -> Self {
        MonomialOrder::Grevlex {
            perm: (0..n).collect(),
        }
    }

    pub fn lex_perm(perm: Vec<usize>) -> Result<Self> {
        check_perm(&perm, perm.len())?;
        Ok(MonomialOrder::Lex { perm })
    }

    pub fn grevlex_perm(perm: Vec<usize>) -> Result<Self> {
        check_perm(&perm, perm.len())?;
        Ok(MonomialOrder::Grevlex { perm })
    }

    /// Integer weight order with identity-lex tiebreak.
    pub fn weight(weights: Vec<u64>) -> Self {
        let n = weights.len();
        MonomialOrder::Weight {
            weights,
            tiebreak: (0..n).collect(),
        }
    }

    pub fn weight_with_tiebreak(weights: Vec<u64>, tiebreak: Vec<usize>) -> Result<Self> {
        check_perm(&tiebreak, weights.len())?;
        Ok(MonomialOrder::Weight { weights, tiebreak })
    }

    /// Weight order from nonnegative rationals. Denominators are cleared,
    /// which leaves the induced order unchanged.
    pub fn weight_rational(weights: &[BigRational], tiebreak: Vec<usize>) -> Result<Self> {
        let mut lcm = BigInt::one();
        for w in weights {
            if w.is_negative() {
                return Err(Error::domain("weight vectors must be nonnegative"));
            }
            lcm = lcm.lcm(w.denom());
        }
        let scaled = weights
            .iter()
            .map(|w| {
                let v = (w * BigRational::from_integer(lcm.clone())).to_integer();
                v.to_u64()
                    .ok_or_else(|| Error::resource("weight entry does not fit in 64 bits"))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::weight_with_tiebreak(scaled, tiebreak)
    }

    /// Lex order from variable names listed most significant first.
    pub fn lex_by_names<S: AsRef<str>>(vars: &[String], names: &[S]) -> Result<Self> {
        let perm = names
            .iter()
            .map(|n| {
                vars.iter()
                    .position(|v| v == n.as_ref())
                    .ok_or_else(|| Error::domain(format!("unknown variable `{}`", n.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        if perm.len() != vars.len() {
            return Err(Error::Dimension {
                expected: vars.len(),
                found: perm.len(),
            });
        }
        Self::lex_perm(perm)
    }

    pub fn num_vars(&self) -> usize {
        match self {
            MonomialOrder::Lex { perm } | MonomialOrder::Grevlex { perm } => perm.len(),
            MonomialOrder::Weight { weights, .. } => weights.len(),
        }
    }

    /// Checks internal consistency (useful after deserialization).
    pub fn validate(&self) -> Result<()> {
        match self {
            MonomialOrder::Lex { perm } | MonomialOrder::Grevlex { perm } => {
                check_perm(perm, perm.len())
            }
            MonomialOrder::Weight { weights, tiebreak } => check_perm(tiebreak, weights.len()),
        }
    }

    pub fn weight_of(&self, a: &Exponent) -> Option<u128> {
        match self {
            MonomialOrder::Weight { weights, .. } => Some(dot(weights, a)),
            _ => None,
        }
    }

    /// Compares two exponent vectors of the ring length. Callers must pass
    /// vectors of length `num_vars()`; see [`cmp_monomials`] for the checked
    /// entry point.
    pub fn cmp(&self, a: &Exponent, b: &Exponent) -> Ordering {
        match self {
            MonomialOrder::Lex { perm } => lex_cmp(perm, a, b),
            MonomialOrder::Grevlex { perm } => a.degree().cmp(&b.degree()).then_with(|| {
                for &i in perm.iter().rev() {
                    match a[i].cmp(&b[i]) {
                        Ordering::Equal => continue,
                        // more of the smallest variable means smaller
                        other => return other.reverse(),
                    }
                }
                Ordering::Equal
            }),
            MonomialOrder::Weight { weights, tiebreak } => dot(weights, a)
                .cmp(&dot(weights, b))
                .then_with(|| lex_cmp(tiebreak, a, b)),
        }
    }
}

fn lex_cmp(perm: &[usize], a: &Exponent, b: &Exponent) -> Ordering {
    for &i in perm {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

fn dot(w: &[u64], a: &Exponent) -> u128 {
    w.iter()
        .zip(a.as_slice())
        .map(|(&wi, &ai)| wi as u128 * ai as u128)
        .sum()
}

/// Checked comparison: rejects exponent vectors whose length differs from the
/// order's variable count.
pub fn cmp_monomials(order: &MonomialOrder, a: &Exponent, b: &Exponent) -> Result<Ordering> {
    let n = order.num_vars();
    for e in [a, b] {
        if e.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: e.len(),
            });
        }
    }
    Ok(order.cmp(a, b))
}

/// Draws a random monomial order: with equal probability a lex order on a
/// uniformly random variable permutation, or a weight order with entries
/// uniform in `[1, 1000]` and identity-lex tiebreak.
pub fn random_order<R: Rng + ?Sized>(n: usize, rng: &mut R) -> MonomialOrder {
    if rng.gen_bool(0.5) {
        random_lex(n, rng)
    } else {
        random_weight(n, rng)
    }
}

pub fn random_lex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> MonomialOrder {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    MonomialOrder::Lex { perm }
}

pub fn random_weight<R: Rng + ?Sized>(n: usize, rng: &mut R) -> MonomialOrder {
    MonomialOrder::weight((0..n).map(|_| rng.gen_range(1..=1000)).collect())
}
