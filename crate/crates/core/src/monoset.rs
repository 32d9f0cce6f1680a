use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::Exponent;

/// A finite list of monomials. `minimal` marks the output of
/// [`min_mono_gens`]: antichain under divisibility, sorted descending lex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialSet {
    monomials: Vec<Exponent>,
    #[serde(default)]
    minimal: bool,
}

impl MonomialSet {
    pub fn new(monomials: Vec<Exponent>) -> Self {
        Self {
            monomials,
            minimal: false,
        }
    }

    pub fn monomials(&self) -> &[Exponent] {
        &self.monomials
    }

    pub fn into_monomials(self) -> Vec<Exponent> {
        self.monomials
    }

    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// True when some generator divides `m`.
    pub fn contains_multiple(&self, m: &Exponent) -> bool {
        self.monomials.iter().any(|g| g.divides(m))
    }
}

/// Minimal generating set of the monomial ideal spanned by `set`.
pub fn min_mono_gens(set: &MonomialSet) -> Result<MonomialSet> {
    let mut ms = set.monomials.clone();
    let Some(first) = ms.first() else {
        return Err(Error::domain("empty monomial set"));
    };
    let n = first.len();
    if let Some(bad) = ms.iter().find(|m| m.len() != n) {
        return Err(Error::Dimension {
            expected: n,
            found: bad.len(),
        });
    }
    // Ascending degree first so every divisor is seen before its multiples.
    ms.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| b.cmp(a)));
    ms.dedup();
    let mut kept: Vec<Exponent> = Vec::new();
    for m in ms {
        if !kept.iter().any(|g| g.divides(&m)) {
            kept.push(m);
        }
    }
    kept.sort_by(|a, b| b.cmp(a));
    Ok(MonomialSet {
        monomials: kept,
        minimal: true,
    })
}

/// Membership in the key domain: a minimal set with every exponent below `k`.
pub fn in_mk(set: &MonomialSet, k: u32) -> bool {
    if set.is_empty() {
        return false;
    }
    let minimal = match min_mono_gens(set) {
        Ok(m) => m.monomials == set.monomials,
        Err(_) => false,
    };
    minimal && set.monomials.iter().all(|m| m.max_entry() < k)
}
