//! Sparse multivariate polynomials over an exact field.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{parse_rational, FieldElement};
use crate::monomial::{Exponent, MonomialOrder};
use crate::ring::RingContext;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: FieldElement,
    pub exp: Exponent,
}

/// A polynomial stored in canonical form: no zero coefficients, no repeated
/// exponents, terms in descending lex order (`x_1 > ... > x_n`). Structural
/// equality is therefore mathematical equality.
#[derive(Debug, Clone)]
pub struct Polynomial {
    ring: Arc<RingContext>,
    terms: Vec<Term>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl Polynomial {
    pub fn zero(ring: &Arc<RingContext>) -> Self {
        Self {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates and
    /// dropping zeros.
    pub fn from_terms(ring: &Arc<RingContext>, terms: Vec<(FieldElement, Exponent)>) -> Result<Self> {
        let field = ring.field();
        let mut acc: BTreeMap<Exponent, FieldElement> = BTreeMap::new();
        for (c, e) in terms {
            if e.len() != ring.num_vars() {
                return Err(Error::Dimension {
                    expected: ring.num_vars(),
                    found: e.len(),
                });
            }
            match acc.get_mut(&e) {
                Some(v) => *v = field.add(v, &c),
                None => {
                    acc.insert(e, c);
                }
            }
        }
        let terms = acc
            .into_iter()
            .rev()
            .filter(|(_, c)| !field.is_zero(c))
            .map(|(exp, coeff)| Term { coeff, exp })
            .collect();
        Ok(Self {
            ring: ring.clone(),
            terms,
        })
    }

    /// Builds from terms sorted in any monomial order.
    pub(crate) fn from_unsorted_unique(ring: Arc<RingContext>, mut terms: Vec<Term>) -> Self {
        terms.sort_by(|a, b| b.exp.cmp(&a.exp));
        Self { ring, terms }
    }

    pub fn monomial(ring: &Arc<RingContext>, coeff: FieldElement, exp: Exponent) -> Result<Self> {
        Self::from_terms(ring, vec![(coeff, exp)])
    }

    /// `x^plus - x^minus`.
    pub fn binomial(ring: &Arc<RingContext>, plus: Exponent, minus: Exponent) -> Result<Self> {
        let f = ring.field();
        Self::from_terms(ring, vec![(f.one(), plus), (f.from_i64(-1), minus)])
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ring
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.iter().map(|t| t.exp.degree()).max().unwrap_or(0)
    }

    pub fn same_ring(&self, other: &Polynomial) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring
    }

    pub fn ensure_same_ring(&self, other: &Polynomial) -> Result<()> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    /// Index of the leading term under `order`.
    pub fn leading_index(&self, order: &MonomialOrder) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, t) in self.terms.iter().enumerate() {
            best = match best {
                Some(b) if order.cmp(&self.terms[b].exp, &t.exp) != Ordering::Less => Some(b),
                _ => Some(i),
            };
        }
        best
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<&Term> {
        self.leading_index(order).map(|i| &self.terms[i])
    }

    pub fn leading_monomial(&self, order: &MonomialOrder) -> Option<&Exponent> {
        self.leading_term(order).map(|t| &t.exp)
    }

    /// Terms sorted descending under `order`.
    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<Term> {
        let mut t = self.terms.clone();
        t.sort_by(|a, b| order.cmp(&b.exp, &a.exp));
        t
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.ensure_same_ring(other)?;
        let terms = self
            .terms
            .iter()
            .chain(&other.terms)
            .map(|t| (t.coeff.clone(), t.exp.clone()))
            .collect();
        Polynomial::from_terms(&self.ring, terms)
    }

    pub fn neg(&self) -> Polynomial {
        let f = self.ring.field();
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: f.neg(&t.coeff),
                    exp: t.exp.clone(),
                })
                .collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.ensure_same_ring(other)?;
        let f = self.ring.field();
        let mut terms = Vec::with_capacity(self.len() * other.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push((f.mul(&a.coeff, &b.coeff), a.exp.add(&b.exp)));
            }
        }
        Polynomial::from_terms(&self.ring, terms)
    }

    /// `c * x^shift * self`.
    pub fn mul_term(&self, c: &FieldElement, shift: &Exponent) -> Polynomial {
        let f = self.ring.field();
        if f.is_zero(c) {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: f.mul(c, &t.coeff),
                    exp: t.exp.add(shift),
                })
                .collect(),
        }
    }

    /// Scales so the leading coefficient under `order` is one.
    pub fn monic(&self, order: &MonomialOrder) -> Polynomial {
        let f = self.ring.field();
        match self.leading_term(order) {
            None => self.clone(),
            Some(lt) => {
                let inv = f.inv(&lt.coeff).expect("nonzero leading coefficient");
                self.mul_term(&inv, &Exponent::zero(self.ring.num_vars()))
            }
        }
    }

    /// Normalizes sign so the canonical (lex-first) coefficient renders
    /// nonnegative. Used for equality up to sign.
    pub fn sign_normalized(&self) -> Polynomial {
        match self.terms.first() {
            Some(t) if self.ring.field().is_negative(&t.coeff) => self.neg(),
            _ => self.clone(),
        }
    }

    /// Substitutes `1` for each variable flagged in `vars`.
    pub fn substitute_one(&self, vars: &[bool]) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let e = t
                    .exp
                    .as_slice()
                    .iter()
                    .zip(vars)
                    .map(|(&x, &kill)| if kill { 0 } else { x })
                    .collect::<Vec<_>>();
                (t.coeff.clone(), Exponent::new(e))
            })
            .collect();
        Polynomial::from_terms(&self.ring, terms).expect("same dimension")
    }

    /// Parses the text form, e.g. `a*g - b*f` or `2/3*x^2*y + 1`.
    pub fn parse(ring: &Arc<RingContext>, text: &str) -> Result<Polynomial> {
        let terms = parse_terms(ring, text)?;
        let field = ring.field();
        let terms = terms
            .into_iter()
            .map(|(q, e)| field.from_rational(&q).map(|c| (c, e)))
            .collect::<Result<Vec<_>>>()?;
        Polynomial::from_terms(ring, terms)
    }

    pub fn format_monomial(ring: &RingContext, exp: &Exponent) -> String {
        let parts: Vec<String> = exp
            .as_slice()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    ring.vars()[i].clone()
                } else {
                    format!("{}^{}", ring.vars()[i], e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    /// JSON form: list of `[coeff_string, [e_1, ..., e_n]]`.
    pub fn to_json_terms(&self) -> Vec<(String, Vec<u32>)> {
        let f = self.ring.field();
        self.terms
            .iter()
            .map(|t| (f.render(&t.coeff), t.exp.as_slice().to_vec()))
            .collect()
    }

    pub fn from_json_terms(ring: &Arc<RingContext>, terms: &[(String, Vec<u32>)]) -> Result<Self> {
        let f = ring.field();
        let terms = terms
            .iter()
            .map(|(c, e)| Ok((f.parse_element(c)?, Exponent::new(e.clone()))))
            .collect::<Result<Vec<_>>>()?;
        Polynomial::from_terms(ring, terms)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        let field = self.ring.field();
        for (i, t) in self.terms.iter().enumerate() {
            let neg = field.is_negative(&t.coeff);
            let abs = if neg { field.neg(&t.coeff) } else { t.coeff.clone() };
            match (i, neg) {
                (0, true) => write!(out, "-")?,
                (0, false) => {}
                (_, true) => write!(out, " - ")?,
                (_, false) => write!(out, " + ")?,
            }
            let mono = Polynomial::format_monomial(&self.ring, &t.exp);
            if t.exp.is_one() {
                write!(out, "{}", field.render(&abs))?;
            } else if field.is_one(&abs) {
                write!(out, "{mono}")?;
            } else {
                write!(out, "{}*{mono}", field.render(&abs))?;
            }
        }
        Ok(())
    }
}

fn parse_terms(ring: &RingContext, text: &str) -> Result<Vec<(BigRational, Exponent)>> {
    let s: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::parse("empty polynomial"));
    }
    let n = ring.num_vars();
    let mut out = Vec::new();
    let mut i = 0;
    loop {
        let mut sign = BigRational::one();
        while i < s.len() && (s[i] == '+' || s[i] == '-') {
            if s[i] == '-' {
                sign = -sign;
            }
            i += 1;
        }
        let mut coeff = sign;
        let mut exp = vec![0u32; n];
        let mut factors = 0;
        loop {
            if i >= s.len() {
                return Err(Error::parse(format!("dangling operator in `{text}`")));
            }
            if s[i].is_ascii_digit() {
                let start = i;
                while i < s.len() && (s[i].is_ascii_digit() || s[i] == '/') {
                    i += 1;
                }
                let num: String = s[start..i].iter().collect();
                coeff *= parse_rational(&num)?;
            } else if s[i].is_alphabetic() || s[i] == '_' {
                let start = i;
                while i < s.len() && (s[i].is_alphanumeric() || s[i] == '_' || s[i] == '\'') {
                    i += 1;
                }
                let name: String = s[start..i].iter().collect();
                let idx = ring
                    .var_index(&name)
                    .ok_or_else(|| Error::parse(format!("unknown variable `{name}`")))?;
                let mut power = 1u32;
                if i < s.len() && s[i] == '^' {
                    i += 1;
                    let start = i;
                    while i < s.len() && s[i].is_ascii_digit() {
                        i += 1;
                    }
                    let digits: String = s[start..i].iter().collect();
                    power = digits
                        .parse()
                        .map_err(|_| Error::parse(format!("bad exponent after `{name}^`")))?;
                }
                exp[idx] += power;
            } else {
                return Err(Error::parse(format!("unexpected `{}` in `{text}`", s[i])));
            }
            factors += 1;
            if i < s.len() && s[i] == '*' {
                i += 1;
                continue;
            }
            break;
        }
        debug_assert!(factors > 0);
        out.push((coeff, Exponent::new(exp)));
        if i >= s.len() {
            break;
        }
        if s[i] != '+' && s[i] != '-' {
            return Err(Error::parse(format!("unexpected `{}` in `{text}`", s[i])));
        }
    }
    Ok(out)
}

/// Serializable polynomial list bound to its ring.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolySetJson {
    pub ring: RingContext,
    pub polynomials: Vec<Vec<(String, Vec<u32>)>>,
}

impl PolySetJson {
    pub fn from_polys(ring: &RingContext, polys: &[Polynomial]) -> Self {
        Self {
            ring: ring.clone(),
            polynomials: polys.iter().map(|p| p.to_json_terms()).collect(),
        }
    }

    pub fn into_polys(self) -> Result<(Arc<RingContext>, Vec<Polynomial>)> {
        let ring = Arc::new(self.ring);
        let polys = self
            .polynomials
            .iter()
            .map(|t| Polynomial::from_json_terms(&ring, t))
            .collect::<Result<Vec<_>>>()?;
        Ok((ring, polys))
    }
}
