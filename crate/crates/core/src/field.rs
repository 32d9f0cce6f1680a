//! Coefficient fields: exact rationals and prime fields.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default prime for finite-field arithmetic.
pub const DEFAULT_PRIME: u64 = 32003;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    Prime(u64),
}

/// A coefficient. Rationals are kept reduced with a positive denominator
/// (guaranteed by `BigRational`); residues always lie in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Rational(BigRational),
    Residue(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl Field {
    /// Builds a prime field, rejecting composite moduli and moduli too large
    /// for 128-bit intermediate products.
    pub fn prime(p: u64) -> Result<Self> {
        if p >= (1u64 << 62) {
            return Err(Error::domain(format!("modulus {p} too large")));
        }
        if !is_prime(p) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(&self) -> FieldElement {
        match self {
            Field::Rationals => FieldElement::Rational(BigRational::zero()),
            Field::Prime(_) => FieldElement::Residue(0),
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldElement {
        match *self {
            Field::Rationals => FieldElement::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => FieldElement::Residue(v.rem_euclid(p as i64) as u64),
        }
    }

    /// Maps an exact rational into this field.
    pub fn from_rational(&self, q: &BigRational) -> Result<FieldElement> {
        match *self {
            Field::Rationals => Ok(FieldElement::Rational(q.clone())),
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let num = q.numer().mod_floor(&pb).to_u64().unwrap_or(0);
                let den = q.denom().mod_floor(&pb).to_u64().unwrap_or(0);
                if den == 0 {
                    return Err(Error::domain(format!(
                        "denominator {} vanishes modulo {p}",
                        q.denom()
                    )));
                }
                Ok(FieldElement::Residue(mul_mod(num, inv_mod(den, p), p)))
            }
        }
    }

    pub fn parse_element(&self, s: &str) -> Result<FieldElement> {
        let q = parse_rational(s)?;
        self.from_rational(&q)
    }

    pub fn is_zero(&self, a: &FieldElement) -> bool {
        match a {
            FieldElement::Rational(q) => q.is_zero(),
            FieldElement::Residue(r) => *r == 0,
        }
    }

    pub fn is_one(&self, a: &FieldElement) -> bool {
        match a {
            FieldElement::Rational(q) => q.is_one(),
            FieldElement::Residue(r) => *r == 1,
        }
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (self, a, b) {
            (Field::Rationals, FieldElement::Rational(x), FieldElement::Rational(y)) => {
                FieldElement::Rational(x + y)
            }
            (Field::Prime(p), FieldElement::Residue(x), FieldElement::Residue(y)) => {
                FieldElement::Residue(((*x as u128 + *y as u128) % *p as u128) as u64)
            }
            _ => panic!("field element does not belong to {self:?}"),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        match (self, a) {
            (Field::Rationals, FieldElement::Rational(x)) => FieldElement::Rational(-x),
            (Field::Prime(p), FieldElement::Residue(x)) => {
                FieldElement::Residue(if *x == 0 { 0 } else { p - x })
            }
            _ => panic!("field element does not belong to {self:?}"),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (self, a, b) {
            (Field::Rationals, FieldElement::Rational(x), FieldElement::Rational(y)) => {
                FieldElement::Rational(x * y)
            }
            (Field::Prime(p), FieldElement::Residue(x), FieldElement::Residue(y)) => {
                FieldElement::Residue(mul_mod(*x, *y, *p))
            }
            _ => panic!("field element does not belong to {self:?}"),
        }
    }

    pub fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        if self.is_zero(a) {
            return None;
        }
        Some(match (self, a) {
            (Field::Rationals, FieldElement::Rational(x)) => FieldElement::Rational(x.recip()),
            (Field::Prime(p), FieldElement::Residue(x)) => FieldElement::Residue(inv_mod(*x, *p)),
            _ => panic!("field element does not belong to {self:?}"),
        })
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Option<FieldElement> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// Signed display value: residues above `p/2` print as negatives.
    pub fn render(&self, a: &FieldElement) -> String {
        match (self, a) {
            (_, FieldElement::Rational(q)) => q.to_string(),
            (Field::Prime(p), FieldElement::Residue(x)) => {
                if *x > p / 2 {
                    format!("-{}", p - x)
                } else {
                    x.to_string()
                }
            }
            (Field::Rationals, FieldElement::Residue(x)) => x.to_string(),
        }
    }

    /// True when the rendered value starts with a minus sign.
    pub fn is_negative(&self, a: &FieldElement) -> bool {
        match (self, a) {
            (_, FieldElement::Rational(q)) => q.is_negative(),
            (Field::Prime(p), FieldElement::Residue(x)) => *x > p / 2,
            _ => false,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "q"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "q" | "Q" | "qq" | "QQ" => Ok(Field::Rationals),
            _ => {
                let digits = s
                    .strip_prefix("fp:")
                    .or_else(|| s.strip_prefix("Fp:"))
                    .ok_or_else(|| Error::parse(format!("unknown field `{s}` (use q or fp:P)")))?;
                let p: u64 = digits
                    .parse()
                    .map_err(|_| Error::parse(format!("bad modulus `{digits}`")))?;
                Field::prime(p)
            }
        }
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Parses `n`, `-n`, or `n/d` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::parse(format!("bad number `{s}`")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::parse(format!("bad number `{s}`")))?;
    if d.is_zero() {
        return Err(Error::parse(format!("zero denominator in `{s}`")));
    }
    Ok(BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(7).unwrap();
        let a = f.from_i64(3);
        let b = f.from_i64(5);
        assert_eq!(f.add(&a, &b), FieldElement::Residue(1));
        assert_eq!(f.mul(&a, &b), FieldElement::Residue(1));
        assert_eq!(f.inv(&a), Some(FieldElement::Residue(5)));
        assert_eq!(f.neg(&a), FieldElement::Residue(4));
        assert_eq!(f.from_i64(-1), FieldElement::Residue(6));
        assert_eq!(f.render(&f.from_i64(-1)), "-1");
        assert!(f.inv(&f.zero()).is_none());
    }

    #[test]
    fn rationals_stay_reduced() {
        let f = Field::Rationals;
        let a = f.parse_element("2/4").unwrap();
        let b = f.parse_element("-3/-6").unwrap();
        assert_eq!(a, b);
        assert_eq!(f.render(&a), "1/2");
        let s = f.add(&a, &f.parse_element("-1/2").unwrap());
        assert!(f.is_zero(&s));
    }

    #[test]
    fn rational_into_prime_field() {
        let f = Field::prime(7).unwrap();
        let half = f.parse_element("1/2").unwrap();
        assert_eq!(f.mul(&half, &f.from_i64(2)), f.one());
        assert!(f.parse_element("1/7").is_err());
    }

    #[test]
    fn field_spec_parsing() {
        assert_eq!("q".parse::<Field>().unwrap(), Field::Rationals);
        assert_eq!("fp:32003".parse::<Field>().unwrap(), Field::Prime(32003));
        assert!("fp:32004".parse::<Field>().is_err());
        assert!("fp:1".parse::<Field>().is_err());
        assert_eq!(Field::Prime(32003).to_string(), "fp:32003");
    }
}
