//! Exact Fourier–Motzkin feasibility for systems `w >= 0, D w >= 1`.
//!
//! The elimination runs on `i128` with checked arithmetic and is repeated on
//! `BigInt` only when an intermediate value overflows.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::{Error, Result};

/// Guard on the number of rows alive at any elimination stage.
pub const DEFAULT_MAX_ROWS: usize = 200_000;

/// Integer type the elimination runs over. Arithmetic returns `None` on
/// overflow.
trait Scalar: Clone + Eq + Hash + Debug {
    fn from_i64(x: i64) -> Self;
    fn to_bigint(&self) -> BigInt;
    fn signum(&self) -> i8;
    fn add(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    /// Nonnegative gcd.
    fn gcd(&self, o: &Self) -> Self;
    fn div_exact(&self, o: &Self) -> Self;

    fn is_zero(&self) -> bool {
        self.signum() == 0
    }
}

impl Scalar for i128 {
    fn from_i64(x: i64) -> Self {
        x as i128
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn signum(&self) -> i8 {
        i128::signum(*self) as i8
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
}

impl Scalar for BigInt {
    fn from_i64(x: i64) -> Self {
        BigInt::from(x)
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn signum(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
}

/// `num / den` in lowest terms with `den > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Frac<T> {
    num: T,
    den: T,
}

impl<T: Scalar> Frac<T> {
    fn int(x: T) -> Self {
        Frac { num: x, den: T::from_i64(1) }
    }

    fn new(num: T, den: T) -> Option<Self> {
        let (num, den) = if den.signum() < 0 { (num.neg()?, den.neg()?) } else { (num, den) };
        let g = num.gcd(&den);
        if g.is_zero() || g == T::from_i64(1) {
            return Some(Frac { num, den });
        }
        Some(Frac {
            num: num.div_exact(&g),
            den: den.div_exact(&g),
        })
    }

    fn add(&self, o: &Self) -> Option<Self> {
        Frac::new(
            self.num.mul(&o.den)?.add(&o.num.mul(&self.den)?)?,
            self.den.mul(&o.den)?,
        )
    }

    fn sub(&self, o: &Self) -> Option<Self> {
        self.add(&Frac { num: o.num.neg()?, den: o.den.clone() })
    }

    fn scale(&self, k: &T) -> Option<Self> {
        Frac::new(self.num.mul(k)?, self.den.clone())
    }

    fn div_int(&self, k: &T) -> Option<Self> {
        Frac::new(self.num.clone(), self.den.mul(k)?)
    }

    fn cmp(&self, o: &Self) -> Option<Ordering> {
        let a = self.num.mul(&o.den)?;
        let b = o.num.mul(&self.den)?;
        Some(match a.add(&b.neg()?)?.signum() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        })
    }
}

/// `coeffs . w >= rhs`; coefficients are primitive (gcd 1). `hist` is the
/// set of input rows this one was combined from.
#[derive(Debug, Clone)]
struct Row<T> {
    coeffs: Vec<T>,
    rhs: Frac<T>,
    hist: Vec<u64>,
}

fn hist_union(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x | y).collect()
}

fn hist_len(h: &[u64]) -> usize {
    h.iter().map(|x| x.count_ones() as usize).sum()
}

impl<T: Scalar> Row<T> {
    fn normalized(mut coeffs: Vec<T>, mut rhs: Frac<T>, hist: Vec<u64>) -> Option<Self> {
        let g = coeffs.iter().fold(T::from_i64(0), |g, c| g.gcd(c));
        if !g.is_zero() && g != T::from_i64(1) {
            for c in coeffs.iter_mut() {
                *c = c.div_exact(&g);
            }
            rhs = rhs.div_int(&g)?;
        }
        Some(Row { coeffs, rhs, hist })
    }
}

enum Compacted<T> {
    Rows(Vec<Row<T>>),
    Infeasible,
}

fn hist_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

type Copies<T> = Vec<(Frac<T>, Vec<u64>)>;

/// Drops duplicate coefficient vectors and detects a constant row
/// `0 >= rhs` with `rhs > 0`. A duplicate is dropped only when another copy
/// is at least as tight and built from a subset of its input rows, so the
/// history bound stays valid.
fn compact<T: Scalar>(rows: Vec<Row<T>>) -> Option<Compacted<T>> {
    let mut best: HashMap<Vec<T>, Copies<T>> = HashMap::new();
    let mut order = Vec::new();
    for r in rows {
        if r.coeffs.iter().all(Scalar::is_zero) {
            if r.rhs.num.signum() > 0 {
                return Some(Compacted::Infeasible);
            }
            continue;
        }
        match best.get_mut(&r.coeffs) {
            Some(kept) => {
                let mut dominated = false;
                let mut keep = Vec::with_capacity(kept.len() + 1);
                for (rhs, hist) in kept.drain(..) {
                    let c = rhs.cmp(&r.rhs)?;
                    if c != Ordering::Less && hist_subset(&hist, &r.hist) {
                        dominated = true;
                    }
                    let beaten = c != Ordering::Greater && hist_subset(&r.hist, &hist);
                    if dominated || !beaten {
                        keep.push((rhs, hist));
                    }
                }
                if !dominated {
                    keep.push((r.rhs, r.hist));
                }
                *kept = keep;
            }
            None => {
                order.push(r.coeffs.clone());
                best.insert(r.coeffs, vec![(r.rhs, r.hist)]);
            }
        }
    }
    let mut out = Vec::with_capacity(order.len());
    for c in order {
        for (rhs, hist) in best.remove(&c).unwrap() {
            out.push(Row {
                coeffs: c.clone(),
                rhs,
                hist,
            });
        }
    }
    Some(Compacted::Rows(out))
}

/// Outer `None`: overflow in `T`.
type Attempt = Option<Result<Option<Vec<BigInt>>>>;

fn eliminate<T: Scalar>(diffs: &[Vec<i64>], num_vars: usize, max_rows: usize) -> Attempt {
    let total = diffs.len() + num_vars;
    let words = total.div_ceil(64);
    let single = |i: usize| {
        let mut h = vec![0u64; words];
        h[i / 64] |= 1 << (i % 64);
        h
    };
    let one = Frac::int(T::from_i64(1));
    let zero = Frac::int(T::from_i64(0));
    let mut rows: Vec<Row<T>> = Vec::with_capacity(total);
    for (i, d) in diffs.iter().enumerate() {
        rows.push(Row::normalized(d.iter().map(|&x| T::from_i64(x)).collect(), one.clone(), single(i))?);
    }
    for i in 0..num_vars {
        let mut c = vec![T::from_i64(0); num_vars];
        c[i] = T::from_i64(1);
        rows.push(Row {
            coeffs: c,
            rhs: zero.clone(),
            hist: single(diffs.len() + i),
        });
    }
    let mut rows = match compact(rows)? {
        Compacted::Rows(r) => r,
        Compacted::Infeasible => return Some(Ok(None)),
    };

    // stages[k] = (eliminated variable, rows mentioning it at that stage)
    let mut stages: Vec<(usize, Vec<Row<T>>)> = Vec::with_capacity(num_vars);
    let mut remaining: Vec<usize> = (0..num_vars).collect();
    while !remaining.is_empty() {
        let (pos_idx, &var) = remaining
            .iter()
            .enumerate()
            .min_by_key(|(_, &v)| {
                let p = rows.iter().filter(|r| r.coeffs[v].signum() > 0).count();
                let n = rows.iter().filter(|r| r.coeffs[v].signum() < 0).count();
                (p * n) as i64 - (p + n) as i64
            })
            .unwrap();
        remaining.swap_remove(pos_idx);

        let (mentioned, mut next): (Vec<Row<T>>, Vec<Row<T>>) =
            rows.into_iter().partition(|r| !r.coeffs[var].is_zero());
        let lower: Vec<&Row<T>> = mentioned.iter().filter(|r| r.coeffs[var].signum() > 0).collect();
        let upper: Vec<&Row<T>> = mentioned.iter().filter(|r| r.coeffs[var].signum() < 0).collect();
        if next.len() + lower.len() * upper.len() > max_rows {
            return Some(Err(Error::resource(format!(
                "Fourier-Motzkin elimination exceeded {max_rows} rows"
            ))));
        }
        // Chernikov's rule: after s eliminations a row built from more than
        // s + 1 input rows is implied by the others.
        let max_hist = stages.len() + 2;
        for lo in &lower {
            for up in &upper {
                let hist = hist_union(&lo.hist, &up.hist);
                if hist_len(&hist) > max_hist {
                    continue;
                }
                let a = &lo.coeffs[var];
                let b = up.coeffs[var].neg()?;
                let mut coeffs = Vec::with_capacity(num_vars);
                for (x, y) in lo.coeffs.iter().zip(&up.coeffs) {
                    coeffs.push(x.mul(&b)?.add(&y.mul(a)?)?);
                }
                let rhs = lo.rhs.scale(&b)?.add(&up.rhs.scale(a)?)?;
                next.push(Row::normalized(coeffs, rhs, hist)?);
            }
        }
        match compact(next)? {
            Compacted::Rows(r) => rows = r,
            Compacted::Infeasible => return Some(Ok(None)),
        }
        stages.push((var, mentioned));
    }

    let mut w: Vec<Frac<T>> = vec![zero.clone(); num_vars];
    for (var, rows) in stages.iter().rev() {
        let mut lo: Option<Frac<T>> = None;
        for r in rows.iter().filter(|r| r.coeffs[*var].signum() > 0) {
            let mut rest = zero.clone();
            for (i, c) in r.coeffs.iter().enumerate() {
                if i != *var && !c.is_zero() {
                    rest = rest.add(&w[i].scale(c)?)?;
                }
            }
            let bound = r.rhs.sub(&rest)?.div_int(&r.coeffs[*var])?;
            let better = match &lo {
                None => true,
                Some(l) => bound.cmp(l)? == Ordering::Greater,
            };
            if better {
                lo = Some(bound);
            }
        }
        w[*var] = lo.unwrap_or_else(|| zero.clone());
    }
    let denom = w
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(&q.den.to_bigint()));
    let out: Vec<BigInt> = w
        .iter()
        .map(|q| q.num.to_bigint() * (&denom / q.den.to_bigint()))
        .collect();
    Some(Ok(Some(out)))
}

/// Finds a nonnegative integer vector `w` with `d . w >= 1` for every row
/// `d` of `diffs`, or proves none exists.
///
/// Variables are eliminated greedily (fewest generated rows first). The
/// witness is recovered by back-substitution choosing each variable's
/// largest lower bound, then scaled by the common denominator.
pub fn find_positive_weight(
    diffs: &[Vec<i64>],
    num_vars: usize,
    max_rows: usize,
) -> Result<Option<Vec<BigInt>>> {
    if let Some(bad) = diffs.iter().find(|d| d.len() != num_vars) {
        return Err(Error::Dimension {
            expected: num_vars,
            found: bad.len(),
        });
    }
    let out = match eliminate::<i128>(diffs, num_vars, max_rows) {
        Some(r) => r?,
        None => eliminate::<BigInt>(diffs, num_vars, max_rows).expect("BigInt arithmetic cannot overflow")?,
    };
    debug_assert!(out.as_ref().is_none_or(|w| diffs.iter().all(|d| {
        d.iter()
            .zip(w)
            .map(|(x, y)| BigInt::from(*x) * y)
            .sum::<BigInt>()
            >= BigInt::one()
    })));
    Ok(out)
}
