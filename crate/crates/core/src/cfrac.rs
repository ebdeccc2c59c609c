//! Fractions, even-length continued fractions and Farey-style enumeration.
//!
//! A positive rational `r/s` is written as `[a1, ..., a2m]` so that
//! `R^a1 L^a2 ... R^a(2m-1) L^a2m` has first column `(r, s)`, with
//! `R = [[1,1],[0,1]]` and `L = [[1,0],[1,1]]`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A reduced fraction `r/s` with `s >= 0`; `1/0` encodes infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FractionRepr", into = "FractionRepr")]
pub struct Fraction {
    r: i64,
    s: i64,
}

#[derive(Serialize, Deserialize)]
struct FractionRepr {
    r: i64,
    s: i64,
}

impl TryFrom<FractionRepr> for Fraction {
    type Error = Error;

    fn try_from(f: FractionRepr) -> Result<Self> {
        Fraction::new(f.r, f.s)
    }
}

impl From<Fraction> for FractionRepr {
    fn from(f: Fraction) -> Self {
        FractionRepr { r: f.r, s: f.s }
    }
}

impl Fraction {
    pub fn new(r: i64, s: i64) -> Result<Self> {
        if r == 0 && s == 0 {
            return Err(Error::InvalidArgument("0/0 is not a fraction".into()));
        }
        if s == 0 {
            return Ok(Fraction::infinity());
        }
        let g = r.gcd(&s);
        let (mut r, mut s) = (r / g, s / g);
        if s < 0 {
            r = r
                .checked_neg()
                .ok_or(Error::Overflow("normalizing a fraction"))?;
            s = -s;
        }
        Ok(Fraction { r, s })
    }

    pub fn integer(n: i64) -> Self {
        Fraction { r: n, s: 1 }
    }

    pub fn infinity() -> Self {
        Fraction { r: 1, s: 0 }
    }

    pub fn numer(&self) -> i64 {
        self.r
    }

    pub fn denom(&self) -> i64 {
        self.s
    }

    pub fn is_infinite(&self) -> bool {
        self.s == 0
    }

    pub fn is_positive(&self) -> bool {
        self.s > 0 && self.r > 0
    }

    /// `s/r`.
    pub fn reciprocal(&self) -> Result<Fraction> {
        Fraction::new(self.s, self.r)
    }

    /// Enumeration order: by denominator, then numerator.
    pub fn enumeration_key(&self) -> (i64, i64) {
        (self.s, self.r)
    }

    pub fn to_f64(&self) -> f64 {
        self.r as f64 / self.s as f64
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    /// Numeric order, with infinity largest.
    fn cmp(&self, other: &Self) -> Ordering {
        (self.r as i128 * other.s as i128).cmp(&(other.r as i128 * self.s as i128))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.r, self.s)
    }
}

impl FromStr for Fraction {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = || Error::Parse(format!("not a fraction: {text:?}"));
        match text.split_once('/') {
            Some((r, s)) => {
                let r = r.trim().parse::<i64>().map_err(|_| bad())?;
                let s = s.trim().parse::<i64>().map_err(|_| bad())?;
                Fraction::new(r, s)
            }
            None => Ok(Fraction::integer(text.parse::<i64>().map_err(|_| bad())?)),
        }
    }
}

/// An even-length continued fraction `[a1, ..., a2m]` with `a1 >= 0` and all
/// later terms `>= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EvenCF(Vec<u64>);

pub type IntMatrix = [[i64; 2]; 2];

impl EvenCF {
    pub fn new(terms: Vec<u64>) -> Result<Self> {
        if terms.is_empty() || !terms.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "even continued fraction needs a nonzero even number of terms, got {}",
                terms.len()
            )));
        }
        if terms[1..].contains(&0) {
            return Err(Error::InvalidArgument(
                "continued fraction terms after the first must be positive".into(),
            ));
        }
        Ok(EvenCF(terms))
    }

    pub fn terms(&self) -> &[u64] {
        &self.0
    }

    /// `R^a1 L^a2 ... R^a(2m-1) L^a2m` over the integers.
    pub fn classical_matrix(&self) -> Result<IntMatrix> {
        let mut m: [[i128; 2]; 2] = [[1, 0], [0, 1]];
        for (i, &a) in self.0.iter().enumerate() {
            let a = a as i128;
            // R^a = [[1,a],[0,1]], L^a = [[1,0],[a,1]]
            m = if i % 2 == 0 {
                [
                    [m[0][0], m[0][0] * a + m[0][1]],
                    [m[1][0], m[1][0] * a + m[1][1]],
                ]
            } else {
                [
                    [m[0][0] + m[0][1] * a, m[0][1]],
                    [m[1][0] + m[1][1] * a, m[1][1]],
                ]
            };
            if m.iter().flatten().any(|x| x.abs() > i64::MAX as i128) {
                return Err(Error::Overflow("multiplying continued fraction matrices"));
            }
        }
        Ok(m.map(|row| row.map(|x| x as i64)))
    }

    /// The first column of the classical matrix as a fraction.
    pub fn to_fraction(&self) -> Result<Fraction> {
        let m = self.classical_matrix()?;
        Fraction::new(m[0][0], m[1][0])
    }
}

impl fmt::Display for EvenCF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("]")
    }
}

/// Partial quotients of `r/s` from the Euclidean algorithm (odd or even length).
pub fn euclid_terms(x: Fraction) -> Result<Vec<u64>> {
    if x.is_infinite() {
        return Err(Error::Infinite);
    }
    if !x.is_positive() {
        return Err(Error::NonPositive(x));
    }
    let (mut r, mut s) = (x.numer(), x.denom());
    let mut out = Vec::new();
    while s != 0 {
        let (q, rem) = r.div_rem(&s);
        out.push(q as u64);
        r = s;
        s = rem;
    }
    Ok(out)
}

/// The canonical even-length expansion of a positive rational.
pub fn to_even_cf(x: Fraction) -> Result<EvenCF> {
    let mut a = euclid_terms(x)?;
    if a.len() % 2 == 1 {
        let last = *a.last().unwrap();
        if last >= 2 {
            *a.last_mut().unwrap() -= 1;
            a.push(1);
        } else if a.len() == 1 {
            // x = 1: R^0 L^1 is the only even word.
            a = vec![0, 1];
        } else {
            a.pop();
            *a.last_mut().unwrap() += 1;
        }
    }
    Ok(EvenCF(a))
}

pub fn from_cf(a: &EvenCF) -> Result<Fraction> {
    a.to_fraction()
}

pub fn classical_matrix(a: &EvenCF) -> Result<IntMatrix> {
    a.classical_matrix()
}

/// Default numerator allowance for [`enumerate_fractions`]: `r <= s + 2 * max_den`.
pub fn default_numerator_extra(max_den: i64) -> i64 {
    2 * max_den
}

/// All reduced `r/s` with `1 <= s <= max_den` and `1 <= r <= s + 2 * max_den`,
/// sorted by `(s, r)`.
pub fn enumerate_fractions(max_den: i64) -> Vec<Fraction> {
    enumerate_fractions_capped(max_den, default_numerator_extra(max_den))
}

/// As [`enumerate_fractions`] with numerator cap `r <= s + extra`.
pub fn enumerate_fractions_capped(max_den: i64, extra: i64) -> Vec<Fraction> {
    let mut out = Vec::new();
    for s in 1..=max_den {
        for r in 1..=s + extra {
            if r.gcd(&s) == 1 {
                out.push(Fraction { r, s });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(r: i64, s: i64) -> Fraction {
        Fraction::new(r, s).unwrap()
    }

    /// Independent evaluation of `[a1; a2, ..., ak]` bottom-up.
    fn cf_value(a: &[u64]) -> (i128, i128) {
        let (mut num, mut den) = (*a.last().unwrap() as i128, 1i128);
        for &t in a[..a.len() - 1].iter().rev() {
            (num, den) = (t as i128 * num + den, num);
        }
        (num, den)
    }

    #[test]
    fn even_expansions_match_worked_examples() {
        assert_eq!(to_even_cf(f(2, 3)).unwrap().terms(), &[0, 1, 1, 1]);
        assert_eq!(to_even_cf(f(1, 2)).unwrap().terms(), &[0, 2]);
        assert_eq!(to_even_cf(f(5, 2)).unwrap().terms(), &[2, 2]);
        assert_eq!(to_even_cf(f(2, 1)).unwrap().terms(), &[1, 1]);
        assert_eq!(to_even_cf(f(1, 1)).unwrap().terms(), &[0, 1]);
        assert_eq!(to_even_cf(f(5, 3)).unwrap().terms(), &[1, 1, 1, 1]);
    }

    #[test]
    fn expansion_errors() {
        assert_eq!(to_even_cf(f(-1, 2)), Err(Error::NonPositive(f(-1, 2))));
        assert!(matches!(to_even_cf(f(0, 1)), Err(Error::NonPositive(_))));
        assert_eq!(to_even_cf(Fraction::infinity()), Err(Error::Infinite));
    }

    #[test]
    fn classical_matrices() {
        let m = |t: &[u64]| EvenCF::new(t.to_vec()).unwrap().classical_matrix().unwrap();
        assert_eq!(m(&[1, 1]), [[2, 1], [1, 1]]);
        assert_eq!(m(&[0, 2]), [[1, 0], [2, 1]]);
        assert_eq!(m(&[0, 1, 1, 1]), [[2, 1], [3, 2]]);
        assert_eq!(m(&[2, 2]), [[5, 2], [2, 1]]);
    }

    #[test]
    fn from_cf_examples() {
        assert_eq!(from_cf(&EvenCF::new(vec![1, 1]).unwrap()).unwrap(), f(2, 1));
        assert_eq!(
            from_cf(&EvenCF::new(vec![0, 1, 1, 1]).unwrap()).unwrap(),
            f(2, 3)
        );
    }

    #[test]
    fn round_trip_and_invariants() {
        for s in 1..=200 {
            for r in 1..=200 {
                if r.gcd(&s) != 1 {
                    continue;
                }
                let x = f(r, s);
                let cf = to_even_cf(x).unwrap();
                let t = cf.terms();
                assert_eq!(t.len() % 2, 0);
                assert!(t[1..].iter().all(|&a| a >= 1));
                assert_eq!(cf_value(t), (r as i128, s as i128), "{x} -> {cf}");
                let m = cf.classical_matrix().unwrap();
                assert_eq!((m[0][0], m[1][0]), (r, s));
                assert_eq!(m[0][0] * m[1][1] - m[0][1] * m[1][0], 1);
                if r <= 60 && s <= 60 {
                    assert_eq!(from_cf(&cf).unwrap(), x);
                }
            }
        }
    }

    #[test]
    fn enumeration_matches_gcd_filter() {
        let got = enumerate_fractions_capped(5, 5);
        let mut brute = Vec::new();
        for s in 1..=5i64 {
            for r in 1..=s + 5 {
                if (1..=r.min(s)).rev().find(|d| r % d == 0 && s % d == 0) == Some(1) {
                    brute.push((s, r));
                }
            }
        }
        assert_eq!(got.len(), brute.len());
        assert_eq!(
            got.iter().map(|x| x.enumeration_key()).collect::<Vec<_>>(),
            brute
        );
        let two = enumerate_fractions(2);
        for x in [f(1, 2), f(3, 2), f(5, 2)] {
            assert!(two.contains(&x));
        }
        assert!(enumerate_fractions(1).iter().all(|x| x.denom() == 1));
    }

    #[test]
    fn fraction_parsing() {
        assert_eq!("2/3".parse::<Fraction>().unwrap(), f(2, 3));
        assert_eq!("4/6".parse::<Fraction>().unwrap(), f(2, 3));
        assert_eq!("2".parse::<Fraction>().unwrap(), f(2, 1));
        assert_eq!("3/-6".parse::<Fraction>().unwrap(), f(-1, 2));
        assert!("x/2".parse::<Fraction>().is_err());
        assert!("0/0".parse::<Fraction>().is_err());
        assert_eq!(f(-1, 2).to_string(), "-1/2");
        assert_eq!(
            EvenCF::new(vec![0, 1, 1, 1]).unwrap().to_string(),
            "[0,1,1,1]"
        );
    }
}
