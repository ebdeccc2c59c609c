//! Laurent polynomials in one variable with arbitrary-precision integer
//! coefficients.
//!
//! A [`LaurentPoly`] is stored as the exponent of its lowest term together
//! with the dense coefficient run up to the highest term. Every constructor
//! trims leading and trailing zeros, so structural equality is mathematical
//! equality.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A point of the complex plane, used for specializations and roots.
pub type ComplexPoint = Complex64;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(1, 0)
    }

    /// The variable itself, `q` (or `t`).
    pub fn var() -> Self {
        LaurentPoly::monomial(1, 1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        LaurentPoly::monomial(c, 0)
    }

    pub fn monomial(c: impl Into<BigInt>, exp: i64) -> Self {
        LaurentPoly::from_dense(exp, vec![c.into()])
    }

    /// Builds `sum_i coeffs[i] * q^(low + i)`.
    pub fn new<C: Into<BigInt>>(low: i64, coeffs: impl IntoIterator<Item = C>) -> Self {
        LaurentPoly::from_dense(low, coeffs.into_iter().map(Into::into).collect())
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents accumulate.
    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let terms: Vec<(i64, BigInt)> = terms.into_iter().map(|(e, c)| (e, c.into())).collect();
        let Some(lo) = terms.iter().map(|t| t.0).min() else {
            return LaurentPoly::zero();
        };
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += c;
        }
        LaurentPoly::from_dense(lo, coeffs)
    }

    fn from_dense(mut low: i64, mut coeffs: Vec<BigInt>) -> Self {
        let lead = coeffs.iter().position(|c| !c.is_zero());
        let Some(first) = lead else {
            return LaurentPoly::zero();
        };
        let last = coeffs.iter().rposition(|c| !c.is_zero()).unwrap();
        coeffs.truncate(last + 1);
        coeffs.drain(..first);
        low += first as i64;
        LaurentPoly { low, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Exponent of the lowest nonzero term (0 for the zero polynomial).
    pub fn low(&self) -> i64 {
        self.low
    }

    /// Exponent of the highest nonzero term, `None` for zero.
    pub fn high(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.low + self.coeffs.len() as i64 - 1)
        }
    }

    /// Degree of the ordinary polynomial left after stripping `q^low`.
    pub fn span(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        let idx = exp - self.low;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            BigInt::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    pub fn lowest_coeff(&self) -> Option<&BigInt> {
        self.coeffs.first()
    }

    /// `Some((c, e))` when the polynomial is the single term `c q^e`.
    pub fn as_monomial(&self) -> Option<(&BigInt, i64)> {
        match self.coeffs.as_slice() {
            [c] => Some((c, self.low)),
            _ => None,
        }
    }

    /// True for `±q^n`, the units of the Laurent ring.
    pub fn is_unit(&self) -> bool {
        self.as_monomial().is_some_and(|(c, _)| c.abs().is_one())
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            low: self.low + k,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        LaurentPoly::from_dense(self.low, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = LaurentPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact value at `q = 1`: the sum of the coefficients.
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Horner evaluation at a complex point.
    pub fn eval_complex(&self, z: ComplexPoint) -> Result<ComplexPoint> {
        if self.is_zero() {
            return Ok(Complex64::zero());
        }
        if z.is_zero() {
            return match self.low {
                l if l < 0 => Err(Error::ZeroWithNegativeExponent),
                0 => Ok(Complex64::new(
                    self.coeffs[0].to_f64().unwrap_or(f64::NAN),
                    0.0,
                )),
                _ => Ok(Complex64::zero()),
            };
        }
        let mut acc = Complex64::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_f64().unwrap_or(f64::NAN);
        }
        Ok(acc * z.powi(self.low as i32))
    }

    /// Substitution `q -> q^-1`.
    pub fn invert_variable(&self) -> Self {
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        LaurentPoly {
            low: -self.high().unwrap(),
            coeffs,
        }
    }

    /// Substitution `q -> -q`.
    pub fn negate_variable(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if (self.low + i as i64).is_odd() {
                    -c
                } else {
                    c.clone()
                }
            })
            .collect();
        LaurentPoly::from_dense(self.low, coeffs)
    }

    /// Exact quotient `self / divisor` in `Z[q, q^-1]`.
    pub fn exact_divide(&self, divisor: &LaurentPoly) -> Result<LaurentPoly> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero());
        }
        // Both stripped polynomials have nonzero constant term, so divisibility
        // in the Laurent ring is divisibility in Z[q].
        let d = &divisor.coeffs;
        let dn = d.len() - 1;
        let lead = &d[dn];
        let mut rem = self.coeffs.clone();
        if rem.len() < d.len() {
            return Err(Error::NotDivisible);
        }
        let qlen = rem.len() - dn;
        let mut quot = vec![BigInt::zero(); qlen];
        for i in (0..qlen).rev() {
            let top = &rem[i + dn];
            if top.is_zero() {
                continue;
            }
            let (c, r) = top.div_rem(lead);
            if !r.is_zero() {
                return Err(Error::NotDivisible);
            }
            for (j, dj) in d.iter().enumerate() {
                rem[i + j] -= &c * dj;
            }
            quot[i] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::NotDivisible);
        }
        Ok(LaurentPoly::from_dense(self.low - divisor.low, quot))
    }

    /// Coefficient sequence equals its reversal (up to the overall shift).
    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    /// Coefficient sequence equals the negation of its reversal.
    pub fn is_antipalindromic(&self) -> bool {
        !self.is_zero()
            && self
                .coeffs
                .iter()
                .zip(self.coeffs.iter().rev())
                .all(|(a, b)| *a == -b)
    }

    /// Coefficients weakly increase and then weakly decrease.
    pub fn is_unimodal(&self) -> bool {
        let mut falling = false;
        for w in self.coeffs.windows(2) {
            if w[1] > w[0] {
                if falling {
                    return false;
                }
            } else if w[1] < w[0] {
                falling = true;
            }
        }
        true
    }

    /// Nonzero with every stored coefficient strictly positive.
    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.coeffs.iter().all(|c| c.is_positive())
    }

    /// Representative of the class `{±q^n p}`: lowest exponent 0, lowest
    /// coefficient positive.
    pub fn unit_normalize(&self) -> Self {
        match self.coeffs.first() {
            None => LaurentPoly::zero(),
            Some(c) if c.is_negative() => -self.shift(-self.low),
            Some(_) => self.shift(-self.low),
        }
    }

    /// Coefficients of the ordinary polynomial `q^-low * p`, as floats divided
    /// by the largest absolute coefficient.
    pub fn scaled_f64_coeffs(&self) -> Vec<f64> {
        let Some(max) = self.coeffs.iter().map(|c| c.abs()).max() else {
            return Vec::new();
        };
        let drop = max.bits().saturating_sub(62);
        let maxf = (&max >> drop).to_f64().unwrap();
        self.coeffs
            .iter()
            .map(|c| {
                let shifted: BigInt = if c.is_negative() {
                    -((-c) >> drop)
                } else {
                    c >> drop
                };
                shifted.to_f64().unwrap() / maxf
            })
            .collect()
    }

    /// Spaced rendering in increasing exponent order, e.g. `q^-2 + 2*q^-1 + 1`.
    pub fn display_with(&self, var: char) -> PolyDisplay<'_> {
        PolyDisplay {
            poly: self,
            var,
            compact: false,
        }
    }

    /// Compact rendering used by the command line, e.g. `1+q+2q^2`.
    pub fn compact(&self, var: char) -> String {
        PolyDisplay {
            poly: self,
            var,
            compact: true,
        }
        .to_string()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a LaurentPoly,
    var: char,
    compact: bool,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.poly.terms().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (n, neg, self.compact) {
                (0, true, _) => f.write_str("-")?,
                (0, false, _) => {}
                (_, true, true) => f.write_str("-")?,
                (_, false, true) => f.write_str("+")?,
                (_, true, false) => f.write_str(" - ")?,
                (_, false, false) => f.write_str(" + ")?,
            }
            let v = self.var;
            let power = match e {
                0 => String::new(),
                1 => v.to_string(),
                _ => format!("{v}^{e}"),
            };
            if e == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&power)?;
            } else if self.compact {
                write!(f, "{mag}{power}")?;
            } else {
                write!(f, "{mag}*{power}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display_with('q').fmt(f)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({})", self.display_with('q'))
    }
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    low: i64,
    coeffs: Vec<String>,
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(d)?;
        let coeffs = repr
            .coeffs
            .iter()
            .map(|c| c.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(LaurentPoly::from_dense(repr.low, coeffs))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let low = self.low.min(rhs.low);
        let high = self.high().unwrap().max(rhs.high().unwrap());
        let mut coeffs = vec![BigInt::zero(); (high - low + 1) as usize];
        for p in [self, rhs] {
            let off = (p.low - low) as usize;
            for (i, c) in p.coeffs.iter().enumerate() {
                coeffs[off + i] += c;
            }
        }
        LaurentPoly::from_dense(low, coeffs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;

    fn neg(mut self) -> LaurentPoly {
        for c in &mut self.coeffs {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentPoly::from_dense(self.low + rhs.low, coeffs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$m(rhs)
            }
        }
        impl $tr<LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        *self = &*self + rhs;
    }
}

impl std::iter::Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        iter.fold(LaurentPoly::zero(), |a, b| a + b)
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        LaurentPoly::constant(c)
    }
}
