//! q-deformed rationals.
//!
//! `[r/s]_q = R(q)/S(q)` where `(R, S)` is the first column of
//! `R_q^a1 L_q^a2 ... R_q^a(2m-1) L_q^a2m` for the even continued fraction
//! of `r/s`. Pairs are stored with the denominator shifted to have a
//! nonzero, positive constant term.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::braidmat::{BraidWord, Convention, QMatrix2};
use crate::cfrac::{to_even_cf, Fraction};
use crate::error::{Error, Result};
use crate::exactpoly::LaurentPoly;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "QRationalRepr", try_from = "QRationalRepr")]
pub struct QRational {
    frac: Fraction,
    num: LaurentPoly,
    den: LaurentPoly,
}

#[derive(Serialize, Deserialize)]
struct QRationalRepr {
    r: i64,
    s: i64,
    num: LaurentPoly,
    den: LaurentPoly,
}

impl From<QRational> for QRationalRepr {
    fn from(x: QRational) -> Self {
        QRationalRepr {
            r: x.frac.numer(),
            s: x.frac.denom(),
            num: x.num,
            den: x.den,
        }
    }
}

impl TryFrom<QRationalRepr> for QRational {
    type Error = Error;

    fn try_from(x: QRationalRepr) -> Result<Self> {
        let frac = Fraction::new(x.r, x.s)?;
        let (num, den) = normalize_pair(x.num, x.den);
        if num.eval_at_one() != BigInt::from(frac.numer())
            || den.eval_at_one() != BigInt::from(frac.denom())
        {
            return Err(Error::InvalidArgument(format!(
                "q-rational does not specialize to {frac} at q = 1"
            )));
        }
        Ok(QRational { frac, num, den })
    }
}

impl QRational {
    pub fn frac(&self) -> Fraction {
        self.frac
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn pair(&self) -> (LaurentPoly, LaurentPoly) {
        (self.num.clone(), self.den.clone())
    }
}

impl fmt::Display for QRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.frac.denom() == 1 {
            write!(f, "[{}]_q = ", self.frac.numer())?;
        } else {
            write!(f, "[{}]_q = ", self.frac)?;
        }
        f.write_str(&render_quotient(&self.num, &self.den, 'q'))
    }
}

/// `num/den` in compact form, omitting a unit denominator.
pub fn render_quotient(num: &LaurentPoly, den: &LaurentPoly, var: char) -> String {
    let wrap = |p: &LaurentPoly| {
        if p.terms().count() > 1 {
            format!("({})", p.compact(var))
        } else {
            p.compact(var)
        }
    };
    if den.is_one() {
        num.compact(var)
    } else {
        format!("{}/{}", wrap(num), wrap(den))
    }
}

/// Canonical representative of the pair `(num, den)` up to a common `±q^n`:
/// the denominator gets lowest exponent 0 and positive lowest coefficient.
/// A zero denominator (the point at infinity) normalizes the numerator instead.
pub fn normalize_pair(num: LaurentPoly, den: LaurentPoly) -> (LaurentPoly, LaurentPoly) {
    let anchor = if den.is_zero() { &num } else { &den };
    let Some(lead) = anchor.lowest_coeff() else {
        return (num, den);
    };
    let sign = if lead.is_negative() { -1 } else { 1 };
    let unit = LaurentPoly::monomial(sign, -anchor.low());
    (&num * &unit, &den * &unit)
}

/// Linear fractional action of a matrix on a quotient `num/den`.
pub fn act(m: &QMatrix2, num: &LaurentPoly, den: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
    normalize_pair(&m.a * num + &m.b * den, &m.c * num + &m.d * den)
}

/// The matrix `M_q^+(a1, ..., a2m)` of the even continued fraction of `x`.
pub fn cf_matrix(x: Fraction) -> Result<QMatrix2> {
    let cf = to_even_cf(x)?;
    let mut m = QMatrix2::identity(Convention::Q);
    for (i, &a) in cf.terms().iter().enumerate() {
        let g = if i % 2 == 0 {
            QMatrix2::r_power(a)
        } else {
            QMatrix2::l_power(a)
        };
        m = m.mat_mul(&g)?;
    }
    Ok(m)
}

pub fn q_deform(x: Fraction) -> Result<QRational> {
    let m = cf_matrix(x)?;
    let (num, den) = normalize_pair(m.a, m.c);
    Ok(QRational { frac: x, num, den })
}

/// `[n]_q`, with `[-n]_q = -q^-1 - ... - q^-n`.
pub fn q_integer(n: i64) -> LaurentPoly {
    match n {
        0 => LaurentPoly::zero(),
        n if n > 0 => LaurentPoly::new(0, vec![1; n as usize]),
        n => LaurentPoly::new(n, vec![-1; n.unsigned_abs() as usize]),
    }
}

/// `[s/r]_q = S(q^-1)/R(q^-1)`.
pub fn reflect(x: &QRational) -> Result<QRational> {
    if x.num.is_zero() {
        return Err(Error::ZeroNumerator);
    }
    let frac = x.frac.reciprocal()?;
    let (num, den) = normalize_pair(x.den.invert_variable(), x.num.invert_variable());
    Ok(QRational { frac, num, den })
}

/// `[-r/s]_q = -R(q^-1) / (q S(q^-1))`, as a normalized pair.
pub fn mirror_negate(x: &QRational) -> (LaurentPoly, LaurentPoly) {
    normalize_pair(-x.num.invert_variable(), x.den.invert_variable().shift(1))
}

/// `[1/n]_q = q^(n-1) (1 - q) / (1 - q^n)`.
pub fn q_one_over_n(n: i64) -> Result<QRational> {
    if n < 1 {
        return Err(Error::InvalidArgument(format!(
            "[1/n]_q needs n >= 1, got {n}"
        )));
    }
    let one_minus = |k: i64| LaurentPoly::from_terms([(0, 1), (k, -1)]);
    let den = if n == 1 {
        LaurentPoly::one()
    } else {
        one_minus(n).exact_divide(&one_minus(1))?
    };
    let (num, den) = normalize_pair(LaurentPoly::monomial(1, n - 1), den);
    Ok(QRational {
        frac: Fraction::new(1, n)?,
        num,
        den,
    })
}

/// Normalized Jones polynomial of the two-bridge knot of `x`:
/// `q R(q) + (1 - q) S(q)`.
pub fn jones(x: Fraction) -> Result<LaurentPoly> {
    let qr = q_deform(x)?;
    let one_minus_q = LaurentPoly::from_terms([(0, 1), (1, -1)]);
    Ok(qr.num.shift(1) + &one_minus_q * &qr.den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    First,
    Second,
}

/// A column of the Burau matrix of `w` after `t = -q`, as a normalized pair.
pub fn burau_column(w: &BraidWord, column: Column) -> (LaurentPoly, LaurentPoly) {
    let m = QMatrix2::rho3(w)
        .to_q_convention()
        .expect("rho3 is in the t convention");
    match column {
        Column::First => normalize_pair(m.a, m.c),
        Column::Second => normalize_pair(m.b, m.d),
    }
}

/// Does the given column of `rho3(w)` (with `t = -q`) realize `[expected]_q`?
pub fn burau_column_check_at(w: &BraidWord, column: Column, expected: Fraction) -> bool {
    let got = burau_column(w, column);
    if expected.is_infinite() {
        return got.1.is_zero() && got.0.is_one();
    }
    if !expected.is_positive() {
        // Negative targets go through the mirror formula on |x|.
        let Ok(abs) = Fraction::new(-expected.numer(), expected.denom()) else {
            return false;
        };
        if expected.numer() == 0 {
            return got == (LaurentPoly::zero(), LaurentPoly::one());
        }
        return q_deform(abs).is_ok_and(|x| mirror_negate(&x) == got);
    }
    q_deform(expected).is_ok_and(|x| x.pair() == got)
}

pub fn burau_column_check(w: &BraidWord, expected: Fraction) -> bool {
    burau_column_check_at(w, Column::First, expected)
}

/// The fraction a column specializes to at `q = 1`, when it fits in `i64`.
pub fn column_value(num: &LaurentPoly, den: &LaurentPoly) -> Option<Fraction> {
    let r = num.eval_at_one().to_i64()?;
    let s = den.eval_at_one().to_i64()?;
    Fraction::new(r, s).ok()
}
