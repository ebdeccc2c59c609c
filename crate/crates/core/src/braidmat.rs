//! Braid words in B3, their Burau matrices, the q-deformed modular
//! generators `R_q`, `L_q`, and 2x2 matrix algebra over Laurent polynomials.
//!
//! Burau matrices live in the `t` convention, modular matrices in the `q`
//! convention. The only way across is [`QMatrix2::to_q_convention`], which
//! substitutes `t = -q` entrywise.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactpoly::LaurentPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BraidLetter {
    S1,
    S1Inv,
    S2,
    S2Inv,
}

impl BraidLetter {
    pub const ALL: [BraidLetter; 4] = [
        BraidLetter::S1,
        BraidLetter::S1Inv,
        BraidLetter::S2,
        BraidLetter::S2Inv,
    ];

    pub fn inverse(self) -> Self {
        match self {
            BraidLetter::S1 => BraidLetter::S1Inv,
            BraidLetter::S1Inv => BraidLetter::S1,
            BraidLetter::S2 => BraidLetter::S2Inv,
            BraidLetter::S2Inv => BraidLetter::S2,
        }
    }

    /// Contribution to the exponent sum.
    pub fn exponent(self) -> i64 {
        match self {
            BraidLetter::S1 | BraidLetter::S2 => 1,
            BraidLetter::S1Inv | BraidLetter::S2Inv => -1,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            BraidLetter::S1 => 'a',
            BraidLetter::S1Inv => 'A',
            BraidLetter::S2 => 'b',
            BraidLetter::S2Inv => 'B',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'a' => Some(BraidLetter::S1),
            'A' => Some(BraidLetter::S1Inv),
            'b' => Some(BraidLetter::S2),
            'B' => Some(BraidLetter::S2Inv),
            _ => None,
        }
    }

    /// Signed generator index: `1, -1, 2, -2`.
    pub fn from_index(i: i64) -> Option<Self> {
        match i {
            1 => Some(BraidLetter::S1),
            -1 => Some(BraidLetter::S1Inv),
            2 => Some(BraidLetter::S2),
            -2 => Some(BraidLetter::S2Inv),
            _ => None,
        }
    }
}

/// A word in `σ1^±1, σ2^±1`. Words are never freely reduced implicitly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BraidWord(Vec<BraidLetter>);

impl BraidWord {
    pub fn new(letters: Vec<BraidLetter>) -> Self {
        BraidWord(letters)
    }

    pub fn empty() -> Self {
        BraidWord::default()
    }

    /// The central element `z = (σ1σ2)^3`.
    pub fn center() -> Self {
        "ababab".parse().unwrap()
    }

    pub fn letters(&self) -> &[BraidLetter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent_sum(&self) -> i64 {
        self.0.iter().map(|l| l.exponent()).sum()
    }

    /// The word for the inverse braid: reversed, each letter inverted.
    pub fn inverse(&self) -> Self {
        BraidWord(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &BraidWord) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        BraidWord(v)
    }

    /// `w^n` for any integer `n` (negative powers use the inverse word).
    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut v = Vec::with_capacity(base.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            v.extend_from_slice(&base.0);
        }
        BraidWord(v)
    }

    pub fn push(&mut self, l: BraidLetter) {
        self.0.push(l);
    }
}

impl FromStr for BraidWord {
    type Err = Error;

    /// Accepts compact letters (`"aBaB"`) or signed indices (`"1,-2,1,-2"`).
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(BraidWord::empty());
        }
        if text.contains(|c: char| c.is_ascii_digit()) {
            return text
                .split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<i64>()
                        .ok()
                        .and_then(BraidLetter::from_index)
                        .ok_or_else(|| Error::Parse(format!("bad braid generator {tok:?}")))
                })
                .collect::<Result<Vec<_>>>()
                .map(BraidWord);
        }
        text.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| {
                BraidLetter::from_char(c)
                    .ok_or_else(|| Error::Parse(format!("bad braid letter {c:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(BraidWord)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

/// Generators of the q-deformed modular group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModLetter {
    R,
    RInv,
    L,
    LInv,
}

impl FromStr for ModLetter {
    type Err = Error;

    fn from_str(tok: &str) -> Result<Self> {
        match tok {
            "R" => Ok(ModLetter::R),
            "Ri" => Ok(ModLetter::RInv),
            "L" => Ok(ModLetter::L),
            "Li" => Ok(ModLetter::LInv),
            _ => Err(Error::Parse(format!("bad modular generator {tok:?}"))),
        }
    }
}

/// Parses space separated `R`, `Ri`, `L`, `Li` tokens.
pub fn parse_mod_word(text: &str) -> Result<Vec<ModLetter>> {
    text.split_whitespace().map(str::parse).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Convention {
    /// Burau variable `t`.
    T,
    /// Modular deformation variable `q = -t`.
    Q,
}

impl Convention {
    pub fn var(self) -> char {
        match self {
            Convention::T => 't',
            Convention::Q => 'q',
        }
    }
}

/// Row-major 2x2 matrix `[[a, b], [c, d]]` over Laurent polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QMatrix2 {
    pub a: LaurentPoly,
    pub b: LaurentPoly,
    pub c: LaurentPoly,
    pub d: LaurentPoly,
    convention: Convention,
}

fn p(low: i64, coeffs: &[i64]) -> LaurentPoly {
    LaurentPoly::new(low, coeffs.iter().copied())
}

impl QMatrix2 {
    pub fn new(
        a: LaurentPoly,
        b: LaurentPoly,
        c: LaurentPoly,
        d: LaurentPoly,
        convention: Convention,
    ) -> Self {
        QMatrix2 {
            a,
            b,
            c,
            d,
            convention,
        }
    }

    pub fn identity(convention: Convention) -> Self {
        QMatrix2::scalar(LaurentPoly::one(), convention)
    }

    pub fn scalar(s: LaurentPoly, convention: Convention) -> Self {
        QMatrix2::new(
            s.clone(),
            LaurentPoly::zero(),
            LaurentPoly::zero(),
            s,
            convention,
        )
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn entries(&self) -> [&LaurentPoly; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Burau image of a single generator.
    pub fn burau_generator(letter: BraidLetter) -> Self {
        let t = Convention::T;
        match letter {
            BraidLetter::S1 => QMatrix2::new(p(1, &[-1]), p(0, &[1]), p(0, &[]), p(0, &[1]), t),
            BraidLetter::S1Inv => {
                QMatrix2::new(p(-1, &[-1]), p(-1, &[1]), p(0, &[]), p(0, &[1]), t)
            }
            BraidLetter::S2 => QMatrix2::new(p(0, &[1]), p(0, &[]), p(1, &[1]), p(1, &[-1]), t),
            BraidLetter::S2Inv => QMatrix2::new(p(0, &[1]), p(0, &[]), p(0, &[1]), p(-1, &[-1]), t),
        }
    }

    /// The Burau representation of a braid word, multiplied left to right.
    pub fn rho3(word: &BraidWord) -> Self {
        let m = word
            .letters()
            .iter()
            .fold(QMatrix2::identity(Convention::T), |acc, &l| {
                acc.mul_same(&QMatrix2::burau_generator(l))
            });
        debug_assert!(m.det().is_unit());
        m
    }

    pub fn qmod_generator(letter: ModLetter) -> Self {
        let q = Convention::Q;
        match letter {
            ModLetter::R => QMatrix2::new(p(1, &[1]), p(0, &[1]), p(0, &[]), p(0, &[1]), q),
            ModLetter::RInv => QMatrix2::new(p(-1, &[1]), p(-1, &[-1]), p(0, &[]), p(0, &[1]), q),
            ModLetter::L => QMatrix2::new(p(0, &[1]), p(0, &[]), p(0, &[1]), p(-1, &[1]), q),
            ModLetter::LInv => QMatrix2::new(p(0, &[1]), p(0, &[]), p(1, &[-1]), p(1, &[1]), q),
        }
    }

    /// `R_q^n = [[q^n, [n]_q], [0, 1]]`.
    pub fn r_power(n: u64) -> Self {
        let n = n as i64;
        QMatrix2::new(
            LaurentPoly::monomial(1, n),
            LaurentPoly::new(0, vec![1; n as usize]),
            LaurentPoly::zero(),
            LaurentPoly::one(),
            Convention::Q,
        )
    }

    /// `L_q^n = [[1, 0], [1 + q^-1 + ... + q^-(n-1), q^-n]]`.
    pub fn l_power(n: u64) -> Self {
        let n = n as i64;
        QMatrix2::new(
            LaurentPoly::one(),
            LaurentPoly::zero(),
            LaurentPoly::new(1 - n, vec![1; n as usize]),
            LaurentPoly::monomial(1, -n),
            Convention::Q,
        )
    }

    /// Product of modular generators, left to right.
    pub fn mod_word(word: &[ModLetter]) -> Self {
        word.iter()
            .fold(QMatrix2::identity(Convention::Q), |acc, &l| {
                acc.mul_same(&QMatrix2::qmod_generator(l))
            })
    }

    fn mul_same(&self, o: &QMatrix2) -> QMatrix2 {
        QMatrix2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
            convention: self.convention,
        }
    }

    pub fn mat_mul(&self, other: &QMatrix2) -> Result<QMatrix2> {
        if self.convention != other.convention {
            return Err(Error::ConventionMismatch);
        }
        Ok(self.mul_same(other))
    }

    pub fn det(&self) -> LaurentPoly {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> LaurentPoly {
        &self.a + &self.d
    }

    /// Entrywise multiplication by a Laurent polynomial.
    pub fn scale(&self, s: &LaurentPoly) -> QMatrix2 {
        QMatrix2 {
            a: &self.a * s,
            b: &self.b * s,
            c: &self.c * s,
            d: &self.d * s,
            convention: self.convention,
        }
    }

    pub fn mat_inverse(&self) -> Result<QMatrix2> {
        let det = self.det();
        let (c, e) = det.as_monomial().ok_or(Error::NotUnitDeterminant)?;
        if !c.abs().is_one() {
            return Err(Error::NotUnitDeterminant);
        }
        let inv_det = LaurentPoly::monomial(c.clone(), -e);
        Ok(QMatrix2 {
            a: &self.d * &inv_det,
            b: -(&self.b * &inv_det),
            c: -(&self.c * &inv_det),
            d: &self.a * &inv_det,
            convention: self.convention,
        })
    }

    /// Substitutes `t = -q` in every entry.
    pub fn to_q_convention(&self) -> Result<QMatrix2> {
        if self.convention != Convention::T {
            return Err(Error::ConventionMismatch);
        }
        Ok(QMatrix2 {
            a: self.a.negate_variable(),
            b: self.b.negate_variable(),
            c: self.c.negate_variable(),
            d: self.d.negate_variable(),
            convention: Convention::Q,
        })
    }

    /// Canonical representative of `{±q^n A}`: the first nonzero entry (in
    /// the order a, b, c, d) has lowest exponent 0 and positive lowest
    /// coefficient.
    /// Representative of `{±q^n A}`: the smallest exponent over all entries
    /// becomes 0 and the first nonzero entry gets a positive lowest
    /// coefficient.
    pub fn projective_normalize(&self) -> Result<QMatrix2> {
        let nonzero: Vec<&LaurentPoly> = self
            .entries()
            .into_iter()
            .filter(|e| !e.is_zero())
            .collect();
        let lead = nonzero.first().ok_or(Error::ZeroMatrix)?;
        let low = nonzero.iter().map(|e| e.low()).min().unwrap();
        let sign = if lead.lowest_coeff().unwrap().is_negative() {
            -1
        } else {
            1
        };
        Ok(self.scale(&LaurentPoly::monomial(BigInt::from(sign), -low)))
    }

    pub fn projective_equal(&self, other: &QMatrix2) -> Result<bool> {
        if self.convention != other.convention {
            return Err(Error::ConventionMismatch);
        }
        Ok(self.projective_normalize()? == other.projective_normalize()?)
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }
}

impl fmt::Display for QMatrix2 {
    /// Factors out the common lowest power, and prints scalar matrices as
    /// `c * Id`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.convention.var();
        if self.b.is_zero() && self.c.is_zero() && self.a == self.d {
            if self.a.is_one() {
                return f.write_str("Id");
            }
            return write!(f, "{} * Id", self.a.compact(v));
        }
        let shift = self
            .entries()
            .into_iter()
            .filter(|e| !e.is_zero())
            .map(|e| e.low())
            .min()
            .unwrap_or(0);
        let e = self.entries().map(|x| x.shift(-shift).compact(v));
        if shift != 0 {
            write!(f, "{v}^{shift} * ")?;
        }
        write!(f, "[[{}, {}], [{}, {}]]", e[0], e[1], e[2], e[3])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> BraidWord {
        s.parse().unwrap()
    }

    fn gen_t(a: LaurentPoly, b: LaurentPoly, c: LaurentPoly, d: LaurentPoly) -> QMatrix2 {
        QMatrix2::new(a, b, c, d, Convention::T)
    }

    #[test]
    fn generators() {
        let s1 = QMatrix2::burau_generator(BraidLetter::S1);
        assert_eq!(s1, gen_t(p(1, &[-1]), p(0, &[1]), p(0, &[]), p(0, &[1])));
        let s2 = QMatrix2::burau_generator(BraidLetter::S2);
        assert_eq!(s2, gen_t(p(0, &[1]), p(0, &[]), p(1, &[1]), p(1, &[-1])));
        for l in BraidLetter::ALL {
            let g = QMatrix2::burau_generator(l);
            let gi = QMatrix2::burau_generator(l.inverse());
            assert!(g.mat_mul(&gi).unwrap().is_identity());
            assert_eq!(g.mat_inverse().unwrap(), gi);
        }
    }

    #[test]
    fn braid_relation_and_center() {
        assert_eq!(QMatrix2::rho3(&w("aba")), QMatrix2::rho3(&w("bab")));
        let z = QMatrix2::rho3(&BraidWord::center());
        assert_eq!(z, QMatrix2::scalar(p(3, &[1]), Convention::T));
        assert!(z.projective_normalize().unwrap().is_identity());
        assert!(QMatrix2::rho3(&BraidWord::empty()).is_identity());
    }

    #[test]
    fn worked_matrix_for_abab_inverse_letters() {
        let m = QMatrix2::rho3(&w("aBaB"));
        let expect = gen_t(
            p(-1, &[-1, 1, -2, 1]),
            p(-2, &[1, -1, 1]),
            p(-1, &[-1, 1, -1]),
            p(-2, &[1, -1]),
        );
        assert_eq!(m, expect);
        let q = m.to_q_convention().unwrap();
        assert_eq!(q.a, p(-1, &[1, 1, 2, 1]));
        assert_eq!(q.b, p(-2, &[1, 1, 1]));
        assert_eq!(q.c, p(-1, &[1, 1, 1]));
        assert_eq!(q.d, p(-2, &[1, 1]));
        assert_eq!(q.trace(), p(-2, &[1, 2, 1, 2, 1]));
        assert!(q.trace().is_palindromic());
    }

    #[test]
    fn modular_generators() {
        let r = QMatrix2::qmod_generator(ModLetter::R);
        let l = QMatrix2::qmod_generator(ModLetter::L);
        assert_eq!(r.a, p(1, &[1]));
        assert_eq!(l.d, p(-1, &[1]));
        let ri = QMatrix2::qmod_generator(ModLetter::RInv);
        assert!(ri.mat_mul(&r).unwrap().is_identity());
        let li = QMatrix2::qmod_generator(ModLetter::LInv);
        assert!(l.mat_mul(&li).unwrap().is_identity());
        let rr = r.mat_mul(&r).unwrap();
        assert_eq!(
            rr,
            QMatrix2::new(
                p(2, &[1]),
                p(0, &[1, 1]),
                p(0, &[]),
                p(0, &[1]),
                Convention::Q
            )
        );
        let rl = r.mat_mul(&l).unwrap();
        assert_eq!(
            rl,
            QMatrix2::new(
                p(0, &[1, 1]),
                p(-1, &[1]),
                p(0, &[1]),
                p(-1, &[1]),
                Convention::Q
            )
        );
        for n in 0..6 {
            let word = vec![ModLetter::R; n as usize];
            assert_eq!(QMatrix2::r_power(n), QMatrix2::mod_word(&word));
            let word = vec![ModLetter::L; n as usize];
            assert_eq!(QMatrix2::l_power(n), QMatrix2::mod_word(&word));
        }
        assert_eq!(
            QMatrix2::mod_word(&parse_mod_word("R Ri L Li").unwrap()),
            QMatrix2::identity(Convention::Q)
        );
    }

    #[test]
    fn convention_mismatch() {
        let r = QMatrix2::qmod_generator(ModLetter::R);
        let s = QMatrix2::burau_generator(BraidLetter::S1);
        assert_eq!(r.mat_mul(&s), Err(Error::ConventionMismatch));
        assert_eq!(r.to_q_convention(), Err(Error::ConventionMismatch));
        assert_eq!(r.projective_equal(&s), Err(Error::ConventionMismatch));
    }

    #[test]
    fn determinants_and_inverses() {
        assert_eq!(QMatrix2::qmod_generator(ModLetter::R).det(), p(1, &[1]));
        assert_eq!(
            QMatrix2::burau_generator(BraidLetter::S1).det(),
            p(1, &[-1])
        );
        assert_eq!(
            QMatrix2::qmod_generator(ModLetter::R)
                .mat_inverse()
                .unwrap(),
            QMatrix2::qmod_generator(ModLetter::RInv)
        );
        let id = QMatrix2::identity(Convention::Q);
        assert_eq!(id.mat_inverse().unwrap(), id);
        let bad = QMatrix2::new(
            p(0, &[1, 1]),
            p(0, &[]),
            p(0, &[]),
            p(0, &[1]),
            Convention::Q,
        );
        assert_eq!(bad.mat_inverse(), Err(Error::NotUnitDeterminant));
    }

    #[test]
    fn q_convention_bridge() {
        let r = QMatrix2::rho3(&w("a")).to_q_convention().unwrap();
        assert_eq!(r, QMatrix2::qmod_generator(ModLetter::R));
        let l = QMatrix2::rho3(&w("B")).to_q_convention().unwrap();
        assert!(l
            .projective_equal(&QMatrix2::qmod_generator(ModLetter::L))
            .unwrap());
        let z = QMatrix2::scalar(p(3, &[1]), Convention::T)
            .to_q_convention()
            .unwrap();
        assert_eq!(z, QMatrix2::scalar(p(3, &[-1]), Convention::Q));
    }

    #[test]
    fn projective_classes() {
        let r = QMatrix2::qmod_generator(ModLetter::R);
        let l = QMatrix2::qmod_generator(ModLetter::L);
        let neg_qr = r.scale(&p(1, &[-1]));
        assert_eq!(neg_qr.projective_normalize().unwrap(), r);
        assert!(!r.projective_equal(&l).unwrap());
        let m = QMatrix2::rho3(&w("aBaB"));
        let n = m.projective_normalize().unwrap();
        assert_eq!(n.projective_normalize().unwrap(), n);
        assert!(m.projective_equal(&m.scale(&p(5, &[-1]))).unwrap());
        let abc = QMatrix2::rho3(&w("ab"))
            .mat_mul(&QMatrix2::rho3(&w("ab")))
            .unwrap();
        let cube = abc.mat_mul(&QMatrix2::rho3(&w("ab"))).unwrap();
        assert!(cube
            .projective_equal(&QMatrix2::identity(Convention::T))
            .unwrap());
        let zero = QMatrix2::scalar(LaurentPoly::zero(), Convention::Q);
        assert_eq!(zero.projective_normalize(), Err(Error::ZeroMatrix));
    }

    #[test]
    fn word_parsing() {
        assert_eq!(w("aBaB"), w("1,-2,1,-2"));
        assert_eq!(w("").len(), 0);
        assert!("abc".parse::<BraidWord>().is_err());
        assert!("1,3".parse::<BraidWord>().is_err());
        assert_eq!(w("aB").inverse(), w("bA"));
        assert_eq!(w("ab").pow(-2), w("BABA"));
        assert_eq!(w("aBaB").to_string(), "aBaB");
        assert_eq!(w("aBa").exponent_sum(), 1);
    }

    #[test]
    fn rendering() {
        assert_eq!(QMatrix2::rho3(&BraidWord::center()).to_string(), "t^3 * Id");
        assert_eq!(QMatrix2::rho3(&BraidWord::empty()).to_string(), "Id");
        assert_eq!(
            QMatrix2::rho3(&w("aBaB")).to_string(),
            "t^-2 * [[-t+t^2-2t^3+t^4, 1-t+t^2], [-t+t^2-t^3, 1-t]]"
        );
    }
}
