//! Faithfulness of specializations of the Burau representation of B3, the
//! word problem, the triangular subgroup `<σ1, z>`, and Alexander
//! polynomials of braid closures.
//!
//! `ρ3` specialized at `t0` is faithful exactly when `-t0` avoids every pole
//! of every q-rational and the point 1. Known families are decided exactly;
//! the remaining points are searched for a pole witness among a finite range
//! of fractions, which can only ever prove unfaithfulness.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::braidmat::{BraidLetter, BraidWord, Convention, QMatrix2};
use crate::cfrac::{enumerate_fractions, Fraction};
use crate::error::{Error, Result};
use crate::exactpoly::{ComplexPoint, LaurentPoly};
use crate::par::{self, Exec};
use crate::qrat::q_deform;
use crate::rootloc::{scaled_residual, PROVEN_INNER, PROVEN_OUTER, RESIDUAL_TOL};

/// Margin around the proven annulus for the outside-annulus verdict.
pub const ANNULUS_MARGIN: f64 = 1e-9;
/// Relative size of `|den(-t0)|` that triggers a Newton confirmation.
pub const SEARCH_TOL: f64 = 1e-8;
/// Distance within which a confirmed root must lie from `-t0`.
pub const CONFIRM_TOL: f64 = 1e-8;

/// A nonzero specialization value `t0`.
#[derive(Debug, Clone, PartialEq)]
pub enum SpecPoint {
    NegOne,
    /// `e^(2πik/n)` with `1 <= k < n`.
    RootOfUnity {
        n: u64,
        k: u64,
    },
    RealValue(Ratio<i64>),
    ComplexValue(ComplexPoint),
}

impl SpecPoint {
    pub fn root_of_unity(n: u64, k: u64) -> Result<Self> {
        if n < 2 || k < 1 || k >= n {
            return Err(Error::InvalidArgument(format!(
                "zeta({n},{k}) needs n >= 2 and 1 <= k < n"
            )));
        }
        Ok(SpecPoint::RootOfUnity { n, k })
    }

    pub fn real(r: i64, s: i64) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Ok(SpecPoint::RealValue(Ratio::new(r, s)))
    }

    pub fn to_complex(&self) -> ComplexPoint {
        match self {
            SpecPoint::NegOne => Complex64::new(-1.0, 0.0),
            SpecPoint::RootOfUnity { n, k } => {
                Complex64::from_polar(1.0, std::f64::consts::TAU * *k as f64 / *n as f64)
            }
            SpecPoint::RealValue(x) => Complex64::new(x.to_f64().unwrap_or(f64::NAN), 0.0),
            SpecPoint::ComplexValue(z) => *z,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            SpecPoint::RealValue(x) => x.is_zero(),
            SpecPoint::ComplexValue(z) => z.is_zero(),
            _ => false,
        }
    }

    pub fn is_neg_one(&self) -> bool {
        match self {
            SpecPoint::NegOne => true,
            SpecPoint::RootOfUnity { n, k } => 2 * k == *n,
            SpecPoint::RealValue(x) => *x == Ratio::from_integer(-1),
            SpecPoint::ComplexValue(z) => *z == Complex64::new(-1.0, 0.0),
        }
    }

    /// Exactly real and negative.
    fn is_negative_real(&self) -> bool {
        match self {
            SpecPoint::NegOne => true,
            SpecPoint::RootOfUnity { .. } => false,
            SpecPoint::RealValue(x) => x.is_negative(),
            SpecPoint::ComplexValue(z) => z.im == 0.0 && z.re < 0.0,
        }
    }
}

fn parse_decimal(text: &str) -> Option<Ratio<i64>> {
    if let Some((r, s)) = text.split_once('/') {
        let (r, s) = (r.trim().parse::<i64>().ok()?, s.trim().parse::<i64>().ok()?);
        return (s != 0).then(|| Ratio::new(r, s));
    }
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 15 {
        return None;
    }
    let digits: i64 = format!("{int}{frac}").parse().ok()?;
    let scale = 10i64.checked_pow(frac.len() as u32)?;
    let x = Ratio::new(digits, scale);
    Some(if neg { -x } else { x })
}

fn parse_complex(text: &str) -> Option<Complex64> {
    let body = text.strip_suffix('i')?;
    // Split at the last sign that is not the leading one or part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => s.parse::<f64>().ok()?,
    };
    Some(Complex64::new(re.parse::<f64>().ok()?, im))
}

impl FromStr for SpecPoint {
    type Err = Error;

    /// `-1`, `0.5`, `1/3`, `0.5+0.2i`, or `zeta(n,k)` for `e^(2πik/n)`.
    fn from_str(text: &str) -> Result<Self> {
        let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("cannot read specialization point {text:?}"));
        if let Some(args) = text.strip_prefix("zeta(").and_then(|s| s.strip_suffix(')')) {
            let (n, k) = args.split_once(',').ok_or_else(bad)?;
            let n = n.parse::<u64>().map_err(|_| bad())?;
            let k = k.parse::<u64>().map_err(|_| bad())?;
            return SpecPoint::root_of_unity(n, k);
        }
        if let Some(x) = parse_decimal(&text) {
            if x == Ratio::from_integer(-1) {
                return Ok(SpecPoint::NegOne);
            }
            return Ok(SpecPoint::RealValue(x));
        }
        if let Some(z) = parse_complex(&text) {
            return Ok(SpecPoint::ComplexValue(z));
        }
        if let Ok(x) = text.parse::<f64>() {
            if x.is_finite() {
                return Ok(SpecPoint::ComplexValue(Complex64::new(x, 0.0)));
            }
        }
        Err(bad())
    }
}

impl fmt::Display for SpecPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecPoint::NegOne => f.write_str("-1"),
            SpecPoint::RootOfUnity { n, k } => write!(f, "zeta({n},{k})"),
            SpecPoint::RealValue(x) => write!(f, "{x}"),
            SpecPoint::ComplexValue(z) => write!(f, "{}{:+}i", z.re, z.im),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    /// `t0 = -1`: the center of B3 is in the kernel.
    UnfaithfulCenter,
    /// `-t0` is a primitive root of unity, hence a pole of `[witness]_q`.
    UnfaithfulRootOfUnityPole {
        witness: Fraction,
    },
    /// A denominator root of `[witness]_q` was located at `-t0`.
    UnfaithfulPoleWitness {
        witness: Fraction,
        root: ComplexPoint,
    },
    FaithfulOutsideAnnulus,
    FaithfulNegativeReal,
    /// No pole found among fractions with denominator up to `max_den`; this
    /// is not a faithfulness proof.
    NoWitnessUpTo {
        max_den: i64,
    },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::UnfaithfulCenter => "UnfaithfulCenter",
            Verdict::UnfaithfulRootOfUnityPole { .. } => "UnfaithfulRootOfUnityPole",
            Verdict::UnfaithfulPoleWitness { .. } => "UnfaithfulPoleWitness",
            Verdict::FaithfulOutsideAnnulus => "FaithfulOutsideAnnulus",
            Verdict::FaithfulNegativeReal => "FaithfulNegativeReal",
            Verdict::NoWitnessUpTo { .. } => "NoWitnessUpTo",
        }
    }

    pub fn witness(&self) -> Option<Fraction> {
        match self {
            Verdict::UnfaithfulRootOfUnityPole { witness }
            | Verdict::UnfaithfulPoleWitness { witness, .. } => Some(*witness),
            _ => None,
        }
    }

    pub fn is_faithful(&self) -> bool {
        matches!(
            self,
            Verdict::FaithfulOutsideAnnulus | Verdict::FaithfulNegativeReal
        )
    }

    pub fn is_unfaithful(&self) -> bool {
        matches!(
            self,
            Verdict::UnfaithfulCenter
                | Verdict::UnfaithfulRootOfUnityPole { .. }
                | Verdict::UnfaithfulPoleWitness { .. }
        )
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::UnfaithfulCenter => f.write_str("UNFAITHFUL (center in kernel)"),
            Verdict::UnfaithfulRootOfUnityPole { witness } => write!(
                f,
                "UNFAITHFUL (-t0 is a primitive {}-th root of unity, a pole of [{witness}]_q)",
                witness.denom()
            ),
            Verdict::UnfaithfulPoleWitness { witness, root } => write!(
                f,
                "UNFAITHFUL (-t0 is a pole of [{witness}]_q near {}{:+}i)",
                root.re, root.im
            ),
            Verdict::FaithfulOutsideAnnulus => {
                f.write_str("FAITHFUL (|t0| outside the annulus 3-2*sqrt(2) <= |t| <= 3+2*sqrt(2))")
            }
            Verdict::FaithfulNegativeReal => f.write_str("FAITHFUL (negative real t0 != -1)"),
            Verdict::NoWitnessUpTo { max_den } => write!(
                f,
                "UNDECIDED (no pole of [r/s]_q at -t0 with s <= {max_den}; search is a semi-decision)"
            ),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Witness {
            r: i64,
            s: i64,
        }
        #[derive(Serialize)]
        struct Repr {
            verdict: &'static str,
            witness: Option<Witness>,
            root: Option<[f64; 2]>,
            #[serde(skip_serializing_if = "Option::is_none")]
            max_den: Option<i64>,
        }
        let root = match self {
            Verdict::UnfaithfulPoleWitness { root, .. } => Some([root.re, root.im]),
            _ => None,
        };
        let max_den = match self {
            Verdict::NoWitnessUpTo { max_den } => Some(*max_den),
            _ => None,
        };
        Repr {
            verdict: self.name(),
            witness: self.witness().map(|w| Witness {
                r: w.numer(),
                s: w.denom(),
            }),
            root,
            max_den,
        }
        .serialize(s)
    }
}

/// Order of `-e^(2πik/n)` as a root of unity.
fn order_of_negated_root(n: u64, k: u64) -> u64 {
    // -e^(2πik/n) = e^(2πi(2k+n)/(2n))
    let num = 2 * k + n;
    let den = 2 * n;
    den / num.gcd(&den)
}

pub fn classify_specialization(t0: &SpecPoint, max_den: i64) -> Result<Verdict> {
    classify_specialization_with(t0, max_den, Exec::default())
}

pub fn classify_specialization_with(t0: &SpecPoint, max_den: i64, exec: Exec) -> Result<Verdict> {
    classify_specialization_tol(t0, max_den, exec, &SearchTolerances::default())
}

/// Tolerances of the numerical branches of the classifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchTolerances {
    pub annulus_margin: f64,
    pub search: f64,
    pub confirm: f64,
}

impl Default for SearchTolerances {
    fn default() -> Self {
        SearchTolerances {
            annulus_margin: ANNULUS_MARGIN,
            search: SEARCH_TOL,
            confirm: CONFIRM_TOL,
        }
    }
}

pub fn classify_specialization_tol(
    t0: &SpecPoint,
    max_den: i64,
    exec: Exec,
    tol: &SearchTolerances,
) -> Result<Verdict> {
    if max_den < 2 {
        return Err(Error::InvalidArgument(format!(
            "max_den must be >= 2, got {max_den}"
        )));
    }
    if t0.is_zero() {
        return Err(Error::ZeroInput);
    }
    let z = t0.to_complex();
    if !z.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "non-finite specialization {t0}"
        )));
    }
    if t0.is_neg_one() {
        return Ok(Verdict::UnfaithfulCenter);
    }
    if let SpecPoint::RootOfUnity { n, k } = t0 {
        let d = order_of_negated_root(*n, *k);
        // d = 1 would mean t0 = -1, handled above.
        return Ok(Verdict::UnfaithfulRootOfUnityPole {
            witness: Fraction::new(1, d as i64)?,
        });
    }
    if t0.is_negative_real() {
        return Ok(Verdict::FaithfulNegativeReal);
    }
    let modulus = z.norm();
    if modulus < PROVEN_INNER - tol.annulus_margin || modulus > PROVEN_OUTER + tol.annulus_margin {
        return Ok(Verdict::FaithfulOutsideAnnulus);
    }
    let target = -z;
    let fracs = enumerate_fractions(max_den);
    let found = par::find_map_first(exec, &fracs, |x| pole_witness(*x, target, tol));
    Ok(match found {
        Some((witness, root)) => Verdict::UnfaithfulPoleWitness { witness, root },
        None => Verdict::NoWitnessUpTo { max_den },
    })
}

/// Confirms that `target` is (numerically) a root of the denominator of `[x]_q`.
fn pole_witness(
    x: Fraction,
    target: ComplexPoint,
    tol: &SearchTolerances,
) -> Option<(Fraction, ComplexPoint)> {
    let den = q_deform(x).ok()?.den().clone();
    let c = den.scaled_f64_coeffs();
    if c.len() < 2 || scaled_residual(&c, target) > tol.search * abs_bound(&c, target) {
        return None;
    }
    let deriv: Vec<f64> = c
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, a)| i as f64 * a)
        .collect();
    let eval = |coeffs: &[f64], z: Complex64| {
        coeffs
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, &a| acc * z + a)
    };
    let mut root = target;
    for _ in 0..50 {
        let d = eval(&deriv, root);
        if d.is_zero() {
            break;
        }
        let step = eval(&c, root) / d;
        if !step.is_finite() {
            return None;
        }
        root -= step;
        if step.norm() <= f64::EPSILON * root.norm().max(1.0) {
            break;
        }
    }
    let close = (root - target).norm() <= tol.confirm * target.norm().max(1.0);
    (close && scaled_residual(&c, root) <= RESIDUAL_TOL).then_some((x, root))
}

/// Normalizer for the scaled residual: `sum |c_i| |z|^i` on the same scale.
fn abs_bound(coeffs: &[f64], z: Complex64) -> f64 {
    let r = z.norm();
    let (r, it): (f64, Box<dyn Iterator<Item = &f64>>) = if r <= 1.0 {
        (r, Box::new(coeffs.iter().rev()))
    } else {
        (1.0 / r, Box::new(coeffs.iter()))
    };
    it.fold(0.0, |acc, c| acc * r + c.abs())
}

/// `ρ3(w) = Id` over `Z[t, t^-1]`; since `ρ3` is faithful this decides the
/// word problem in B3.
pub fn is_trivial_braid(w: &BraidWord) -> bool {
    QMatrix2::rho3(w).is_identity()
}

pub fn braids_equal(w1: &BraidWord, w2: &BraidWord) -> bool {
    QMatrix2::rho3(w1) == QMatrix2::rho3(w2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decomposition {
    /// `w = σ1^k z^m`.
    Member { k: i64, m: i64 },
    /// The lower-left Burau entry is not identically zero.
    NotMember,
}

fn value_at_minus_one(p: &LaurentPoly) -> BigInt {
    p.negate_variable().eval_at_one()
}

/// Writes `w` as `σ1^k z^m` when the lower-left entry of `ρ3(w)` vanishes.
pub fn triangular_decompose(w: &BraidWord) -> Result<Decomposition> {
    let m = QMatrix2::rho3(w);
    if !m.c.is_zero() {
        return Ok(Decomposition::NotMember);
    }
    // At t = -1, σ1^k z^m maps to (-1)^m [[1, k], [0, 1]].
    let d = value_at_minus_one(&m.d);
    let b = value_at_minus_one(&m.b);
    let fail = |k, m| Error::InconsistentDecomposition { k, m };
    if !d.abs().is_one() {
        return Err(fail(0, 0));
    }
    let k = (&b * &d).to_i64().ok_or_else(|| fail(0, 0))?;
    // det ρ3(w) = (-t)^e with e = k + 6m.
    let e = w.exponent_sum();
    if (e - k) % 6 != 0 {
        return Err(fail(k, 0));
    }
    let zm = (e - k) / 6;
    let s1 = BraidWord::new(vec![BraidLetter::S1]);
    let candidate = s1.pow(k).concat(&BraidWord::center().pow(zm));
    if QMatrix2::rho3(&candidate) != m {
        return Err(fail(k, zm));
    }
    Ok(Decomposition::Member { k, m: zm })
}

/// Alexander polynomial of the closure of `w`, as `det(I - ρ3(w)) / (1 + t + t^2)`
/// normalized to lowest exponent 0 and positive lowest coefficient.
pub fn alexander(w: &BraidWord) -> Result<LaurentPoly> {
    let m = QMatrix2::rho3(w);
    let id = QMatrix2::identity(Convention::T);
    let diff = QMatrix2::new(&id.a - &m.a, -&m.b, -&m.c, &id.d - &m.d, Convention::T);
    let q3 = LaurentPoly::new(0, [1, 1, 1]);
    Ok(diff.det().exact_divide(&q3)?.unit_normalize())
}

/// Denominator of `[x]_q` evaluated at `-t0`.
pub fn denominator_at(x: Fraction, t0: ComplexPoint) -> Result<ComplexPoint> {
    q_deform(x)?.den().eval_complex(-t0)
}

impl One for Decomposition {
    fn one() -> Self {
        Decomposition::Member { k: 0, m: 0 }
    }
}

impl std::ops::Mul for Decomposition {
    type Output = Decomposition;

    /// `σ1` commutes with `z`, so members multiply componentwise.
    fn mul(self, rhs: Decomposition) -> Decomposition {
        match (self, rhs) {
            (Decomposition::Member { k: k1, m: m1 }, Decomposition::Member { k: k2, m: m2 }) => {
                Decomposition::Member {
                    k: k1 + k2,
                    m: m1 + m2,
                }
            }
            _ => Decomposition::NotMember,
        }
    }
}
