//! Taylor expansions of q-rationals at `q = 0` and the stabilized series of
//! quadratic irrationals.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Serialize, Serializer};

use crate::cfrac::Fraction;
use crate::error::{Error, Result};
use crate::exactpoly::LaurentPoly;
use crate::qrat::{q_deform, QRational};
use crate::rootloc::roots;

/// Largest convergent index tried before giving up on stabilization.
pub const STABILIZATION_CAP: usize = 200;

/// Truncated power series `sum_k coeffs[k] q^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PowerSeries {
    coeffs: Vec<BigInt>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        PowerSeries { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Number of computed terms.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn truncate(&self, order: usize) -> PowerSeries {
        PowerSeries::new(self.coeffs[..order.min(self.coeffs.len())].to_vec())
    }

    pub fn to_poly(&self) -> LaurentPoly {
        LaurentPoly::new(0, self.coeffs.clone())
    }

    pub fn is_prefix_of(&self, other: &PowerSeries) -> bool {
        other.coeffs.starts_with(&self.coeffs)
    }
}

impl fmt::Display for PowerSeries {
    /// `1 + q^2 - q^3 + ...`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.to_poly();
        if p.is_zero() {
            f.write_str("0")?;
        } else {
            write!(f, "{p}")?;
        }
        f.write_str(" + ...")
    }
}

/// First `order` Taylor coefficients of `num/den` at `q = 0`.
pub fn series_of_pair(num: &LaurentPoly, den: &LaurentPoly, order: usize) -> Result<PowerSeries> {
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if den.low() != 0 {
        return Err(Error::NonUnitConstantTerm(den.coeff(0).to_string()));
    }
    let d0 = den.coeff(0);
    if !d0.abs().is_one() {
        return Err(Error::NonUnitConstantTerm(d0.to_string()));
    }
    if !num.is_zero() && num.low() < 0 {
        return Err(Error::NegativeValuation);
    }
    let d = den.coeffs();
    let mut out: Vec<BigInt> = Vec::with_capacity(order);
    for i in 0..order {
        let mut c = num.coeff(i as i64);
        for j in 1..=i.min(d.len() - 1) {
            c -= &d[j] * &out[i - j];
        }
        // d0 = ±1
        out.push(if d0.is_one() { c } else { -c });
    }
    Ok(PowerSeries::new(out))
}

pub fn taylor(x: &QRational, order: usize) -> Result<PowerSeries> {
    series_of_pair(x.num(), x.den(), order)
}

/// Number of leading Taylor coefficients on which two q-rationals agree;
/// `None` when they are the same function.
///
/// With unit constant terms in both denominators this is the q-valuation of
/// `R1 S2 - R2 S1`.
pub fn agreement_order(a: &QRational, b: &QRational) -> Option<usize> {
    let diff = a.num() * b.den() - b.num() * a.den();
    if diff.is_zero() {
        None
    } else {
        Some(diff.low().max(0) as usize)
    }
}

/// An eventually periodic continued fraction `[pre..; period, period, ...]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PeriodicCF {
    preperiod: Vec<u64>,
    period: Vec<u64>,
}

impl PeriodicCF {
    pub fn new(preperiod: Vec<u64>, period: Vec<u64>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidArgument(
                "a periodic continued fraction needs a nonempty period".into(),
            ));
        }
        let all: Vec<u64> = preperiod.iter().chain(&period).copied().collect();
        if all[1..].contains(&0) || (preperiod.is_empty() && period[0] == 0) {
            return Err(Error::InvalidArgument(
                "only the first partial quotient may be zero".into(),
            ));
        }
        Ok(PeriodicCF { preperiod, period })
    }

    /// `φ = [1; 1, 1, ...]`.
    pub fn golden() -> Self {
        PeriodicCF {
            preperiod: Vec::new(),
            period: vec![1],
        }
    }

    pub fn preperiod(&self) -> &[u64] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u64] {
        &self.period
    }

    /// The `i`-th partial quotient, starting from 0.
    pub fn term(&self, i: usize) -> u64 {
        match self.preperiod.get(i) {
            Some(&a) => a,
            None => self.period[(i - self.preperiod.len()) % self.period.len()],
        }
    }

    pub fn value(&self) -> f64 {
        // Fixed point of the period, then the preperiod on top.
        let mut x = 1.0;
        for _ in 0..200 {
            x = self
                .period
                .iter()
                .rev()
                .fold(x, |acc, &a| a as f64 + 1.0 / acc);
        }
        self.preperiod
            .iter()
            .rev()
            .fold(x, |acc, &a| a as f64 + 1.0 / acc)
    }
}

impl FromStr for PeriodicCF {
    type Err = Error;

    /// `phi`, or `pre;period` with comma separated terms, e.g. `1;2` for √2.
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.eq_ignore_ascii_case("phi") {
            return Ok(PeriodicCF::golden());
        }
        let (pre, per) = text
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("expected `pre;period`, got {text:?}")))?;
        let terms = |s: &str| -> Result<Vec<u64>> {
            s.split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<u64>()
                        .map_err(|_| Error::Parse(format!("bad term {t:?}")))
                })
                .collect()
        };
        PeriodicCF::new(terms(pre)?, terms(per)?)
    }
}

impl fmt::Display for PeriodicCF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "{};{}", join(&self.preperiod), join(&self.period))
    }
}

/// The `m`-term truncation `[a0; a1, ..., a(m-1)]`.
pub fn convergent(x: &PeriodicCF, m: usize) -> Result<Fraction> {
    if m < 1 {
        return Err(Error::InvalidArgument(
            "convergent index must be >= 1".into(),
        ));
    }
    let (mut p0, mut p1) = (0i64, 1i64);
    let (mut q0, mut q1) = (1i64, 0i64);
    for i in 0..m {
        let a =
            i64::try_from(x.term(i)).map_err(|_| Error::Overflow("reading a partial quotient"))?;
        let step = |prev: i64, prev2: i64| {
            a.checked_mul(prev)
                .and_then(|v| v.checked_add(prev2))
                .ok_or(Error::Overflow("computing a convergent"))
        };
        let p = step(p1, p0)?;
        let q = step(q1, q0)?;
        (p0, p1, q0, q1) = (p1, p, q1, q);
    }
    Fraction::new(p1, q1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizedSeries {
    pub series: PowerSeries,
    /// Index of the last of the three agreeing convergents.
    pub stable_at_m: usize,
    /// `(m, agreement order of convergents m and m+1)` for every pair examined.
    pub agreement_orders: Vec<(usize, Option<usize>)>,
}

impl Serialize for StabilizedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            order: usize,
            coeffs: Vec<String>,
            stable_at_m: usize,
        }
        Repr {
            order: self.series.order(),
            coeffs: self.series.coeffs().iter().map(|c| c.to_string()).collect(),
            stable_at_m: self.stable_at_m,
        }
        .serialize(s)
    }
}

/// q-deformations of successive positive convergents, starting at `m = 1`
/// (non-positive leading convergents such as `0/1` are skipped).
fn deformed_convergent(x: &PeriodicCF, m: usize) -> Result<Option<QRational>> {
    let c = convergent(x, m)?;
    if !c.is_positive() {
        return Ok(None);
    }
    q_deform(c).map(Some)
}

/// The Taylor prefix of `[x]_q` of length `order`, certified once three
/// consecutive convergents agree on it.
pub fn stabilized_series(x: &PeriodicCF, order: usize) -> Result<StabilizedSeries> {
    let not_reached = |cap| Error::StabilizationNotReached { order, cap };
    let mut window: Vec<(usize, QRational)> = Vec::new();
    let mut agreement_orders = Vec::new();
    for m in 1..=STABILIZATION_CAP {
        let qr = match deformed_convergent(x, m) {
            Ok(Some(q)) => q,
            Ok(None) => continue,
            Err(Error::Overflow(_)) => return Err(not_reached(m)),
            Err(e) => return Err(e),
        };
        if let Some((pm, prev)) = window.last() {
            agreement_orders.push((*pm, agreement_order(prev, &qr)));
        }
        window.push((m, qr));
        if window.len() > 3 {
            window.remove(0);
        }
        if window.len() == 3 {
            let agrees =
                |a: &QRational, b: &QRational| agreement_order(a, b).is_none_or(|k| k >= order);
            if agrees(&window[0].1, &window[1].1) && agrees(&window[1].1, &window[2].1) {
                return Ok(StabilizedSeries {
                    series: taylor(&window[2].1, order)?,
                    stable_at_m: m,
                    agreement_orders,
                });
            }
        }
    }
    Err(not_reached(STABILIZATION_CAP))
}

/// Agreement orders between convergents `m` and `m + 1` for `1 <= m < m_max`.
pub fn agreement_profile(x: &PeriodicCF, m_max: usize) -> Result<Vec<(usize, Option<usize>)>> {
    let mut out = Vec::new();
    let mut prev: Option<(usize, QRational)> = None;
    for m in 1..=m_max {
        if let Some(qr) = deformed_convergent(x, m)? {
            if let Some((pm, p)) = &prev {
                out.push((*pm, agreement_order(p, &qr)));
            }
            prev = Some((m, qr));
        }
    }
    Ok(out)
}

/// Smallest modulus among the poles of `[convergent(x, m)]_q`; infinite when
/// the denominator has no roots.
pub fn radius_estimate(x: &PeriodicCF, m: usize) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidArgument(
            "radius estimate needs m >= 2".into(),
        ));
    }
    let qr = q_deform(convergent(x, m)?)?;
    let found =
        roots(qr.den()).map_err(|e| e.with_context(format!("denominator of [{}]_q", qr.frac())))?;
    Ok(found.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(r: i64, s: i64) -> Fraction {
        Fraction::new(r, s).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn taylor_examples() {
        let t = taylor(&q_deform(f(3, 2)).unwrap(), 6).unwrap();
        assert_eq!(t.coeffs(), ints(&[1, 0, 1, -1, 1, -1]).as_slice());
        let t = taylor(&q_deform(f(2, 1)).unwrap(), 4).unwrap();
        assert_eq!(t.coeffs(), ints(&[1, 1, 0, 0]).as_slice());
        let t = taylor(&q_deform(f(5, 3)).unwrap(), 5).unwrap();
        assert_eq!(t.coeffs(), ints(&[1, 0, 1, 0, -1]).as_slice());
    }

    #[test]
    fn taylor_rejects_non_unit_constant() {
        let num = LaurentPoly::one();
        let den = LaurentPoly::new(0, [2, 1]);
        assert!(matches!(
            series_of_pair(&num, &den, 3),
            Err(Error::NonUnitConstantTerm(_))
        ));
        let den = LaurentPoly::new(0, [-1, 1]);
        assert_eq!(
            series_of_pair(&num, &den, 3).unwrap().coeffs(),
            ints(&[-1, -1, -1]).as_slice()
        );
    }

    #[test]
    fn convergents() {
        let phi = PeriodicCF::golden();
        assert_eq!(convergent(&phi, 2).unwrap(), f(2, 1));
        assert_eq!(convergent(&phi, 5).unwrap(), f(8, 5));
        let sqrt2 = PeriodicCF::new(vec![1], vec![2]).unwrap();
        assert_eq!(convergent(&sqrt2, 3).unwrap(), f(7, 5));
        assert!(matches!(convergent(&phi, 100), Err(Error::Overflow(_))));
    }

    #[test]
    fn periodic_cf_validation_and_parsing() {
        assert!(PeriodicCF::new(vec![1, 2], vec![]).is_err());
        assert!(PeriodicCF::new(vec![1, 0], vec![1]).is_err());
        assert!(PeriodicCF::new(vec![0, 2], vec![1]).is_ok());
        assert_eq!("phi".parse::<PeriodicCF>().unwrap(), PeriodicCF::golden());
        assert_eq!(";1".parse::<PeriodicCF>().unwrap(), PeriodicCF::golden());
        assert_eq!(
            "1;2".parse::<PeriodicCF>().unwrap(),
            PeriodicCF::new(vec![1], vec![2]).unwrap()
        );
        assert!("1,2".parse::<PeriodicCF>().is_err());
        assert!("1;".parse::<PeriodicCF>().is_err());
        assert!(("1;2".parse::<PeriodicCF>().unwrap().value() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn golden_stabilization() {
        let s = stabilized_series(&PeriodicCF::golden(), 3).unwrap();
        assert_eq!(s.series.coeffs(), ints(&[1, 0, 1]).as_slice());
        assert_eq!(s.stable_at_m, 5);
        let s10 = stabilized_series(&PeriodicCF::golden(), 10).unwrap();
        assert!(s.series.is_prefix_of(&s10.series));
        assert!(s10.stable_at_m <= 25);
    }

    #[test]
    fn agreement_is_valuation_of_cross_difference() {
        let a = q_deform(f(3, 2)).unwrap();
        let b = q_deform(f(5, 3)).unwrap();
        assert_eq!(agreement_order(&a, &b), Some(3));
        assert_eq!(agreement_order(&a, &a), None);
        let ta = taylor(&a, 10).unwrap();
        let tb = taylor(&b, 10).unwrap();
        let first_diff = (0..10).find(|&i| ta.coeffs()[i] != tb.coeffs()[i]);
        assert_eq!(first_diff, Some(3));
    }

    #[test]
    fn radius_small_m() {
        let phi = PeriodicCF::golden();
        assert!((radius_estimate(&phi, 3).unwrap() - 1.0).abs() < 1e-12);
        assert!(radius_estimate(&phi, 2).unwrap().is_infinite());
        assert!(radius_estimate(&phi, 1).is_err());
    }

    #[test]
    fn rendering() {
        let s = PowerSeries::new(ints(&[1, 0, 1, -1]));
        assert_eq!(s.to_string(), "1 + q^2 - q^3 + ...");
    }
}
