//! Complex roots of the numerators and denominators of q-rationals.
//!
//! Roots are found with the Aberth-Ehrlich simultaneous iteration followed by
//! a few Newton steps. Coefficients are converted from exact integers after
//! dividing by the largest one, and residuals are measured on that scaled
//! polynomial (on its reversal when `|z| > 1`, which is `|p(z)| / |z|^deg`).

use std::cmp::Ordering;
use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::braidmat::{Convention, ModLetter, QMatrix2};
use crate::cfrac::{default_numerator_extra, enumerate_fractions_capped, Fraction};
use crate::error::{Error, Result};
use crate::exactpoly::{ComplexPoint, LaurentPoly};
use crate::par::{self, Exec};
use crate::qrat::q_deform;

/// Inner radius of the proven annulus, `3 - 2√2`.
pub const PROVEN_INNER: f64 = 0.171_572_875_253_809_9;
/// Outer radius of the proven annulus, `3 + 2√2`.
pub const PROVEN_OUTER: f64 = 5.828_427_124_746_19;
/// Inner radius of the conjectured annulus, `(3 - √5)/2`.
pub const CONJECTURED_INNER: f64 = 0.381_966_011_250_105_1;
/// Outer radius of the conjectured annulus, `(3 + √5)/2`.
pub const CONJECTURED_OUTER: f64 = 2.618_033_988_749_895;

pub const RESIDUAL_TOL: f64 = 1e-10;
pub const ANNULUS_TOL: f64 = 1e-6;
const MAX_ITER: usize = 200;
const POLISH_STEPS: usize = 3;
const GUESS_SEED: u64 = 0x0b3a_u64;

/// Scaled residual of `coeffs` (ascending, max |c| = 1) at `z`.
pub fn scaled_residual(coeffs: &[f64], z: Complex64) -> f64 {
    if z.norm() <= 1.0 {
        horner(coeffs.iter().rev(), z).norm()
    } else {
        horner(coeffs.iter(), z.inv()).norm()
    }
}

fn horner<'a>(it: impl Iterator<Item = &'a f64>, z: Complex64) -> Complex64 {
    it.fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Horner for value and derivative; coefficients given highest first.
fn horner_with_derivative<'a>(
    it: impl Iterator<Item = &'a f64>,
    z: Complex64,
) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    it.fold((zero, zero), |(v, d), &c| (v * z + c, d * z + v))
}

/// Newton correction `p(z)/p'(z)`, evaluated on the reversed polynomial when
/// `|z| > 1` to keep magnitudes bounded.
fn newton_ratio(coeffs: &[f64], z: Complex64) -> Complex64 {
    let n = (coeffs.len() - 1) as f64;
    if z.norm() <= 1.0 {
        let (v, d) = horner_with_derivative(coeffs.iter().rev(), z);
        if v == Complex64::new(0.0, 0.0) {
            return v;
        }
        v / d
    } else {
        let w = z.inv();
        let (v, d) = horner_with_derivative(coeffs.iter(), w);
        if v == Complex64::new(0.0, 0.0) {
            return v;
        }
        z * v / (v * n - w * d)
    }
}

fn initial_guesses(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n].abs();
    let radius = coeffs[..n]
        .iter()
        .map(|c| c.abs() / lead)
        .fold(0.0f64, f64::max)
        .powf(1.0 / n as f64)
        .max(f64::MIN_POSITIVE);
    let mut rng = ChaCha8Rng::seed_from_u64(GUESS_SEED);
    let step = std::f64::consts::TAU / n as f64;
    (0..n)
        .map(|k| {
            let phase = 0.4 + step * (k as f64 + 0.25 * rng.random::<f64>());
            Complex64::from_polar(radius, phase)
        })
        .collect()
}

/// All complex roots of the ordinary polynomial with the given ascending
/// coefficients (nonzero constant term not required). Roots are returned
/// sorted by real part, then imaginary part.
pub fn roots_of_coeffs(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    roots_of_coeffs_tol(coeffs, RESIDUAL_TOL)
}

/// [`roots_of_coeffs`] with an explicit bound on the scaled residual.
pub fn roots_of_coeffs_tol(coeffs: &[f64], residual_tol: f64) -> Result<Vec<Complex64>> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut z = if n == 1 {
        vec![Complex64::new(-coeffs[0] / coeffs[1], 0.0)]
    } else {
        aberth(coeffs)
    };
    for zk in z.iter_mut() {
        for _ in 0..POLISH_STEPS {
            let cand = *zk - newton_ratio(coeffs, *zk);
            if cand.is_finite() && scaled_residual(coeffs, cand) < scaled_residual(coeffs, *zk) {
                *zk = cand;
            } else {
                break;
            }
        }
    }
    let worst = z
        .iter()
        .map(|&r| scaled_residual(coeffs, r))
        .fold(
            0.0f64,
            |a, b| if b.is_nan() { f64::INFINITY } else { a.max(b) },
        );
    if worst > residual_tol {
        return Err(Error::NoConvergence {
            degree: n,
            residual: worst,
            context: None,
        });
    }
    z.sort_by(cmp_complex);
    Ok(z)
}

fn aberth(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let mut z = initial_guesses(coeffs);
    let mut done = vec![false; n];
    for _ in 0..MAX_ITER {
        for k in 0..n {
            if done[k] {
                continue;
            }
            let ratio = newton_ratio(coeffs, z[k]);
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.is_finite() {
                continue;
            }
            z[k] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[k].norm() {
                done[k] = true;
            }
        }
        if done.iter().all(|&d| d) {
            break;
        }
    }
    z
}

fn cmp_complex(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Nonzero complex roots of a Laurent polynomial, with multiplicity.
pub fn roots(p: &LaurentPoly) -> Result<Vec<ComplexPoint>> {
    if p.is_zero() {
        return Err(Error::InvalidArgument(
            "the zero polynomial has no root set".into(),
        ));
    }
    roots_of_coeffs(&p.scaled_f64_coeffs())
}

/// Roots together with their scaled residuals.
pub fn roots_with_residuals(p: &LaurentPoly) -> Result<Vec<(ComplexPoint, f64)>> {
    roots_with_residuals_tol(p, RESIDUAL_TOL)
}

pub fn roots_with_residuals_tol(
    p: &LaurentPoly,
    residual_tol: f64,
) -> Result<Vec<(ComplexPoint, f64)>> {
    if p.is_zero() {
        return Err(Error::InvalidArgument(
            "the zero polynomial has no root set".into(),
        ));
    }
    let c = p.scaled_f64_coeffs();
    Ok(roots_of_coeffs_tol(&c, residual_tol)?
        .into_iter()
        .map(|z| (z, scaled_residual(&c, z)))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Part {
    #[serde(rename = "num")]
    Numerator,
    #[serde(rename = "den")]
    Denominator,
}

impl Part {
    pub fn label(self) -> &'static str {
        match self {
            Part::Numerator => "num",
            Part::Denominator => "den",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootRecord {
    pub frac: Fraction,
    pub part: Part,
    pub root: ComplexPoint,
    pub residual: f64,
}

impl RootRecord {
    pub fn modulus(&self) -> f64 {
        self.root.norm()
    }

    fn sort_cmp(&self, o: &RootRecord) -> Ordering {
        self.frac
            .enumeration_key()
            .cmp(&o.frac.enumeration_key())
            .then(self.part.cmp(&o.part))
            .then(cmp_complex(&self.root, &o.root))
    }
}

/// One CSV/JSON row.
#[derive(Serialize)]
struct RecordRow {
    r: i64,
    s: i64,
    part: Part,
    root_re: f64,
    root_im: f64,
    modulus: f64,
    residual: f64,
}

impl From<&RootRecord> for RecordRow {
    fn from(x: &RootRecord) -> Self {
        RecordRow {
            r: x.frac.numer(),
            s: x.frac.denom(),
            part: x.part,
            root_re: x.root.re,
            root_im: x.root.im,
            modulus: x.modulus(),
            residual: x.residual,
        }
    }
}

impl Serialize for RootRecord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RecordRow::from(self).serialize(s)
    }
}

/// Roots of numerators and denominators over an enumerated range of fractions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SigmaSample {
    pub max_den: i64,
    pub records: Vec<RootRecord>,
    pub min_modulus: f64,
    pub max_modulus: f64,
}

impl SigmaSample {
    pub fn denominator_roots(&self) -> impl Iterator<Item = &RootRecord> {
        self.records.iter().filter(|r| r.part == Part::Denominator)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for rec in &self.records {
            w.serialize(RecordRow::from(rec))
                .map_err(|e| Error::Io(e.to_string()))?;
        }
        w.flush().map_err(|e| Error::Io(e.to_string()))?;
        Ok(())
    }
}

fn fraction_records(x: &Fraction, residual_tol: f64) -> Result<Vec<RootRecord>> {
    let qr = q_deform(*x)?;
    let mut out = Vec::new();
    for (part, poly) in [(Part::Numerator, qr.num()), (Part::Denominator, qr.den())] {
        let found = roots_with_residuals_tol(poly, residual_tol)
            .map_err(|e| e.with_context(format!("{part:?} of [{x}]_q")))?;
        out.extend(found.into_iter().map(|(root, residual)| RootRecord {
            frac: *x,
            part,
            root,
            residual,
        }));
    }
    Ok(out)
}

pub fn sigma_sample(max_den: i64) -> Result<SigmaSample> {
    sigma_sample_with(max_den, default_numerator_extra(max_den), Exec::default())
}

/// Roots of `num` and `den` of `[r/s]_q` for all `s <= max_den`,
/// `r <= s + numerator_extra`.
pub fn sigma_sample_with(max_den: i64, numerator_extra: i64, exec: Exec) -> Result<SigmaSample> {
    sigma_sample_tol(max_den, numerator_extra, exec, RESIDUAL_TOL)
}

pub fn sigma_sample_tol(
    max_den: i64,
    numerator_extra: i64,
    exec: Exec,
    residual_tol: f64,
) -> Result<SigmaSample> {
    if max_den < 2 {
        return Err(Error::InvalidArgument(format!(
            "max_den must be >= 2, got {max_den}"
        )));
    }
    let fracs = enumerate_fractions_capped(max_den, numerator_extra);
    let mut records: Vec<RootRecord> =
        par::try_map(exec, &fracs, |x| fraction_records(x, residual_tol))?
            .into_iter()
            .flatten()
            .collect();
    records.sort_by(RootRecord::sort_cmp);
    let min_modulus = records
        .iter()
        .map(|r| r.modulus())
        .fold(f64::INFINITY, f64::min);
    let max_modulus = records.iter().map(|r| r.modulus()).fold(0.0, f64::max);
    Ok(SigmaSample {
        max_den,
        records,
        min_modulus,
        max_modulus,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnnulusReport {
    pub total_roots: usize,
    /// Roots outside `(3-2√2, 3+2√2)` by more than the tolerance.
    pub proven_violations: Vec<RootRecord>,
    /// Roots outside `[(3-√5)/2, (3+√5)/2]` by more than the tolerance.
    pub conjecture_outliers: Vec<RootRecord>,
    pub min_modulus: f64,
    pub max_modulus: f64,
    pub max_residual: f64,
}

impl AnnulusReport {
    pub fn conjecture_consistent(&self) -> bool {
        self.conjecture_outliers.is_empty()
    }
}

pub fn annulus_check(sample: &SigmaSample) -> AnnulusReport {
    annulus_check_tol(sample, ANNULUS_TOL)
}

pub fn annulus_check_tol(sample: &SigmaSample, tol: f64) -> AnnulusReport {
    let outside = |lo: f64, hi: f64| {
        sample
            .records
            .iter()
            .filter(|r| r.modulus() <= lo - tol || r.modulus() >= hi + tol)
            .cloned()
            .collect::<Vec<_>>()
    };
    AnnulusReport {
        total_roots: sample.records.len(),
        proven_violations: outside(PROVEN_INNER, PROVEN_OUTER),
        conjecture_outliers: outside(CONJECTURED_INNER, CONJECTURED_OUTER),
        min_modulus: sample.min_modulus,
        max_modulus: sample.max_modulus,
        max_residual: sample
            .records
            .iter()
            .map(|r| r.residual)
            .fold(0.0, f64::max),
    }
}

/// Entry of a 2x2 matrix `[[R, V], [S, U]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Entry {
    R,
    V,
    S,
    U,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryRoot {
    pub entry: Entry,
    pub root: ComplexPoint,
    /// `| |root| - (3-√5)/2 |`
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RlPowerReport {
    pub m: u32,
    pub roots: Vec<EntryRoot>,
    pub min_distance: f64,
}

impl RlPowerReport {
    /// Columns `m,entry,root_re,root_im,modulus,distance`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        #[derive(Serialize)]
        struct Row {
            m: u32,
            entry: Entry,
            root_re: f64,
            root_im: f64,
            modulus: f64,
            distance: f64,
        }
        let csv_err = |e: csv::Error| Error::Io(e.to_string());
        let mut w = csv::Writer::from_writer(out);
        for e in &self.roots {
            w.serialize(Row {
                m: self.m,
                entry: e.entry,
                root_re: e.root.re,
                root_im: e.root.im,
                modulus: e.root.norm(),
                distance: e.distance,
            })
            .map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::Io(e.to_string()))?;
        Ok(())
    }
}

/// Roots of the four entries of `(R_q L_q)^m` and their distance to the
/// circle `|q| = (3-√5)/2`.
pub fn rl_power_roots(m: u32) -> Result<RlPowerReport> {
    if m < 1 {
        return Err(Error::InvalidArgument("m must be >= 1".into()));
    }
    let rl = QMatrix2::mod_word(&[ModLetter::R, ModLetter::L]);
    let mut acc = QMatrix2::identity(Convention::Q);
    for _ in 0..m {
        acc = acc.mat_mul(&rl)?;
    }
    let mut out = Vec::new();
    for (entry, poly) in [
        (Entry::R, &acc.a),
        (Entry::V, &acc.b),
        (Entry::S, &acc.c),
        (Entry::U, &acc.d),
    ] {
        for root in
            roots(poly).map_err(|e| e.with_context(format!("entry {entry:?} of (RL)^{m}")))?
        {
            out.push(EntryRoot {
                entry,
                root,
                distance: (root.norm() - CONJECTURED_INNER).abs(),
            });
        }
    }
    let min_distance = out.iter().map(|e| e.distance).fold(f64::INFINITY, f64::min);
    Ok(RlPowerReport {
        m,
        roots: out,
        min_distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(low: i64, c: &[i64]) -> LaurentPoly {
        LaurentPoly::new(low, c.iter().copied())
    }

    #[test]
    fn constants() {
        assert!((PROVEN_INNER - (3.0 - 2.0 * 2f64.sqrt())).abs() < 1e-15);
        assert!((PROVEN_OUTER - (3.0 + 2.0 * 2f64.sqrt())).abs() < 1e-14);
        assert!((CONJECTURED_INNER - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-15);
        assert!((CONJECTURED_OUTER - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-15);
        assert_eq!(format!("{PROVEN_INNER:.12}"), "0.171572875254");
        assert_eq!(format!("{PROVEN_OUTER:.12}"), "5.828427124746");
        assert_eq!(format!("{CONJECTURED_INNER:.12}"), "0.381966011250");
        assert_eq!(format!("{CONJECTURED_OUTER:.12}"), "2.618033988750");
    }

    #[test]
    fn small_root_sets() {
        let r = roots(&p(0, &[1, 1])).unwrap();
        assert_eq!(r, vec![Complex64::new(-1.0, 0.0)]);
        let r = roots(&p(0, &[1, 1, 1])).unwrap();
        let w = Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0);
        assert_eq!(r.len(), 2);
        assert!((r[0] - w.conj()).norm() < 1e-10 || (r[0] - w).norm() < 1e-10);
        assert!(r
            .iter()
            .all(|z| (z - w).norm() < 1e-10 || (z - w.conj()).norm() < 1e-10));
        assert!((r[0] - r[1].conj()).norm() < 1e-10);
        let r = roots(&p(1, &[1, 1])).unwrap();
        assert_eq!(r, vec![Complex64::new(-1.0, 0.0)]);
        assert!(roots(&p(3, &[5])).unwrap().is_empty());
        assert!(roots(&LaurentPoly::zero()).is_err());
    }

    #[test]
    fn repeated_roots() {
        // (1+q)^4 (1+q+q^2)^2
        let a = p(0, &[1, 1]).pow(4) * p(0, &[1, 1, 1]).pow(2);
        let r = roots(&a).unwrap();
        assert_eq!(r.len(), 8);
        assert_eq!(r.iter().filter(|z| (*z + 1.0).norm() < 1e-3).count(), 4);
    }

    #[test]
    fn sigma_small_cases() {
        let s = sigma_sample(2).unwrap();
        assert!(s
            .records
            .iter()
            .any(|r| r.frac == Fraction::new(1, 2).unwrap()
                && r.part == Part::Denominator
                && (r.root + 1.0).norm() < 1e-12));
        let s3 = sigma_sample(3).unwrap();
        let w = Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0);
        for target in [w, w.conj()] {
            assert!(s3
                .records
                .iter()
                .any(|r| r.frac == Fraction::new(1, 3).unwrap()
                    && r.part == Part::Denominator
                    && (r.root - target).norm() < 1e-10));
        }
        assert!(sigma_sample(1).is_err());
    }

    #[test]
    fn sigma_sample_is_sorted_and_deterministic() {
        let a = sigma_sample_with(6, 12, Exec::Sequential).unwrap();
        let b = sigma_sample_with(6, 12, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        assert!(a
            .records
            .windows(2)
            .all(|w| w[0].sort_cmp(&w[1]) != Ordering::Greater));
        let lo = a
            .records
            .iter()
            .map(|r| r.modulus())
            .fold(f64::INFINITY, f64::min);
        assert_eq!(lo, a.min_modulus);
    }

    #[test]
    fn annulus_on_small_sample() {
        let rep = annulus_check(&sigma_sample(8).unwrap());
        assert!(rep.proven_violations.is_empty());
        assert!(rep.conjecture_consistent());
        assert!(rep.max_residual <= RESIDUAL_TOL);
    }

    #[test]
    fn rl_powers() {
        let one = rl_power_roots(1).unwrap();
        // (R L) = [[q+1, q^-1], [1, q^-1]]
        assert!(one.roots.iter().all(|e| e.entry != Entry::S));
        assert!(one
            .roots
            .iter()
            .any(|e| e.entry == Entry::R && (e.root + 1.0).norm() < 1e-12));
        let two = rl_power_roots(2).unwrap();
        let s_roots: Vec<_> = two.roots.iter().filter(|e| e.entry == Entry::S).collect();
        assert_eq!(s_roots.len(), 2);
        assert!(s_roots.iter().all(|e| (e.root.norm() - 1.0).abs() < 1e-10));
        assert!(rl_power_roots(0).is_err());
    }

    #[test]
    fn csv_layout() {
        let s = sigma_sample(2).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "r,s,part,root_re,root_im,modulus,residual"
        );
        assert!(text.lines().any(|l| l.starts_with("1,2,den,-1.0,")));
    }
}
