//! The acceptance suite: thirteen numbered checks with time limits, shared by
//! the `acceptance` test target and the `selftest` subcommand.

use std::fmt;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::braidmat::{BraidLetter, BraidWord, Convention, ModLetter, QMatrix2};
use crate::cfrac::{default_numerator_extra, EvenCF, Fraction};
use crate::exactpoly::LaurentPoly;
use crate::faithful::{
    alexander, classify_specialization_with, triangular_decompose, Decomposition, SpecPoint,
    Verdict,
};
use crate::par::{self, Exec};
use crate::qrat::{
    act, burau_column_check, burau_column_check_at, mirror_negate, q_deform, reflect, Column,
};
use crate::rootloc::{
    annulus_check, rl_power_roots, roots, sigma_sample_with, CONJECTURED_INNER, RESIDUAL_TOL,
};
use crate::stabilize::{agreement_profile, radius_estimate, stabilized_series, PeriodicCF};

pub const DEFAULT_SEED: u64 = 0x5eed_b3b3;
pub const CRITERIA: u8 = 13;

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(rename = "elapsed_s", serialize_with = "secs")]
    pub elapsed: Duration,
    #[serde(rename = "limit_s", serialize_with = "secs")]
    pub limit: Duration,
}

fn secs<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} criterion {:>2} {} ({:.2} s / {} s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs(),
            self.detail
        )
    }
}

pub fn name(id: u8) -> &'static str {
    match id {
        1 => "worked q-rationals",
        2 => "structural identities",
        3 => "positivity and unimodality",
        4 => "reflection and mirror",
        5 => "palindromic traces",
        6 => "annulus",
        7 => "roots-of-unity poles",
        8 => "golden-ratio radius",
        9 => "circle approach",
        10 => "classifier table",
        11 => "triangular subgroup",
        12 => "Alexander polynomial",
        13 => "stabilization",
        _ => "unknown",
    }
}

pub fn limit(id: u8) -> Duration {
    Duration::from_secs(match id {
        1 | 2 => 1,
        7 => 5,
        3 | 4 | 8 | 9 | 13 => 30,
        5 | 10 | 11 | 12 => 60,
        6 => 300,
        _ => 0,
    })
}

/// Runs one criterion; a check that overruns its limit fails.
pub fn run_check(id: u8, exec: Exec) -> CheckOutcome {
    let start = Instant::now();
    let result = match id {
        1 => worked_q_rationals(),
        2 => structural_identities(),
        3 => positivity_unimodality(exec),
        4 => reflection_mirror(exec),
        5 => palindromic_traces(exec),
        6 => annulus(exec),
        7 => roots_of_unity(),
        8 => golden_radius(),
        9 => circle_approach(),
        10 => classifier_table(exec),
        11 => triangular(exec),
        12 => alexander_checks(exec),
        13 => stabilization(),
        _ => Err(format!("no criterion {id}")),
    };
    let elapsed = start.elapsed();
    let limit = limit(id);
    let (mut passed, mut detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if passed && elapsed > limit {
        passed = false;
        detail = format!("over time limit; {detail}");
    }
    CheckOutcome {
        id,
        name: name(id),
        passed,
        detail,
        elapsed,
        limit,
    }
}

pub fn run_all(exec: Exec) -> Vec<CheckOutcome> {
    (1..=CRITERIA).map(|id| run_check(id, exec)).collect()
}

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn frac(r: i64, s: i64) -> Fraction {
    Fraction::new(r, s).expect("nonzero denominator")
}

/// Independent per-index generator, so sweeps do not depend on scheduling.
pub fn indexed_rng(stream: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    rng.set_stream(stream);
    rng.set_word_pos(index as u128 * 1024);
    rng
}

pub fn random_word<R: Rng>(rng: &mut R, max_len: usize) -> BraidWord {
    let len = rng.random_range(0..=max_len);
    BraidWord::new(
        (0..len)
            .map(|_| BraidLetter::ALL[rng.random_range(0..4)])
            .collect(),
    )
}

fn worked_q_rationals() -> Check {
    for (r, s, want) in [
        (2, 1, "1+q"),
        (1, 2, "q/(1+q)"),
        (2, 3, "(q+q^2)/(1+q+q^2)"),
        (5, 3, "(1+q+2q^2+q^3)/(1+q+q^2)"),
        (3, 2, "(1+q+q^2)/(1+q)"),
    ] {
        let x = q_deform(frac(r, s)).map_err(|e| e.to_string())?;
        let got = crate::qrat::render_quotient(x.num(), x.den(), 'q');
        ensure(got == want, || {
            format!("[{r}/{s}]_q = {got}, expected {want}")
        })?;
    }
    let w: BraidWord = "aBaB".parse().map_err(|e: crate::Error| e.to_string())?;
    ensure(burau_column_check(&w, frac(5, 3)), || {
        "first column of aBaB is not [5/3]_q".into()
    })?;
    ensure(
        burau_column_check_at(&w, Column::Second, frac(3, 2)),
        || "second column of aBaB is not [3/2]_q".into(),
    )?;
    Ok("5 renderings exact; aBaB columns give [5/3]_q and [3/2]_q".into())
}

fn structural_identities() -> Check {
    let rho = |s: &str| QMatrix2::rho3(&s.parse().expect("valid word"));
    ensure(rho("aba") == rho("bab"), || "braid relation fails".into())?;
    let t3 = QMatrix2::scalar(LaurentPoly::monomial(1, 3), Convention::T);
    ensure(rho("ababab") == t3, || "(ab)^3 is not t^3 Id".into())?;
    for (terms, want) in [
        (vec![1, 1], [[2, 1], [1, 1]]),
        (vec![0, 2], [[1, 0], [2, 1]]),
        (vec![0, 1, 1, 1], [[2, 1], [3, 2]]),
    ] {
        let got = EvenCF::new(terms.clone())
            .and_then(|cf| cf.classical_matrix())
            .map_err(|e| e.to_string())?;
        ensure(got == want, || {
            format!("M+{terms:?} = {got:?}, expected {want:?}")
        })?;
    }
    Ok("braid relation, center, 3 classical matrices".into())
}

fn positivity_unimodality(exec: Exec) -> Check {
    let pairs: Vec<(i64, i64)> = (1..=60)
        .flat_map(|s| (s..=60).map(move |r| (r, s)))
        .filter(|&(r, s)| num_integer::gcd(r, s) == 1)
        .collect();
    let bad = par::find_map_first(exec, &pairs, |&(r, s)| {
        let x = match q_deform(frac(r, s)) {
            Ok(x) => x,
            Err(e) => return Some(format!("{r}/{s}: {e}")),
        };
        for (part, p) in [("num", x.num()), ("den", x.den())] {
            if !p.is_positive() || !p.is_unimodal() {
                return Some(format!("{part} of [{r}/{s}]_q = {} fails", p.compact('q')));
            }
        }
        None
    });
    match bad {
        Some(msg) => Err(msg),
        None => Ok(format!(
            "{} fractions r/s >= 1 with r, s <= 60",
            pairs.len()
        )),
    }
}

fn reflection_mirror(exec: Exec) -> Check {
    let pairs: Vec<(i64, i64)> = (1..=40)
        .flat_map(|s| (1..=40).map(move |r| (r, s)))
        .filter(|&(r, s)| num_integer::gcd(r, s) == 1)
        .collect();
    let bad = par::find_map_first(exec, &pairs, |&(r, s)| {
        let check = || -> Result<Option<String>, crate::Error> {
            let x = q_deform(frac(r, s))?;
            if reflect(&x)? != q_deform(frac(s, r))? {
                return Ok(Some(format!("reflection fails at {r}/{s}")));
            }
            // [-r/s]_q through the translation [y - n]_q = R_q^-n [y]_q, y > 0.
            let n = r / s + 1;
            let y = q_deform(frac(n * s - r, s))?;
            let shifted = act(
                &QMatrix2::mod_word(&vec![ModLetter::RInv; n as usize]),
                y.num(),
                y.den(),
            );
            if mirror_negate(&x) != shifted {
                return Ok(Some(format!("mirror fails at {r}/{s}")));
            }
            Ok(None)
        };
        check().unwrap_or_else(|e| Some(format!("{r}/{s}: {e}")))
    });
    match bad {
        Some(msg) => Err(msg),
        None => Ok(format!("{} fractions with r, s <= 40", pairs.len())),
    }
}

fn palindromic_traces(exec: Exec) -> Check {
    let w: BraidWord = "aBaB".parse().map_err(|e: crate::Error| e.to_string())?;
    let tr = QMatrix2::rho3(&w)
        .to_q_convention()
        .map_err(|e| e.to_string())?
        .trace();
    let coeffs: Vec<i64> = tr
        .coeffs()
        .iter()
        .map(|c| i64::try_from(c).unwrap_or(0))
        .collect();
    ensure(coeffs == [1, 2, 1, 2, 1], || {
        format!("aBaB trace is {}", tr.compact('q'))
    })?;
    const N: usize = 10_000;
    let bad = par::map_range(exec, N, |i| {
        let w = random_word(&mut indexed_rng(5, i), 20);
        let tr = QMatrix2::rho3(&w)
            .to_q_convention()
            .expect("t convention")
            .trace();
        (!tr.is_palindromic()).then(|| format!("{w}: {}", tr.compact('q')))
    })
    .into_iter()
    .flatten()
    .next();
    match bad {
        Some(msg) => Err(format!("non-palindromic trace for {msg}")),
        None => Ok(format!(
            "aBaB trace (1,2,1,2,1); {N} random words palindromic"
        )),
    }
}

fn annulus(exec: Exec) -> Check {
    let sample =
        sigma_sample_with(30, default_numerator_extra(30), exec).map_err(|e| e.to_string())?;
    let rep = annulus_check(&sample);
    ensure(rep.proven_violations.is_empty(), || {
        format!(
            "{} roots outside the proven annulus",
            rep.proven_violations.len()
        )
    })?;
    ensure(rep.max_residual <= RESIDUAL_TOL, || {
        format!("residual {:e}", rep.max_residual)
    })?;
    ensure(rep.min_modulus >= CONJECTURED_INNER - 1e-6, || {
        format!("min modulus {:.9} below (3-sqrt5)/2", rep.min_modulus)
    })?;
    Ok(format!(
        "{} roots, modulus in [{:.9}, {:.9}], max residual {:.1e}; conjecture-consistent: {}",
        rep.total_roots,
        rep.min_modulus,
        rep.max_modulus,
        rep.max_residual,
        rep.conjecture_consistent()
    ))
}

fn roots_of_unity() -> Check {
    let mut worst: f64 = 0.0;
    for n in 2..=12i64 {
        let x = q_deform(frac(1, n)).map_err(|e| e.to_string())?;
        let found = roots(x.den()).map_err(|e| e.to_string())?;
        let mut expected: Vec<Complex64> = (1..n)
            .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64))
            .collect();
        ensure(found.len() == expected.len(), || {
            format!("n={n}: {} roots", found.len())
        })?;
        for z in &found {
            let (i, d) = expected
                .iter()
                .enumerate()
                .map(|(i, e)| (i, (z - e).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("nonempty");
            ensure(d <= 1e-8, || {
                format!("n={n}: root {z} is {d:e} from any root of unity")
            })?;
            worst = worst.max(d);
            expected.swap_remove(i);
        }
    }
    Ok(format!("n = 2..12, worst distance {worst:.1e}"))
}

fn golden_radius() -> Check {
    let est = radius_estimate(&PeriodicCF::golden(), 18).map_err(|e| e.to_string())?;
    let rel = (est - CONJECTURED_INNER).abs() / CONJECTURED_INNER;
    let detail = format!("estimate {est:.10}, relative error {:.2}%", rel * 100.0);
    ensure(rel <= 0.01, || detail.clone())?;
    Ok(detail)
}

fn circle_approach() -> Check {
    let d5 = rl_power_roots(5).map_err(|e| e.to_string())?.min_distance;
    let d15 = rl_power_roots(15).map_err(|e| e.to_string())?.min_distance;
    let detail = format!("min distance {d5:.6} at m=5, {d15:.6} at m=15");
    ensure(d15 < d5 && d15 < 0.02, || detail.clone())?;
    Ok(detail)
}

fn classifier_table(exec: Exec) -> Check {
    let table: [(&str, Verdict); 7] = [
        ("-1", Verdict::UnfaithfulCenter),
        (
            "1",
            Verdict::UnfaithfulPoleWitness {
                witness: frac(1, 2),
                root: Complex64::new(-1.0, 0.0),
            },
        ),
        ("-2", Verdict::FaithfulNegativeReal),
        ("10", Verdict::FaithfulOutsideAnnulus),
        ("0.05", Verdict::FaithfulOutsideAnnulus),
        (
            "zeta(5,1)",
            Verdict::UnfaithfulRootOfUnityPole {
                witness: frac(1, 10),
            },
        ),
        ("0.5", Verdict::NoWitnessUpTo { max_den: 40 }),
    ];
    for (text, want) in table {
        let t0: SpecPoint = text.parse().map_err(|e: crate::Error| e.to_string())?;
        let got = classify_specialization_with(&t0, 40, exec).map_err(|e| e.to_string())?;
        let ok = match (&got, &want) {
            (
                Verdict::UnfaithfulPoleWitness {
                    witness: a,
                    root: ra,
                },
                Verdict::UnfaithfulPoleWitness {
                    witness: b,
                    root: rb,
                },
            ) => a == b && (ra - rb).norm() < 1e-8,
            _ => got == want,
        };
        ensure(ok, || format!("t0 = {text}: got {}", got.name()))?;
    }
    Ok("7 verdicts match at max_den = 40".into())
}

fn triangular(exec: Exec) -> Check {
    const N: usize = 1000;
    let z = BraidWord::center();
    let members = par::map_range(exec, N, |i| {
        let mut rng = indexed_rng(11, i);
        let (mut k, mut m) = (0i64, 0i64);
        let mut w = BraidWord::empty();
        for _ in 0..rng.random_range(0..=20) {
            match rng.random_range(0..4) {
                0 => {
                    k += 1;
                    w.push(BraidLetter::S1);
                }
                1 => {
                    k -= 1;
                    w.push(BraidLetter::S1Inv);
                }
                2 => {
                    m += 1;
                    w = w.concat(&z);
                }
                _ => {
                    m -= 1;
                    w = w.concat(&z.inverse());
                }
            }
        }
        match triangular_decompose(&w) {
            Ok(Decomposition::Member { k: gk, m: gm }) if (gk, gm) == (k, m) => None,
            other => Some(format!("{w}: expected ({k}, {m}), got {other:?}")),
        }
    });
    if let Some(msg) = members.into_iter().flatten().next() {
        return Err(msg);
    }
    let generic = par::map_range(exec, N, |i| {
        let mut rng = indexed_rng(12, i);
        let w = loop {
            let w = random_word(&mut rng, 20);
            if !QMatrix2::rho3(&w).c.is_zero() {
                break w;
            }
        };
        match triangular_decompose(&w) {
            Ok(Decomposition::NotMember) => None,
            other => Some(format!("{w}: expected NotMember, got {other:?}")),
        }
    });
    if let Some(msg) = generic.into_iter().flatten().next() {
        return Err(msg);
    }
    Ok(format!(
        "{N} members decomposed, {N} generic words rejected"
    ))
}

fn alexander_checks(exec: Exec) -> Check {
    let trefoil = alexander(&"abab".parse().expect("valid word")).map_err(|e| e.to_string())?;
    ensure(trefoil == LaurentPoly::new(0, [1, -1, 1]), || {
        format!("alexander(abab) = {}", trefoil.compact('t'))
    })?;
    const N: usize = 1000;
    let bad = par::map_range(exec, N, |i| {
        let mut rng = indexed_rng(13, i);
        let u = random_word(&mut rng, 10);
        let w = random_word(&mut rng, 10);
        let conj = u.concat(&w).concat(&u.inverse());
        match (alexander(&w), alexander(&conj)) {
            (Ok(a), Ok(b)) if a == b => None,
            (a, b) => Some(format!("u = {u}, w = {w}: {a:?} vs {b:?}")),
        }
    });
    if let Some(msg) = bad.into_iter().flatten().next() {
        return Err(msg);
    }
    Ok(format!("abab gives 1-t+t^2; {N} conjugate pairs agree"))
}

fn stabilization() -> Check {
    let phi = PeriodicCF::golden();
    let profile = agreement_profile(&phi, 20).map_err(|e| e.to_string())?;
    // `None` means identical convergents, i.e. agreement to every order.
    let orders: Vec<usize> = profile
        .iter()
        .map(|(_, k)| k.unwrap_or(usize::MAX))
        .collect();
    ensure(orders.windows(2).all(|p| p[0] <= p[1]), || {
        format!("agreement orders {orders:?}")
    })?;
    let st = stabilized_series(&phi, 10).map_err(|e| e.to_string())?;
    ensure(st.stable_at_m <= 25, || {
        format!("stable_at_m = {}", st.stable_at_m)
    })?;
    Ok(format!(
        "agreement orders {:?}; order-10 series stable at m = {}",
        orders, st.stable_at_m
    ))
}
