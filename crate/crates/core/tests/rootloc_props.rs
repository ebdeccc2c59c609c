use num_complex::Complex64;
use proptest::prelude::*;
use qburau::qrat::q_deform;
use qburau::rootloc::{annulus_check, roots, sigma_sample_with, PROVEN_INNER, PROVEN_OUTER};
use qburau::{Exec, Fraction, LaurentPoly};

fn integer_poly() -> impl Strategy<Value = Vec<i64>> {
    (
        prop::collection::vec(-9i64..10, 1..8),
        1i64..10,
        1i64..10,
        any::<bool>(),
        any::<bool>(),
    )
        .prop_map(|(mid, c0, cn, s0, sn)| {
            let mut v = vec![if s0 { -c0 } else { c0 }];
            v.extend(mid);
            v.push(if sn { -cn } else { cn });
            v
        })
}

fn expand(lead: f64, rs: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(lead, 0.0)];
    for r in rs {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (i, a) in c.iter().enumerate() {
            next[i + 1] += a;
            next[i] -= a * r;
        }
        c = next;
    }
    c
}

fn nearest(rs: &[Complex64], z: Complex64) -> f64 {
    rs.iter()
        .map(|r| (r - z).norm())
        .fold(f64::INFINITY, f64::min)
}

proptest! {
    #[test]
    fn roots_reconstruct_the_polynomial(c in integer_poly()) {
        let p = LaurentPoly::new(0, c.clone());
        let rs = match roots(&p) {
            Ok(rs) => rs,
            // Clusters of repeated roots may legitimately miss the residual bound.
            Err(qburau::Error::NoConvergence { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert_eq!(rs.len(), c.len() - 1);
        let lead = *c.last().unwrap() as f64;
        let back = expand(lead, &rs);
        let scale = c.iter().map(|x| x.abs() as f64).fold(1.0, f64::max);
        for (got, want) in back.iter().zip(&c) {
            prop_assert!((got - *want as f64).norm() <= 1e-6 * scale, "{:?} vs {:?}", back, c);
        }
    }

    #[test]
    fn real_polynomials_have_conjugate_roots(c in integer_poly()) {
        let Ok(rs) = roots(&LaurentPoly::new(0, c)) else { return Ok(()) };
        for z in &rs {
            prop_assert!(nearest(&rs, z.conj()) <= 1e-6 * z.norm().max(1.0));
        }
    }

    #[test]
    fn reflection_inverts_roots(r in 1i64..60, s in 1i64..60) {
        let Ok(x) = Fraction::new(r, s) else { return Ok(()) };
        let num_roots = roots(q_deform(x).unwrap().num()).unwrap();
        let den_roots = roots(q_deform(x.reciprocal().unwrap()).unwrap().den()).unwrap();
        // The numerator may carry a factor q^k, which contributes no roots.
        prop_assert_eq!(num_roots.len(), den_roots.len());
        for z in &num_roots {
            prop_assert!(nearest(&den_roots, z.inv()) <= 1e-7);
        }
    }

    #[test]
    fn q_rational_roots_lie_in_the_proven_annulus(r in 1i64..120, s in 1i64..60) {
        let Ok(x) = Fraction::new(r, s) else { return Ok(()) };
        let qr = q_deform(x).unwrap();
        for p in [qr.num(), qr.den()] {
            for z in roots(p).unwrap() {
                prop_assert!(z.norm() > PROVEN_INNER && z.norm() < PROVEN_OUTER);
            }
        }
    }
}

#[test]
fn sequential_and_parallel_samples_agree() {
    let a = sigma_sample_with(12, 24, Exec::Sequential).unwrap();
    let b = sigma_sample_with(12, 24, Exec::Parallel).unwrap();
    assert_eq!(a, b);
    let mut ca = Vec::new();
    let mut cb = Vec::new();
    a.write_csv(&mut ca).unwrap();
    b.write_csv(&mut cb).unwrap();
    assert_eq!(ca, cb);
    assert!(annulus_check(&a).proven_violations.is_empty());
}
