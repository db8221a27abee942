//! Property checks shared by the property suite and the acceptance run.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestError, TestRunner};
use whstab::arith::rational::rat;
use whstab::arith::{abs_upper, exp_upper, sqrt_upper, GaussianRational, Rational};
use whstab::engine::kernel::stable_kernel_dimension;
use whstab::engine::{expected_dimension, right_factorise, verify_factorisation};
use whstab::harness::{ex61_streams, ex62_streams, ex63_streams};
use whstab::normalise::{ambiguity_twist, p_normalise, NormaliseMode};
use whstab::tail::{delta_n, truncate, truncation_distance, AnnulusModel, BoundContext};

use super::{random_monomial_det, twist_for, with_indices};

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() })
}

fn report<T: std::fmt::Debug>(r: Result<(), TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

/// Exact refactorisation and the kernel-dimension law on one random corpus.
pub fn monomial_corpus(cases: u32) -> Result<(), String> {
    report(runner(cases).run(&random_monomial_det(), |m| {
        let a = m.build();
        let (lo, hi) = a.support().unwrap();
        prop_assert!(lo >= -6 && hi <= 6);
        let r = right_factorise(&a).unwrap();
        let v = verify_factorisation(&a, &r);
        prop_assert!(v.all_pass(), "{}", v.summary());
        prop_assert_eq!(r.reassemble(), a.clone());
        for k in (r.indices.0 - 2)..=(r.indices.1 + 1) {
            prop_assert_eq!(stable_kernel_dimension(&a, k), expected_dimension(r.indices, k), "level {}", k);
        }
        Ok(())
    }))
}

/// The normal form is unchanged by admissible twists of the factors.
pub fn twists(indices: (i64, i64), cases: u32) -> Result<(), String> {
    let a = with_indices(indices);
    let raw = right_factorise(&a).map_err(|e| e.to_string())?;
    if raw.indices != indices {
        return Err(format!("expected indices {indices:?}, got {:?}", raw.indices));
    }
    let base = p_normalise(&raw, NormaliseMode::Auto).map_err(|e| e.to_string())?;
    report(runner(cases).run(&twist_for(indices), |h| {
        let twisted = ambiguity_twist(&base, &h).unwrap();
        prop_assert_eq!(twisted.reassemble(), a.clone());
        prop_assert_eq!(p_normalise(&twisted, NormaliseMode::Auto).unwrap(), base.clone());
        Ok(())
    }))
}

fn model_strategy() -> impl Strategy<Value = (AnnulusModel, BoundContext)> {
    let ex61 = (1i64..10, 11i64..60, 0i64..1000, 0i64..1000).prop_map(|(k1, k2, a, b)| {
        let (k1, k2) = (rat(k1, 10), rat(k2, 10));
        let z1 = &k1 + (Rational::one() - &k1) * rat(a, 1000);
        let z2 = Rational::one() + (&k2 - Rational::one()) * rat(b + 1, 1001);
        (ex61_streams(k1, k2).unwrap().model, BoundContext::new(z1, z2))
    });
    let ex62 = (1i64..10, 1i64..4, 1i64..999, 1i64..5).prop_map(|(k1, k2, a, z2)| {
        let k1 = rat(k1, 10);
        let z1 = &k1 + (Rational::one() - &k1) * rat(a, 1000);
        (ex62_streams(k1, rat(k2, 2).into(), 1).unwrap().model, BoundContext::new(z1, rat(z2 + 1, 1)))
    });
    let ex63 = (1i64..5, 1i64..5, 1i64..10, 2i64..12).prop_map(|(k1, k2, z1, z2)| {
        (ex63_streams(rat(k1, 2).into(), rat(k2, 2).into(), -1).unwrap().model, BoundContext::new(rat(z1, 10), rat(z2, 1)))
    });
    prop_oneof![ex61, ex62, ex63]
}

/// `delta_N` never increases with `N`, and bounds the distance to a far truncation.
pub fn delta_monotone(cases: u32) -> Result<(), String> {
    report(runner(cases).run(&model_strategy(), |(model, ctx)| {
        let mut prev = delta_n(&model, 1, &ctx).unwrap();
        for n in 2..=12 {
            let d = delta_n(&model, n, &ctx).unwrap();
            prop_assert!(d.value <= prev.value, "N={} {:?} > {:?}", n, d, prev);
            if n <= 6 {
                let dist = truncation_distance(&truncate(&model, n + 12).unwrap(), &truncate(&model, n).unwrap());
                prop_assert!(dist.value <= d.value);
            }
            prev = d;
        }
        Ok(())
    }))
}

/// Fixed-point reference arithmetic with 60 decimal digits, independent of the
/// library's bound code.
mod reference {
    use num_bigint::BigInt;
    use num_traits::{Signed, Zero};
    use whstab::arith::Rational;

    pub fn scale() -> BigInt {
        BigInt::from(10).pow(60)
    }

    pub fn sqrt(r: &Rational) -> BigInt {
        (r.numer() * scale() * scale() / r.denom()).sqrt()
    }

    /// `e^x` for `|x| <= 32`.
    pub fn exp(x: &Rational) -> BigInt {
        let s = scale();
        let xf = x.abs().numer() * &s / x.denom();
        let mut term = s.clone();
        let mut sum = s.clone();
        let mut n = 1u32;
        while !term.is_zero() {
            term = &term * &xf / &s / BigInt::from(n);
            sum += &term;
            n += 1;
        }
        if x.is_negative() {
            &s * &s / sum
        } else {
            sum
        }
    }
}

fn one_sided(value: &Rational, tolerance: &Rational, reference: &BigInt) -> Result<(), TestCaseError> {
    // the reference is good to a few units in 10^-60; allow 10^-50
    let slack = Rational::new(BigInt::one(), BigInt::from(10).pow(50));
    let r = Rational::new(reference.clone(), reference::scale());
    prop_assert!(value >= &(&r - &slack), "{} below reference {}", value, r);
    prop_assert!(value - &r <= tolerance + &slack, "{} too far above {}", value, r);
    Ok(())
}

fn tolerance_strategy() -> impl Strategy<Value = Rational> {
    (1u32..40).prop_map(|k| Rational::new(BigInt::one(), BigInt::from(10).pow(k)))
}

pub fn sqrt_one_sided(cases: u32) -> Result<(), String> {
    report(runner(cases).run(&(0i64..1_000_000, 1i64..10_000, tolerance_strategy()), |(num, den, tol)| {
        let q = rat(num, den);
        let b = sqrt_upper(&q, &tol).unwrap();
        prop_assert!(b.tolerance <= tol);
        one_sided(&b.value, &b.tolerance, &reference::sqrt(&q))
    }))
}

pub fn exp_one_sided(cases: u32) -> Result<(), String> {
    report(runner(cases).run(&(-32_000i64..=32_000, tolerance_strategy()), |(num, tol)| {
        let x = rat(num, 1000);
        let b = exp_upper(&x, &tol).unwrap();
        one_sided(&b.value, &b.tolerance, &reference::exp(&x))
    }))
}

pub fn abs_one_sided(cases: u32) -> Result<(), String> {
    report(runner(cases).run(&(-10_000i64..10_000, -10_000i64..10_000, 1i64..1000, tolerance_strategy()), |(re, im, den, tol)| {
        let z = GaussianRational::new(rat(re, den), rat(im, den));
        let b = abs_upper(&z, &tol).unwrap();
        if z.re.is_zero() || z.im.is_zero() {
            prop_assert!(b.tolerance.is_zero());
        }
        one_sided(&b.value, &b.tolerance, &reference::sqrt(&z.abs_squared()))
    }))
}
