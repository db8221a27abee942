//! Random and fixed matrices with known partial indices.
#![allow(dead_code)]

pub mod props;

use num_traits::Zero;
use proptest::prelude::*;
use whstab::arith::GaussianRational;
use whstab::laurent::{LaurentMatrix2, LaurentScalar};

pub fn g(re: i64, im: i64) -> GaussianRational {
    GaussianRational::from_ints(re, im)
}

fn lower(l: LaurentScalar) -> LaurentMatrix2 {
    LaurentMatrix2::new(LaurentScalar::one(), LaurentScalar::zero(), l, LaurentScalar::one())
}

fn upper(u: LaurentScalar) -> LaurentMatrix2 {
    LaurentMatrix2::new(LaurentScalar::one(), u, LaurentScalar::zero(), LaurentScalar::one())
}

/// `L1 diag(c1 t^k1, c2 t^k2) U L2`, optionally with rows exchanged; the
/// determinant is always a monomial.
#[derive(Clone, Debug)]
pub struct SmallMatrix {
    pub c: (GaussianRational, GaussianRational),
    pub k: (i64, i64),
    pub l1: LaurentScalar,
    pub u: LaurentScalar,
    pub l2: LaurentScalar,
    pub swap: bool,
}

impl SmallMatrix {
    pub fn build(&self) -> LaurentMatrix2 {
        let d = LaurentMatrix2::diag(LaurentScalar::monomial(self.c.0.clone(), self.k.0), LaurentScalar::monomial(self.c.1.clone(), self.k.1));
        let m = &(&(&lower(self.l1.clone()) * &d) * &upper(self.u.clone())) * &lower(self.l2.clone());
        if self.swap {
            m.swap_rows()
        } else {
            m
        }
    }

    /// Indices (-1, 2) behind a minus factor in `1/t` and a plus factor in `t`.
    pub fn example() -> Self {
        Self {
            c: (g(1, 0), g(1, 0)),
            k: (-1, 2),
            l1: LaurentScalar::monomial(g(1, 0), -1),
            u: LaurentScalar::from_coeffs(0, vec![g(1, 0), g(1, 0)]),
            l2: LaurentScalar::zero(),
            swap: false,
        }
    }
}

fn nonzero_gaussian() -> impl Strategy<Value = GaussianRational> {
    (-3i64..=3, -3i64..=3).prop_filter("nonzero", |&(a, b)| a != 0 || b != 0).prop_map(|(a, b)| g(a, b))
}

fn small_scalar(lo: i64, hi: i64) -> impl Strategy<Value = LaurentScalar> {
    (lo..=hi, prop::collection::vec((-3i64..=3, -2i64..=2), 0..=2))
        .prop_map(|(pmin, cs)| LaurentScalar::from_coeffs(pmin, cs.into_iter().map(|(a, b)| g(a, b)).collect()))
}

pub fn random_monomial_det() -> impl Strategy<Value = SmallMatrix> {
    (
        (nonzero_gaussian(), nonzero_gaussian()),
        (-3i64..=3, -3i64..=3),
        small_scalar(-2, 1),
        small_scalar(-1, 1),
        small_scalar(-1, 0),
        any::<bool>(),
    )
        .prop_map(|(c, k, l1, u, l2, swap)| SmallMatrix { c, k, l1, u, l2, swap })
        .prop_filter("support within [-6, 6]", |m| m.build().support().is_some_and(|(lo, hi)| lo >= -6 && hi <= 6))
}

/// A fixed matrix with the given partial indices and nontrivial factors.
pub fn with_indices(indices: (i64, i64)) -> LaurentMatrix2 {
    let am = &lower(LaurentScalar::from_coeffs(-1, vec![g(0, 2), g(1, 0)])) * &upper(LaurentScalar::monomial(g(3, 0), -1));
    let ap = &upper(LaurentScalar::from_coeffs(0, vec![g(3, 0), g(0, 1)])) * &lower(LaurentScalar::monomial(g(-1, 0), 1));
    &(&am * &LaurentMatrix2::diag_powers(indices.0, indices.1)) * &ap
}

/// Admissible ambiguity matrices for the index pattern.
pub fn twist_for(indices: (i64, i64)) -> BoxedStrategy<LaurentMatrix2> {
    if indices.0 == indices.1 {
        (nonzero_gaussian(), -3i64..=3, -3i64..=3, nonzero_gaussian())
            .prop_map(|(a, b, c, d)| LaurentMatrix2::new(
                LaurentScalar::constant(a),
                LaurentScalar::constant(g(b, 0)),
                LaurentScalar::constant(g(0, c)),
                LaurentScalar::constant(d),
            ))
            .prop_filter("invertible", |h| !h.coefficient(0).det().is_zero())
            .boxed()
    } else {
        (nonzero_gaussian(), -3i64..=3, -3i64..=3, nonzero_gaussian())
            .prop_map(|(a, x, y, d)| LaurentMatrix2::new(
                LaurentScalar::constant(a),
                LaurentScalar::from_coeffs(-1, vec![g(y, 0), g(x, 1)]),
                LaurentScalar::zero(),
                LaurentScalar::constant(d),
            ))
            .boxed()
    }
}
