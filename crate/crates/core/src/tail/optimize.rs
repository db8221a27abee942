//! Choice of the circles `zeta1`, `zeta2` that make `delta_N` small.
//!
//! The search is derivative-free and runs on floating-point values of the bound;
//! only the selected rational point is evaluated with certified arithmetic, so
//! the search itself never affects rigour.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::delta::{delta_n_with_tolerance, delta_n_f64, AnnulusModel, BoundContext};
use super::stream::{CoefficientStream, Majorant, Radius};
use crate::arith::rational::to_f64;
use crate::arith::{default_tolerance, Rational, UpperBound};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub coarse: usize,
    pub refine: usize,
    pub rounds: usize,
    /// Upper limit for `zeta2` when the plus stream is entire.
    pub cap: Rational,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { coarse: 32, refine: 9, rounds: 2, cap: Rational::from_integer(16.into()) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZetaChoice {
    pub zeta1: Rational,
    pub zeta2: Rational,
    pub delta: UpperBound,
}

fn inner_limit(s: &CoefficientStream, eps: &Rational) -> Rational {
    match (&s.radius, &s.majorant) {
        (_, Majorant::ExactSums) | (Radius::Infinite, _) => eps.clone(),
        (Radius::Finite(r), _) if s.closed && r.is_positive() => r.clone(),
        (Radius::Finite(r), _) => r + eps,
    }
}

fn outer_limit(s: &CoefficientStream, eps: &Rational, cap: &Rational) -> Option<Rational> {
    match (&s.radius, &s.majorant) {
        (_, Majorant::ExactSums) | (Radius::Infinite, _) => None,
        (Radius::Finite(r), _) => {
            let hi = if s.closed { r.clone() } else { r - eps };
            Some(if &hi > cap { cap.clone() } else { hi })
        }
    }
}

fn linspace(lo: &Rational, hi: &Rational, count: usize) -> Vec<Rational> {
    if count <= 1 || lo == hi {
        return vec![lo.clone()];
    }
    let steps = Rational::from_integer(BigInt::from(count - 1));
    let h = (hi - lo) / steps;
    (0..count).map(|j| lo + &h * Rational::from_integer(BigInt::from(j))).collect()
}

/// Range for the next refinement round: one previous step either side of `c`.
fn around(c: &Rational, step: &Rational, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
    let a = c - step;
    let b = c + step;
    (if &a < lo { lo.clone() } else { a }, if &b > hi { hi.clone() } else { b })
}

fn best<T>(cands: impl Iterator<Item = (T, Option<f64>)>) -> Option<(T, f64)> {
    let mut out: Option<(T, f64)> = None;
    for (p, v) in cands {
        if let Some(v) = v {
            if out.as_ref().is_none_or(|(_, b)| v < *b) {
                out = Some((p, v));
            }
        }
    }
    out
}

struct Search<'a> {
    model: &'a AnnulusModel,
    n: u64,
    grid: &'a GridSpec,
}

impl Search<'_> {
    fn eval(&self, z1: &Rational, z2: &Rational) -> Option<f64> {
        delta_n_f64(self.model, self.n, to_f64(z1), to_f64(z2))
    }

    /// Coarse grid and refinement over `zeta1` with `zeta2` fixed.
    fn line(&self, lo: &Rational, hi: &Rational, z2: &Rational) -> Option<(Rational, f64)> {
        let mut pts = linspace(lo, hi, self.grid.coarse);
        let mut step = if pts.len() > 1 { &pts[1] - &pts[0] } else { Rational::zero() };
        let mut inc = best(pts.drain(..).map(|z1| {
            let v = self.eval(&z1, z2);
            (z1, v)
        }))?;
        for _ in 0..self.grid.rounds {
            if step.is_zero() {
                break;
            }
            let (a, b) = around(&inc.0, &step, lo, hi);
            let pts = linspace(&a, &b, self.grid.refine);
            step = if pts.len() > 1 { &pts[1] - &pts[0] } else { Rational::zero() };
            if let Some(c) = best(pts.into_iter().map(|z1| {
                let v = self.eval(&z1, z2);
                (z1, v)
            })) {
                if c.1 < inc.1 {
                    inc = c;
                }
            }
        }
        Some(inc)
    }

    /// Joint grid over a bounded rectangle.
    fn rectangle(&self, r1: (&Rational, &Rational), r2: (&Rational, &Rational)) -> Option<((Rational, Rational), f64)> {
        let g1 = linspace(r1.0, r1.1, self.grid.coarse);
        let g2 = linspace(r2.0, r2.1, self.grid.coarse);
        let step = |g: &[Rational]| if g.len() > 1 { &g[1] - &g[0] } else { Rational::zero() };
        let (mut s1, mut s2) = (step(&g1), step(&g2));
        let pairs = |g1: &[Rational], g2: &[Rational]| {
            let mut v = Vec::with_capacity(g1.len() * g2.len());
            for a in g1 {
                for b in g2 {
                    v.push((a.clone(), b.clone()));
                }
            }
            v
        };
        let mut inc = best(pairs(&g1, &g2).into_iter().map(|p| {
            let v = self.eval(&p.0, &p.1);
            (p, v)
        }))?;
        for _ in 0..self.grid.rounds {
            let (a1, b1) = around(&inc.0 .0, &s1, r1.0, r1.1);
            let (a2, b2) = around(&inc.0 .1, &s2, r2.0, r2.1);
            let h1 = linspace(&a1, &b1, self.grid.refine);
            let h2 = linspace(&a2, &b2, self.grid.refine);
            s1 = step(&h1);
            s2 = step(&h2);
            if let Some(c) = best(pairs(&h1, &h2).into_iter().map(|p| {
                let v = self.eval(&p.0, &p.1);
                (p, v)
            })) {
                if c.1 < inc.1 {
                    inc = c;
                }
            }
        }
        Some(inc)
    }
}

/// `zeta2` candidates `1 + eps * 1.1^j` (rounded up to a dyadic grid) below the
/// cap. The lattice does not depend on the cap, so raising the cap only adds
/// candidates and can never make the optimum worse.
fn geometric_lattice(eps: &Rational, cap: &Rational) -> Vec<Rational> {
    let scale: BigInt = BigInt::one() << 20;
    let mut out: Vec<Rational> = Vec::new();
    let mut x = to_f64(eps);
    loop {
        let raw = Rational::one() + Rational::from_integer(BigInt::from((x * (1u64 << 20) as f64).ceil() as u64)) / Rational::from_integer(scale.clone());
        if &raw > cap {
            break;
        }
        if out.last() != Some(&raw) {
            out.push(raw);
        }
        x *= 1.1;
    }
    out
}

/// Best grid point for `delta_N` on the admissible rectangle
/// `[r1 (or r1 + eps), 1 - eps] x [1 + eps, r2 (or r2 - eps, or the cap)]`.
pub fn optimize_zeta(model: &AnnulusModel, n: u64, eps: &Rational, grid: &GridSpec) -> Result<ZetaChoice> {
    if !eps.is_positive() {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    let one = Rational::one();
    let lo1 = inner_limit(&model.minus, eps);
    let hi1 = &one - eps;
    let lo2 = &one + eps;
    let hi2 = outer_limit(&model.plus, eps, &grid.cap);
    if lo1 > hi1 || hi2.as_ref().is_some_and(|h| h < &lo2) {
        return Err(Error::Inadmissible("the search rectangle is empty".into()));
    }
    let search = Search { model, n, grid };
    let found = match &hi2 {
        Some(hi2) => search.rectangle((&lo1, &hi1), (&lo2, hi2)).map(|(p, _)| p),
        None => {
            let lattice = geometric_lattice(eps, &grid.cap);
            let mut inc: Option<((Rational, Rational), f64)> = None;
            for z2 in lattice {
                if let Some((z1, v)) = search.line(&lo1, &hi1, &z2) {
                    if inc.as_ref().is_none_or(|(_, b)| v < *b) {
                        inc = Some(((z1, z2), v));
                    }
                }
            }
            inc.map(|(p, _)| p)
        }
    };
    let (zeta1, zeta2) = found.ok_or_else(|| Error::Inadmissible("no admissible grid point".into()))?;
    let ctx = BoundContext { zeta1: zeta1.clone(), zeta2: zeta2.clone(), epsilon: eps.clone() };
    let delta = delta_n_with_tolerance(model, n, &ctx, &default_tolerance())?;
    Ok(ZetaChoice { zeta1, zeta2, delta })
}
