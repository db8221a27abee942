//! Toeplitz-kernel slices, used as an independent check on computed indices.
//!
//! For a factorisation with indices `r1 <= r2`, the polynomial vectors `phi`
//! with `a * phi` free of powers above `k` are exactly `a_plus^-1 chi` with
//! `deg chi_i <= k - r_i`, so their dimension is `sum_i max(0, k - r_i + 1)`.

use num_traits::Zero;

use crate::arith::GaussianRational;
use crate::laurent::{monomial_winding, LaurentMatrix2, LaurentScalar};

#[derive(Clone, Debug)]
pub struct KernelSlice {
    pub level: i64,
    pub degree_cap: i64,
    pub basis: Vec<[LaurentScalar; 2]>,
}

impl KernelSlice {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// Null space basis of a dense matrix over Q(i), by reduction to row echelon form.
fn null_space(mut rows: Vec<Vec<GaussianRational>>, ncols: usize) -> Vec<Vec<GaussianRational>> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].inv().expect("pivot is nonzero");
        for x in rows[r].iter_mut().skip(col) {
            *x = &*x * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![GaussianRational::zero(); ncols];
            v[fc] = GaussianRational::from(1);
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -&rows[row][fc];
            }
            v
        })
        .collect()
}

/// Polynomial vectors of degree `<= d` whose image under `a` has no power in `(k, pmax(a) + d]`.
pub fn kernel_slice(a: &LaurentMatrix2, k: i64, d: i64) -> KernelSlice {
    let (lo, hi) = a.support().unwrap_or((0, 0));
    let ncols = 2 * (d + 1) as usize;
    let mut rows = Vec::new();
    for m in (k + 1)..=(hi + d) {
        for i in 0..2 {
            let mut row = vec![GaussianRational::zero(); ncols];
            // (a phi)_m = sum_s A_{m-s} phi_s
            for s in (m - hi).max(0)..=(m - lo).min(d) {
                for j in 0..2 {
                    row[2 * s as usize + j] = a.entries[i][j].coeff(m - s);
                }
            }
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    let basis = null_space(rows, ncols)
        .into_iter()
        .map(|v| {
            let comp = |j: usize| LaurentScalar::from_coeffs(0, (0..=d as usize).map(|s| v[2 * s + j].clone()).collect());
            [comp(0), comp(1)]
        })
        .collect();
    KernelSlice { level: k, degree_cap: d, basis }
}

/// Kernel dimension at level `k` with an adaptive degree cap: start at
/// `p + q + |k|` and double until two consecutive caps agree.
pub fn stable_kernel_dimension(a: &LaurentMatrix2, k: i64) -> usize {
    let (lo, hi) = a.support().unwrap_or((0, 0));
    let width = hi - lo.min(0);
    let theta = monomial_winding(&a.det()).map_or(0, |(_, th)| th);
    let cap = 8 * (width + theta.abs() + 1);
    let mut d = (width + k.abs()).max(1);
    let mut dim = kernel_slice(a, k, d).dimension();
    while d < cap {
        let next = (2 * d).min(cap);
        let dim_next = kernel_slice(a, k, next).dimension();
        if dim_next == dim {
            break;
        }
        d = next;
        dim = dim_next;
    }
    dim
}

pub fn index_dimension_profile(a: &LaurentMatrix2, k_from: i64, k_to: i64) -> Vec<(i64, usize)> {
    (k_from..=k_to).map(|k| (k, stable_kernel_dimension(a, k))).collect()
}

/// `sum_i max(0, k - r_i + 1)`.
pub fn expected_dimension(indices: (i64, i64), k: i64) -> usize {
    ((k - indices.0 + 1).max(0) + (k - indices.1 + 1).max(0)) as usize
}
