//! Deterministic sphere sampling of the smallest Hessian eigenvalue.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::form::Form;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub min_eig: f64,
    pub argmin: Vec<f64>,
    /// Grid index of `argmin`.
    pub index: usize,
}

const PRIMES: [u32; 24] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
];

fn radical_inverse(mut i: u64, base: u32) -> f64 {
    let b = base as u64;
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while i > 0 {
        out += f * (i % b) as f64;
        i /= b;
        f *= inv;
    }
    out
}

/// Point `index` of a `count`-point grid on the unit sphere in `R^n`.
///
/// `n = 2` uses equally spaced angles; higher dimensions push a Halton
/// sequence through Box-Muller and normalize.
pub fn sphere_point(n: usize, index: usize, count: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![1.0],
        2 => {
            let t = 2.0 * std::f64::consts::PI * index as f64 / count.max(1) as f64;
            vec![t.cos(), t.sin()]
        }
        _ => {
            assert!(2 * n <= PRIMES.len(), "sphere grid supports n ≤ {}", PRIMES.len() / 2);
            let k = index as u64 + 1;
            let mut v: Vec<f64> = (0..n)
                .map(|i| {
                    let u1 = radical_inverse(k, PRIMES[2 * i]).max(f64::MIN_POSITIVE);
                    let u2 = radical_inverse(k, PRIMES[2 * i + 1]);
                    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
                })
                .collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                v[0] = 1.0;
            } else {
                v.iter_mut().for_each(|x| *x /= norm);
            }
            v
        }
    }
}

pub fn sphere_points(n: usize, count: usize) -> Vec<Vec<f64>> {
    (0..count).map(|i| sphere_point(n, i, count)).collect()
}

/// Minimum Hessian eigenvalue over `grid` sphere points.
///
/// A value below `−1e−6` certifies non-convexity; a nonnegative value is
/// only evidence when `n > 2`. Ties resolve to the lowest grid index, so the
/// result does not depend on thread scheduling.
pub fn convexity_scan<S: Scalar>(p: &Form<S>, grid: usize) -> ScanResult {
    let p = p.to_f64();
    let n = p.n();
    let h = p.hessian_forms();
    let eval = |i: usize| {
        let x = sphere_point(n, i, grid);
        let m = DMatrix::from_fn(n, n, |a, b| h[a][b].evaluate(&x).expect("matching length"));
        let lam = nalgebra::SymmetricEigen::new(m).eigenvalues.min();
        (lam, i)
    };
    let (min_eig, index) = (0..grid.max(1))
        .into_par_iter()
        .map(eval)
        .reduce(|| (f64::INFINITY, usize::MAX), |a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
    ScanResult { min_eig, argmin: sphere_point(n, index, grid), index }
}
