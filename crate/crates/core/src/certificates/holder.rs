//! Closed forms for the hyperplane weights.
//!
//! Over positive `a` with `Σ 1/a_i = 1`, `Σ a_i x_i` is minimized at
//! `a_i = (Σ√x_j)/√x_i` with value `(Σ√x_i)²`. Over complex `a` with
//! `1/a + 1/ā = 1`, i.e. `a = 2cos θ e^{iθ}`, `az + āz̄` is maximized at
//! `θ = −arg(z)/2` with value `2(|z| + Re z)`.

use std::f64::consts::PI;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::report::{Check, Report};
use crate::tolerances;

/// `(Σ √x_i)²`
pub fn holder_closed_forms(xs: &[f64]) -> Result<f64> {
    if let Some(&x) = xs.iter().find(|&&x| x < 0.0 || x.is_nan()) {
        return Err(Error::NegativeInput(x));
    }
    let s: f64 = xs.iter().map(|x| x.sqrt()).sum();
    Ok(s * s)
}

/// `2(|z| + Re z)`
pub fn holder_complex(z: Complex<f64>) -> f64 {
    2.0 * (z.norm() + z.re)
}

/// `Σ a_i x_i` at the optimal weights; entries with `x_i = 0` get an
/// infinite weight and contribute `lim √x_i · Σ√x_j = 0`.
fn real_at_optimum(xs: &[f64]) -> f64 {
    let s: f64 = xs.iter().map(|x| x.sqrt()).sum();
    xs.iter().filter(|&&x| x > 0.0).map(|&x| s / x.sqrt() * x).sum()
}

fn complex_weight(theta: f64) -> Complex<f64> {
    Complex::from_polar(2.0 * theta.cos(), theta)
}

/// `az + āz̄ = 2 Re(az)`
fn complex_value(a: Complex<f64>, z: Complex<f64>) -> f64 {
    2.0 * (a * z).re
}

/// Random feasible weights never beat the closed forms and the optimal
/// weights reach them.
pub fn verify_holder(samples: usize, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut real_gap = 0.0f64;
    let mut real_opt = 0.0f64;
    let mut feasibility = 0.0f64;
    let mut complex_gap = 0.0f64;
    let mut complex_opt = 0.0f64;
    for _ in 0..samples {
        let m = rng.random_range(1..=8);
        let xs: Vec<f64> = (0..m).map(|_| if rng.random_bool(0.1) { 0.0 } else { rng.random_range(0.0..4.0) }).collect();
        let closed = holder_closed_forms(&xs).expect("nonnegative");
        let r: Vec<f64> = (0..m).map(|_| rng.random_range(0.01..1.0)).collect();
        let total: f64 = r.iter().sum();
        let a: Vec<f64> = r.iter().map(|x| total / x).collect();
        feasibility = feasibility.max((a.iter().map(|x| 1.0 / x).sum::<f64>() - 1.0).abs());
        let value: f64 = a.iter().zip(&xs).map(|(a, x)| a * x).sum();
        real_gap = real_gap.max(closed - value);
        real_opt = real_opt.max((real_at_optimum(&xs) - closed).abs());

        let z = Complex::from_polar(rng.random_range(0.0..3.0), rng.random_range(-PI..PI));
        let closed = holder_complex(z);
        let theta: f64 = rng.random_range(-PI / 2.0..PI / 2.0);
        let a = complex_weight(theta);
        if theta.cos() > 1e-3 {
            feasibility = feasibility.max((1.0 / a + 1.0 / a.conj() - 1.0).norm());
        }
        complex_gap = complex_gap.max(complex_value(a, z) - closed);
        let best = complex_weight(-z.arg() / 2.0);
        complex_opt = complex_opt.max((complex_value(best, z) - closed).abs());
    }
    let mut report = Report::new();
    report.push(Check::within("weights feasible", feasibility, tolerances::SLACK));
    report.push(Check::within("real: random weights at or above closed form", real_gap.max(0.0), tolerances::SLACK));
    report.push(Check::within("real: optimal weights reach closed form", real_opt, tolerances::SLACK));
    report.push(Check::within("complex: random weights at or below closed form", complex_gap.max(0.0), tolerances::SLACK));
    report.push(Check::within("complex: optimal weight reaches closed form", complex_opt, tolerances::SLACK));
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(holder_closed_forms(&[1.0; 7]).unwrap(), 49.0);
        assert_eq!(holder_complex(Complex::new(1.0, 0.0)), 4.0);
        assert_eq!(holder_complex(Complex::new(0.0, 1.0)), 2.0);
        assert!(matches!(holder_closed_forms(&[1.0, -0.5]), Err(Error::NegativeInput(_))));
        assert_eq!(real_at_optimum(&[0.0, 4.0]), 4.0);
    }

    #[test]
    fn z_equal_i_by_scan() {
        let z = Complex::new(0.0, 1.0);
        let best = (0..20000)
            .map(|k| complex_value(complex_weight(-PI / 2.0 + PI * k as f64 / 20000.0), z))
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((best - 2.0).abs() < 1e-6);
    }

    #[test]
    fn battery() {
        let r = verify_holder(500, 1);
        assert!(r.all_pass(), "{r:?}");
    }
}
