//! The Catalan bound for `B_d*` and its extremal forms `q_d`.

use std::f64::consts::PI;

use num_complex::Complex;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cones::is_convex_bivariate;
use crate::error::Result;
use crate::form::Form;
use crate::report::{Check, Report};
use crate::scalar::{binomial, factorial, Scalar};
use crate::Rational;

use super::catalan;
use super::dual::{radial, re_power};

/// Both sides of
/// `catalan(d)(x²+y²)^d − Re(x+iy)^{2d}
///  = (4^d/2d) Σ_{k<d} (−s_k x + c_k y)² (c_k x + s_k y)^{2d−2}`
/// with `(c_k, s_k) = (cos, sin)(kπ/d)`.
pub fn prop_identity_sides(d: u32, x: f64, y: f64) -> (f64, f64) {
    let k2 = 2 * d as i32;
    let lhs = catalan(d) as f64 * (x * x + y * y).powi(d as i32) - Complex::new(x, y).powi(k2).re;
    let mut sum = 0.0;
    for k in 0..d {
        let (s, c) = (k as f64 * PI / d as f64).sin_cos();
        sum += (-s * x + c * y).powi(2) * (c * x + s * y).powi(k2 - 2);
    }
    (lhs, 4f64.powi(d as i32) / (2 * d) as f64 * sum)
}

/// `Σ_{j<d} sin²(jπ/d − θ) cos^{2d−2}(jπ/d − θ)`
pub fn trig_sum(d: u32, theta: f64) -> f64 {
    (0..d)
        .map(|j| {
            let (s, c) = (j as f64 * PI / d as f64 - theta).sin_cos();
            s * s * c.powi(2 * d as i32 - 2)
        })
        .sum()
}

/// `(2d/4^d)(C(2d−2, d−1)/d − cos 2dθ)`
pub fn trig_sum_closed_form(d: u32, theta: f64) -> f64 {
    let c = binomial::<f64>(2 * d - 2, d - 1) / d as f64;
    (2 * d) as f64 / 4f64.powi(d as i32) * (c - (2.0 * d as f64 * theta).cos())
}

/// Samples the identity at points of the unit disk and the trigonometric
/// sum at random angles.
pub fn verify_prop_complex_cs(d: u32, samples: usize, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_identity: f64 = 0.0;
    let mut worst_trig: f64 = 0.0;
    for _ in 0..samples {
        let r = rng.random::<f64>().sqrt();
        let t = rng.random_range(0.0..2.0 * PI);
        let (lhs, rhs) = prop_identity_sides(d, r * t.cos(), r * t.sin());
        worst_identity = worst_identity.max((lhs - rhs).abs());
        let theta = rng.random_range(0.0..2.0 * PI);
        worst_trig = worst_trig.max((trig_sum(d, theta) - trig_sum_closed_form(d, theta)).abs());
    }
    let mut report = Report::new();
    report.push(Check::within(format!("d={d} sos identity"), worst_identity, 1e-10));
    report.push(Check::within(format!("d={d} trig closed form"), worst_trig, 1e-12));
    report
}

/// `Re(x+iy)^{2d} + (2d−1)(x²+y²)^d`
pub fn build_q_d(d: u32) -> Form<Rational> {
    let k = Rational::from_i64(2 * d as i64 - 1);
    &re_power::<Rational>(d) + &radial::<Rational>(d).scale(&k)
}

/// Convexity of `q_d` by SDP and the exact values that give
/// `Re q_d(z) = catalan(d)·Q_{q_d}(z, z̄)` at `z = e1 + ie2`.
pub fn verify_q_d(d: u32) -> Result<Report> {
    let q = build_q_d(d);
    let mut report = Report::new();
    let verdict = is_convex_bivariate(&q)?;
    report.push(Check::new(format!("q_{d} convex"), verdict.is_certified(), verdict.margin().min(0.0).abs()));

    let z = [Complex::new(Rational::one(), Rational::zero()), Complex::new(Rational::zero(), Rational::one())];
    let value = q.evaluate_complex(&z)?;
    let expected = Rational::from_biguint(&(num_bigint::BigUint::one() << (2 * d - 1)));
    let ok = value.re == expected && value.im.is_zero();
    report.push(Check::new(format!("q_{d}(1, i) = 2^(2d-1)"), ok, (value.re - expected).as_f64().abs()));

    let lap = q.laplacian_power(d)?;
    let expected = Rational::from_i64(2 * d as i64 - 1)
        * Rational::from_biguint(&(num_bigint::BigUint::one() << (2 * d)))
        * factorial::<Rational>(d)
        * factorial::<Rational>(d);
    report.push(Check::new(format!("q_{d} iterated laplacian"), lap == expected, (&lap - &expected).as_f64().abs()));

    let herm = q.hermitian_biform(&z)?;
    let cat = Rational::from_i64(catalan(d) as i64);
    let sat = q.evaluate_complex(&z)?.re - cat * herm;
    report.push(Check::new(format!("q_{d} saturates catalan bound"), sat.is_zero(), sat.as_f64().abs()));
    Ok(report)
}
