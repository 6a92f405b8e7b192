//! Generalized Cauchy-Schwarz constants `A_d*` and `B_d*`.
//!
//! For a convex form `p` of degree `2d`:
//!
//! * `Q_p(x, y) ≤ A_d* √(p(x) p(y))` for real `x`, `y`;
//! * `|p(z)| ≤ B_d* Q_p(z, z̄)` for complex `z`.
//!
//! [`compute_a_star`] and [`compute_b_star`] get the constants from an SDP
//! over sos-convex bivariate forms. The rest of the module checks the known
//! closed forms: `A_1* = A_2* = A_3* = 1` through exact operator identities,
//! `B_d*` equal to the Catalan number with the extremal forms `q_d`, a cubic
//! for `A_4*`, and explicit forms showing `A_d* > 1` for even `d ≥ 4`.

mod complex;
mod constants;
mod dual;
mod even;
mod property;

use num_complex::Complex;
use num_traits::ToPrimitive;

use crate::scalar::binomial_big;

pub use complex::{build_q_d, prop_identity_sides, trig_sum, trig_sum_closed_form, verify_prop_complex_cs, verify_q_d};
pub use constants::{compute, compute_a_star, compute_b_star, GcsReport, Which};
pub use dual::{
    verify_exact_decompositions, DualElement, DualKind, Generator, OperatorDecomposition,
};
pub use even::{alpha_bounds, build_p_d_even, even_q, even_s, AlphaBounds, EvenWitness};
pub use property::{gcs_at, gcs_property_check, GcsSample};

/// `C(2(d−1), d−1)/d`, computed exactly.
///
/// # Panics
/// If the result does not fit in a `u64` (`d > 35`) or `d = 0`.
pub fn catalan(d: u32) -> u64 {
    assert!(d >= 1, "catalan(d) needs d ≥ 1");
    let c = binomial_big(2 * (d - 1), d - 1) / d;
    c.to_u64().expect("catalan number fits in u64")
}

/// Coefficients `[c0, c1, c2, 1]` of `t³ − 33/35 t² − 17/245 t + 13/42875`.
pub const A4_MINPOLY: [f64; 4] = [13.0 / 42875.0, -17.0 / 245.0, -33.0 / 35.0, 1.0];

fn minpoly(t: f64) -> f64 {
    A4_MINPOLY.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

/// `A_4*` from Cardano's formula with `ω = 14336 + 14336√3/9 · i`:
/// `ω^{1/3}/70 + (128/15) ω^{−1/3} + 11/35`, principal branch.
pub fn a4_closed_form() -> f64 {
    cardano().re
}

fn cardano() -> Complex<f64> {
    let omega = Complex::new(14336.0, 14336.0 * 3f64.sqrt() / 9.0);
    let root = omega.powf(1.0 / 3.0);
    root / 70.0 + root.inv() * (128.0 / 15.0) + Complex::new(11.0 / 35.0, 0.0)
}

/// Root of the cubic in `[1, 1.05]` by bisection.
pub fn a4_bisection() -> f64 {
    let (mut lo, mut hi) = (1.0f64, 1.05f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if minpoly(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct A4Check {
    /// `|m(value)|`
    pub residual: f64,
    pub closed_form: f64,
    /// Imaginary part left over by the principal cube root.
    pub closed_form_imag: f64,
    /// `|closed form − bisection root|`
    pub closed_form_vs_root: f64,
    /// `|value − closed form|`
    pub value_vs_closed_form: f64,
}

impl A4Check {
    /// `|m(value)| ≤ 1e−6` and the closed form matches the cubic's root
    /// within `1e−8`.
    pub fn pass(&self) -> bool {
        self.residual <= 1e-6 && self.closed_form_vs_root <= 1e-8 && self.closed_form_imag.abs() < 1e-10
    }
}

pub fn verify_a4_minpoly(value: f64) -> A4Check {
    let v = cardano();
    A4Check {
        residual: minpoly(value).abs(),
        closed_form: v.re,
        closed_form_imag: v.im,
        closed_form_vs_root: (v.re - a4_bisection()).abs(),
        value_vs_closed_form: (value - v.re).abs(),
    }
}
